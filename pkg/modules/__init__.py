"""Симулятор расщепления тепловых квантов трилинейными гамильтонианами."""

__version__ = "0.1.0"
