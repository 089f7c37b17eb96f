"""
Тесты дистилляции сжатия по плотностям квадратуры.
"""
import math

import numpy as np
import pytest

from modules.core.errors import GridTooNarrowError, NoDistillableSqueezingError
from modules.distillation import (
    asymptotic_limit,
    nonuniversal_distill,
    universal_distill,
    variance_to_db,
)
from modules.measures import QuadraturePdf, quadrature_pdf

GRID = np.linspace(-10.0, 10.0, 4096)


def gaussian(variance: float, grid: np.ndarray = GRID) -> QuadraturePdf:
    return QuadraturePdf(grid, np.exp(-grid ** 2 / (2 * variance)) / math.sqrt(2 * math.pi * variance))


def mixture() -> QuadraturePdf:
    """Смесь узкой (V = 0.2) и широкой (V = 1) гауссиан: дисперсия выше дробового шума, пик острее."""
    return QuadraturePdf(GRID, 0.5 * gaussian(0.2).density + 0.5 * gaussian(1.0).density)


def test_variance_to_db():
    assert variance_to_db(0.5) == pytest.approx(0.0)
    assert variance_to_db(0.25) == pytest.approx(-3.0103, abs=1e-4)


class TestUniversal:
    def test_gaussian_is_fixed_point(self):
        trace = universal_distill(gaussian(0.3), steps=4)
        assert trace.variances == pytest.approx(np.full(5, 0.3), abs=1e-6)
        assert [s.copies for s in trace.steps] == [1, 2, 4, 8, 16]

    def test_mixture_approaches_asymptotic_limit(self):
        pdf = mixture()
        limit = asymptotic_limit(pdf)
        # P(0) / Σ w_i g_i(0) / V_i для двух гауссиан
        g = [1 / math.sqrt(2 * math.pi * v) for v in (0.2, 1.0)]
        expected = (0.5 * g[0] + 0.5 * g[1]) / (0.5 * g[0] / 0.2 + 0.5 * g[1] / 1.0)
        assert limit == pytest.approx(expected, rel=1e-3)

        trace = universal_distill(pdf, steps=10)
        assert trace.variances[0] == pytest.approx(0.6, abs=1e-6)
        assert np.all(np.diff(trace.variances) < 0)
        assert trace.variances[-1] == pytest.approx(limit, rel=2e-2)
        assert trace.best_variance == trace.variances[-1]

    def test_rows(self):
        rows = universal_distill(gaussian(0.4), steps=1).to_rows()
        assert [r["step"] for r in rows] == [0, 1]
        assert set(rows[0]) == {"step", "copies", "conditioning", "variance", "squeezing_db", "branch", "method"}
        assert rows[1]["method"] == "universal"

    def test_steps_must_be_positive(self):
        with pytest.raises(ValueError):
            universal_distill(gaussian(0.4), steps=0)

    def test_maximum_on_edge(self):
        grid = np.linspace(-1.0, 1.0, 201)
        with pytest.raises(GridTooNarrowError):
            universal_distill(QuadraturePdf(grid, np.exp(grid)), steps=1)


class TestAsymptoticLimit:
    def test_gaussian_limit_is_its_variance(self):
        assert asymptotic_limit(gaussian(0.3)) == pytest.approx(0.3, rel=1e-4)
        assert asymptotic_limit(gaussian(1.5)) == pytest.approx(1.5, rel=1e-4)

    def test_require_squeezing(self):
        assert asymptotic_limit(gaussian(0.3), require_squeezing=True) == pytest.approx(0.3, rel=1e-4)
        with pytest.raises(NoDistillableSqueezingError, match="ниже дробового шума"):
            asymptotic_limit(gaussian(0.7), require_squeezing=True)


class TestNonuniversal:
    def test_never_worse_than_universal(self):
        pdf = mixture()
        universal = universal_distill(pdf, steps=4)
        nonuniversal = nonuniversal_distill(pdf, steps=4)
        assert np.all(nonuniversal.variances <= universal.variances + 1e-12)
        assert nonuniversal.steps[0].variance == universal.steps[0].variance

    def test_gaussian_variance_unchanged(self):
        trace = nonuniversal_distill(gaussian(0.3), steps=2)
        assert trace.variances == pytest.approx(np.full(3, 0.3), abs=1e-3)

    def test_fock_state_conditioning(self, fock_density):
        pdf = quadrature_pdf(fock_density(1, 4), 0.0)
        universal = universal_distill(pdf, steps=3)
        nonuniversal = nonuniversal_distill(pdf, steps=3)
        assert nonuniversal.best_variance <= universal.best_variance + 1e-12
        assert {s.branch for s in nonuniversal.steps[1:]} <= {"universal", "nonuniversal"}
