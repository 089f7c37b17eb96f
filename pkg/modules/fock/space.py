"""
Регистр бозонных мод с усечением по каждой моде.

Порядок индексов: мультииндекс (n_1, ..., n_M) переводится в плоский индекс
построчно (row-major) в объявленном порядке мод, т.е. последняя мода меняется
быстрее всех. Это совпадает с порядком np.kron(A_1, ..., A_M).
"""
from dataclasses import dataclass, field
from string import ascii_lowercase
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from modules.core.errors import InvalidModeError

ModeIndex = Union[int, str]


def _default_names(count: int) -> Tuple[str, ...]:
    return tuple(ascii_lowercase[i] for i in range(count))


@dataclass(frozen=True)
class FockSpace:
    """Усечённое пространство Фока нескольких мод."""

    mode_dims: Tuple[int, ...]
    mode_names: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        dims = tuple(int(d) for d in self.mode_dims)
        if not dims:
            raise InvalidModeError("Пространство должно содержать хотя бы одну моду")
        if any(d < 1 for d in dims):
            raise InvalidModeError(f"Размерности мод должны быть >= 1: {dims}")
        names = tuple(self.mode_names) or _default_names(len(dims))
        if len(names) != len(dims):
            raise InvalidModeError(
                f"Число имён мод ({len(names)}) не совпадает с числом размерностей ({len(dims)})"
            )
        if len(set(names)) != len(names):
            raise InvalidModeError(f"Имена мод повторяются: {names}")
        object.__setattr__(self, "mode_dims", dims)
        object.__setattr__(self, "mode_names", names)

    @property
    def num_modes(self) -> int:
        return len(self.mode_dims)

    @property
    def dim(self) -> int:
        """Полная размерность (произведение размерностей мод)."""
        return int(np.prod(self.mode_dims, dtype=np.int64))

    def position(self, mode: ModeIndex) -> int:
        """Возвращает позицию моды по индексу или имени."""
        if isinstance(mode, (int, np.integer)) and not isinstance(mode, bool):
            pos = int(mode)
            if not 0 <= pos < self.num_modes:
                raise InvalidModeError(
                    f"Индекс моды {pos} вне диапазона 0..{self.num_modes - 1}"
                )
            return pos
        if isinstance(mode, str):
            try:
                return self.mode_names.index(mode)
            except ValueError:
                raise InvalidModeError(
                    f"Мода '{mode}' не объявлена; доступны: {', '.join(self.mode_names)}"
                ) from None
        raise InvalidModeError(f"Неподдерживаемый тип индекса моды: {mode!r}")

    def positions(self, modes: Iterable[ModeIndex]) -> List[int]:
        """Позиции набора мод в объявленном порядке, без повторов."""
        result = sorted({self.position(m) for m in modes})
        return result

    def flat_index(self, occupations: Sequence[int]) -> int:
        """Мультииндекс -> плоский индекс."""
        if len(occupations) != self.num_modes:
            raise InvalidModeError(
                f"Ожидалось {self.num_modes} чисел заполнения, получено {len(occupations)}"
            )
        for n, d in zip(occupations, self.mode_dims):
            if not 0 <= int(n) < d:
                raise InvalidModeError(f"Число заполнения {n} вне усечения {d}")
        return int(np.ravel_multi_index(tuple(int(n) for n in occupations), self.mode_dims))

    def multi_index(self, flat: int) -> Tuple[int, ...]:
        """Плоский индекс -> мультииндекс."""
        if not 0 <= int(flat) < self.dim:
            raise InvalidModeError(f"Плоский индекс {flat} вне 0..{self.dim - 1}")
        return tuple(int(n) for n in np.unravel_index(int(flat), self.mode_dims))

    def occupation_table(self) -> np.ndarray:
        """Матрица (num_modes, dim) чисел заполнения всех базисных состояний."""
        grids = np.indices(self.mode_dims).reshape(self.num_modes, -1)
        return grids.astype(np.int64)

    def subspace(self, keep: Iterable[ModeIndex]) -> "FockSpace":
        """Пространство, состоящее только из выбранных мод (в объявленном порядке)."""
        pos = self.positions(keep)
        if not pos:
            raise InvalidModeError("Набор сохраняемых мод пуст")
        return FockSpace(
            tuple(self.mode_dims[p] for p in pos),
            tuple(self.mode_names[p] for p in pos),
        )

    def with_dims(self, dims: Sequence[int]) -> "FockSpace":
        return FockSpace(tuple(dims), self.mode_names)

    def enlarged(self, increment: int) -> "FockSpace":
        """Пространство с размерностями, увеличенными на increment (проверка сходимости)."""
        return self.with_dims(tuple(d + increment for d in self.mode_dims))

    def __str__(self) -> str:
        parts = ", ".join(f"{n}:{d}" for n, d in zip(self.mode_names, self.mode_dims))
        return f"FockSpace({parts})"
