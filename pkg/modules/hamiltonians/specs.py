"""
Декларативное описание гамильтонианов и диссипации.

Гамильтониан задаётся набором слагаемых HamiltonianTerm на именованных
модах. Каждое слагаемое - одночлен из операторов рождения и уничтожения
с вещественной константой связи плюс эрмитово сопряжённое, либо
(для свободного движения) оператор числа квантов.
"""
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

from modules.core.errors import ConfigError

Powers = Tuple[Tuple[str, int], ...]

KINDS = (
    "degenerate_trilinear",
    "aux_linear",
    "higher_order",
    "nondegenerate",
    "nondegenerate_aux",
    "multi_shared_b",
    "multi_shared_a",
    "free_motion",
)


@dataclass(frozen=True)
class HamiltonianTerm:
    """
    coupling · (Π k†^p · Π k^q + h.c.); при number=True - coupling · k†k.
    """

    coupling: float
    raising: Powers = ()
    lowering: Powers = ()
    number: bool = False

    def __post_init__(self):
        if isinstance(self.coupling, complex):
            raise ConfigError(f"Константа связи должна быть вещественной: {self.coupling}")
        object.__setattr__(self, "coupling", float(self.coupling))
        if self.number and (len(self.raising) != 1 or self.lowering):
            raise ConfigError("Слагаемое свободного движения задаётся одной модой")
        for _, power in self.raising + self.lowering:
            if int(power) != power or power < 1:
                raise ConfigError(f"Степень оператора должна быть целой >= 1: {power}")

    @classmethod
    def monomial(cls, coupling: float, raising: Dict[str, int], lowering: Dict[str, int]) -> "HamiltonianTerm":
        return cls(coupling, tuple(raising.items()), tuple(lowering.items()))

    @classmethod
    def number_term(cls, frequency: float, mode: str) -> "HamiltonianTerm":
        return cls(frequency, ((mode, 1),), (), number=True)

    @property
    def modes(self) -> Tuple[str, ...]:
        seen = []
        for mode, _ in self.raising + self.lowering:
            if mode not in seen:
                seen.append(mode)
        return tuple(seen)

    def exponent_change(self, names: Tuple[str, ...]) -> Tuple[int, ...]:
        """Изменение чисел заполнения одночленом (0 для слагаемого числа квантов)."""
        if self.number:
            return tuple(0 for _ in names)
        change = {name: 0 for name in names}
        for mode, power in self.raising:
            change[mode] += power
        for mode, power in self.lowering:
            change[mode] -= power
        return tuple(change[name] for name in names)

    def max_power(self) -> int:
        return max((p for _, p in self.raising + self.lowering), default=1)


@dataclass(frozen=True)
class HamiltonianSpec:
    """
    Гамильтониан как сумма слагаемых. Константы связи в единицах Ω_T = 1.
    """

    kind: str
    terms: Tuple[HamiltonianTerm, ...]
    parameters: Tuple[Tuple[str, float], ...] = field(default=())

    @property
    def modes(self) -> Tuple[str, ...]:
        """Моды, на которые действует гамильтониан, в порядке появления."""
        seen = []
        for term in self.terms:
            for mode in term.modes:
                if mode not in seen:
                    seen.append(mode)
        return tuple(seen)

    @property
    def interaction_terms(self) -> Tuple[HamiltonianTerm, ...]:
        return tuple(t for t in self.terms if not t.number)

    def parameter(self, name: str, default: Optional[float] = None) -> Optional[float]:
        return dict(self.parameters).get(name, default)

    def scaled(self, factor: float) -> "HamiltonianSpec":
        terms = tuple(
            HamiltonianTerm(t.coupling * factor, t.raising, t.lowering, t.number) for t in self.terms
        )
        return HamiltonianSpec(self.kind, terms, self.parameters)

    @classmethod
    def compose(cls, *specs: "HamiltonianSpec") -> "HamiltonianSpec":
        """Сумма гамильтонианов на общем пространстве."""
        if not specs:
            raise ConfigError("Нечего складывать: список гамильтонианов пуст")
        terms = tuple(t for s in specs for t in s.terms)
        kind = "+".join(s.kind for s in specs)
        parameters = tuple(p for s in specs for p in s.parameters)
        return cls(kind, terms, parameters)

    @classmethod
    def degenerate_trilinear(cls, omega_t: float = 1.0, pump: str = "a", signal: str = "b") -> "HamiltonianSpec":
        """Ω_T (a b†² + a† b²)."""
        term = HamiltonianTerm.monomial(omega_t, {pump: 1}, {signal: 2})
        return cls("degenerate_trilinear", (term,), (("omega_t", float(omega_t)),))

    @classmethod
    def linear_exchange(cls, g: float, source: str = "b", target: str = "c") -> "HamiltonianSpec":
        """g (b c† + b† c)."""
        term = HamiltonianTerm.monomial(g, {source: 1}, {target: 1})
        return cls("linear_exchange", (term,), (("g", float(g)),))

    @classmethod
    def aux_linear(cls, g: float = 1.0, omega_t: float = 1.0, order: int = 2) -> "HamiltonianSpec":
        """
        Вырожденное взаимодействие порядка order (2 - трилинейное) плюс
        связь b со вспомогательной модой c.
        """
        core = cls.degenerate_trilinear(omega_t) if order == 2 else cls.higher_order(order, omega_t)
        spec = cls.compose(core, cls.linear_exchange(g, "b", "c"))
        return cls("aux_linear", spec.terms, spec.parameters)

    @classmethod
    def higher_order(cls, order: int, omega_t: float = 1.0) -> "HamiltonianSpec":
        """Ω_T (a† b^N + a b†^N)."""
        if int(order) != order or order < 2:
            raise ConfigError(f"Порядок нелинейности N должен быть целым >= 2: {order}")
        term = HamiltonianTerm.monomial(omega_t, {"a": 1}, {"b": int(order)})
        return cls("higher_order", (term,), (("N", float(order)), ("omega_t", float(omega_t))))

    @classmethod
    def nondegenerate(cls, omega: float = 1.0) -> "HamiltonianSpec":
        """Ω (a† b c + a b† c†)."""
        term = HamiltonianTerm.monomial(omega, {"a": 1}, {"b": 1, "c": 1})
        return cls("nondegenerate", (term,), (("omega", float(omega)),))

    @classmethod
    def nondegenerate_aux(cls, omega: float = 1.0, g: float = 1.0, aux: str = "d") -> "HamiltonianSpec":
        """Ω (a† b c + a b† c†) + g (b d† + b† d): невырожденное взаимодействие и связь b с модой aux."""
        spec = cls.compose(cls.nondegenerate(omega), cls.linear_exchange(g, "b", aux))
        return cls("nondegenerate_aux", spec.terms, spec.parameters)

    @classmethod
    def multi_shared_b(cls, omega_1: float = 1.0, omega_2: float = 1.0) -> "HamiltonianSpec":
        """Ω₁ (a b†² + a† b²) + Ω₂ (c b†² + c† b²): общая мода b."""
        terms = (
            HamiltonianTerm.monomial(omega_1, {"a": 1}, {"b": 2}),
            HamiltonianTerm.monomial(omega_2, {"c": 1}, {"b": 2}),
        )
        return cls("multi_shared_b", terms, (("omega_1", float(omega_1)), ("omega_2", float(omega_2))))

    @classmethod
    def multi_shared_a(cls, omega_1: float = 1.0, omega_2: float = 1.0) -> "HamiltonianSpec":
        """Ω₁ (a b†² + a† b²) + Ω₂ (a c†² + a† c²): общая мода a."""
        terms = (
            HamiltonianTerm.monomial(omega_1, {"a": 1}, {"b": 2}),
            HamiltonianTerm.monomial(omega_2, {"a": 1}, {"c": 2}),
        )
        return cls("multi_shared_a", terms, (("omega_1", float(omega_1)), ("omega_2", float(omega_2))))

    @classmethod
    def free_motion(cls, omega_b: float, modes: Iterable[str] = ("a", "b", "c")) -> "HamiltonianSpec":
        """Σ ω_k k†k с ω_a = 2ω_b, для остальных мод ω_k = ω_b."""
        terms = tuple(
            HamiltonianTerm.number_term((2.0 if mode == "a" else 1.0) * omega_b, mode) for mode in modes
        )
        return cls("free_motion", terms, (("omega_b", float(omega_b)),))


@dataclass(frozen=True)
class LindbladSpec:
    """
    Параметры марковской бани: скорости затухания мод (в единицах Ω_T)
    и тепловая заселённость бани n̄_th.
    """

    rates: Tuple[Tuple[str, float], ...] = ()
    nbar_th: float = 0.0

    def __post_init__(self):
        rates = tuple((str(m), float(r)) for m, r in (self.rates.items() if isinstance(self.rates, dict) else self.rates))
        for mode, rate in rates:
            if not rate >= 0:
                raise ConfigError(f"Скорость затухания моды '{mode}' должна быть >= 0: {rate}")
        if not self.nbar_th >= 0:
            raise ConfigError(f"Заселённость бани должна быть >= 0: {self.nbar_th}")
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "nbar_th", float(self.nbar_th))

    @classmethod
    def uniform(cls, rate: float, nbar_th: float = 0.0, modes: Iterable[str] = ("a", "b", "c")) -> "LindbladSpec":
        """Одинаковая скорость затухания для всех перечисленных мод."""
        return cls(tuple((m, rate) for m in modes), nbar_th)

    @property
    def is_closed(self) -> bool:
        return all(rate == 0 for _, rate in self.rates)
