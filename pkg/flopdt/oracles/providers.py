"""Closed-form N-value providers for the wall-crossing factors."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from fractions import Fraction
from random import Random
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from flopdt.errors import DomainError, ProviderError
from flopdt.lattice import FlopModel, Key, Vector

logger = logging.getLogger(__name__)


def sigma2(n: int) -> int:
    """Sum of d^2 over the divisors d of n."""
    return sum(d * d for d in range(1, n + 1) if n % d == 0)


def point_N(chi: int, n: int) -> Fraction:
    """N_{n,0} = -chi sigma_2(n) / n^2."""
    if n <= 0:
        raise DomainError(f"point_N needs n > 0, got {n}", {"n": n})
    return Fraction(-chi * sigma2(n), n * n)


def conifold_N(n: int, m: int, chi: int = 2) -> Fraction:
    """N_{n, m[C]} for the conifold: 1/m^2 when m divides n, point_N when m = 0."""
    if m == 0:
        if n == 0:
            return Fraction(0)
        return point_N(chi, abs(n))
    if n % m != 0:
        return Fraction(0)
    return Fraction(1, m * m)


class NProvider(ABC):
    """Map (n, beta) -> N_{n,beta}; ``value`` returns None where undefined."""

    name: str

    @abstractmethod
    def value(self, n: int, beta: Vector) -> Optional[Fraction]:
        """Provided invariant, or None when the class is outside the provider's range."""

    def __call__(self, n: int, beta: Sequence[int]) -> Fraction:
        result = self.value(int(n), tuple(int(c) for c in beta))
        if result is None:
            raise ProviderError(
                f"Provider {self.name} has no value for ({n}, {list(beta)})",
                {"provider": self.name, "n": n, "beta": list(beta)},
            )
        return result

    def symmetry_violation(self, keys: Iterable[Key]) -> Optional[Key]:
        """First (n, beta) breaking N(n, b) = N(-n, b) = N(n, -b), if any."""
        for n, beta in keys:
            here = self.value(n, beta)
            if here is None:
                continue
            minus_beta = tuple(-c for c in beta)
            for other in (self.value(-n, beta), self.value(n, minus_beta)):
                if other is not None and other != here:
                    return n, beta
        return None


class ConifoldNProvider(NProvider):
    """Signed invariants of a single (-1,-1) curve plus the point contribution."""

    name = "conifold"

    def __init__(self, model: FlopModel) -> None:
        self.model = model
        self.curve = model.fundamental_cycles[0]

    def multiplicity(self, beta: Vector) -> Optional[int]:
        """m with beta = m C, or None."""
        if not any(beta):
            return 0
        index = next(i for i, c in enumerate(self.curve) if c)
        m, remainder = divmod(beta[index], self.curve[index])
        if remainder or tuple(m * c for c in self.curve) != tuple(beta):
            return None
        return m

    def value(self, n: int, beta: Vector) -> Optional[Fraction]:
        if not self.model.is_contracted(beta):
            return None
        m = self.multiplicity(beta)
        if m is None:
            return Fraction(0)
        return conifold_N(n, m, self.model.euler_char)


class HattedNProvider(NProvider):
    """N-hat = (-1)^(sum of exceptional coordinates - 1) N for unsigned series."""

    def __init__(self, base: NProvider, model: FlopModel) -> None:
        self.base = base
        self.model = model
        self.name = f"{base.name}_hat"

    def value(self, n: int, beta: Vector) -> Optional[Fraction]:
        raw = self.base.value(n, beta)
        if raw is None:
            return None
        degree = sum(beta[i] for i in self.model.exceptional_coords)
        return raw if (degree - 1) % 2 == 0 else -raw


class TableNProvider(NProvider):
    """Explicit table, e.g. a seeded random assignment."""

    def __init__(
        self,
        table: Mapping[Key, object],
        default: Optional[Fraction] = None,
        name: str = "table",
    ) -> None:
        self.table: Dict[Key, Fraction] = {
            (int(n), tuple(int(c) for c in beta)): Fraction(v)  # type: ignore[arg-type]
            for (n, beta), v in table.items()
        }
        self.default = default
        self.name = name

    def value(self, n: int, beta: Vector) -> Optional[Fraction]:
        return self.table.get((n, beta), self.default)


def symmetric_table(values: Mapping[Key, Fraction]) -> Dict[Key, Fraction]:
    """Close a table under (n, b) -> (-n, b) and (n, b) -> (n, -b)."""
    closed: Dict[Key, Fraction] = {}
    for (n, beta), v in values.items():
        minus = tuple(-c for c in beta)
        for key in ((n, beta), (-n, beta), (n, minus), (-n, minus)):
            closed.setdefault(key, v)
    return closed


def provider_keys(n_max: int, m_max: int, model: FlopModel) -> Iterable[Tuple[int, Vector]]:
    curve = model.fundamental_cycles[0]
    for n in range(-n_max, n_max + 1):
        for m in range(-m_max, m_max + 1):
            yield n, tuple(m * c for c in curve)


def random_symmetric_table(
    rng: Random, n_max: int, m_max: int, model: FlopModel, spread: int = 9
) -> Dict[Key, Fraction]:
    """Seeded rational N on n in [1, n_max], beta = m C with |m| <= m_max, symmetric."""
    curve = model.fundamental_cycles[0]
    values: Dict[Key, Fraction] = {}
    for n in range(1, n_max + 1):
        for m in range(0, m_max + 1):
            values[(n, tuple(m * c for c in curve))] = Fraction(
                rng.randint(-spread, spread), rng.randint(1, spread)
            )
    return {k: v for k, v in symmetric_table(values).items() if k[0] > 0}
