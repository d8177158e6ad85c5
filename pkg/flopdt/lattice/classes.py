"""Numerical classes (n, beta, r) in Gamma = Z + N_1(X) + Z and their flop images."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd
from typing import Iterator, Literal, Sequence, Tuple

from flopdt.errors import DomainError
from flopdt.lattice.model import FlopModel, Vector

FlopMode = Literal["phi_star", "i_circ_phi_star"]
FLOP_MODES: Tuple[FlopMode, ...] = ("phi_star", "i_circ_phi_star")

Key = Tuple[int, Vector]


@dataclass(frozen=True, slots=True)
class GammaClass:
    """cl(E) = (ch_3, ch_2, ch_0), stored as (n, beta, r)."""

    n: int
    beta: Vector
    r: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "beta", tuple(int(c) for c in self.beta))
        object.__setattr__(self, "r", int(self.r))

    @classmethod
    def of(cls, n: int, beta: Sequence[int], r: int = 0) -> "GammaClass":
        return cls(n, tuple(beta), r)

    @property
    def key(self) -> Key:
        return (self.n, self.beta)

    def is_zero(self) -> bool:
        return self.n == 0 and self.r == 0 and not any(self.beta)

    def __add__(self, other: "GammaClass") -> "GammaClass":
        return GammaClass(
            self.n + other.n,
            tuple(a + b for a, b in zip(self.beta, other.beta)),
            self.r + other.r,
        )

    def __neg__(self) -> "GammaClass":
        return GammaClass(-self.n, tuple(-c for c in self.beta), -self.r)

    def scale(self, k: int) -> "GammaClass":
        return GammaClass(k * self.n, tuple(k * c for c in self.beta), k * self.r)

    def content(self) -> int:
        value = abs(self.n)
        for c in self.beta:
            value = gcd(value, abs(c))
        return gcd(value, abs(self.r))

    def primitive(self) -> Tuple["GammaClass", int]:
        """(v0, k) with v = k * v0 and v0 primitive; the zero class maps to itself."""
        k = self.content()
        if k == 0:
            return self, 0
        return (
            GammaClass(self.n // k, tuple(c // k for c in self.beta), self.r // k),
            k,
        )

    def as_dict(self) -> dict:
        return {"n": self.n, "beta": list(self.beta), "r": self.r}


def filtration_level(v: GammaClass, model: FlopModel) -> int:
    """Level of v in Gamma_0 < Gamma_1 < Gamma_2."""
    if v.r != 0:
        return 2
    if not model.is_contracted(v.beta):
        return 1
    return 0


def is_effective(beta: Sequence[int], model: FlopModel) -> bool:
    return model.is_effective(beta)


def leq(smaller: Sequence[int], larger: Sequence[int], model: FlopModel) -> bool:
    return model.leq(smaller, larger)


def flop_beta(beta: Sequence[int], mode: FlopMode, model: FlopModel) -> Vector:
    exceptional = set(model.exceptional_coords)
    if mode == "phi_star":
        return tuple(-c if i in exceptional else c for i, c in enumerate(beta))
    if mode == "i_circ_phi_star":
        return tuple(c if i in exceptional else -c for i, c in enumerate(beta))
    raise DomainError(f"Unknown flop mode: {mode!r}", {"modes": list(FLOP_MODES)})


def flop_pushforward(v: GammaClass, mode: FlopMode, model: FlopModel) -> GammaClass:
    """Variable change of the transformation formulas; acts on (n, beta) only."""
    if v.r != 0:
        raise DomainError(
            "Flop variable change is defined on rank zero classes only",
            {"class": v.as_dict()},
        )
    return GammaClass(v.n, flop_beta(v.beta, mode, model), 0)


@dataclass(frozen=True, slots=True)
class Box:
    """Truncation window |n| <= n_max, |beta_i| <= m_max."""

    n_max: int
    m_max: int

    def __post_init__(self) -> None:
        if self.n_max < 0 or self.m_max < 0:
            raise DomainError(
                f"Box bounds must be non-negative, got ({self.n_max}, {self.m_max})"
            )

    def contains(self, n: int, beta: Sequence[int]) -> bool:
        return abs(n) <= self.n_max and all(abs(c) <= self.m_max for c in beta)

    def keys(self, model: FlopModel) -> Iterator[Key]:
        span = range(-self.m_max, self.m_max + 1)
        for beta in product(span, repeat=model.rank_n1):
            for n in range(-self.n_max, self.n_max + 1):
                yield n, tuple(beta)

    def contracted_classes(self, model: FlopModel) -> Iterator[GammaClass]:
        """Nonzero classes of Gamma_0 in the box."""
        zero = model.zero
        for n, beta in self.keys(model):
            if model.is_contracted(beta) and (n or beta != zero):
                yield GammaClass(n, beta, 0)

    def as_list(self) -> list:
        return [self.n_max, self.m_max]
