"""Cone supports S, T of the completed series rings and their gradings."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Literal, Optional, Sequence, Tuple

from flopdt.errors import ConfigurationError
from flopdt.lattice.classes import FlopMode, Key, flop_beta
from flopdt.lattice.model import FlopModel, Vector, dot

SupportKind = Literal["S_X", "T_X", "pS", "pT", "custom"]


@dataclass(frozen=True)
class Grading:
    """Integer linear form g(n, beta) = c_n * n + c_beta . beta."""

    c_n: int
    c_beta: Vector

    def __call__(self, n: int, beta: Sequence[int]) -> int:
        return self.c_n * n + dot(self.c_beta, beta)

    def twisted(self, mode: FlopMode, model: FlopModel) -> "Grading":
        return Grading(self.c_n, flop_beta(self.c_beta, mode, model))


@dataclass(frozen=True, eq=False)
class SupportSet:
    """One of S_X, T_X, pS, pT or a custom graded cone.

    T-type sets carry gradings: linear forms that are non-negative on the
    set. Bounding all of them cuts out a down-set, so truncated products are
    exact. S_X and pS are membership-only.
    """

    kind: SupportKind
    model: FlopModel
    p: Optional[int] = None
    custom_gradings: Tuple[Grading, ...] = field(default_factory=tuple)
    twist: Optional[FlopMode] = None

    def __post_init__(self) -> None:
        if self.kind in ("pS", "pT") and self.p not in (0, -1):
            raise ConfigurationError(
                f"Support {self.kind} needs p in {{0, -1}}, got {self.p!r}"
            )
        if self.kind == "custom" and not self.custom_gradings:
            raise ConfigurationError("Custom supports need at least one grading")

    # -- constructors ------------------------------------------------------

    @classmethod
    def t_x(cls, model: FlopModel) -> "SupportSet":
        return cls("T_X", model)

    @classmethod
    def s_x(cls, model: FlopModel) -> "SupportSet":
        return cls("S_X", model)

    @classmethod
    def p_t(cls, model: FlopModel, p: int = 0) -> "SupportSet":
        return cls("pT", model, p=p)

    @classmethod
    def p_s(cls, model: FlopModel, p: int = 0) -> "SupportSet":
        return cls("pS", model, p=p)

    @classmethod
    def custom(
        cls, model: FlopModel, gradings: Sequence[Tuple[int, Sequence[int]]]
    ) -> "SupportSet":
        return cls(
            "custom",
            model,
            custom_gradings=tuple(
                Grading(int(c_n), model.check_beta(c_beta)) for c_n, c_beta in gradings
            ),
        )

    # -- identity ----------------------------------------------------------

    @property
    def label(self) -> str:
        base = self.kind
        if self.kind in ("pS", "pT"):
            base = f"{self.p}{self.kind[1:]}"
        if self.twist:
            base = f"{self.twist}({base})"
        return base

    def signature(self) -> tuple:
        return (
            self.kind,
            self.model.name,
            self.p,
            self.custom_gradings,
            self.twist,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SupportSet):
            return NotImplemented
        return self.signature() == other.signature() and self.model == other.model

    def __hash__(self) -> int:
        return hash(self.signature())

    # -- membership --------------------------------------------------------

    def _untwist(self, n: int, beta: Sequence[int]) -> Key:
        vector = self.model.check_beta(beta)
        if self.twist is None:
            return n, vector
        return n, flop_beta(vector, self.twist, self.model)

    def contains(self, n: int, beta: Sequence[int]) -> bool:
        n, beta = self._untwist(n, beta)
        model = self.model
        if self.kind == "T_X":
            return n >= 0 and model.is_contracted(beta) and model.is_effective(beta)
        if self.kind == "S_X":
            return model.is_effective(beta) and n >= model.n_min(beta)
        if self.kind == "pT":
            return (
                model.is_effective_on_y(beta)
                and n >= 0
                and model.chi_pairing(n, beta, self.p) >= 0
            )
        if self.kind == "pS":
            pushed = model.pushforward(beta)
            scaled = tuple(model.nc_rank * c for c in pushed)
            return (
                model.is_effective_on_y(beta)
                and n >= model.n_min(pushed)
                and model.chi_pairing(n, beta, self.p) >= model.n_min(scaled)
            )
        return all(g(n, beta) >= 0 for g in self.custom_gradings)

    # -- gradings ----------------------------------------------------------

    @property
    def is_graded(self) -> bool:
        return self.kind in ("T_X", "pT", "custom")

    def gradings(self) -> Tuple[Grading, ...]:
        model = self.model
        zero = model.zero
        if self.kind == "T_X":
            base: Tuple[Grading, ...] = (
                Grading(1, zero),
                Grading(0, tuple(model.h_pairing)),
            )
        elif self.kind == "pT":
            sign = 1 if self.p == 0 else -1
            base = (
                Grading(1, zero),
                Grading(model.nc_rank, tuple(sign * c for c in model.l_vector)),
            )
            if model.non_exceptional_coords:
                base = base + (Grading(0, tuple(model.y_pairing)),)
        elif self.kind == "custom":
            base = self.custom_gradings
        else:
            raise ConfigurationError(
                f"Support {self.label} has no non-negative grading; "
                "truncated arithmetic over it would not be exact",
                {"support": self.label},
            )
        if self.twist is None:
            return base
        return tuple(g.twisted(self.twist, model) for g in base)

    def total_grading(self, n: int, beta: Sequence[int]) -> int:
        return sum(g(n, beta) for g in self.gradings())

    # -- derived sets ------------------------------------------------------

    def companion(self) -> "SupportSet":
        """The T-set paired with this set in S + T <= S."""
        if self.kind == "S_X":
            return SupportSet("T_X", self.model, twist=self.twist)
        if self.kind == "pS":
            return SupportSet("pT", self.model, p=self.p, twist=self.twist)
        return self

    def twisted(self, mode: FlopMode) -> "SupportSet":
        """{v : mode(v) in self}; modes are involutions so twists cancel."""
        new_twist: Optional[FlopMode]
        if self.twist is None:
            new_twist = mode
        elif self.twist == mode:
            new_twist = None
        else:
            raise ConfigurationError(
                "Composite flop twists are not supported",
                {"current": self.twist, "requested": mode},
            )
        return SupportSet(
            self.kind, self.model, self.p, self.custom_gradings, new_twist
        )


def support_contains(support: SupportSet, n: int, beta: Sequence[int]) -> bool:
    return support.contains(n, beta)


def decompositions(support: SupportSet, n: int, beta: Sequence[int]) -> List[Tuple[Key, Key]]:
    """Ordered pairs (y, z) of members of an effective-cone set with y + z = (n, beta)."""
    if support.kind not in ("S_X", "T_X") or support.twist is not None:
        raise ConfigurationError(
            f"Decompositions are enumerated for untwisted S_X / T_X only, got {support.label}"
        )
    model = support.model
    target = model.check_beta(beta)
    pairs: List[Tuple[Key, Key]] = []
    for left in model.effective_classes_below(target):
        right = tuple(b - a for a, b in zip(left, target))
        if support.kind == "T_X":
            if not (model.is_contracted(left) and model.is_contracted(right)):
                continue
            low, high = 0, n
        else:
            low, high = model.n_min(left), n - model.n_min(right)
        for n_left in range(low, high + 1):
            y = (n_left, left)
            z = (n - n_left, right)
            if support.contains(*y) and support.contains(*z):
                pairs.append((y, z))
    return pairs
