"""Geometric model of a flopping contraction, reduced to its numerical data."""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Set, Tuple

from pydantic import (
    AliasChoices,
    BaseModel,
    ConfigDict,
    Field,
    PrivateAttr,
    field_validator,
    model_validator,
)

Vector = Tuple[int, ...]


def dot(left: Sequence[int], right: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(left, right))


def beta_key(beta: Sequence[int]) -> str:
    return ",".join(str(int(c)) for c in beta)


class FlopModel(BaseModel):
    """Numerical data of f: X -> Y used by every series and charge computation.

    Curve classes are integer vectors in a fixed basis of N_1(X); the
    exceptional coordinates span N_1(X/Y), the kernel of f_*.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    name: str = Field(..., description="Registry identifier")
    description: str = Field(default="", description="Human-readable summary")
    rank_n1: int = Field(
        ..., ge=1, validation_alias=AliasChoices("rank_n1", "rank_N1")
    )
    exceptional_coords: List[int] = Field(
        ..., description="Basis indices spanning N_1(X/Y)"
    )
    effective_generators: List[List[int]] = Field(
        ..., description="Integer vectors spanning NE(X)"
    )
    euler_char: int = Field(
        ..., validation_alias=AliasChoices("euler_char", "chi", "chi_X")
    )
    h_pairing: List[int] = Field(
        ..., validation_alias=AliasChoices("h_pairing", "H_pairing")
    )
    y_pairing: List[int] = Field(
        ..., validation_alias=AliasChoices("y_pairing", "Y_pairing")
    )
    nc_rank: int = Field(default=1, ge=1, description="rank r(p) of pE'")
    l_pairing: Optional[List[int]] = Field(
        default=None,
        validation_alias=AliasChoices("l_pairing", "L_pairing"),
        description="c_1(L_X) paired with each basis class; defaults to H",
    )
    fiber_cycles: Optional[List[List[int]]] = Field(
        default=None, description="Fundamental cycles Z_y of singular fibres"
    )
    n_min_table: Dict[str, int] = Field(
        default_factory=dict,
        validation_alias=AliasChoices("n_min_table", "n_min"),
        description="Lower bounds m(beta) keyed by comma-joined beta",
    )
    n_min_quadratic: int = Field(
        default=2, ge=0, description="Fallback m(beta) = -q * |beta|_1^2"
    )

    _effective_cache: Dict[Vector, bool] = PrivateAttr(default_factory=dict)

    @field_validator("exceptional_coords")
    @classmethod
    def validate_exceptional(cls, v: List[int]) -> List[int]:
        if len(set(v)) != len(v):
            raise ValueError(f"Duplicate exceptional coordinates: {v}")
        return sorted(v)

    @model_validator(mode="after")
    def validate_geometry(self) -> "FlopModel":
        rank = self.rank_n1
        for label, vector in (("h_pairing", self.h_pairing), ("y_pairing", self.y_pairing)):
            if len(vector) != rank:
                raise ValueError(f"{label} must have length {rank}, got {len(vector)}")
        if self.l_pairing is not None and len(self.l_pairing) != rank:
            raise ValueError(f"l_pairing must have length {rank}")
        for index in self.exceptional_coords:
            if not 0 <= index < rank:
                raise ValueError(f"Exceptional coordinate {index} out of range")
            if self.y_pairing[index] != 0:
                raise ValueError(
                    f"Exceptional coordinate {index} must pair to 0 under y_pairing"
                )
        if not self.effective_generators:
            raise ValueError("At least one effective generator is required")
        for generator in self.effective_generators:
            if len(generator) != rank:
                raise ValueError(f"Generator {generator} must have length {rank}")
            if not any(generator):
                raise ValueError("Effective generators must be nonzero")
            if self._is_exceptional_vector(generator):
                if dot(self.h_pairing, generator) <= 0:
                    raise ValueError(
                        f"h_pairing must be positive on exceptional generator {generator}"
                    )
            elif dot(self.y_pairing, generator) <= 0:
                raise ValueError(
                    f"y_pairing must be positive on non-exceptional generator {generator}"
                )
        for cycle in self.fiber_cycles or []:
            if len(cycle) != rank or not self._is_exceptional_vector(cycle):
                raise ValueError(f"Fiber cycle {cycle} must be an exceptional class")
        for key, value in self.n_min_table.items():
            parts = [p for p in key.split(",") if p.strip()]
            if len(parts) != rank:
                raise ValueError(f"n_min key {key!r} must have {rank} entries")
            if all(int(p) == 0 for p in parts) and value != 0:
                raise ValueError("n_min(0) must be 0")
        return self

    # -- basis bookkeeping -------------------------------------------------

    def _is_exceptional_vector(self, beta: Sequence[int]) -> bool:
        exceptional = set(self.exceptional_coords)
        return all(c == 0 for i, c in enumerate(beta) if i not in exceptional)

    @property
    def zero(self) -> Vector:
        return (0,) * self.rank_n1

    @property
    def non_exceptional_coords(self) -> List[int]:
        exceptional = set(self.exceptional_coords)
        return [i for i in range(self.rank_n1) if i not in exceptional]

    @property
    def l_vector(self) -> List[int]:
        return list(self.l_pairing) if self.l_pairing is not None else list(self.h_pairing)

    @property
    def fundamental_cycles(self) -> List[Vector]:
        if self.fiber_cycles:
            return [tuple(c) for c in self.fiber_cycles]
        cycle = [0] * self.rank_n1
        for index in self.exceptional_coords:
            cycle[index] = 1
        return [tuple(cycle)]

    def check_beta(self, beta: Sequence[int]) -> Vector:
        vector = tuple(int(c) for c in beta)
        if len(vector) != self.rank_n1:
            raise ValueError(
                f"Curve class {vector} has length {len(vector)}, expected {self.rank_n1}"
            )
        return vector

    def exceptional_part(self, beta: Sequence[int]) -> Vector:
        exceptional = set(self.exceptional_coords)
        return tuple(c if i in exceptional else 0 for i, c in enumerate(beta))

    def pushforward(self, beta: Sequence[int]) -> Vector:
        """f_* beta: the non-exceptional coordinates, exceptional ones zeroed."""
        exceptional = set(self.exceptional_coords)
        return tuple(0 if i in exceptional else c for i, c in enumerate(beta))

    def is_contracted(self, beta: Sequence[int]) -> bool:
        return not any(self.pushforward(beta))

    def h_degree(self, beta: Sequence[int]) -> int:
        return dot(self.h_pairing, beta)

    def chi_pairing(self, n: int, beta: Sequence[int], p: int) -> int:
        """pchi(v) = r(p) n + (-1)^p L.beta."""
        sign = 1 if p % 2 == 0 else -1
        return self.nc_rank * n + sign * dot(self.l_vector, beta)

    def n_min(self, beta: Sequence[int]) -> int:
        vector = self.check_beta(beta)
        key = beta_key(vector)
        if key in self.n_min_table:
            return self.n_min_table[key]
        size = sum(abs(c) for c in vector)
        return -self.n_min_quadratic * size * size

    # -- effective cone ----------------------------------------------------

    def _weight_vector(self) -> List[int]:
        bound = 1 + max(
            (abs(dot(self.h_pairing, g)) for g in self.effective_generators), default=0
        )
        return [h + bound * y for h, y in zip(self.h_pairing, self.y_pairing)]

    def weight(self, beta: Sequence[int]) -> int:
        """A linear form strictly positive on every effective generator."""
        return dot(self._weight_vector(), beta)

    def is_effective(self, beta: Sequence[int]) -> bool:
        vector = self.check_beta(beta)
        cache = self._effective_cache
        if vector in cache:
            return cache[vector]
        if not any(vector):
            result = True
        elif self.weight(vector) <= 0:
            result = False
        else:
            result = any(
                self.is_effective(tuple(a - b for a, b in zip(vector, g)))
                for g in self.effective_generators
            )
        cache[vector] = result
        return result

    def leq(self, smaller: Sequence[int], larger: Sequence[int]) -> bool:
        """beta' <= beta iff beta - beta' is effective."""
        return self.is_effective(tuple(b - a for a, b in zip(smaller, larger)))

    def is_effective_on_y(self, beta: Sequence[int]) -> bool:
        """f_* beta in NE(Y), spanned by the images of the generators."""
        target = self.pushforward(beta)
        if not any(target):
            return True
        images = {self.pushforward(g) for g in self.effective_generators}
        images.discard(self.zero)
        weights = self._weight_vector()
        seen: Dict[Vector, bool] = {}

        def _search(vector: Vector) -> bool:
            if vector in seen:
                return seen[vector]
            if not any(vector):
                outcome = True
            elif dot(weights, vector) <= 0:
                outcome = False
            else:
                outcome = any(
                    _search(tuple(a - b for a, b in zip(vector, image)))
                    for image in images
                )
            seen[vector] = outcome
            return outcome

        return _search(target)

    def effective_classes_below(self, beta: Sequence[int]) -> List[Vector]:
        """All effective beta' with beta' <= beta, in generation order."""
        top = self.check_beta(beta)
        if not self.is_effective(top):
            return []
        limit = self.weight(top)
        found: Set[Vector] = {self.zero}
        frontier = [self.zero]
        while frontier:
            next_frontier = []
            for vector in frontier:
                for g in self.effective_generators:
                    candidate = tuple(a + b for a, b in zip(vector, g))
                    if candidate in found or self.weight(candidate) > limit:
                        continue
                    found.add(candidate)
                    next_frontier.append(candidate)
            frontier = next_frontier
        return sorted(v for v in found if self.leq(v, top))

    def flopped(self) -> "FlopModel":
        """Model of X+: same numerical data, read in the basis {C+}.

        phi_* identifies N_1(X+/Y) with -N_1(X/Y) and fixes the Y part, so
        the defining data of X+ coincide with those of X.
        """
        name = self.name[:-1] if self.name.endswith("+") else f"{self.name}+"
        return self.model_copy(update={"name": name})


class ModelSummary(BaseModel):
    """Summary information about a model for discovery."""

    name: str
    rank_n1: int
    euler_char: int
    description: str
