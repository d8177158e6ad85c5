"""Pyramid partitions of the length-one conifold and the stone-count dictionary.

Stones are (layer, a, b). White layers 2j - 1 hold a j x j grid, black
layers 2j a (j + 1) x j grid. A white stone (2j - 1, a, b) covers the black
stones (2j, a, b) and (2j, a + 1, b); a black stone (2j, a, b) covers the
white stones (2j + 1, a, b) and (2j + 1, a, b + 1). A pyramid partition is a
finite set of stones closed under taking covering stones.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict

from flopdt.config import get_settings
from flopdt.errors import DomainError, FitError, OracleLimitError, RangeError
from flopdt.series import ConeSeries

logger = logging.getLogger(__name__)

Stone = Tuple[int, int, int]
Bucket = Tuple[int, int]

TOP: Stone = (1, 0, 0)


def is_white(stone: Stone) -> bool:
    return stone[0] % 2 == 1


def _on_grid(stone: Stone) -> bool:
    layer, a, b = stone
    if layer < 1:
        return False
    if layer % 2 == 1:
        j = (layer + 1) // 2
        return 0 <= a <= j - 1 and 0 <= b <= j - 1
    j = layer // 2
    return 0 <= a <= j and 0 <= b <= j - 1


def children(stone: Stone) -> Tuple[Stone, Stone]:
    layer, a, b = stone
    if layer % 2 == 1:
        return (layer + 1, a, b), (layer + 1, a + 1, b)
    return (layer + 1, a, b), (layer + 1, a, b + 1)


def parents(stone: Stone) -> List[Stone]:
    layer, a, b = stone
    if layer == 1:
        return []
    if layer % 2 == 1:
        candidates = [(layer - 1, a, b), (layer - 1, a, b - 1)]
    else:
        candidates = [(layer - 1, a, b), (layer - 1, a - 1, b)]
    return [s for s in candidates if _on_grid(s)]


@dataclass(frozen=True)
class PyramidPartition:
    stones: FrozenSet[Stone]

    def __post_init__(self) -> None:
        for stone in self.stones:
            if not _on_grid(stone):
                raise DomainError(f"Stone {stone} is not on the pyramid")
            missing = [p for p in parents(stone) if p not in self.stones]
            if missing:
                raise DomainError(
                    f"Stone {stone} is missing covering stones {missing}",
                    {"stone": list(stone)},
                )

    @property
    def white(self) -> int:
        return sum(1 for s in self.stones if is_white(s))

    @property
    def black(self) -> int:
        return len(self.stones) - self.white

    @property
    def counts(self) -> Bucket:
        return self.white, self.black

    def __len__(self) -> int:
        return len(self.stones)


def _check_limit(max_stones: int, limit: Optional[int]) -> None:
    ceiling = get_settings().pyramid_stone_limit if limit is None else limit
    if max_stones < 0:
        raise OracleLimitError(f"max_stones must be >= 0, got {max_stones}")
    if max_stones > ceiling:
        raise OracleLimitError(
            f"max_stones = {max_stones} exceeds the pyramid limit {ceiling}",
            {"max_stones": max_stones, "limit": ceiling},
        )


def _linear_order(max_stones: int) -> List[Stone]:
    """Every stone reachable within max_stones, layer by layer."""
    stones: List[Stone] = []
    for layer in range(1, max_stones + 1):
        j = (layer + 1) // 2 if layer % 2 else layer // 2
        width = j if layer % 2 else j + 1
        for a, b in product(range(width), range(j)):
            stones.append((layer, a, b))
    return stones


def _live_stones(stones: List[Stone]) -> List[FrozenSet[Stone]]:
    """live[i]: stones placed before position i that cover a stone at position >= i."""
    index = {stone: i for i, stone in enumerate(stones)}
    last_child = {
        stone: max((index[c] for c in children(stone) if c in index), default=-1)
        for stone in stones
    }
    return [
        frozenset(s for s in stones[:i] if last_child[s] >= i) for i in range(len(stones) + 1)
    ]


def count_pyramid_partitions(max_stones: int, limit: Optional[int] = None) -> Dict[Bucket, int]:
    """(white, black) -> number of pyramid partitions with w + b <= max_stones.

    Stones are decided in linear-extension order, each included or left out.
    A stone may be included only when its covering stones are. What the rest
    of the search can still do depends on the position, the included stones
    that still cover undecided ones (the frontier) and the remaining budget,
    so completions are memoized on that triple.
    """
    _check_limit(max_stones, limit)
    stones = _linear_order(max_stones)
    live = _live_stones(stones)

    @lru_cache(maxsize=None)
    def completions(
        i: int, frontier: FrozenSet[Stone], budget: int
    ) -> Tuple[Tuple[Bucket, int], ...]:
        # past the top stone an empty frontier admits nothing more
        if i == len(stones) or budget == 0 or (i > 0 and not frontier):
            return (((0, 0), 1),)
        stone = stones[i]
        tally: Counter = Counter()
        for bucket, count in completions(i + 1, frontier & live[i + 1], budget):
            tally[bucket] += count
        if all(p in frontier for p in parents(stone)):
            grown = (frontier | {stone}) & live[i + 1]
            white = is_white(stone)
            for (w, b), count in completions(i + 1, grown, budget - 1):
                tally[(w + 1, b) if white else (w, b + 1)] += count
        return tuple(sorted(tally.items()))

    counts = dict(completions(0, frozenset(), max_stones))
    logger.debug(
        f"Pyramid partitions up to {max_stones} stones: {sum(counts.values())} "
        f"({completions.cache_info().currsize} frontier states)"
    )
    return counts


def enumerate_pyramid_partitions_baseline(
    max_stones: int, limit: Optional[int] = None
) -> Dict[Bucket, int]:
    """Breadth-first growth with frozenset de-duplication."""
    _check_limit(max_stones, limit)
    level: Set[FrozenSet[Stone]] = {frozenset()}
    counts: Counter = Counter({(0, 0): 1})
    for _ in range(max_stones):
        following: Set[FrozenSet[Stone]] = set()
        for stones in level:
            candidates = {TOP} if not stones else {
                child for s in stones for child in children(s)
            }
            for stone in candidates:
                if stone in stones or not _on_grid(stone):
                    continue
                if all(p in stones for p in parents(stone)):
                    following.add(stones | {stone})
        for stones in following:
            white = sum(1 for s in stones if is_white(s))
            counts[(white, len(stones) - white)] += 1
        level = following
    return dict(sorted(counts.items()))


class VariableMap(BaseModel):
    """Affine stone dictionary (w, b) -> (n, m) with a parity sign rule.

    n = a_w w + a_b b + a_0, m = c_w w + c_b b + c_0, and the signed
    coefficient is (-1)^(s0 + s_n n + s_m m) times the bucket count.
    """

    model_config = ConfigDict(frozen=True)

    n_coeffs: Tuple[int, int, int]
    m_coeffs: Tuple[int, int, int]
    sign_rule: Tuple[int, int, int]
    dimension_vector_consistent: bool = False
    symmetric_partner: Optional[Tuple[int, int, int]] = None

    def apply(self, w: int, b: int) -> Tuple[int, int]:
        aw, ab, a0 = self.n_coeffs
        cw, cb, c0 = self.m_coeffs
        return aw * w + ab * b + a0, cw * w + cb * b + c0

    def sign(self, n: int, m: int) -> int:
        s0, sn, sm = self.sign_rule
        return -1 if (s0 + sn * n + sm * m) % 2 else 1

    def mirrored(self) -> "VariableMap":
        return VariableMap(
            n_coeffs=self.n_coeffs,
            m_coeffs=tuple(-c for c in self.m_coeffs),  # type: ignore[arg-type]
            sign_rule=self.sign_rule,
        )

    def describe(self) -> str:
        aw, ab, a0 = self.n_coeffs
        cw, cb, c0 = self.m_coeffs
        s0, sn, sm = self.sign_rule
        return (
            f"n = {aw}w + {ab}b + {a0}, m = {cw}w + {cb}b + {c0}, "
            f"sign = (-1)^({s0} + {sn}n + {sm}m)"
        )


def _curve_coefficient(reference: ConeSeries, n: int, m: int) -> Optional[Fraction]:
    curve = reference.model.fundamental_cycles[0]
    try:
        return reference.coefficient(n, tuple(m * c for c in curve))
    except RangeError:
        return None


def _matches(candidate: VariableMap, populated: Dict[Bucket, int], reference: ConeSeries) -> bool:
    images: Set[Tuple[int, int]] = set()
    for (w, b), count in populated.items():
        n, m = candidate.apply(w, b)
        if (n, m) in images:
            return False
        images.add((n, m))
        value = _curve_coefficient(reference, n, m)
        if value is None or value != candidate.sign(n, m) * count:
            return False
    return True


def _candidates(span: int) -> Iterator[VariableMap]:
    values = range(-span, span + 1)
    for aw, ab, cw, cb in product(values, repeat=4):
        if aw * cb - ab * cw == 0:
            continue
        for a0, c0 in product(values, repeat=2):
            for rule in product((0, 1), repeat=3):
                yield VariableMap(
                    n_coeffs=(aw, ab, a0), m_coeffs=(cw, cb, c0), sign_rule=rule
                )


def fit_variable_map(
    counts: Dict[Bucket, int],
    reference: ConeSeries,
    max_total: Optional[int] = None,
    span: Optional[int] = None,
) -> VariableMap:
    """Search small integer-affine dictionaries matching counts to signed coefficients.

    Fits come in pairs m <-> -m when the reference is symmetric under
    beta -> -beta; such a pair counts as one fit, represented by the member
    whose m grows with black stones.
    """
    settings = get_settings()
    total = settings.fit_total if max_total is None else max_total
    coefficient_span = settings.fit_coefficient_range if span is None else span
    populated = {k: v for k, v in counts.items() if v and sum(k) <= total}
    if not populated:
        raise FitError("No populated buckets to fit against")
    fits = [c for c in _candidates(coefficient_span) if _matches(c, populated, reference)]
    classes: List[List[VariableMap]] = []
    for fit in fits:
        for group in classes:
            if any(fit == other.mirrored() or fit == other for other in group):
                group.append(fit)
                break
        else:
            classes.append([fit])
    if not classes:
        raise FitError("No affine dictionary matches the pyramid counts", {"total": total})
    if len(classes) > 1:
        raise FitError(
            f"{len(classes)} inequivalent dictionaries match the pyramid counts",
            {"candidates": [group[0].describe() for group in classes]},
        )
    group = classes[0]
    chosen = max(group, key=lambda f: (f.m_coeffs[1], f.m_coeffs[0], f.m_coeffs[2]))
    partner = chosen.mirrored()
    has_partner = any(f == partner for f in group)
    consistent = chosen.n_coeffs == (1, 0, 0) and chosen.m_coeffs == (-1, 1, 0)
    logger.info(f"Fitted stone dictionary: {chosen.describe()}")
    return VariableMap(
        n_coeffs=chosen.n_coeffs,
        m_coeffs=chosen.m_coeffs,
        sign_rule=chosen.sign_rule,
        dimension_vector_consistent=consistent,
        symmetric_partner=partner.m_coeffs if has_partner else None,
    )


def verify_variable_map(
    fit: VariableMap,
    counts: Dict[Bucket, int],
    reference: ConeSeries,
    max_total: int,
) -> Optional[Bucket]:
    """First bucket with w + b <= max_total that the dictionary gets wrong."""
    for (w, b), count in sorted(counts.items()):
        if w + b > max_total or not count:
            continue
        n, m = fit.apply(w, b)
        value = _curve_coefficient(reference, n, m)
        if value is None or value != fit.sign(n, m) * count:
            logger.debug(f"Bucket {(w, b)} -> {(n, m)}: count {count}, coefficient {value}")
            return w, b
    return None
