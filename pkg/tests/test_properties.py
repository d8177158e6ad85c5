"""Seeded algebraic properties of the lattice, charges, series ring and crossing product.

Randomized checks run `rounds` cases each (1000 unless FLOPDT_TEST_ROUNDS
says otherwise) from the session seed.
"""

from fractions import Fraction
from itertools import product
from random import Random

import pytest

from flopdt.charges import (
    CentralCharge,
    ChargePath,
    ExactComplex,
    evaluate,
    solve_wall_time,
    support_ratio,
    wall_set,
)
from flopdt.lattice import (
    FLOP_MODES,
    Box,
    GammaClass,
    SupportSet,
    decompositions,
    filtration_level,
    flop_pushforward,
)
from flopdt.oracles import (
    ConifoldNProvider,
    TableNProvider,
    count_pyramid_partitions,
    fit_variable_map,
    random_symmetric_table,
    verify_variable_map,
)
from flopdt.series import (
    dump_series_json,
    exp,
    log,
    macmahon,
    mul,
    ncdt_closed_form,
    read_series_json,
    series_ring,
    substitute,
)
from flopdt.wallcross import (
    WallEvent,
    apply_crossing,
    detect_walls,
    extract_N,
    reverse_events,
)


def random_series(ring, rng, constant=1, terms=6):
    keys = list(ring.keys()[1:])
    chosen = rng.sample(keys, min(terms, len(keys)))
    coeffs = {key: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for key in chosen}
    coeffs[ring.zero_key] = Fraction(constant)
    return ring.from_dict(coeffs)


def random_class(rng, model, level=0, span=6):
    """Random (n, beta, 0) at filtration level 0 or 1."""
    while True:
        beta = tuple(rng.randint(-span, span) for _ in range(model.rank_n1))
        v = GammaClass(rng.randint(-span, span), beta, 0)
        if not v.is_zero() and filtration_level(v, model) == level:
            return v


def sample_member(support, rng, span_n=12, span_m=4):
    rank = support.model.rank_n1
    while True:
        n = rng.randint(-span_n, span_n)
        beta = tuple(rng.randint(-span_m, span_m) for _ in range(rank))
        if support.contains(n, beta):
            return n, beta


def add_keys(left, right):
    return left[0] + right[0], tuple(a + b for a, b in zip(left[1], right[1]))


@pytest.fixture(scope="module")
def rng(seed):
    return Random(seed)


# -- series ring ---------------------------------------------------------------


@pytest.mark.slow
def test_ring_axioms(tx_ring, rng, rounds):
    for _ in range(rounds):
        a, b, c = (random_series(tx_ring, rng, constant=rng.randint(-2, 2)) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert (a + b) + c == a + (b + c)


@pytest.mark.slow
def test_exp_and_log_are_inverse(tx_ring, rng, rounds):
    for _ in range(rounds):
        unit = random_series(tx_ring, rng)
        assert exp(log(unit)) == unit
        nilpotent = random_series(tx_ring, rng, constant=0)
        assert log(exp(nilpotent)) == nilpotent


@pytest.mark.slow
def test_log_turns_products_into_sums(nc_ring, rng, rounds):
    for _ in range(rounds):
        a = random_series(nc_ring, rng)
        b = random_series(nc_ring, rng)
        assert log(mul(a, b)) == log(a) + log(b)


@pytest.mark.slow
def test_substitution_is_multiplicative(tx_ring, rng, rounds):
    for _ in range(rounds):
        a = random_series(tx_ring, rng)
        b = random_series(tx_ring, rng)
        left = substitute(mul(a, b), "phi_star")
        right = mul(substitute(a, "phi_star"), substitute(b, "phi_star"))
        assert left == right


def test_macmahon_exponents_add(tx_ring, rng, rounds):
    for _ in range(rounds):
        chi1, chi2 = rng.randint(-3, 3), rng.randint(-3, 3)
        sign = rng.choice(["+", "-"])
        product_ = mul(macmahon(chi1, tx_ring, sign), macmahon(chi2, tx_ring, sign))
        assert product_ == macmahon(chi1 + chi2, tx_ring, sign)


# -- lattice -------------------------------------------------------------------


@pytest.mark.parametrize("model_name", ["conifold", "toy_global"])
def test_support_closure(model_name, request, rng, rounds):
    model = request.getfixturevalue(model_name)
    pairs = [(SupportSet.s_x(model), SupportSet.t_x(model))]
    for p in (0, -1):
        pairs.append((SupportSet.p_s(model, p), SupportSet.p_t(model, p)))
    for big, small in pairs:
        for _ in range(rounds):
            s = sample_member(big, rng)
            t = sample_member(small, rng)
            t2 = sample_member(small, rng)
            assert big.contains(*add_keys(s, t)), (big.label, s, t)
            assert small.contains(*add_keys(t, t2)), (small.label, t, t2)


def test_filtration_level_is_monotone(toy_global):
    span = range(-1, 2)
    classes = [GammaClass(n, (c, d), r) for n, c, d, r in product(span, repeat=4)]
    for v in classes:
        for w in classes:
            level_v = filtration_level(v, toy_global)
            level_w = filtration_level(w, toy_global)
            level_sum = filtration_level(v + w, toy_global)
            assert level_sum <= max(level_v, level_w)
            if level_v == 0 and level_w > 0:
                assert level_sum == level_w


def brute_force_pairs(support, n, beta, beta_span, n_span):
    m = beta[0]
    found = set()
    for c in beta_span:
        for a in n_span:
            y, z = (a, (c,)), (n - a, (m - c,))
            if support.contains(*y) and support.contains(*z):
                found.add((y, z))
    return found


@pytest.mark.slow
def test_decompositions_match_brute_force(conifold):
    t_x = SupportSet.t_x(conifold)
    for n, m in product(range(-10, 11), repeat=2):
        expected = brute_force_pairs(t_x, n, (m,), range(-11, 12), range(-11, 12))
        found = decompositions(t_x, n, (m,))
        assert len(found) == len(expected)
        assert set(found) == expected

    s_x = SupportSet.s_x(conifold)
    depth = -min(conifold.n_min((c,)) for c in range(0, 6))
    for n, m in product(range(-10, 11), range(-1, 6)):
        expected = brute_force_pairs(
            s_x, n, (m,), range(-2, 8), range(-depth - 1, 10 + depth + 2)
        )
        found = decompositions(s_x, n, (m,))
        assert len(found) == len(expected)
        assert set(found) == expected


def test_flop_pushforward_is_an_involution(conifold, toy_global, rng, rounds):
    for model in (conifold, toy_global):
        for _ in range(rounds):
            beta = tuple(rng.randint(-9, 9) for _ in range(model.rank_n1))
            v = GammaClass(rng.randint(-9, 9), beta, 0)
            for mode in FLOP_MODES:
                assert flop_pushforward(flop_pushforward(v, mode, model), mode, model) == v


# -- charges -------------------------------------------------------------------


def random_charges(rng, model):
    b = Fraction(-rng.randint(1, 9), 10)
    omega = Fraction(rng.randint(1, 9), rng.randint(1, 4))
    z0 = ExactComplex.of(-rng.randint(1, 5), rng.randint(1, 5))
    return [
        CentralCharge.large_volume(model, b, omega, strict=False),
        CentralCharge.nc_point(model, z0, b, strict=False),
    ]


def test_evaluate_is_linear_on_each_layer(conifold, toy_global, rng, rounds):
    cases = [(conifold, 0), (toy_global, 0), (toy_global, 1)]
    for _ in range(rounds):
        model, level = rng.choice(cases)
        v = random_class(rng, model, level)
        w = random_class(rng, model, level)
        total = v + w
        if total.is_zero() or filtration_level(total, model) != level:
            continue
        for charge in random_charges(rng, model):
            assert evaluate(charge, total, model) == (
                evaluate(charge, v, model) + evaluate(charge, w, model)
            )


@pytest.mark.parametrize("family", ["omega_ray", "linear_xi"])
def test_wall_time_is_scale_invariant(conifold, family):
    path = getattr(ChargePath, family)(conifold)
    box = Box(4, 4)
    for v in box.contracted_classes(conifold):
        t_star = solve_wall_time(path, v, conifold)
        for k in (2, 3):
            assert solve_wall_time(path, v.scale(k), conifold) == t_star
        if t_star is not None:
            assert v in wall_set(path.charge_at(t_star), conifold, box)


def test_support_ratio_settles_as_the_box_grows(conifold, toy_global):
    for model in (conifold, toy_global):
        charge = CentralCharge.large_volume(model)
        for small, large in ((Box(2, 2), Box(4, 4)), (Box(4, 4), Box(8, 8))):
            before = support_ratio(charge, model, small)
            after = support_ratio(charge, model, large)
            assert after >= before
            assert (after - before) / after <= 0.05


# -- crossing product ----------------------------------------------------------


def test_crossing_telescopes(conifold, tx_ring, rng, rounds):
    provider = ConifoldNProvider(conifold)
    events = detect_walls(ChargePath.omega_ray(conifold), conifold, Box(4, 2))
    backward = reverse_events(events)
    for _ in range(max(1, rounds // 10)):
        start = random_series(tx_ring, rng, constant=rng.choice([1, 2, -3]))
        forward = apply_crossing(start, events, provider)
        assert apply_crossing(forward, backward, provider) == start


@pytest.mark.slow
def test_crossing_order_does_not_matter(conifold, tx_ring, rng, rounds):
    provider = ConifoldNProvider(conifold)
    events = detect_walls(ChargePath.omega_ray(conifold), conifold, Box(4, 2))
    expected = apply_crossing(tx_ring.one(), events, provider)
    for _ in range(rounds):
        shuffled = list(events)
        rng.shuffle(shuffled)
        assert apply_crossing(tx_ring.one(), shuffled, provider) == expected


def test_random_tables_survive_extraction(conifold, rng, rounds):
    ring = series_ring(SupportSet.p_t(conifold, 0), Box(4, 2))
    for _ in range(max(1, rounds // 10)):
        table = random_symmetric_table(rng, 4, 2, conifold)
        keys = [key for key in sorted(table) if key in ring]
        events = [WallEvent(Fraction(i + 1), key, (key,), 1) for i, key in enumerate(keys)]
        crossed = apply_crossing(ring.one(), events, TableNProvider(table, Fraction(0)))
        recovered = extract_N(crossed)
        for key in keys:
            assert recovered.get(key, Fraction(0)) == table[key]


def test_extracted_N_is_symmetric(nc_ring):
    extracted = extract_N(ncdt_closed_form(nc_ring))
    for (n, beta), value in extracted.items():
        mirror = (n, tuple(-c for c in beta))
        if nc_ring.box.contains(*mirror) and mirror in nc_ring:
            assert extracted.get(mirror, Fraction(0)) == value


def test_json_output_is_byte_stable(nc_ring):
    series = ncdt_closed_form(nc_ring)
    first = dump_series_json(series)
    assert dump_series_json(ncdt_closed_form(nc_ring)) == first
    assert dump_series_json(read_series_json(first, nc_ring)) == first


# -- pyramid oracle ------------------------------------------------------------


def test_pyramid_counts_grow_with_the_budget():
    previous = count_pyramid_partitions(0)
    assert previous == {(0, 0): 1}
    for budget in range(1, 10):
        counts = count_pyramid_partitions(budget)
        within = {k: v for k, v in counts.items() if sum(k) <= budget - 1}
        assert within == previous
        assert sum(counts.values()) > sum(previous.values())
        previous = counts


@pytest.mark.slow
def test_fitted_dictionary_holds_to_twelve_stones(conifold):
    reference = ncdt_closed_form(series_ring(SupportSet.p_t(conifold, 0), Box(12, 12)))
    fit = fit_variable_map(count_pyramid_partitions(8), reference, max_total=8)
    counts = count_pyramid_partitions(12)
    assert verify_variable_map(fit, counts, reference, 12) is None
    assert sum(counts.values()) > sum(count_pyramid_partitions(8).values())
