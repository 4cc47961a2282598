"""Fuzzy element representations and extension-principle arithmetic."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzyat import (
    DiscreteFuzzy,
    InvalidParameterError,
    PiecewiseLinearFuzzy,
    RepresentationMismatchError,
    UnsupportedOperationError,
    alpha_cut,
    discretize,
    fuzzy_equal,
    make_crisp,
    make_discrete,
    make_trap,
    make_tri,
    membership_at,
    zadeh_binary_discrete,
    zadeh_binary_pl,
    zadeh_extension,
)

# -- construction -----------------------------------------------------------


def test_trap_memberships():
    t = make_trap(1, 2, 3, 4)
    assert membership_at(t, 1.5) == 0.5
    assert membership_at(t, 2.5) == 1.0
    assert membership_at(t, 3.5) == 0.5
    assert membership_at(t, 0.999) == 0.0
    assert membership_at(t, 4.0) == 0.0


def test_trap_degenerates_to_singleton():
    s = make_trap(5, 5, 5, 5)
    assert s.breakpoints == ((5.0, 1.0),)
    assert membership_at(s, 5) == 1.0
    assert membership_at(s, 5.1) == 0.0


def test_trap_degenerates_to_triangle():
    t = make_trap(0, 1, 1, 2)
    assert t == make_tri(0, 1, 2)
    assert membership_at(t, 1) == 1.0


def test_trap_crisp_edges():
    t = make_trap(1, 1, 2, 3)
    assert t.breakpoints == ((1.0, 1.0), (2.0, 1.0), (3.0, 0.0))
    assert membership_at(t, 1) == 1.0
    assert membership_at(t, 0.999) == 0.0


def test_trap_ordering_violation_names_inequality():
    with pytest.raises(InvalidParameterError, match="b <= c"):
        make_trap(0, 3, 2, 4)
    with pytest.raises(InvalidParameterError, match="a <= b"):
        make_trap(3, 1, 4, 5)


def test_discrete_invariants():
    with pytest.raises(InvalidParameterError):
        DiscreteFuzzy(())
    with pytest.raises(InvalidParameterError):
        make_discrete({1: 0.0})
    with pytest.raises(InvalidParameterError):
        make_discrete({1: 1.5})
    with pytest.raises(InvalidParameterError):
        DiscreteFuzzy(((2.0, 1.0), (1.0, 0.5)))  # unsorted


def test_pl_invariants():
    with pytest.raises(InvalidParameterError, match="quasi-concave"):
        PiecewiseLinearFuzzy(((0.0, 0.0), (1.0, 1.0), (2.0, 0.2), (3.0, 0.8), (4.0, 0.0)))
    with pytest.raises(InvalidParameterError, match="reach 1"):
        PiecewiseLinearFuzzy(((0.0, 0.0), (1.0, 0.9), (2.0, 0.0)))
    with pytest.raises(InvalidParameterError, match="strictly increase"):
        PiecewiseLinearFuzzy(((0.0, 0.0), (0.0, 1.0), (2.0, 0.0)))


# -- membership and cuts ----------------------------------------------------


def test_membership_discrete():
    x = make_discrete({2: 0.4, 3: 1})
    assert membership_at(x, 2) == 0.4
    assert membership_at(x, 3) == 1.0
    assert membership_at(x, 2.5) == 0.0
    assert membership_at(x, 1000.0) == 0.0


def test_membership_pl_interpolates():
    # on the falling edge from (1, 1) to (4, 0): mu = (4 - 2.5) / 3
    assert membership_at(make_tri(0, 1, 4), 2.5) == pytest.approx(0.5, abs=1e-12)


def test_alpha_cut_discrete():
    assert alpha_cut(make_discrete({50: 1, 60: 1}), 1) == (50, 60)
    assert alpha_cut(make_discrete({1: 0.3, 2: 0.7, 3: 1}), 0.5) == (2, 3)


def test_alpha_cut_pl():
    assert alpha_cut(make_tri(0, 1, 4), 1) == (1, 1)
    lo, hi = alpha_cut(make_tri(1, 2, 3), 0.5)
    assert (lo, hi) == (1.5, 2.5)
    assert alpha_cut(make_trap(0, 1, 2, 4), 0.5) == (0.5, 3.0)


def test_alpha_cut_rejects_zero():
    with pytest.raises(InvalidParameterError):
        alpha_cut(make_tri(0, 1, 2), 0.0)
    with pytest.raises(InvalidParameterError):
        alpha_cut(make_discrete({1: 1}), 1.1)


# -- discrete combination ---------------------------------------------------


def test_addition_example():
    x = make_discrete({2: 0.4, 3: 1})
    y = make_discrete({5: 1, 6: 0.6})
    assert zadeh_binary_discrete("add", x, y) == make_discrete({7: 0.4, 8: 1, 9: 0.6})


def test_direct_min_on_gap_supports():
    # min over {0,2} x {0,2} can only produce 0 or 2; there is no pair whose
    # minimum is 1, so the degree of 1 is 0 and the value is absent.
    p = make_discrete({0: 1, 2: 1})
    assert zadeh_binary_discrete("min", p, p) == make_discrete({0: 1, 2: 1})


def test_singletons_reduce_to_crisp_op():
    assert zadeh_binary_discrete("add", make_discrete({5: 1}), make_discrete({60: 1})) == make_discrete({65: 1})


def test_callable_op_matches_tag():
    x = make_discrete({1: 0.5, 2: 1, 4: 0.25})
    y = make_discrete({0: 1, 3: 0.75})
    assert zadeh_binary_discrete(lambda u, w: u + w, x, y) == zadeh_binary_discrete("add", x, y)


def test_discrete_rejects_pl_operand():
    with pytest.raises(RepresentationMismatchError):
        zadeh_binary_discrete("add", make_discrete({1: 1}), make_tri(0, 1, 2))


_small_discrete = st.dictionaries(
    st.integers(min_value=0, max_value=9).map(float),
    st.sampled_from([0.25, 0.5, 0.75, 1.0]),
    min_size=1,
    max_size=4,
).map(lambda d: make_discrete(d))


@given(_small_discrete, _small_discrete, st.sampled_from(["min", "max", "add"]))
def test_discrete_commutative(x, y, op):
    assert zadeh_binary_discrete(op, x, y) == zadeh_binary_discrete(op, y, x)


@settings(max_examples=60)
@given(_small_discrete, _small_discrete, _small_discrete, st.sampled_from(["min", "max", "add"]))
def test_discrete_associative(x, y, z, op):
    left = zadeh_binary_discrete(op, zadeh_binary_discrete(op, x, y), z)
    right = zadeh_binary_discrete(op, x, zadeh_binary_discrete(op, y, z))
    assert left == right


@given(_small_discrete, _small_discrete, st.sampled_from(["min", "max", "add", "mul"]))
def test_normalization_preserved(x, y, op):
    if x.is_normalized and y.is_normalized:
        assert zadeh_binary_discrete(op, x, y).is_normalized


@given(
    st.integers(min_value=0, max_value=9),
    st.integers(min_value=0, max_value=9),
    st.sampled_from(["min", "max", "add", "mul", "sub"]),
)
def test_singleton_law(u, w, op):
    from fuzzyat.fuzzy import crisp_op

    got = zadeh_binary_discrete(op, make_discrete({u: 1.0}), make_discrete({w: 1.0}))
    assert got == make_discrete({crisp_op(op, float(u), float(w)): 1.0})


def test_nary_extension_matches_binary_fold():
    rng = random.Random(7)
    for _ in range(30):
        elems = [
            make_discrete(
                {
                    float(v): rng.choice((0.5, 1.0))
                    for v in rng.sample(range(8), rng.randint(1, 3))
                }
            )
            for _ in range(3)
        ]
        direct = zadeh_extension(lambda a, b, c: min(a + b, c), elems)
        composed = zadeh_binary_discrete(
            "min", zadeh_binary_discrete("add", elems[0], elems[1]), elems[2]
        )
        assert direct == composed


# -- piecewise-linear combination -------------------------------------------


def test_pl_add_matches_trapezoid_closed_form():
    got = zadeh_binary_pl("add", make_trap(1, 2, 3, 4), make_trap(0, 1, 1, 2))
    assert fuzzy_equal(got, make_trap(1, 3, 4, 6), 1e-9)
    assert got.breakpoints == ((1.0, 0.0), (3.0, 1.0), (4.0, 1.0), (6.0, 0.0))


def test_pl_min_of_triangles():
    got = zadeh_binary_pl("min", make_tri(0, 1, 4), make_tri(1, 2, 3))
    # rising x on [0,1), then 1-(x-1)/3 down to the crossing at 2.5, then 3-x
    assert got.breakpoints == ((0.0, 0.0), (1.0, 1.0), (2.5, 0.5), (3.0, 0.0))
    for v, want in [(0.5, 0.5), (1, 1), (2, 2 / 3), (2.5, 0.5), (2.75, 0.25)]:
        assert membership_at(got, v) == pytest.approx(want, abs=1e-9)


def test_pl_min_idempotent():
    for x in (make_tri(0, 1, 4), make_trap(1, 2, 3, 4), make_crisp(2, kind="pl")):
        assert fuzzy_equal(zadeh_binary_pl("min", x, x), x, 1e-9)


def test_pl_sub_closed_form():
    a = make_trap(4, 5, 6, 8)
    b = make_trap(0, 1, 2, 3)
    got = zadeh_binary_pl("sub", a, b)
    assert fuzzy_equal(got, make_trap(1, 3, 5, 8), 1e-9)


def test_pl_mul_flagged_approximate():
    got = zadeh_binary_pl("mul", make_tri(0, 1, 2), make_tri(1, 2, 3), alpha_levels=8)
    assert got.approximate
    # support is the product of the supports
    assert got.support == (0.0, 6.0)
    assert membership_at(got, 2.0) == pytest.approx(1.0, abs=1e-12)
    # approximation propagates through further exact operations
    assert zadeh_binary_pl("add", got, make_tri(0, 1, 2)).approximate


def test_pl_mul_rejects_negative_support():
    with pytest.raises(UnsupportedOperationError):
        zadeh_binary_pl("mul", make_tri(-1, 0, 1), make_tri(0, 1, 2))


def test_pl_mul_accuracy_against_dense_levels():
    a = make_trap(0.5, 1, 2, 4)
    b = make_tri(1, 3, 5)
    coarse = zadeh_binary_pl("mul", a, b, alpha_levels=64)
    fine = zadeh_binary_pl("mul", a, b, alpha_levels=4096)
    xs = [x for x, _ in fine.breakpoints]
    worst = max(abs(membership_at(coarse, x) - membership_at(fine, x)) for x in xs)
    assert worst < 5e-3


def test_pl_quasi_concavity_closure():
    rng = random.Random(11)
    for _ in range(60):
        a = make_trap(*sorted(round(rng.uniform(0, 10), 2) for _ in range(4)))
        b = make_tri(*sorted(round(rng.uniform(0, 10), 2) for _ in range(3)))
        for op in ("min", "max", "add", "sub"):
            result = zadeh_binary_pl(op, a, b)  # constructor revalidates invariants
            assert result.breakpoints[0][0] <= result.breakpoints[-1][0]


def test_pl_alpha_cut_law_at_level_one():
    # the level-1 cut of the extension equals the operation on the level-1 cuts
    a = make_trap(0, 1, 2, 4)
    b = make_tri(1, 3, 5)
    for op in ("min", "add"):
        got = alpha_cut(zadeh_binary_pl(op, a, b), 1)
        la, ua = alpha_cut(a, 1)
        lb, ub = alpha_cut(b, 1)
        if op == "min":
            want = (min(la, lb), min(ua, ub))
        else:
            want = (la + lb, ua + ub)
        assert got == pytest.approx(want, abs=1e-12)


def test_pl_interior_plateau_handled_exactly():
    # a shape with a plateau below the peak: the cut bounds jump there
    shape = PiecewiseLinearFuzzy(((0.0, 0.0), (1.0, 0.5), (2.0, 0.5), (3.0, 1.0), (4.0, 0.0)))
    assert alpha_cut(shape, 0.5) == (1.0, 3.5)
    assert alpha_cut(shape, 0.5000001)[0] > 1.9
    shifted = zadeh_binary_pl("add", shape, make_crisp(10, kind="pl"))
    for v in (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0):
        assert membership_at(shifted, v + 10) == pytest.approx(membership_at(shape, v), abs=1e-12)


# -- discretize / consistency between representations ------------------------


def test_discretize_examples():
    assert discretize(make_tri(0, 1, 2), 3) == make_discrete({0.5: 0.5, 1: 1, 1.5: 0.5})
    assert discretize(make_crisp(5, kind="pl"), 17) == make_discrete({5: 1})
    assert (1.0, 1.0) in discretize(make_trap(0, 1, 1, 2), 5).entries


def test_discretize_requires_two_points():
    with pytest.raises(InvalidParameterError):
        discretize(make_tri(0, 1, 2), 1)


def test_discretized_min_max_agree_on_shared_grid():
    # operands with equal-width supports aligned on the sample grid, so the
    # grids share points; at shared points the discrete result is exact
    a = make_tri(0, 1, 4)
    b = make_tri(1, 2, 5)
    da, db = discretize(a, 99), discretize(b, 99)
    shared = sorted(set(v for v, _ in da.entries) & set(v for v, _ in db.entries))
    assert len(shared) > 50
    for op in ("min", "max"):
        dresult = zadeh_binary_discrete(op, da, db).as_dict()
        presult = zadeh_binary_pl(op, a, b)
        for v in shared:
            if v in dresult:
                assert dresult[v] == pytest.approx(membership_at(presult, v), abs=1e-6)


def test_discretized_add_is_dominated_and_peak_exact():
    # sampling restricts the sup to grid pairs, so discrete degrees never
    # exceed the continuous ones; at the peak (breakpoints are kept) equality
    a = make_tri(0, 1, 4)
    b = make_tri(1, 2, 3)
    ds = zadeh_binary_discrete("add", discretize(a, 101), discretize(b, 101))
    ps = zadeh_binary_pl("add", a, b)
    for v, d in ds.entries:
        assert d <= membership_at(ps, v) + 1e-9
    assert ds.as_dict()[3.0] == 1.0


def _grid_reference(op, x, y, z, width=2001):
    """Brute-force membership of x +~ y (or x -~ y) at z via a dense grid over
    x's support (max of min over pairs); independent of the envelope code."""
    lo, hi = x.support
    best = 0.0
    for i in range(width):
        u = lo + (hi - lo) * i / (width - 1) if hi > lo else lo
        mu_u = membership_at(x, u)
        if mu_u <= best:
            continue
        w = z - u if op == "add" else u - z
        d = min(mu_u, membership_at(y, w))
        if d > best:
            best = d
    return best


def _minmax_reference(op, x, y, z):
    """Exact membership of min~/max~ at z: one operand takes z, the other
    ranges over its side of z; sup over a side is attained at z or the peak."""

    def side_sup(e, v):
        peak_xs = [px for px, mu in e.breakpoints if mu == 1.0]
        best = membership_at(e, v)
        for p in peak_xs:
            if (op == "min" and p >= v) or (op == "max" and p <= v):
                best = max(best, 1.0)
        return best

    return max(
        min(membership_at(x, z), side_sup(y, z)),
        min(membership_at(y, z), side_sup(x, z)),
    )


def _stress_shapes(rng, n_random=10):
    shapes = [
        make_trap(1, 1, 2, 3),  # left-crisp
        make_trap(0, 1, 3, 3),  # right-crisp
        make_trap(2, 2, 2, 5),  # crisp-peak triangle
        make_crisp(4, kind="pl"),
        PiecewiseLinearFuzzy(((0.0, 0.0), (1.0, 0.5), (2.0, 0.5), (3.0, 1.0), (4.0, 0.0))),
        PiecewiseLinearFuzzy(((0.0, 0.0), (1.0, 1.0), (2.0, 0.4), (4.0, 0.4), (5.0, 0.0))),
        PiecewiseLinearFuzzy(((0.0, 0.3), (1.0, 1.0), (2.0, 0.0))),
    ]
    for _ in range(n_random):
        shapes.append(make_trap(*sorted(round(rng.uniform(0, 8), 2) for _ in range(4))))
        shapes.append(make_tri(*sorted(round(rng.uniform(0, 8), 2) for _ in range(3))))
    return shapes


def test_pl_ops_match_independent_reference_on_random_shapes():
    rng = random.Random(314)
    for _ in range(40):
        x = make_trap(*sorted(round(rng.uniform(0, 8), 2) for _ in range(4)))
        y = make_tri(*sorted(round(rng.uniform(0, 8), 2) for _ in range(3)))
        for op in ("min", "max"):
            got = zadeh_binary_pl(op, x, y)
            probes = [px for px, _ in got.breakpoints]
            probes += [probes[0] - 0.5, probes[-1] + 0.5]
            probes += [rng.uniform(probes[0], probes[-1]) for _ in range(20)]
            for z in probes:
                assert membership_at(got, z) == pytest.approx(
                    _minmax_reference(op, x, y, z), abs=1e-9
                )
        for op in ("add", "sub"):
            got = zadeh_binary_pl(op, x, y)
            for z in [px for px, _ in got.breakpoints] + [
                rng.uniform(*got.support) for _ in range(10)
            ]:
                ref = _grid_reference(op, x, y, z)
                # the grid reference under-approximates by at most slope*step
                assert ref <= membership_at(got, z) + 1e-9
                assert membership_at(got, z) - ref <= 2e-2


def test_pl_minmax_on_crisp_edged_shapes_exact_or_rejected():
    """min/max of crisp-edged operands either reproduces the exact (possibly
    boundary-jumping) membership or is rejected when the true result has an
    interior discontinuity; it must never be silently wrong."""
    rng = random.Random(1618)
    shapes = _stress_shapes(rng)
    computed = rejected = 0
    for x in shapes:
        for y in shapes:
            for op in ("min", "max"):
                try:
                    got = zadeh_binary_pl(op, x, y)
                except UnsupportedOperationError:
                    rejected += 1
                    jumps = (
                        x.breakpoints[0][1] > 0 or x.breakpoints[-1][1] > 0
                        or y.breakpoints[0][1] > 0 or y.breakpoints[-1][1] > 0
                    )
                    assert jumps, "only crisp-edged operands may be rejected"
                    continue
                computed += 1
                probes = [px for px, _ in got.breakpoints]
                probes += [rng.uniform(probes[0] - 1, probes[-1] + 1) for _ in range(15)]
                for z in probes:
                    assert membership_at(got, z) == pytest.approx(
                        _minmax_reference(op, x, y, z), abs=1e-9
                    )
    assert computed > 300 and rejected > 10


def test_pl_min_with_interior_discontinuity_is_rejected():
    # true membership of min~(tri(5,5,8), tri(4,6,7)) rises to 0.5 just left
    # of 5 and jumps to 1 at 5: not a continuous piecewise-linear function
    with pytest.raises(UnsupportedOperationError, match="discretize"):
        zadeh_binary_pl("min", make_tri(5, 5, 8), make_tri(4, 6, 7))
    # the same combination is computable exactly in the discrete world
    a = discretize(make_tri(5, 5, 8), 30)
    b = discretize(make_tri(4, 6, 7), 30)
    result = zadeh_binary_discrete("min", a, b)
    assert membership_at(result, 5.0) == 1.0


def test_pl_boundary_jumps_stay_exact_under_add():
    got = zadeh_binary_pl("add", make_trap(0, 1, 3, 3), make_crisp(4, kind="pl"))
    assert got.breakpoints == ((4.0, 0.0), (5.0, 1.0), (7.0, 1.0))
    assert membership_at(got, 7.0) == 1.0
    assert membership_at(got, 7.0000001) == 0.0


# -- equality ----------------------------------------------------------------


def test_fuzzy_equal_examples():
    assert fuzzy_equal(make_discrete({50: 1, 60: 1}), make_discrete({50: 1, 60: 1}), 1e-9)
    assert not fuzzy_equal(
        make_discrete({50: 1, 60: 1}), make_discrete({50: 1, 55: 1, 60: 1}), 1e-9
    )
    added = zadeh_binary_pl("add", make_trap(1, 2, 3, 4), make_trap(0, 1, 1, 2))
    assert fuzzy_equal(added, make_trap(1, 3, 4, 6), 1e-9)


def test_fuzzy_equal_mixed_kinds_is_false_not_error():
    assert not fuzzy_equal(make_discrete({1: 1}), make_crisp(1, kind="pl"), 1e-9)


def test_fuzzy_equal_tolerance():
    assert fuzzy_equal(make_discrete({1.0: 1.0}), make_discrete({1.0 + 1e-12: 1.0}), 1e-9)
    assert not fuzzy_equal(make_discrete({1.0: 1.0}), make_discrete({1.01: 1.0}), 1e-9)
    with pytest.raises(InvalidParameterError):
        fuzzy_equal(make_discrete({1: 1}), make_discrete({1: 1}), -1e-9)
