"""Fuzzy elements and their combination under the extension principle.

Two representations are supported:

* ``DiscreteFuzzy`` -- a finite map from values to membership degrees in
  (0, 1].  Points with degree 0 are simply absent.
* ``PiecewiseLinearFuzzy`` -- a continuous, quasi-concave, normalized
  piecewise-linear membership function with compact support.  Trapezoidal
  and triangular numbers are the common instances.

Binary operations on discrete elements are computed exactly by enumerating
support pairs (max of min over the preimage).  Operations on
piecewise-linear elements are computed level-wise on alpha-cut envelopes:
for min/max/add/sub the envelope bounds stay piecewise-linear in alpha and
the result is exact; multiplication bounds are quadratic in alpha, so they
are sampled on a uniform alpha grid and the result is flagged approximate.

Mixing the two representations in one operation is rejected; convert
explicitly with :func:`discretize`.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence, Union

from . import _kernels
from .errors import (
    InvalidParameterError,
    RepresentationMismatchError,
    UnsupportedOperationError,
)

__all__ = [
    "DiscreteFuzzy",
    "PiecewiseLinearFuzzy",
    "FuzzyElement",
    "OP_TAGS",
    "make_discrete",
    "make_crisp",
    "make_trap",
    "make_tri",
    "membership_at",
    "alpha_cut",
    "zadeh_binary_discrete",
    "zadeh_binary_pl",
    "zadeh_extension",
    "fuzzy_equal",
    "discretize",
]

#: Operation tags understood by the binary combinators, in kernel order.
OP_TAGS = ("min", "max", "add", "sub", "mul")

_OP_CODES = {tag: i for i, tag in enumerate(OP_TAGS)}

_CRISP_OPS: dict[str, Callable[[float, float], float]] = {
    "min": min,
    "max": max,
    "add": lambda u, w: u + w,
    "sub": lambda u, w: u - w,
    "mul": lambda u, w: u * w,
}

DEFAULT_ALPHA_LEVELS = 64


def _check_finite(value: float, what: str) -> float:
    v = float(value)
    if not math.isfinite(v):
        raise InvalidParameterError(f"{what} must be finite, got {value!r}")
    return v


def _check_degree(degree: float, what: str = "membership degree") -> float:
    d = _check_finite(degree, what)
    if not 0.0 <= d <= 1.0:
        raise InvalidParameterError(f"{what} must lie in [0, 1], got {degree!r}")
    return d


@dataclass(frozen=True)
class DiscreteFuzzy:
    """Finite fuzzy element: sorted (value, degree) pairs with degrees in (0, 1]."""

    entries: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.entries:
            raise InvalidParameterError("a discrete fuzzy element needs at least one entry")
        prev = None
        for v, d in self.entries:
            _check_finite(v, "support value")
            _check_degree(d)
            if d == 0.0:
                raise InvalidParameterError("zero-degree entries must be omitted")
            if prev is not None and not v > prev:
                raise InvalidParameterError("entries must be sorted by strictly increasing value")
            prev = v

    @classmethod
    def from_map(cls, mapping: Mapping[float, float]) -> "DiscreteFuzzy":
        items = sorted((float(v), float(d)) for v, d in mapping.items())
        return cls(tuple(items))

    def as_dict(self) -> dict[float, float]:
        return dict(self.entries)

    @property
    def support(self) -> tuple[float, ...]:
        return tuple(v for v, _ in self.entries)

    @property
    def is_normalized(self) -> bool:
        return any(d == 1.0 for _, d in self.entries)

    def __repr__(self):
        inner = ", ".join(f"{v:g}: {d:g}" for v, d in self.entries)
        return f"DiscreteFuzzy({{{inner}}})"


@dataclass(frozen=True)
class PiecewiseLinearFuzzy:
    """Continuous quasi-concave PL membership function, zero outside its breakpoints.

    Breakpoint x-coordinates strictly increase, degrees rise to 1 and fall
    again, and the peak degree is exactly 1.  A boundary breakpoint may carry
    a positive degree, meaning the membership jumps there (crisp edge); the
    one-breakpoint singleton ``((x, 1.0),)`` is the extreme case.

    ``approximate`` is set on results whose bounds were grid-sampled
    (currently only multiplication) and is propagated through further
    operations.
    """

    breakpoints: tuple[tuple[float, float], ...]
    approximate: bool = field(default=False, compare=False)

    def __post_init__(self):
        pts = self.breakpoints
        if not pts:
            raise InvalidParameterError("a piecewise-linear fuzzy element needs breakpoints")
        prev_x = None
        peak = 0.0
        for x, mu in pts:
            _check_finite(x, "breakpoint x")
            _check_degree(mu)
            if prev_x is not None and not x > prev_x:
                raise InvalidParameterError("breakpoint x-coordinates must strictly increase")
            prev_x = x
            peak = max(peak, mu)
        if peak != 1.0:
            raise InvalidParameterError("membership must reach 1 at some breakpoint")
        mus = [mu for _, mu in pts]
        top = mus.index(1.0)
        if any(mus[i] > mus[i + 1] for i in range(top)) or any(
            mus[i] < mus[i + 1] for i in range(top, len(mus) - 1)
        ):
            raise InvalidParameterError(
                "membership must be non-decreasing then non-increasing (quasi-concave)"
            )

    @classmethod
    def from_points(
        cls, points: Iterable[tuple[float, float]], approximate: bool = False
    ) -> "PiecewiseLinearFuzzy":
        pts = _simplify_points([(float(x), float(mu)) for x, mu in points])
        return cls(tuple(pts), approximate)

    @property
    def support(self) -> tuple[float, float]:
        return (self.breakpoints[0][0], self.breakpoints[-1][0])

    @property
    def is_singleton(self) -> bool:
        return len(self.breakpoints) == 1

    def __repr__(self):
        inner = ", ".join(f"({x:g}, {mu:g})" for x, mu in self.breakpoints)
        flag = ", approximate" if self.approximate else ""
        return f"PiecewiseLinearFuzzy([{inner}]{flag})"


FuzzyElement = Union[DiscreteFuzzy, PiecewiseLinearFuzzy]


def _simplify_points(pts: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Collapse duplicate x (keeping the larger degree) and drop collinear interior points."""
    merged: list[tuple[float, float]] = []
    for x, mu in pts:
        if merged and merged[-1][0] == x:
            if mu > merged[-1][1]:
                merged[-1] = (x, mu)
        else:
            merged.append((x, mu))
    out: list[tuple[float, float]] = []
    for p in merged:
        while len(out) >= 2:
            (x0, m0), (x1, m1) = out[-2], out[-1]
            x2, m2 = p
            # midpoint lies (numerically) on the chord -> redundant
            if abs((x1 - x0) * (m2 - m0) - (m1 - m0) * (x2 - x0)) <= 1e-12 * max(
                1.0, abs(x2 - x0)
            ):
                out.pop()
            else:
                break
        out.append(p)
    return out


# ---------------------------------------------------------------------------
# constructors


def make_discrete(mapping: Mapping[float, float]) -> DiscreteFuzzy:
    """Build a discrete element from a value -> degree mapping."""
    return DiscreteFuzzy.from_map(mapping)


def make_crisp(value: float, kind: str = "discrete") -> FuzzyElement:
    """A crisp value as a degenerate fuzzy element of the requested kind."""
    v = _check_finite(value, "crisp value")
    if kind == "discrete":
        return DiscreteFuzzy(((v, 1.0),))
    if kind == "pl":
        return PiecewiseLinearFuzzy(((v, 1.0),))
    raise InvalidParameterError(f"unknown representation kind {kind!r}")


def make_trap(a: float, b: float, c: float, d: float) -> PiecewiseLinearFuzzy:
    """Trapezoidal fuzzy number with support [a, d] and plateau [b, c].

    Requires a <= b <= c <= d.  Degenerate shapes collapse naturally:
    b == c gives a triangle and a == b == c == d gives the crisp singleton.
    """
    a, b, c, d = (float(t) for t in (a, b, c, d))
    for lo, hi, name in ((a, b, "a <= b"), (b, c, "b <= c"), (c, d, "c <= d")):
        _check_finite(lo, "trapezoid parameter")
        if lo > hi:
            raise InvalidParameterError(f"trapezoid parameters must satisfy {name}")
    _check_finite(d, "trapezoid parameter")
    return PiecewiseLinearFuzzy.from_points([(a, 0.0), (b, 1.0), (c, 1.0), (d, 0.0)])


def make_tri(a: float, b: float, d: float) -> PiecewiseLinearFuzzy:
    """Triangular fuzzy number: peak at b, support [a, d]."""
    return make_trap(a, b, b, d)


# ---------------------------------------------------------------------------
# queries


def membership_at(x: FuzzyElement, value: float) -> float:
    """Exact membership degree of ``value`` in ``x`` (0 outside the support)."""
    v = float(value)
    if isinstance(x, DiscreteFuzzy):
        for u, d in x.entries:
            if u == v:
                return d
        return 0.0
    pts = x.breakpoints
    if v < pts[0][0] or v > pts[-1][0]:
        return 0.0
    xs = [p[0] for p in pts]
    i = bisect_left(xs, v)
    if i < len(xs) and xs[i] == v:
        return pts[i][1]
    (x0, m0), (x1, m1) = pts[i - 1], pts[i]
    return m0 + (m1 - m0) * (v - x0) / (x1 - x0)


def alpha_cut(x: FuzzyElement, alpha: float):
    """The set {v : membership(v) >= alpha} for 0 < alpha <= 1.

    Returns a sorted tuple of values for discrete elements and an
    ``(lower, upper)`` interval for piecewise-linear ones.  ``alpha == 0``
    is rejected: under the >= convention that cut is the whole carrier.
    """
    a = _check_finite(alpha, "alpha")
    if not 0.0 < a <= 1.0:
        raise InvalidParameterError(f"alpha must lie in (0, 1], got {alpha!r}")
    if isinstance(x, DiscreteFuzzy):
        return tuple(v for v, d in x.entries if d >= a)
    lo_pairs, hi_pairs = _envelope_pairs(x)
    return (_pairs_value(lo_pairs, a), _pairs_value(hi_pairs, a))


# ---------------------------------------------------------------------------
# discrete combination


def zadeh_binary_discrete(
    op: Union[str, Callable[[float, float], float]],
    x: DiscreteFuzzy,
    y: DiscreteFuzzy,
) -> DiscreteFuzzy:
    """Extend a crisp binary operation to discrete fuzzy operands.

    ``result[z]`` is the maximum over all support pairs (u, w) with
    op(u, w) == z of min(x[u], y[w]).  ``op`` may be one of the tags in
    :data:`OP_TAGS` (dispatched to the active kernel) or any callable.
    """
    if not isinstance(x, DiscreteFuzzy) or not isinstance(y, DiscreteFuzzy):
        raise RepresentationMismatchError(
            "zadeh_binary_discrete needs two discrete operands; "
            "convert piecewise-linear elements with discretize() first"
        )
    if isinstance(op, str):
        if op not in _OP_CODES:
            raise InvalidParameterError(f"unknown operation tag {op!r}; expected one of {OP_TAGS}")
        values, degrees = _kernels.zadeh_pairs(
            _OP_CODES[op],
            [v for v, _ in x.entries],
            [d for _, d in x.entries],
            [v for v, _ in y.entries],
            [d for _, d in y.entries],
        )
        return DiscreteFuzzy(tuple(zip(values, degrees)))
    best: dict[float, float] = {}
    for u, du in x.entries:
        for w, dw in y.entries:
            z = float(op(u, w))
            d = du if du < dw else dw
            if d > best.get(z, 0.0):
                best[z] = d
    return DiscreteFuzzy(tuple(sorted(best.items())))


def zadeh_extension(
    f: Callable[..., float], elements: Sequence[DiscreteFuzzy]
) -> DiscreteFuzzy:
    """Extend an n-ary crisp function to discrete fuzzy arguments by direct
    enumeration of the support product.  Intended for small instances and as
    an independent cross-check of the specialised engines."""
    if not elements:
        raise InvalidParameterError("zadeh_extension needs at least one argument")
    best: dict[float, float] = {}
    for combo in product(*(e.entries for e in elements)):
        z = float(f(*(v for v, _ in combo)))
        d = min(d for _, d in combo)
        if d > best.get(z, 0.0):
            best[z] = d
    return DiscreteFuzzy(tuple(sorted(best.items())))


# ---------------------------------------------------------------------------
# alpha-cut envelopes for piecewise-linear operands
#
# A bound function (cut lower or upper end) is stored as a list of
# (alpha, x) pairs with non-decreasing alpha from 0.0 to 1.0.  A repeated
# alpha encodes a jump (left value first), which arises from interior
# membership plateaus.  Between distinct alphas the bound is linear.


def _edge_pairs(seq: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Turn one monotone membership edge, given as (mu, x) with mu
    non-decreasing, into a bound function in pair form."""
    pairs = [(0.0, seq[0][1])]
    for (pmu, px), (mu, x) in zip(seq, seq[1:]):
        pairs.append((pmu, px))
        pairs.append((mu, x))
    if pairs[-1][0] < 1.0:
        pairs.append((1.0, seq[-1][1]))
    out = [pairs[0]]
    for p in pairs[1:]:
        if p != out[-1]:
            out.append(p)
    return out


def _envelope_pairs(x: PiecewiseLinearFuzzy):
    """Lower and upper cut-bound functions of a PL element."""
    pts = x.breakpoints
    mus = [mu for _, mu in pts]
    first_top = mus.index(1.0)
    last_top = len(mus) - 1 - mus[::-1].index(1.0)
    rising = [(mu, px) for px, mu in pts[: first_top + 1]]
    falling = [(mu, px) for px, mu in reversed(pts[last_top:])]
    return _edge_pairs(rising), _edge_pairs(falling)


def _pairs_value(pairs: list[tuple[float, float]], a: float, side: str = "left") -> float:
    """Evaluate a bound function at alpha ``a``; ``side`` picks the branch at jumps."""
    alphas = [p[0] for p in pairs]
    if side == "left":
        i = bisect_left(alphas, a)
        if i < len(alphas) and alphas[i] == a:
            return pairs[i][1]
    else:
        i = bisect_left(alphas, a, lo=0)
        j = i
        while j < len(alphas) and alphas[j] == a:
            j += 1
        if j > i:
            return pairs[j - 1][1]
    (a0, x0), (a1, x1) = pairs[i - 1], pairs[i]
    if a1 == a0:
        return x1
    return x0 + (x1 - x0) * (a - a0) / (a1 - a0)


def _slot_alphas(lo_pairs, hi_pairs, extra: Iterable[float] = ()):
    """Merged alpha grid of several bound functions, keeping jump multiplicity."""
    mult: dict[float, int] = {}
    for pairs in (*lo_pairs, *hi_pairs):
        seen: dict[float, int] = {}
        for a, _ in pairs:
            seen[a] = seen.get(a, 0) + 1
        for a, m in seen.items():
            mult[a] = max(mult.get(a, 1), min(m, 2))
    for a in extra:
        mult.setdefault(a, 1)
    slots: list[tuple[float, str]] = []
    for a in sorted(mult):
        if mult[a] == 1:
            slots.append((a, "left"))
        else:
            slots.append((a, "left"))
            slots.append((a, "right"))
    return slots


def _values_at_slots(pairs, slots) -> list[float]:
    return [_pairs_value(pairs, a, side) for a, side in slots]


def _crossings(alphas: list[float], f: list[float], g: list[float]) -> list[float]:
    """Alphas strictly inside a segment where two linear bounds cross."""
    out = []
    for i in range(len(alphas) - 1):
        a0, a1 = alphas[i], alphas[i + 1]
        if a1 <= a0:
            continue
        d0 = f[i] - g[i]
        d1 = f[i + 1] - g[i + 1]
        if d0 == d1 or d0 * d1 >= 0.0:
            continue
        t = d0 / (d0 - d1)
        if 0.0 < t < 1.0:
            out.append(a0 + t * (a1 - a0))
    return out


_INTERVAL_RULES = {
    "min": lambda l1, h1, l2, h2: (min(l1, l2), min(h1, h2)),
    "max": lambda l1, h1, l2, h2: (max(l1, l2), max(h1, h2)),
    "add": lambda l1, h1, l2, h2: (l1 + l2, h1 + h2),
    "sub": lambda l1, h1, l2, h2: (l1 - h2, h1 - l2),
    "mul": lambda l1, h1, l2, h2: (l1 * l2, h1 * h2),
}


def _edge_from_rows(pairs: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Collapse one cut-bound edge, given as (x, alpha) rows with ascending
    alpha, into membership breakpoints.

    A group of rows sharing one x over an alpha span is a vertical stretch of
    the bound.  At the support end (the alpha=0 group) that is a crisp edge
    and collapses to a single breakpoint carrying the top degree; anywhere
    else it is an interior membership discontinuity, which the continuous
    piecewise-linear class cannot express, so it is rejected.
    """
    groups: list[list[float]] = []  # [x, alpha_min, alpha_max]
    for x, a in pairs:
        # crossing insertion can land an ulp off an exactly-flat stretch, so
        # group within float noise of the group's first x
        if groups and abs(x - groups[-1][0]) <= 1e-12 * max(1.0, abs(groups[-1][0])):
            groups[-1][2] = a
        else:
            groups.append([x, a, a])
    for x, a_min, a_max in groups[1:]:
        if a_max > a_min:
            raise UnsupportedOperationError(
                f"the result membership jumps from {a_min:g} to {a_max:g} at "
                f"x={x:g}, leaving the continuous piecewise-linear class "
                "(a crisp-edged operand under min/max can cause this); "
                "discretize the operands to compute this combination"
            )
    return [(x, a_max) for x, _, a_max in groups]


def _rows_to_pl(rows: list[tuple[float, float, float]], approximate: bool) -> PiecewiseLinearFuzzy:
    """Rebuild the membership function from envelope rows (alpha, lo, hi)."""
    rising = _edge_from_rows([(lo, a) for a, lo, _ in rows])
    falling = _edge_from_rows([(hi, a) for a, _, hi in rows])
    falling.reverse()
    return PiecewiseLinearFuzzy.from_points(rising + falling, approximate=approximate)


def zadeh_binary_pl(
    op: str,
    x: PiecewiseLinearFuzzy,
    y: PiecewiseLinearFuzzy,
    alpha_levels: int = DEFAULT_ALPHA_LEVELS,
) -> PiecewiseLinearFuzzy:
    """Combine two piecewise-linear elements level-wise on their alpha-cuts.

    min/max/add/sub are exact: the merged alpha grid plus every crossing of
    competing linear bounds captures all kinks of the result.  mul samples
    ``alpha_levels`` uniform levels and returns an approximate element; it
    requires nonnegative supports.

    One genuine boundary case is rejected rather than approximated: min/max
    of a crisp-edged operand can have an interior membership discontinuity
    (e.g. min with tri(5, 5, 8)), which no continuous piecewise-linear
    function can represent; discretize the operands to compute those.
    """
    if not isinstance(x, PiecewiseLinearFuzzy) or not isinstance(y, PiecewiseLinearFuzzy):
        raise RepresentationMismatchError(
            "zadeh_binary_pl needs two piecewise-linear operands"
        )
    if op not in _INTERVAL_RULES:
        raise InvalidParameterError(f"unknown operation tag {op!r}; expected one of {OP_TAGS}")
    rule = _INTERVAL_RULES[op]
    approx = x.approximate or y.approximate
    lo1p, hi1p = _envelope_pairs(x)
    lo2p, hi2p = _envelope_pairs(y)

    if op == "mul":
        if x.support[0] < 0.0 or y.support[0] < 0.0:
            raise UnsupportedOperationError(
                "fuzzy multiplication is only supported for nonnegative supports"
            )
        if alpha_levels < 1:
            raise InvalidParameterError("alpha_levels must be a positive integer")
        rows = []
        for j in range(alpha_levels + 1):
            a = j / alpha_levels
            lo, hi = rule(
                _pairs_value(lo1p, a),
                _pairs_value(hi1p, a),
                _pairs_value(lo2p, a),
                _pairs_value(hi2p, a),
            )
            rows.append((a, lo, hi))
        return _rows_to_pl(rows, approximate=True)

    slots = _slot_alphas((lo1p, lo2p), (hi1p, hi2p))
    if op in ("min", "max"):
        alphas = [a for a, _ in slots]
        extra: set[float] = set()
        for f_pairs, g_pairs in ((lo1p, lo2p), (hi1p, hi2p)):
            f = _values_at_slots(f_pairs, slots)
            g = _values_at_slots(g_pairs, slots)
            extra.update(_crossings(alphas, f, g))
        if extra:
            slots = _slot_alphas((lo1p, lo2p), (hi1p, hi2p), extra=extra)

    lo1 = _values_at_slots(lo1p, slots)
    hi1 = _values_at_slots(hi1p, slots)
    lo2 = _values_at_slots(lo2p, slots)
    hi2 = _values_at_slots(hi2p, slots)
    rows = []
    for i, (a, _) in enumerate(slots):
        lo, hi = rule(lo1[i], hi1[i], lo2[i], hi2[i])
        rows.append((a, lo, hi))
    return _rows_to_pl(rows, approximate=approx)


# ---------------------------------------------------------------------------
# comparison and conversion


def fuzzy_equal(x: FuzzyElement, y: FuzzyElement, tol: float = 1e-9) -> bool:
    """Membership agreement within ``tol`` at every support point.

    Discrete elements must pair up entry by entry (values and degrees both
    within ``tol``); piecewise-linear elements are compared at the union of
    their breakpoint x-coordinates, which bounds the sup-norm difference.
    Elements of different kinds are unequal, not an error.
    """
    if tol < 0:
        raise InvalidParameterError("tolerance must be nonnegative")
    if isinstance(x, DiscreteFuzzy) != isinstance(y, DiscreteFuzzy):
        return False
    if isinstance(x, DiscreteFuzzy):
        if len(x.entries) != len(y.entries):
            return False
        return all(
            abs(v1 - v2) <= tol and abs(d1 - d2) <= tol
            for (v1, d1), (v2, d2) in zip(x.entries, y.entries)
        )
    xs = sorted({p[0] for p in x.breakpoints} | {p[0] for p in y.breakpoints})
    return all(abs(membership_at(x, v) - membership_at(y, v)) <= tol for v in xs)


def discretize(x: PiecewiseLinearFuzzy, n: int) -> DiscreteFuzzy:
    """Sample a piecewise-linear element onto a discrete one.

    Takes ``n`` uniformly spaced interior points of the support plus every
    breakpoint (so kinks and the peak are represented exactly), keeps the
    exact membership of each and drops zero-degree samples.
    """
    if not isinstance(x, PiecewiseLinearFuzzy):
        raise InvalidParameterError("discretize expects a piecewise-linear element")
    if n < 2:
        raise InvalidParameterError("discretize needs n >= 2 sample points")
    a, d = x.support
    points = {px for px, _ in x.breakpoints}
    if d > a:
        step = (d - a) / (n + 1)
        points.update(a + i * step for i in range(1, n + 1))
    entries = {}
    for v in points:
        mu = membership_at(x, v)
        if mu > 0.0:
            entries[v] = mu
    return DiscreteFuzzy(tuple(sorted(entries.items())))


def crisp_op(tag: str, u: float, w: float) -> float:
    """Apply one of the tagged crisp operations."""
    try:
        return _CRISP_OPS[tag](u, w)
    except KeyError:
        raise InvalidParameterError(
            f"unknown operation tag {tag!r}; expected one of {OP_TAGS}"
        ) from None
