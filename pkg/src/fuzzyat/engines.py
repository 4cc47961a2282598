"""Metric engines.

* ``crisp_metric``       -- exact metric from the minimal-attack suite.
* ``fuzzy_oracle``       -- exhaustive extension-principle metric for
                            discrete attributions; correct on any DAG and the
                            reference the other engines are checked against.
* ``fuzzy_bottom_up``    -- linear-time fold for tree-shaped models (discrete
                            or piecewise-linear attributions).
* ``fuzzy_modular``      -- splits off modules, solves them bottom-up, and
                            leaves only the irreducible residue to the oracle.
* ``fuzzy_naive_suite``  -- the suite formula with extended operators applied
                            directly.  Diagnostic only: it treats repeated
                            occurrences of a shared leaf as independent and in
                            general differs from the true metric.
* ``buggy_bottom_up_on_dag`` -- the bottom-up fold run on a DAG anyway, for
                            demonstration; unsound whenever leaves are shared.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import prod
from typing import Mapping, Optional

from . import _kernels
from .attack_tree import AttackTree, DEFAULT_SUITE_CAP
from .domains import (
    AttributeDomain,
    apply_fuzzy,
    check_carrier,
    check_element_carrier,
)
from .errors import (
    BlowupError,
    InvalidParameterError,
    ModelError,
    RepresentationMismatchError,
    UnsupportedOperationError,
)
from .fuzzy import (
    DEFAULT_ALPHA_LEVELS,
    DiscreteFuzzy,
    FuzzyElement,
    PiecewiseLinearFuzzy,
    crisp_op,
)

DEFAULT_ORACLE_CAP = 10**7

_OP_CODES = {"min": 0, "max": 1, "add": 2, "sub": 3, "mul": 4}

ENGINE_NAMES = ("bottom-up", "oracle", "modular", "naive", "buggy-dag")


@dataclass
class AnalysisResult:
    metric: FuzzyElement
    engine: str
    approximate: bool = False
    stats: dict = field(default_factory=dict)

    def to_json_dict(self, include_timing: bool = False) -> dict:
        if isinstance(self.metric, DiscreteFuzzy):
            result = {"kind": "discrete", "entries": [[v, d] for v, d in self.metric.entries]}
        else:
            result = {
                "kind": "piecewise-linear",
                "breakpoints": [[x, mu] for x, mu in self.metric.breakpoints],
            }
        stats = {k: v for k, v in self.stats.items() if include_timing or k != "wall_time_s"}
        return {
            "engine": self.engine,
            "approximate": self.approximate,
            "result": result,
            "stats": stats,
        }


# ---------------------------------------------------------------------------
# attribution validation


def check_crisp_attribution(
    tree: AttackTree, domain: AttributeDomain, values: Mapping[str, float]
) -> None:
    _check_coverage(tree, values)
    for b, v in values.items():
        check_carrier(domain, v, context=f"attribute of {b!r}")


def check_fuzzy_attribution(
    tree: AttackTree, domain: AttributeDomain, attribution: Mapping[str, FuzzyElement]
) -> str:
    """Validate coverage, carrier, normalization and representation uniformity.

    Returns the common representation kind, 'discrete' or 'pl'.
    """
    _check_coverage(tree, attribution)
    kinds = set()
    for b, element in attribution.items():
        check_element_carrier(domain, element, context=f"support of {b!r}")
        if isinstance(element, DiscreteFuzzy):
            kinds.add("discrete")
            if not element.is_normalized:
                raise InvalidParameterError(
                    f"attribute of {b!r} is not normalized (no support point has degree 1)"
                )
        else:
            kinds.add("pl")
    if len(kinds) > 1:
        raise RepresentationMismatchError(
            "attribution mixes discrete and piecewise-linear elements; "
            "discretize the piecewise-linear ones explicitly"
        )
    return kinds.pop()


def _check_coverage(tree: AttackTree, values: Mapping[str, object]) -> None:
    bas = set(tree.bas_ids)
    given = set(values)
    missing = sorted(bas - given)
    if missing:
        raise ModelError(f"attribution misses basic attack steps: {', '.join(missing)}")
    extra = sorted(given - bas)
    if extra:
        raise ModelError(
            f"attribution names nodes that are not basic attack steps: {', '.join(extra)}"
        )


# ---------------------------------------------------------------------------
# crisp metric


def crisp_metric(
    tree: AttackTree,
    domain: AttributeDomain,
    values: Mapping[str, float],
    suite_cap: int = DEFAULT_SUITE_CAP,
) -> float:
    """Disjunction over minimal attacks of the conjunction of their leaf values.

    Works on DAGs.  On tree-shaped models the result is cross-checked against
    the direct bottom-up fold.
    """
    check_crisp_attribution(tree, domain, values)
    suite = tree.minimal_attacks(cap=suite_cap)
    disj = domain.disjunction
    conj = domain.conjunction
    metric: Optional[float] = None
    for attack in suite:
        members = sorted(attack)
        acc = float(values[members[0]])
        for m in members[1:]:
            acc = crisp_op(conj, acc, float(values[m]))
        metric = acc if metric is None else crisp_op(disj, metric, acc)
    assert metric is not None
    if tree.is_tree_shaped():
        folded = _crisp_fold(tree, domain, values)
        if abs(folded - metric) > 1e-9 * max(1.0, abs(metric)):
            raise AssertionError(
                f"internal inconsistency: suite metric {metric} != bottom-up fold {folded}"
            )
    return metric


def _crisp_fold(tree, domain, values):
    memo: dict[str, float] = {}
    for n in reversed(tree.topological_order()):
        node = tree.nodes[n]
        if node.type == "BAS":
            memo[n] = float(values[n])
        else:
            tag = domain.disjunction if node.type == "OR" else domain.conjunction
            acc = memo[node.children[0]]
            for c in node.children[1:]:
                acc = crisp_op(tag, acc, memo[c])
            memo[n] = acc
    return memo[tree.root]


# ---------------------------------------------------------------------------
# fuzzy engines


def fuzzy_oracle(
    tree: AttackTree,
    domain: AttributeDomain,
    attribution: Mapping[str, FuzzyElement],
    oracle_cap: int = DEFAULT_ORACLE_CAP,
    suite_cap: int = DEFAULT_SUITE_CAP,
) -> AnalysisResult:
    """Exact fuzzy metric by enumerating every combination of leaf support
    values: the degree of a metric value is the max over combinations mapping
    to it of the min of the chosen leaf degrees.  Discrete attributions only;
    correct for any DAG."""
    kind = check_fuzzy_attribution(tree, domain, attribution)
    if kind != "discrete":
        raise UnsupportedOperationError(
            "the exhaustive engine needs discrete attributions; "
            "apply discretize() to piecewise-linear elements first"
        )
    t0 = time.perf_counter()
    bas = tree.bas_ids
    supports = [attribution[b] for b in bas]
    total = prod(len(e.entries) for e in supports)
    if total > oracle_cap:
        raise BlowupError(
            f"{total} support combinations exceed the cap of {oracle_cap}; "
            "reduce support sizes or raise --oracle-cap"
        )
    suite = tree.minimal_attacks(cap=suite_cap)
    index = {b: i for i, b in enumerate(bas)}
    attacks = [tuple(index[m] for m in sorted(a)) for a in suite]
    values, degrees, count = _kernels.oracle_accumulate(
        _OP_CODES[domain.disjunction],
        _OP_CODES[domain.conjunction],
        [[v for v, _ in e.entries] for e in supports],
        [[d for _, d in e.entries] for e in supports],
        attacks,
    )
    metric = DiscreteFuzzy(tuple(zip(values, degrees)))
    return AnalysisResult(
        metric,
        engine="oracle",
        approximate=False,
        stats={
            "nodes_visited": len(tree.nodes),
            "combinations": int(count),
            "wall_time_s": time.perf_counter() - t0,
        },
    )


def fuzzy_bottom_up(
    tree: AttackTree,
    domain: AttributeDomain,
    attribution: Mapping[str, FuzzyElement],
    alpha_levels: int = DEFAULT_ALPHA_LEVELS,
) -> AnalysisResult:
    """Post-order fold of the extended operators over a tree-shaped model.

    Matches the exhaustive engine exactly on discrete attributions; also the
    only engine accepting piecewise-linear attributions.
    """
    if not tree.is_tree_shaped():
        raise UnsupportedOperationError(
            "the bottom-up engine needs a tree-shaped model (every node one parent); "
            "use the modular or exhaustive engine for shared structure"
        )
    check_fuzzy_attribution(tree, domain, attribution)
    t0 = time.perf_counter()
    metric = _fuzzy_fold(tree, domain, attribution, alpha_levels)
    approx = isinstance(metric, PiecewiseLinearFuzzy) and metric.approximate
    return AnalysisResult(
        metric,
        engine="bottom-up",
        approximate=approx,
        stats={
            "nodes_visited": len(tree.nodes),
            "combinations": 0,
            "wall_time_s": time.perf_counter() - t0,
        },
    )


def _fuzzy_fold(tree, domain, attribution, alpha_levels):
    memo: dict[str, FuzzyElement] = {}
    for n in reversed(tree.topological_order()):
        node = tree.nodes[n]
        if node.type == "BAS":
            memo[n] = attribution[n]
        else:
            which = "disjunction" if node.type == "OR" else "conjunction"
            acc = memo[node.children[0]]
            for c in node.children[1:]:
                acc = apply_fuzzy(domain, which, acc, memo[c], alpha_levels=alpha_levels)
            memo[n] = acc
    return memo[tree.root]


def fuzzy_modular(
    tree: AttackTree,
    domain: AttributeDomain,
    attribution: Mapping[str, FuzzyElement],
    oracle_cap: int = DEFAULT_ORACLE_CAP,
    suite_cap: int = DEFAULT_SUITE_CAP,
) -> AnalysisResult:
    """Module-by-module decomposition.

    Repeatedly split off the deepest non-root module, compute its metric
    (bottom-up when the sub-model is a tree, recursively otherwise), and
    substitute the result as the attribute of the module's replacement leaf.
    The irreducible residue goes to the exhaustive engine.  Equals the
    exhaustive engine on the whole model.
    """
    kind = check_fuzzy_attribution(tree, domain, attribution)
    if kind != "discrete":
        raise UnsupportedOperationError(
            "the modular engine needs discrete attributions (its residue is solved "
            "exhaustively); piecewise-linear attributions work on tree-shaped models "
            "via the bottom-up engine"
        )
    t0 = time.perf_counter()
    current = tree
    attr = dict(attribution)
    nodes_visited = 0
    combinations = 0
    while True:
        gates = {
            v for v in current.find_modules()
            if v != current.root and current.nodes[v].type != "BAS"
        }
        if not gates:
            break
        depths = current.depths()
        v = min(gates, key=lambda g: (-depths[g], g))
        sub, quotient = current.split_at_module(v)
        sub_attr = {b: attr[b] for b in sub.bas_ids}
        if sub.is_tree_shaped():
            part = fuzzy_bottom_up(sub, domain, sub_attr)
        else:
            part = fuzzy_modular(
                sub, domain, sub_attr, oracle_cap=oracle_cap, suite_cap=suite_cap
            )
        nodes_visited += part.stats.get("nodes_visited", 0)
        combinations += part.stats.get("combinations", 0)
        current = quotient
        attr = {b: attr[b] for b in quotient.bas_ids if b != v}
        attr[v] = part.metric
    residue = fuzzy_oracle(
        current, domain, attr, oracle_cap=oracle_cap, suite_cap=suite_cap
    )
    return AnalysisResult(
        residue.metric,
        engine="modular",
        approximate=False,
        stats={
            "nodes_visited": nodes_visited + residue.stats["nodes_visited"],
            "combinations": combinations + residue.stats["combinations"],
            "wall_time_s": time.perf_counter() - t0,
        },
    )


def fuzzy_naive_suite(
    tree: AttackTree,
    domain: AttributeDomain,
    attribution: Mapping[str, FuzzyElement],
    suite_cap: int = DEFAULT_SUITE_CAP,
) -> AnalysisResult:
    """Extended operators applied over the minimal-attack suite directly.

    Every occurrence of a shared leaf is combined as if independent, so this
    generally differs from the true fuzzy metric; it is exposed for
    comparison and teaching.  It does coincide when no leaf is repeated
    across or within attacks, and on crisp (singleton) attributions.
    """
    kind = check_fuzzy_attribution(tree, domain, attribution)
    if kind != "discrete":
        raise UnsupportedOperationError("the naive suite engine needs discrete attributions")
    t0 = time.perf_counter()
    suite = tree.minimal_attacks(cap=suite_cap)
    metric: Optional[FuzzyElement] = None
    for attack in suite:
        members = sorted(attack)
        acc = attribution[members[0]]
        for m in members[1:]:
            acc = apply_fuzzy(domain, "conjunction", acc, attribution[m])
        metric = acc if metric is None else apply_fuzzy(domain, "disjunction", metric, acc)
    assert metric is not None
    return AnalysisResult(
        metric,
        engine="naive",
        approximate=False,
        stats={
            "nodes_visited": len(tree.nodes),
            "combinations": 0,
            "wall_time_s": time.perf_counter() - t0,
        },
    )


def buggy_bottom_up_on_dag(
    tree: AttackTree,
    domain: AttributeDomain,
    attribution: Mapping[str, FuzzyElement],
) -> AnalysisResult:
    """The bottom-up fold run on an arbitrary DAG, memoizing each node once.

    Unsound whenever a node is shared: the fold combines a shared node's
    value with itself as if the copies were independent.  Provided solely to
    demonstrate that failure; the result is labeled unsound-on-dag.
    """
    kind = check_fuzzy_attribution(tree, domain, attribution)
    if kind != "discrete":
        raise UnsupportedOperationError("the buggy-dag demonstration needs discrete attributions")
    t0 = time.perf_counter()
    metric = _fuzzy_fold(tree, domain, attribution, DEFAULT_ALPHA_LEVELS)
    return AnalysisResult(
        metric,
        engine="buggy-dag",
        approximate=False,
        stats={
            "nodes_visited": len(tree.nodes),
            "combinations": 0,
            "wall_time_s": time.perf_counter() - t0,
            "warning": "unsound-on-dag",
        },
    )


# ---------------------------------------------------------------------------
# dispatch


def select_engine(tree: AttackTree, engine: str = "auto") -> str:
    """Resolve 'auto' to the strongest applicable engine."""
    if engine == "auto":
        return "bottom-up" if tree.is_tree_shaped() else "modular"
    if engine not in ENGINE_NAMES:
        raise InvalidParameterError(
            f"unknown engine {engine!r}; expected auto or one of {', '.join(ENGINE_NAMES)}"
        )
    return engine


def run_analysis(
    tree: AttackTree,
    domain: AttributeDomain,
    attribution: Mapping[str, FuzzyElement],
    engine: str = "auto",
    alpha_levels: int = DEFAULT_ALPHA_LEVELS,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
    suite_cap: int = DEFAULT_SUITE_CAP,
) -> AnalysisResult:
    """Run the requested (or automatically selected) engine."""
    name = select_engine(tree, engine)
    if name == "bottom-up":
        return fuzzy_bottom_up(tree, domain, attribution, alpha_levels=alpha_levels)
    if name == "oracle":
        return fuzzy_oracle(tree, domain, attribution, oracle_cap=oracle_cap, suite_cap=suite_cap)
    if name == "modular":
        return fuzzy_modular(tree, domain, attribution, oracle_cap=oracle_cap, suite_cap=suite_cap)
    if name == "naive":
        return fuzzy_naive_suite(tree, domain, attribution, suite_cap=suite_cap)
    return buggy_bottom_up_on_dag(tree, domain, attribution)
