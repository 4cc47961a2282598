"""Built-in demonstrations of the pitfalls the engines are designed around.

Each demo computes both sides of an (in)equality live, compares them against
the hard-coded expected values, and reports PASS only when the computation
reproduces them.  A mismatch means the installation is broken (exit code 4
in the CLI).
"""

from __future__ import annotations

from dataclasses import dataclass

from .attack_tree import AttackTree
from .domains import builtin_domain
from .engines import buggy_bottom_up_on_dag, fuzzy_naive_suite, fuzzy_oracle
from .errors import InvalidParameterError
from .fuzzy import DiscreteFuzzy, fuzzy_equal, make_discrete, zadeh_binary_discrete

DEMO_NAMES = ("nondistributivity", "naive-vs-zadeh", "dag-failure")


@dataclass
class DemoReport:
    name: str
    narrative: list[str]
    sides: list[tuple[str, DiscreteFuzzy]]
    expected: list[DiscreteFuzzy]
    expect_equal: bool

    @property
    def computed_equal(self) -> bool:
        return fuzzy_equal(self.sides[0][1], self.sides[1][1], 1e-9)

    @property
    def self_check_ok(self) -> bool:
        values_ok = all(
            fuzzy_equal(got, want, 1e-9)
            for (_, got), want in zip(self.sides, self.expected)
        )
        return values_ok and self.computed_equal == self.expect_equal


def _demo_nondistributivity() -> DemoReport:
    x = make_discrete({0: 1, 2: 1})
    y = make_discrete({0: 1})
    z = make_discrete({1: 1})
    lhs = zadeh_binary_discrete("min", zadeh_binary_discrete("add", x, y),
                                zadeh_binary_discrete("add", x, z))
    rhs = zadeh_binary_discrete("add", x, zadeh_binary_discrete("min", y, z))
    return DemoReport(
        name="nondistributivity",
        narrative=[
            "For exact values, addition distributes over minimum:",
            "  x + min(y, z) == min(x + y, x + z).",
            "The extended operators combine their operands as independent, so the",
            "shared x on the right-hand side is drawn twice and the law breaks.",
            "Witness: x = {0: 1, 2: 1}, y = {0: 1}, z = {1: 1}.",
            "(With y == z both sides coincide, since min~(s, s) == s; a genuine",
            "witness needs y != z.)",
            "Extended fuzzy values therefore do not form a distributive structure,",
            "which is why shared-structure models need the exhaustive engine.",
        ],
        sides=[
            ("min~(x +~ y, x +~ z)", lhs),
            ("x +~ min~(y, z)", rhs),
        ],
        expected=[
            make_discrete({0: 1, 1: 1, 2: 1}),
            make_discrete({0: 1, 2: 1}),
        ],
        expect_equal=False,
    )


def _demo_naive_vs_zadeh() -> DemoReport:
    tree = AttackTree.from_defs(
        {
            "get_money": ("AND", ("open_vault", "enter_bank")),
            "enter_bank": ("OR", ("sneak_in", "break_in")),
            "open_vault": "BAS",
            "sneak_in": "BAS",
            "break_in": "BAS",
        }
    )
    domain = builtin_domain("min-time")
    attribution = {
        "open_vault": make_discrete({50: 1, 60: 1}),
        "sneak_in": make_discrete({0: 1}),
        "break_in": make_discrete({5: 1}),
    }
    naive = fuzzy_naive_suite(tree, domain, attribution).metric
    exact = fuzzy_oracle(tree, domain, attribution).metric
    return DemoReport(
        name="naive-vs-zadeh",
        narrative=[
            "Bank model: get money = open the vault AND (sneak in OR break in),",
            "with vault time {50: 1, 60: 1}, sneak 0, break-in 5.",
            "Folding extended operators over the minimal attacks compares the two",
            "attacks as if the shared vault step could take 60 in one and 50 in",
            "the other at once, which adds a spurious value 55.  The true metric",
            "draws one vault time per scenario.",
        ],
        sides=[
            ("suite formula", naive),
            ("extension-principle metric", exact),
        ],
        expected=[
            make_discrete({50: 1, 55: 1, 60: 1}),
            make_discrete({50: 1, 60: 1}),
        ],
        expect_equal=False,
    )


def _demo_dag_failure() -> DemoReport:
    tree = AttackTree.from_defs(
        {
            "root": ("AND", ("left", "right")),
            "left": ("OR", ("u", "v")),
            "right": ("OR", ("v", "w")),
            "u": "BAS",
            "v": "BAS",
            "w": "BAS",
        }
    )
    domain = builtin_domain("min-cost")
    attribution = {
        "u": make_discrete({1: 1}),
        "v": make_discrete({0: 1, 3: 1}),
        "w": make_discrete({1: 1}),
    }
    buggy = buggy_bottom_up_on_dag(tree, domain, attribution).metric
    exact = fuzzy_oracle(tree, domain, attribution).metric
    return DemoReport(
        name="dag-failure",
        narrative=[
            "Shared-leaf model: root = (u OR v) AND (v OR w), with v shared,",
            "u = {1: 1}, v = {0: 1, 3: 1}, w = {1: 1} under min-cost.",
            "The bottom-up fold does not see that v feeds both gates; it combines",
            "v's value with itself as if independent and invents the value 1.",
            "The exhaustive engine fixes one value of v per combination.",
        ],
        sides=[
            ("bottom-up fold on the DAG (unsound)", buggy),
            ("exhaustive engine", exact),
        ],
        expected=[
            make_discrete({0: 1, 1: 1, 2: 1}),
            make_discrete({0: 1, 2: 1}),
        ],
        expect_equal=False,
    )


_DEMOS = {
    "nondistributivity": _demo_nondistributivity,
    "naive-vs-zadeh": _demo_naive_vs_zadeh,
    "dag-failure": _demo_dag_failure,
}


def run_demo(name: str) -> DemoReport:
    try:
        builder = _DEMOS[name]
    except KeyError:
        raise InvalidParameterError(
            f"unknown demo {name!r}; available: {', '.join(DEMO_NAMES)}"
        ) from None
    return builder()
