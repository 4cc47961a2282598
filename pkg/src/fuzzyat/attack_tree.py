"""The attack tree model: a rooted DAG of AND/OR gates over basic attack
steps (BAS), its boolean semantics, and module detection for
divide-and-conquer analysis."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .errors import BlowupError, InvalidSplitError, ModelError

BAS = "BAS"
OR = "OR"
AND = "AND"

DEFAULT_SUITE_CAP = 10**6

_ID_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")


@dataclass(frozen=True)
class Node:
    id: str
    type: str  # BAS | OR | AND
    children: tuple[str, ...] = ()


class AttackTree:
    """Immutable rooted DAG.  Validation happens at construction; every
    instance you can hold satisfies the structural invariants."""

    def __init__(self, nodes: Mapping[str, Node], root: Optional[str] = None):
        self.nodes: dict[str, Node] = dict(nodes)
        self.root = self._find_root() if root is None else root
        self.validate()
        self._suite_cache: Optional[tuple[frozenset[str], ...]] = None

    @classmethod
    def from_defs(cls, defs: Mapping[str, Sequence], root: Optional[str] = None) -> "AttackTree":
        """Build from ``{id: (type, children)}`` or ``{id: type}`` for leaves."""
        nodes = {}
        for node_id, spec in defs.items():
            if isinstance(spec, str):
                nodes[node_id] = Node(node_id, spec)
            else:
                kind, children = spec
                nodes[node_id] = Node(node_id, kind, tuple(children))
        return cls(nodes, root)

    def __eq__(self, other):
        return (
            isinstance(other, AttackTree)
            and self.root == other.root
            and self.nodes == other.nodes
        )

    def __hash__(self):
        return hash((self.root, frozenset(self.nodes)))

    def _find_root(self) -> str:
        with_parent = {c for node in self.nodes.values() for c in node.children}
        parentless = [n for n in self.nodes if n not in with_parent]
        if len(parentless) == 1:
            return parentless[0]
        if not parentless:
            raise ModelError("no parentless node: the model contains a cycle")
        raise ModelError(
            "ambiguous root: multiple parentless nodes: " + ", ".join(sorted(parentless))
        )

    # -- validation ---------------------------------------------------------

    def validate(self) -> None:
        """Check all structural invariants, raising ModelError on the first violation."""
        if not self.nodes:
            raise ModelError("empty model")
        for node_id, node in self.nodes.items():
            if not _ID_RE.match(node_id):
                raise ModelError(f"invalid node id {node_id!r}")
            if node.type not in (BAS, OR, AND):
                raise ModelError(f"node {node_id!r} has unknown type {node.type!r}")
            if node.type == BAS and node.children:
                raise ModelError(f"basic attack step {node_id!r} must not have children")
            if node.type != BAS and not node.children:
                raise ModelError(f"gate {node_id!r} needs at least one child")
            if len(set(node.children)) != len(node.children):
                # edges form a set; a repeated child would double-count in folds
                raise ModelError(f"gate {node_id!r} lists a child more than once")
            for c in node.children:
                if c not in self.nodes:
                    raise ModelError(f"node {node_id!r} references undefined node {c!r}")
        if self.root not in self.nodes:
            raise ModelError(f"root {self.root!r} is not a node")
        parents = self.parent_map()
        if parents[self.root]:
            raise ModelError(f"root {self.root!r} has a parent")
        orphans = sorted(n for n in self.nodes if n != self.root and not parents[n])
        if orphans:
            raise ModelError(
                "ambiguous root: multiple parentless nodes: "
                + ", ".join(sorted([self.root] + orphans))
            )
        cycle = self._find_cycle()
        if cycle:
            raise ModelError("cycle detected: " + " -> ".join(cycle))
        unreachable = sorted(set(self.nodes) - self.descendants(self.root))
        if unreachable:
            raise ModelError(f"nodes unreachable from root: {', '.join(unreachable)}")

    def _find_cycle(self) -> Optional[list[str]]:
        WHITE, GREY, BLACK = 0, 1, 2
        color = {n: WHITE for n in self.nodes}
        path: list[str] = []

        def visit(n: str) -> Optional[list[str]]:
            color[n] = GREY
            path.append(n)
            for c in self.nodes[n].children:
                if color[c] == GREY:
                    return path[path.index(c):] + [c]
                if color[c] == WHITE:
                    found = visit(c)
                    if found:
                        return found
            path.pop()
            color[n] = BLACK
            return None

        for n in sorted(self.nodes):
            if color[n] == WHITE:
                found = visit(n)
                if found:
                    return found
        return None

    # -- basic queries ------------------------------------------------------

    @property
    def bas_ids(self) -> tuple[str, ...]:
        return tuple(sorted(n for n, node in self.nodes.items() if node.type == BAS))

    def parent_map(self) -> dict[str, set[str]]:
        parents: dict[str, set[str]] = {n: set() for n in self.nodes}
        for node in self.nodes.values():
            for c in node.children:
                parents[c].add(node.id)
        return parents

    def descendants(self, v: str) -> set[str]:
        """All nodes reachable from v, including v."""
        seen = {v}
        stack = [v]
        while stack:
            for c in self.nodes[stack.pop()].children:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return seen

    def is_tree_shaped(self) -> bool:
        """True iff every non-root node has exactly one parent edge."""
        edge_count = sum(len(node.children) for node in self.nodes.values())
        if edge_count != len(self.nodes) - 1:
            return False
        return all(
            len(ps) == 1 for n, ps in self.parent_map().items() if n != self.root
        )

    def depths(self) -> dict[str, int]:
        """Longest edge distance from the root to each node (well defined: acyclic)."""
        order = self.topological_order()
        depth = {self.root: 0}
        for n in order:
            for c in self.nodes[n].children:
                d = depth[n] + 1
                if d > depth.get(c, -1):
                    depth[c] = d
        return depth

    def topological_order(self) -> list[str]:
        """Parents before children, starting at the root; deterministic."""
        indeg = {n: 0 for n in self.nodes}
        for node in self.nodes.values():
            for c in node.children:
                indeg[c] += 1
        ready = [self.root]
        out = []
        while ready:
            n = ready.pop()
            out.append(n)
            for c in self.nodes[n].children:
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        return out

    # -- semantics ----------------------------------------------------------

    def structure_function(self, v: str, attack: Iterable[str]) -> bool:
        """Does the given attack (set of BAS ids) reach node v?"""
        if v not in self.nodes:
            raise ModelError(f"unknown node {v!r}")
        chosen = frozenset(attack)
        memo: dict[str, bool] = {}

        def evaluate(n: str) -> bool:
            if n in memo:
                return memo[n]
            node = self.nodes[n]
            if node.type == BAS:
                result = n in chosen
            elif node.type == OR:
                result = any(evaluate(c) for c in node.children)
            else:
                result = all(evaluate(c) for c in node.children)
            memo[n] = result
            return result

        return evaluate(v)

    def minimal_attacks(self, cap: int = DEFAULT_SUITE_CAP) -> tuple[frozenset[str], ...]:
        """The suite of minimal attacks reaching the root.

        Built bottom-up: a BAS contributes {{v}}, an OR-gate the minimized
        union of its children's suites, an AND-gate the minimized pairwise
        unions.  Node results are memoized, so shared subgraphs are computed
        once.  Canonical order: by size, then by sorted member ids.
        """
        if self._suite_cache is not None:
            if len(self._suite_cache) > cap:
                raise BlowupError(_blowup_message(cap))
            return self._suite_cache
        memo: dict[str, list[frozenset[str]]] = {}
        for n in reversed(self.topological_order()):
            node = self.nodes[n]
            if node.type == BAS:
                memo[n] = [frozenset((n,))]
            elif node.type == OR:
                combined: list[frozenset[str]] = []
                for c in node.children:
                    combined.extend(memo[c])
                    if len(combined) > cap:
                        raise BlowupError(_blowup_message(cap))
                memo[n] = _minimize(combined)
            else:
                acc = memo[node.children[0]]
                for c in node.children[1:]:
                    if len(acc) * len(memo[c]) > cap:
                        raise BlowupError(_blowup_message(cap))
                    acc = _minimize([a | b for a in acc for b in memo[c]])
                memo[n] = acc
        suite = tuple(sorted(memo[self.root], key=lambda s: (len(s), sorted(s))))
        self._suite_cache = suite
        return suite

    # -- modules ------------------------------------------------------------

    def find_modules(self) -> set[str]:
        """Gates whose descendants connect to the rest of the model only
        through the gate itself.  The root is always included."""
        parents = self.parent_map()
        modules = {self.root}
        for v, node in self.nodes.items():
            if node.type == BAS or v == self.root:
                continue
            desc = self.descendants(v)
            if all(parents[w] <= desc for w in desc if w != v):
                modules.add(v)
        return modules

    def split_at_module(self, v: str) -> tuple["AttackTree", "AttackTree"]:
        """Split at a module: the sub-model rooted at v, and the quotient in
        which v is replaced by a single BAS."""
        if v == self.root:
            return self, AttackTree({v: Node(v, BAS)}, root=v)
        if v not in self.find_modules() or self.nodes[v].type == BAS:
            raise InvalidSplitError(f"node {v!r} is not a module of this model")
        desc = self.descendants(v)
        sub = AttackTree({n: self.nodes[n] for n in desc}, root=v)
        quotient_nodes = {
            n: node for n, node in self.nodes.items() if n not in desc or n == v
        }
        quotient_nodes[v] = Node(v, BAS)
        quotient = AttackTree(quotient_nodes, root=self.root)
        return sub, quotient

    def graft(self, v: str, sub: "AttackTree") -> "AttackTree":
        """Inverse of split_at_module: replace BAS ``v`` by a sub-model rooted at v."""
        if self.nodes[v].type != BAS:
            raise ModelError(f"graft target {v!r} must be a basic attack step")
        if sub.root != v:
            raise ModelError(f"sub-model root {sub.root!r} does not match target {v!r}")
        merged = dict(self.nodes)
        del merged[v]
        for n, node in sub.nodes.items():
            if n in merged:
                raise ModelError(f"node id collision while grafting: {n!r}")
            merged[n] = node
        return AttackTree(merged, root=self.root)


def suite_to_lists(suite: Iterable[frozenset[str]]) -> list[list[str]]:
    """JSON-ready form of an attack suite: arrays of sorted id arrays, in the
    canonical suite order (size, then members)."""
    return [sorted(attack) for attack in suite]


def _minimize(sets: Iterable[frozenset[str]]) -> list[frozenset[str]]:
    """Antichain of an iterable of sets: drop duplicates and supersets."""
    unique = sorted(set(sets), key=lambda s: (len(s), sorted(s)))
    kept: list[frozenset[str]] = []
    for s in unique:
        if not any(k <= s for k in kept):
            kept.append(s)
    return kept


def _blowup_message(cap: int) -> str:
    return (
        f"minimal-attack suite exceeds the cap of {cap} attacks; "
        "the suite grows exponentially with shared structure, raise --suite-cap "
        "only if you know the model is tractable"
    )
