"""The model file format (.fat): attack trees plus named attributions.

Grammar (whitespace-insensitive, ``#`` starts a line comment)::

    file        := (tree_block | attr_block)*
    tree_block  := "tree" IDENT "{" node_def+ "}"
    node_def    := IDENT "=" ("AND"|"OR") "(" IDENT ("," IDENT)* ")" ";"
                 | IDENT ":" "BAS" ";"
    attr_block  := "attribution" IDENT "for" IDENT "domain" "=" IDENT
                   "{" assign* "}"
    assign      := IDENT "=" fexpr ";"
    fexpr       := "crisp" "(" NUM ")"
                 | "tri" "(" NUM "," NUM "," NUM ")"
                 | "trap" "(" NUM "," NUM "," NUM "," NUM ")"
                 | "discrete" "{" NUM ":" NUM ("," NUM ":" NUM)* "}"

IDENT is ``[A-Za-z_][A-Za-z0-9_-]*`` (the hyphen admits domain names like
``min-cost``); NUM is a nonnegative decimal with optional fraction.  The root
of a tree is the unique node that never appears as a child.  Keywords are
contextual, so they remain usable as node names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Optional

from .attack_tree import AttackTree, Node
from .domains import AttributeDomain, builtin_domain
from .errors import ModelError, ParseError
from .fuzzy import FuzzyElement, make_crisp, make_discrete, make_trap, make_tri

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<num>[0-9]+(?:\.[0-9]+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_-]*)
  | (?P<punct>[{}()=:;,])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident' | 'num' | 'punct' | 'eof'
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        lexeme = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(Token("eof", "<end of file>", line, col))
    return tokens


@dataclass(frozen=True)
class FuzzyExpr:
    """Unevaluated attribute expression as written in the file."""

    kind: str  # 'crisp' | 'tri' | 'trap' | 'discrete'
    params: tuple[float, ...] = ()
    entries: tuple[tuple[float, float], ...] = ()

    def to_element(self, target: str) -> FuzzyElement:
        """Materialize for a 'discrete' or 'pl' analysis run."""
        if self.kind == "crisp":
            return make_crisp(self.params[0], kind=target)
        if self.kind == "tri":
            return make_tri(*self.params)
        if self.kind == "trap":
            return make_trap(*self.params)
        return make_discrete(dict(self.entries))

    @property
    def natural_kind(self) -> str:
        if self.kind in ("tri", "trap"):
            return "pl"
        if self.kind == "discrete":
            return "discrete"
        return "crisp"


@dataclass
class AttributionBlock:
    name: str
    tree: str
    domain: AttributeDomain
    values: dict[str, FuzzyExpr]

    def __eq__(self, other):
        return (
            isinstance(other, AttributionBlock)
            and (self.name, self.tree, self.domain, self.values)
            == (other.name, other.tree, other.domain, other.values)
        )


@dataclass
class ModelFile:
    trees: dict[str, AttackTree] = field(default_factory=dict)
    attributions: dict[str, AttributionBlock] = field(default_factory=dict)

    def __eq__(self, other):
        return (
            isinstance(other, ModelFile)
            and self.trees == other.trees
            and self.attributions == other.attributions
        )

    def materialize(self, attribution_name: str) -> tuple[AttackTree, AttributeDomain, dict[str, FuzzyElement]]:
        """Resolve an attribution to (tree, domain, id -> element).

        Crisp values adopt the representation kind of the other expressions;
        a mix of discrete maps and tri/trap shapes is rejected.
        """
        if attribution_name not in self.attributions:
            known = ", ".join(sorted(self.attributions)) or "(none)"
            raise ModelError(
                f"unknown attribution {attribution_name!r}; available: {known}"
            )
        block = self.attributions[attribution_name]
        tree = self.trees[block.tree]
        kinds = {e.natural_kind for e in block.values.values()}
        kinds.discard("crisp")
        if kinds == {"pl", "discrete"}:
            raise ModelError(
                f"attribution {attribution_name!r} mixes discrete maps with tri/trap "
                "shapes; discretize the shapes explicitly"
            )
        target = kinds.pop() if kinds else "discrete"
        elements = {b: e.to_element(target) for b, e in block.values.items()}
        return tree, block.domain, elements


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        raise ParseError(f"{message} (at {tok.text!r})", tok.line, tok.column)

    def expect(self, kind: str, text: Optional[str] = None, what: Optional[str] = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            wanted = what or (f"'{text}'" if text else kind)
            self.fail(f"expected {wanted}", tok)
        return self.next()

    def expect_keyword(self, word: str) -> Token:
        return self.expect("ident", word, what=f"'{word}'")

    def ident(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            self.fail(f"expected {what}", tok)
        return self.next()

    def number(self, what: str = "number") -> tuple[float, Token]:
        tok = self.peek()
        if tok.kind != "num":
            self.fail(f"expected {what}", tok)
        self.next()
        return float(tok.text), tok

    # -- grammar ------------------------------------------------------------

    def parse_file(self) -> ModelFile:
        model = ModelFile()
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                break
            if tok.kind == "ident" and tok.text == "tree":
                name, tree = self.parse_tree_block()
                if name in model.trees:
                    self.fail(f"duplicate tree name {name!r}", tok)
                model.trees[name] = tree
            elif tok.kind == "ident" and tok.text == "attribution":
                block = self.parse_attr_block(model)
                if block.name in model.attributions:
                    self.fail(f"duplicate attribution name {block.name!r}", tok)
                model.attributions[block.name] = block
            else:
                self.fail("expected 'tree' or 'attribution'", tok)
        return model

    def parse_tree_block(self) -> tuple[str, AttackTree]:
        self.expect_keyword("tree")
        name_tok = self.ident("tree name")
        self.expect("punct", "{")
        nodes: dict[str, Node] = {}
        def_tokens: dict[str, Token] = {}
        ref_tokens: dict[str, Token] = {}
        while not (self.peek().kind == "punct" and self.peek().text == "}"):
            node_tok = self.ident("node definition")
            node_id = node_tok.text
            if node_id in nodes:
                self.fail(f"duplicate node {node_id!r}", node_tok)
            sep = self.peek()
            if sep.kind == "punct" and sep.text == ":":
                self.next()
                self.expect_keyword("BAS")
                nodes[node_id] = Node(node_id, "BAS")
            elif sep.kind == "punct" and sep.text == "=":
                self.next()
                gate_tok = self.ident("'AND' or 'OR'")
                if gate_tok.text not in ("AND", "OR"):
                    self.fail("expected 'AND' or 'OR'", gate_tok)
                self.expect("punct", "(")
                children = [self.ident("child node")]
                while self.peek().text == ",":
                    self.next()
                    children.append(self.ident("child node"))
                self.expect("punct", ")")
                for child in children:
                    ref_tokens.setdefault(child.text, child)
                nodes[node_id] = Node(node_id, gate_tok.text, tuple(c.text for c in children))
            else:
                self.fail("expected '=' (gate) or ':' (basic attack step)", sep)
            self.expect("punct", ";", what="';'")
            def_tokens[node_id] = node_tok
        self.expect("punct", "}")
        if not nodes:
            self.fail(f"tree {name_tok.text!r} has no nodes", name_tok)
        for ref, tok in ref_tokens.items():
            if ref not in nodes:
                self.fail(f"reference to undefined node {ref!r}", tok)
        try:
            tree = AttackTree(nodes)
        except ModelError as exc:
            raise ParseError(
                f"invalid tree {name_tok.text!r}: {exc}", name_tok.line, name_tok.column
            ) from exc
        return name_tok.text, tree

    def parse_attr_block(self, model: ModelFile) -> AttributionBlock:
        self.expect_keyword("attribution")
        name_tok = self.ident("attribution name")
        self.expect_keyword("for")
        tree_tok = self.ident("tree name")
        if tree_tok.text not in model.trees:
            self.fail(f"attribution references undefined tree {tree_tok.text!r}", tree_tok)
        self.expect_keyword("domain")
        self.expect("punct", "=")
        domain_tok = self.ident("domain name")
        try:
            domain = builtin_domain(domain_tok.text)
        except Exception as exc:
            self.fail(str(exc), domain_tok)
        self.expect("punct", "{")
        tree = model.trees[tree_tok.text]
        bas = set(tree.bas_ids)
        values: dict[str, FuzzyExpr] = {}
        while not (self.peek().kind == "punct" and self.peek().text == "}"):
            target_tok = self.ident("basic attack step name")
            target = target_tok.text
            if target not in tree.nodes:
                self.fail(f"assignment to undefined node {target!r}", target_tok)
            if target not in bas:
                self.fail(f"node {target!r} is not a basic attack step", target_tok)
            if target in values:
                self.fail(f"duplicate assignment to {target!r}", target_tok)
            self.expect("punct", "=")
            values[target] = self.parse_fexpr()
            self.expect("punct", ";", what="';'")
        close_tok = self.expect("punct", "}")
        missing = sorted(bas - set(values))
        if missing:
            raise ParseError(
                f"attribution {name_tok.text!r} misses basic attack steps: "
                + ", ".join(missing),
                close_tok.line,
                close_tok.column,
            )
        return AttributionBlock(name_tok.text, tree_tok.text, domain, values)

    def parse_fexpr(self) -> FuzzyExpr:
        head = self.ident("attribute expression (crisp/tri/trap/discrete)")
        if head.text == "crisp":
            self.expect("punct", "(")
            v, _ = self.number()
            self.expect("punct", ")")
            return FuzzyExpr("crisp", (v,))
        if head.text in ("tri", "trap"):
            arity = 3 if head.text == "tri" else 4
            self.expect("punct", "(")
            params = []
            tokens = []
            for i in range(arity):
                if i:
                    self.expect("punct", ",")
                v, tok = self.number()
                params.append(v)
                tokens.append(tok)
            self.expect("punct", ")")
            names = "abd" if head.text == "tri" else "abcd"
            for i in range(arity - 1):
                if params[i] > params[i + 1]:
                    self.fail(
                        f"{head.text} parameters must satisfy "
                        f"{names[i]} <= {names[i + 1]}",
                        tokens[i + 1],
                    )
            return FuzzyExpr(head.text, tuple(params))
        if head.text == "discrete":
            self.expect("punct", "{")
            entries: dict[float, float] = {}
            while True:
                v, v_tok = self.number("support value")
                self.expect("punct", ":")
                d, d_tok = self.number("membership degree")
                if not 0.0 < d <= 1.0:
                    self.fail(
                        f"membership degree must lie in (0, 1], got {d_tok.text}", d_tok
                    )
                if v in entries:
                    self.fail(f"duplicate support value {v_tok.text}", v_tok)
                entries[v] = d
                if self.peek().text == ",":
                    self.next()
                    continue
                break
            self.expect("punct", "}")
            return FuzzyExpr("discrete", entries=tuple(sorted(entries.items())))
        self.fail("expected one of crisp, tri, trap, discrete", head)


def parse(text: str) -> ModelFile:
    """Parse a model file. All errors are ParseError with a 1-based line:column."""
    return _Parser(text).parse_file()


def parse_file(path: str) -> ModelFile:
    # utf-8-sig tolerates a leading BOM from Windows editors
    with open(path, "r", encoding="utf-8-sig") as fh:
        return parse(fh.read())


# ---------------------------------------------------------------------------
# serialization


def format_number(v: float) -> str:
    """Shortest decimal form accepted by the grammar (no exponent, no sign)."""
    if v < 0:
        raise ModelError(f"cannot serialize negative number {v!r}")
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    text = repr(float(v))
    if "e" in text or "E" in text:
        text = format(Decimal(float(v)), "f")
    return text


def _format_fexpr(expr: FuzzyExpr) -> str:
    if expr.kind == "crisp":
        return f"crisp({format_number(expr.params[0])})"
    if expr.kind in ("tri", "trap"):
        inner = ", ".join(format_number(p) for p in expr.params)
        return f"{expr.kind}({inner})"
    inner = ", ".join(
        f"{format_number(v)}: {format_number(d)}" for v, d in expr.entries
    )
    return f"discrete{{{inner}}}"


def serialize(model: ModelFile) -> str:
    """Canonical text form: blocks and definitions sorted by name, child order
    preserved.  parse(serialize(m)) is structurally equal to m."""
    lines: list[str] = []
    for name in sorted(model.trees):
        tree = model.trees[name]
        lines.append(f"tree {name} {{")
        for node_id in sorted(tree.nodes):
            node = tree.nodes[node_id]
            if node.type == "BAS":
                lines.append(f"  {node_id}: BAS;")
            else:
                lines.append(f"  {node_id} = {node.type}({', '.join(node.children)});")
        lines.append("}")
        lines.append("")
    for name in sorted(model.attributions):
        block = model.attributions[name]
        lines.append(
            f"attribution {name} for {block.tree} domain = {block.domain.name} {{"
        )
        for target in sorted(block.values):
            lines.append(f"  {target} = {_format_fexpr(block.values[target])};")
        lines.append("}")
        lines.append("")
    return "\n".join(lines)
