"""The generator expression language.

Expressions denote morphisms in a PROP generated by a merge (nabla: 2 -> 1),
a unit (eta: 0 -> 1), a copy (delta: 1 -> 2), a discard (eps: 1 -> 0),
labelled single-wire boxes (node[l]: 1 -> 1) and, when the weight system has
additive inverses, a sign flip (anti: 1 -> 1), together with identities and
wire crossings.

Concrete syntax:

    expr := ten (";" ten)*
    ten  := atom ("*" atom)*
    atom := "eta" | "nabla" | "eps" | "delta" | "anti"
          | "node" ("[" label "]")?
          | "id" "(" nat ")" | "sym" "(" nat "," nat ")"
          | "(" expr ")"

"e1 ; e2" runs e1 first (diagrammatic order), "*" stacks and binds tighter,
both associate to the left. Labels are identifier or number tokens; a bare
"node" carries the default label.

Walks over expressions (arity checking, printing, evaluation) are iterative,
so deeply chained composites produced by decomposition do not hit the
interpreter recursion limit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence, TypeVar

from .errors import ExprSyntaxError, TypeMismatch, UnsupportedGenerator
from .weights import WeightSystem

DEFAULT_LABEL = "•"


class Expression:
    """Base class; subclasses are frozen dataclasses forming the AST.

    Equality, hashing and repr are written iteratively here instead of being
    generated per dataclass: decomposition produces composites tens of
    thousands of levels deep, and the generated methods recurse once per
    level.
    """

    def __rshift__(self, other: "Expression") -> "Expression":
        return Seq(self, other)

    def __matmul__(self, other: "Expression") -> "Expression":
        return Ten(self, other)

    def __str__(self) -> str:
        return print_expression(self)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Expression):
            return NotImplemented
        stack: list[tuple[Expression, Expression]] = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if type(a) is not type(b):
                return False
            if isinstance(a, Seq):
                assert isinstance(b, Seq)
                stack.append((a.then, b.then))
                stack.append((a.first, b.first))
            elif isinstance(a, Ten):
                assert isinstance(b, Ten)
                stack.append((a.right, b.right))
                stack.append((a.left, b.left))
            elif _atom_fields(a) != _atom_fields(b):
                return False
        return True

    def __hash__(self) -> int:
        return fold(
            self,
            atom=lambda a: hash((type(a).__name__, _atom_fields(a))),
            seq=lambda _, a, b: hash(("Seq", a, b)),
            ten=lambda _, a, b: hash(("Ten", a, b)),
        )

    def __repr__(self) -> str:
        return fold(
            self,
            atom=_atom_repr,
            seq=lambda _, a, b: f"Seq(first={a}, then={b})",
            ten=lambda _, a, b: f"Ten(left={a}, right={b})",
        )


def _atom_fields(a: "Expression") -> tuple:
    if isinstance(a, Node):
        return (a.label,)
    if isinstance(a, Id):
        return (a.n,)
    if isinstance(a, Sym):
        return (a.n, a.m)
    return ()


def _atom_repr(a: "Expression") -> str:
    if isinstance(a, Node):
        return f"Node(label={a.label!r})"
    if isinstance(a, Id):
        return f"Id(n={a.n})"
    if isinstance(a, Sym):
        return f"Sym(n={a.n}, m={a.m})"
    return f"{type(a).__name__}()"


@dataclass(frozen=True, eq=False, repr=False)
class Eta(Expression):
    """Unit: 0 -> 1."""


@dataclass(frozen=True, eq=False, repr=False)
class Nabla(Expression):
    """Merge: 2 -> 1."""


@dataclass(frozen=True, eq=False, repr=False)
class Eps(Expression):
    """Discard: 1 -> 0."""


@dataclass(frozen=True, eq=False, repr=False)
class Delta(Expression):
    """Copy: 1 -> 2."""


@dataclass(frozen=True, eq=False, repr=False)
class Node(Expression):
    """Labelled box on one wire: 1 -> 1."""

    label: str = DEFAULT_LABEL


@dataclass(frozen=True, eq=False, repr=False)
class Anti(Expression):
    """Sign flip on one wire: 1 -> 1. Requires a weight system with
    additive inverses."""


@dataclass(frozen=True, eq=False, repr=False)
class Id(Expression):
    """n parallel wires: n -> n."""

    n: int


@dataclass(frozen=True, eq=False, repr=False)
class Sym(Expression):
    """Block crossing: n + m -> m + n."""

    n: int
    m: int


@dataclass(frozen=True, eq=False, repr=False)
class Seq(Expression):
    """first, then then: diagrammatic sequential composite."""

    first: Expression
    then: Expression


@dataclass(frozen=True, eq=False, repr=False)
class Ten(Expression):
    """left stacked above right."""

    left: Expression
    right: Expression


T = TypeVar("T")


def fold(
    e: Expression,
    atom: Callable[[Expression], T],
    seq: Callable[[Seq, T, T], T],
    ten: Callable[[Ten, T, T], T],
) -> T:
    """Iterative post-order fold; the workhorse behind arity checking,
    printing and evaluation."""
    stack: list[tuple[Expression, bool]] = [(e, False)]
    results: list[T] = []
    while stack:
        node, ready = stack.pop()
        if isinstance(node, Seq):
            if ready:
                b = results.pop()
                a = results.pop()
                results.append(seq(node, a, b))
            else:
                stack.append((node, True))
                stack.append((node.then, False))
                stack.append((node.first, False))
        elif isinstance(node, Ten):
            if ready:
                b = results.pop()
                a = results.pop()
                results.append(ten(node, a, b))
            else:
                stack.append((node, True))
                stack.append((node.right, False))
                stack.append((node.left, False))
        else:
            results.append(atom(node))
    return results[0]


def atoms(e: Expression) -> Iterator[Expression]:
    """All atom occurrences, left to right."""
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Seq):
            stack.append(node.then)
            stack.append(node.first)
        elif isinstance(node, Ten):
            stack.append(node.right)
            stack.append(node.left)
        else:
            yield node


_ATOM_ARITIES: dict[type, tuple[int, int]] = {
    Eta: (0, 1),
    Nabla: (2, 1),
    Eps: (1, 0),
    Delta: (1, 2),
    Node: (1, 1),
    Anti: (1, 1),
}


def arity_of(e: Expression) -> tuple[int, int]:
    """(inputs, outputs) of e; raises TypeMismatch at the first ill-typed
    sequential composite (leftmost-innermost), naming its position by an
    attribute path from the root."""
    # Arities with positions, so the error can say where. Positions are built
    # top-down in a prepass.
    pos: dict[int, str] = {id(e): "expr"}
    stack = [e]
    while stack:
        node = stack.pop()
        here = pos[id(node)]
        if isinstance(node, Seq):
            pos[id(node.first)] = here + ".first"
            pos[id(node.then)] = here + ".then"
            stack.append(node.then)
            stack.append(node.first)
        elif isinstance(node, Ten):
            pos[id(node.left)] = here + ".left"
            pos[id(node.right)] = here + ".right"
            stack.append(node.right)
            stack.append(node.left)

    def atom(a: Expression) -> tuple[int, int]:
        if isinstance(a, Id):
            if a.n < 0:
                raise UnsupportedGenerator(f"id({a.n})")
            return (a.n, a.n)
        if isinstance(a, Sym):
            if a.n < 0 or a.m < 0:
                raise UnsupportedGenerator(f"sym({a.n},{a.m})")
            return (a.n + a.m, a.m + a.n)
        try:
            return _ATOM_ARITIES[type(a)]
        except KeyError:
            raise UnsupportedGenerator(f"unknown atom {a!r}") from None

    def seq(node: Seq, a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
        if a[1] != b[0]:
            raise TypeMismatch(pos[id(node)], a[1], b[0])
        return (a[0], b[1])

    def ten(_node: Ten, a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
        return (a[0] + b[0], a[1] + b[1])

    return fold(e, atom, seq, ten)


def validate_for_mode(e: Expression, mode: WeightSystem, labels=None) -> None:
    """Reject generators the mode cannot interpret: anti outside int mode,
    and labels outside the configured label set if one is given."""
    for a in atoms(e):
        if isinstance(a, Anti) and not mode.antipode_enabled:
            raise UnsupportedGenerator(f"anti requires int mode, not {mode!r}")
        if labels is not None and isinstance(a, Node) and a.label not in labels:
            raise UnsupportedGenerator(f"label {a.label!r} not in the label set")


# ---------------------------------------------------------------------------
# Printing

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$|[0-9]+$")


def print_expression(e: Expression) -> str:
    """Concrete syntax for e, with minimal parentheses; parses back to an
    equal AST."""

    def atom(a: Expression) -> tuple[str, int]:
        # levels: 0 atom, 1 tensor chain, 2 seq chain
        if isinstance(a, Eta):
            return ("eta", 0)
        if isinstance(a, Nabla):
            return ("nabla", 0)
        if isinstance(a, Eps):
            return ("eps", 0)
        if isinstance(a, Delta):
            return ("delta", 0)
        if isinstance(a, Anti):
            return ("anti", 0)
        if isinstance(a, Node):
            if a.label == DEFAULT_LABEL:
                return ("node", 0)
            if not _IDENT_RE.match(a.label):
                raise ValueError(
                    f"label {a.label!r} has no expression syntax; "
                    "use identifier or number labels"
                )
            return (f"node[{a.label}]", 0)
        if isinstance(a, Id):
            return (f"id({a.n})", 0)
        if isinstance(a, Sym):
            return (f"sym({a.n},{a.m})", 0)
        raise UnsupportedGenerator(f"unknown atom {a!r}")

    def wrap(part: tuple[str, int], max_level: int) -> str:
        text, level = part
        return f"({text})" if level > max_level else text

    def seq(_node: Seq, a: tuple[str, int], b: tuple[str, int]) -> tuple[str, int]:
        return (f"{wrap(a, 2)} ; {wrap(b, 1)}", 2)

    def ten(_node: Ten, a: tuple[str, int], b: tuple[str, int]) -> tuple[str, int]:
        return (f"{wrap(a, 1)} * {wrap(b, 0)}", 1)

    return fold(e, atom, seq, ten)[0]


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|[0-9]+|[;*()\[\],]|\S")


@dataclass
class _Token:
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    for lineno, line in enumerate(text.splitlines() or [""], start=1):
        idx = 0
        while idx < len(line):
            if line[idx].isspace():
                idx += 1
                continue
            m = _TOKEN_RE.match(line, idx)
            assert m is not None
            tok = m.group(0)
            if tok not in {";", "*", "(", ")", "[", "]", ","} and not re.match(
                r"[A-Za-z_0-9]", tok
            ):
                raise ExprSyntaxError(lineno, idx + 1, f"unexpected character {tok!r}")
            tokens.append(_Token(tok, lineno, idx + 1))
            idx = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos].text
        return None

    def here(self) -> tuple[int, int]:
        if self.pos < len(self.tokens):
            t = self.tokens[self.pos]
            return (t.line, t.column)
        if self.tokens:
            last = self.tokens[-1]
            return (last.line, last.column + len(last.text))
        return (1, 1)

    def fail(self, message: str):
        line, col = self.here()
        raise ExprSyntaxError(line, col, message)

    def take(self) -> _Token:
        if self.pos >= len(self.tokens):
            self.fail("unexpected end of input")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        if self.peek() != text:
            self.fail(f"expected {text!r}")
        return self.take()

    def nat(self) -> int:
        tok = self.take()
        if not tok.text.isdigit():
            raise ExprSyntaxError(tok.line, tok.column, f"expected a number, got {tok.text!r}")
        return int(tok.text)

    def expr(self) -> Expression:
        e = self.ten()
        while self.peek() == ";":
            self.take()
            e = Seq(e, self.ten())
        return e

    def ten(self) -> Expression:
        e = self.atom()
        while self.peek() == "*":
            self.take()
            e = Ten(e, self.atom())
        return e

    def atom(self) -> Expression:
        tok = self.take()
        text = tok.text
        if text == "eta":
            return Eta()
        if text == "nabla":
            return Nabla()
        if text == "eps":
            return Eps()
        if text == "delta":
            return Delta()
        if text == "anti":
            return Anti()
        if text == "node":
            if self.peek() == "[":
                self.take()
                lbl = self.take()
                if not re.match(r"[A-Za-z_0-9]", lbl.text):
                    raise ExprSyntaxError(lbl.line, lbl.column, "expected a label")
                self.expect("]")
                return Node(lbl.text)
            return Node()
        if text == "id":
            self.expect("(")
            n = self.nat()
            self.expect(")")
            return Id(n)
        if text == "sym":
            self.expect("(")
            n = self.nat()
            self.expect(",")
            m = self.nat()
            self.expect(")")
            return Sym(n, m)
        if text == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise ExprSyntaxError(tok.line, tok.column, f"unexpected token {text!r}")


def parse(text: str) -> Expression:
    """Parse and type-check expression text.

    Raises ExprSyntaxError (with line and column) on bad syntax and
    TypeMismatch on a well-formed but ill-typed composite.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ExprSyntaxError(1, 1, "empty expression")
    parser = _Parser(tokens)
    e = parser.expr()
    if parser.pos != len(tokens):
        parser.fail(f"trailing input {parser.peek()!r}")
    arity_of(e)
    return e


# ---------------------------------------------------------------------------
# Builders

def seq_all(parts: Sequence[Expression]) -> Expression:
    """Left-associated sequential chain; parts must be nonempty."""
    if not parts:
        raise ValueError("seq_all of no parts")
    e = parts[0]
    for p in parts[1:]:
        e = Seq(e, p)
    return e


def ten_all(parts: Sequence[Expression]) -> Expression:
    """Left-associated tensor chain, collapsing adjacent identities; an empty
    list gives id(0)."""
    merged: list[Expression] = []
    for p in parts:
        if isinstance(p, Id) and p.n == 0:
            continue
        if merged and isinstance(p, Id) and isinstance(merged[-1], Id):
            merged[-1] = Id(merged[-1].n + p.n)
        else:
            merged.append(p)
    if not merged:
        return Id(0)
    e = merged[0]
    for p in merged[1:]:
        e = Ten(e, p)
    return e


def map_atoms(e: Expression, fn: Callable[[Expression], Expression]) -> Expression:
    """Rebuild e with every atom replaced by fn(atom)."""
    return fold(
        e,
        fn,
        lambda _n, a, b: Seq(a, b),
        lambda _n, a, b: Ten(a, b),
    )


def expand_symmetry(n: int, m: int) -> Expression:
    """Sym(n, m) written with only sym(1,1), identities, ; and *."""
    if n < 0 or m < 0:
        raise UnsupportedGenerator(f"sym({n},{m})")
    if n == 0 or m == 0:
        return Id(n + m)

    def cross_one(width: int) -> Expression:
        # wire 0 over the next `width` wires, as adjacent swaps
        layers = [
            ten_all([Id(q), Sym(1, 1), Id(width - 1 - q)]) for q in range(width)
        ]
        return seq_all(layers)

    parts: list[Expression] = []
    for k in range(n):
        # move the wire now at position n-1-k over the m-block
        parts.append(ten_all([Id(n - 1 - k), cross_one(m), Id(k)]))
    return seq_all(parts)
