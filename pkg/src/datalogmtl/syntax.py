"""AST, parser and printer for DatalogMTL programs, datasets and facts.

Concrete syntax:

    Immune(X) :- BOXMINUS[0,7] NoSympt(X) .
    P(a) SINCE[1,2] Q(a)
    NoSympt(james)@[0,14]

Operator keywords: DIAMONDMINUS, DIAMONDPLUS, BOXMINUS, BOXPLUS, SINCE,
UNTIL, TOP, BOTTOM.  Variables start with an uppercase letter, constants and
predicates with anything else.  Rationals are integers, fractions (3/2) or
decimals (1.25, converted exactly).  Infinite endpoints are written -inf /
+inf and must sit next to an open bracket.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

from .intervals import (
    EMPTY,
    NEG_INF,
    POS_INF,
    Fraction as _Fraction,  # re-export convenience
    Interval,
    _Infinity,
    _fmt_bound,
    bound_lt,
    normalize,
)


class SyntaxFault(Exception):
    """Parse or validation error with position information."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        if line:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


# ---------------------------------------------------------------------------
# Terms and atoms


@dataclass(frozen=True)
class Constant:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self):
        return self.name


Term = Union[Constant, Variable]


@dataclass(frozen=True)
class RelationalAtom:
    predicate: str
    args: tuple[Term, ...]

    def is_ground(self) -> bool:
        return all(isinstance(a, Constant) for a in self.args)

    def variables(self) -> set[Variable]:
        return {a for a in self.args if isinstance(a, Variable)}

    def key(self) -> tuple[str, tuple[str, ...]]:
        return (self.predicate, tuple(a.name for a in self.args))

    def __str__(self):
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class Top:
    def __str__(self):
        return "TOP"


@dataclass(frozen=True)
class Bottom:
    def __str__(self):
        return "BOTTOM"


@dataclass(frozen=True)
class Rel:
    atom: RelationalAtom

    def __str__(self):
        return str(self.atom)


@dataclass(frozen=True)
class UnaryOp:
    """One of the four unary metric operators applied to a sub-atom."""

    op: str  # DIAMONDMINUS | DIAMONDPLUS | BOXMINUS | BOXPLUS
    interval: Interval
    sub: "MetricAtom"

    def __str__(self):
        return f"{self.op}{self.interval} {_paren(self.sub)}"


@dataclass(frozen=True)
class BinaryOp:
    """SINCE or UNTIL, written infix: A SINCE[1,2] B."""

    op: str  # SINCE | UNTIL
    interval: Interval
    left: "MetricAtom"
    right: "MetricAtom"

    def __str__(self):
        return f"{_paren(self.left)} {self.op}{self.interval} {_paren(self.right)}"


MetricAtom = Union[Top, Bottom, Rel, UnaryOp, BinaryOp]

UNARY_OPS = ("DIAMONDMINUS", "DIAMONDPLUS", "BOXMINUS", "BOXPLUS")
BINARY_OPS = ("SINCE", "UNTIL")


def _paren(m: MetricAtom) -> str:
    if isinstance(m, (UnaryOp, BinaryOp)):
        return f"({m})"
    return str(m)


def atom_variables(m: MetricAtom) -> set[Variable]:
    if isinstance(m, Rel):
        return m.atom.variables()
    if isinstance(m, UnaryOp):
        return atom_variables(m.sub)
    if isinstance(m, BinaryOp):
        return atom_variables(m.left) | atom_variables(m.right)
    return set()


def relational_atoms(m: MetricAtom) -> list[RelationalAtom]:
    """All relational atoms nested anywhere inside m, in reading order."""
    if isinstance(m, Rel):
        return [m.atom]
    if isinstance(m, UnaryOp):
        return relational_atoms(m.sub)
    if isinstance(m, BinaryOp):
        return relational_atoms(m.left) + relational_atoms(m.right)
    return []


def subformulas(m: MetricAtom) -> list[MetricAtom]:
    """m and all of its sub-atoms."""
    out = [m]
    if isinstance(m, UnaryOp):
        out += subformulas(m.sub)
    elif isinstance(m, BinaryOp):
        out += subformulas(m.left) + subformulas(m.right)
    return out


def substitute(m: MetricAtom, sigma: dict[Variable, Constant]) -> MetricAtom:
    if isinstance(m, Rel):
        args = tuple(sigma.get(a, a) if isinstance(a, Variable) else a for a in m.atom.args)
        return Rel(RelationalAtom(m.atom.predicate, args))
    if isinstance(m, UnaryOp):
        return UnaryOp(m.op, m.interval, substitute(m.sub, sigma))
    if isinstance(m, BinaryOp):
        return BinaryOp(m.op, m.interval, substitute(m.left, sigma), substitute(m.right, sigma))
    return m


def is_valid_head(m: MetricAtom) -> bool:
    """Heads are Bottom, Rel, or (nested) boxes over those."""
    if isinstance(m, (Bottom, Rel)):
        return True
    if isinstance(m, UnaryOp) and m.op in ("BOXMINUS", "BOXPLUS"):
        return is_valid_head(m.sub)
    return False


# ---------------------------------------------------------------------------
# Rules, programs, facts


@dataclass(frozen=True)
class Rule:
    head: MetricAtom
    body: tuple[MetricAtom, ...]

    def __post_init__(self):
        if not self.body:
            raise SyntaxFault("rule body must be non-empty")
        if not is_valid_head(self.head):
            raise SyntaxFault(f"forbidden operator in rule head: {self.head}")
        missing = atom_variables(self.head) - set().union(
            *(atom_variables(b) for b in self.body)
        )
        if missing:
            names = ", ".join(sorted(v.name for v in missing))
            raise SyntaxFault(f"unsafe rule: head variable(s) {names} not in body")

    def variables(self) -> set[Variable]:
        out = atom_variables(self.head)
        for b in self.body:
            out |= atom_variables(b)
        return out

    def head_predicate(self) -> Optional[str]:
        m = self.head
        while isinstance(m, UnaryOp):
            m = m.sub
        if isinstance(m, Rel):
            return m.atom.predicate
        return None  # Bottom

    def body_predicates(self) -> set[str]:
        out = set()
        for b in self.body:
            out |= {a.predicate for a in relational_atoms(b)}
        return out

    def __str__(self):
        body = ", ".join(str(b) for b in self.body)
        return f"{self.head} :- {body} ."


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...]

    def predicates(self) -> set[str]:
        out = set()
        for r in self.rules:
            p = r.head_predicate()
            if p is not None:
                out.add(p)
            out |= r.body_predicates()
        return out

    def constants(self) -> set[str]:
        out = set()
        for r in self.rules:
            for m in (r.head, *r.body):
                for a in relational_atoms(m):
                    out |= {t.name for t in a.args if isinstance(t, Constant)}
        return out

    def __str__(self):
        return "\n".join(str(r) for r in self.rules)


@dataclass(frozen=True)
class Fact:
    atom: RelationalAtom
    interval: Interval

    def __post_init__(self):
        if not self.atom.is_ground():
            raise SyntaxFault(f"fact must be ground: {self.atom}")
        if self.interval.is_empty:
            raise SyntaxFault(f"fact interval must be non-empty: {self.atom}")

    def __str__(self):
        return f"{self.atom}@{self.interval}"


# ---------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<number>\d+(?:\.\d+)?(?:/\d+)?)
  | (?P<inf>[+-]inf\b)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<arrow>:-)
  | (?P<punct>[()\[\],.@])
  | (?P<sign>[+-])
    """,
    re.VERBOSE,
)


@dataclass
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise SyntaxFault(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        val = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, val, line, col))
        newlines = val.count("\n")
        if newlines:
            line += newlines
            col = len(val) - val.rfind("\n")
        else:
            col += len(val)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> _Token:
        t = self.next()
        if t.text != text:
            raise SyntaxFault(f"expected {text!r}, got {t.text!r}", t.line, t.column)
        return t

    def fail(self, msg: str):
        t = self.peek()
        raise SyntaxFault(msg, t.line, t.column)

    # -- rationals and intervals

    def parse_rational(self) -> Fraction:
        t = self.next()
        if t.kind != "number":
            raise SyntaxFault(f"expected a number, got {t.text!r}", t.line, t.column)
        return Fraction(t.text)

    def parse_interval(self, operator_position: bool = False) -> Interval:
        t = self.next()
        if t.text not in ("[", "("):
            raise SyntaxFault(f"expected interval, got {t.text!r}", t.line, t.column)
        left_open = t.text == "("
        left = self._parse_bound(negative_ok=True)
        if isinstance(left, _Infinity) and not left_open:
            raise SyntaxFault("infinite endpoint requires an open bracket", t.line, t.column)
        self.expect(",")
        right = self._parse_bound(negative_ok=True)
        t2 = self.next()
        if t2.text not in ("]", ")"):
            raise SyntaxFault(f"expected ] or ), got {t2.text!r}", t2.line, t2.column)
        right_open = t2.text == ")"
        if isinstance(right, _Infinity) and not right_open:
            raise SyntaxFault("infinite endpoint requires an open bracket", t2.line, t2.column)
        iv = normalize(left, right, left_open, right_open)
        if iv.is_empty:
            raise SyntaxFault("empty interval", t.line, t.column)
        if operator_position and bound_lt(iv.left, Fraction(0)):
            raise SyntaxFault("operator interval must be non-negative", t.line, t.column)
        return iv

    def _parse_bound(self, negative_ok: bool):
        t = self.peek()
        if t.kind == "inf":
            self.next()
            return POS_INF if t.text.startswith("+") else NEG_INF
        if t.kind == "sign":
            self.next()
            value = self.parse_rational()
            return -value if t.text == "-" else value
        return self.parse_rational()

    # -- atoms

    def parse_metric_atom(self) -> MetricAtom:
        left = self._parse_operand()
        while self.peek().text in BINARY_OPS:
            op = self.next().text
            iv = self.parse_interval(operator_position=True)
            right = self._parse_operand()
            left = BinaryOp(op, iv, left, right)
        return left

    def _parse_operand(self) -> MetricAtom:
        t = self.peek()
        if t.text in UNARY_OPS:
            self.next()
            iv = self.parse_interval(operator_position=True)
            sub = self._parse_operand()
            return UnaryOp(t.text, iv, sub)
        if t.text == "TOP":
            self.next()
            return Top()
        if t.text == "BOTTOM":
            self.next()
            return Bottom()
        if t.text == "(":
            self.next()
            inner = self.parse_metric_atom()
            self.expect(")")
            return inner
        if t.kind == "name":
            return Rel(self.parse_relational_atom())
        self.fail(f"expected a metric atom, got {t.text!r}")

    def parse_relational_atom(self) -> RelationalAtom:
        t = self.next()
        if t.kind != "name":
            raise SyntaxFault(f"expected predicate name, got {t.text!r}", t.line, t.column)
        args: list[Term] = []
        if self.peek().text == "(":
            self.next()
            while True:
                args.append(self._parse_term())
                nxt = self.next()
                if nxt.text == ")":
                    break
                if nxt.text != ",":
                    raise SyntaxFault(f"expected , or ), got {nxt.text!r}", nxt.line, nxt.column)
        return RelationalAtom(t.text, tuple(args))

    def _parse_term(self) -> Term:
        t = self.next()
        if t.kind == "number":
            return Constant(t.text)
        if t.kind != "name":
            raise SyntaxFault(f"expected a term, got {t.text!r}", t.line, t.column)
        if t.text[0].isupper():
            return Variable(t.text)
        return Constant(t.text)

    # -- rules and facts

    def parse_rule(self) -> Rule:
        head = self.parse_metric_atom()
        self.expect(":-")
        body = [self.parse_metric_atom()]
        while self.peek().text == ",":
            self.next()
            body.append(self.parse_metric_atom())
        self.expect(".")
        t = self.tokens[self.pos - 1]
        try:
            return Rule(head, tuple(body))
        except SyntaxFault as e:
            raise SyntaxFault(str(e), t.line, t.column) from None

    def parse_fact(self) -> Fact:
        atom = self.parse_relational_atom()
        if not atom.is_ground():
            self.fail(f"fact must be ground: {atom}")
        self.expect("@")
        iv = self.parse_interval()
        return Fact(atom, iv)

    def at_eof(self) -> bool:
        return self.peek().kind == "eof"


def parse_program(text: str) -> Program:
    p = _Parser(text)
    rules = []
    while not p.at_eof():
        rules.append(p.parse_rule())
    program = Program(tuple(rules))
    _check_arities(program, ())
    return program


def parse_dataset(text: str) -> list[Fact]:
    facts = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        p = _Parser(stripped)
        try:
            fact = p.parse_fact()
        except SyntaxFault as e:
            raise SyntaxFault(f"{e} (dataset line {lineno})") from None
        if not p.at_eof():
            raise SyntaxFault(f"trailing input after fact (dataset line {lineno})")
        facts.append(fact)
    return facts


def parse_fact(text: str) -> Fact:
    p = _Parser(text)
    fact = p.parse_fact()
    if not p.at_eof():
        p.fail("trailing input after fact")
    return fact


def _check_arities(program: Program, facts: Sequence[Fact]):
    arity: dict[str, int] = {}

    def check(atom: RelationalAtom):
        seen = arity.setdefault(atom.predicate, len(atom.args))
        if seen != len(atom.args):
            raise SyntaxFault(
                f"arity conflict for predicate {atom.predicate}: {seen} vs {len(atom.args)}"
            )

    for r in program.rules:
        for m in (r.head, *r.body):
            for a in relational_atoms(m):
                check(a)
    for f in facts:
        check(f.atom)


def check_arities(program: Program, facts: Sequence[Fact]):
    """Load-time arity consistency check across a program and a dataset."""
    _check_arities(program, facts)


def print_program(program: Program) -> str:
    return "\n".join(str(r) for r in program.rules) + ("\n" if program.rules else "")


def print_dataset(facts: Sequence[Fact]) -> str:
    return "\n".join(str(f) for f in facts) + ("\n" if facts else "")


# ---------------------------------------------------------------------------
# Grounding


def ground(program: Program, constants: set[str]) -> set[Rule]:
    """All substitutions of rule variables by the given constants.

    Eager grounding exists for tests and the automata literal universe;
    rule evaluation grounds lazily via index joins instead.
    """
    from itertools import product

    out: set[Rule] = set()
    consts = sorted(constants)
    for r in program.rules:
        variables = sorted(r.variables(), key=lambda v: v.name)
        if not variables:
            out.add(r)
            continue
        if not consts:
            raise ValueError("cannot ground a rule with variables over no constants")
        for combo in product(consts, repeat=len(variables)):
            sigma = {v: Constant(c) for v, c in zip(variables, combo)}
            out.add(Rule(substitute(r.head, sigma), tuple(substitute(b, sigma) for b in r.body)))
    return out
