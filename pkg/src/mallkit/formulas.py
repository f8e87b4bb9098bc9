"""MALL formulas: syntax, duality, measures, distribution, AC canonical forms.

Formulas are in negation normal form: negation lives on atoms only.  The
binary connectives are tensor ``*``, par ``|``, with ``&`` and plus ``+``;
the units are ``1``, ``bot``, ``top`` and ``0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional

__all__ = [
    "Formula", "PosAtom", "NegAtom", "Tensor", "Par", "With", "Plus",
    "One", "Bot", "Top", "Zero", "ONE", "BOT", "TOP", "ZERO",
    "ParseError", "FreshnessViolation", "RewriteStep",
    "parse", "fmt", "dual", "size", "mass", "sequent_mass",
    "subformula_at", "replace_at", "leaf_paths", "paths_of",
    "atom_names", "is_unit_free", "is_distributed", "d_normalize",
    "ac_canonical", "is_non_ambiguous", "substitute_units",
]

_ATOM_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_KEYWORDS = {"bot", "top"}


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} (at position {pos})")
        self.pos = pos


class FreshnessViolation(ValueError):
    pass


class Formula:
    __slots__ = ()

    def __repr__(self) -> str:
        return f"<{fmt(self)}>"


@dataclass(frozen=True, repr=False)
class PosAtom(Formula):
    name: str

    def __post_init__(self):
        if not _ATOM_RE.match(self.name) or self.name in _KEYWORDS:
            raise ValueError(f"bad atom name: {self.name!r}")


@dataclass(frozen=True, repr=False)
class NegAtom(Formula):
    name: str

    def __post_init__(self):
        if not _ATOM_RE.match(self.name) or self.name in _KEYWORDS:
            raise ValueError(f"bad atom name: {self.name!r}")


@dataclass(frozen=True, repr=False)
class Tensor(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Par(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class With(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Plus(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class One(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Bot(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Top(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Zero(Formula):
    pass


ONE, BOT, TOP, ZERO = One(), Bot(), Top(), Zero()

_BINARY = (Tensor, Par, With, Plus)
_UNITS = {One: ONE, Bot: BOT, Top: TOP, Zero: ZERO}

# ---------------------------------------------------------------------------
# printing / parsing

_SYMBOL = {Tensor: "*", Par: "|", With: "&", Plus: "+"}


def fmt(f: Formula) -> str:
    """Canonical fully-parenthesized printer; ``parse(fmt(f)) == f``."""
    if isinstance(f, PosAtom):
        return f.name
    if isinstance(f, NegAtom):
        return f.name + "^"
    if isinstance(f, One):
        return "1"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Zero):
        return "0"
    return f"({fmt(f.left)} {_SYMBOL[type(f)]} {fmt(f.right)})"


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>-o|[*|&+^~()01]))"
)


def _tokenize(text: str, lollipop: bool = False) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos:].lstrip()[0]!r}", pos)
        tok = m.group("name") or m.group("op")
        if tok == "-o" and not lollipop:
            raise ParseError("'-o' is not a MALL connective", m.start())
        tokens.append((tok, m.start()))
        pos = m.end()
    tokens.append(("<end>", len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser.

    Precedence: ``~`` and postfix ``^`` bind tightest, then ``*``/``&``,
    then ``+``/``|``.  Chains mixing two distinct connectives of the same
    precedence level require parentheses.
    """

    def __init__(self, tokens: list[tuple[str, int]]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def next(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def parse_formula(self) -> Formula:
        return self._chain(("+", "|"), self._mul)

    def _mul(self) -> Formula:
        return self._chain(("*", "&"), self._unary)

    def _chain(self, ops: tuple[str, str], sub) -> Formula:
        first = sub()
        op = None
        items = [first]
        while self.peek() in ops:
            tok = self.next()
            if op is None:
                op = tok
            elif tok != op:
                raise ParseError(
                    f"mixing {op!r} and {tok!r} needs parentheses",
                    self.tokens[self.i - 1][1],
                )
            items.append(sub())
        ctor = {"*": Tensor, "|": Par, "&": With, "+": Plus}.get(op)
        out = items[0]
        for item in items[1:]:
            out = ctor(out, item)
        return out

    def _unary(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.next()
            return dual(self._unary())
        if tok == "(":
            self.next()
            inner = self.parse_formula()
            if self.peek() != ")":
                raise ParseError("expected ')'", self.pos())
            self.next()
            return self._postfix(inner, atom=False)
        if tok == "1":
            self.next()
            return ONE
        if tok == "0":
            self.next()
            return ZERO
        if tok == "bot":
            self.next()
            return BOT
        if tok == "top":
            self.next()
            return TOP
        if _ATOM_RE.match(tok):
            self.next()
            return self._postfix(PosAtom(tok), atom=True)
        raise ParseError(f"unexpected token {tok!r}", self.pos())

    def _postfix(self, f: Formula, atom: bool) -> Formula:
        while self.peek() == "^":
            if not atom:
                raise ParseError("'^' applies to atoms only (use '~' for compounds)",
                                 self.pos())
            self.next()
            f = dual(f)
        return f


def parse(text: str) -> Formula:
    p = _Parser(_tokenize(text))
    f = p.parse_formula()
    if p.peek() != "<end>":
        raise ParseError(f"trailing input {p.peek()!r}", p.pos())
    return f


# ---------------------------------------------------------------------------
# duality and measures

def dual(f: Formula) -> Formula:
    """De Morgan dual; note the operand reversal on binary connectives."""
    if isinstance(f, PosAtom):
        return NegAtom(f.name)
    if isinstance(f, NegAtom):
        return PosAtom(f.name)
    if isinstance(f, Tensor):
        return Par(dual(f.right), dual(f.left))
    if isinstance(f, Par):
        return Tensor(dual(f.right), dual(f.left))
    if isinstance(f, With):
        return Plus(dual(f.right), dual(f.left))
    if isinstance(f, Plus):
        return With(dual(f.right), dual(f.left))
    if isinstance(f, One):
        return BOT
    if isinstance(f, Bot):
        return ONE
    if isinstance(f, Top):
        return ZERO
    if isinstance(f, Zero):
        return TOP
    raise TypeError(f"not a formula: {f!r}")


def size(f: Formula) -> int:
    """Number of nodes: connectives + units + atom occurrences."""
    if isinstance(f, _BINARY):
        return 1 + size(f.left) + size(f.right)
    return 1


def mass(f: Formula) -> int:
    if isinstance(f, _BINARY):
        return (mass(f.left) + 1) * (mass(f.right) + 1)
    return 2


def sequent_mass(seq) -> int:
    out = 1
    for f in seq:
        out *= mass(f)
    return out


# ---------------------------------------------------------------------------
# paths

def subformula_at(f: Formula, path) -> Formula:
    for step in path:
        if not isinstance(f, _BINARY):
            raise ValueError(f"path step {step!r} into a leaf")
        f = f.left if step == "L" else f.right
    return f


def replace_at(f: Formula, path, sub: Formula) -> Formula:
    if not path:
        return sub
    step, rest = path[0], path[1:]
    if not isinstance(f, _BINARY):
        raise ValueError(f"path step {step!r} into a leaf")
    if step == "L":
        return type(f)(replace_at(f.left, rest, sub), f.right)
    return type(f)(f.left, replace_at(f.right, rest, sub))


def paths_of(f: Formula, prefix: str = "") -> Iterator[tuple[str, Formula]]:
    """All (path, subformula) pairs, root first."""
    yield prefix, f
    if isinstance(f, _BINARY):
        yield from paths_of(f.left, prefix + "L")
        yield from paths_of(f.right, prefix + "R")


def leaf_paths(f: Formula) -> list[tuple[str, Formula]]:
    """Paths to atom leaves (units are excluded: they carry no links)."""
    return [(p, g) for p, g in paths_of(f) if isinstance(g, (PosAtom, NegAtom))]


def atom_names(f: Formula) -> set[str]:
    return {g.name for _, g in paths_of(f) if isinstance(g, (PosAtom, NegAtom))}


def is_unit_free(f: Formula) -> bool:
    return all(isinstance(g, (PosAtom, NegAtom, *_BINARY)) for _, g in paths_of(f))


def is_non_ambiguous(f: Formula) -> bool:
    """Each atom occurs at most once, counting both polarities."""
    seen: set[str] = set()
    for _, g in paths_of(f):
        if isinstance(g, (PosAtom, NegAtom)):
            if g.name in seen:
                return False
            seen.add(g.name)
    return True


# ---------------------------------------------------------------------------
# distribution rewriting

@dataclass(frozen=True)
class RewriteStep:
    rule: str
    path: str
    before: Formula  # whole formula before the step
    after: Formula   # whole formula after the step


def _d_redex(f: Formula) -> Optional[tuple[str, Formula]]:
    """Match one distribution/unit/cancellation redex at the root of ``f``."""
    if isinstance(f, Tensor):
        if isinstance(f.left, Plus):
            a, b, c = f.left.left, f.left.right, f.right
            return "distr_tensor_left", Plus(Tensor(a, c), Tensor(b, c))
        if isinstance(f.right, Plus):
            a, b, c = f.right.left, f.right.right, f.left
            return "distr_tensor_right", Plus(Tensor(c, a), Tensor(c, b))
        if isinstance(f.left, One):
            return "unit_tensor_left", f.right
        if isinstance(f.right, One):
            return "unit_tensor_right", f.left
        if isinstance(f.left, Zero) or isinstance(f.right, Zero):
            rule = "cancel_tensor_left" if isinstance(f.left, Zero) else "cancel_tensor_right"
            return rule, ZERO
    elif isinstance(f, Par):
        if isinstance(f.left, With):
            a, b, c = f.left.left, f.left.right, f.right
            return "distr_par_left", With(Par(a, c), Par(b, c))
        if isinstance(f.right, With):
            a, b, c = f.right.left, f.right.right, f.left
            return "distr_par_right", With(Par(c, a), Par(c, b))
        if isinstance(f.left, Bot):
            return "unit_par_left", f.right
        if isinstance(f.right, Bot):
            return "unit_par_right", f.left
        if isinstance(f.left, Top) or isinstance(f.right, Top):
            rule = "cancel_par_left" if isinstance(f.left, Top) else "cancel_par_right"
            return rule, TOP
    elif isinstance(f, Plus):
        if isinstance(f.left, Zero):
            return "unit_plus_left", f.right
        if isinstance(f.right, Zero):
            return "unit_plus_right", f.left
    elif isinstance(f, With):
        if isinstance(f.left, Top):
            return "unit_with_left", f.right
        if isinstance(f.right, Top):
            return "unit_with_right", f.left
    return None


def is_distributed(f: Formula) -> bool:
    return all(_d_redex(g) is None for _, g in paths_of(f))


def _find_innermost(f: Formula, prefix: str) -> Optional[tuple[str, str, Formula]]:
    if isinstance(f, _BINARY):
        hit = _find_innermost(f.left, prefix + "L")
        if hit:
            return hit
        hit = _find_innermost(f.right, prefix + "R")
        if hit:
            return hit
    m = _d_redex(f)
    if m:
        return prefix, m[0], m[1]
    return None


def d_normalize(f: Formula) -> tuple[Formula, list[RewriteStep]]:
    """Rewrite to distributed form, leftmost-innermost, with a replayable trace."""
    trace: list[RewriteStep] = []
    cur = f
    while True:
        hit = _find_innermost(cur, "")
        if hit is None:
            return cur, trace
        path, rule, sub = hit
        nxt = replace_at(cur, path, sub)
        trace.append(RewriteStep(rule, path, cur, nxt))
        cur = nxt


# ---------------------------------------------------------------------------
# AC canonical form

_TAG_RANK = {
    PosAtom: 0, NegAtom: 1, One: 2, Bot: 3, Top: 4, Zero: 5,
    Tensor: 6, Par: 7, With: 8, Plus: 9,
}


def _key(f: Formula):
    if isinstance(f, (PosAtom, NegAtom)):
        return (_TAG_RANK[type(f)], f.name)
    if isinstance(f, _BINARY):
        return (_TAG_RANK[type(f)], _key(f.left), _key(f.right))
    return (_TAG_RANK[type(f)],)


def _spine(f: Formula, ctor) -> list[Formula]:
    if isinstance(f, ctor):
        return _spine(f.left, ctor) + _spine(f.right, ctor)
    return [f]


def ac_canonical(f: Formula) -> Formula:
    """Flatten same-connective spines, sort arguments, re-associate left.

    Two formulas are equal modulo associativity+commutativity iff their
    canonical forms are identical.
    """
    if not isinstance(f, _BINARY):
        return f
    ctor = type(f)
    args = sorted((ac_canonical(g) for g in _spine(f, ctor)), key=_key)
    out = args[0]
    for arg in args[1:]:
        out = ctor(out, arg)
    return out


# ---------------------------------------------------------------------------
# unit-to-atom substitution

def substitute_units(f: Formula, x: str, y: str) -> Formula:
    """top ↦ x⊥, 0 ↦ x, bot ↦ y⊥, 1 ↦ y; requires x, y fresh in f."""
    used = atom_names(f)
    if x in used or y in used:
        raise FreshnessViolation(f"atoms {x!r}/{y!r} must not occur in {fmt(f)}")

    def go(g: Formula) -> Formula:
        if isinstance(g, Top):
            return NegAtom(x)
        if isinstance(g, Zero):
            return PosAtom(x)
        if isinstance(g, Bot):
            return NegAtom(y)
        if isinstance(g, One):
            return PosAtom(y)
        if isinstance(g, _BINARY):
            return type(g)(go(g.left), go(g.right))
        return g

    return go(f)
