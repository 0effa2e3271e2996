"""Terms of Lukasiewicz infinite-valued logic: grammar, parser, evaluator.

Concrete syntax: variables x1..xN, constants 0 and 1, and the connectives

    ~a          negation
    a (+) b     truncated sum        min(1, a+b)
    a (.) b     truncated product    max(0, a+b-1)
    a (-) b     truncated difference a (.) ~b
    a /\\ b      minimum
    a \\/ b      maximum
    a -> b      ~a (+) b
    a <-> b     (a -> b) (.) (b -> a)

Precedence (tightest first): ~ ; (+) (.) (-) ; /\\ ; \\/ ; -> ; <-> with
left association throughout. The derived connectives (-), -> and <-> are
rewritten at parse time, so downstream code only ever sees the five-node
core plus constants and variables.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import ArityError, ParseError


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class OPlus:
    left: object
    right: object


@dataclass(frozen=True)
class OTimes:
    left: object
    right: object


@dataclass(frozen=True)
class Meet:
    left: object
    right: object


@dataclass(frozen=True)
class Join:
    left: object
    right: object


def minus(t, u):
    return OTimes(t, Neg(u))


def implies(t, u):
    return OPlus(Neg(t), u)


def iff(t, u):
    return OTimes(implies(t, u), implies(u, t))


_BINOPS = {
    "(+)": OPlus,
    "(.)": OTimes,
    "(-)": minus,
    "/\\": Meet,
    "\\/": Join,
    "->": implies,
    "<->": iff,
}

# precedence levels from loosest to tightest, each level left-associative
_LEVELS = [["<->"], ["->"], ["\\/"], ["/\\"], ["(+)", "(.)", "(-)"]]


def _tokenize(text):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        three = text[i : i + 3]
        if three in ("(+)", "(.)", "(-)", "<->"):
            tokens.append((three, i))
            i += 3
            continue
        if text[i : i + 2] in ("->", "/\\", "\\/"):
            tokens.append((text[i : i + 2], i))
            i += 2
            continue
        if ch in "()~":
            tokens.append((ch, i))
            i += 1
            continue
        if ch in "01":
            tokens.append(("const", i, int(ch)))
            i += 1
            continue
        if ch == "x":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError("variable needs a numeric index", i)
            idx = int(text[i + 1 : j])
            if idx == 0:
                raise ParseError("variable index 0 is not allowed", i)
            tokens.append(("var", i, idx))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _offset(self):
        tok = self.peek()
        return tok[1] if tok else len(self.text)

    def expect(self, kind):
        tok = self.peek()
        if tok is None or tok[0] != kind:
            raise ParseError(f"expected {kind!r}", self._offset())
        self.pos += 1
        return tok

    def parse(self):
        t = self.parse_level(0)
        if self.peek() is not None:
            raise ParseError("trailing input after term", self._offset())
        return t

    def parse_level(self, level):
        if level == len(_LEVELS):
            return self.parse_unary()
        t = self.parse_level(level + 1)
        while True:
            tok = self.peek()
            if tok is None or tok[0] not in _LEVELS[level]:
                return t
            self.pos += 1
            u = self.parse_level(level + 1)
            t = _BINOPS[tok[0]](t, u)

    def parse_unary(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self._offset())
        if tok[0] == "~":
            self.pos += 1
            return Neg(self.parse_unary())
        if tok[0] == "var":
            self.pos += 1
            return Var(tok[2])
        if tok[0] == "const":
            self.pos += 1
            return Const(tok[2])
        if tok[0] == "(":
            self.pos += 1
            t = self.parse_level(0)
            self.expect(")")
            return t
        raise ParseError(f"unexpected token {tok[0]!r}", tok[1])


def parse(text):
    """Parse term text into the normalized five-connective AST."""
    return _Parser(text).parse()


def arity(t):
    """Largest variable index occurring in t; 0 for constant terms."""
    if isinstance(t, Var):
        return t.index
    if isinstance(t, Const):
        return 0
    if isinstance(t, Neg):
        return arity(t.arg)
    return max(arity(t.left), arity(t.right))


def evaluate(t, p):
    """Exact value of t at a rational point, using the standard semantics."""
    if arity(t) > len(p):
        raise ArityError(f"term of arity {arity(t)} at a point of dimension {len(p)}")
    return _eval(t, tuple(Fraction(c) for c in p))


def _eval(t, p):
    if isinstance(t, Var):
        return p[t.index - 1]
    if isinstance(t, Const):
        return Fraction(t.value)
    if isinstance(t, Neg):
        return 1 - _eval(t.arg, p)
    if isinstance(t, OPlus):
        return min(Fraction(1), _eval(t.left, p) + _eval(t.right, p))
    if isinstance(t, OTimes):
        return max(Fraction(0), _eval(t.left, p) + _eval(t.right, p) - 1)
    if isinstance(t, Meet):
        return min(_eval(t.left, p), _eval(t.right, p))
    if isinstance(t, Join):
        return max(_eval(t.left, p), _eval(t.right, p))
    raise TypeError(f"not a term node: {t!r}")
