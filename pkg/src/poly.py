# src/poly.py
"""
Exact multivariate polynomials over the Gaussian rationals Q(i).

Polynomials are sparse sympy ring elements over QQ_I. This module owns the
ring cache, the expression grammar shared by the CLI and the corpus files,
the canonical renderer, and numeric (numpy) evaluation for quadrature.
"""
import itertools
import logging
import random
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import Rational
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.domains.gaussiandomains import GaussianRational
from sympy.polys.orderings import grevlex
from sympy.polys.rings import PolyElement, PolyRing, ring

logger = logging.getLogger(__name__)

MultiPoly = PolyElement
Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction, GaussianRational]


def variable_names(nvars: int) -> Tuple[str, ...]:
    """Canonical names z1..zN."""
    return tuple(f"z{k}" for k in range(1, nvars + 1))


def variable_aliases(nvars: int) -> Tuple[str, ...]:
    """Short names accepted besides z1..zN (z for N=1, z,w for N=2)."""
    if nvars == 1:
        return ("z",)
    if nvars == 2:
        return ("z", "w")
    return ()


@lru_cache(maxsize=None)
def poly_ring(nvars: int) -> PolyRing:
    """Polynomial ring Q(i)[z1..zN] (cached, one ring per variable count)."""
    if nvars < 1:
        raise ValueError(f"need at least one variable, got {nvars}")
    R, *_ = ring(",".join(variable_names(nvars)), QQ_I, grevlex)
    return R


def gaussian(re_part: Union[int, str, Fraction] = 0, im_part: Union[int, str, Fraction] = 0) -> GaussianRational:
    """Build a Gaussian rational from two rationals (ints, Fractions or 'a/b' strings)."""
    return QQ_I(QQ.from_sympy(Rational(re_part)), QQ.from_sympy(Rational(im_part)))


def as_gaussian(c: Scalar) -> GaussianRational:
    if isinstance(c, GaussianRational):
        return c
    return gaussian(c)


def conjugate_scalar(c: GaussianRational) -> GaussianRational:
    return QQ_I(c.x, -c.y)


def to_complex(c: GaussianRational) -> complex:
    """Float conversion of an exact coefficient (big integers divided exactly)."""
    re_part = int(c.x.numerator) / int(c.x.denominator)
    im_part = int(c.y.numerator) / int(c.y.denominator)
    return complex(re_part, im_part)


def format_rational(q) -> str:
    num, den = int(q.numerator), int(q.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def format_gaussian(c: GaussianRational) -> str:
    """Exact scalar as a grammar-compatible string: '3/2', '-i', '1/2+3*i'."""
    if not c.y:
        return format_rational(c.x)
    im = c.y
    if im == 1:
        im_text = "i"
    elif im == -1:
        im_text = "-i"
    else:
        im_text = f"{format_rational(im)}*i"
    if not c.x:
        return im_text
    sep = "" if im_text.startswith("-") else "+"
    return f"{format_rational(c.x)}{sep}{im_text}"


def nvars_of(p: MultiPoly) -> int:
    return p.ring.ngens


def _check_same(p: MultiPoly, q: MultiPoly) -> None:
    if p.ring.ngens != q.ring.ngens:
        raise ValueError(f"variable-count mismatch: {p.ring.ngens} vs {q.ring.ngens}")


def add(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    _check_same(p, q)
    return p + q


def mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    _check_same(p, q)
    return p * q


def coefficient(p: MultiPoly, m: Monomial) -> GaussianRational:
    if len(m) != p.ring.ngens:
        raise ValueError(f"monomial {m} has wrong length for {p.ring.ngens} variables")
    return p.get(tuple(m), QQ_I.zero)


def constant_term(p: MultiPoly) -> GaussianRational:
    return p.get(p.ring.zero_monom, QQ_I.zero)


def total_degree(p: MultiPoly) -> int:
    """Total degree, -1 for the zero polynomial."""
    return max((sum(m) for m in p.itermonoms()), default=-1)


def monomial(R: PolyRing, exps: Sequence[int], coeff: Scalar = 1) -> MultiPoly:
    return R.term_new(tuple(exps), as_gaussian(coeff))


def constant(R: PolyRing, c: Scalar) -> MultiPoly:
    return R.term_new(R.zero_monom, as_gaussian(c)) if as_gaussian(c) else R.zero


def partial_derivative(p: MultiPoly, var: int) -> MultiPoly:
    if not 0 <= var < p.ring.ngens:
        raise ValueError(f"variable index {var} out of range for {p.ring.ngens} variables")
    return p.diff(p.ring.gens[var])


def truncate(p: MultiPoly, max_degree: int) -> MultiPoly:
    """Drop all terms of total degree above max_degree."""
    return p.ring.from_dict({m: c for m, c in p.iterterms() if sum(m) <= max_degree})


def embed(p: MultiPoly, target: PolyRing, shift: int = 0) -> MultiPoly:
    """Map p into a ring with more variables, placing its variables at positions shift.."""
    n = p.ring.ngens
    pad_after = target.ngens - n - shift
    if pad_after < 0 or shift < 0:
        raise ValueError(f"cannot embed {n} variables at offset {shift} into {target.ngens}")
    front, back = (0,) * shift, (0,) * pad_after
    return target.from_dict({front + m + back: c for m, c in p.iterterms()})


def restrict(p: MultiPoly, target: PolyRing, shift: int = 0) -> MultiPoly:
    """Inverse of embed; the dropped variables must not occur in p."""
    n = target.ngens
    terms = {}
    for m, c in p.iterterms():
        if any(m[:shift]) or any(m[shift + n:]):
            raise ValueError("polynomial involves variables outside the target ring")
        terms[m[shift:shift + n]] = c
    return target.from_dict(terms)


def monomials_up_to(nvars: int, degree: int) -> List[Monomial]:
    """All exponent vectors of total degree <= degree, by degree then grevlex."""
    if degree < 0:
        return []
    found = [m for m in itertools.product(range(degree + 1), repeat=nvars) if sum(m) <= degree]
    return sorted(found, key=grevlex)


def random_poly(
    nvars: int,
    degree: int,
    rng: random.Random,
    height: int = 10,
    n_terms: Optional[int] = None,
    gaussian_coeffs: bool = True,
) -> MultiPoly:
    """Random polynomial with integer (Gaussian) coefficients of absolute size <= height."""
    R = poly_ring(nvars)
    pool = monomials_up_to(nvars, degree)
    k = n_terms if n_terms is not None else rng.randint(1, min(len(pool), 6))
    terms = {}
    for m in rng.sample(pool, min(k, len(pool))):
        re_part = rng.randint(-height, height)
        im_part = rng.randint(-height, height) if gaussian_coeffs else 0
        c = gaussian(re_part, im_part)
        if c:
            terms[m] = c
    return R.from_dict(terms)


def _horner(terms: List[Tuple[Monomial, object]], point: Sequence, var: int, leaf, zero):
    if var == len(point):
        total = zero
        for _, c in terms:
            total = total + leaf(c)
        return total
    groups = {}
    for m, c in terms:
        groups.setdefault(m[var], []).append((m, c))
    result = zero
    for e in range(max(groups), -1, -1):
        result = result * point[var]
        if e in groups:
            result = result + _horner(groups[e], point, var + 1, leaf, zero)
    return result


def evaluate(p: MultiPoly, point: Sequence):
    """
    Numeric evaluation by nested Horner schemes.

    Coordinates may be complex scalars or numpy arrays of equal shape; exact
    coefficients are converted to complex floats at the leaves.
    """
    if len(point) != p.ring.ngens:
        raise ValueError(f"point has {len(point)} coordinates, expected {p.ring.ngens}")
    if not p:
        return 0j * np.asarray(point[0]) if point else 0j
    value = _horner(list(p.iterterms()), point, 0, to_complex, 0j)
    if isinstance(point[0], np.ndarray):
        return value + np.zeros_like(point[0], dtype=complex)
    return complex(value)


def exact_eval(p: MultiPoly, point: Sequence[Scalar]) -> GaussianRational:
    """Exact evaluation at a Q(i)-rational point."""
    if len(point) != p.ring.ngens:
        raise ValueError(f"point has {len(point)} coordinates, expected {p.ring.ngens}")
    if not p:
        return QQ_I.zero
    coords = [as_gaussian(c) for c in point]
    return _horner(list(p.iterterms()), coords, 0, lambda c: c, QQ_I.zero)


# ---------------------------------------------------------------------------
# Expression grammar
# ---------------------------------------------------------------------------

class PolySyntaxError(ValueError):
    """Parse failure with the 0-based character offset into the source text."""

    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"syntax error at offset {offset}: {message}")
        self.offset = offset
        self.text = text
        self.reason = message

    @property
    def line(self) -> int:
        return self.text.count("\n", 0, self.offset) + 1

    @property
    def column(self) -> int:
        return self.offset - (self.text.rfind("\n", 0, self.offset) + 1) + 1


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN_RE.match(text, pos)
        if not match:
            offset = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise PolySyntaxError(f"unexpected character {text[offset]!r}", offset, text)
        number, name, op = match.groups()
        start = match.start(1) if number else match.start(2) if name else match.start(3)
        if number:
            tokens.append(("NUM", number, start))
        elif name:
            tokens.append(("NAME", name, start))
        else:
            tokens.append(("OP", "^" if op == "**" else op, start))
        pos = match.end()
    tokens.append(("END", "", len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser for expr := term (('+'|'-') term)*."""

    def __init__(self, text: str, R: PolyRing, names: Sequence[str]):
        self.text = text
        self.R = R
        self.tokens = _tokenize(text)
        self.idx = 0
        self.lookup = {}
        for k, name in enumerate(names):
            self.lookup[name] = k
        for k, name in enumerate(variable_names(R.ngens)):
            self.lookup.setdefault(name, k)
        for k, name in enumerate(variable_aliases(R.ngens)):
            self.lookup.setdefault(name, k)
        if "i" in self.lookup:
            raise ValueError("'i' is reserved for the imaginary unit")

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.idx]

    def take(self) -> Tuple[str, str, int]:
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def fail(self, message: str, offset: Optional[int] = None):
        raise PolySyntaxError(message, self.peek()[2] if offset is None else offset, self.text)

    def parse(self) -> MultiPoly:
        if self.peek()[0] == "END":
            self.fail("empty expression")
        value = self.expr()
        if self.peek()[0] != "END":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return value

    def expr(self) -> MultiPoly:
        value = self.term()
        while self.peek()[:2] in (("OP", "+"), ("OP", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> MultiPoly:
        value = self.factor()
        while self.peek()[:2] in (("OP", "*"), ("OP", "/")):
            op = self.take()[1]
            offset = self.peek()[2]
            rhs = self.factor()
            if op == "*":
                value = value * rhs
                continue
            if not rhs or set(rhs.itermonoms()) != {self.R.zero_monom}:
                self.fail("division by zero or by a non-constant", offset)
            value = value.mul_ground(QQ_I.one / constant_term(rhs))
        return value

    def factor(self) -> MultiPoly:
        if self.peek()[:2] == ("OP", "-"):
            self.take()
            return -self.factor()
        if self.peek()[:2] == ("OP", "+"):
            self.take()
            return self.factor()
        return self.power()

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.peek()[:2] == ("OP", "^"):
            self.take()
            kind, value, _ = self.peek()
            if kind != "NUM":
                self.fail("expected a nonnegative integer exponent")
            self.take()
            return base ** int(value)
        return base

    def atom(self) -> MultiPoly:
        kind, value, offset = self.peek()
        if kind == "NUM":
            self.take()
            return constant(self.R, int(value))
        if kind == "NAME":
            self.take()
            if value == "i":
                return constant(self.R, QQ_I.imag_unit)
            if value not in self.lookup:
                self.fail(f"unknown variable {value!r}", offset)
            return self.R.gens[self.lookup[value]]
        if (kind, value) == ("OP", "("):
            self.take()
            inner = self.expr()
            if self.peek()[:2] != ("OP", ")"):
                self.fail("expected ')'")
            self.take()
            return inner
        if kind == "END":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {value!r}")


def parse_poly(text: str, nvars: int, names: Optional[Sequence[str]] = None) -> MultiPoly:
    """
    Parse an expression in the polynomial grammar.

    Args:
        text: e.g. "z1^2*z2 - (3/2+i)*z2^3"
        nvars: number of variables of the target ring
        names: optional user variable names (z1..zN and the z,w aliases are always accepted)

    Returns:
        MultiPoly in poly_ring(nvars)
    """
    names = tuple(names) if names else ()
    if names and len(names) != nvars:
        raise ValueError(f"{len(names)} variable names given for {nvars} variables")
    return _Parser(text, poly_ring(nvars), names).parse()


def _render_monomial(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _render_magnitude(c: GaussianRational) -> str:
    """Coefficient with a nonnegative leading part; mixed values are parenthesized."""
    if c.x and c.y:
        return f"({format_gaussian(c)})"
    return format_gaussian(c)


def render_poly(p: MultiPoly, names: Optional[Sequence[str]] = None) -> str:
    """Canonical text: terms in descending grevlex order, '0' for the zero polynomial."""
    names = tuple(names) if names else variable_names(p.ring.ngens)
    if not p:
        return "0"
    pieces = []
    for m, c in sorted(p.iterterms(), key=lambda t: grevlex(t[0]), reverse=True):
        negative = c.x < 0 or (not c.x and c.y < 0)
        mag = -c if negative else c
        mono = _render_monomial(m, names)
        coeff = _render_magnitude(mag)
        if not mono:
            body = coeff
        elif mag == QQ_I.one:
            body = mono
        else:
            body = f"{coeff}*{mono}"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)
