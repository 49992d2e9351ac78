# src/bmform.py
"""
Exact algebra of E-valued (0,q) forms with |f|^2-power denominators.

A form is sum  num_{I,K} / |f|^(2N) * dzb_I (x) e_K  where num is a polynomial
in z and zb (zb_i standing for conj(z_i)). Products sort the dzb indices and
the e indices independently, delta_f is contraction with sum f_j e_j, and
nabla combines delta_f and dbar with a sign graded by r = q - |K|.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Dict, Optional, Sequence, Tuple

from sympy.combinatorics import Permutation
from sympy.polys.domains import QQ_I
from sympy.polys.rings import PolyRing, ring
from sympy.polys.orderings import grevlex

from groebner import buchberger, extended_member
from poly import GaussianRational, MultiPoly, conjugate_scalar, render_poly, variable_names

logger = logging.getLogger(__name__)

ConjPoly = MultiPoly
Index = Tuple[int, ...]


@lru_cache(maxsize=None)
def conj_ring(nvars: int) -> PolyRing:
    """Q(i)[z1..zn, zb1..zbn]."""
    names = list(variable_names(nvars)) + [f"zb{k}" for k in range(1, nvars + 1)]
    R, *_ = ring(",".join(names), QQ_I, grevlex)
    return R


def conj_names(nvars: int) -> Tuple[str, ...]:
    return tuple(str(s) for s in conj_ring(nvars).symbols)


def lift(p: MultiPoly) -> ConjPoly:
    """Holomorphic polynomial as a polynomial in (z, zb)."""
    n = p.ring.ngens
    C = conj_ring(n)
    pad = (0,) * n
    return C.from_dict({m + pad: c for m, c in p.iterterms()})


def conj(P: ConjPoly) -> ConjPoly:
    """Conjugate coefficients and swap z <-> zb."""
    n = P.ring.ngens // 2
    return P.ring.from_dict({m[n:] + m[:n]: conjugate_scalar(c) for m, c in P.iterterms()})


def bar(p: MultiPoly) -> ConjPoly:
    return conj(lift(p))


def norm_squared(f: Sequence[MultiPoly]) -> ConjPoly:
    """|f|^2 = sum f_k * conj(f_k)."""
    C = conj_ring(f[0].ring.ngens)
    total = C.zero
    for fk in f:
        total += lift(fk) * bar(fk)
    return total


def dzb(P: ConjPoly, k: int) -> ConjPoly:
    """Derivative in zb_k (0-based k)."""
    n = P.ring.ngens // 2
    return P.diff(P.ring.gens[n + k])


def _merge(a: Index, b: Index) -> Tuple[int, Index]:
    """Sign of sorting a+b and the sorted index, sign 0 on collision."""
    if set(a) & set(b):
        return 0, ()
    seq = a + b
    if len(seq) < 2:
        return 1, seq
    order = sorted(range(len(seq)), key=seq.__getitem__)
    return Permutation(order).signature(), tuple(sorted(seq))


@dataclass(frozen=True, eq=False)
class AntiForm:
    """
    Sum of num / |f|^(2*power) * dzb_I (x) e_K over components (I, K, num).

    Indices are 0-based and strictly ascending; all components share the
    denominator power, so arithmetic first raises both sides to the larger one.
    """
    nvars: int
    koszul_rank: int
    base: Tuple[MultiPoly, ...]
    power: int
    components: Tuple[Tuple[Index, Index, ConjPoly], ...]

    @classmethod
    def build(cls, base: Sequence[MultiPoly], power: int, parts: Dict[Tuple[Index, Index], ConjPoly]) -> "AntiForm":
        base = tuple(base)
        comps = tuple(
            (I, K, num)
            for (I, K), num in sorted(parts.items(), key=lambda kv: (len(kv[0][1]), kv[0][1], len(kv[0][0]), kv[0][0]))
            if num
        )
        return cls(nvars=base[0].ring.ngens, koszul_rank=len(base), base=base, power=power, components=comps)

    @classmethod
    def zero(cls, base: Sequence[MultiPoly]) -> "AntiForm":
        return cls.build(base, 0, {})

    @classmethod
    def scalar(cls, base: Sequence[MultiPoly], value) -> "AntiForm":
        """A function of degree (0,0) with no e factor; accepts z-polynomials or (z, zb)-polynomials."""
        n = base[0].ring.ngens
        num = lift(value) if value.ring.ngens == n else value
        return cls.build(base, 0, {((), ()): num})

    @classmethod
    def koszul_vector(cls, base: Sequence[MultiPoly], coefficients: Sequence[MultiPoly]) -> "AntiForm":
        """sum_j c_j e_j with holomorphic c_j."""
        return cls.build(base, 0, {((), (j,)): lift(c) for j, c in enumerate(coefficients) if c})

    def as_dict(self) -> Dict[Tuple[Index, Index], ConjPoly]:
        return {(I, K): num for I, K, num in self.components}

    def raised_to(self, power: int) -> Dict[Tuple[Index, Index], ConjPoly]:
        if power < self.power:
            raise ValueError("cannot lower the denominator power")
        if power == self.power:
            return self.as_dict()
        factor = norm_squared(self.base) ** (power - self.power)
        return {key: num * factor for key, num in self.as_dict().items()}

    def _check(self, other: "AntiForm") -> None:
        if self.base != other.base:
            raise ValueError("forms over different generator tuples")

    def __add__(self, other: "AntiForm") -> "AntiForm":
        self._check(other)
        power = max(self.power, other.power)
        parts = self.raised_to(power)
        for key, num in other.raised_to(power).items():
            parts[key] = parts.get(key, num.ring.zero) + num
        return AntiForm.build(self.base, power, parts)

    def __neg__(self) -> "AntiForm":
        return AntiForm.build(self.base, self.power, {k: -v for k, v in self.as_dict().items()})

    def __sub__(self, other: "AntiForm") -> "AntiForm":
        return self + (-other)

    def scale(self, value) -> "AntiForm":
        """Multiply by a function (z-polynomial or (z, zb)-polynomial)."""
        factor = lift(value) if value.ring.ngens == self.nvars else value
        return AntiForm.build(self.base, self.power, {k: v * factor for k, v in self.as_dict().items()})

    def is_zero(self) -> bool:
        return not self.components

    def equals(self, other: "AntiForm") -> bool:
        return (self - other).is_zero()

    def koszul_part(self, degree: int) -> "AntiForm":
        return AntiForm.build(self.base, self.power, {(I, K): v for I, K, v in self.components if len(K) == degree})

    def normalized(self) -> "AntiForm":
        """Cancel common factors |f|^2 between every numerator and the denominator."""
        norm = norm_squared(self.base)
        parts, power = self.as_dict(), self.power
        while power > 0 and parts:
            divided = {}
            for key, num in parts.items():
                quotient, remainder = num.div([norm])
                if remainder:
                    return AntiForm.build(self.base, power, parts)
                divided[key] = quotient[0]
            parts, power = divided, power - 1
        return AntiForm.build(self.base, power if parts else 0, parts)


def cap(a: AntiForm, b: AntiForm) -> AntiForm:
    """(w (x) e_K) ∩ (w' (x) e_K') = w^w' (x) e_K^e_K', each factor sorted on its own."""
    a._check(b)
    parts: Dict[Tuple[Index, Index], ConjPoly] = {}
    for I, K, num_a in a.components:
        for J, L, num_b in b.components:
            s_form, IJ = _merge(I, J)
            if not s_form:
                continue
            s_kos, KL = _merge(K, L)
            if not s_kos:
                continue
            sign = s_form * s_kos
            term = num_a * num_b
            key = (IJ, KL)
            parts[key] = parts.get(key, term.ring.zero) + (term if sign > 0 else -term)
    return AntiForm.build(a.base, a.power + b.power, parts)


def dbar(a: AntiForm) -> AntiForm:
    """Quotient rule: dbar(num/|f|^2N) = (dnum * |f|^2 - N num d|f|^2) / |f|^(2N+2)."""
    N = a.power
    norm = norm_squared(a.base) if N else None
    grad = [dzb(norm, k) for k in range(a.nvars)] if N else None
    parts: Dict[Tuple[Index, Index], ConjPoly] = {}
    for I, K, num in a.components:
        for k in range(a.nvars):
            if k in I:
                continue
            if N:
                value = dzb(num, k) * norm - (num * grad[k]) * N
            else:
                value = dzb(num, k)
            if not value:
                continue
            sign, kI = _merge((k,), I)
            key = (kI, K)
            parts[key] = parts.get(key, value.ring.zero) + (value if sign > 0 else -value)
    return AntiForm.build(a.base, N + 1 if N else 0, parts)


def _check_generators(f: Sequence[MultiPoly], a: AntiForm) -> Tuple[MultiPoly, ...]:
    f = tuple(f)
    if len(f) != a.koszul_rank:
        raise ValueError(f"contraction with {len(f)} polynomials on a rank-{a.koszul_rank} form")
    return f


def delta_f(f: Sequence[MultiPoly], a: AntiForm) -> AntiForm:
    """Contraction: e_{l_1}^...^e_{l_k} -> sum_j (-1)^(j+1) f_{l_j} e_{...omit l_j...}."""
    lifted = [lift(fj) for fj in _check_generators(f, a)]
    parts: Dict[Tuple[Index, Index], ConjPoly] = {}
    for I, K, num in a.components:
        for pos, l in enumerate(K):
            value = num * lifted[l]
            if not value:
                continue
            key = (I, K[:pos] + K[pos + 1:])
            parts[key] = parts.get(key, value.ring.zero) + (value if pos % 2 == 0 else -value)
    return AntiForm.build(a.base, a.power, parts)


def nabla(f: Sequence[MultiPoly], a: AntiForm) -> AntiForm:
    """
    nabla_f = delta_f - (-1)^(r+1) dbar on the part of degree r = q - |K|.

    On r = -1, where sigma and v live, this is delta_f - dbar. delta_f and
    dbar commute, so the alternating sign across r makes nabla square to zero.
    """
    graded = AntiForm.build(
        a.base, a.power,
        {(I, K): (v if (len(K) - len(I) - 1) % 2 == 0 else -v) for I, K, v in a.components},
    )
    return delta_f(f, a) - dbar(graded)


def sigma(f: Sequence[MultiPoly]) -> AntiForm:
    """sigma = sum conj(f_j) e_j / |f|^2."""
    f = tuple(f)
    if not f:
        raise ValueError("sigma needs at least one polynomial")
    return AntiForm.build(f, 1, {((), (j,)): bar(fj) for j, fj in enumerate(f) if fj})


def build_v(f: Sequence[MultiPoly]) -> AntiForm:
    """v = sigma ∩ (1 + dbar sigma + ... + (dbar sigma)^(p-1))."""
    f = tuple(f)
    s = sigma(f)
    ds = dbar(s)
    v, piece = s, s
    for _ in range(len(f) - 1):
        piece = cap(piece, ds)
        v = v + piece
    return v


def top_component(v: AntiForm) -> AntiForm:
    return v.koszul_part(v.koszul_rank)


def _wedge_one_forms(forms: Sequence[Dict[int, ConjPoly]], zero: ConjPoly) -> Dict[Index, ConjPoly]:
    result: Dict[Index, ConjPoly] = {(): zero + 1}
    for form in forms:
        nxt: Dict[Index, ConjPoly] = {}
        for I, c in result.items():
            for k, d in form.items():
                sign, Ik = _merge(I, (k,))
                if not sign:
                    continue
                value = c * d
                nxt[Ik] = nxt.get(Ik, zero) + (value if sign > 0 else -value)
        result = {I: c for I, c in nxt.items() if c}
    return result


def closed_form_vp(f: Sequence[MultiPoly]) -> AntiForm:
    """p! sum_j (-1)^(j-1) fb_j dfb_1^..(omit j)..^dfb_p (x) e_1^..^e_p / |f|^2p."""
    f = tuple(f)
    p = len(f)
    n = f[0].ring.ngens
    C = conj_ring(n)
    bars = [bar(fj) for fj in f]
    diffs = [{k: dzb(b, k) for k in range(n) if dzb(b, k)} for b in bars]
    everything = tuple(range(p))
    parts: Dict[Tuple[Index, Index], ConjPoly] = {}
    for j in range(p):
        wedge = _wedge_one_forms([diffs[l] for l in range(p) if l != j], C.zero)
        for I, c in wedge.items():
            value = (bars[j] * c) * factorial(p)
            key = (I, everything)
            parts[key] = parts.get(key, C.zero) + (value if j % 2 == 0 else -value)
    return AntiForm.build(f, p, parts)


def proportionality_constant(a: AntiForm, b: AntiForm) -> Optional[GaussianRational]:
    """c with a = c*b exactly, or None if the forms are not proportional (b must be nonzero)."""
    a._check(b)
    if b.is_zero():
        raise ValueError("reference form is zero")
    power = max(a.power, b.power)
    pa, pb = a.raised_to(power), b.raised_to(power)
    key = next(iter(pb))
    ref = pb[key]
    if key not in pa:
        return None
    monom = max(ref.itermonoms(), key=grevlex)
    c = pa[key][monom] / ref[monom] if monom in pa[key] else None
    if c is None:
        return None
    if set(pa) != set(pb) or any(pa[k] != pb[k].mul_ground(c) for k in pb):
        return None
    return c


def vp_constant(f: Sequence[MultiPoly]) -> Optional[GaussianRational]:
    """The constant c(p) with top_component(build_v(f)) = c(p) * closed_form_vp(f)."""
    closed = closed_form_vp(f)
    if closed.is_zero():
        return None
    return proportionality_constant(top_component(build_v(f)), closed)


def omega_phi(f: Sequence[MultiPoly], phi: MultiPoly) -> AntiForm:
    """phi * v_p, the representative of the class of phi."""
    return top_component(build_v(f)).scale(phi)


def exactness_witness(f: Sequence[MultiPoly], psi: Sequence[MultiPoly]) -> AntiForm:
    """
    eta with dbar(eta) = omega_phi(f, sum psi_j f_j), for p >= 2.

    With u = sum psi_j e_j, u ∩ v_p has koszul degree p + 1 and vanishes, so
    contracting it gives phi v_p = u ∩ (dbar sigma)^(p-1) = dbar(u ∩ v_(p-1)).
    """
    f = tuple(f)
    if len(f) < 2:
        raise ValueError("exactness witnesses exist for p >= 2; for p = 1 omega_phi is the cochain psi e_1")
    u = AntiForm.koszul_vector(f, psi)
    return cap(u, build_v(f).koszul_part(len(f) - 1))


def omega_is_exact(f: Sequence[MultiPoly], phi: MultiPoly) -> Tuple[bool, Optional[AntiForm]]:
    """
    Exactness of omega_phi, witnessed through cofactors phi = sum psi_j f_j.

    Returns (False, None) when phi has no cofactors (phi not in <f>); for
    p = 1 the witness is the cochain psi e_1 itself and None is returned.
    """
    f = tuple(f)
    cofactors = extended_member(phi, buchberger(f))
    if cofactors is None:
        logger.debug("omega_is_exact: no cofactors, no witness searched")
        return False, None
    if len(f) == 1:
        return omega_phi(f, phi).equals(AntiForm.koszul_vector(f, cofactors)), None
    eta = exactness_witness(f, cofactors)
    return dbar(eta).equals(omega_phi(f, phi)), eta


def _render_index(prefix: str, index: Index, joiner: str) -> str:
    return joiner.join(f"{prefix}{i + 1}" for i in index)


def render_form(a: AntiForm) -> str:
    """
    Canonical text, one component per line:
        [dzb1^dzb2 | e1^e2] (numerator) / |f|^4
    """
    if a.is_zero():
        return "0"
    names = conj_names(a.nvars)
    lines = []
    for I, K, num in a.components:
        form = _render_index("dzb", I, "^") or "1"
        kos = _render_index("e", K, "^") or "1"
        denom = f" / |f|^{2 * a.power}" if a.power else ""
        lines.append(f"[{form} | {kos}] ({render_poly(num, names)}){denom}")
    return "\n".join(lines)
