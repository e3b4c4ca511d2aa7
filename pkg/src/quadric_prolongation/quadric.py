"""Direct construction of the infinitesimal automorphism algebra of a quadric.

The algebra of ``Q_H = {Im w = H(z, z)}`` is graded by weight (z: 1, w: 2)
into levels -2..2.  Levels -2 and -1 are written down explicitly; levels 0,
1, 2 are the real solution spaces of polynomial identities in the unknown
coefficient tensors, found by coefficient matching.

Tensor conventions (all indices 0-based):

* ``C[i][b]``: n x n, ``s[j][l]``: k x k real.
* ``a[i][l]``: n x k; ``A[i][j][l]`` symmetric in (j, l), ``A(z,z)_i = sum A[i][j][l] z_j z_l``.
* ``B[i][j][l]``: ``B(z,w)_i = sum B[i][j][l] z_j w_l``; ``r[i][l][m]`` symmetric in (l, m).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import I, GaussianRational, NotInSpan, SpanCoordinates
from .fields import (
    LinExpr,
    ParametricPolynomial,
    PolyVectorField,
    QuadricRing,
    bracket,
    solve_identities,
    weight_of,
)
from .forms import HermitianFormPack, require_nondegenerate
from .graded import GradedAlgebraTable

LEVELS = (-2, -1, 0, 1, 2)


class ClosureError(RuntimeError):
    """A bracket of basis fields left the graded span."""


# -- unknown bookkeeping ------------------------------------------------------


class _Unknowns:
    def __init__(self):
        self.count = 0

    def real(self) -> LinExpr:
        self.count += 1
        return LinExpr.unknown(self.count - 1)

    def complex(self) -> LinExpr:
        self.count += 2
        return LinExpr.complex_unknown(self.count - 2, self.count - 1)


def _tensor(shape, make, symmetric_tail: bool = False) -> dict:
    """Dict index-tuple -> make(); with ``symmetric_tail`` the last two axes share entries."""
    out = {}
    for idx in itertools.product(*(range(s) for s in shape)):
        if symmetric_tail and idx[-2] > idx[-1]:
            continue
        out[idx] = make()
    if symmetric_tail:
        for idx in itertools.product(*(range(s) for s in shape)):
            if idx[-2] > idx[-1]:
                out[idx] = out[idx[:-2] + (idx[-1], idx[-2])]
    return out


def _nested(shape, values: dict):
    if len(shape) == 1:
        return tuple(values[(i,)] for i in range(shape[0]))
    return tuple(
        _nested(shape[1:], {idx[1:]: v for idx, v in values.items() if idx[0] == i}) for i in range(shape[0])
    )


def _decode(tensor: dict, shape, values, real: bool = False):
    ev = {}
    for idx, expr in tensor.items():
        x = expr.evaluate(values)
        ev[idx] = x.re if real else x
    return _nested(shape, ev)


# -- field construction -------------------------------------------------------


class _FieldBuilder:
    def __init__(self, n: int, k: int):
        self.n, self.k = n, k
        self.terms: dict = {}

    def add(self, target: int, zvars: Sequence[int], wvars: Sequence[int], coef):
        if not coef:
            return
        alpha = [0] * self.n
        beta = [0] * self.k
        for a in zvars:
            alpha[a] += 1
        for l in wvars:
            beta[l] += 1
        key = (tuple(alpha), tuple(beta), target)
        self.terms[key] = self.terms.get(key, GaussianRational(0)) + coef

    def build(self) -> PolyVectorField:
        return PolyVectorField.from_terms(self.n, self.k, {k: v for k, v in self.terms.items() if v})


def _h_entry(pack: HermitianFormPack, j: int, c: int, b: int) -> GaussianRational:
    return pack.mats[j].entry(c, b)


# -- elements -----------------------------------------------------------------


@dataclass(frozen=True)
class GMinus2Element:
    q: tuple[Fraction, ...]

    level = -2

    def field(self, pack: HermitianFormPack) -> PolyVectorField:
        fb = _FieldBuilder(pack.n, pack.k)
        for j, qj in enumerate(self.q):
            fb.add(pack.n + j, (), (), GaussianRational(qj))
        return fb.build()


@dataclass(frozen=True)
class GMinus1Element:
    p: tuple[GaussianRational, ...]

    level = -1

    def field(self, pack: HermitianFormPack) -> PolyVectorField:
        n = pack.n
        fb = _FieldBuilder(n, pack.k)
        for i, pi in enumerate(self.p):
            fb.add(i, (), (), pi)
        # 2i H^j(z, p) = 2i sum conj(p_c) M_j[c][b] z_b
        for j in range(pack.k):
            for c in range(n):
                pc = self.p[c].conj()
                for b in range(n):
                    fb.add(n + j, (b,), (), I * 2 * pc * _h_entry(pack, j, c, b))
        return fb.build()


@dataclass(frozen=True)
class G0Element:
    C: tuple[tuple[GaussianRational, ...], ...]
    s: tuple[tuple[Fraction, ...], ...]

    level = 0

    def field(self, pack: HermitianFormPack) -> PolyVectorField:
        n, k = pack.n, pack.k
        fb = _FieldBuilder(n, k)
        for i in range(n):
            for b in range(n):
                fb.add(i, (b,), (), self.C[i][b])
        for j in range(k):
            for l in range(k):
                fb.add(n + j, (), (l,), GaussianRational(self.s[j][l]))
        return fb.build()


@dataclass(frozen=True)
class G1Element:
    a: tuple[tuple[GaussianRational, ...], ...]
    A: tuple[tuple[tuple[GaussianRational, ...], ...], ...]

    level = 1

    def field(self, pack: HermitianFormPack) -> PolyVectorField:
        n, k = pack.n, pack.k
        fb = _FieldBuilder(n, k)
        for i in range(n):
            for l in range(k):
                fb.add(i, (), (l,), self.a[i][l])
            for j in range(n):
                for l in range(n):
                    fb.add(i, (j, l), (), self.A[i][j][l])
        # 2i H^j(z, a conj(w)) = 2i sum conj(a[c][l]) M_j[c][b] z_b w_l
        for j in range(k):
            for c in range(n):
                for l in range(k):
                    acl = self.a[c][l].conj()
                    if not acl:
                        continue
                    for b in range(n):
                        fb.add(n + j, (b,), (l,), I * 2 * acl * _h_entry(pack, j, c, b))
        return fb.build()


@dataclass(frozen=True)
class G2Element:
    B: tuple[tuple[tuple[GaussianRational, ...], ...], ...]
    r: tuple[tuple[tuple[GaussianRational, ...], ...], ...]

    level = 2

    def field(self, pack: HermitianFormPack) -> PolyVectorField:
        n, k = pack.n, pack.k
        fb = _FieldBuilder(n, k)
        for i in range(n):
            for j in range(n):
                for l in range(k):
                    fb.add(i, (j,), (l,), self.B[i][j][l])
        for i in range(k):
            for l in range(k):
                for m in range(k):
                    fb.add(n + i, (), (l, m), self.r[i][l][m])
        return fb.build()


# -- constraint systems -------------------------------------------------------


def _lin_vec(ring: QuadricRing, polys_and_coefs) -> "object":
    acc = ring.zero()
    for poly, coef in polys_and_coefs:
        acc = acc + poly.scale(coef)
    return acc


def _products(ring: QuadricRing, factors: Sequence[Sequence]) -> dict:
    """Products of one polynomial from each factor list, keyed by index tuple."""
    out = {}
    for idx in itertools.product(*(range(len(f)) for f in factors)):
        p = factors[0][idx[0]]
        for f, t in zip(factors[1:], idx[1:]):
            p = p * f[t]
        out[idx] = p
    return out


def g0_identities(pack: HermitianFormPack):
    """Identities ``2 Re H(Cz, z) - s H(z, z) = 0`` plus the unknown tensors."""
    n, k = pack.n, pack.k
    ring = QuadricRing(pack)
    unk = _Unknowns()
    C = _tensor((n, n), unk.complex)
    s = _tensor((k, k), unk.real)
    Cz = [_lin_vec(ring, [(ring.zs[b], C[i, b]) for b in range(n)]) for i in range(n)]
    idents = []
    for j in range(k):
        P = ring.hform(j, Cz, ring.zs)
        lhs = P + P.conj()
        rhs = _lin_vec(ring, [(ring.H_zz[l], s[j, l]) for l in range(k)])
        idents.append(lhs - rhs)
    return [ParametricPolynomial(p, unk.count) for p in idents], (C, s), unk.count


def g1_identities(pack: HermitianFormPack):
    """Identities ``H(A(z,z), z) - 2i H(z, a H(z,z)) = 0``."""
    n, k = pack.n, pack.k
    ring = QuadricRing(pack)
    unk = _Unknowns()
    a = _tensor((n, k), unk.complex)
    A = _tensor((n, n, n), unk.complex, symmetric_tail=True)
    zz = _products(ring, [ring.zs, ring.zs])
    Azz = [_lin_vec(ring, [(zz[j, l], A[i, j, l]) for j in range(n) for l in range(n)]) for i in range(n)]
    aH = [_lin_vec(ring, [(ring.H_zz[l], a[i, l]) for l in range(k)]) for i in range(n)]
    idents = []
    for j in range(k):
        lhs = ring.hform(j, Azz, ring.zs)
        rhs = ring.hform(j, ring.zs, aH).scale(I * 2)
        idents.append(lhs - rhs)
    return [ParametricPolynomial(p, unk.count) for p in idents], (a, A), unk.count


def g2_identities(pack: HermitianFormPack):
    """Identities ``Re H(B(z,u), z) = r(H(z,z), u)`` and ``Im H(B(z, H(z,z)), z) = 0``."""
    n, k = pack.n, pack.k
    ring = QuadricRing(pack)
    unk = _Unknowns()
    B = _tensor((n, n, k), unk.complex)
    r = _tensor((k, k, k), unk.complex, symmetric_tail=True)
    zu = _products(ring, [ring.zs, ring.us])
    zH = _products(ring, [ring.zs, ring.H_zz])
    Hu = _products(ring, [ring.H_zz, ring.us])
    Bzu = [_lin_vec(ring, [(zu[j, l], B[i, j, l]) for j in range(n) for l in range(k)]) for i in range(n)]
    BzH = [_lin_vec(ring, [(zH[j, l], B[i, j, l]) for j in range(n) for l in range(k)]) for i in range(n)]
    idents = []
    for j in range(k):
        rHu = _lin_vec(ring, [(Hu[l, m], r[j, l, m]) for l in range(k) for m in range(k)])
        idents.append(ring.hform(j, Bzu, ring.zs).real_part() - rHu)
    for j in range(k):
        idents.append(ring.hform(j, BzH, ring.zs).imag_part())
    return [ParametricPolynomial(p, unk.count) for p in idents], (B, r), unk.count


def solve_g0(pack: HermitianFormPack) -> list[G0Element]:
    require_nondegenerate(pack)
    idents, (C, s), m = g0_identities(pack)
    n, k = pack.n, pack.k
    return [
        G0Element(_decode(C, (n, n), v), _decode(s, (k, k), v, real=True))
        for v in solve_identities(idents, m)
    ]


def solve_g1(pack: HermitianFormPack) -> list[G1Element]:
    require_nondegenerate(pack)
    idents, (a, A), m = g1_identities(pack)
    n, k = pack.n, pack.k
    return [G1Element(_decode(a, (n, k), v), _decode(A, (n, n, n), v)) for v in solve_identities(idents, m)]


def solve_g2(pack: HermitianFormPack) -> list[G2Element]:
    require_nondegenerate(pack)
    idents, (B, r), m = g2_identities(pack)
    n, k = pack.n, pack.k
    return [G2Element(_decode(B, (n, n, k), v), _decode(r, (k, k, k), v)) for v in solve_identities(idents, m)]


def negative_elements(pack: HermitianFormPack) -> tuple[list[GMinus2Element], list[GMinus1Element]]:
    n, k = pack.n, pack.k
    g2 = [GMinus2Element(tuple(Fraction(int(i == j)) for i in range(k))) for j in range(k)]
    ps = [tuple(GaussianRational(int(i == j)) for i in range(n)) for j in range(n)]
    ps += [tuple(I * x for x in p) for p in ps]
    return g2, [GMinus1Element(p) for p in ps]


def build_negative_basis(pack: HermitianFormPack) -> tuple[list[PolyVectorField], list[PolyVectorField]]:
    """Fields ``e_j d/dw`` and ``p d/dz + 2i H(z, p) d/dw`` for p in (e_1..e_n, i e_1..i e_n)."""
    require_nondegenerate(pack)
    m2, m1 = negative_elements(pack)
    return [e.field(pack) for e in m2], [e.field(pack) for e in m1]


# -- weight 3 -----------------------------------------------------------------


@dataclass
class Weight3System:
    """Identities for a weight-3 field ``(D'(z,z,w) + t'(w,w)) d/dz + ...``.

    ``D'`` is C^n-valued on C^n x C^n x C^k (symmetric in its first two
    slots), ``t'`` is C^n-valued symmetric on C^k x C^k.
    """

    identities: list[ParametricPolynomial]
    D: dict
    t: dict
    n_unknowns: int


def weight3_system(pack: HermitianFormPack) -> Weight3System:
    n, k = pack.n, pack.k
    ring = QuadricRing(pack)
    unk = _Unknowns()
    # D[i, l, a, b]: slots reordered so the symmetric pair is last
    D = _tensor((n, k, n, n), unk.complex, symmetric_tail=True)
    t = _tensor((n, k, k), unk.complex, symmetric_tail=True)
    zz = _products(ring, [ring.zs, ring.zs])
    zzu = {(a, b, l): zz[a, b] * ring.us[l] for a in range(n) for b in range(n) for l in range(k)}
    zzH = {(a, b, l): zz[a, b] * ring.H_zz[l] for a in range(n) for b in range(n) for l in range(k)}
    uH = _products(ring, [ring.us, ring.H_zz])

    def apply_D(mono):
        return [
            _lin_vec(ring, [(mono[a, b, l], D[i, l, a, b]) for a in range(n) for b in range(n) for l in range(k)])
            for i in range(n)
        ]

    Dzzu, DzzH = apply_D(zzu), apply_D(zzH)
    tuH = [_lin_vec(ring, [(uH[l, m], t[i, l, m]) for l in range(k) for m in range(k)]) for i in range(n)]
    idents = []
    for j in range(k):
        idents.append(ring.hform(j, Dzzu, ring.zs) - ring.hform(j, ring.zs, tuH).scale(I * 4))
    for j in range(k):
        idents.append(ring.hform(j, DzzH, ring.zs))
    return Weight3System([ParametricPolynomial(p, unk.count) for p in idents], D, t, unk.count)


def weight3_solutions(pack: HermitianFormPack) -> list:
    system = weight3_system(pack)
    return solve_identities(system.identities, system.n_unknowns)


def weight3_nullcheck(pack: HermitianFormPack) -> bool:
    """True iff the weight-3 system admits only the zero solution."""
    require_nondegenerate(pack)
    return not weight3_solutions(pack)


# -- assembly -----------------------------------------------------------------


def direct_elements(pack: HermitianFormPack) -> dict[int, list]:
    require_nondegenerate(pack)
    m2, m1 = negative_elements(pack)
    return {-2: m2, -1: m1, 0: solve_g0(pack), 1: solve_g1(pack), 2: solve_g2(pack)}


def assemble_table(pack: HermitianFormPack) -> GradedAlgebraTable:
    """Realize every basis element as a field and tabulate all brackets."""
    elements = direct_elements(pack)
    fields, elems = [], []
    for level in LEVELS:
        for e in elements[level]:
            f = e.field(pack)
            if weight_of(f) != level:
                raise ClosureError(f"basis field at level {level} has weight {weight_of(f)}")
            fields.append(f)
            elems.append(e)
    dims = {l: len(elements[l]) for l in LEVELS}
    offsets, start = {}, 0
    for l in LEVELS:
        offsets[l] = start
        start += dims[l]
    level_of = [l for l in LEVELS for _ in range(dims[l])]
    spans = {l: SpanCoordinates([fields[i].real_vector() for i in range(offsets[l], offsets[l] + dims[l])]) for l in LEVELS}
    brackets = {}
    for i, j in itertools.combinations(range(len(fields)), 2):
        b = bracket(fields[i], fields[j])
        if b.is_zero():
            continue
        target = level_of[i] + level_of[j]
        if target not in spans:
            raise ClosureError(f"[e_{i}, e_{j}] is nonzero at weight {target}")
        try:
            coords = spans[target].coordinates(b.real_vector())
        except NotInSpan:
            raise ClosureError(f"[e_{i}, e_{j}] is not in the span of level {target}") from None
        brackets[(i, j)] = {offsets[target] + t: c for t, c in enumerate(coords) if c}
    return GradedAlgebraTable(LEVELS, dims, brackets, tuple(fields), pack, tuple(elems))
