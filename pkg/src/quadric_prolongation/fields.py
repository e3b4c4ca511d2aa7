"""Holomorphic polynomial vector fields on C^{n+k} and polynomial identities.

Coordinates are ``z_1..z_n, w_1..w_k``; ``z`` has weight 1 and ``w`` weight 2.
Fields are stored through their holomorphic representative
``sum_c f_c(z, w) d/dx_c``.

Identities "for all z in C^n, u in R^k" are handled as polynomials in the
independent variables ``(z, zbar, u)`` (:class:`RealPolynomial`).  Their
coefficients may be :class:`LinExpr` values, i.e. affine expressions in real
unknowns, and :func:`match_coefficients` turns such an identity into a
rational linear system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact import I, GaussianRational, RatMatrix, sparse_nullspace
from .forms import HermitianFormPack


class NonAffineError(ValueError):
    """A product of two non-constant affine expressions was formed."""


class DimensionMismatch(ValueError):
    pass


# -- affine expressions in real unknowns -------------------------------------


class LinExpr:
    """``const + sum_u c_u x_u`` with Gaussian-rational ``c_u`` and real unknowns ``x_u``.

    The constant is stored under the key ``None``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping | None = None):
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}

    @classmethod
    def unknown(cls, index: int) -> "LinExpr":
        return cls({index: GaussianRational(1)})

    @classmethod
    def complex_unknown(cls, re_index: int, im_index: int) -> "LinExpr":
        return cls({re_index: GaussianRational(1), im_index: I})

    def constant(self) -> GaussianRational:
        return self.coeffs.get(None, GaussianRational(0))

    def is_constant(self) -> bool:
        return all(k is None for k in self.coeffs)

    def unknowns(self) -> list[int]:
        return sorted(k for k in self.coeffs if k is not None)

    def evaluate(self, values: Sequence[Fraction]) -> GaussianRational:
        out = GaussianRational(0)
        for key, coef in self.coeffs.items():
            out = out + (coef if key is None else coef * values[key])
        return out

    def conj(self) -> "LinExpr":
        # unknowns are real
        return LinExpr({k: v.conj() for k, v in self.coeffs.items()})

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, LinExpr):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.is_constant() and self.constant() == other
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"LinExpr({self.coeffs!r})"

    def __neg__(self):
        return LinExpr({k: -v for k, v in self.coeffs.items()})

    def __add__(self, other):
        if isinstance(other, LinExpr):
            out = dict(self.coeffs)
            for k, v in other.coeffs.items():
                out[k] = out[k] + v if k in out else v
            return LinExpr(out)
        if isinstance(other, (int, Fraction, GaussianRational)):
            out = dict(self.coeffs)
            out[None] = out.get(None, 0) + GaussianRational.coerce(other)
            return LinExpr(out)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            if not other:
                return LinExpr()
            return LinExpr({k: v * other for k, v in self.coeffs.items()})
        if isinstance(other, LinExpr):
            if other.is_constant():
                return self * other.constant()
            if self.is_constant():
                return other * self.constant()
            raise NonAffineError("product of two non-constant affine expressions")
        return NotImplemented

    __rmul__ = __mul__


def _is_coefficient(c) -> bool:
    return isinstance(c, (GaussianRational, LinExpr))


# -- sparse polynomials -------------------------------------------------------


class Poly:
    """Sparse polynomial: exponent tuple -> coefficient (zero terms dropped)."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping | None = None):
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    def _new(self, terms):
        return type(self)._from(self, terms)

    @classmethod
    def _from(cls, like, terms):
        obj = cls.__new__(cls)
        for slot in _all_slots(cls):
            if slot != "terms":
                setattr(obj, slot, getattr(like, slot))
        obj.terms = {e: c for e, c in terms.items() if c}
        return obj

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, GaussianRational(0))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}({self.terms!r})"

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return self._new(out)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] - c if e in out else -c
        return self._new(out)

    def scale(self, c) -> "Poly":
        if not c:
            return self._new({})
        return self._new({e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = c1 * c2
                out[e] = out[e] + p if e in out else p
        return self._new(out)

    def __rmul__(self, other):
        return self.scale(other)

    def derivative(self, var: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            d = e[var]
            if d:
                ne = e[:var] + (d - 1,) + e[var + 1 :]
                out[ne] = c * d
        return self._new(out)


def _all_slots(cls):
    seen = []
    for klass in cls.__mro__:
        for s in getattr(klass, "__slots__", ()):
            if s not in seen:
                seen.append(s)
    return seen


def _monomial(nvars: int, var: int, power: int = 1) -> tuple:
    return tuple(power if i == var else 0 for i in range(nvars))


class RealPolynomial(Poly):
    """Polynomial in ``(z_1..z_n, zbar_1..zbar_n, u_1..u_k)`` treated as independent."""

    __slots__ = ("n", "k")

    def __init__(self, n: int, k: int, terms: Mapping | None = None):
        self.n = n
        self.k = k
        super().__init__(2 * n + k, terms)

    @classmethod
    def constant(cls, n, k, c) -> "RealPolynomial":
        return cls(n, k, {(0,) * (2 * n + k): GaussianRational.coerce(c) if not isinstance(c, LinExpr) else c})

    @classmethod
    def z(cls, n, k, a) -> "RealPolynomial":
        return cls(n, k, {_monomial(2 * n + k, a): GaussianRational(1)})

    @classmethod
    def zbar(cls, n, k, a) -> "RealPolynomial":
        return cls(n, k, {_monomial(2 * n + k, n + a): GaussianRational(1)})

    @classmethod
    def u(cls, n, k, l) -> "RealPolynomial":
        return cls(n, k, {_monomial(2 * n + k, 2 * n + l): GaussianRational(1)})

    def split(self, exps: tuple) -> tuple[tuple, tuple, tuple]:
        n = self.n
        return exps[:n], exps[n : 2 * n], exps[2 * n :]

    def conj(self) -> "RealPolynomial":
        n = self.n
        return self._new({e[n : 2 * n] + e[:n] + e[2 * n :]: c.conj() for e, c in self.terms.items()})

    def real_part(self) -> "RealPolynomial":
        return (self + self.conj()).scale(Fraction(1, 2))

    def imag_part(self) -> "RealPolynomial":
        return (self - self.conj()).scale(GaussianRational(0, Fraction(-1, 2)))

    def is_real(self) -> bool:
        return self == self.conj()


class QuadricRing:
    """Generators of the (z, zbar, u) polynomial ring attached to a pack."""

    def __init__(self, pack: HermitianFormPack):
        self.pack = pack
        self.n, self.k = pack.n, pack.k
        n, k = self.n, self.k
        self.zs = [RealPolynomial.z(n, k, a) for a in range(n)]
        self.zbars = [RealPolynomial.zbar(n, k, a) for a in range(n)]
        self.us = [RealPolynomial.u(n, k, l) for l in range(k)]
        self.H_zz = [self.hform(j, self.zs, self.zs) for j in range(k)]

    def zero(self) -> RealPolynomial:
        return RealPolynomial(self.n, self.k)

    def const(self, c) -> RealPolynomial:
        return RealPolynomial.constant(self.n, self.k, c)

    def hform(self, j: int, f: Sequence[RealPolynomial], g: Sequence[RealPolynomial]) -> RealPolynomial:
        """``H^j(f, g) = sum_{a,b} conj(g_a) M_j[a][b] f_b`` for polynomial vectors."""
        m = self.pack.mats[j]
        out = self.zero()
        for a in range(self.n):
            ga = None
            for b in range(self.n):
                e = m.entry(a, b)
                if not e or not f[b]:
                    continue
                if ga is None:
                    ga = g[a].conj()
                    if not ga:
                        break
                out = out + (ga * f[b]).scale(e)
        return out

    def w_substitutes(self) -> list[RealPolynomial]:
        """``w_j = u_j + i H^j(z, z)`` on the quadric."""
        return [self.us[j] + self.H_zz[j].scale(I) for j in range(self.k)]


# -- vector fields ------------------------------------------------------------


class PolyVectorField:
    """Holomorphic polynomial vector field on C^{n+k}.

    ``components[c]`` is the coefficient polynomial of ``d/dz_{c+1}`` for
    ``c < n`` and of ``d/dw_{c-n+1}`` otherwise; polynomials are in the n+k
    variables ``(z, w)``.
    """

    __slots__ = ("n", "k", "components")

    def __init__(self, n: int, k: int, components: Sequence[Poly] | None = None):
        self.n = n
        self.k = k
        if components is None:
            components = [Poly(n + k) for _ in range(n + k)]
        if len(components) != n + k:
            raise DimensionMismatch("need one component per coordinate")
        self.components = tuple(components)

    @classmethod
    def from_terms(cls, n: int, k: int, terms: Mapping) -> "PolyVectorField":
        """Build from ``{(z_exps, w_exps, target): coefficient}``."""
        comps = [dict() for _ in range(n + k)]
        for (alpha, beta, target), c in terms.items():
            if len(alpha) != n or len(beta) != k or not 0 <= target < n + k:
                raise DimensionMismatch(f"bad term key {(alpha, beta, target)!r}")
            e = tuple(alpha) + tuple(beta)
            c = GaussianRational.coerce(c)
            comps[target][e] = comps[target][e] + c if e in comps[target] else c
        return cls(n, k, [Poly(n + k, t) for t in comps])

    @property
    def terms(self) -> dict:
        n = self.n
        return {
            (e[:n], e[n:], t): c for t, comp in enumerate(self.components) for e, c in comp.terms.items()
        }

    def is_zero(self) -> bool:
        return not any(self.components)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, PolyVectorField):
            return (self.n, self.k) == (other.n, other.k) and self.components == other.components
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"PolyVectorField(n={self.n}, k={self.k}, terms={self.terms!r})"

    def _check(self, other):
        if (self.n, self.k) != (other.n, other.k):
            raise DimensionMismatch(f"fields on C^({self.n}+{self.k}) and C^({other.n}+{other.k})")

    def __add__(self, other):
        self._check(other)
        return PolyVectorField(self.n, self.k, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        self._check(other)
        return PolyVectorField(self.n, self.k, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return PolyVectorField(self.n, self.k, [-a for a in self.components])

    def scale(self, c) -> "PolyVectorField":
        return PolyVectorField(self.n, self.k, [a.scale(c) for a in self.components])

    __rmul__ = scale

    def apply(self, f: Poly) -> Poly:
        """Derivative of the polynomial ``f(z, w)`` along the field."""
        out = Poly(self.n + self.k)
        for v, comp in enumerate(self.components):
            if comp:
                d = f.derivative(v)
                if d:
                    out = out + comp * d
        return out

    def real_vector(self) -> dict:
        """Flatten to a sparse rational vector keyed by (target, exps, part)."""
        out = {}
        for t, comp in enumerate(self.components):
            for e, c in comp.terms.items():
                if c.re:
                    out[(t, e, 0)] = c.re
                if c.im:
                    out[(t, e, 1)] = c.im
        return out

    def to_json(self) -> list:
        return [
            [list(a), list(b), t, c.to_pair()]
            for (a, b, t), c in sorted(self.terms.items(), key=lambda kv: (kv[0][2], kv[0][0], kv[0][1]))
        ]


def bracket(X: PolyVectorField, Y: PolyVectorField) -> PolyVectorField:
    """Commutator ``X(Y) - Y(X)`` of holomorphic polynomial fields."""
    X._check(Y)
    comps = [X.apply(yc) - Y.apply(xc) for xc, yc in zip(X.components, Y.components)]
    return PolyVectorField(X.n, X.k, comps)


def term_weight(n: int, alpha: Sequence[int], beta: Sequence[int], target: int) -> int:
    return sum(alpha) + 2 * sum(beta) - (1 if target < n else 2)


def weight_of(X: PolyVectorField) -> int | None:
    """Common weight of all terms, or None when X is zero or inhomogeneous."""
    weights = {term_weight(X.n, a, b, t) for (a, b, t) in X.terms}
    if len(weights) == 1:
        return weights.pop()
    return None


def tangency_residues(X: PolyVectorField, pack: HermitianFormPack, ring: QuadricRing | None = None) -> list[RealPolynomial]:
    """``2 Re X(rho_j)`` restricted to the quadric, one polynomial per j.

    ``rho_j = (w_j - conj w_j)/(2i) - H^j(z, z)`` and the restriction is the
    substitution ``w = u + i H(z, z)``.
    """
    if (X.n, X.k) != (pack.n, pack.k):
        raise DimensionMismatch("field and form pack disagree on (n, k)")
    ring = ring or QuadricRing(pack)
    subs = _substitute_components(X, ring)
    n = pack.n
    half_over_i = GaussianRational(0, Fraction(-1, 2))
    out = []
    for j in range(pack.k):
        r = subs[n + j].scale(half_over_i) - ring.hform(j, subs[:n], ring.zs)
        out.append(r + r.conj())
    return out


def _substitute_components(X: PolyVectorField, ring: QuadricRing) -> list[RealPolynomial]:
    n, k = X.n, X.k
    wsub = ring.w_substitutes()
    cache: dict = {}

    def power(var: int, p: int) -> RealPolynomial:
        key = (var, p)
        if key not in cache:
            if p == 0:
                cache[key] = ring.const(1)
            elif var < n:
                cache[key] = ring.zs[var] if p == 1 else power(var, p - 1) * ring.zs[var]
            else:
                base = wsub[var - n]
                cache[key] = base if p == 1 else power(var, p - 1) * base
        return cache[key]

    out = []
    for comp in X.components:
        acc = ring.zero()
        for e, c in comp.terms.items():
            mono = ring.const(c)
            for var, p in enumerate(e):
                if p:
                    mono = mono * power(var, p)
            acc = acc + mono
        out.append(acc)
    return out


def tangency_check(X: PolyVectorField, pack: HermitianFormPack, ring: QuadricRing | None = None) -> bool:
    """True iff the real part of X is tangent to the quadric ``Im w = H(z, z)``."""
    return all(r.is_zero() for r in tangency_residues(X, pack, ring))


# -- identities with unknowns ------------------------------------------------


@dataclass
class ParametricPolynomial:
    """A RealPolynomial whose coefficients are affine in ``n_unknowns`` real unknowns."""

    poly: RealPolynomial
    n_unknowns: int

    def substitute(self, values: Sequence[Fraction]) -> RealPolynomial:
        out = {}
        for e, c in self.poly.terms.items():
            v = c.evaluate(values) if isinstance(c, LinExpr) else c
            if v:
                out[e] = v
        return RealPolynomial(self.poly.n, self.poly.k, out)


def _grlex_key(exps: tuple):
    return (sum(exps), exps)


def match_coefficients(identity: ParametricPolynomial, augmented: bool = False) -> RatMatrix:
    """Linear system whose nullspace is the solution set of ``identity == 0``.

    Rows are (monomial, real part) then (monomial, imaginary part) for every
    monomial present, monomials in graded-lex order on (z, zbar, u); columns
    are the unknowns.  With ``augmented=True`` a final column holds the
    constant parts, so solutions of the inhomogeneous problem are nullspace
    vectors with last coordinate 1.
    """
    m = identity.n_unknowns
    width = m + (1 if augmented else 0)
    rows = []
    for e in sorted(identity.poly.terms, key=_grlex_key):
        c = identity.poly.terms[e]
        if not _is_coefficient(c):
            raise NonAffineError(f"coefficient of {e} is not affine: {c!r}")
        re_row = [Fraction(0)] * width
        im_row = [Fraction(0)] * width
        items = c.coeffs.items() if isinstance(c, LinExpr) else [(None, c)]
        for key, coef in items:
            if key is None:
                if not augmented:
                    continue
                col = m
            else:
                if not 0 <= key < m:
                    raise NonAffineError(f"unknown index {key} out of range")
                col = key
            re_row[col] += coef.re
            im_row[col] += coef.im
        rows.append(re_row)
        rows.append(im_row)
    return RatMatrix.from_rows(rows, width)


def solve_identities(identities: Iterable[ParametricPolynomial], n_unknowns: int) -> list[tuple[Fraction, ...]]:
    """Canonical nullspace of the stacked homogeneous systems of several identities."""
    rows = []
    for ident in identities:
        if ident.n_unknowns != n_unknowns:
            raise DimensionMismatch("identities over different unknown sets")
        mat = match_coefficients(ident)
        for i in range(mat.rows):
            r = {j: v for j, v in enumerate(mat.row(i)) if v}
            if r:
                rows.append(r)
    return sparse_nullspace(rows, n_unknowns)
