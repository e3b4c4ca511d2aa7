"""R^k-valued Hermitian forms on C^n and the quadrics they define.

A pack ``H = (H^1, ..., H^k)`` is stored as k Hermitian n x n matrices with
Gaussian-rational entries.  Evaluation is linear in the first slot and
conjugate-linear in the second::

    H^j(z, z') = (z')^* M_j z
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import (
    GaussianRational,
    GaussMatrix,
    RatMatrix,
    complexify_vector,
    nullspace,
    rank,
    realify,
)


class FormError(ValueError):
    """Invalid form pack document."""


class UnknownCatalogError(KeyError):
    pass


class DegenerateFormError(ValueError):
    """Raised when an operation needs a nondegenerate pack."""

    def __init__(self, verdict: "NondegeneracyVerdict"):
        self.verdict = verdict
        super().__init__(f"degenerate Hermitian form: {verdict.describe()}")


@dataclass(frozen=True)
class HermitianFormPack:
    n: int
    k: int
    mats: tuple[GaussMatrix, ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise FormError(f"n and k must be positive, got n={self.n}, k={self.k}")
        if len(self.mats) != self.k:
            raise FormError(f"dimension mismatch: k={self.k} but {len(self.mats)} matrices given")
        for j, m in enumerate(self.mats):
            if (m.rows, m.cols) != (self.n, self.n):
                raise FormError(
                    f"dimension mismatch: matrix {j} is {m.rows}x{m.cols}, expected {self.n}x{self.n}"
                )
            for i in range(self.n):
                for l in range(i, self.n):
                    if m.entry(i, l) != m.entry(l, i).conj():
                        raise FormError(f"matrix {j} is not Hermitian at entry ({j},{i},{l})")

    @classmethod
    def from_matrices(cls, mats, name=None) -> "HermitianFormPack":
        """Build from nested lists of scalars (ints, Fractions, GaussianRationals)."""
        gm = tuple(m if isinstance(m, GaussMatrix) else GaussMatrix.from_rows(m) for m in mats)
        if not gm:
            raise FormError("at least one matrix required")
        return cls(gm[0].rows, len(gm), gm, name)

    def evaluate(self, j: int, z: Sequence, zp: Sequence) -> GaussianRational:
        """``H^j(z, z')``."""
        m = self.mats[j]
        s = GaussianRational(0)
        for a in range(self.n):
            ca = GaussianRational.coerce(zp[a]).conj()
            if not ca:
                continue
            for b in range(self.n):
                e = m.entry(a, b)
                if e:
                    s = s + ca * e * z[b]
        return s

    def __call__(self, z, zp) -> tuple[GaussianRational, ...]:
        return tuple(self.evaluate(j, z, zp) for j in range(self.k))

    def scaled(self, c) -> "HermitianFormPack":
        return HermitianFormPack(self.n, self.k, tuple(m.scale(c) for m in self.mats), self.name)

    def recombined(self, coeffs: Sequence[Sequence]) -> "HermitianFormPack":
        """Pack with matrices ``sum_l coeffs[j][l] M_l`` (coeffs real k x k)."""
        mats = []
        for j in range(self.k):
            entries = [GaussianRational(0)] * (self.n * self.n)
            for l in range(self.k):
                c = Fraction(coeffs[j][l])
                if c:
                    entries = [e + c * f for e, f in zip(entries, self.mats[l].entries)]
            mats.append(GaussMatrix(self.n, self.n, entries))
        return HermitianFormPack(self.n, self.k, tuple(mats), self.name)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "mats": [[[m.entry(i, l).to_pair() for l in range(self.n)] for i in range(self.n)] for m in self.mats],
        }

    def label(self) -> str:
        if self.name:
            return self.name
        return f"n={self.n},k={self.k}"


def parse_form_pack(text: str | bytes | dict, name: str | None = None) -> HermitianFormPack:
    """Parse and validate a form-pack JSON document.

    Expected layout: ``{"n": n, "k": k, "mats": [k][n][n] of ["p/q", "p/q"]}``.
    """
    if isinstance(text, dict):
        doc = text
    else:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise FormError("form pack must be a JSON object")
    missing = {"n", "k", "mats"} - set(doc)
    if missing:
        raise FormError(f"schema violation: missing keys {sorted(missing)}")
    n, k, mats = doc["n"], doc["k"], doc["mats"]
    for key, v in (("n", n), ("k", k)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise FormError(f"schema violation: {key} must be a positive integer")
    if not isinstance(mats, list) or len(mats) != k:
        raise FormError(f"dimension mismatch: declared k={k} but mats has {len(mats) if isinstance(mats, list) else '?'} entries")
    parsed = []
    for j, m in enumerate(mats):
        if not isinstance(m, list) or len(m) != n or any(not isinstance(r, list) or len(r) != n for r in m):
            raise FormError(f"dimension mismatch: matrix {j} is not {n}x{n}")
        try:
            entries = [GaussianRational.from_pair(e) for r in m for e in r]
        except ValueError as exc:
            raise FormError(f"schema violation in matrix {j}: {exc}") from None
        parsed.append(GaussMatrix(n, n, entries))
    return HermitianFormPack(n, k, tuple(parsed), name)


def serialize_form_pack(pack: HermitianFormPack) -> str:
    return json.dumps(pack.to_dict(), sort_keys=True)


# -- nondegeneracy ------------------------------------------------------------


@dataclass(frozen=True)
class NondegeneracyVerdict:
    """Outcome of the two nondegeneracy tests.

    ``dependency`` holds real coefficients c with sum c_j H^j = 0 when the
    forms are dependent; ``kernel_vector`` holds z != 0 with H(z, .) = 0 when
    the common kernel is nontrivial.
    """

    independent: bool
    trivial_kernel: bool
    dependency: tuple[Fraction, ...] | None = None
    kernel_vector: tuple[GaussianRational, ...] | None = None

    @property
    def nondegenerate(self) -> bool:
        return self.independent and self.trivial_kernel

    @property
    def witness(self):
        if not self.independent:
            return self.dependency
        if not self.trivial_kernel:
            return self.kernel_vector
        return None

    def describe(self) -> str:
        parts = []
        if not self.independent:
            parts.append(f"forms are linearly dependent (coefficients {[str(c) for c in self.dependency]})")
        if not self.trivial_kernel:
            parts.append(f"common kernel contains {[str(c) for c in self.kernel_vector]}")
        return "; ".join(parts) or "nondegenerate"

    def to_dict(self) -> dict:
        from .exact import format_rational

        return {
            "independent": self.independent,
            "trivial_kernel": self.trivial_kernel,
            "dependency": None if self.dependency is None else [format_rational(c) for c in self.dependency],
            "kernel_vector": None if self.kernel_vector is None else [c.to_pair() for c in self.kernel_vector],
        }


def _vectorized(pack: HermitianFormPack) -> RatMatrix:
    # column j = (re, im) parts of every entry of M_j
    cols = []
    for m in pack.mats:
        col = []
        for e in m.entries:
            col.extend((e.re, e.im))
        cols.append(col)
    return RatMatrix.from_rows([list(r) for r in zip(*cols)], pack.k)


def _stacked(pack: HermitianFormPack) -> GaussMatrix:
    return GaussMatrix.from_rows([m.row(i) for m in pack.mats for i in range(pack.n)], pack.n)


def check_nondegenerate(pack: HermitianFormPack) -> NondegeneracyVerdict:
    vec = _vectorized(pack)
    dependency = None
    independent = rank(vec) == pack.k
    if not independent:
        dependency = nullspace(vec)[0]
    stacked = realify(_stacked(pack))
    kernel_vector = None
    trivial_kernel = rank(stacked) == 2 * pack.n
    if not trivial_kernel:
        kernel_vector = tuple(complexify_vector(nullspace(stacked)[0]))
    return NondegeneracyVerdict(independent, trivial_kernel, dependency, kernel_vector)


def witness_confirms(pack: HermitianFormPack, verdict: NondegeneracyVerdict) -> bool:
    """Re-evaluate the recorded witnesses against the pack."""
    ok = True
    if verdict.dependency is not None:
        c = verdict.dependency
        combo = [GaussianRational(0)] * (pack.n * pack.n)
        for cj, m in zip(c, pack.mats):
            combo = [a + cj * b for a, b in zip(combo, m.entries)]
        ok &= any(c) and not any(combo)
    if verdict.kernel_vector is not None:
        z = verdict.kernel_vector
        basis = [[GaussianRational(1 if t == s else 0) for t in range(pack.n)] for s in range(pack.n)]
        vanish = all(not pack.evaluate(j, z, e) for j in range(pack.k) for e in basis)
        ok &= any(z) and vanish
    return ok


def require_nondegenerate(pack: HermitianFormPack) -> NondegeneracyVerdict:
    verdict = check_nondegenerate(pack)
    if not verdict.nondegenerate:
        raise DegenerateFormError(verdict)
    return verdict


# -- catalog ------------------------------------------------------------------


def _diag(*entries) -> list[list[int]]:
    n = len(entries)
    return [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]


def _offdiag(n: int = 2) -> list[list[int]]:
    return [[1 if (i, j) in ((0, 1), (1, 0)) else 0 for j in range(n)] for i in range(n)]


def _sig(entries) -> str:
    return ",".join("+" if e > 0 else "-" for e in entries)


def _catalog_heisenberg() -> list[HermitianFormPack]:
    return [
        HermitianFormPack.from_matrices([_diag(*[1] * n)], name=f"heisenberg-n{n}") for n in (1, 2, 3)
    ]


_HYPERQUADRIC_SIGNATURES = [(-1,), (1, 1), (1, -1), (1, 1, 1), (1, 1, -1)]


def _catalog_hyperquadric() -> list[HermitianFormPack]:
    return [
        HermitianFormPack.from_matrices([_diag(*sig)], name=f"hyperquadric-({_sig(sig)})")
        for sig in _HYPERQUADRIC_SIGNATURES
    ]


def _catalog_codim2() -> list[HermitianFormPack]:
    return [
        HermitianFormPack.from_matrices([_diag(1, 0), _diag(0, 1)], name="diagonal-n2-k2"),
        HermitianFormPack.from_matrices([_diag(1, 0), _diag(0, 1), _offdiag()], name="diagonal-n2-k3"),
    ]


CATALOGS = {
    "heisenberg": _catalog_heisenberg,
    "hyperquadric": _catalog_hyperquadric,
    "diagonal-codim2": _catalog_codim2,
}


def builtin_catalog(name: str) -> list[HermitianFormPack]:
    if name == "full-suite":
        return [p for key in ("heisenberg", "hyperquadric", "diagonal-codim2") for p in CATALOGS[key]()]
    try:
        return CATALOGS[name]()
    except KeyError:
        raise UnknownCatalogError(
            f"unknown catalog {name!r}; choose from {sorted([*CATALOGS, 'full-suite'])}"
        ) from None
