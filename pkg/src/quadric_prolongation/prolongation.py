"""Tanaka's maximal prolongation of a depth-2 graded algebra g^-2 + g^-1 + g^0.

Only structure constants are used.  An element of level ``L >= 1`` is a pair
of linear maps

    value: g^-1 -> level L-1      (the bracket with g^-1)
    prime: g^-2 -> level L-2      (the bracket with g^-2)

satisfying, for all x, y in g^-1 and v in g^-2::

    [value(x), y] - [value(y), x] = prime([x, y])
    [prime(v), x] = [value(x), v]

Levels are solved one at a time as exact nullspaces.  Brackets between
nonnegative levels are then defined recursively by

    [X, Y](x) = [[X, x], Y] + [X, [Y, x]]

(and the same with x in g^-2), after which every graded identity is checked
on all basis tuples.

Vectors are sparse dicts ``local index -> Fraction`` tagged with their level.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .exact import NotInSpan, SpanCoordinates, echelon, sparse_nullspace
from .graded import GradedAlgebraTable, jacobi_check

DEFAULT_MAX_LEVEL = 6


class ProlongationError(RuntimeError):
    pass


class MembershipError(ProlongationError):
    """A recursively defined bracket fell outside the constructed level."""


def _axpy(y: dict, a, x: Mapping):
    if not a:
        return y
    for k, v in x.items():
        nv = y.get(k, 0) + a * v
        if nv:
            y[k] = nv
        else:
            y.pop(k, None)
    return y


def _unit(i: int) -> dict:
    return {i: Fraction(1)}


@dataclass
class ProlongedLevel:
    """Basis of one prolongation level, stored as (value, prime) map pairs.

    ``value[e][j]`` is the vector ``[X_e, x_j]`` in level ``degree - 1`` and
    ``prime[e][m]`` is ``[X_e, v_m]`` in level ``degree - 2``.
    """

    degree: int
    source_dims: tuple[int, int]  # (dim g^-1, dim g^-2)
    target_dims: tuple[int, int]  # (dim level L-1, dim level L-2)
    value: list[list[dict]]
    prime: list[list[dict]]

    def __post_init__(self):
        self._span = SpanCoordinates([self.flatten(v, p) for v, p in zip(self.value, self.prime)])

    @property
    def dim(self) -> int:
        return len(self.value)

    def flatten(self, value, prime) -> dict:
        out = {}
        for j, vec in enumerate(value):
            for a, c in vec.items():
                if c:
                    out[(0, j, a)] = c
        for m, vec in enumerate(prime):
            for b, c in vec.items():
                if c:
                    out[(1, m, b)] = c
        return out

    def coordinates(self, value, prime) -> dict:
        """Coordinates of the map pair in this level's basis (raises NotInSpan)."""
        coords = self._span.coordinates(self.flatten(value, prime))
        return {i: c for i, c in enumerate(coords) if c}


@dataclass
class ProlongCertificate:
    dims: dict[int, int]
    termination_level: int | None
    identity_5a: bool
    identity_5b: bool
    identity_7: bool
    identity_8a: bool
    identity_8b: bool
    identity_9: bool
    antisymmetry: bool
    base_jacobi: bool

    @property
    def all_pass(self) -> bool:
        return all(
            (
                self.identity_5a,
                self.identity_5b,
                self.identity_7,
                self.identity_8a,
                self.identity_8b,
                self.identity_9,
                self.antisymmetry,
                self.base_jacobi,
            )
        )

    def to_dict(self) -> dict:
        return {
            "levels": sorted(self.dims),
            "dims": [self.dims[l] for l in sorted(self.dims)],
            "termination_level": self.termination_level,
            "identities": {
                "bracket_compatibility_g-1": self.identity_5a,
                "bracket_compatibility_g-2_g-1": self.identity_5b,
                "bracket_compatibility_g-2": self.identity_7,
                "derivation_g-1": self.identity_8a,
                "derivation_g-2": self.identity_8b,
                "jacobi_nonnegative": self.identity_9,
                "antisymmetry": self.antisymmetry,
                "base_jacobi": self.base_jacobi,
            },
            "all_pass": self.all_pass,
        }


@dataclass
class ProlongationState:
    """The prolongation tower built so far.

    ``base`` is the truncation of the input table to levels -2..0.  Levels
    ``1..`` live in ``levels``; ``mixed`` holds brackets between nonnegative
    levels once :func:`extend_brackets` has run.
    """

    base: GradedAlgebraTable
    levels: dict[int, ProlongedLevel] = field(default_factory=dict)
    terminated: bool = False
    mixed: dict | None = None
    certificate: ProlongCertificate | None = None

    def __post_init__(self):
        b = self.base
        self._base_br: dict = {}
        for (i, j), vec in b.brackets.items():
            li, lj = b.level_of(i), b.level_of(j)
            lt = li + lj
            o = b.offset(lt)
            v = {m - o: c for m, c in vec.items()}
            ii, jj = i - b.offset(li), j - b.offset(lj)
            self._base_br[(li, ii, lj, jj)] = v
            self._base_br[(lj, jj, li, ii)] = {m: -c for m, c in v.items()}

    @property
    def pack(self):
        return self.base.pack

    @property
    def m1(self) -> int:
        return self.base.dims[-1]

    @property
    def m2(self) -> int:
        return self.base.dims[-2]

    @property
    def top_computed(self) -> int:
        return max(self.levels, default=0)

    @property
    def top(self) -> int:
        """Highest level of nonzero dimension."""
        nonzero = [l for l, lev in self.levels.items() if lev.dim]
        return max(nonzero, default=0)

    def dim(self, level: int) -> int:
        if level in (-2, -1, 0):
            return self.base.dims[level]
        if level in self.levels:
            return self.levels[level].dim
        if level < -2 or self.terminated:
            return 0
        raise ProlongationError(f"level {level} has not been constructed")

    def dims(self) -> dict[int, int]:
        out = {l: self.base.dims[l] for l in (-2, -1, 0)}
        for l in sorted(self.levels):
            out[l] = self.levels[l].dim
        return out

    def truncated(self, top: int) -> "ProlongationState":
        """Copy keeping levels <= top, marked as not terminated."""
        levels = {l: lev for l, lev in self.levels.items() if l <= top}
        return ProlongationState(self.base, levels, terminated=False)

    # -- brackets ---------------------------------------------------------

    def bracket_basis(self, la: int, i: int, lb: int, j: int) -> dict:
        lt = la + lb
        if lt < -2:
            return {}
        if la <= 0 and lb <= 0:
            return self._base_br.get((la, i, lb, j), {})
        if la >= 1 and lb < 0:
            lev = self.levels[la]
            return lev.value[i][j] if lb == -1 else lev.prime[i][j]
        if lb >= 1 and la < 0:
            return {m: -c for m, c in self.bracket_basis(lb, j, la, i).items()}
        # both nonnegative, at least one positive
        if self.terminated and lt > self.top:
            return {}
        if self.mixed is None or (la, i, lb, j) not in self.mixed:
            raise ProlongationError(f"bracket of levels {la}, {lb} not yet defined")
        return self.mixed[(la, i, lb, j)]

    def bracket(self, la: int, x: Mapping, lb: int, y: Mapping) -> dict:
        """Bracket of a level-``la`` vector with a level-``lb`` vector."""
        out: dict = {}
        if not x or not y:
            return out
        for i, a in x.items():
            for j, b in y.items():
                _axpy(out, a * b, self.bracket_basis(la, i, lb, j))
        return out


def _base_checks(table: GradedAlgebraTable):
    for l in (-2, -1, 0):
        if l not in table.levels:
            raise ProlongationError(f"table lacks level {l}")
    base = table.truncated(0)
    if base.levels[0] != -2:
        raise ProlongationError("table must start at level -2")
    return base


def init_state(table: GradedAlgebraTable) -> ProlongationState:
    """Start a prolongation from the nonpositive part of ``table``.

    Checks that [g^-1, g^-1] = g^-2, that no nonzero level-0 element
    annihilates g^-1, and that the truncation satisfies Jacobi.
    """
    base = _base_checks(table)
    state = ProlongationState(base)
    m1, m2, d0 = state.m1, state.m2, base.dims[0]
    if m1 == 0:
        raise ProlongationError("g^-1 is zero")
    images = [state.bracket_basis(-1, i, -1, j) for i, j in itertools.combinations(range(m1), 2)]
    if len(echelon(images)) != m2:
        raise ProlongationError("the bracket g^-1 x g^-1 -> g^-2 is not surjective")
    actions = []
    for a in range(d0):
        actions.append({(j, c): v for j in range(m1) for c, v in state.bracket_basis(0, a, -1, j).items()})
    if len(echelon(actions)) != d0:
        raise ProlongationError("a nonzero level-0 element annihilates g^-1")
    if not jacobi_check(base):
        raise ProlongationError("the nonpositive part violates the Jacobi identity")
    return state


def prolong_step(state: ProlongationState) -> int:
    """Construct the next level; returns its dimension."""
    if state.terminated:
        raise ProlongationError("prolongation already terminated")
    L = state.top_computed + 1
    m1, m2 = state.m1, state.m2
    d1, d2 = state.dim(L - 1), state.dim(L - 2)
    if d1 == 0:
        raise ProlongationError(f"level {L - 1} is zero; nothing to prolong")

    def V(a, j):
        return j * d1 + a

    def P(c, m):
        return m1 * d1 + m * d2 + c

    n_unknowns = m1 * d1 + m2 * d2
    rows = []
    # [value(x_i), x_j] - [value(x_j), x_i] - prime([x_i, x_j]) = 0 in level L-2
    for i, j in itertools.combinations(range(m1), 2):
        eq: dict = {}
        for a in range(d1):
            for c, v in state.bracket_basis(L - 1, a, -1, j).items():
                _axpy(eq.setdefault(c, {}), v, {V(a, i): 1})
            for c, v in state.bracket_basis(L - 1, a, -1, i).items():
                _axpy(eq.setdefault(c, {}), -v, {V(a, j): 1})
        for m, v in state.bracket_basis(-1, i, -1, j).items():
            for c in range(d2):
                _axpy(eq.setdefault(c, {}), -v, {P(c, m): 1})
        rows.extend(r for r in eq.values() if r)
    # [prime(v_m), x_j] - [value(x_j), v_m] = 0 in level L-3
    for m in range(m2):
        for j in range(m1):
            eq = {}
            for c in range(d2):
                for e, v in state.bracket_basis(L - 2, c, -1, j).items():
                    _axpy(eq.setdefault(e, {}), v, {P(c, m): 1})
            for a in range(d1):
                for e, v in state.bracket_basis(L - 1, a, -2, m).items():
                    _axpy(eq.setdefault(e, {}), -v, {V(a, j): 1})
            rows.extend(r for r in eq.values() if r)

    solutions = sparse_nullspace(rows, n_unknowns)
    value_parts = [{t: x for t, x in enumerate(s[: m1 * d1]) if x} for s in solutions]
    if len(echelon(value_parts)) != len(solutions):
        raise ProlongationError(f"level {L}: prime map is not determined by the value map")
    values, primes = [], []
    for s in solutions:
        values.append([{a: s[V(a, j)] for a in range(d1) if s[V(a, j)]} for j in range(m1)])
        primes.append([{c: s[P(c, m)] for c in range(d2) if s[P(c, m)]} for m in range(m2)])
    state.levels[L] = ProlongedLevel(L, (m1, m2), (d1, d2), values, primes)
    if not solutions:
        state.terminated = True
    return len(solutions)


def _define_mixed(state: ProlongationState):
    """Brackets [X_p, X_q] for p, q >= 0 (not both 0), by increasing p + q."""
    T = state.top
    state.mixed = {}
    m1, m2 = state.m1, state.m2
    for L in range(1, 2 * T + 1):
        for p in range(0, L + 1):
            q = L - p
            if p > T or q > T:
                continue
            for i in range(state.dim(p)):
                for j in range(state.dim(q)):
                    X, Y = _unit(i), _unit(j)
                    value, prime = [], []
                    for neg, count, out in ((-1, m1, value), (-2, m2, prime)):
                        for t in range(count):
                            x = _unit(t)
                            v = state.bracket(p + neg, state.bracket(p, X, neg, x), q, Y)
                            _axpy(v, 1, state.bracket(p, X, q + neg, state.bracket(q, Y, neg, x)))
                            out.append(v)
                    if L <= T:
                        try:
                            coords = state.levels[L].coordinates(value, prime)
                        except NotInSpan:
                            raise MembershipError(
                                f"[X_{p}, X_{q}] for basis ({i}, {j}) is not in level {L}"
                            ) from None
                    else:
                        if any(value) or any(prime):
                            raise MembershipError(f"[X_{p}, X_{q}] is nonzero although level {L} is zero")
                        coords = {}
                    state.mixed[(p, i, q, j)] = coords


def _sub(a: Mapping, b: Mapping) -> dict:
    return _axpy(dict(a), -1, b)


def _check_identities(state: ProlongationState) -> dict[str, bool]:
    T = state.top
    m1, m2 = state.m1, state.m2
    br = state.bracket
    nonneg = [(l, i) for l in range(0, T + 1) for i in range(state.dim(l))]
    res = {}

    ok = True
    for l, e in nonneg:
        X = _unit(e)
        for i, j in itertools.combinations(range(m1), 2):
            xi, xj = _unit(i), _unit(j)
            lhs = _sub(br(l - 1, br(l, X, -1, xi), -1, xj), br(l - 1, br(l, X, -1, xj), -1, xi))
            rhs = br(l, X, -2, br(-1, xi, -1, xj))
            ok &= not _sub(lhs, rhs)
    res["5a"] = ok

    ok = True
    for l, e in nonneg:
        X = _unit(e)
        for m in range(m2):
            for j in range(m1):
                v, x = _unit(m), _unit(j)
                ok &= not _sub(br(l - 2, br(l, X, -2, v), -1, x), br(l - 1, br(l, X, -1, x), -2, v))
    res["5b"] = ok

    ok = True
    for l, e in nonneg:
        X = _unit(e)
        for a, b in itertools.combinations(range(m2), 2):
            va, vb = _unit(a), _unit(b)
            ok &= not _sub(br(l - 2, br(l, X, -2, va), -2, vb), br(l - 2, br(l, X, -2, vb), -2, va))
    res["7"] = ok

    ok8 = {-1: True, -2: True}
    anti = True
    for (p, i), (q, j) in itertools.product(nonneg, repeat=2):
        X, Y = _unit(i), _unit(j)
        XY = br(p, X, q, Y)
        anti &= not _axpy(dict(XY), 1, br(q, Y, p, X))
        for neg, count in ((-1, m1), (-2, m2)):
            for t in range(count):
                x = _unit(t)
                lhs = br(p + q, XY, neg, x)
                rhs = _axpy(br(p + neg, br(p, X, neg, x), q, Y), 1, br(p, X, q + neg, br(q, Y, neg, x)))
                ok8[neg] &= not _sub(lhs, rhs)
    res["8a"], res["8b"] = ok8[-1], ok8[-2]
    res["anti"] = anti

    ok = True
    for (p, i), (q, j), (r, k) in itertools.combinations_with_replacement(nonneg, 3):
        X, Y, Z = _unit(i), _unit(j), _unit(k)
        s = br(p + q, br(p, X, q, Y), r, Z)
        _axpy(s, 1, br(q + r, br(q, Y, r, Z), p, X))
        _axpy(s, 1, br(r + p, br(r, Z, p, X), q, Y))
        ok &= not s
    res["9"] = ok
    return res


def extend_brackets(state: ProlongationState) -> ProlongCertificate:
    """Define all nonnegative brackets and certify the graded identities."""
    if not state.terminated:
        raise ProlongationError("all levels must be constructed before extending brackets")
    _define_mixed(state)
    res = _check_identities(state)
    termination = min((l for l, lev in state.levels.items() if lev.dim == 0), default=None)
    cert = ProlongCertificate(
        dims=state.dims(),
        termination_level=termination,
        identity_5a=res["5a"],
        identity_5b=res["5b"],
        identity_7=res["7"],
        identity_8a=res["8a"],
        identity_8b=res["8b"],
        identity_9=res["9"],
        antisymmetry=res["anti"],
        base_jacobi=jacobi_check(state.base),
    )
    state.certificate = cert
    return cert


def run_to_termination(
    table: GradedAlgebraTable, max_level: int = DEFAULT_MAX_LEVEL
) -> tuple[ProlongationState, ProlongCertificate]:
    if max_level < 1:
        raise ValueError(f"max_level must be at least 1, got {max_level}")
    state = init_state(table)
    for _ in range(max_level):
        if prolong_step(state) == 0:
            break
    else:
        raise ProlongationError(
            f"no zero level up to max_level={max_level}; dims so far {state.dims()}"
        )
    return state, extend_brackets(state)
