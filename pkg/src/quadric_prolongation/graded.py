"""Graded Lie algebras given by structure constants on a level-ordered basis."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Sequence

from .exact import NotInSpan, SpanCoordinates, format_rational


class GradingError(ValueError):
    pass


@dataclass(frozen=True)
class GradedAlgebraTable:
    """Basis-indexed structure constants of a graded Lie algebra.

    The basis is the concatenation of the level bases in increasing level
    order.  ``brackets[(i, j)]`` for ``i < j`` maps basis indices to the
    coefficients of ``[e_i, e_j]``; missing pairs bracket to zero and
    ``[e_j, e_i] = -[e_i, e_j]`` is implied.
    """

    levels: tuple[int, ...]
    dims: Mapping[int, int]
    brackets: Mapping[tuple[int, int], Mapping[int, Fraction]]
    fields: tuple | None = field(default=None, compare=False)
    pack: object = field(default=None, compare=False)
    elements: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        levels = tuple(self.levels)
        if list(levels) != list(range(levels[0], levels[-1] + 1)):
            raise GradingError(f"levels must be consecutive, got {levels}")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "dims", {l: int(self.dims.get(l, 0)) for l in levels})
        offsets, start = {}, 0
        for l in levels:
            offsets[l] = start
            start += self.dims[l]
        object.__setattr__(self, "_offsets", offsets)
        object.__setattr__(self, "_level_of", [l for l in levels for _ in range(self.dims[l])])
        clean = {}
        for (i, j), vec in self.brackets.items():
            if not i < j:
                raise GradingError(f"bracket keys must satisfy i < j, got {(i, j)}")
            vec = {m: Fraction(c) for m, c in vec.items() if c}
            if not vec:
                continue
            target = self.level_of(i) + self.level_of(j)
            for m in vec:
                if self.level_of(m) != target:
                    raise GradingError(
                        f"[e_{i}, e_{j}] has a component on e_{m} outside level {target}"
                    )
            clean[(i, j)] = vec
        object.__setattr__(self, "brackets", clean)

    @property
    def total_dim(self) -> int:
        return len(self._level_of)

    def offset(self, level: int) -> int:
        return self._offsets[level]

    def indices(self, level: int) -> range:
        if level not in self._offsets:
            return range(0)
        o = self._offsets[level]
        return range(o, o + self.dims[level])

    def level_of(self, i: int) -> int:
        return self._level_of[i]

    def dim_tuple(self) -> tuple[int, ...]:
        return tuple(self.dims[l] for l in self.levels)

    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        if i < j:
            return dict(self.brackets.get((i, j), {}))
        if i > j:
            return {m: -c for m, c in self.brackets.get((j, i), {}).items()}
        return {}

    def bracket(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """Bracket of two coordinate vectors (sparse dicts over the basis)."""
        out: dict = {}
        for i, a in x.items():
            if not a:
                continue
            for j, b in y.items():
                if not b or i == j:
                    continue
                for m, c in self.bracket_basis(i, j).items():
                    out[m] = out.get(m, 0) + a * b * c
        return {m: c for m, c in out.items() if c}

    def truncated(self, top: int) -> "GradedAlgebraTable":
        """Subalgebra of levels ``<= top`` (levels[0]..top)."""
        keep = [l for l in self.levels if l <= top]
        n_keep = sum(self.dims[l] for l in keep)
        brackets = {
            (i, j): v for (i, j), v in self.brackets.items() if i < n_keep and j < n_keep
        }
        for key, v in brackets.items():
            if any(m >= n_keep for m in v):
                raise GradingError(f"levels <= {top} are not closed under the bracket")
        fields = self.fields[:n_keep] if self.fields is not None else None
        elements = self.elements[:n_keep] if self.elements is not None else None
        return GradedAlgebraTable(tuple(keep), {l: self.dims[l] for l in keep}, brackets, fields, self.pack, elements)

    def reindexed(self, order: Sequence[int]) -> "GradedAlgebraTable":
        """Same algebra with basis ``new[t] = old[order[t]]``; order must preserve levels."""
        if sorted(order) != list(range(self.total_dim)):
            raise ValueError("order must be a permutation of the basis")
        for t, o in enumerate(order):
            if self.level_of(t) != self.level_of(o):
                raise GradingError("reindexing must keep every basis vector in its level")
        inv = {o: t for t, o in enumerate(order)}
        brackets = {}
        for (i, j), v in self.brackets.items():
            a, b = inv[i], inv[j]
            sign = 1
            if a > b:
                a, b, sign = b, a, -1
            brackets[(a, b)] = {inv[m]: sign * c for m, c in v.items()}
        fields = tuple(self.fields[o] for o in order) if self.fields is not None else None
        elements = tuple(self.elements[o] for o in order) if self.elements is not None else None
        return GradedAlgebraTable(self.levels, self.dims, brackets, fields, self.pack, elements)

    def field_coordinates(self, level: int, X) -> dict[int, Fraction]:
        """Global coordinates of the vector field ``X`` in the basis of ``level``.

        Raises ``NotInSpan`` if X is not a real combination of that level's fields.
        """
        if self.fields is None:
            raise ValueError("table carries no vector-field realization")
        spans = self.__dict__.setdefault("_spans", {})
        if level not in spans:
            spans[level] = SpanCoordinates([self.fields[i].real_vector() for i in self.indices(level)])
        rv = X.real_vector()
        if level not in self._offsets:
            if rv:
                raise NotInSpan(f"level {level} is not part of the algebra")
            return {}
        coords = spans[level].coordinates(rv)
        o = self._offsets[level]
        return {o + t: c for t, c in enumerate(coords) if c}

    def with_constant(self, i: int, j: int, m: int, value) -> "GradedAlgebraTable":
        """Copy with the single constant ``c_{ij}^m`` replaced (i < j)."""
        brackets = {key: dict(v) for key, v in self.brackets.items()}
        brackets.setdefault((i, j), {})[m] = Fraction(value)
        return replace(self, brackets=brackets)

    def constants_json(self) -> list:
        return [
            [i, j, m, format_rational(c)]
            for (i, j) in sorted(self.brackets)
            for m, c in sorted(self.brackets[(i, j)].items())
        ]


def jacobi_violations(table: GradedAlgebraTable, limit: int | None = None) -> list[tuple[int, int, int]]:
    """Basis triples i < j < l at which the Jacobi identity fails."""
    bad = []
    n = table.total_dim
    for i, j, l in itertools.combinations(range(n), 3):
        s: dict = {}
        for a, b, c in ((i, j, l), (j, l, i), (l, i, j)):
            inner = table.bracket_basis(a, b)
            if not inner:
                continue
            for m, v in table.bracket(inner, {c: Fraction(1)}).items():
                s[m] = s.get(m, 0) + v
        if any(s.values()):
            bad.append((i, j, l))
            if limit is not None and len(bad) >= limit:
                break
    return bad


def jacobi_check(table: GradedAlgebraTable) -> bool:
    """True iff the Jacobi identity holds exactly on every basis triple."""
    return not jacobi_violations(table, limit=1)
