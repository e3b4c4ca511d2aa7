"""The canonical map from the quadric algebra into its Tanaka prolongation.

On levels -2..0 the map is the identity.  A level-1 field X goes to the
map pair ``(x -> [X, x], v -> [X, v])``; a level-2 field X goes to
``(x -> Phi([X, x]), v -> [X, v])``.  All brackets are computed on the
vector fields themselves and then expressed in the relevant bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import NotInSpan, echelon
from .fields import bracket, tangency_check
from .forms import HermitianFormPack
from .graded import GradedAlgebraTable, jacobi_check
from .prolongation import DEFAULT_MAX_LEVEL, ProlongationError, ProlongationState, run_to_termination
from .quadric import assemble_table, weight3_nullcheck


class PhiImageError(RuntimeError):
    """The image of a basis field is not in the constructed prolongation level."""


@dataclass
class PhiMap:
    """Per-level matrices of the canonical map.

    ``blocks[l][i]`` is the image of the i-th level-l basis field, as sparse
    coordinates in the prolongation's level-l basis.  Levels whose target
    was never constructed are listed in ``missing``.
    """

    blocks: dict[int, list[dict]]
    missing: tuple[int, ...] = ()

    def apply(self, table: GradedAlgebraTable, x: dict) -> tuple[int | None, dict]:
        """Image of a homogeneous coordinate vector (global table indices)."""
        if not x:
            return None, {}
        levels = {table.level_of(i) for i in x}
        if len(levels) != 1:
            raise ValueError("vector is not homogeneous")
        (level,) = levels
        o = table.offset(level)
        out: dict = {}
        for i, c in x.items():
            for t, v in self.blocks[level][i - o].items():
                out[t] = out.get(t, 0) + c * v
        return level, {t: v for t, v in out.items() if v}


def _local(table: GradedAlgebraTable, level: int, coords: dict) -> dict:
    o = table.offset(level)
    return {i - o: c for i, c in coords.items()}


def build_phi(table: GradedAlgebraTable, state: ProlongationState) -> PhiMap:
    if table.fields is None:
        raise ValueError("the direct table must carry vector fields")
    if state.pack is not None and table.pack is not None and state.pack != table.pack:
        raise ValueError("table and prolongation come from different form packs")
    blocks: dict[int, list[dict]] = {}
    for l in (-2, -1, 0):
        blocks[l] = [{i: Fraction(1)} for i in range(table.dims[l])]
    neg1 = [table.fields[i] for i in table.indices(-1)]
    neg2 = [table.fields[i] for i in table.indices(-2)]
    missing = []
    for level in (1, 2):
        if level not in table.levels:
            continue
        if level not in state.levels and not state.terminated:
            missing.append(level)
            continue
        images = []
        for i in table.indices(level):
            X = table.fields[i]
            value = []
            for x in neg1:
                c = _local(table, level - 1, table.field_coordinates(level - 1, bracket(X, x)))
                if level - 1 >= 1:
                    c = _apply_block(blocks[level - 1], c)
                value.append(c)
            prime = [_local(table, level - 2, table.field_coordinates(level - 2, bracket(X, v))) for v in neg2]
            if level in state.levels and state.levels[level].dim:
                try:
                    images.append(state.levels[level].coordinates(value, prime))
                except NotInSpan:
                    raise PhiImageError(f"image of level-{level} basis field {i} is not in the prolongation") from None
            elif any(value) or any(prime):
                raise PhiImageError(f"level-{level} field {i} has a nonzero image but the prolongation level is zero")
            else:
                images.append({})
        blocks[level] = images
    return PhiMap(blocks, tuple(missing))


def _apply_block(block: list[dict], coords: dict) -> dict:
    out: dict = {}
    for i, c in coords.items():
        for t, v in block[i].items():
            out[t] = out.get(t, 0) + c * v
    return {t: v for t, v in out.items() if v}


@dataclass
class VerificationReport:
    levels: tuple[int, ...]
    direct_dims: dict[int, int]
    prolonged_dims: dict[int, int]
    injective: bool
    surjective: bool
    homomorphism: bool
    direct_jacobi: bool
    prolongation_identities: bool
    weight3_null: bool
    tangency: bool
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(
            (
                self.injective,
                self.surjective,
                self.homomorphism,
                self.direct_jacobi,
                self.prolongation_identities,
                self.weight3_null,
                self.tangency,
            )
        )

    def to_dict(self) -> dict:
        return {
            "levels": list(self.levels),
            "direct_dims": [self.direct_dims.get(l, 0) for l in self.levels],
            "prolonged_dims": [self.prolonged_dims.get(l) for l in self.levels],
            "verdicts": {
                "injective": self.injective,
                "surjective": self.surjective,
                "homomorphism": self.homomorphism,
                "direct_jacobi": self.direct_jacobi,
                "prolongation_identities": self.prolongation_identities,
                "weight3_null": self.weight3_null,
                "tangency": self.tangency,
            },
            "notes": list(self.notes),
            "passed": self.passed,
        }


def _prolonged_dims(state: ProlongationState, levels) -> dict[int, int | None]:
    out = {}
    for l in levels:
        try:
            out[l] = state.dim(l)
        except ProlongationError:
            out[l] = None
    return out


def verify_isomorphism(phi: PhiMap, table: GradedAlgebraTable, state: ProlongationState) -> VerificationReport:
    notes = []
    levels = (-2, -1, 0, 1, 2, 3)
    direct = {l: table.dims.get(l, 0) for l in levels}
    prolonged = _prolonged_dims(state, levels)

    # injectivity: the block-diagonal matrix has full column rank
    injective = not phi.missing
    if injective:
        cols = [{(l, t): v for t, v in col.items()} for l in table.levels for col in phi.blocks[l]]
        injective = len(echelon(cols)) == table.total_dim
    else:
        notes.append(f"prolongation levels {list(phi.missing)} were not constructed")

    surjective = state.terminated and all(prolonged[p] == direct[p] for p in (-2, -1, 0, 1, 2)) and prolonged[3] == 0
    if not surjective:
        notes.append("prolongation dimensions do not match, or the tower was not run to termination")

    homomorphism = not phi.missing and state.certificate is not None
    if homomorphism:
        for i in range(table.total_dim):
            for j in range(i + 1, table.total_dim):
                li, lj = table.level_of(i), table.level_of(j)
                _, lhs = phi.apply(table, table.bracket_basis(i, j))
                rhs = state.bracket(li, phi.blocks[li][i - table.offset(li)], lj, phi.blocks[lj][j - table.offset(lj)])
                if lhs != rhs:
                    homomorphism = False
                    notes.append(f"bracket of basis pair ({i}, {j}) is not preserved")
                    break
            if not homomorphism:
                break
    elif state.certificate is None:
        notes.append("prolongation brackets were not extended; homomorphism not checked")

    cert_ok = state.certificate is not None and state.certificate.all_pass
    pack = table.pack
    w3 = weight3_nullcheck(pack) if pack is not None else False
    tangency = pack is not None and all(tangency_check(f, pack) for f in table.fields)
    return VerificationReport(
        levels=levels,
        direct_dims=direct,
        prolonged_dims=prolonged,
        injective=injective,
        surjective=surjective,
        homomorphism=homomorphism,
        direct_jacobi=jacobi_check(table),
        prolongation_identities=cert_ok,
        weight3_null=w3,
        tangency=tangency,
        notes=notes,
    )


def verify_pack(pack: HermitianFormPack, max_level: int = DEFAULT_MAX_LEVEL):
    """Run both constructions on ``pack`` and compare them."""
    table = assemble_table(pack)
    state, _ = run_to_termination(table, max_level)
    phi = build_phi(table, state)
    return verify_isomorphism(phi, table, state), table, state, phi
