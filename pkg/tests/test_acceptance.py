"""End-to-end acceptance checks; each prints one PASS/FAIL line."""

import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from conftest import identity_pack
from oracles import tangent_dims
from quadric_prolongation.cli import main
from quadric_prolongation.exact import GaussianRational, NotInSpan
from quadric_prolongation.fields import PolyVectorField, tangency_check
from quadric_prolongation.forms import HermitianFormPack, builtin_catalog, check_nondegenerate, witness_confirms
from quadric_prolongation.graded import jacobi_check
from quadric_prolongation.quadric import weight3_nullcheck
from quadric_prolongation.theorem import verify_pack

SUITE = builtin_catalog("full-suite")


@pytest.fixture
def verdict(capsys):
    def emit(number, label, ok, detail=""):
        with capsys.disabled():
            status = "PASS" if ok else "FAIL"
            print(f"\n[criterion {number}] {status}: {label}" + (f" ({detail})" if detail else ""))
        assert ok, detail

    return emit


@pytest.fixture(scope="module")
def runs():
    out = {}
    for pack in SUITE:
        t0 = time.perf_counter()
        report, table, state, phi = verify_pack(pack)
        out[pack.name] = (report, table, state, phi, time.perf_counter() - t0)
    return out


def test_criterion_1_theorem_certification(runs, verdict):
    names = {p.name for p in SUITE}
    required = {"heisenberg-n1", "heisenberg-n2", "heisenberg-n3", "hyperquadric-(+,+)",
                "hyperquadric-(+,-)", "hyperquadric-(+,+,+)", "diagonal-n2-k2", "diagonal-n2-k3"}
    failures = []
    for name, (report, table, state, _, secs) in runs.items():
        ok = (
            report.passed
            and table.dims.get(1, 0) == state.dim(1)
            and table.dims.get(2, 0) == state.dim(2)
            and state.dim(3) == 0
            and report.injective
            and report.homomorphism
            and secs < 10
        )
        if not ok:
            failures.append(f"{name}: passed={report.passed} secs={secs:.2f}")
    total = sum(r[4] for r in runs.values())
    ok = required <= names and len(SUITE) >= 7 and not failures and total < 120
    verdict(1, f"theorem certified on {len(SUITE)} packs in {total:.1f}s", ok, "; ".join(failures))


def test_criterion_2_dimension_law(verdict):
    from quadric_prolongation.quadric import assemble_table

    bad = []
    for n in (1, 2, 3):
        expected = (1, 2 * n, n * n + 1, 2 * n, 1)
        table = assemble_table(identity_pack(n))
        mats = [[[1 if i == j else 0 for j in range(n)] for i in range(n)]]
        golden = tangent_dims(mats, levels=(-2, -1, 0, 1, 2))
        if table.dim_tuple() != expected or golden != expected or table.total_dim != (n + 2) ** 2 - 1:
            bad.append(f"n={n}: solver {table.dim_tuple()} oracle {golden}")
    verdict(2, "identity-form dims (1, 2n, n^2+1, 2n, 1), totals 8/15/24", not bad, "; ".join(bad))


def test_criterion_3_jacobi_audits(runs, verdict):
    bad = []
    for name, (_, table, state, _, _) in runs.items():
        cert = state.certificate
        flags = cert.to_dict()["identities"]
        if not jacobi_check(table) or not all(flags.values()):
            bad.append(f"{name}: {flags}")
    verdict(3, "Jacobi and prolongation identities exact on every table", not bad, "; ".join(bad))


def _random_field(rng, table, level):
    pack = table.pack
    n, k = pack.n, pack.k
    terms = {}
    for target in range(n + k):
        shift = 1 if target < n else 2
        weight = level + shift
        if weight < 0:
            continue
        for total_w in range(weight // 2 + 1):
            zdeg = weight - 2 * total_w
            for alpha in _exponents(n, zdeg):
                for beta in _exponents(k, total_w):
                    c = GaussianRational(Fraction(rng.randint(-4, 4)), Fraction(rng.randint(-4, 4)))
                    if c:
                        terms[(alpha, beta, target)] = c
    return PolyVectorField.from_terms(n, k, terms)


def _exponents(nvars, degree):
    if nvars == 0:
        return [()] if degree == 0 else []
    if nvars == 1:
        return [(degree,)]
    return [(d,) + rest for d in range(degree + 1) for rest in _exponents(nvars - 1, degree - d)]


def test_criterion_4_tangency_oracle(runs, verdict):
    members_ok = all(
        tangency_check(f, table.pack) for _, table, _, _, _ in runs.values() for f in table.fields
    )
    rng = random.Random(20240601)
    names = sorted(runs)
    rejected, accepted_wrongly = 0, []
    while rejected < 100:
        table = runs[rng.choice(names)][1]
        level = rng.choice(table.levels)
        X = _random_field(rng, table, level)
        try:
            table.field_coordinates(level, X)
            continue  # a genuine member, not a rejected field
        except NotInSpan:
            pass
        rejected += 1
        if tangency_check(X, table.pack):
            accepted_wrongly.append(f"{table.pack.name} level {level}")
    ok = members_ok and not accepted_wrongly
    verdict(4, f"basis fields tangent; {rejected} random non-members rejected", ok, "; ".join(accepted_wrongly))


def test_criterion_5_weight3_null(verdict):
    bad = [p.name for p in SUITE if not weight3_nullcheck(p)]
    verdict(5, "weight-3 system has only the zero solution on every pack", not bad, ", ".join(bad))


def test_criterion_6_degenerate_inputs(tmp_path, verdict):
    from quadric_prolongation.forms import serialize_form_pack

    degenerate = [
        HermitianFormPack.from_matrices([[[1, 0], [0, 0]]]),
        HermitianFormPack.from_matrices([[[1, 0], [0, 0]], [[2, 0], [0, 0]]]),
        HermitianFormPack.from_matrices([[[1, 0], [0, 1]], [[-3, 0], [0, -3]]]),
        HermitianFormPack.from_matrices([[[0, 0, 0], [0, 1, 0], [0, 0, -1]]]),
    ]
    bad = []
    for i, pack in enumerate(degenerate):
        v = check_nondegenerate(pack)
        path = tmp_path / f"d{i}.json"
        path.write_text(serialize_form_pack(pack))
        code = main(["solve", "--form", str(path), "--out", str(tmp_path / f"r{i}.json")])
        if v.nondegenerate or not witness_confirms(pack, v) or code == 0:
            bad.append(f"pack {i}: verdict={v.describe()} exit={code}")
    verdict(6, "degenerate packs rejected with confirmed witnesses, solve exits nonzero", not bad, "; ".join(bad))


def test_criterion_7_determinism(tmp_path, verdict):
    outs = []
    for tag in ("a", "b"):
        out = tmp_path / f"catalog-{tag}.json"
        proc = subprocess.run(
            [sys.executable, "-m", "quadric_prolongation", "catalog", "--suite", "full-suite", "--out", str(out)],
            capture_output=True,
        )
        outs.append((proc.returncode, out.read_bytes()))
    ok = outs[0][0] == outs[1][0] == 0 and outs[0][1] == outs[1][1]
    verdict(7, "two catalog runs are byte-identical", ok, f"exit codes {outs[0][0]}, {outs[1][0]}")
