"""Command-line front end.

    quadric-prolong solve   --form pack.json [--out report.json]
    quadric-prolong prolong --form pack.json [--max-level N] [--out report.json]
    quadric-prolong verify  --form pack.json [--max-level N] [--out report.json]
    quadric-prolong catalog --suite full-suite [--out report.json] [--include-constants]

Reports are canonical JSON (sorted keys, rationals as "p/q" strings).  The
exit code is 0 iff every verdict in the report passes, 1 if any verdict
fails, and 2 for unusable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .fields import tangency_check
from .forms import FormError, HermitianFormPack, UnknownCatalogError, builtin_catalog, check_nondegenerate, parse_form_pack
from .graded import jacobi_check
from .prolongation import DEFAULT_MAX_LEVEL, ProlongationError, run_to_termination
from .quadric import assemble_table, weight3_nullcheck
from .theorem import verify_pack

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

COMMANDS = ("solve", "prolong", "verify", "catalog")


class ReportWriteError(OSError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    form_path: str | None = None
    suite: str | None = None
    max_level: int = DEFAULT_MAX_LEVEL
    out_path: str | None = None
    include_constants: bool = False
    jobs: int = 1

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.command == "catalog" and not self.suite:
            raise ValueError("catalog requires a suite name")
        if self.command != "catalog" and not self.form_path:
            raise ValueError(f"{self.command} requires a form path")
        if self.max_level < 1:
            raise ValueError(f"max_level must be at least 1, got {self.max_level}")


def _pack_header(pack: HermitianFormPack) -> dict:
    return {"name": pack.label(), "form": pack.to_dict()}


def solve_report(pack: HermitianFormPack) -> dict:
    verdict = check_nondegenerate(pack)
    report = {"command": "solve", "pack": _pack_header(pack), "nondegeneracy": verdict.to_dict()}
    if not verdict.nondegenerate:
        report.update(error=f"degenerate form: {verdict.describe()}", passed=False)
        return report
    table = assemble_table(pack)
    verdicts = {
        "jacobi": jacobi_check(table),
        "tangency": all(tangency_check(f, pack) for f in table.fields),
        "weight3_null": weight3_nullcheck(pack),
    }
    report.update(
        levels=list(table.levels),
        dims=list(table.dim_tuple()),
        total_dim=table.total_dim,
        basis=[f.to_json() for f in table.fields],
        structure_constants=table.constants_json(),
        verdicts=verdicts,
        passed=all(verdicts.values()),
    )
    return report


def prolong_report(pack: HermitianFormPack, max_level: int = DEFAULT_MAX_LEVEL) -> dict:
    verdict = check_nondegenerate(pack)
    report = {"command": "prolong", "pack": _pack_header(pack), "nondegeneracy": verdict.to_dict()}
    if not verdict.nondegenerate:
        report.update(error=f"degenerate form: {verdict.describe()}", passed=False)
        return report
    table = assemble_table(pack)
    try:
        _, cert = run_to_termination(table, max_level)
    except ProlongationError as exc:
        report.update(error=str(exc), passed=False)
        return report
    report.update(certificate=cert.to_dict(), passed=cert.all_pass)
    return report


def verify_report(pack: HermitianFormPack, max_level: int = DEFAULT_MAX_LEVEL, include_constants: bool = True) -> dict:
    verdict = check_nondegenerate(pack)
    report = {"command": "verify", "pack": _pack_header(pack), "nondegeneracy": verdict.to_dict()}
    if not verdict.nondegenerate:
        report.update(error=f"degenerate form: {verdict.describe()}", passed=False)
        return report
    try:
        rep, table, state, _ = verify_pack(pack, max_level)
    except ProlongationError as exc:
        report.update(error=str(exc), passed=False)
        return report
    report.update(verification=rep.to_dict(), certificate=state.certificate.to_dict(), passed=rep.passed)
    if include_constants:
        report["structure_constants"] = table.constants_json()
    return report


def _catalog_entry(args):
    pack, max_level, include_constants = args
    return verify_report(pack, max_level, include_constants)


def catalog_report(suite: str, max_level: int = DEFAULT_MAX_LEVEL, include_constants: bool = False, jobs: int = 1) -> dict:
    packs = builtin_catalog(suite)
    work = [(p, max_level, include_constants) for p in packs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(_catalog_entry, work))
    else:
        entries = [_catalog_entry(w) for w in work]
    return {
        "command": "catalog",
        "suite": suite,
        "reports": entries,
        "passed": all(e["passed"] for e in entries),
    }


def _load_pack(path: str) -> HermitianFormPack:
    p = Path(path)
    try:
        text = p.read_text()
    except FileNotFoundError:
        raise FileNotFoundError(f"form file not found: {path}") from None
    return parse_form_pack(text, name=p.stem)


def run_command(config: RunConfig) -> tuple[int, dict]:
    try:
        if config.command == "catalog":
            report = catalog_report(config.suite, config.max_level, config.include_constants, config.jobs)
        else:
            pack = _load_pack(config.form_path)
            if config.command == "solve":
                report = solve_report(pack)
            elif config.command == "prolong":
                report = prolong_report(pack, config.max_level)
            else:
                report = verify_report(pack, config.max_level)
    except (FileNotFoundError, FormError, UnknownCatalogError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        return EXIT_INPUT, {"command": config.command, "error": msg, "passed": False}
    return (EXIT_OK if report["passed"] else EXIT_FAIL), report


def canonical_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def write_report(report: dict, out_path: str | None) -> None:
    text = canonical_json(report)
    if out_path is None:
        sys.stdout.write(text)
        return
    try:
        Path(out_path).write_text(text)
    except OSError as exc:
        raise ReportWriteError(f"cannot write report to {out_path}: {exc.strerror or exc}") from None


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="quadric-prolong",
        description="Compare the automorphism algebra of a CR quadric with its Tanaka prolongation.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("solve", "solve the direct constraint systems"),
        ("prolong", "run the Tanaka prolongation"),
        ("verify", "build both algebras and check the canonical isomorphism"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--form", required=True, help="form pack JSON file")
        if name != "solve":
            p.add_argument("--max-level", type=int, default=DEFAULT_MAX_LEVEL)
        p.add_argument("--out", help="write the report here instead of stdout")
    p = sub.add_parser("catalog", help="verify every pack of a builtin catalog")
    p.add_argument("--suite", required=True, help="heisenberg | hyperquadric | diagonal-codim2 | full-suite")
    p.add_argument("--max-level", type=int, default=DEFAULT_MAX_LEVEL)
    p.add_argument("--out")
    p.add_argument("--include-constants", action="store_true", help="embed structure constants per pack")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    return ap


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(
        command=args.command,
        form_path=getattr(args, "form", None),
        suite=getattr(args, "suite", None),
        max_level=getattr(args, "max_level", DEFAULT_MAX_LEVEL),
        out_path=args.out,
        include_constants=getattr(args, "include_constants", False),
        jobs=getattr(args, "jobs", 1),
        )
    except ValueError as exc:
        parser.error(str(exc))
    code, report = run_command(config)
    try:
        write_report(report, config.out_path)
    except ReportWriteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if "error" in report:
        print(f"error: {report['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
