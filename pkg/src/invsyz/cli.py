"""Command-line front end.

    invsyz COMMAND FILE [options]
    invsyz check REPORT.json
    invsyz bench [CORPUS_DIR] [options]

Exit codes: 0 success, 2 input error, 3 iteration cap exceeded,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .division import DivisionKind
from .groebner import buchberger, ideal_equal, schreyer_syzygies
from .invbasis import CompletionCapExceeded, DegenerateInput, gerdt_classic, inv_basis
from .parser import ParseError, PolySystem, parse_polynomial, parse_system, read_system, ring
from .polyring import QQ, ModuleElement, OrderSpec, Polynomial
from .quasistable import LinearChange, NotHomogeneous, QuasiStableCapExceeded, quasi_stable, test_pommaret
from .siginv import st_inv_basis, strong_basis_check
from . import verify as V

EXIT_OK, EXIT_PARSE, EXIT_CAP, EXIT_VERIFY = 0, 2, 3, 4

COMMANDS = ("groebner", "invbasis", "gerdt", "syzygy", "quasistable", "stinvbasis", "dim", "check")
STAT_KEYS = ("c1", "c2", "SC", "HD", "cover", "syz", "redz", "lin", "deg", "dim", "queue_peak", "wall_time")

# corpus entries whose definitions are not bundled
ABSENT_SYSTEMS = ("vermeer", "haas3", "sturmfels-eisenbud")


class VerificationFailed(RuntimeError):
    pass


# ---------- normalization ----------

def normalize(basis: Sequence[Polynomial], syzygies: Sequence[ModuleElement] = ()):
    """Monic basis sorted by decreasing leading monomial; syzygies rewritten to match."""
    key = basis[0].order.key if basis else None
    perm = sorted(range(len(basis)), key=lambda i: key(basis[i].lm), reverse=True)
    pos = {old: new for new, old in enumerate(perm)}
    out_basis = [basis[i].monic() for i in perm]
    out_syz = []
    for s in syzygies:
        coords = {pos[i]: p * Polynomial.constant(p.order, basis[i].lc) for i, p in s.coords.items()}
        out_syz.append(ModuleElement(s.order, coords))
    return out_basis, out_syz


def syzygy_to_json(s: ModuleElement, size: int) -> List[str]:
    return [str(s[i]) for i in range(size)]


def syzygy_from_json(items: Sequence[str], order: OrderSpec) -> ModuleElement:
    return ModuleElement(order, {i: parse_polynomial(t, order) for i, t in enumerate(items)})


def _stats(**kw) -> Dict[str, object]:
    out = {k: None for k in STAT_KEYS}
    out.update(kw)
    return out


# ---------- commands ----------

def run(command: str, system: PolySystem, *, division: str = "janet", seed: int = 1,
        max_iter: Optional[int] = None, verify: bool = False, timing: bool = True) -> Dict:
    """Execute one command and return a JSON-ready report."""
    if command not in COMMANDS or command == "check":
        raise ValueError(f"unknown command {command!r}")
    kind = DivisionKind.parse(division)
    F = system.polys
    order = system.order
    n = order.n
    report: Dict[str, object] = {
        "command": command, "system": system.name, "seed": seed, "division": kind.value,
        "order": order.kind, "vars": list(order.names), "input": [str(f) for f in F],
    }
    t0 = time.perf_counter()
    syz: List[ModuleElement] = []
    change = None
    if command == "groebner":
        basis = buchberger(F, reduced=True).basis
        stats = _stats(deg=max(b.degree() for b in basis))
    elif command in ("invbasis", "syzygy"):
        res = inv_basis(F, kind, max_iter=max_iter)
        basis, syz = normalize(res.basis, res.syzygies)
        stats = _stats(c1=res.stats["c1"], redz=res.stats["redz"], deg=res.stats["max_deg"],
                       queue_peak=res.stats["queue_peak"])
    elif command == "gerdt":
        res = gerdt_classic(F, kind, max_iter=max_iter)
        basis, _ = normalize(res.basis)
        stats = _stats(c1=res.stats["c1"], c2=res.stats["c2"], redz=res.stats["redz"],
                       deg=res.stats["max_deg"], queue_peak=res.stats["queue_peak"])
    elif command == "quasistable":
        res = quasi_stable(F, order, seed, max_iter=max_iter)
        basis, _ = normalize(res.basis)
        change = res.change
        stats = _stats(c1=res.stats["c1"], syz=res.stats["syz"], redz=res.stats["redz"],
                       lin=res.stats["lin"], deg=res.stats["max_deg"], dim=res.stats["dim"])
        report["change"] = json.loads(change.to_json())
        report["change_text"] = change.describe(order.names)
    elif command == "stinvbasis":
        res = st_inv_basis(F, kind, max_iter=max_iter)
        basis, _ = normalize(res.basis)
        stats = _stats(cover=res.stats["cover"], redz=res.stats["redz"], deg=res.stats["max_deg"],
                       queue_peak=res.stats["queue_peak"])
        if verify:
            problems = strong_basis_check(res.pairs, kind, order, res.mord, res.syz_lms)
            if problems:
                raise VerificationFailed("; ".join(problems))
    else:  # dim
        res = gerdt_classic(F, DivisionKind.JANET, max_iter=max_iter)
        basis, _ = normalize(res.basis)
        stats = _stats(dim=V.dimension([b.lm for b in basis], n), deg=res.stats["max_deg"])
    if command == "dim" and stats["dim"] is None:
        stats["dim"] = V.dimension([b.lm for b in basis], n)
    stats["wall_time"] = round(time.perf_counter() - t0, 3) if timing else None
    report["basis"] = [str(b) for b in basis]
    if command in ("invbasis", "syzygy"):
        report["syzygies"] = [syzygy_to_json(s, len(basis)) for s in syz]
    report["stats"] = stats
    if verify:
        problems = check_report(report)
        if problems:
            raise VerificationFailed("; ".join(problems))
    return report


def _report_system(report: Dict) -> Tuple[OrderSpec, List[Polynomial], List[Polynomial]]:
    order = ring(report["vars"], report["order"])
    F = [parse_polynomial(t, order) for t in report["input"]]
    basis = [parse_polynomial(t, order) for t in report["basis"]]
    return order, F, basis


def check_report(report: Dict) -> List[str]:
    """Re-verify a saved report against independent oracles."""
    order, F, basis = _report_system(report)
    command = report["command"]
    kind = DivisionKind.parse(report.get("division", "janet"))
    problems: List[str] = []
    if command == "quasistable":
        change = LinearChange.from_json(json.dumps(report["change"]))
        if change.determinant() == 0:
            problems.append("coordinate change is singular")
        target = [change.apply(f) for f in F]
        problems += V.lm_ideal_failures(basis, target)
        verdict = test_pommaret([b.lm for b in basis], order)
        if not verdict.passed:
            problems.append("final basis fails the Pommaret test")
        problems += V.involutive_basis_failures(basis, DivisionKind.POMMARET)
        gb = buchberger(F, reduced=True).basis
        if V.dimension([g.lm for g in gb], order.n) != report["stats"]["dim"]:
            problems.append("dimension changed under the coordinate change")
        if V.dimension([b.lm for b in basis], order.n) != report["stats"]["dim"]:
            problems.append("reported dimension does not match the basis")
        return problems
    if command == "groebner":
        gb = buchberger(F, reduced=True).basis
        if [str(g) for g in gb] != [str(b) for b in basis]:
            problems.append("basis differs from the reduced Groebner basis")
        return problems
    problems += V.lm_ideal_failures(basis, F)
    if command in ("invbasis", "syzygy", "gerdt"):
        problems += V.involutive_basis_failures(basis, kind)
    if command in ("invbasis", "syzygy"):
        syz = [syzygy_from_json(s, order) for s in report.get("syzygies", [])]
        problems += V.syzygy_failures(syz, basis)
    if command == "dim":
        if V.dimension([b.lm for b in basis], order.n) != report["stats"]["dim"]:
            problems.append("reported dimension does not match the basis")
    return problems


# ---------- output ----------

def format_table(report: Dict) -> str:
    lines = [f"{report['command']} on {report['system'] or '<input>'} "
             f"({report['division']}, {report['order']}, vars {', '.join(report['vars'])})"]
    if "change_text" in report:
        lines.append("change: " + ("; ".join(report["change_text"]) or "identity"))
    lines.append(f"basis ({len(report['basis'])}):")
    lines += [f"  {i + 1:>3}  {b}" for i, b in enumerate(report["basis"])]
    if "syzygies" in report:
        lines.append(f"syzygies ({len(report['syzygies'])}):")
        for s in report["syzygies"]:
            parts = [f"({c})*e{i + 1}" for i, c in enumerate(s) if c != "0"]
            lines.append("  " + " + ".join(parts))
    stats = report["stats"]
    lines.append("stats: " + "  ".join(f"{k}={'-' if v is None else v}" for k, v in stats.items()))
    return "\n".join(lines)


# ---------- bench ----------

def corpus_dir() -> Path:
    return Path(str(resources.files("invsyz") / "corpus"))


def bench(directory: Optional[Path] = None, algorithms: Sequence[str] = ("quasistable",),
          systems: Optional[Sequence[str]] = None, *, seed: int = 1, division: str = "janet",
          max_iter: Optional[int] = None, verify: bool = False, timing: bool = False) -> Dict:
    directory = Path(directory) if directory else corpus_dir()
    names = list(systems) if systems else sorted(
        [p.stem for p in directory.glob("*.sys")] + list(ABSENT_SYSTEMS))
    reports, skipped, rows = [], [], []
    for name in names:
        path = directory / f"{name}.sys"
        if not path.exists():
            warnings.warn(f"corpus file for {name} is missing; skipped")
            skipped.append(name)
            continue
        system = read_system(path)
        for alg in algorithms:
            rep = run(alg, system, division=division, seed=seed, max_iter=max_iter,
                      verify=verify, timing=timing)
            rep["expected"] = system.meta
            reports.append(rep)
            st = rep["stats"]
            rows.append([name, alg] + ["-" if st[k] is None else str(st[k]) for k in STAT_KEYS]
                        + [system.meta.get("dim", "-"), system.meta.get("deg", "-")])
    header = ["system", "algorithm"] + list(STAT_KEYS) + ["dim*", "deg*"]
    widths = [max(len(r[i]) for r in rows + [header]) for i in range(len(header))]
    table = [" | ".join(c.ljust(w) for c, w in zip(r, widths)) for r in [header] + rows]
    return {"seed": seed, "algorithms": list(algorithms), "reports": reports,
            "skipped": skipped, "table": table}


# ---------- entry point ----------

def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="invsyz", description="Involutive bases, syzygies and quasi-stable position.")
    ap.add_argument("command", choices=COMMANDS + ("bench",))
    ap.add_argument("path", nargs="?", help="system file, saved report (check) or corpus directory (bench)")
    ap.add_argument("--division", default="janet", choices=("janet", "pommaret"))
    ap.add_argument("--order", default=None, choices=("lex", "deglex", "degrevlex"),
                    help="override the ordering declared in the file")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--format", default="table", choices=("table", "json"))
    ap.add_argument("--max-iter", type=int, default=None)
    ap.add_argument("--verify", action="store_true", help="cross-check results against independent oracles")
    ap.add_argument("--algorithms", default="quasistable", help="bench: comma-separated commands")
    ap.add_argument("--systems", default=None, help="bench: comma-separated system names")
    ap.add_argument("--timing", action="store_true", help="bench: include wall times")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "bench":
            algs = [a.strip() for a in args.algorithms.split(",") if a.strip()]
            for a in algs:
                if a not in COMMANDS or a == "check":
                    print(f"error: unknown algorithm {a!r}", file=sys.stderr)
                    return EXIT_PARSE
            systems = args.systems.split(",") if args.systems else None
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                out = bench(args.path, algs, systems, seed=args.seed, division=args.division,
                            max_iter=args.max_iter, verify=args.verify, timing=args.timing)
            for w in caught:
                print(f"warning: {w.message}", file=sys.stderr)
            if args.format == "json":
                print(json.dumps(out, indent=2, sort_keys=True))
            else:
                print("\n".join(out["table"]))
            return EXIT_OK
        if not args.path:
            print("error: a file argument is required", file=sys.stderr)
            return EXIT_PARSE
        if args.command == "check":
            data = json.loads(Path(args.path).read_text(encoding="utf-8"))
            reports = data["reports"] if "reports" in data else [data]
            failed = False
            for rep in reports:
                problems = check_report(rep)
                status = "ok" if not problems else "FAILED: " + "; ".join(problems)
                print(f"{rep['command']} {rep.get('system', '')}: {status}")
                failed |= bool(problems)
            return EXIT_VERIFY if failed else EXIT_OK
        system = read_system(args.path, args.order)
        report = run(args.command, system, division=args.division, seed=args.seed,
                     max_iter=args.max_iter, verify=args.verify)
        print(json.dumps(report, indent=2, sort_keys=True) if args.format == "json" else format_table(report))
        return EXIT_OK
    except (ParseError, DegenerateInput, NotHomogeneous, OSError, json.JSONDecodeError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (CompletionCapExceeded, QuasiStableCapExceeded) as e:
        print(f"non-termination: {e}", file=sys.stderr)
        return EXIT_CAP
    except VerificationFailed as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
