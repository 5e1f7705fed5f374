"""Command-line front end.

    fermipart table --E 30
    fermipart dist --E-list 10,1000 --out dist.csv
    fermipart cumulants --E-list 1000,4500 --jobs 2
    fermipart cumulants --b 0.01
    fermipart verify
    fermipart figure1 --out fig1.csv
    fermipart figure2 --grid 200:4500:100 --out fig2.csv

Exit codes: 0 success, 1 verification failure, 2 invalid arguments, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal, localcontext
from typing import Iterable, Optional

from mpmath import mp, mpf

from ._precision import DEFAULT_DPS, precision, workdps
from .canonical import (
    asymptotic_canonical_cumulant,
    bosonic_cumulant,
    canonical_cumulant,
    check_fermion_boson_identity,
)
from .distribution import canonical_distribution, exact_cumulants, micro_distribution
from .partitions import build_table
from .saddle import asymptotic_cumulants, gamma_asymptotic, log_upsilon_gaussian, mc_cumulants_saddle
from .verify import format_report, run_checks

EXIT_OK, EXIT_VERIFY, EXIT_ARGS, EXIT_IO = 0, 1, 2, 3

FIGURE1_E = (1000, 2000, 3000, 4500)
SADDLE_MIN_E = 100


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# formatting
# --------------------------------------------------------------------------


def probability_str(count: int, total: int) -> str:
    """``count / total`` rounded to 17 significant digits."""
    with localcontext() as ctx:
        ctx.prec = 17
        return str(Decimal(count) / Decimal(total))


def _num(x) -> Optional[float]:
    return None if x is None else float(x)


def _rel(a, b) -> Optional[float]:
    if a is None or b is None or b == 0:
        return None
    return float(abs(mpf(a) - mpf(b)) / abs(mpf(b)))


def write_csv(header: list[str], rows: Iterable[list], out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


def write_json(records: list[dict], out) -> None:
    json.dump(records, out, indent=1)
    out.write("\n")


def _flatten(record: dict, prefix: str = "") -> dict:
    flat = {}
    for key, val in record.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            flat.update(_flatten(val, name + "."))
        else:
            flat[name] = val
    return flat


def emit(records: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        write_json(records, out)
        return
    flat = [_flatten(r) for r in records]
    header = list(flat[0]) if flat else []
    write_csv(header, ([r.get(h) for h in header] for r in flat), out)


# --------------------------------------------------------------------------
# argument helpers
# --------------------------------------------------------------------------


def parse_e_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--E-list must be comma-separated integers, got {text!r}")
    if not values or min(values) < 1:
        raise UsageError("--E-list needs integers >= 1")
    return values


def parse_grid(text: str) -> list[int]:
    try:
        start, stop, step = (int(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"--grid must be start:stop:step, got {text!r}")
    if start < 1 or step < 1 or stop < start:
        raise UsageError(f"invalid grid {text!r}")
    return list(range(start, stop + 1, step))


def energies(args, default: Optional[Iterable[int]] = None) -> list[int]:
    if args.E is not None and args.E_list is not None:
        raise UsageError("give either --E or --E-list, not both")
    if args.E is not None:
        if args.E < 1:
            raise UsageError("--E must be >= 1")
        return [args.E]
    if args.E_list is not None:
        return parse_e_list(args.E_list)
    if default is not None:
        return list(default)
    raise UsageError(f"{args.command} needs --E or --E-list")


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_table(args, out) -> int:
    n = max(energies(args))
    table = build_table(n)
    rows = []
    for E in range(1, n + 1):
        dist = micro_distribution(table, E)
        rows.extend({"E": E, "M": M, "count": str(c)} for M, c in enumerate(dist.counts) if M >= 1)
    if args.format == "json":
        write_json(rows, out)
    else:
        write_csv(["E", "M", "count"], ([r["E"], r["M"], r["count"]] for r in rows), out)
    return EXIT_OK


def dist_rows(Es: list[int]) -> list[list]:
    table = build_table(max(Es))
    rows = []
    for E in Es:
        dist = micro_distribution(table, E)
        for M in range(1, len(dist.counts)):
            c = dist.counts[M]
            rows.append([E, M, str(c), probability_str(c, dist.total)])
    return rows


def cmd_dist(args, out) -> int:
    if args.b is not None:
        return _canonical_dist(args, out)
    rows = dist_rows(energies(args))
    header = ["E", "M", "count", "probability"]
    if args.format == "json":
        write_json([dict(zip(header, r)) for r in rows], out)
    else:
        write_csv(header, rows, out)
    return EXIT_OK


def _canonical_dist(args, out) -> int:
    n = args.E if args.E is not None else 4500
    table = build_table(n)
    probs = canonical_distribution(table, args.b)
    rows = [[args.b, M, mp.nstr(p, 17)] for M, p in enumerate(probs) if M >= 1]
    header = ["b", "M", "probability"]
    if args.format == "json":
        write_json([dict(zip(header, r)) for r in rows], out)
    else:
        write_csv(header, rows, out)
    return EXIT_OK


def cumulant_record(E: int, dps: int = DEFAULT_DPS, with_saddle: bool = True, table=None) -> dict:
    """Exact, saddle-point and closed-form cumulants at one ``E``."""
    with precision(dps), workdps():
        table = table or build_table(E)
        exact = exact_cumulants(micro_distribution(table, E))
        asym = asymptotic_cumulants(E)
        g1p, g2p = gamma_asymptotic(E)
        saddle = None
        if with_saddle and E >= SADDLE_MIN_E:
            ks = mc_cumulants_saddle(E)
            saddle = {
                "log_upsilon": _num(log_upsilon_gaussian(E)),
                **{f"kappa{k}": _num(v) for k, v in enumerate(ks, 1)},
                "gamma1": _num(ks[2] / ks[1] ** mpf(1.5)),
                "gamma2": _num(ks[3] / ks[1] ** 2),
            }
        exact_d = {f"kappa{k}": _num(v) for k, v in enumerate(exact.kappas, 1)}
        exact_d["gamma1"] = _num(exact.gamma1)
        exact_d["gamma2"] = _num(exact.gamma2)
        asym_d = {f"kappa{k}": _num(getattr(asym, f"kappa{k}")) for k in range(1, 5)}
        asym_d["gamma1"] = _num(asym.gamma1)
        asym_d["gamma2"] = _num(asym.gamma2)
        dev = {}
        for k in range(1, 5):
            ex = getattr(exact, f"kappa{k}")
            dev[f"saddle_kappa{k}"] = _rel(saddle[f"kappa{k}"], ex) if saddle else None
            dev[f"asymptotic_kappa{k}"] = _rel(getattr(asym, f"kappa{k}"), ex)
        dev["gamma1_printed"] = _rel(exact.gamma1, g1p)
        dev["gamma2_printed"] = _rel(exact.gamma2, g2p)
        return {
            "E": E,
            "exact": exact_d,
            "saddle": saddle,
            "asymptotic": asym_d,
            "gamma_printed": {"gamma1": _num(g1p), "gamma2": _num(g2p)},
            "deviation": dev,
        }


def canonical_record(k: int, b: float) -> dict:
    direct = canonical_cumulant(k, b)
    rec = {
        "k": k,
        "b": b,
        "direct": _num(direct),
        "bosonic": _num(bosonic_cumulant(k, b)),
        "identity_residual": _num(check_fermion_boson_identity(k, b)),
        "residue_series": None,
        "residue_rel_error": None,
    }
    if b <= 0.2:
        asym = asymptotic_canonical_cumulant(k, b)
        rec["residue_series"] = _num(asym)
        rec["residue_rel_error"] = _rel(asym, direct)
    return rec


def cmd_cumulants(args, out) -> int:
    if args.b is not None:
        if args.b <= 0:
            raise UsageError("--b must be positive")
        ks = [args.k] if args.k is not None else range(5)
        if any(not 0 <= k <= 4 for k in ks):
            raise UsageError("--k must be in 0..4")
        emit([canonical_record(k, args.b) for k in ks], args.format, out)
        return EXIT_OK
    Es = energies(args)
    with_saddle = not args.no_saddle
    if args.jobs > 1 and len(Es) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(cumulant_record, Es, [args.digits] * len(Es), [with_saddle] * len(Es)))
    else:
        table = build_table(max(Es))
        records = [cumulant_record(E, args.digits, with_saddle, table) for E in Es]
    emit(records, args.format, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    results = run_checks()
    out.write(format_report(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def cmd_figure1(args, out) -> int:
    args.b = None
    if args.E is None and args.E_list is None:
        args.E_list = ",".join(str(e) for e in FIGURE1_E)
    return cmd_dist(args, out)


def figure2_rows(Es: list[int]) -> list[list[str]]:
    table = build_table(max(Es))
    rows = []
    for E in Es:
        exact = exact_cumulants(micro_distribution(table, E))
        g1a, g2a = gamma_asymptotic(E)
        rows.append([str(E)] + [mp.nstr(v, 17) if v is not None else "" for v in (exact.gamma1, g1a, exact.gamma2, g2a)])
    return rows


def cmd_figure2(args, out) -> int:
    Es = parse_grid(args.grid) if args.grid else energies(args, default=range(200, 4501, 100))
    header = ["E", "gamma1_exact", "gamma1_asym", "gamma2_exact", "gamma2_asym"]
    rows = figure2_rows(Es)
    if args.format == "json":
        write_json([dict(zip(header, r)) for r in rows], out)
    else:
        write_csv(header, rows, out)
    return EXIT_OK


COMMANDS = {
    "table": cmd_table,
    "dist": cmd_dist,
    "cumulants": cmd_cumulants,
    "verify": cmd_verify,
    "figure1": cmd_figure1,
    "figure2": cmd_figure2,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fermipart",
        description="Partitions into distinct parts as an ideal trapped Fermi gas.",
    )
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--E", type=int, help="single integer E")
    p.add_argument("--E-list", dest="E_list", help="comma-separated list of E")
    p.add_argument("--b", type=float, help="reduced inverse temperature for canonical output")
    p.add_argument("--k", type=int, help="cumulant order for canonical output")
    p.add_argument("--out", default="-", help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--digits", type=int, default=DEFAULT_DPS, help="working precision in decimal digits (>= 30)")
    p.add_argument("--grid", help="E grid start:stop:step (inclusive), figure2")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for per-E work")
    p.add_argument("--no-saddle", action="store_true", help="skip saddle-point cumulants")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "json" if args.command == "cumulants" else "csv"
    if args.digits < 30:
        print("error: --digits must be >= 30", file=sys.stderr)
        return EXIT_ARGS
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_ARGS

    buf = io.StringIO()
    try:
        with precision(args.digits):
            code = COMMANDS[args.command](args, buf)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS

    try:
        if args.out == "-":
            sys.stdout.write(buf.getvalue())
            sys.stdout.flush()
        else:
            with open(args.out, "w", newline="") as fh:
                fh.write(buf.getvalue())
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
