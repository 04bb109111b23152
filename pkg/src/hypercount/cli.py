"""Command-line entry point.

Exit codes: 0 verified / success, 1 usage or I/O error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys

from . import analysis, constructions, interchange
from .errors import HypercountError, ParseError, SchemaError, VerificationFailed
from .finite_geometry import make_field, pg_lines_plane, pg_points
from .matroid_core import flats_by_rank

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2

CSV_COLUMNS = ["ell", "r", "q", "t", "ground", "W2", "W2e", "hyperplanes", "bound", "in_U", "beats_bound"]

log = logging.getLogger("hypercount")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def run_counterexample(
    ell: int,
    r: int,
    mode: str = "exact",
    workers: int = 1,
    seed: int = 0,
    sample: int | None = analysis.DEFAULT_SAMPLE,
) -> tuple[analysis.Report, dict]:
    """Select parameters, build M(q,t) and its rank-r tower, and verify it.

    Returns the report and the matroid document of the tower.
    """
    if ell < 10:
        raise UsageError("ell >= 10 required")
    if r < 3:
        raise UsageError("rank >= 3 required")
    q, t = constructions.select_params_lemma(ell)
    N, art = constructions.build_mqt(q, t)
    e = constructions.min_degree_element(N)
    M, tower = constructions.build_tower(N, e, ell, r)
    report = analysis.verify_counterexample(
        M, ell, "exact" if mode == "exact" else "family_only", tower, sample, seed, workers
    )
    report.provenance = {
        "q": q,
        "t": t,
        "deleted_point": art.e,
        "triangle": list(art.triangle),
        "basepoint": e,
        "basepoint_label": N.labels[e],
        "mode": mode,
        "seed": seed,
        "sample": sample,
    }
    report.witness["mqt"] = art.to_dict()
    return report, interchange.matroid_to_doc(M)


def _row(rep: analysis.Report) -> dict:
    return {
        "ell": rep.ell,
        "r": rep.r,
        "q": rep.provenance.get("q"),
        "t": rep.provenance.get("t"),
        "ground": rep.ground_size,
        "W2": rep.W2,
        "W2e": rep.W2e,
        "hyperplanes": rep.hyperplane_count,
        "bound": rep.bonin_bound,
        "in_U": rep.in_U,
        "beats_bound": rep.beats_bound,
    }


def format_reports(reports: list[analysis.Report], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for rep in reports:
            w.writerow(_row(rep))
        return buf.getvalue()
    if fmt == "json":
        return interchange.dumps([rep.to_dict() for rep in reports])
    lines = []
    for rep in reports:
        rel = ">=" if rep.count_kind == "lower_bound" else "="
        lines.append(
            f"ell={rep.ell} r={rep.r} q={rep.provenance.get('q')} t={rep.provenance.get('t')} "
            f"ground={rep.ground_size} W2={rep.W2} W2e={rep.W2e} "
            f"hyperplanes{rel}{rep.hyperplane_count} bound={rep.bonin_bound} "
            f"max_line_minor={rep.max_line_minor} in_U={rep.in_U} "
            f"beats_bound={rep.beats_bound} kung_ok={rep.kung_ok}"
        )
    return "\n".join(lines) + ("\n" if lines else "")


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def parse_range(text: str) -> range:
    """``"10..12"`` -> 10, 11, 12; ``"7"`` -> 7.  A reversed range is empty."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return range(int(lo), int(hi) + 1)
        v = int(text)
        return range(v, v + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; use A..B or a single integer")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hypercount", description="Build and verify hyperplane-rich matroids with no long line minor.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt="text"):
        sp.add_argument("--format", choices=["json", "csv", "text"], default=fmt)
        sp.add_argument("--out", metavar="PATH")
        sp.add_argument("--threads", type=_positive, default=1, help="worker processes for flat enumeration")

    sp = sub.add_parser("field", help="dump GF(q) arithmetic tables")
    sp.add_argument("--q", type=int, required=True)
    common(sp, "json")

    sp = sub.add_parser("pg", help="dump points (and plane lines) of PG(rank-1, q)")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--rank", type=int, default=3)
    common(sp, "json")

    sp = sub.add_parser("mqt", help="build M(q,t) and write it with its witness")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    common(sp, "json")

    for name, hlp in (("counterexample", "build and verify one tower"), ("report", "sweep over ell and rank")):
        sp = sub.add_parser(name, help=hlp)
        if name == "counterexample":
            sp.add_argument("--ell", type=int, required=True)
            sp.add_argument("--rank", type=int, required=True)
            sp.add_argument("--mode", choices=["exact", "family"], default="exact")
            common(sp, "json")
        else:
            sp.add_argument("--ell", type=parse_range, required=True, help="A..B")
            sp.add_argument("--rank", type=parse_range, required=True, help="A..B")
            sp.add_argument("--mode", choices=["auto", "exact", "family"], default="auto")
            common(sp, "csv")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--sample", type=int, default=analysis.DEFAULT_SAMPLE,
                        help="family members to check; 0 checks all")

    sp = sub.add_parser("flats", help="enumerate flats of a stored matroid")
    sp.add_argument("--in", dest="inp", required=True, metavar="PATH")
    sp.add_argument("--rank", type=int, required=True)
    common(sp, "text")

    sp = sub.add_parser("verify", help="re-verify a stored matroid or counterexample report")
    sp.add_argument("--in", dest="inp", required=True, metavar="PATH")
    sp.add_argument("--ell", type=int, help="required for bare matroid documents")
    sp.add_argument("--mode", choices=["exact", "family"])
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--sample", type=int, default=analysis.DEFAULT_SAMPLE)
    common(sp, "text")
    return p


def cmd_field(a) -> int:
    F = make_field(a.q)
    doc = {
        "p": F.p,
        "k": F.k,
        "q": F.q,
        "modulus": list(F.modulus) if F.modulus else None,
        "add": [list(r) for r in F.add_table],
        "mul": [list(r) for r in F.mul_table],
        "inv": list(F.inv_table),
    }
    if a.format == "json":
        _emit(interchange.dumps(doc), a.out)
    else:
        _emit(f"GF({F.q}) p={F.p} k={F.k} modulus={doc['modulus']}\n", a.out)
    return EXIT_OK


def cmd_pg(a) -> int:
    F = make_field(a.q)
    if a.rank < 2:
        raise UsageError("rank >= 2 required")
    pts = [list(p.coords) for p in pg_points(a.rank, F)]
    doc = {"q": a.q, "rank": a.rank, "points": pts}
    if a.rank == 3:
        doc["lines"] = [{"coeffs": list(l.coeffs), "points": list(l.points)} for l in pg_lines_plane(F)]
    if a.format == "json":
        _emit(interchange.dumps(doc), a.out)
    else:
        extra = f", {len(doc['lines'])} lines" if "lines" in doc else ""
        _emit(f"PG({a.rank - 1},{a.q}): {len(pts)} points{extra}\n", a.out)
    return EXIT_OK


def cmd_mqt(a) -> int:
    N, art = constructions.build_mqt(a.q, a.t)
    doc = {
        "matroid": interchange.matroid_to_doc(N),
        "witness": {"mqt": art.to_dict()},
        "W2": analysis.count_lines(N),
        "W2_formula": constructions.mqt_line_count(a.q, a.t),
    }
    if a.format == "json":
        _emit(interchange.dumps(doc), a.out)
    else:
        _emit(f"M({a.q},{a.t}): {N.n} elements, W2={doc['W2']} (formula {doc['W2_formula']})\n", a.out)
    return EXIT_OK


def _sample_arg(a):
    return None if a.sample == 0 else a.sample


def cmd_counterexample(a) -> int:
    rep, mdoc = run_counterexample(a.ell, a.rank, a.mode, a.threads, a.seed, _sample_arg(a))
    if a.format == "json":
        _emit(interchange.dumps({"report": rep.to_dict(), "matroid": mdoc}), a.out)
    else:
        _emit(format_reports([rep], a.format), a.out)
    return EXIT_OK if rep.verified else EXIT_FAILED


def cmd_report(a) -> int:
    for ell in a.ell:
        if ell < 10:
            raise UsageError("ell >= 10 required")
        if ell > 254:
            raise UsageError("ell <= 254 supported")
    for r in a.rank:
        if r < 3:
            raise UsageError("rank >= 3 required")
    reports = []
    for ell in a.ell:
        for r in a.rank:
            mode = a.mode
            if mode == "auto":
                mode = "exact" if r <= 4 else "family"
            rep, _ = run_counterexample(ell, r, mode, a.threads, a.seed, _sample_arg(a))
            reports.append(rep)
    _emit(format_reports(reports, a.format), a.out)
    return EXIT_OK if all(rep.verified for rep in reports) else EXIT_FAILED


def cmd_flats(a) -> int:
    M = interchange.matroid_of(interchange.read_document(a.inp))
    if not 0 <= a.rank <= M.full_rank:
        raise UsageError(f"rank must lie in 0..{M.full_rank}")
    flats = flats_by_rank(M, a.rank, a.threads)
    if a.format == "json":
        _emit(interchange.dumps({"rank": a.rank, "count": len(flats), "flats": [F.members for F in flats]}), a.out)
    elif a.format == "csv":
        _emit("".join(" ".join(M.labels[i] for i in F.members) + "\n" for F in flats), a.out)
    else:
        _emit(f"{len(flats)} flats of rank {a.rank}\n", a.out)
    return EXIT_OK


def cmd_verify(a) -> int:
    doc = interchange.read_document(a.inp)
    M = interchange.matroid_of(doc)
    stored = doc.get("report") if isinstance(doc, dict) else None
    if stored is not None:
        ell = stored["ell"]
        tower = constructions.tower_from_doc(M, stored["witness"]["tower"])
        if "mqt" in stored["witness"]:
            art = constructions.MqtArtifacts.from_dict(stored["witness"]["mqt"])
            constructions.check_mqt_witness(art)
            q, t = constructions.select_params_lemma(ell)
            if (art.q, art.t) != (q, t):
                raise VerificationFailed("params", f"witness has (q,t)=({art.q},{art.t}), expected ({q},{t})")
        mode = a.mode or ("family" if stored["count_kind"] == "lower_bound" else "exact")
    else:
        if a.ell is None:
            raise UsageError("--ell is required for a bare matroid document")
        ell, tower, mode = a.ell, None, "exact"
    rep = analysis.verify_counterexample(
        M, ell, "exact" if mode == "exact" else "family_only", tower, _sample_arg(a), a.seed, a.threads
    )
    if stored is not None:
        rep.provenance = stored.get("provenance", {})
        for key in ("in_U", "beats_bound", "bonin_bound"):
            if stored[key] != getattr(rep, key):
                raise VerificationFailed("report_mismatch", f"{key}: stored {stored[key]}, recomputed {getattr(rep, key)}")
    _emit(format_reports([rep], a.format) if a.format != "json" else interchange.dumps(rep.to_dict()), a.out)
    return EXIT_OK if rep.verified else EXIT_FAILED


COMMANDS = {
    "field": cmd_field,
    "pg": cmd_pg,
    "mqt": cmd_mqt,
    "counterexample": cmd_counterexample,
    "report": cmd_report,
    "flats": cmd_flats,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help exits 0, bad usage exits 1
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (UsageError, ParseError, SchemaError, OSError, HypercountError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
