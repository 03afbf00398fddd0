"""Command-line front end: ``rotdisc <command> [options]``."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Optional

from rotdisc import io as rio
from rotdisc import svg
from rotdisc.bench import geometric_ladder, run_bench
from rotdisc.cf import table_for
from rotdisc.core import build_branches
from rotdisc.oracle import error_profile, fit_line
from rotdisc.parsing import SpecError, parse_nspec, parse_rho
from rotdisc.pdf import build_pdf
from rotdisc.stats import STATS_FIELDS, StatsRow, stats_row, stats_sweep
from rotdisc.verify import run_all

COMMANDS = ("branches", "pdf", "stats", "sweep", "bench", "verify", "plot")
FORMATS = ("csv", "json", "svg")
DEFAULT_ERROR_Q = [10 ** j for j in range(1, 7)]


class CliError(Exception):
    """Failure reported as an error JSON object with a nonzero exit."""


@dataclass(frozen=True)
class JobConfig:
    command: str
    rho_spec: Optional[str]
    n_spec: Optional[str]
    output_path: str
    format: str
    threads: int


def job_config(args) -> JobConfig:
    return JobConfig(args.command, getattr(args, "rho", None), getattr(args, "n", None),
                     args.output, args.format or "", resolve_threads(args.threads))


def resolve_threads(flag: Optional[int], environ=None) -> int:
    """Thread count: ``DISC_THREADS`` wins over the flag; default 1."""
    environ = os.environ if environ is None else environ
    raw = environ.get("DISC_THREADS")
    if raw is not None and raw.strip():
        try:
            value = int(raw)
        except ValueError:
            raise CliError(f"DISC_THREADS must be an integer, got {raw!r}") from None
    else:
        value = 1 if flag is None else flag
    if value < 1:
        raise CliError(f"thread count must be positive, got {value}")
    return value


def _format(args, allowed):
    fmt = args.format
    if fmt is None:
        ext = os.path.splitext(args.output)[1].lstrip(".").lower()
        fmt = ext if ext in FORMATS else "csv"
        if ext == "jsonl":
            fmt = "json"
    if fmt not in allowed:
        raise CliError(f"{args.command} cannot write {fmt}; choose from {', '.join(allowed)}")
    return fmt


def _timestamp(args):
    if not getattr(args, "timestamp", False):
        return None
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _single_n(args, rho):
    ns = parse_nspec(args.n, rho)
    if len(ns) != 1:
        raise CliError(f"{args.command} needs a single N, got {len(ns)} values")
    return ns[0]


def _need(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise CliError(f"{args.command} requires --{name.replace('_', '-')}")


def _parse_zoom(text):
    if text is None:
        return None
    lo, sep, hi = text.partition(":")
    try:
        if not sep:
            raise ValueError
        return float(lo), float(hi)
    except ValueError:
        raise CliError(f"--zoom expects LO:HI, got {text!r}") from None


def _label(rho, N=None):
    name = rho.label or repr(rho.value)
    return f"rho = {name}" + (f", N = {N}" if N is not None else "")


def cmd_branches(args):
    _need(args, "rho", "n")
    fmt = _format(args, FORMATS)
    rho = parse_rho(args.rho)
    N = _single_n(args, rho)
    b = build_branches(rho, N)
    if fmt == "csv":
        return rio.branches_csv(b), 0
    if fmt == "json":
        return rio.branches_json(b), 0
    rows = list(b.rows())
    cols = list(zip(*rows))
    return svg.branches_figure(cols[0], cols[1], cols[2], cols[3],
                               title="D_N(x), " + _label(rho, N), timestamp=_timestamp(args)), 0


def cmd_pdf(args):
    _need(args, "rho", "n")
    fmt = _format(args, FORMATS)
    rho = parse_rho(args.rho)
    N = _single_n(args, rho)
    p = build_pdf(build_branches(rho, N))
    if fmt == "csv":
        return rio.pdf_csv(p), 0
    if fmt == "json":
        return rio.pdf_json(p), 0
    return svg.pdf_figure(p.bounds, p.density, title="pdf, " + _label(rho, N),
                          zoom=_parse_zoom(args.zoom), timestamp=_timestamp(args)), 0


def cmd_stats(args):
    _need(args, "rho", "n")
    fmt = _format(args, ("csv", "json"))
    rho = parse_rho(args.rho)
    N = _single_n(args, rho)
    row = stats_row(rho, N, table_for(rho, N))
    if fmt == "csv":
        return rio.stats_csv([row]), 0
    return rio.write_json(rio.records(*rio.stats_rows([row]))[0]), 0


def _highlight(rows, rho, dots):
    if dots == "multiples":
        return [r.is_anchor for r in rows]
    table = table_for(rho, max(r.n_terms for r in rows))
    qs = {q for q in table.q if q >= 2}
    return [r.n_terms in qs for r in rows]


def cmd_sweep(args):
    _need(args, "rho", "n")
    fmt = _format(args, FORMATS)
    rho = parse_rho(args.rho)
    rows = stats_sweep(rho, parse_nspec(args.n, rho), threads=resolve_threads(args.threads))
    if fmt == "csv":
        return rio.stats_csv(rows), 0
    if fmt == "json":
        return rio.stats_jsonl(rows), 0
    return svg.sweep_figure([r.n_terms for r in rows], [r.sup_norm for r in rows],
                            [r.variance for r in rows], [r.kurtosis for r in rows],
                            _highlight(rows, rho, args.dots), title=_label(rho),
                            timestamp=_timestamp(args)), 0


def _info(payload):
    print(json.dumps(payload), file=sys.stderr)


def cmd_bench(args):
    fmt = _format(args, FORMATS)
    threads = resolve_threads(args.threads)
    if args.kind == "error":
        q_list = parse_nspec(args.q, None) if args.q else DEFAULT_ERROR_Q
        prof = error_profile(q_list)
        slope, _, r2 = fit_line([q for q, _ in prof], [e for _, e in prof]) \
            if len(prof) >= 2 else (float("nan"), 0.0, float("nan"))
        if fmt == "csv":
            out = rio.write_csv(rio.ERROR_FIELDS, prof)
        elif fmt == "json":
            out = rio.write_json({"rows": rio.records(rio.ERROR_FIELDS, prof),
                                  "slope": slope, "r2": r2})
        else:
            out = svg.error_figure([q for q, _ in prof], [e for _, e in prof],
                                   timestamp=_timestamp(args))
        if fmt != "json":
            _info({"slope": slope, "r2": r2})
        return out, 0

    rho = parse_rho(args.rho) if args.rho else None
    dta = geometric_ladder(args.n_min, args.n_max)
    naive = geometric_ladder(args.naive_min, args.naive_max)
    rows, fits = run_bench(rho, dta, naive, repeats=args.repeats, threads=threads)
    table = [(r.N, r.algo, r.seconds) for r in rows]
    summary = {algo: {"slope": s, "r2": r2} for algo, (s, r2) in fits.items()}
    if fmt == "csv":
        out = rio.write_csv(rio.BENCH_FIELDS, table)
    elif fmt == "json":
        out = rio.write_json({"rows": rio.records(rio.BENCH_FIELDS, table), "fits": summary})
    else:
        series = {}
        for algo in ("dta", "naive"):
            sub = [r for r in rows if r.algo == algo]
            if sub:
                series[algo] = ([r.N for r in sub], [r.seconds for r in sub],
                                fits.get(algo, (float("nan"), 0))[0])
        out = svg.bench_figure(series, timestamp=_timestamp(args))
    if fmt != "json":
        _info({"fits": summary})
    return out, 0


def cmd_verify(args):
    fmt = _format(args, ("csv", "json"))
    results = run_all()
    status = 0 if all(ok for _, ok, _ in results) else 1
    if fmt == "json":
        return rio.write_json([{"name": n, "passed": ok, "detail": d} for n, ok, d in results]), status
    return rio.write_csv(("name", "passed", "detail"), results), status


def _columns(header, rows):
    return {name: [row[i] for row in rows] for i, name in enumerate(header)}


def cmd_plot(args):
    if args.input is None:
        raise CliError("plot requires an input CSV path")
    _format(args, ("svg",))
    with open(args.input, encoding="utf-8") as fh:
        header, rows = rio.read_csv(fh.read())
    if not rows:
        raise CliError(f"{args.input} has no data rows")
    c = _columns(header, rows)
    ts = _timestamp(args)
    title = os.path.basename(args.input)
    if header == rio.BRANCH_FIELDS:
        return svg.branches_figure(c["x_left"], c["x_right"], c["a"], c["b"], title=title,
                                   timestamp=ts), 0
    if header == rio.PDF_FIELDS:
        bounds = c["y_left"] + [c["y_right"][-1]]
        return svg.pdf_figure(bounds, c["density"], title=title, zoom=_parse_zoom(args.zoom),
                              timestamp=ts), 0
    if header == STATS_FIELDS:
        if args.dots == "qn":
            if args.rho is None:
                raise CliError("--dots qn needs --rho to find the convergent denominators")
            fake = [StatsRow(int(n), 0, 0, 0, 0, 0, 0, False) for n in c["N"]]
            mark = _highlight(fake, parse_rho(args.rho), "qn")
        else:
            mark = c["is_anchor"]
        return svg.sweep_figure(c["N"], c["sup_norm"], c["variance"], c["kurtosis"], mark,
                                title=title, timestamp=ts), 0
    if header == rio.BENCH_FIELDS:
        series = {}
        for algo in dict.fromkeys(c["algo"]):
            n = [N for N, a in zip(c["N"], c["algo"]) if a == algo]
            t = [s for s, a in zip(c["seconds"], c["algo"]) if a == algo]
            slope = fit_line(*_logs(n, t))[0] if len(n) >= 2 else float("nan")
            series[algo] = (n, t, slope)
        return svg.bench_figure(series, title=title, timestamp=ts), 0
    if header == rio.ERROR_FIELDS:
        return svg.error_figure(c["q"], c["max_error"], timestamp=ts), 0
    raise CliError(f"unrecognised CSV header {','.join(header)}")


def _logs(n, t):
    return [math.log(v) for v in n], [math.log(v) for v in t]


HANDLERS = {
    "branches": cmd_branches, "pdf": cmd_pdf, "stats": cmd_stats, "sweep": cmd_sweep,
    "bench": cmd_bench, "verify": cmd_verify, "plot": cmd_plot,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def build_parser():
    parser = _Parser(prog="rotdisc",
                     description="Exact discrepancy sums of circle rotations.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p):
        p.add_argument("-o", "--output", default="-", help="output path, '-' for stdout")
        p.add_argument("--format", choices=FORMATS, help="default: from the output extension, else csv")
        p.add_argument("--threads", type=int, help="worker threads (DISC_THREADS overrides)")
        p.add_argument("--timestamp", action="store_true", help="embed a UTC timestamp in SVG output")
        return p

    for name in ("branches", "pdf", "stats", "sweep"):
        p = common(sub.add_parser(name))
        p.add_argument("--rho", help="0.618, 16/113, golden, pi_m3, cf:2,40,40,(2), ...")
        p.add_argument("--n", help="610, 2..1000, 113*1..10, anchors:33102[:PER_GAP]")
        if name == "pdf":
            p.add_argument("--zoom", help="extra panel for the y window LO:HI")
        if name == "sweep":
            p.add_argument("--dots", choices=("qn", "multiples"), default="multiples",
                           help="red dots at convergent denominators only, or at all multiples")

    p = common(sub.add_parser("bench"))
    p.add_argument("--kind", choices=("time", "error"), default="time")
    p.add_argument("--rho", help="rotation for timing runs (default golden)")
    p.add_argument("--n-min", type=int, default=2 ** 10)
    p.add_argument("--n-max", type=int, default=2 ** 20)
    p.add_argument("--naive-min", type=int, default=2 ** 7)
    p.add_argument("--naive-max", type=int, default=2 ** 12)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--q", help="q list for --kind error (same grammar as --n)")

    common(sub.add_parser("verify"))

    p = common(sub.add_parser("plot"))
    p.add_argument("input", nargs="?", help="CSV written by another command")
    p.add_argument("--zoom", help="extra panel for the y window LO:HI (pdf tables)")
    p.add_argument("--dots", choices=("qn", "multiples"), default="multiples")
    p.add_argument("--rho", help="needed with --dots qn")
    return parser


def _emit(text, path):
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _error_json(exc, command):
    payload = {"error": type(exc).__name__, "message": str(exc), "command": command}
    if isinstance(exc, SpecError):
        payload["position"] = exc.position
        payload["input"] = exc.text
    return json.dumps(payload)


def main(argv=None) -> int:
    command = None
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        if command is None:
            raise CliError(f"missing command; choose from {', '.join(COMMANDS)}")
        job_config(args)
        text, status = HANDLERS[command](args)
        _emit(text, args.output)
        return status
    except Exception as exc:  # every failure becomes one JSON line on stderr
        print(_error_json(exc, command), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
