"""Command-line entry point.

Exit codes: 0 success, 1 flagged or inconclusive numeric result (output is
still written), 2 usage error, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from datetime import datetime, timezone

from . import __version__
from .circuits import DEFAULT_N_GRID, PConfig, p_limit
from .moments import DEFAULT_BATTERY, NOTIONS, classify, limit_joint_moment, read_battery
from .patterns import Distribution, Pattern
from .simulate import fourth_moment_decay, simulate_moment
from .words import (
    MAX_K,
    enumerate_colored_pair_matched,
    enumerate_pair_matched,
    format_word,
    is_catalan,
    is_colored_catalan,
    is_colored_symmetric,
    is_pair_matched,
    is_symmetric,
    parse_monomial,
    parse_word,
)

EXIT_OK, EXIT_FLAGGED, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _pattern(text: str) -> Pattern:
    try:
        return Pattern.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _monomial(text: str) -> tuple:
    try:
        return parse_monomial(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text: str) -> tuple:
    try:
        vals = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("grid values must be positive")
    return vals


def _word(text: str) -> tuple:
    try:
        return parse_word(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="patmoments", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(sp, default_format="json"):
        sp.add_argument("--format", choices=("csv", "json") if default_format != "text" else ("text", "csv", "json"),
                        default=default_format)
        sp.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
        sp.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    sp = sub.add_parser("words", help="list pair-matched (colored) words")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--k", type=int)
    g.add_argument("--monomial", type=_monomial)
    common(sp, "text")

    sp = sub.add_parser("pofw", help="limit weight p(w) of a pair-matched word")
    sp.add_argument("--pattern", type=_pattern, required=True)
    sp.add_argument("--word", type=_word, required=True)
    sp.add_argument("--n-grid", type=_int_list, default=DEFAULT_N_GRID)
    sp.add_argument("--mode", choices=("strict", "relaxed"))
    sp.add_argument("--method", choices=("auto", "exact", "extrapolate", "mc"), default="auto")
    sp.add_argument("--fit", choices=("quadratic", "linear"), default="quadratic")
    sp.add_argument("--residual-tol", type=float, default=5e-3)
    sp.add_argument("--samples", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)

    sp = sub.add_parser("moment", help="limiting joint moment of a monomial")
    sp.add_argument("--pattern", type=_pattern, required=True)
    sp.add_argument("--monomial", type=_monomial, required=True)
    sp.add_argument("--method", choices=("auto", "extrapolate", "mc"), default="auto")
    sp.add_argument("--fit", choices=("quadratic", "linear"), default="quadratic")
    sp.add_argument("--residual-tol", type=float, default=5e-3)
    sp.add_argument("--samples", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)

    sp = sub.add_parser("classify", help="compare a limit with free / classical / half independence")
    sp.add_argument("--pattern", type=_pattern, required=True)
    sp.add_argument("--battery-file")
    sp.add_argument("--tolerance", type=float, default=1e-9)
    common(sp)

    sp = sub.add_parser("simulate", help="Monte Carlo normalized trace of a monomial")
    sp.add_argument("--pattern", type=_pattern, required=True)
    sp.add_argument("--monomial", type=_monomial, required=True)
    sp.add_argument("--n", type=int, default=500)
    sp.add_argument("--reps", type=int, default=200)
    sp.add_argument("--dist", choices=[d.value for d in Distribution], default="rademacher")
    sp.add_argument("--seed", type=int, default=0)
    common(sp)

    sp = sub.add_parser("decay", help="fourth-moment decay of the normalized trace")
    sp.add_argument("--pattern", type=_pattern, required=True)
    sp.add_argument("--monomial", type=_monomial, required=True)
    sp.add_argument("--n-grid", type=_int_list, default=(64, 128, 256, 512))
    sp.add_argument("--reps", type=int, default=200)
    sp.add_argument("--dist", choices=[d.value for d in Distribution], default="rademacher")
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
    except UsageError as exc:
        parser.error(str(exc))
    return args


def _validate(args) -> None:
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    cmd = args.subcommand
    if cmd == "words" and args.k is not None:
        if args.k < 2 or args.k % 2 or args.k > MAX_K:
            raise UsageError(f"--k must be even with 2 <= k <= {MAX_K}")
    if cmd == "words" and args.monomial is not None and len(args.monomial) > MAX_K:
        raise UsageError(f"monomial longer than {MAX_K}")
    if cmd == "pofw":
        if not is_pair_matched(args.word):
            raise UsageError(f"word {format_word(args.word)} is not pair-matched")
        if len(args.word) > MAX_K:
            raise UsageError(f"word longer than {MAX_K}")
        if args.method == "mc" and args.pattern not in (Pattern.TOEPLITZ, Pattern.HANKEL):
            raise UsageError("--method mc supports toeplitz and hankel only")
        if len(args.n_grid) < 3:
            raise UsageError("--n-grid needs at least three values")
    if cmd in ("moment",) and len(args.monomial) > MAX_K:
        raise UsageError(f"monomial longer than {MAX_K}")
    if cmd in ("moment", "pofw") and args.samples < 1:
        raise UsageError("--samples must be >= 1")
    if cmd == "moment" and args.method == "mc" and args.pattern not in (Pattern.TOEPLITZ, Pattern.HANKEL):
        raise UsageError("--method mc supports toeplitz and hankel only")
    if cmd == "simulate" and (args.n < 2 or args.reps < 2):
        raise UsageError("--n and --reps must be >= 2")
    if cmd == "decay":
        if len(args.n_grid) < 3 or list(args.n_grid) != sorted(args.n_grid):
            raise UsageError("--n-grid must be ascending with at least three values")
        if args.reps < 50:
            raise UsageError("--reps must be >= 50")


def _config_echo(args) -> dict:
    out = {}
    for key, val in sorted(vars(args).items()):
        if isinstance(val, Pattern):
            val = val.value
        elif key == "word" and val is not None:
            val = format_word(val)
        elif isinstance(val, tuple):
            val = list(val)
        out[key] = val
    return out


def _mono_str(q) -> str:
    return ",".join(str(c) for c in q)


def _run_words(args) -> tuple[list[dict], bool]:
    if args.k is not None:
        rows = [{"word": format_word(w), "catalan": is_catalan(w), "symmetric": is_symmetric(w)}
                for w in enumerate_pair_matched(args.k)]
    else:
        rows = [{"word": str(cw), "catalan": is_colored_catalan(cw), "symmetric": is_colored_symmetric(cw)}
                for cw in enumerate_colored_pair_matched(args.monomial)]
    return rows, False


def _pconfig(args) -> PConfig:
    return PConfig(method=args.method, n_grid=tuple(getattr(args, "n_grid", DEFAULT_N_GRID)),
                   mode=getattr(args, "mode", None), samples=args.samples, seed=args.seed, fit=args.fit,
                   residual_tol=args.residual_tol)


def _run_pofw(args) -> tuple[list[dict], bool]:
    est = p_limit(args.pattern, args.word, _pconfig(args))
    row = {
        "word": format_word(args.word),
        "pattern": args.pattern.value,
        "method": est.method,
        "value": est.value,
        "stderr": est.stderr,
        "flagged": est.flagged,
        "diagnostics": json.dumps(est.diagnostics, sort_keys=True),
    }
    return [row], est.flagged


def _run_moment(args) -> tuple[list[dict], bool]:
    m = limit_joint_moment(args.pattern, args.monomial, _pconfig(args), args.threads)
    row = {
        "pattern": args.pattern.value,
        "monomial": _mono_str(args.monomial),
        "value": m.value,
        "exact": "" if m.exact is None else str(m.exact),
        "stderr": m.stderr,
        "flagged": m.flagged,
        "n_words": len(m.contributions),
        "contributions": ";".join(f"{cw}={est.value!r}" for cw, est in m.contributions),
    }
    return [row], m.flagged


def _run_classify(args) -> tuple[list[dict], bool]:
    battery = read_battery(args.battery_file) if args.battery_file else DEFAULT_BATTERY
    rep = classify(args.pattern, battery, args.tolerance, threads=args.threads)
    rows = []
    for notion in NOTIONS:
        wit = ";".join(f"({_mono_str(w.monomial)}):{w.ensemble!r} vs {w.reference!r}"
                       for w in rep.witnesses[notion])
        rows.append({"pattern": args.pattern.value, "notion": notion, "verdict": rep.verdicts[notion],
                     "battery_size": len(battery), "witnesses": wit})
    return rows, any(v == "inconclusive" for v in rep.verdicts.values())


def _run_simulate(args) -> tuple[list[dict], bool]:
    st = simulate_moment(args.pattern, args.monomial, args.n, args.reps, args.dist, args.seed, args.threads)
    lim = limit_joint_moment(args.pattern, args.monomial, threads=args.threads)
    row = {"pattern": args.pattern.value, "monomial": _mono_str(args.monomial), "n": args.n,
           "reps": args.reps, "mean": st.mean, "std_error": st.std_error, "limit": lim.value,
           "abs_error": abs(st.mean - lim.value)}
    return [row], lim.flagged


def _run_decay(args) -> tuple[list[dict], bool]:
    fit = fourth_moment_decay(args.pattern, args.monomial, args.n_grid, args.reps, args.dist, args.seed,
                              args.threads)
    rows = [{"pattern": args.pattern.value, "monomial": _mono_str(args.monomial), "n": n, "reps": args.reps,
             "fourth_moment": est, "slope": fit.slope, "intercept": fit.intercept, "error": fit.error or ""}
            for n, est in zip(fit.n_grid, fit.fourth_moment_estimates)]
    return rows, fit.error is not None


HANDLERS = {
    "words": _run_words,
    "pofw": _run_pofw,
    "moment": _run_moment,
    "classify": _run_classify,
    "simulate": _run_simulate,
    "decay": _run_decay,
}


def render(rows: list[dict], fmt: str, config: dict) -> str:
    if fmt == "text":
        return "".join(f"{r['word']}\n" for r in rows)
    if fmt == "csv":
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        return buf.getvalue()
    record = {
        "config": config,
        "results": rows,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    return json.dumps(record, indent=2) + "\n"


def run(args: argparse.Namespace) -> int:
    try:
        rows, flagged = HANDLERS[args.subcommand](args)
    except (ValueError, KeyError) as exc:
        print(f"patmoments: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"patmoments: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    text = render(rows, args.format, _config_echo(args))
    try:
        if args.output == "-":
            sys.stdout.write(text)
            sys.stdout.flush()
        else:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    except OSError as exc:
        print(f"patmoments: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_FLAGGED if flagged else EXIT_OK


def main(argv=None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
