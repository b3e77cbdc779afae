"""Command-line front end: ``rtl analyze|orientations|regimes|simulate|diagram``."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import probability as prob
from .diagram import render_svg
from .model import GOLAY, STEANE, AppClass, CodeParams, Link, LinkKind, end_to_end_latency
from .montecarlo import SimConfig, simulate
from .pareto import BudgetExceeded, best_orientations, brute_force_min, is_pareto
from .pathspec import ParseError, PathSpec, format_path_file, format_time, parse_path_file
from .timing import PATTERN_TAGS, evaluate, matched_tpt

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_ANALYSIS = 3
EXIT_BUDGET = 4

KEY_WIDTH = 22


def _kv(key: str, value) -> str:
    return f"{key:<{KEY_WIDTH}}{value}"


def _fmt(value: Fraction) -> str:
    return format_time(value)


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _regime_label(link, code: CodeParams, epsilon: float) -> str:
    try:
        alpha = prob.alpha_threshold(code, 0.999)
        regime = prob.classify_regime(link, prob.RegimeParams(code=code, alpha=alpha, epsilon=epsilon))
    except ValueError as exc:
        return f"n/a ({exc})"
    return regime.value


def cmd_analyze(spec: PathSpec, units: str = "", code: CodeParams = STEANE, epsilon: float = 1e-2,
                oracle: bool = False) -> str:
    path = spec.path
    sched = spec.schedule()
    rep = evaluate(path, sched)
    verdict = is_pareto(path, sched, spec.app_class)
    te = end_to_end_latency(path)
    lines = [
        _kv("hops", path.hops),
        _kv("links", " ".join(f"{link.kind.token}({_fmt(link.latency)})" for link in path)),
        _kv("pattern", sched.pattern),
        _kv("class", spec.app_class.value),
    ]
    if units:
        lines.append(_kv("units", units))
    lines += [
        _kv("fire times", " ".join(_fmt(f) for f in sched.fire_times)),
        _kv("swap times", " ".join(_fmt(s) for s in rep.swap_times)),
        _kv("dest ready", _fmt(rep.dest_ready)),
        _kv("T_E", _fmt(te)),
    ]
    for key, table in (("T^H", rep.th), ("T^P", rep.tp), ("total", rep.total)):
        for c in AppClass:
            lines.append(_kv(f"{key}_{c.value}", _fmt(table[c])))
    lines += [
        _kv("node waits", " ".join(_fmt(w) for w in rep.node_waits) or "-"),
        _kv("dest Pauli wait", _fmt(rep.dest_pauli_wait)),
        _kv("Matched:", _yes(rep.matched)),
        _kv("Bell-matched T^P_T", f"{_fmt(matched_tpt(path))} (this schedule {_fmt(rep.tp[AppClass.T])})"),
    ]
    a, b = verdict.condition_a, verdict.condition_b
    lines.append(_kv("condition (a)", "pass" if a.passed else "fail at nodes " + " ".join(map(str, a.violating_nodes))))
    lines.append(_kv("condition (b)", "pass" if b.passed else f"fail on links {b.interval[0]}..{b.interval[1]}"))
    for c in AppClass:
        lines.append(_kv(f"Pareto {c.value}", _yes(verdict.is_pareto(c))))
    if oracle:
        res = brute_force_min(path, AppClass.T, Fraction(1, 2), 2)
        lines.append(_kv("oracle min T^P_T", f"{_fmt(res.min_tp)} ({res.evaluated} schedules)"))
    for j, link in enumerate(path, start=1):
        lines.append(_kv(f"regime link {j}", _regime_label(link, code, epsilon)))
    return "\n".join(lines) + "\n"


def cmd_orientations(latencies: Sequence[Fraction], app_class: AppClass = AppClass.T, allow_neutral: bool = False,
                     top: Optional[int] = None, cap: int = 12, workers: int = 1) -> str:
    ranked = best_orientations(latencies, app_class, allow_neutral, cap=cap, workers=workers)
    te = sum(latencies, Fraction(0))
    rows = ranked if top is None else ranked[:top]
    lines = [f"# {len(ranked)} orientations, class {app_class.value}, T_E = {_fmt(te)}"]
    for r in rows:
        note = ""
        if r.tp == 2 * te:
            note = " = 2T_E"
        elif r.tp == te:
            note = " = T_E"
        lines.append(f"{r.symbols} : {_fmt(r.tp)}{note}")
    return "\n".join(lines) + "\n"


def cmd_regimes(pr: Optional[float] = None, n: int = 7, k: int = 1, d: int = 1, nt: int = 1460,
                target: float = 0.99, alpha_target: float = 0.999, alpha: Optional[float] = None,
                epsilon: float = 1e-2) -> str:
    code = CodeParams(n, k, d)
    lines = [_kv("code", str(code)), _kv("majority needed", f"{code.majority_threshold} of {code.n}")]
    code_alpha = prob.alpha_threshold(code, alpha_target)
    if pr is not None:
        link = Link(LinkKind.SENDER_RECEIVER, Fraction(1), pr, nt)
        params = prob.RegimeParams(code=code, alpha=alpha if alpha is not None else code_alpha, epsilon=epsilon)
        lines.append(f"regime: {prob.classify_regime(link, params).value}")
        lines.append(_kv("2n/N_T", f"{prob.cascade_floor(code, nt):.6f}"))
        lines.append(_kv(f"P_s at N_T={nt}", f"{prob.link_cascade_prob(nt, pr, n):.6f}"))
        lines.append(f"required N_T: {prob.required_transmitters(pr, n, target)} (P_s >= {target})")
    # the headline value is quoted at two decimals; the finer grid value follows
    lines.append(f"alpha: {prob.alpha_threshold(code, alpha_target, 2):.2f} ({code_alpha:.4f} at 4 dp, target {alpha_target})")
    for preset in (STEANE, GOLAY):
        a4 = prob.alpha_threshold(preset, alpha_target)
        a2 = prob.alpha_threshold(preset, alpha_target, 2)
        lines.append(_kv(f"alpha {preset}", f"{a4:.4f} ({a2:.2f} at 2 dp)"))
    return "\n".join(lines) + "\n"


def cmd_simulate(spec: PathSpec, bursts: int = 100_000, seed: int = 0, n: int = 7, workers: int = 1,
                 method: str = "auto") -> str:
    code = CodeParams(n)
    res = simulate(SimConfig(spec.path, code, bursts, seed, method), workers=workers)
    analytic = [prob.link_cascade_prob(link.transmitters, link.reception_prob, n) for link in spec.path]
    lines = [
        _kv("bursts", bursts),
        _kv("seed", seed),
        _kv("block size n", n),
        f"{'link':<6}{'analytic P_s':>14}{'empirical P_s':>15}{'stderr':>11}{'mean N_r':>11}{'stderr':>10}{'P_r*N_T':>10}",
    ]
    for j, link in enumerate(spec.path):
        lines.append(
            f"{j + 1:<6}{analytic[j]:>14.6f}{res.per_link_success_rate[j]:>15.6f}{res.per_link_stderr[j]:>11.6f}"
            f"{res.mean_successes[j]:>11.4f}{res.mean_successes_stderr[j]:>10.4f}"
            f"{link.reception_prob * link.transmitters:>10.4f}"
        )
    lines.append(_kv("path analytic P_p", f"{prob.path_cascade_prob(analytic):.6f}"))
    lines.append(_kv("path empirical P_p", f"{res.path_cascade_rate:.6f} +/- {res.path_stderr:.6f}"))
    lines.append(_kv("product of empirical", f"{res.product_of_links:.6f}"))
    return "\n".join(lines) + "\n"


def cmd_diagram(spec: PathSpec, scale: Fraction = Fraction(40), units: str = "") -> str:
    return render_svg(spec.path, spec.schedule(), spec.app_class, scale=scale, units=units)


def _read_spec(args) -> PathSpec:
    with open(args.file, encoding="utf-8") as fh:
        spec = parse_path_file(fh.read())
    if getattr(args, "app_class", None) or getattr(args, "pattern", None):
        spec = spec.with_overrides(getattr(args, "app_class", None), getattr(args, "pattern", None))
    return spec


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rtl", description="Buffer timing analysis for quantum repeater paths.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def file_cmd(name, help_text):
        s = sub.add_parser(name, help=help_text)
        s.add_argument("file", help="path description file")
        s.add_argument("--class", dest="app_class", choices=[c.value for c in AppClass])
        s.add_argument("--pattern", choices=PATTERN_TAGS)
        s.add_argument("--units", default="", help="display label for one latency unit")
        return s

    s = file_cmd("analyze", "evaluate a schedule and print waits and Pareto verdicts")
    s.add_argument("--canonical", action="store_true", help="print the canonical path file and exit")
    s.add_argument("--oracle", action="store_true", help="also run the brute-force grid oracle")
    s.add_argument("--n", type=int, default=7, help="code block size for regime labels")
    s.add_argument("--epsilon", type=float, default=1e-2)

    s = sub.add_parser("orientations", help="rank link orientations by Bell-matched path wait")
    s.add_argument("latencies", nargs="+", type=_fraction)
    s.add_argument("--class", dest="app_class", choices=[c.value for c in AppClass], default="T")
    s.add_argument("--allow-neutral", action="store_true")
    s.add_argument("--top", type=int, default=None)
    s.add_argument("--cap", type=int, default=12)
    s.add_argument("--workers", type=int, default=1)

    s = sub.add_parser("regimes", help="probability regime boundaries")
    s.add_argument("--pr", type=float, default=None)
    s.add_argument("--n", type=int, default=7)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--d", type=int, default=1)
    s.add_argument("--nt", type=int, default=1460)
    s.add_argument("--target", type=float, default=0.99, help="per-link cascade target")
    s.add_argument("--alpha-target", type=float, default=0.999)
    s.add_argument("--alpha", type=float, default=None, help="override the computed alpha")
    s.add_argument("--epsilon", type=float, default=1e-2)

    s = file_cmd("simulate", "Monte Carlo burst simulation")
    s.add_argument("--bursts", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--n", type=int, default=7)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--method", choices=["auto", "bernoulli", "inverse_cdf"], default="auto")

    s = file_cmd("diagram", "write an SVG timing diagram")
    s.add_argument("--out", default="-", help="output file, '-' for stdout")
    s.add_argument("--scale", type=_fraction, default=Fraction(40), help="pixels per latency unit")
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "analyze":
            spec = _read_spec(args)
            if args.canonical:
                out = format_path_file(spec)
            else:
                out = cmd_analyze(spec, args.units, CodeParams(args.n), args.epsilon, args.oracle)
        elif args.cmd == "orientations":
            out = cmd_orientations(args.latencies, AppClass(args.app_class), args.allow_neutral, args.top,
                                   args.cap, args.workers)
        elif args.cmd == "regimes":
            out = cmd_regimes(args.pr, args.n, args.k, args.d, args.nt, args.target, args.alpha_target,
                              args.alpha, args.epsilon)
        elif args.cmd == "simulate":
            out = cmd_simulate(_read_spec(args), args.bursts, args.seed, args.n, args.workers, args.method)
        else:
            svg = cmd_diagram(_read_spec(args), args.scale, args.units)
            if args.out == "-":
                out = svg
            else:
                with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(svg)
                out = ""
    except ParseError as exc:
        print(f"rtl: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"rtl: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OSError) as exc:
        print(f"rtl: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    sys.stdout.write(out)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
