"""Command line interface.

Scenario precedence, lowest to highest: built-in defaults, ``--preset``,
``--config`` file, explicit flags.
"""
import argparse
import csv
import io
import sys
from typing import List, Optional, Sequence

from . import analysis, channels, specfun
from .experiments import (FIGURES, METHODS, PRESET_NAMES, RECORD_FIELDS, SWEEP_VARIABLES,
                          SweepSpec, load_config, preset_config, reproduce, run_point,
                          run_sweep, run_tradeoff)
from .linkmodel import NetworkConfig

_OVERRIDES = ("psi_db", "phi_db", "theta_db", "cee", "c_th",
              "lambda_rd", "lambda_re", "lambda_je")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return "%.10g" % v
    return str(v)


def format_csv(rows: Sequence[dict], leading: Sequence[str] = ()) -> str:
    fields = list(leading) + list(RECORD_FIELDS)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([_fmt(row.get(f)) for f in fields])
    return buf.getvalue()


def _methods(text: str) -> List[str]:
    out = [m.strip() for m in text.split(",") if m.strip()]
    bad = [m for m in out if m not in METHODS]
    if bad or not out:
        raise argparse.ArgumentTypeError(
            f"methods must be a comma list drawn from {', '.join(METHODS)}")
    return out


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _common(p: argparse.ArgumentParser, default_methods: str = "closed_form"):
    p.add_argument("--preset", help=f"one of {', '.join(PRESET_NAMES)}")
    p.add_argument("--config", help="JSON scenario file; keys override the preset")
    p.add_argument("--seed", type=_seed, default=1)
    p.add_argument("--trials", type=_positive_int, default=100_000)
    p.add_argument("--methods", type=_methods, default=_methods(default_methods))
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--out", help="write CSV here instead of stdout")
    for name in _OVERRIDES:
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=float)


def _sweep_args(p: argparse.ArgumentParser, variable: Optional[str] = None):
    p.add_argument("--variable", choices=SWEEP_VARIABLES, default=variable,
                   required=variable is None)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--step", type=float, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="satrelay",
        description="Outage and intercept probability of a jammer-assisted "
                    "satellite-terrestrial AF relay network.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="evaluate one scenario")
    _common(p)

    p = sub.add_parser("sweep", help="sweep one parameter, CSV output")
    _common(p)
    _sweep_args(p)

    p = sub.add_parser("tradeoff", help="(IP, OP) pairs for several presets")
    _common(p)
    _sweep_args(p, variable="psi_db")
    p.add_argument("--presets", default="PM5-HS,PM6-HS",
                   help="comma list of presets (default PM5-HS,PM6-HS)")

    p = sub.add_parser("reproduce", help="CSV data behind a figure")
    p.add_argument("figure", choices=sorted(FIGURES))
    p.add_argument("--seed", type=_seed, default=1)
    p.add_argument("--trials", type=_positive_int, default=20_000)
    p.add_argument("--methods", type=_methods, default=_methods("closed_form,montecarlo"))
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--out")

    sub.add_parser("selftest", help="quick internal consistency checks")
    return parser


def resolve_config(args) -> NetworkConfig:
    base = preset_config(args.preset) if args.preset else None
    if args.config:
        cfg = load_config(args.config, base)
    elif base is not None:
        cfg = base
    else:
        cfg = preset_config("PM1-HS")
    changes = {k: getattr(args, k) for k in _OVERRIDES if getattr(args, k, None) is not None}
    return cfg.with_(**changes) if changes else cfg


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_point(args) -> int:
    cfg = resolve_config(args)
    rec = run_point(cfg, args.methods, args.trials, args.seed, args.workers)
    width = max(len(f) for f in RECORD_FIELDS)
    for f in RECORD_FIELDS:
        if rec[f] is not None:
            print(f"{f:<{width}}  {_fmt(rec[f])}", file=sys.stderr if not args.out else sys.stdout)
    _emit(format_csv([rec]), args.out)
    return 0


def _spec(args) -> SweepSpec:
    return SweepSpec(args.variable, args.start, args.stop, args.step,
                     tuple(args.methods), args.trials, args.seed)


def _cmd_sweep(args) -> int:
    spec = _spec(args)
    rows = run_sweep(spec, resolve_config(args), args.workers)
    _emit(format_csv(rows, [spec.variable]), args.out)
    return 0


def _cmd_tradeoff(args) -> int:
    spec = _spec(args)
    presets = [s.strip() for s in args.presets.split(",") if s.strip()]
    for name in presets:
        preset_config(name)  # validate before any work
    rows = run_tradeoff(presets, spec, args.workers)
    _emit(format_csv(rows, ["preset", spec.variable]), args.out)
    return 0


def _cmd_reproduce(args) -> int:
    rows = reproduce(args.figure, args.methods, args.trials, args.seed, args.workers)
    variable = FIGURES[args.figure][1]
    _emit(format_csv(rows, ["preset", variable]), args.out)
    return 0


def selftest() -> List[tuple]:
    """Fast consistency checks; returns ``(name, ok, detail)`` tuples."""
    results = []

    def check(name, fn):
        try:
            ok, detail = fn()
        except Exception as exc:  # report, do not crash the selftest
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))

    def bessel():
        import scipy.special as sc
        err = max(abs(specfun.bessel_k(n, x) / sc.kv(n, x) - 1)
                  for n in range(4) for x in (0.05, 1.0, 7.5, 40.0))
        return err < 1e-12, f"max rel err {err:.2e}"

    def meijer():
        a = specfun.bessel_tail_integral(1, 2, 1.3)
        b = specfun.tail_integral_from_meijer(1, 2, 1.3)
        return abs(a / b - 1) < 1e-6, f"{a:.10g} vs {b:.10g}"

    def termsum():
        import numpy as np
        relays = (channels.HEAVY_SHADOWING, channels.AVERAGE_SHADOWING)
        x = np.linspace(0.0, 5.0, 11)
        err = np.max(np.abs(channels.best_relay_cdf_terms(relays)(x)
                            - channels.sr_cdf(relays[0], x) * channels.sr_cdf(relays[1], x)))
        return err < 1e-12, f"max err {err:.2e}"

    def op_oracle():
        cfg = preset_config("PM3-AS")
        a = analysis.outage_probability(cfg)
        b = analysis.op_numeric_oracle(cfg)
        return abs(a - b) < 1e-7, f"{a:.10g} vs {b:.10g}"

    def ip_oracle():
        cfg = preset_config("PM1-HS").with_(psi_db=10.0)
        a = analysis.intercept_probability(cfg)
        b = analysis.ip_numeric_oracle(cfg)
        return abs(a - b) < 1e-7, f"{a:.10g} vs {b:.10g}"

    def mc():
        from . import montecarlo
        cfg = preset_config("PM1-HS")
        op, ip = montecarlo.estimate(cfg, 100_000, 7)
        zo = (op.value - analysis.outage_probability(cfg)) / op.stderr
        zi = (ip.value - analysis.intercept_probability(cfg)) / ip.stderr
        return max(abs(zo), abs(zi)) < 4.0, f"z = {zo:+.2f}, {zi:+.2f}"

    check("bessel_k vs reference", bessel)
    check("meijer G vs tail integral", meijer)
    check("best-relay TermSum", termsum)
    check("OP closed form vs quadrature", op_oracle)
    check("IP closed form vs nested quadrature", ip_oracle)
    check("Monte Carlo vs closed form", mc)
    return results


def _cmd_selftest(args) -> int:
    results = selftest()
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return 0 if all(ok for _, ok, _ in results) else 1


_COMMANDS = {
    "point": _cmd_point,
    "sweep": _cmd_sweep,
    "tradeoff": _cmd_tradeoff,
    "reproduce": _cmd_reproduce,
    "selftest": _cmd_selftest,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        parser.error(str(exc))  # exits with status 2


if __name__ == "__main__":
    sys.exit(main())
