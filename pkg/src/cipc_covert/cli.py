"""Command-line front end: detection curves, ECT sweeps, MC verification, figures.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import io
import math
import sys as _sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import detection, optimize, outage
from .config import Settings, SweepSpec, load_config
from .errors import ConfigError, CovertError, InfeasibleError
from .model import condition_c_probability, validate
from .montecarlo import (
    Hypothesis,
    McConfig,
    McEstimate,
    simulate_condition_c,
    simulate_detection,
    simulate_detection_curve,
    simulate_miss_detection,
    simulate_outage,
    simulate_xi_bar,
)
from .presets import get_preset, PRESETS

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
Z_LIMIT = 4.0

DETECTION_HEADER = ("tau", "alpha", "beta", "xi", "alpha_mc", "beta_mc", "xi_mc", "mc_stderr")
ECT_HEADER = ("x_db", "q_star", "r_star", "ect", "xi_bar", "bound", "feasible")


def fmt(value) -> str:
    """12 significant digits, locale-free; missing values become empty cells."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return ""
    return f"{value:.12g}"


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) if not isinstance(v, str) else v for v in row) + "\n")
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        _sys.stdout.write(text)


def _parallel_map(fn, items, threads: int):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# -- detection curve ---------------------------------------------------------

def detection_rows(settings: Settings, g_bw: float, sweep: SweepSpec,
                   mc: McConfig | None = None) -> list[tuple]:
    if sweep.variable != "tau":
        raise ConfigError("detection-curve sweeps tau")
    cfg, sys = settings.build()
    taus = sweep.values()
    curve = detection.detection_curve(taus, g_bw, cfg, sys)
    if mc is not None:
        sim = simulate_detection_curve(taus, g_bw, cfg, sys, mc)
        extra = zip(sim.alphas, sim.betas, sim.xis, sim.std_errors)
    else:
        extra = [(None,) * 4] * len(taus)
    return [(t, a, b, x, *e) for t, a, b, x, e in
            zip(taus, curve.alphas, curve.betas, curve.xis, extra)]


def default_tau_sweep(settings: Settings, g_bw: float) -> SweepSpec:
    cfg, sys = settings.build()
    nu = cfg.p_b_max * g_bw + sys.sigma2_w
    return SweepSpec("tau", 0.0, 2.0 * nu, 201, "linear")


# -- ECT sweep ---------------------------------------------------------------

def ect_point(settings: Settings, variable: str, x: float, optimize_rate: bool,
              branch: str = "lowest") -> tuple:
    cfg, sys = settings.with_value(variable, float(x)).build()
    try:
        if cfg.truncated:
            res = optimize.optimize_truncated(cfg, sys, optimize_rate, branch=branch)
        else:
            res = optimize.optimize_conventional(cfg, sys, optimize_rate)
    except InfeasibleError:
        return (x, None, None, 0.0, None, None, False)
    return (x, res.q_star, res.r_used, res.ect, res.xi_bar_at_q_star,
            res.asymptotic_bound, res.feasible)


def ect_rows(settings: Settings, sweep: SweepSpec, optimize_rate: bool = False,
             threads: int = 1, branch: str = "lowest") -> list[tuple]:
    if sweep.variable not in ("p_b_max_db", "p_a_max_db"):
        raise ConfigError("ect-sweep sweeps p_b_max_db or p_a_max_db")
    settings.build()
    return _parallel_map(lambda x: ect_point(settings, sweep.variable, x, optimize_rate, branch),
                         list(sweep.values()), threads)


# -- verification ------------------------------------------------------------

def _checks(analytic: Settings, simulated: Settings, g_bw: float):
    """Yield ``(name, analytic_value, mc_callable)`` for the configured point."""
    cfg, sys = analytic.build()
    scfg, ssys = simulated.build()
    ctx = detection.make_context(g_bw, cfg, sys)
    spread = cfg.p_b_max * g_bw
    tau_mid = sys.sigma2_w + 0.5 * spread
    tau_hi = ctx.nu + 0.5 * spread

    yield ("alpha(tau_mid)", detection.false_alarm(tau_mid, ctx, cfg, sys),
           lambda mc: simulate_detection(tau_mid, Hypothesis.H0, g_bw, scfg, ssys, mc))
    for name, tau in (("beta(tau_mid)", tau_mid), ("xi_star=beta(nu)", ctx.nu),
                      ("beta(tau_high)", tau_hi)):
        yield (name, detection.miss_detection(tau, ctx, cfg, sys),
               lambda mc, tau=tau: simulate_miss_detection(tau, g_bw, scfg, ssys, mc))
    yield ("delta", outage.outage_probability(cfg, sys),
           lambda mc: simulate_outage(scfg, ssys, mc))
    xb = optimize.xi_bar(cfg.q, cfg, sys)
    yield ("xi_bar(hybrid)", xb, lambda mc: simulate_xi_bar(scfg.q, scfg, ssys, mc, "hybrid"))
    yield ("xi_bar(nested)", xb, lambda mc: simulate_xi_bar(scfg.q, scfg, ssys, mc, "nested"))
    if cfg.truncated:
        yield ("p_c", condition_c_probability(cfg, sys),
               lambda mc: simulate_condition_c(scfg, ssys, mc))


def verify_report(settings: Settings, n_draws: int, seed: int, g_bw: float = 1.0,
                  threads: int = 1, perturb: dict[str, float] | None = None) -> tuple[str, bool]:
    """Closed form vs Monte Carlo at one design point.

    ``perturb`` alters the parameters seen by the closed forms only; the
    simulation keeps the configured values.  Each check has its own RNG
    stream, so the report does not depend on ``threads``.
    """
    cfg, sys = settings.build()
    validate(cfg, sys)
    analytic = settings
    for key, value in (perturb or {}).items():
        analytic = analytic.with_value(key, value)
    checks = list(_checks(analytic, settings, g_bw))

    def run(item):
        idx, (_, _, sim) = item
        return sim(McConfig(seed=seed, n_draws=n_draws, stream_id=idx))

    estimates: list[McEstimate] = _parallel_map(run, list(enumerate(checks)), threads)
    lines, passed = [], 0
    for (name, value, _), est in zip(checks, estimates):
        z = est.z_score(value)
        ok = abs(z) <= Z_LIMIT
        passed += ok
        lines.append(f"{'PASS' if ok else 'FAIL'} {name:<18} analytic={fmt(value)} "
                     f"mc={fmt(est.mean)} se={est.std_error:.6g} z={z:+.3f}")
    lines.append(f"verify: {passed}/{len(checks)} checks passed (|z| <= {Z_LIMIT:g}, "
                 f"n={n_draws}, seed={seed})")
    return "\n".join(lines) + "\n", passed == len(checks)


# -- figures -----------------------------------------------------------------

def figure_csv(name: str, mc: McConfig | None = None, threads: int = 1,
               sweep: SweepSpec | None = None) -> str:
    preset = get_preset(name)
    sweep = sweep or preset.sweep
    if preset.kind == "detection":
        (series,) = preset.series
        return to_csv(DETECTION_HEADER, detection_rows(series.settings, preset.g_bw, sweep, mc))
    rows = []
    for series in preset.series:
        for row in ect_rows(series.settings, sweep, series.optimize_rate, threads):
            rows.append((series.label, *row))
    return to_csv(("series",) + ECT_HEADER, rows)


# -- argument parsing ----------------------------------------------------------

def _settings_from(args) -> Settings:
    return load_config(args.config) if args.config else Settings()


def _parse_perturb(items) -> dict[str, float]:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or key not in Settings.keys() or key == "scheme":
            raise ConfigError(f"bad --perturb {item!r}; expected NUMERIC_KEY=VALUE")
        try:
            out[key] = float(value)
        except ValueError:
            raise ConfigError(f"bad --perturb value in {item!r}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cipc-covert", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, sweep=True):
        sp.add_argument("--config", help="key = value config file")
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--seed", type=int, default=42)
        sp.add_argument("--draws", type=int, default=10 ** 6)
        sp.add_argument("--threads", type=int, default=1)
        if sweep:
            sp.add_argument("--sweep", help="VAR:START:STOP:POINTS[:SPACING]")

    dc = sub.add_parser("detection-curve", help="alpha, beta, xi versus threshold")
    common(dc)
    dc.add_argument("--g-bw", type=float, default=1.0, help="Willie's channel gain |h_bw|^2")
    dc.add_argument("--mc", action="store_true", help="add Monte Carlo columns")

    es = sub.add_parser("ect-sweep", help="optimized ECT versus p_b_max_db or p_a_max_db")
    common(es)
    es.add_argument("--optimize-rate", action="store_true", help="optimize R as well as Q")
    es.add_argument("--branch", choices=("lowest", "all"), default="lowest",
                    help="truncated scheme: search the low-Q feasible interval or all of them")

    vf = sub.add_parser("verify", help="closed forms versus Monte Carlo")
    common(vf, sweep=False)
    vf.add_argument("--g-bw", type=float, default=1.0)
    vf.add_argument("--perturb", action="append", metavar="KEY=VALUE",
                    help="alter a parameter on the analytic side only")

    fg = sub.add_parser("figure", help="reproduce a figure dataset as CSV")
    fg.add_argument("name", choices=sorted(PRESETS))
    common(fg)
    fg.add_argument("--mc", action="store_true", help="add MC columns (fig3, fig4)")
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.draws < 1 or args.threads < 1:
            raise ConfigError("--draws and --threads must be positive")
        sweep = SweepSpec.parse(args.sweep) if getattr(args, "sweep", None) else None
        mc = McConfig(seed=args.seed, n_draws=args.draws) if getattr(args, "mc", False) else None
        if args.command == "detection-curve":
            settings = _settings_from(args)
            sweep = sweep or default_tau_sweep(settings, args.g_bw)
            _emit(to_csv(DETECTION_HEADER, detection_rows(settings, args.g_bw, sweep, mc)),
                  args.out)
        elif args.command == "ect-sweep":
            if sweep is None:
                raise ConfigError("ect-sweep needs --sweep p_b_max_db:... or p_a_max_db:...")
            rows = ect_rows(_settings_from(args), sweep, args.optimize_rate, args.threads,
                            args.branch)
            _emit(to_csv(ECT_HEADER, rows), args.out)
        elif args.command == "verify":
            report, ok = verify_report(_settings_from(args), args.draws, args.seed, args.g_bw,
                                       args.threads, _parse_perturb(args.perturb))
            _sys.stdout.write(report)
            if args.out:
                _emit(report, args.out)
            return EXIT_OK if ok else EXIT_VERIFY
        elif args.command == "figure":
            _emit(figure_csv(args.name, mc, args.threads, sweep), args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=_sys.stderr)
        return EXIT_CONFIG
    except (CovertError, ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=_sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
