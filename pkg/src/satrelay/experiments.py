"""Scenario presets, config files, sweeps and figure definitions."""
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from . import analysis, montecarlo
from .channels import SHADOWING, ShadowedRicianParams, TerrestrialRates
from .linkmodel import CeeProfile, NetworkConfig, PowerProfile
from .specfun import AccuracyError

METHODS = ("closed_form", "series", "montecarlo")
SWEEP_VARIABLES = ("psi_db", "phi_db", "theta_db", "cee", "c_th")
RECORD_FIELDS = ("op_closed", "ip_closed", "ip_series", "op_mc", "ip_mc",
                 "op_mc_stderr", "ip_mc_stderr", "error")

# (N, CEE std, fixed power overrides); Psi defaults to 20 dB
_PRESETS = {
    "PM1": (1, 0.25, {"phi_db": 20.0}),
    "PM2": (1, 0.0, {"phi_db": 20.0}),
    "PM3": (3, 0.25, {"phi_db": 20.0}),
    "PM4": (3, 0.0, {"phi_db": 20.0}),
    "PM5": (3, 0.25, {"psi_db": 20.0, "phi_db": 5.0}),
    "PM6": (3, 0.25, {"psi_db": 20.0, "phi_db": 10.0}),
}
PRESET_NAMES = tuple(f"{pm}-{sh}" for pm in _PRESETS for sh in SHADOWING)


def preset_config(name: str) -> NetworkConfig:
    """Expand e.g. ``"PM3-AS"`` into a full scenario."""
    try:
        pm, shadowing = name.upper().split("-")
        n, mu, power = _PRESETS[pm]
        params = SHADOWING[shadowing]
    except (ValueError, KeyError):
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")
    power = {"psi_db": 20.0, "theta_db": 1.0, **power}
    return NetworkConfig(relays=(params,) * n, cee=CeeProfile.uniform(mu),
                         power=PowerProfile(**power), c_th=1.0)


def config_to_dict(config: NetworkConfig) -> dict:
    return {
        "relays": [asdict(p) for p in config.relays],
        "rates": asdict(config.rates),
        "cee": asdict(config.cee),
        "power": asdict(config.power),
        "c_th": config.c_th,
    }


def _relay(item):
    if isinstance(item, str):
        return SHADOWING[item.upper()]
    return ShadowedRicianParams(**item)


def config_from_dict(data: dict, base: Optional[NetworkConfig] = None) -> NetworkConfig:
    """Build a config; keys missing from ``data`` come from ``base``.

    Relays may be given as ``{"m":..,"b":..,"omega":..}`` objects or as the
    strings ``"HS"`` / ``"AS"``.
    """
    unknown = set(data) - {"relays", "rates", "cee", "power", "c_th"}
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if base is None:
        if "relays" not in data:
            raise ValueError("config needs 'relays' unless a preset is given")
        base = NetworkConfig(relays=[_relay(r) for r in data["relays"]])
    relays = [_relay(r) for r in data["relays"]] if "relays" in data else base.relays
    return NetworkConfig(
        relays=relays,
        rates=TerrestrialRates(**{**asdict(base.rates), **data.get("rates", {})}),
        cee=CeeProfile(**{**asdict(base.cee), **data.get("cee", {})}),
        power=PowerProfile(**{**asdict(base.power), **data.get("power", {})}),
        c_th=float(data.get("c_th", base.c_th)),
    )


def load_config(path, base: Optional[NetworkConfig] = None) -> NetworkConfig:
    with open(path) as fh:
        return config_from_dict(json.load(fh), base)


def save_config(config: NetworkConfig, path) -> None:
    with open(path, "w") as fh:
        json.dump(config_to_dict(config), fh, indent=2, sort_keys=True)
        fh.write("\n")


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    step: float
    methods: Sequence[str] = ("closed_form",)
    trials: int = 100_000
    seed: int = 1

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ValueError(f"sweep variable must be one of {SWEEP_VARIABLES}")
        if not self.step > 0:
            raise ValueError("step must be positive")
        if self.start > self.stop:
            raise ValueError("start must not exceed stop")
        bad = set(self.methods) - set(METHODS)
        if bad:
            raise ValueError(f"unknown methods: {sorted(bad)}")

    def grid(self) -> List[float]:
        n = int(np.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [round(self.start + i * self.step, 12) for i in range(n)]


def run_point(config: NetworkConfig, methods: Iterable[str] = ("closed_form",),
              trials: int = 100_000, seed: int = 1, workers: int = 1) -> Dict[str, object]:
    """Evaluate the requested methods at one scenario.

    Failures of one method are recorded in ``error`` and do not stop the others.
    """
    methods = set(methods)
    rec = {k: None for k in RECORD_FIELDS}
    errors = []

    def attempt(key, fn):
        try:
            rec[key] = fn()
        except (AccuracyError, ArithmeticError) as exc:
            errors.append(f"{key}: {exc}")

    if "closed_form" in methods:
        attempt("op_closed", lambda: analysis.outage_probability(config))
        attempt("ip_closed", lambda: analysis.intercept_probability(config))
    if "series" in methods:
        attempt("ip_series", lambda: analysis.intercept_probability(
            config, analysis.IpMethod.SERIES))
    if "montecarlo" in methods:
        op, ip = montecarlo.estimate(config, trials, seed, workers=workers)
        rec.update(op_mc=op.value, ip_mc=ip.value,
                   op_mc_stderr=op.stderr, ip_mc_stderr=ip.stderr)
    rec["error"] = "; ".join(errors) or None
    return rec


def _sweep_cell(args):
    config, variable, value, methods, trials, seed = args
    cfg = config.with_(**{variable: value})
    return run_point(cfg, methods, trials, seed)


def run_sweep(spec: SweepSpec, config: NetworkConfig, workers: int = 1) -> List[dict]:
    """One record per grid point, in grid order."""
    grid = spec.grid()
    cells = [(config, spec.variable, v, tuple(spec.methods), spec.trials, spec.seed)
             for v in grid]
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            recs = list(pool.map(_sweep_cell, cells))
    else:
        recs = [_sweep_cell(c) for c in cells]
    return [{spec.variable: v, **r} for v, r in zip(grid, recs)]


def run_tradeoff(presets: Sequence[str], spec: SweepSpec, workers: int = 1) -> List[dict]:
    """(IP, OP) pairs per preset along a sweep, for security-reliability curves."""
    rows = []
    for name in presets:
        for rec in run_sweep(spec, preset_config(name), workers):
            rows.append({"preset": name, **rec})
    return rows


def op_at_ip(rows: Sequence[dict], target_ip: float, op_key="op_closed", ip_key="ip_closed"):
    """Linearly interpolate OP where the traced IP crosses ``target_ip``."""
    pts = [(r[ip_key], r[op_key]) for r in rows if r[ip_key] is not None and r[op_key] is not None]
    for (i0, o0), (i1, o1) in zip(pts, pts[1:]):
        if (i0 - target_ip) * (i1 - target_ip) <= 0 and i0 != i1:
            return o0 + (o1 - o0) * (target_ip - i0) / (i1 - i0)
    return None


_HS_PM = ["PM1-HS", "PM2-HS", "PM3-HS", "PM4-HS"]
_AS_PM = ["PM1-AS", "PM2-AS", "PM3-AS", "PM4-AS"]
_PM56 = ["PM5-HS", "PM5-AS", "PM6-HS", "PM6-AS"]

# figure id -> (presets, sweep variable, start, stop, step)
FIGURES = {
    "fig2": (_HS_PM, "psi_db", 0.0, 50.0, 5.0),
    "fig3": (_HS_PM, "psi_db", 0.0, 50.0, 5.0),
    "fig4": (_AS_PM, "psi_db", 0.0, 50.0, 5.0),
    "fig5": (_AS_PM, "psi_db", 0.0, 50.0, 5.0),
    "fig6": (_PM56, "cee", 0.0, 0.5, 0.05),
    "fig7": (_PM56, "cee", 0.0, 0.5, 0.05),
    "fig8": (["PM5-HS", "PM6-HS"], "psi_db", 0.0, 50.0, 2.5),
    "fig9": (["PM5-AS", "PM6-AS"], "psi_db", 0.0, 50.0, 2.5),
}


def reproduce(figure: str, methods=("closed_form", "montecarlo"), trials: int = 20_000,
              seed: int = 1, workers: int = 1) -> List[dict]:
    if figure not in FIGURES:
        raise ValueError(f"unknown figure {figure!r}; choose from {', '.join(FIGURES)}")
    presets, variable, start, stop, step = FIGURES[figure]
    spec = SweepSpec(variable, start, stop, step, tuple(methods), trials, seed)
    return run_tradeoff(presets, spec, workers)
