"""Link gain distributions.

Terrestrial links are Rayleigh (exponential power gain). Satellite links are
shadowed-Rician with integer fading severity ``m``, for which the gain PDF
is a finite mixture of ``x^k exp(-theta1 x)`` terms and the CDF is closed
form. The best relay under partial selection is the maximum of the relay
gains, whose CDF is the product of the per-relay CDFs.
"""
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .specfun import pochhammer

RATE_MERGE_RTOL = 1e-12
CDF_CLAMP_TOL = 1e-12
CDF_BUG_TOL = 1e-9


@dataclass(frozen=True)
class ShadowedRicianParams:
    """Satellite link fading: severity ``m``, half scatter power ``b``, LoS power ``omega``."""

    m: int
    b: float
    omega: float

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m}")
        if not self.b > 0:
            raise ValueError(f"b must be positive, got {self.b}")
        if not self.omega >= 0:
            raise ValueError(f"omega must be non-negative, got {self.omega}")
        object.__setattr__(self, "m", int(self.m))

    @property
    def beta(self) -> float:
        return 1.0 / (2.0 * self.b)

    @property
    def delta(self) -> float:
        return self.beta * self.omega / (2.0 * self.b * self.m + self.omega)

    @property
    def alpha(self) -> float:
        ratio = 2.0 * self.b * self.m / (2.0 * self.b * self.m + self.omega)
        return self.beta * ratio ** self.m

    @property
    def theta1(self) -> float:
        """Decay rate ``beta - delta`` of every mixture term."""
        return self.beta - self.delta

    @property
    def mean(self) -> float:
        return 2.0 * self.b + self.omega

    def zeta(self, k: int) -> float:
        return ((-1) ** k * pochhammer(1 - self.m, k) * self.delta ** k
                / math.factorial(k) ** 2)

    def mixture_weights(self) -> np.ndarray:
        """Weights of the Gamma(k+1, 1/theta1) components, k = 0..m-1."""
        t1 = self.theta1
        return np.array([self.alpha * self.zeta(k) * math.factorial(k) / t1 ** (k + 1)
                         for k in range(self.m)])


HEAVY_SHADOWING = ShadowedRicianParams(1, 0.0635, 0.0007)
AVERAGE_SHADOWING = ShadowedRicianParams(5, 0.25, 0.279)
SHADOWING = {"HS": HEAVY_SHADOWING, "AS": AVERAGE_SHADOWING}


@dataclass(frozen=True)
class TerrestrialRates:
    lambda_rd: float = 1.0
    lambda_re: float = 1.0
    lambda_je: float = 1.0

    def __post_init__(self):
        for name in ("lambda_rd", "lambda_re", "lambda_je"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


class TermSum:
    """``constant + sum_j coeff_j x^power_j exp(-rate_j x)``.

    Terms sharing a power and (to ``RATE_MERGE_RTOL``) a rate are merged on
    construction. Multiplication expands the product symbolically.
    """

    def __init__(self, terms=(), constant=0.0):
        self.constant = float(constant)
        merged = {}
        rates = []
        for coeff, power, rate in terms:
            power = int(power)
            rate = float(rate)
            if power < 0 or rate < 0:
                raise ValueError("powers and rates must be non-negative")
            key_rate = rate
            for r in rates:
                if abs(r - rate) <= RATE_MERGE_RTOL * max(abs(r), abs(rate)):
                    key_rate = r
                    break
            else:
                rates.append(rate)
            key = (power, key_rate)
            merged[key] = merged.get(key, 0.0) + float(coeff)
        # a zero-rate x^0 term is a constant
        zero = merged.pop((0, 0.0), None)
        if zero is not None:
            self.constant += zero
        items = sorted((k, c) for k, c in merged.items() if c != 0.0)
        self.powers = np.array([k[0] for k, _ in items], dtype=int)
        self.rates = np.array([k[1] for k, _ in items], dtype=float)
        self.coeffs = np.array([c for _, c in items], dtype=float)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(zip(self.coeffs.tolist(), self.powers.tolist(), self.rates.tolist()))

    def __repr__(self):
        return f"TermSum(constant={self.constant!r}, n_terms={len(self)})"

    def __mul__(self, other: "TermSum") -> "TermSum":
        a = list(self) + [(self.constant, 0, 0.0)]
        b = list(other) + [(other.constant, 0, 0.0)]
        terms = [(ca * cb, pa + pb, ra + rb) for ca, pa, ra in a for cb, pb, rb in b
                 if ca != 0.0 and cb != 0.0]
        return TermSum(terms)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        xs = x[..., None]
        val = self.constant + np.sum(
            self.coeffs * xs ** self.powers * np.exp(-self.rates * xs), axis=-1)
        return val if val.ndim else float(val)


def sr_pdf(params: ShadowedRicianParams, x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for k in range(params.m):
        out = out + params.zeta(k) * x ** k
    out = params.alpha * out * np.exp(-params.theta1 * x)
    return out if out.ndim else float(out)


def sr_cdf_terms(params: ShadowedRicianParams) -> TermSum:
    """Shadowed-Rician CDF as ``1 - sum c_p x^p exp(-theta1 x)``."""
    t1 = params.theta1
    terms = []
    for k in range(params.m):
        zk = params.zeta(k) * math.factorial(k)
        for p in range(k + 1):
            coeff = -params.alpha * zk / math.factorial(p) * t1 ** (-(k + 1 - p))
            terms.append((coeff, p, t1))
    return TermSum(terms, constant=1.0)


def sr_cdf(params: ShadowedRicianParams, x):
    return sr_cdf_terms(params)(x)


def sr_sample(params: ShadowedRicianParams, rng: np.random.Generator, size=None):
    """Draw ``|h_SR|^2`` from the LoS-plus-scatter construction.

    LoS power is Gamma(m, omega/m) with uniform phase; scatter is circular
    complex Gaussian with total power ``2b``.
    """
    n = 1 if size is None else size
    if params.omega > 0:
        los_power = rng.gamma(params.m, params.omega / params.m, n)
    else:
        los_power = np.zeros(n)
    phase = rng.uniform(0.0, 2.0 * np.pi, n)
    sigma = math.sqrt(params.b)
    re = np.sqrt(los_power) * np.cos(phase) + sigma * rng.standard_normal(n)
    im = np.sqrt(los_power) * np.sin(phase) + sigma * rng.standard_normal(n)
    gain = re * re + im * im
    return float(gain[0]) if size is None else gain


def sr_sample_mixture(params: ShadowedRicianParams, rng: np.random.Generator, size=None):
    """Draw from the integer-m Gamma mixture form of the PDF."""
    n = 1 if size is None else size
    weights = params.mixture_weights()
    weights = weights / weights.sum()
    shapes = rng.choice(params.m, size=n, p=weights) + 1
    gain = rng.gamma(shapes, 1.0 / params.theta1)
    return float(gain[0]) if size is None else gain


def exp_cdf(lam: float, x):
    if not lam > 0:
        raise ValueError("rate must be positive")
    x = np.asarray(x, dtype=float)
    out = -np.expm1(-lam * x)
    return out if out.ndim else float(out)


def exp_sample(lam: float, rng: np.random.Generator, size=None):
    if not lam > 0:
        raise ValueError("rate must be positive")
    n = 1 if size is None else size
    u = rng.random(n)
    gain = -np.log1p(-u) / lam
    return float(gain[0]) if size is None else gain


def best_relay_cdf_terms(all_params: Sequence[ShadowedRicianParams]) -> TermSum:
    """Expanded CDF of the maximum satellite-link gain over all relays."""
    if not all_params:
        raise ValueError("at least one relay is required")
    out = TermSum(constant=1.0)
    for params in all_params:
        out = out * sr_cdf_terms(params)
    return out


def best_relay_cdf_eval(terms: TermSum, x):
    """Evaluate a CDF TermSum, clamping roundoff excursions outside [0, 1]."""
    val = np.asarray(terms(x), dtype=float)
    if np.any(val < -CDF_BUG_TOL) or np.any(val > 1.0 + CDF_BUG_TOL):
        raise ArithmeticError(f"CDF expansion out of range: {val.min()}..{val.max()}")
    val = np.clip(val, 0.0, 1.0)
    return val if val.ndim else float(val)
