"""Outage and intercept probability: closed forms and numeric oracles.

Every closed form works term by term on the expanded best-relay CDF
``F(x) = 1 + sum_j c_j x^p_j exp(-r_j x)``. After the substitution that
removes the threshold shift, each term reduces to

    int_0^inf y^{-q} exp(-a/y - lam y) dy = 2 (a/lam)^((1-q)/2) K_{1-q}(2 sqrt(a lam))

which is evaluated in log space so extreme SNRs neither overflow nor
underflow.
"""
import enum
import math
from typing import Optional

import numpy as np

from .channels import TermSum, best_relay_cdf_terms, sr_cdf
from .linkmodel import AnalysisConstants, NetworkConfig
from .specfun import (DEFAULT_QUADRATURE, AccuracyError, QuadratureSpec, binomial,
                      integrate_semi_infinite, log_bessel_tail_integral, log_bessel_k)

CLAMP_TOL = 1e-9
_LOG_TINY = math.log(1e-300)
SERIES_MAX_ORDER = 200
SERIES_TAIL_TOL = 1e-12


class ExpansionError(ArithmeticError):
    """A closed-form probability fell outside [0, 1] by more than roundoff."""


class SeriesDivergenceError(AccuracyError):
    """The jammer-gain series did not converge within the allowed order."""


class IpMethod(enum.Enum):
    QUADRATURE = "quadrature"
    SERIES = "series"


def _clamp(p: float, what: str) -> float:
    if not np.isfinite(p) or p < -CLAMP_TOL or p > 1.0 + CLAMP_TOL:
        raise ExpansionError(f"{what} = {p!r} is outside [0, 1]")
    return min(max(p, 0.0), 1.0)


def _log_kernel(q: int, a: float, lam: float) -> float:
    """log of int_0^inf y^-q exp(-a/y - lam y) dy."""
    return (math.log(2.0) + 0.5 * (1 - q) * math.log(a / lam)
            + log_bessel_k(1 - q, 2.0 * math.sqrt(a * lam)))


def _signed_sum(pieces):
    return math.fsum(s * math.exp(v) for s, v in pieces)


def _tail_sum(terms: TermSum, c0: float, lam: float, gamma: float, psi: float,
              v2: float, shift: float, width: float) -> float:
    """sum over terms of c * int_shift^inf [F-term at the mapped argument] lam e^{-lam y} dy.

    ``width`` is the constant that multiplies 1/z after shifting by the threshold,
    ``shift`` the threshold itself.
    """
    pieces = []
    log_lam = math.log(lam)
    log_gp = math.log(gamma / psi)
    log_v2 = math.log(v2)
    log_w = math.log(width)
    for c, p, r in terms:
        base = log_lam + p * log_gp - r * gamma * v2 / psi - lam * shift
        a = r * gamma * width / psi
        sign = 1.0 if c > 0 else -1.0
        base += math.log(abs(c))
        for q in range(p + 1):
            log_mag = (base + math.log(binomial(p, q)) + (p - q) * log_v2 + q * log_w
                       + _log_kernel(q, a, lam))
            if log_mag > _LOG_TINY:
                pieces.append((sign, log_mag))
    # constant part of F integrates against the exponential tail mass
    tail = (c0 - 1.0) * math.exp(-lam * shift)
    return tail + _signed_sum(pieces)


def outage_probability(config: NetworkConfig, terms: Optional[TermSum] = None) -> float:
    """Closed-form probability that the destination SNR misses the threshold."""
    k = AnalysisConstants.from_config(config)
    if k.gamma_th == 0.0:
        return 0.0
    if terms is None:
        terms = best_relay_cdf_terms(config.relays)
    lam = config.rates.lambda_rd
    op = 1.0 + _tail_sum(terms, terms.constant, lam, k.gamma_th, k.psi, k.vartheta2,
                         k.gamma_tilde_th, k.xi_tilde)
    return _clamp(op, "OP")


def _best_cdf_direct(config):
    def F(x):
        out = 1.0
        for params in config.relays:
            out *= sr_cdf(params, x)
        return out
    return F


def op_numeric_oracle(config: NetworkConfig,
                      spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Outage probability by direct quadrature of the conditional event.

    Uses the per-relay CDF product and no Bessel identities.
    """
    k = AnalysisConstants.from_config(config)
    g = k.gamma_th
    if g == 0.0:
        return 0.0
    lam = config.rates.lambda_rd
    F = _best_cdf_direct(config)
    x0 = k.gamma_tilde_th

    def integrand(x):
        arg = g * (x * k.phi * k.vartheta2 + k.xi) / (k.psi * (k.phi * x - g * k.vartheta4))
        return (1.0 - F(arg)) * lam * math.exp(-lam * x)

    # features where the mapped argument crosses the satellite-gain scale
    scale = g * k.xi_tilde / k.psi
    cuts = [x0 + scale * f for f in (0.01, 0.1, 1.0, 10.0)] + [x0 + 1.0 / lam, x0 + 10.0 / lam]
    # probability mass that still decodes
    miss = integrate_semi_infinite(integrand, x0, spec, cuts)
    return _clamp(1.0 - miss, "OP oracle")


def _jammer_shift(k: AnalysisConstants, x: float):
    delta = k.gamma_hat_th + k.gamma_th * k.theta * x / k.phi
    omega = (x * k.theta * k.vartheta2 + k.lambda_) / k.phi
    return delta, delta * k.vartheta2 + omega


def _intercept_given_jammer(config, k, terms, x) -> float:
    lam = config.rates.lambda_re
    delta, v6 = _jammer_shift(k, x)
    return -_tail_sum(terms, terms.constant, lam, k.gamma_th, k.psi, k.vartheta2, delta, v6)


def q_given_jammer(config: NetworkConfig, x: float,
                   terms: Optional[TermSum] = None) -> float:
    """Probability the eavesdropper misses the threshold given jammer gain ``x``."""
    if x < 0:
        raise ValueError("jammer gain must be non-negative")
    k = AnalysisConstants.from_config(config)
    if k.gamma_th == 0.0:
        return 0.0
    if terms is None:
        terms = best_relay_cdf_terms(config.relays)
    return _clamp(1.0 - _intercept_given_jammer(config, k, terms, x), "Q")


def intercept_probability(config: NetworkConfig, method=IpMethod.QUADRATURE,
                          spec: QuadratureSpec = DEFAULT_QUADRATURE,
                          max_order: int = SERIES_MAX_ORDER,
                          tail_tol: float = SERIES_TAIL_TOL) -> float:
    """Probability that the eavesdropper SNR reaches the threshold.

    ``QUADRATURE`` integrates the closed-form conditional miss probability
    over the jammer gain. ``SERIES`` expands the jammer-gain exponential in
    a power series instead; that series is only asymptotic, so it raises
    :class:`SeriesDivergenceError` whenever its terms stop shrinking before
    reaching ``tail_tol``.
    """
    method = IpMethod(method)
    k = AnalysisConstants.from_config(config)
    if k.gamma_th == 0.0:
        return 1.0
    terms = best_relay_cdf_terms(config.relays)
    if method is IpMethod.SERIES:
        return _intercept_series(config, k, terms, max_order, tail_tol, spec)

    lam_je = config.rates.lambda_je

    def integrand(x):
        return _intercept_given_jammer(config, k, terms, x) * lam_je * math.exp(-lam_je * x)

    cuts = [f / lam_je for f in (0.5, 2.0, 8.0, 30.0)]
    ip = integrate_semi_infinite(integrand, 0.0, spec, cuts)
    return _clamp(ip, "IP")


def _w_series(q: int, zeta: float, a: float, max_order: int, tail_tol: float,
              spec: QuadratureSpec) -> float:
    """sum_w (-a)^w / w! * int_1^inf t^((q+1)/2+w) K_{1-q}(zeta sqrt t) dt."""
    total = 0.0
    log_a = math.log(a) if a > 0 else -math.inf
    smallest = largest = 0.0
    for w in range(max_order + 1):
        log_mag = log_bessel_tail_integral(q, w, zeta, spec)
        if w:
            log_mag += w * log_a - math.lgamma(w + 1)
        if log_mag > 709.0:
            break
        mag = math.exp(log_mag)
        total += -mag if w % 2 else mag
        largest = max(largest, mag)
        if mag <= tail_tol * abs(total):
            if largest * 1e-16 > tail_tol * abs(total):
                break  # alternating cancellation ate the requested accuracy
            return total
        smallest = mag if w == 0 else min(smallest, mag)
        if w > a and mag > 1e3 * smallest:
            break  # past their minimum the terms only grow: asymptotic series
    raise SeriesDivergenceError(
        f"jammer-gain series did not converge (q={q}, zeta={zeta:.4g}, a={a:.4g})",
        estimate=total)


def _intercept_series(config, k, terms, max_order, tail_tol, spec) -> float:
    lam_re, lam_je = config.rates.lambda_re, config.rates.lambda_je
    g, psi, v2 = k.gamma_th, k.psi, k.vartheta2
    lt = k.lambda_tilde
    # the conditional shift grows linearly in the jammer gain with this slope
    slope = v2 * k.theta * (g + 1.0) / k.phi
    rate = lam_je + g * lam_re * k.theta / k.phi
    lam10 = rate / slope
    a = lam10 * lt
    cache = {}
    pieces = []
    for c, p, r in terms:
        zeta = 2.0 * math.sqrt(r * g * lam_re * lt / psi)
        base = (math.log(abs(c)) + math.log(lam_re) + p * math.log(g / psi)
                - r * g * v2 / psi - lam_re * k.gamma_hat_th
                + math.log(2.0 * lam_je * lt / slope) + a)
        sign = -1.0 if c > 0 else 1.0
        for q in range(p + 1):
            key = (r, q)
            if key not in cache:
                cache[key] = _w_series(q, zeta, a, max_order, tail_tol, spec)
            s = cache[key]
            if s == 0.0:
                continue
            log_mag = (base + math.log(binomial(p, q)) + (p - q) * math.log(v2)
                       + 0.5 * (1 - q) * math.log(r * g / (psi * lam_re))
                       + 0.5 * (q + 1) * math.log(lt) + math.log(abs(s)))
            pieces.append((sign * math.copysign(1.0, s), log_mag))
    ip = (1.0 - terms.constant) * math.exp(-lam_re * k.gamma_hat_th) * lam_je / rate
    ip += _signed_sum(pieces)
    return _clamp(ip, "IP series")


def ip_numeric_oracle(config: NetworkConfig,
                      spec: QuadratureSpec = QuadratureSpec(rel_tol=1e-9, abs_tol=1e-11)) -> float:
    """Intercept probability by nested quadrature, without Bessel identities."""
    k = AnalysisConstants.from_config(config)
    g = k.gamma_th
    if g == 0.0:
        return 1.0
    lam_re, lam_je = config.rates.lambda_re, config.rates.lambda_je
    F = _best_cdf_direct(config)

    def hit_given_jammer(x):
        delta, v6 = _jammer_shift(k, x)
        omega = v6 - delta * k.vartheta2

        def inner(y):
            arg = g * (y * k.vartheta2 + omega) / (k.psi * (y - delta))
            return (1.0 - F(arg)) * lam_re * math.exp(-lam_re * y)

        scale = g * v6 / k.psi
        cuts = [delta + scale * f for f in (0.01, 0.1, 1.0, 10.0)]
        cuts += [delta + 1.0 / lam_re, delta + 10.0 / lam_re]
        return integrate_semi_infinite(inner, delta, spec, cuts)

    def outer(x):
        return hit_given_jammer(x) * lam_je * math.exp(-lam_je * x)

    cuts = [f / lam_je for f in (0.5, 2.0, 8.0, 30.0)]
    return _clamp(integrate_semi_infinite(outer, 0.0, spec, cuts), "IP oracle")
