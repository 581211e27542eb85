"""Special functions and semi-infinite quadrature.

Integer-order modified Bessel functions of the second kind, a Mellin-Barnes
evaluator for the G^{3,0}_{1,3} Meijer function, and adaptive quadrature on
``[lower, inf)``.
"""
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate
from scipy.special import loggamma

EULER_GAMMA = 0.57721566490153286061
_SERIES_SWITCH = 2.0
_EPS = 1e-16
_MAXIT = 10000


class AccuracyError(ArithmeticError):
    """A numerical routine did not reach its requested accuracy.

    The best available estimate is attached as ``estimate`` (and ``error``
    when the routine produced one).
    """

    def __init__(self, message, estimate=float("nan"), error=float("nan")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_subdivisions: int = 500

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if int(self.max_subdivisions) < 1:
            raise ValueError("max_subdivisions must be >= 1")


DEFAULT_QUADRATURE = QuadratureSpec()


def pochhammer(a: float, k: int) -> float:
    """Rising factorial ``a (a+1) ... (a+k-1)``; 1 for ``k == 0``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = 1.0
    for i in range(k):
        out *= a + i
    return out


def binomial(n: int, k: int) -> int:
    if n < 0 or k < 0:
        raise ValueError("binomial arguments must be non-negative")
    if k > n:
        raise ValueError(f"binomial({n}, {k}): k exceeds n")
    return math.comb(n, k)


def _k01_series(x):
    # Ascending series, accurate for small x.
    y = 0.25 * x * x
    lx = math.log(0.5 * x)
    i0 = i1 = 0.0
    s0 = s1 = 0.0
    term = 1.0  # y^k / (k!)^2
    term1 = 1.0  # y^k / (k! (k+1)!)
    psi_k1 = -EULER_GAMMA  # digamma(k+1)
    k = 0
    while True:
        psi_k2 = psi_k1 + 1.0 / (k + 1)
        i0 += term
        i1 += term1
        s0 += psi_k1 * term
        s1 += (psi_k1 + psi_k2) * term1
        if term < _EPS * abs(s0 if s0 else 1.0) and term1 < _EPS * abs(i1) and k > 2:
            break
        k += 1
        term *= y / (k * k)
        term1 *= y / (k * (k + 1))
        psi_k1 = psi_k2
        if k > _MAXIT:
            raise AccuracyError("Bessel K series did not converge")
    i1 *= 0.5 * x
    k0 = -lx * i0 + s0
    k1 = 1.0 / x + lx * i1 - 0.25 * x * s1
    return k0, k1


def _k01_cf_scaled(x):
    # Steed's continued fraction (Temme's CF2) for order 0; returns e^x K0, e^x K1.
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, _MAXIT):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _EPS:
            break
    else:
        raise AccuracyError("Bessel K continued fraction did not converge")
    h = a1 * h
    k0 = math.sqrt(math.pi / (2.0 * x)) / s
    k1 = k0 * (x + 0.5 - h) / x
    return k0, k1


def bessel_ke(order: int, x: float) -> float:
    """Exponentially scaled ``exp(x) * K_order(x)`` for integer order."""
    if not x > 0:
        raise ValueError(f"bessel_k requires x > 0, got {x}")
    n = abs(int(order))
    if n != abs(order):
        raise ValueError("only integer orders are supported")
    if x <= _SERIES_SWITCH:
        k0, k1 = _k01_series(x)
        scale = math.exp(x)
        k0 *= scale
        k1 *= scale
    else:
        k0, k1 = _k01_cf_scaled(x)
    if n == 0:
        return k0
    # upward recurrence is stable for K
    for j in range(1, n):
        k0, k1 = k1, k0 + (2.0 * j / x) * k1
    return k1


def bessel_k(order: int, x: float) -> float:
    """Modified Bessel function of the second kind, integer order.

    Negative orders map to positive ones (``K_{-n} = K_n``). Underflows to 0
    for ``x`` beyond roughly 700; use :func:`bessel_ke` there.
    """
    return bessel_ke(order, x) * math.exp(-x)


def log_bessel_k(order: int, x: float) -> float:
    return math.log(bessel_ke(order, x)) - x


def integrate_semi_infinite(
    f: Callable[[float], float],
    lower: float = 0.0,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    breakpoints: Optional[Sequence[float]] = None,
) -> float:
    """Integrate ``f`` over ``[lower, inf)``.

    Each finite piece ``[lower, b1], [b1, b2], ...`` is integrated with
    adaptive Gauss-Kronrod; the final infinite piece is mapped onto (0, 1]
    first. Breakpoints should sit near integrand peaks or kinks.

    Raises
    ------
    AccuracyError
        When a piece fails to converge within ``spec.max_subdivisions``.
        The total best estimate is attached.
    """
    if lower < 0:
        raise ValueError("lower must be >= 0")
    cuts = [lower]
    for b in sorted(breakpoints or ()):
        if np.isfinite(b) and b > cuts[-1]:
            cuts.append(float(b))
    pieces = [(cuts[i], cuts[i + 1]) for i in range(len(cuts) - 1)]
    pieces.append((cuts[-1], np.inf))

    total = 0.0
    total_err = 0.0
    failure = None
    for a, b in pieces:
        out = integrate.quad(
            f, a, b,
            epsabs=spec.abs_tol, epsrel=spec.rel_tol,
            limit=int(spec.max_subdivisions), full_output=1,
        )
        value, err = out[0], out[1]
        total += value
        total_err += err
        if len(out) > 3:
            # roundoff (ier=2) with an error estimate inside tolerance is fine
            tol = max(spec.abs_tol, spec.rel_tol * abs(value))
            if not (np.isfinite(value) and err <= 10 * tol):
                failure = out[3]
    if not np.isfinite(total):
        raise AccuracyError("integral is not finite", total, total_err)
    if failure is not None:
        raise AccuracyError(f"quadrature did not converge: {failure}", total, total_err)
    return total


def log_bessel_tail_integral(q: int, w: int, zeta: float,
                             spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Natural log of :func:`bessel_tail_integral`; safe when the value overflows."""
    if not zeta > 0:
        raise ValueError("zeta must be positive")
    power = q + 2 * w + 2
    order = 1 - q
    # t = u^2, integrand normalized by its value at the peak
    peak = max(1.0, (power - 0.5) / zeta)

    def log_f(u):
        return power * math.log(u) + math.log(bessel_ke(order, zeta * u)) - zeta * u

    ref = log_f(peak)

    def integrand(u):
        return math.exp(log_f(u) - ref)

    width = max(1.0, math.sqrt(power)) / zeta
    cuts = [c for c in (peak - 3 * width, peak, peak + 3 * width, peak + 10 * width) if c > 1.0]
    value = integrate_semi_infinite(integrand, 1.0, spec, cuts)
    if not value > 0:
        raise AccuracyError("tail integral is not positive", value)
    return math.log(2.0 * value) + ref


def bessel_tail_integral(q: int, w: int, zeta: float,
                         spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """``int_1^inf t^((q+1)/2 + w) K_{1-q}(zeta sqrt(t)) dt`` by quadrature.

    Raises :class:`AccuracyError` when the value overflows a float, which
    happens for small ``zeta`` and large ``w``.
    """
    log_value = log_bessel_tail_integral(q, w, zeta, spec)
    if log_value > 709.0:
        raise AccuracyError("tail integral overflows", math.inf)
    return math.exp(log_value)


def meijer_g_1330(z: float, w: int, q: int, step: float = 0.05,
                  contour: float = -1.5) -> float:
    """``G^{3,0}_{1,3}(z | 0; -1, 1+w, q+w)`` by Mellin-Barnes integration.

    The vertical contour ``Re(s) = contour`` must lie left of every pole
    (the leftmost is at ``s = -1``). The integrand decays like
    ``exp(-pi |t|)`` and the trapezoid rule on it converges geometrically in
    ``1/step``.
    """
    if not z > 0:
        raise ValueError("z must be positive")
    if not contour < -1.0:
        raise ValueError("contour must lie left of s = -1")
    if w < 0 or q < 0:
        raise ValueError("w and q must be non-negative")

    logz = math.log(z)

    def log_integrand(t):
        s = contour + 1j * t
        # Gamma(-1-s)/Gamma(-s) = -1/(1+s)
        return (loggamma(1 + w - s) + loggamma(q + w - s)
                - np.log(-1.0 - s) + s * logz)

    # truncate where the integrand is negligible against its value at t = 0
    ref = log_integrand(np.array([0.0])).real[0]
    t_max = 10.0
    while log_integrand(np.array([t_max])).real[0] > ref - 45.0:
        t_max *= 1.5
        if t_max > 1e6:
            raise AccuracyError("Mellin-Barnes contour did not decay")
    t = np.arange(0.0, t_max + step, step)
    vals = np.exp(log_integrand(t)).real
    total = step * (vals.sum() - 0.5 * vals[0])
    out = total / math.pi
    if not np.isfinite(out):
        raise AccuracyError("Mellin-Barnes integral is not finite", out)
    return float(out)


def tail_integral_from_meijer(q: int, w: int, zeta: float, **kw) -> float:
    """Same quantity as :func:`bessel_tail_integral`, via the Meijer G form."""
    z = 0.25 * zeta * zeta
    return 2.0 ** (q + 2 * w) * zeta ** (-(q + 2 * w + 1)) * meijer_g_1330(z, w, q, **kw)
