"""Special functions used by the posterior formulas.

Everything here works in the log domain: the posterior order ``nu`` grows
linearly with the number of observed years (or losses, or experts), and
``K_nu(z)`` over- or underflows double precision long before the values of
interest stop being meaningful.

Two regimes are used for ``log K_nu(z)``:

* ``|nu| <= DEBYE_ORDER``: ``K_mu`` and ``K_{mu+1}`` for ``|mu| <= 1/2`` are
  taken from :func:`scipy.special.kve`, then the order is raised by the
  three-term recurrence carried as a product of ratios (forward recurrence is
  stable for ``K``).
* ``|nu| > DEBYE_ORDER``: the uniform (Debye) large-order expansion, valid
  uniformly in ``z``.

The regularized incomplete gamma function is implemented with the usual
series / continued-fraction split.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "DEBYE_ORDER",
    "MIN_ARGUMENT",
    "log_bessel_k",
    "bessel_k",
    "bessel_ratio",
    "log_bessel_ratio",
    "regularized_gamma_p",
    "regularized_gamma_q",
]

#: orders above this use the uniform asymptotic expansion
DEBYE_ORDER = 50.0
#: arguments below this are rejected rather than extrapolated
MIN_ARGUMENT = 1e-12

_N_DEBYE_TERMS = 14
_HALF_LOG_PI_OVER_2 = 0.5 * math.log(math.pi / 2.0)


def _check_args(order: float, argument: float) -> tuple[float, float]:
    order = float(order)
    argument = float(argument)
    if not math.isfinite(order):
        raise ValueError(f"Bessel order must be finite, got {order}")
    if not math.isfinite(argument) or argument <= 0.0:
        raise ValueError(f"Bessel argument must be finite and > 0, got {argument}")
    if argument < MIN_ARGUMENT:
        raise ValueError(
            f"Bessel argument {argument} below supported minimum {MIN_ARGUMENT}"
        )
    return order, argument


# ---------------------------------------------------------------------------
# Debye polynomials u_k(t)
# ---------------------------------------------------------------------------


def _poly_mul(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _poly_add(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    n = max(len(p), len(q))
    p = p + [Fraction(0)] * (n - len(p))
    q = q + [Fraction(0)] * (n - len(q))
    return [a + b for a, b in zip(p, q)]


@lru_cache(maxsize=None)
def _debye_polynomials(n_terms: int) -> tuple[tuple[float, ...], ...]:
    # u_{k+1}(t) = t^2 (1 - t^2) u_k'(t) / 2 + (1/8) int_0^t (1 - 5 s^2) u_k(s) ds
    polys = [[Fraction(1)]]
    half_t2_1mt2 = [Fraction(0), Fraction(0), Fraction(1, 2), Fraction(0), Fraction(-1, 2)]
    one_m5s2 = [Fraction(1), Fraction(0), Fraction(-5)]
    for _ in range(n_terms - 1):
        u = polys[-1]
        du = [i * c for i, c in enumerate(u)][1:] or [Fraction(0)]
        first = _poly_mul(half_t2_1mt2, du)
        integrand = _poly_mul(one_m5s2, u)
        second = [Fraction(0)] + [c / (i + 1) / 8 for i, c in enumerate(integrand)]
        polys.append(_poly_add(first, second))
    return tuple(tuple(float(c) for c in p) for p in polys)


def _horner(coeffs: tuple[float, ...], t: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def _debye_log_series(order: float, t: float) -> float:
    """log of sum_k (-1)^k u_k(t) / order^k."""
    total = 0.0
    scale = 1.0
    for k, coeffs in enumerate(_debye_polynomials(_N_DEBYE_TERMS)):
        term = scale * _horner(coeffs, t)
        total += -term if k % 2 else term
        scale /= order
    return math.log(total)


def _log_k_debye(order: float, z: float) -> float:
    r = math.hypot(order, z)
    t = order / r
    return (
        _HALF_LOG_PI_OVER_2
        - 0.5 * math.log(r)
        - r
        + order * math.asinh(order / z)
        + _debye_log_series(order, t)
    )


def _log_ratio_debye(order: float, step: float, z: float) -> float:
    """log K_{order+step}(z) - log K_order(z) for step = +-1, both orders large.

    The leading terms are differenced analytically so that no digits are lost
    when ``log K`` itself is of order 1e8.
    """
    b, c = order, order + step
    rb, rc = math.hypot(b, z), math.hypot(c, z)
    d2 = step * (b + c)  # c^2 - b^2
    prefactor = -0.25 * math.log1p(d2 / (rb * rb))
    root = -d2 / (rb + rc)
    xb, xc = b / z, c / z
    sb, sc = math.hypot(1.0, xb), math.hypot(1.0, xc)
    # asinh(xc) - asinh(xb) without cancellation
    d_asinh = math.log1p((step / z + d2 / (z * z) / (sb + sc)) / (xb + sb))
    power = step * math.asinh(xc) + b * d_asinh
    series = _debye_log_series(c, c / rc) - _debye_log_series(b, b / rb)
    return prefactor + root + power + series


# ---------------------------------------------------------------------------
# Recurrence regime
# ---------------------------------------------------------------------------


def _log_k_and_ratio_small(order: float, z: float) -> tuple[float, float]:
    """(log K_order(z), K_{order+1}(z)/K_order(z)) for 0 <= order <= DEBYE_ORDER + 1."""
    from scipy.special import kve  # deferred: keeps CLI start-up fast

    n = int(math.floor(order + 0.5))
    mu = order - n
    if abs(mu) < 1e-200:
        mu = 0.0  # kve returns nan for subnormal orders; K is flat in the order here
    k0 = float(kve(mu, z))
    k1 = float(kve(mu + 1.0, z))
    log_k = math.log(k0) - z
    ratio = k1 / k0
    two_over_z = 2.0 / z
    for j in range(1, n + 1):
        log_k += math.log(ratio)
        ratio = 1.0 / ratio + (mu + j) * two_over_z
    return log_k, ratio


# ---------------------------------------------------------------------------
# Public surface
# ---------------------------------------------------------------------------


def log_bessel_k(order: float, argument: float) -> float:
    """Natural log of the modified Bessel function of the third kind.

    Parameters
    ----------
    order : float
        Order ``nu``; any finite real. ``K_{-nu} = K_nu``.
    argument : float
        Argument ``z``, with ``z >= MIN_ARGUMENT``.

    Returns
    -------
    float
        ``log K_nu(z)``.

    Raises
    ------
    ValueError
        On non-finite order, or a non-finite / non-positive / too small
        argument.
    """
    order, z = _check_args(order, argument)
    order = abs(order)
    if order > DEBYE_ORDER:
        return _log_k_debye(order, z)
    return _log_k_and_ratio_small(order, z)[0]


def bessel_k(order: float, argument: float) -> float:
    """``K_nu(z)``; may return 0.0 or inf where the log is out of range."""
    with_log = log_bessel_k(order, argument)
    if with_log > 709.0:
        return math.inf
    return math.exp(with_log)


def log_bessel_ratio(order: float, argument: float) -> float:
    """``log R_nu(z)`` with ``R_nu(z) = K_{nu+1}(z) / K_nu(z)``."""
    order, z = _check_args(order, argument)
    if order >= 0.0:
        if order > DEBYE_ORDER:
            return _log_ratio_debye(order, 1.0, z)
        return math.log(_log_k_and_ratio_small(order, z)[1])
    if order <= -1.0:
        # K_{nu+1}/K_nu = K_{|nu|-1}/K_{|nu|}
        b = -order
        if b - 1.0 > DEBYE_ORDER:
            return _log_ratio_debye(b, -1.0, z)
        return -math.log(_log_k_and_ratio_small(b - 1.0, z)[1])
    # -1 < nu < 0: both orders lie in [0, 1]
    return log_bessel_k(order + 1.0, z) - log_bessel_k(-order, z)


def bessel_ratio(order: float, argument: float) -> float:
    """Ratio ``R_nu(z) = K_{nu+1}(z) / K_nu(z)``, always positive."""
    return math.exp(log_bessel_ratio(order, argument))


# ---------------------------------------------------------------------------
# Regularized incomplete gamma
# ---------------------------------------------------------------------------

_GAMMA_EPS = 1e-16
_GAMMA_MAX_ITER = 100_000
_TINY = 1e-300


def _gamma_prefactor(a: float, x: float) -> float:
    return math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_series(a: float, x: float) -> float:
    # P(a, x) = x^a e^-x / Gamma(a+1) * sum_n x^n / ((a+1)...(a+n))
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_GAMMA_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            return total * _gamma_prefactor(a, x)
    raise ArithmeticError(f"incomplete gamma series did not converge (a={a}, x={x})")


def _gamma_continued_fraction(a: float, x: float) -> float:
    # modified Lentz for Q(a, x)
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            return h * _gamma_prefactor(a, x)
    raise ArithmeticError(
        f"incomplete gamma continued fraction did not converge (a={a}, x={x})"
    )


def _check_gamma_args(a: float, x: float) -> None:
    if not (a > 0.0 and math.isfinite(a)):
        raise ValueError(f"shape must be finite and > 0, got {a}")
    if not x >= 0.0:
        raise ValueError(f"x must be >= 0, got {x}")


def regularized_gamma_p(a: float, x: float) -> float:
    """Lower regularized incomplete gamma ``P(a, x)``, i.e. the Gamma(a, 1) CDF."""
    _check_gamma_args(a, x)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return min(_gamma_series(a, x), 1.0)
    return max(1.0 - _gamma_continued_fraction(a, x), 0.0)


def regularized_gamma_q(a: float, x: float) -> float:
    """Upper regularized incomplete gamma ``Q(a, x) = 1 - P(a, x)``."""
    _check_gamma_args(a, x)
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return max(1.0 - _gamma_series(a, x), 0.0)
    return min(_gamma_continued_fraction(a, x), 1.0)
