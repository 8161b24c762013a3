"""Generalized inverse Gaussian distribution GIG(nu, omega, phi).

Density on ``x > 0``::

    f(x) = (omega/phi)^((nu+1)/2) / (2 K_{nu+1}(2 sqrt(omega phi)))
           * x^nu * exp(-omega x - phi / x)

Parameters are always given in the order ``(nu, omega, phi)``. The two
boundary cases are explicit, exact branches rather than numerical limits:

* ``phi == 0`` (requires ``omega > 0``, ``nu > -1``): Gamma with shape
  ``nu + 1`` and rate ``omega``. This is the conjugate posterior when no
  expert opinions are present.
* ``omega == 0`` (requires ``phi > 0``, ``nu < -1``): inverse Gamma with shape
  ``-nu - 1`` and scale ``phi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special import bessel_ratio, log_bessel_k, log_bessel_ratio

__all__ = [
    "PROPER",
    "GAMMA",
    "INVERSE_GAMMA",
    "GammaParams",
    "GigParams",
    "GigSampler",
    "gig_log_pdf",
    "gig_pdf",
    "gig_moment",
    "gig_mean",
    "gig_variance",
    "gig_mode",
    "gig_mode_approx",
    "gig_cdf",
    "gig_quantile",
    "gig_sample",
]

PROPER = "proper"
GAMMA = "gamma"
INVERSE_GAMMA = "inverse_gamma"

MAX_PROPOSALS_PER_DRAW = 1_000_000
_ROOT_TOL = 1e-12
_ROOT_MAX_ITER = 500
_CDF_TOL = 1e-10


@dataclass(frozen=True)
class GammaParams:
    """Gamma law with ``shape`` (alpha) and ``scale`` (beta); mean is shape * scale."""

    shape: float
    scale: float

    def __post_init__(self):
        for name in ("shape", "scale"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"Gamma {name} must be finite and > 0, got {value}")

    @property
    def mean(self) -> float:
        return self.shape * self.scale

    @property
    def vco(self) -> float:
        return 1.0 / math.sqrt(self.shape)

    def as_gig(self) -> "GigParams":
        """The same law written as GIG(alpha - 1, 1/beta, 0)."""
        return GigParams(self.shape - 1.0, 1.0 / self.scale, 0.0)


@dataclass(frozen=True)
class GigParams:
    """Parameters of GIG(nu, omega, phi); see the module docstring for branches."""

    nu: float
    omega: float
    phi: float

    def __post_init__(self):
        nu, omega, phi = self.nu, self.omega, self.phi
        if not all(math.isfinite(v) for v in (nu, omega, phi)):
            raise ValueError(f"GIG parameters must be finite: {self}")
        if omega < 0.0 or phi < 0.0:
            raise ValueError(f"GIG requires omega >= 0 and phi >= 0: {self}")
        if omega > 0.0 and phi > 0.0:
            return
        if phi == 0.0 and omega > 0.0 and nu > -1.0:
            return
        if omega == 0.0 and phi > 0.0 and nu < -1.0:
            return
        raise ValueError(f"invalid GIG parameters {self}")

    @property
    def branch(self) -> str:
        if self.phi == 0.0:
            return GAMMA
        if self.omega == 0.0:
            return INVERSE_GAMMA
        return PROPER

    @property
    def bessel_argument(self) -> float:
        return 2.0 * math.sqrt(self.omega * self.phi)


def _check_x(x: float) -> float:
    x = float(x)
    if not (x > 0.0 and math.isfinite(x)):
        raise ValueError(f"x must be finite and > 0, got {x}")
    return x


def _log_normalizer(params: GigParams) -> float:
    nu, omega, phi = params.nu, params.omega, params.phi
    branch = params.branch
    if branch == PROPER:
        return (
            0.5 * (nu + 1.0) * math.log(omega / phi)
            - math.log(2.0)
            - log_bessel_k(nu + 1.0, params.bessel_argument)
        )
    if branch == GAMMA:
        shape = nu + 1.0
        return shape * math.log(omega) - math.lgamma(shape)
    shape = -nu - 1.0
    return shape * math.log(phi) - math.lgamma(shape)


def gig_log_pdf(params: GigParams, x: float) -> float:
    """Log density at ``x > 0`` (any branch)."""
    x = _check_x(x)
    return (
        _log_normalizer(params)
        + params.nu * math.log(x)
        - params.omega * x
        - params.phi / x
    )


def gig_pdf(params: GigParams, x: float) -> float:
    return math.exp(gig_log_pdf(params, x))


def gig_moment(params: GigParams, order: int) -> float:
    """Integer moment ``E[X^order]``.

    On the proper branch this is ``(phi/omega)^(order/2)`` times the product of
    Bessel ratios ``R_{nu+k}(2 sqrt(omega phi))``, ``k = 1..order``.
    """
    if int(order) != order or order < 1:
        raise ValueError(f"moment order must be a positive integer, got {order}")
    order = int(order)
    if order == 1:
        return gig_mean(params)
    nu, omega, phi = params.nu, params.omega, params.phi
    branch = params.branch
    if branch == PROPER:
        z = params.bessel_argument
        log_m = 0.5 * order * math.log(phi / omega)
        for k in range(1, order + 1):
            log_m += log_bessel_ratio(nu + k, z)
        return math.exp(log_m)
    if branch == GAMMA:
        shape = nu + 1.0
        return math.exp(math.lgamma(shape + order) - math.lgamma(shape) - order * math.log(omega))
    shape = -nu - 1.0
    if shape <= order:
        raise ValueError(
            f"moment of order {order} does not exist for inverse Gamma shape {shape}"
        )
    return math.exp(order * math.log(phi) + math.lgamma(shape - order) - math.lgamma(shape))


def gig_mean(params: GigParams) -> float:
    """Mean: ``sqrt(phi/omega) R_{nu+1}(2 sqrt(omega phi))`` on the proper branch."""
    nu, omega, phi = params.nu, params.omega, params.phi
    branch = params.branch
    if branch == PROPER:
        return math.sqrt(phi / omega) * bessel_ratio(nu + 1.0, params.bessel_argument)
    if branch == GAMMA:
        return (nu + 1.0) / omega
    if nu >= -2.0:
        raise ValueError(f"mean does not exist for {params} (needs nu < -2)")
    return phi / (-nu - 2.0)


def gig_variance(params: GigParams) -> float:
    mean = gig_mean(params)
    return max(gig_moment(params, 2) - mean * mean, 0.0)


def gig_mode(params: GigParams) -> float:
    """Exact mode ``(nu + sqrt(nu^2 + 4 omega phi)) / (2 omega)``.

    Returns 0.0 on the Gamma branch with ``nu <= 0`` (density maximal at the
    origin).
    """
    nu, omega, phi = params.nu, params.omega, params.phi
    if omega == 0.0:
        raise ValueError("mode formula needs omega > 0")
    disc = math.sqrt(nu * nu + 4.0 * omega * phi)
    if nu >= 0.0:
        return (nu + disc) / (2.0 * omega)
    # nu < 0: rationalized to avoid cancellation
    if phi == 0.0:
        return 0.0
    return 2.0 * phi / (disc - nu)


def gig_mode_approx(params: GigParams) -> float:
    """First-order approximation of the mode for small ``4 omega phi / nu^2``.

    Expands ``sqrt(1 + 4 omega phi / nu^2)`` to first order::

        mode ~ (nu / omega) * 1{nu >= 0} + phi / |nu|
    """
    nu, omega, phi = params.nu, params.omega, params.phi
    if nu == 0.0:
        raise ValueError("mode approximation undefined for nu == 0")
    if nu > 0.0 and omega == 0.0:
        raise ValueError("mode approximation needs omega > 0 when nu > 0")
    lead = nu / omega if nu > 0.0 else 0.0
    return lead + phi / abs(nu)


# ---------------------------------------------------------------------------
# CDF / quantile by quadrature
# ---------------------------------------------------------------------------


def _spread(params: GigParams) -> float:
    try:
        sd = math.sqrt(gig_variance(params))
    except ValueError:
        sd = 0.0
    return sd


def _quad(f, a: float, b: float, points=None) -> float:
    from scipy import integrate  # deferred: slow import, only the CDF needs it

    value, _ = integrate.quad(
        f, a, b, epsabs=_CDF_TOL, epsrel=_CDF_TOL, limit=500, points=points
    )
    return value


def gig_cdf(params: GigParams, x: float) -> float:
    """``P[X <= x]`` by adaptive quadrature of the density.

    The left piece ``(0, x]`` is integrated directly when ``x`` is at or below
    the mode; otherwise the right tail ``[x, inf)`` is integrated after the
    substitution ``u = 1/t`` and subtracted from one.
    """
    x = float(x)
    if x <= 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    log_norm = _log_normalizer(params)
    nu, omega, phi = params.nu, params.omega, params.phi

    def pdf(t):
        if t <= 0.0:
            return 0.0
        return math.exp(log_norm + nu * math.log(t) - omega * t - phi / t)

    def pdf_inverted(u):
        if u <= 0.0:
            return 0.0
        t = 1.0 / u
        return math.exp(log_norm + nu * math.log(t) - omega * t - phi / t) * t * t

    try:
        mode = gig_mode(params)
    except ValueError:
        mode = phi / (-nu + 1.0)  # inverse Gamma mode
    sd = _spread(params)
    if x <= mode:
        lo = max(mode - 40.0 * sd, 0.0) if sd > 0.0 else 0.0
        lo = min(lo, x)
        pts = [p for p in (mode - sd, mode - 5.0 * sd) if lo < p < x] or None
        value = _quad(pdf, lo, x, pts)
    else:
        # the whole tail: heavy (inverse Gamma) tails carry mass far out
        pts = [1.0 / p for p in (mode + sd, mode + 5.0 * sd, mode + 40.0 * sd) if p > x] or None
        value = 1.0 - _quad(pdf_inverted, 0.0, 1.0 / x, pts)
    return min(max(value, 0.0), 1.0)


def gig_quantile(params: GigParams, prob: float, tol: float = 1e-12) -> float:
    """Inverse of :func:`gig_cdf` by bisection."""
    if not 0.0 < prob < 1.0:
        raise ValueError(f"prob must lie in (0, 1), got {prob}")
    try:
        center = gig_mean(params)
    except ValueError:
        center = gig_mode(params) if params.omega > 0 else params.phi
    lo, hi = center, center
    while gig_cdf(params, lo) > prob:
        lo /= 2.0
    while gig_cdf(params, hi) < prob:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if gig_cdf(params, mid) < prob:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * hi:
            break
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Sampling (ratio of uniforms with mode relocation)
# ---------------------------------------------------------------------------


def _bracketed_root(g, dg, lo: float, hi: float) -> float:
    """Newton steps safeguarded by bisection on a sign-change bracket."""
    g_lo = g(lo)
    if g_lo == 0.0:
        return lo
    if (g_lo > 0.0) == (g(hi) > 0.0):
        raise RuntimeError(f"no sign change on [{lo}, {hi}]")
    x = 0.5 * (lo + hi)
    for _ in range(_ROOT_MAX_ITER):
        gx = g(x)
        if gx == 0.0:
            return x
        if (gx > 0.0) == (g_lo > 0.0):
            lo, g_lo = x, gx
        else:
            hi = x
        d = dg(x)
        step = x - gx / d if d != 0.0 else lo - 1.0
        x_new = step if lo < step < hi else 0.5 * (lo + hi)
        if abs(x_new - x) <= _ROOT_TOL * max(abs(x_new), 1.0) or hi - lo <= _ROOT_TOL * hi:
            return x_new
        x = x_new
    raise RuntimeError("root finding for the GIG sampler did not converge")


class GigSampler:
    """Exact GIG sampler for the proper branch.

    Draws ``Y`` with density proportional to ``y^nu exp(-beta (y + 1/y) / 2)``
    by the ratio-of-uniforms method relocated to the mode ``m``, then returns
    ``X = Y / alpha`` with ``alpha = sqrt(omega/phi)``, ``beta = 2 sqrt(omega phi)``.
    The bounding rectangle comes from the two roots of the cubic ``g`` that
    locates the extrema of ``(y - m) sqrt(h(y)/h(m))``.

    ``n_proposed`` / ``n_accepted`` count proposals across all draws.
    """

    def __init__(self, params: GigParams):
        if params.branch != PROPER:
            raise ValueError(f"ratio-of-uniforms sampler needs omega, phi > 0: {params}")
        self.params = params
        nu, omega, phi = params.nu, params.omega, params.phi
        self.alpha = math.sqrt(omega / phi)
        beta = 2.0 * math.sqrt(omega * phi)
        self.beta = beta
        disc = math.hypot(nu, beta)
        m = (nu + disc) / beta if nu >= 0.0 else beta / (disc - nu)
        self.m = m

        def g(y):
            return (
                0.5 * beta * y**3
                - y * y * (0.5 * beta * m + nu + 2.0)
                + y * (nu * m - 0.5 * beta)
                + 0.5 * beta * m
            )

        def dg(y):
            return 1.5 * beta * y * y - 2.0 * y * (0.5 * beta * m + nu + 2.0) + (nu * m - 0.5 * beta)

        y0 = m
        for _ in range(2000):
            if g(y0) > 0.0:
                break
            y0 *= 2.0
        else:
            raise RuntimeError(f"could not bracket the upper root for {params}")
        y_plus = _bracketed_root(g, dg, m, y0)
        y_minus = _bracketed_root(g, dg, 0.0, m)

        half_nu, quarter_beta = 0.5 * nu, 0.25 * beta
        base = m + 1.0 / m

        def edge(y):
            log_scale = half_nu * math.log(y / m) - quarter_beta * (y + 1.0 / y - base)
            return (y - m) * math.exp(log_scale)

        self.a = edge(y_plus)
        self.b = edge(y_minus)
        self.c = -quarter_beta * base + half_nu * math.log(m)
        self.n_proposed = 0
        self.n_accepted = 0

    @property
    def mean_proposals_per_draw(self) -> float:
        return self.n_proposed / self.n_accepted if self.n_accepted else math.nan

    def _accept(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        y = self.m + (self.a * v + self.b * (1.0 - v)) / u
        ok = y > 0.0
        safe = np.where(ok, y, 1.0)
        bound = -0.5 * self.params.nu * np.log(safe) + 0.25 * self.beta * (safe + 1.0 / safe) + self.c
        ok &= -np.log(u) >= bound
        return y[ok]

    def draw(self, rng: np.random.Generator, size: int | None = None):
        """One draw (``size=None``) or an array of ``size`` draws."""
        n = 1 if size is None else int(size)
        out = np.empty(n)
        filled = 0
        idle = 0
        while filled < n:
            batch = max(16, int(1.3 * (n - filled)) + 8)
            # U in (0, 1]: -log U must be finite
            u = 1.0 - rng.random(batch)
            v = rng.random(batch)
            self.n_proposed += batch
            accepted = self._accept(u, v)
            if accepted.size == 0:
                idle += batch
                if idle > MAX_PROPOSALS_PER_DRAW:
                    raise RuntimeError(
                        f"GIG sampler rejected {idle} consecutive proposals for {self.params}"
                    )
                continue
            idle = 0
            take = min(accepted.size, n - filled)
            out[filled:filled + take] = accepted[:take]
            filled += take
            self.n_accepted += take
        out /= self.alpha
        return float(out[0]) if size is None else out


def gig_sample(params: GigParams, rng: np.random.Generator, size: int | None = None):
    """Draw from GIG(nu, omega, phi).

    The proper branch uses :class:`GigSampler`; the Gamma and inverse-Gamma
    branches use numpy's exact Gamma generator.
    """
    branch = params.branch
    if branch == PROPER:
        return GigSampler(params).draw(rng, size)
    if branch == GAMMA:
        out = rng.gamma(params.nu + 1.0, 1.0 / params.omega, size)
    else:
        out = params.phi / rng.gamma(-params.nu - 1.0, 1.0, size)
    return float(out) if size is None else out
