"""
Numeric assembly of the edge expansion

    τ(ρ, φ, θ) = Σ_{h even} Σ_f (∂_θ^h A)(θ) · ρ^{±α_j} (ρ/R)^{h+f} · y_{h,j,f}(φ),   h + f ≤ K,

with A(θ) = cos(nθ), and a finite-difference Laplacian used as an independent
check of the symbolic tables. Evaluation runs in mpmath at SHADOW_EVAL_DPS
digits so high-order residuals stay above the rounding floor.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from django.conf import settings

from shadows.services.geometry import get_geometry
from shadows.services.recursion import Kind, ShadowKey, build_table

logger = logging.getLogger(__name__)


class DomainError(ValueError):
    """Point or parameters outside the region where the expansion is defined."""


class NumericFailure(ArithmeticError):
    """The residual sweep produced values that cannot be fitted."""


def _dps():
    return settings.SHADOW_EVAL_DPS


def _mpf(value):
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    if isinstance(value, str):
        return mpmath.mpf(value.strip())
    return mpmath.mpf(value)


def _scalar_mp(x):
    return _mpf(x.a) + _mpf(x.b) * mpmath.sqrt(3)


@dataclass(frozen=True)
class SeriesSpec:
    geometry: str
    j: int = 1
    K: int = 0
    mode: int = 0
    R: object = 1
    kind: Kind = Kind.PRIMAL

    def __post_init__(self):
        object.__setattr__(self, 'geometry', get_geometry(self.geometry))
        object.__setattr__(self, 'kind', Kind(self.kind))
        with mpmath.workdps(_dps()):
            object.__setattr__(self, 'R', _mpf(self.R))
        if not self.R > 0:
            raise DomainError(f"R must be positive, got {self.R}")
        if self.K < 0:
            raise DomainError(f"K must be >= 0, got {self.K}")
        if self.mode < 0:
            raise DomainError(f"mode must be >= 0, got {self.mode}")
        if self.j < 1:
            raise DomainError(f"j must be >= 1, got {self.j}")

    @property
    def exponent(self):
        return ShadowKey(self.kind, 0, self.j, 0).exponent(self.geometry)

    @property
    def expected_slope(self):
        """Order α + K − 1 of the Laplacian residual of the truncated series."""
        return float(self.exponent) + self.K - 1

    def keys(self):
        return [
            ShadowKey(self.kind, h, self.j, f)
            for h in range(0, self.K + 1, 2)
            for f in range(0, self.K - h + 1)
        ]

    def build_table(self):
        return build_table(self.geometry, self.kind, [self.j],
                           max_h=self.K - self.K % 2, max_f=self.K, max_order=self.K)


@dataclass(frozen=True)
class EdgePoint:
    rho: object
    phi: object
    theta: object = 0

    def __post_init__(self):
        with mpmath.workdps(_dps()):
            for name in ('rho', 'phi', 'theta'):
                object.__setattr__(self, name, _mpf(getattr(self, name)))

    def moved(self, drho=0, dphi=0, dtheta=0):
        return EdgePoint(self.rho + drho, self.phi + dphi, self.theta + dtheta)


def wedge_bounds(geometry):
    g = get_geometry(geometry)
    return (_mpf(g.phi1) * mpmath.pi, _mpf(g.phi2) * mpmath.pi)


class SeriesEvaluator:
    """Holds the mp coefficients of one truncated series."""

    def __init__(self, spec, table):
        self.spec = spec
        if table.geometry != spec.geometry:
            raise DomainError(f"table is for {table.geometry}, series for {spec.geometry}")
        missing = [key for key in spec.keys() if key not in table]
        if missing:
            raise DomainError(f"table lacks {', '.join(k.symbol for k in missing)}")
        q = spec.geometry.freq_den
        with mpmath.workdps(_dps()):
            self.exponent = _mpf(spec.exponent)
            self.bounds = wedge_bounds(spec.geometry)
            self.terms = []
            for key in spec.keys():
                coefficients = [
                    (_mpf(Fraction(k, q)), _scalar_mp(s), _scalar_mp(c))
                    for k, (s, c) in table[key].terms.items()
                ]
                self.terms.append((key, coefficients))

    def check_point(self, p, tolerance=mpmath.mpf('1e-12')):
        spec = self.spec
        if p.rho < 0:
            raise DomainError(f"rho must be >= 0, got {p.rho}")
        if p.rho >= spec.R:
            raise DomainError(f"rho={p.rho} is not below the edge radius R={spec.R}")
        if p.rho == 0 and self.exponent < 0:
            raise DomainError("dual series is singular at rho = 0")
        lo, hi = self.bounds
        if p.phi < lo - tolerance or p.phi > hi + tolerance:
            raise DomainError(f"phi={p.phi} outside the wedge [{lo}, {hi}]")

    def _theta_factor(self, h, theta):
        n = self.spec.mode
        return (-(n * n)) ** (h // 2) * mpmath.cos(n * theta)

    def term_values(self, p, check=True):
        with mpmath.workdps(_dps()):
            if check:
                self.check_point(p)
            base = p.rho ** self.exponent
            ratio = p.rho / self.spec.R
            values = []
            for key, coefficients in self.terms:
                angular = mpmath.fsum(
                    s * mpmath.sin(w * p.phi) + c * mpmath.cos(w * p.phi)
                    for w, s, c in coefficients
                )
                scale = self._theta_factor(key.h, p.theta) * base * ratio ** (key.h + key.f)
                values.append((key, scale * angular))
            return values

    def tau(self, p, check=True):
        with mpmath.workdps(_dps()):
            return mpmath.fsum(value for _, value in self.term_values(p, check))


def eval_tau(spec, table, p):
    return float(SeriesEvaluator(spec, table).tau(p))


def eval_terms(spec, table, p):
    """Per-(h, f) contributions, in (h, f) order."""
    return [
        {'h': key.h, 'f': key.f, 'value': float(value)}
        for key, value in SeriesEvaluator(spec, table).term_values(p)
    ]


def _laplacian_mp(u, p, steps, radius, bounds):
    drho, dphi, dtheta = (_mpf(s) for s in steps)
    lo, hi = bounds
    if not p.rho > 2 * drho:
        raise DomainError(f"rho={p.rho} too close to the edge for step {drho}")
    if not (lo + 2 * dphi < p.phi < hi - 2 * dphi):
        raise DomainError(f"phi={p.phi} too close to a wedge face for step {dphi}")

    two_pi = 2 * mpmath.pi
    u0 = u(p)
    u_rp, u_rm = u(p.moved(drho=drho)), u(p.moved(drho=-drho))
    u_pp, u_pm = u(p.moved(dphi=dphi)), u(p.moved(dphi=-dphi))
    u_tp = u(EdgePoint(p.rho, p.phi, mpmath.fmod(p.theta + dtheta, two_pi)))
    u_tm = u(EdgePoint(p.rho, p.phi, mpmath.fmod(p.theta - dtheta + two_pi, two_pi)))

    u_r = (u_rp - u_rm) / (2 * drho)
    u_rr = (u_rp - 2 * u0 + u_rm) / drho ** 2
    u_p = (u_pp - u_pm) / (2 * dphi)
    u_pphi = (u_pp - 2 * u0 + u_pm) / dphi ** 2
    u_tt = (u_tp - 2 * u0 + u_tm) / dtheta ** 2

    planar = u_rr + u_r / p.rho + u_pphi / p.rho ** 2
    if mpmath.isinf(radius):
        return planar
    r = radius + p.rho * mpmath.cos(p.phi)
    return planar + (mpmath.cos(p.phi) * u_r - mpmath.sin(p.phi) * u_p / p.rho) / r + u_tt / r ** 2


def laplacian_fd(u, p, steps, radius=mpmath.inf, geometry=None, bounds=None):
    """
    Central-difference Laplacian in edge coordinates (ρ, φ, θ) around a circle
    of radius ``radius``; ``radius = inf`` gives the planar operator.

    The face guard comes from ``geometry`` unless explicit (lo, hi) ``bounds`` are given.
    """
    if geometry is None and bounds is None:
        raise TypeError("laplacian_fd needs the wedge: pass geometry or bounds")
    with mpmath.workdps(_dps()):
        radius = _mpf(radius)
        bounds = tuple(_mpf(b) for b in bounds) if bounds is not None else wedge_bounds(geometry)
        return float(_laplacian_mp(u, p, steps, radius, bounds))


@dataclass
class ResidualStudy:
    rhos: list
    residuals: list
    slope: float
    intercept: float
    expected: float

    def summary(self):
        return {'slope': self.slope, 'intercept': self.intercept, 'expected': self.expected}

    def rows(self):
        return list(zip(self.rhos, self.residuals))


PROBE_FRACTIONS = (0.2, 0.45, 0.7, 0.9)
PROBE_THETAS = (0.3, 1.1)


def probe_points(spec):
    """Fixed interior (φ, θ) probes: fractions of the opening, two axial angles."""
    lo = float(spec.geometry.phi1) * float(mpmath.pi)
    width = float(spec.geometry.opening) * float(mpmath.pi)
    return [(lo + t * width, theta) for t in PROBE_FRACTIONS for theta in PROBE_THETAS]


def residual_slope(spec, table, rho_range, samples, probes=None, relative_step=None, angular_step=None):
    """
    Least-squares slope of log max|Δτ| against log ρ over a geometric ρ grid.
    """
    rho_min, rho_max = (float(v) for v in rho_range)
    if samples < 8:
        raise DomainError(f"need at least 8 samples, got {samples}")
    if not 0 < rho_min < rho_max:
        raise DomainError(f"invalid rho range ({rho_min}, {rho_max})")
    with mpmath.workdps(_dps()):
        if not mpmath.isinf(spec.R) and _mpf(rho_max) > spec.R / 10:
            raise DomainError(f"rho_max={rho_max} exceeds R/10={float(spec.R / 10)}")

    relative_step = relative_step or settings.SHADOW_FD_RELATIVE_STEP
    angular_step = angular_step or settings.SHADOW_FD_ANGULAR_STEP
    probes = probes or probe_points(spec)
    evaluator = SeriesEvaluator(spec, table)

    def u(point):
        return evaluator.tau(point, check=False)

    rhos = np.geomspace(rho_min, rho_max, samples)
    residuals = []
    with mpmath.workdps(_dps()):
        rel = _mpf(relative_step)
        ang = _mpf(angular_step)
        for rho in rhos:
            worst = mpmath.mpf(0)
            for phi, theta in probes:
                p = EdgePoint(mpmath.mpf(float(rho)), mpmath.mpf(phi), mpmath.mpf(theta))
                evaluator.check_point(p)
                value = _laplacian_mp(u, p, (p.rho * rel, ang, ang), spec.R, evaluator.bounds)
                worst = max(worst, abs(value))
            residuals.append(float(worst))

    residuals = np.array(residuals)
    if not np.all(np.isfinite(residuals)) or np.any(residuals <= 0):
        raise NumericFailure("residual sweep produced zero or non-finite values")
    slope, intercept = np.polyfit(np.log(rhos), np.log(residuals), 1)
    study = ResidualStudy(
        rhos=[float(r) for r in rhos],
        residuals=[float(r) for r in residuals],
        slope=float(slope),
        intercept=float(intercept),
        expected=spec.expected_slope,
    )
    logger.info(f"Residual sweep {spec.geometry} j={spec.j} K={spec.K} mode={spec.mode}: slope {study.slope:.3f} (expected {study.expected:.3f})")
    return study
