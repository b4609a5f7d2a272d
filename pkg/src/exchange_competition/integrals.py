"""Two-center exchange-integral ingredients in atomic units.

Computes the overlap S_ab, the one-electron potential element <b|V|a>
with V = sign * Z / r_b, the ratio Gamma_ab = <a|V|b> / delta_e, and the
6-dimensional exchange Coulomb integral <ab|1/r12|ba>, then assembles the
coupling pair (a1, a2) with

    a1 = <ab|1/r12|ba>,   a2 = -2 * (S_ab + Gamma_ab) * <b|V|a>.

One-electron integrals use a product Gauss-Legendre grid in prolate
spheroidal coordinates (plain radial quadrature at R = 0, where the
spheroidal frame degenerates).  The 6D exchange integral uses Monte Carlo
with importance sampling from the symmetrized density (phi_a^2+phi_b^2)/2
and antithetic pairing on the underlying uniforms, which bounds the
per-sample weight by 1 in absolute value.

The sign of V is a configuration flag: the potential appears with both
signs in the source definitions, so it is recorded, never assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import special

from .errors import QuadratureDivergenceError
from .model import Couplings

DIVERGENCE_LIMIT = 1e-6


@dataclass(frozen=True)
class TwoCenterGeometry:
    """Two nuclei of charge Z separated by R bohr along the z axis, at +-R/2."""

    separation: float
    charge: float = 1.0

    def __post_init__(self):
        if self.separation < 0.0:
            raise ValueError("separation must be >= 0")
        if self.charge <= 0.0:
            raise ValueError("charge must be > 0")


@dataclass(frozen=True)
class QuadratureConfig:
    scheme: str = "product-grid"       # or "monte-carlo"
    resolution: int = 80               # Gauss-Legendre points per axis
    samples: int = 1_000_000           # monte-carlo sample pairs
    seed: int = 0
    batch: int = 500_000

    def __post_init__(self):
        if self.scheme not in ("product-grid", "monte-carlo"):
            raise ValueError(f"unknown scheme: {self.scheme}")
        if self.resolution < 8:
            raise ValueError("resolution must be >= 8")
        if self.samples < 1000:
            raise ValueError("samples must be >= 1000")


class RadialOrbital:
    """Spherically symmetric orbital: hydrogenic 1s or a tabulated radial grid.

    Tabulated orbitals are linearly interpolated and zero beyond the grid.
    """

    def __init__(self, kind="hydrogenic-1s", zeff=1.0, r_grid=None, u_grid=None):
        self.kind = kind
        if kind == "hydrogenic-1s":
            if zeff <= 0.0:
                raise ValueError("zeff must be > 0")
            self.zeff = float(zeff)
        elif kind == "tabulated":
            self.r_grid = np.asarray(r_grid, dtype=float)
            self.u_grid = np.asarray(u_grid, dtype=float)
            if self.r_grid.ndim != 1 or self.r_grid.shape != self.u_grid.shape:
                raise ValueError("tabulated orbital needs matching 1D r/u grids")
            if np.any(np.diff(self.r_grid) <= 0):
                raise ValueError("r grid must be strictly increasing")
            self.zeff = None
        else:
            raise ValueError(f"unknown orbital kind: {kind}")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == "hydrogenic-1s":
            return math.sqrt(self.zeff**3 / math.pi) * np.exp(-self.zeff * r)
        return np.interp(r, self.r_grid, self.u_grid, left=self.u_grid[0], right=0.0)

    def extent(self) -> float:
        """Radius beyond which the orbital is negligible (for grid truncation)."""
        if self.kind == "hydrogenic-1s":
            return 45.0 / self.zeff
        return float(self.r_grid[-1])

    def norm_squared(self, resolution: int = 400) -> float:
        """4*pi * int |phi|^2 r^2 dr by Gauss-Legendre on [0, extent]."""
        x, w = leggauss(resolution)
        rmax = self.extent()
        r = 0.5 * rmax * (x + 1.0)
        wr = 0.5 * rmax * w
        phi = self(r)
        return float(4.0 * math.pi * np.sum(wr * phi * phi * r * r))


def _radial_one_center(integrand, rmax: float, resolution: int) -> float:
    x, w = leggauss(resolution)
    r = 0.5 * rmax * (x + 1.0)
    wr = 0.5 * rmax * w
    return float(4.0 * math.pi * np.sum(wr * integrand(r) * r * r))


def _spheroidal_integral(f_of_ra_rb, geometry, resolution: int, mu_extent: float) -> float:
    """2*pi*(R/2)^3 * int (mu^2-nu^2) f(r_a, r_b) over the spheroidal grid."""
    R = geometry.separation
    xm, wm = leggauss(resolution)
    xn, wn = leggauss(resolution)
    mu_max = 1.0 + 2.0 * mu_extent / R
    mu = 1.0 + 0.5 * (mu_max - 1.0) * (xm + 1.0)
    wmu = 0.5 * (mu_max - 1.0) * wm
    nu = xn
    wnu = wn
    MU, NU = np.meshgrid(mu, nu, indexing="ij")
    W = np.outer(wmu, wnu)
    r_a = 0.5 * R * (MU + NU)
    r_b = 0.5 * R * (MU - NU)
    vals = f_of_ra_rb(r_a, r_b) * (MU * MU - NU * NU)
    return float(2.0 * math.pi * (R / 2.0) ** 3 * np.sum(W * vals))


def _one_electron(f_of_ra_rb, a, b, geometry, q: QuadratureConfig):
    """Value plus Richardson-style error estimate from halving the resolution."""
    R = geometry.separation
    extent = max(a.extent(), b.extent())
    if R == 0.0:
        value = _radial_one_center(lambda r: f_of_ra_rb(r, r), extent, q.resolution)
        coarse = _radial_one_center(lambda r: f_of_ra_rb(r, r), extent, q.resolution // 2)
    else:
        value = _spheroidal_integral(f_of_ra_rb, geometry, q.resolution, extent)
        coarse = _spheroidal_integral(f_of_ra_rb, geometry, q.resolution // 2, extent)
    err = abs(value - coarse)
    if err > DIVERGENCE_LIMIT:
        raise QuadratureDivergenceError(
            f"quadrature error estimate {err:.3e} exceeds {DIVERGENCE_LIMIT}",
            error_estimate=err,
        )
    return value, err


def overlap(a: RadialOrbital, b: RadialOrbital, geometry: TwoCenterGeometry,
            q: QuadratureConfig = QuadratureConfig()) -> tuple[float, float]:
    """Two-center overlap <phi_a|phi_b> and its error estimate."""
    return _one_electron(lambda ra, rb: a(ra) * b(rb), a, b, geometry, q)


def potential_element(b: RadialOrbital, a: RadialOrbital, geometry: TwoCenterGeometry,
                      q: QuadratureConfig = QuadratureConfig(),
                      attractive: bool = True) -> tuple[float, float]:
    """<b| sign*Z/r_b |a>; ``attractive`` selects the negative sign (default)."""
    sign = -1.0 if attractive else 1.0
    Z = geometry.charge

    def integrand(ra, rb):
        rb_safe = np.maximum(rb, 1e-300)
        return b(rb) * (sign * Z / rb_safe) * a(ra)

    return _one_electron(integrand, a, b, geometry, q)


def gamma(a: RadialOrbital, b: RadialOrbital, geometry: TwoCenterGeometry,
          delta_e: float, q: QuadratureConfig = QuadratureConfig(),
          attractive: bool = True) -> tuple[float, float]:
    """Gamma_ab = <a|V|b> / delta_e."""
    if delta_e == 0.0:
        raise ZeroDivisionError("delta_e must be nonzero")
    value, err = potential_element(a, b, geometry, q, attractive=attractive)
    return value / delta_e, err / abs(delta_e)


def _sample_radius(orbital: RadialOrbital, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF radius draw from the normalized density |phi|^2 r^2."""
    if orbital.kind == "hydrogenic-1s":
        # |1s|^2 radial density is Gamma(shape=3, scale=1/(2Z))
        return special.gammaincinv(3.0, u) / (2.0 * orbital.zeff)
    r = orbital.r_grid
    density = orbital.u_grid**2 * r * r
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (density[1:] + density[:-1]) * np.diff(r))])
    cdf /= cdf[-1]
    return np.interp(u, cdf, r)


def direct_exchange(a: RadialOrbital, b: RadialOrbital, geometry: TwoCenterGeometry,
                    q: QuadratureConfig = QuadratureConfig(scheme="monte-carlo")
                    ) -> tuple[float, float]:
    """<ab|1/r12|ba> by antithetic importance-sampled Monte Carlo.

    Returns (value, standard error of the mean over antithetic pairs).
    The integrand is positive for nodeless orbitals; a negative estimate
    signals insufficient sampling and is the caller's to flag.
    """
    if q.scheme != "monte-carlo":
        raise ValueError("direct_exchange implements the monte-carlo scheme")
    rng = np.random.default_rng(q.seed)
    R = geometry.separation
    center_a = np.array([0.0, 0.0, -R / 2.0])
    center_b = np.array([0.0, 0.0, +R / 2.0])

    def h_density(points):
        """Mixture sampling density 0.5*(phi_a^2 + phi_b^2) and integrand factor phi_a*phi_b."""
        ra = np.linalg.norm(points - center_a, axis=1)
        rb = np.linalg.norm(points - center_b, axis=1)
        pa, pb = a(ra), b(rb)
        return 0.5 * (pa * pa + pb * pb), pa * pb

    def draw(m):
        """One batch of m antithetic pairs; returns per-pair estimator values."""
        pick_b = rng.random(m) < 0.5
        u_r = rng.random((m, 2))
        u_cos = rng.random((m, 2))
        u_phi = rng.random((m, 2))

        def positions(ur, ucos, uphi, antithetic):
            if antithetic:
                ur, ucos, uphi = 1.0 - ur, 1.0 - ucos, 1.0 - uphi
            ur = np.clip(ur, 1e-12, 1.0 - 1e-12)
            same_orbital = a is b or (
                a.kind == "hydrogenic-1s" and b.kind == "hydrogenic-1s" and a.zeff == b.zeff
            )
            pts = []
            for e in range(2):
                r_a_draw = _sample_radius(a, ur[:, e])
                r_b_draw = r_a_draw if same_orbital else _sample_radius(b, ur[:, e])
                radius = np.where(pick_b, r_b_draw, r_a_draw)
                cos_t = 2.0 * ucos[:, e] - 1.0
                sin_t = np.sqrt(np.maximum(0.0, 1.0 - cos_t * cos_t))
                phi = 2.0 * math.pi * uphi[:, e]
                direction = np.stack(
                    [sin_t * np.cos(phi), sin_t * np.sin(phi), cos_t], axis=1
                )
                center = np.where(pick_b[:, None], center_b, center_a)
                pts.append(center + radius[:, None] * direction)
            return pts

        def estimate(pts):
            p1, p2 = pts
            h1, f1 = h_density(p1)
            h2, f2 = h_density(p2)
            w1 = np.where(h1 > 0.0, f1 / np.maximum(h1, 1e-300), 0.0)
            w2 = np.where(h2 > 0.0, f2 / np.maximum(h2, 1e-300), 0.0)
            r12 = np.linalg.norm(p1 - p2, axis=1)
            r12 = np.maximum(r12, 1e-12)
            return w1 * w2 / r12

        plain = estimate(positions(u_r, u_cos, u_phi, antithetic=False))
        mirrored = estimate(positions(u_r, u_cos, u_phi, antithetic=True))
        return 0.5 * (plain + mirrored)

    total = 0.0
    total_sq = 0.0
    count = 0
    remaining = q.samples
    while remaining > 0:
        m = min(q.batch, remaining)
        vals = draw(m)
        total += float(np.sum(vals))
        total_sq += float(np.sum(vals * vals))
        count += m
        remaining -= m
    mean = total / count
    var = max(total_sq / count - mean * mean, 0.0)
    std_err = math.sqrt(var / count)
    return mean, std_err


@dataclass(frozen=True)
class IntegralSet:
    """All Eq.-(1)-style ingredients at one geometry, plus the derived couplings."""

    s_ab: float
    v_ba: float
    gamma_ab: float
    direct_exchange: float
    a1: float
    a2: float
    j_h: float
    error_estimates: dict = field(default_factory=dict)
    flags: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "s_ab": self.s_ab,
            "v_ba": self.v_ba,
            "gamma_ab": self.gamma_ab,
            "direct_exchange": self.direct_exchange,
            "a1": self.a1,
            "a2": self.a2,
            "j_h": self.j_h,
            "error_estimates": dict(self.error_estimates),
            "flags": list(self.flags),
        }


def assemble_couplings(s_ab: float, v_ba: float, gamma_ab: float,
                       direct_exchange_value: float,
                       error_estimates: dict | None = None
                       ) -> tuple[Couplings | None, IntegralSet]:
    """Combine the ingredients into (a1, a2) and J_H = a1 + a2.

    Returns ``None`` for the Couplings when the computed pair violates the
    model's sign convention (a1 < 0 or a2 > 0); the IntegralSet then carries
    the corresponding flag and remains usable for reporting.
    """
    a1 = direct_exchange_value
    a2 = -2.0 * (s_ab + gamma_ab) * v_ba
    flags = []
    if a1 < 0.0:
        flags.append("negative_direct_exchange")
    if a2 > 0.0:
        flags.append("positive_a2")
    iset = IntegralSet(
        s_ab, v_ba, gamma_ab, a1, a1, a2, a1 + a2,
        error_estimates or {}, tuple(flags),
    )
    couplings = None
    if not flags:
        couplings = Couplings(a1, a2)
    return couplings, iset


def hd_coupling(j_lm: float, v_lm: float, u: float, variant: str = "squared") -> float:
    """Per-pair coupling of the localized-spin Hamiltonian.

    ``literal``: j_lm - 2*|v_lm|/u, exactly as printed in the source even
    though it is dimensionally inconsistent; ``squared``: j_lm - 2*v_lm^2/u,
    the standard kinetic-exchange form.
    """
    if u <= 0.0:
        raise ZeroDivisionError("u must be > 0")
    if variant == "literal":
        return j_lm - 2.0 * abs(v_lm) / u
    if variant == "squared":
        return j_lm - 2.0 * v_lm * v_lm / u
    raise ValueError(f"unknown variant: {variant}")


def closed_form_1s_overlap(rho: float) -> float:
    """Exact two-center 1s-1s overlap e^-rho (1 + rho + rho^2/3); test oracle."""
    return math.exp(-rho) * (1.0 + rho + rho * rho / 3.0)
