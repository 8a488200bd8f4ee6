r"""Limiting cases and independent cross-check formulas.

Everything here is computable without the lattice machinery and serves
as an oracle for it:

* two isolated scatterers (closed dilogarithm form and its quadrature),
* pairwise-summation approximations for chains and lattices,
* the continuous delta-sheet (Lifshitz-type) integral,
* the thin-wire limit of a chain and its leading asymptote,
* a single sphere's s-channel scattering factor, and
* the cylinder pair evaluated in an angular-momentum basis.

Sign conventions: all interaction energies are negative (attraction).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize as _opt
from scipy import special as _sp

from .errors import DomainError, ValidityError
from .special import QuadratureSpec, dilog, integrate_semiinfinite

__all__ = [
    "CylinderPairConfig",
    "SphereConfig",
    "casimir_polder_two_point",
    "casimir_polder_closed_form",
    "casimir_polder_gradient",
    "pairwise_energy_chain",
    "pairwise_energy_lattice2d",
    "pairwise_force_chain",
    "lifshitz_delta_planes",
    "wire_limit_energy",
    "wire_limit_asymptote",
    "sphere_phi_inverse",
    "sphere_large_separation_energy",
    "cylinder_energy_per_length",
    "cylinder_asymptote",
]


def _check_pos(name, v):
    if not (v > 0 and math.isfinite(v)):
        raise DomainError("%s must be positive and finite" % name)


# ----------------------------------------------------------------------
# Two isolated point scatterers
# ----------------------------------------------------------------------

def _cp_strength(g, d):
    _check_pos("coupling g", g)
    _check_pos("separation d", d)
    s = g / (4.0 * math.pi * d)
    if s >= 1.0:
        raise ValidityError(
            "two-point energy undefined: g/(4 pi d) = %.3g >= 1" % s,
            diagnostics={"s": s},
        )
    return s


def casimir_polder_closed_form(g, d):
    """Interaction energy of two point scatterers, closed form.

    E(d) = -(1/(4 pi d)) Li2((g / (4 pi d))^2); weak coupling gives the
    -g^2 / (64 pi^3 d^3) retarded power law.
    """
    s = _cp_strength(g, d)
    return -dilog(s * s) / (4.0 * math.pi * d)


def casimir_polder_two_point(g, d, quad=None):
    """Same quantity via the frequency integral (used as a cross-check)."""
    s = _cp_strength(g, d)
    quad = quad or QuadratureSpec()

    def f(xi):
        return math.log1p(-(s * math.exp(-xi * d)) ** 2) / (2.0 * math.pi)

    value, _ = integrate_semiinfinite(f, quad, scale=1.0 / (2.0 * d))
    return value


def casimir_polder_gradient(g, r):
    """dE/dr of the closed form; positive (restoring toward larger r)."""
    s = _cp_strength(g, r)
    u = s * s
    return (dilog(u) - 2.0 * math.log1p(-u)) / (4.0 * math.pi * r * r)


# ----------------------------------------------------------------------
# Pairwise summation
# ----------------------------------------------------------------------

def pairwise_energy_chain(cfg, n_terms=1000):
    """Sum of isolated-pair energies between one scatterer and a chain.

    Approximates the chain-chain energy per cell; exact only in the
    dilute limit.  At medium and large separations it lies above the
    exact (negative) energy, i.e. it underbinds, because it omits the
    collective terms that lower the single-chain response function.
    """
    if n_terms < 1:
        raise DomainError("pairwise_energy_chain: n_terms must be >= 1")
    terms = []
    for n in range(-n_terms, n_terms + 1):
        r = math.hypot(cfg.b, n * cfg.a - cfg.c)
        terms.append(casimir_polder_closed_form(cfg.g, r))
    return math.fsum(terms)


def pairwise_energy_lattice2d(cfg, n_terms=200):
    """Pairwise approximation for one scatterer against a square lattice."""
    if n_terms < 1:
        raise DomainError("pairwise_energy_lattice2d: n_terms must be >= 1")
    terms = []
    for n1 in range(-n_terms, n_terms + 1):
        dx = n1 * cfg.a - cfg.cx
        for n2 in range(-n_terms, n_terms + 1):
            dy = n2 * cfg.a - cfg.cy
            r = math.sqrt(cfg.b ** 2 + dx * dx + dy * dy)
            terms.append(casimir_polder_closed_form(cfg.g, r))
    return math.fsum(terms)


def pairwise_force_chain(cfg, z=None, n_terms=1000):
    """Transverse force on one scatterer from a chain, pairwise model.

    Projects each pair gradient onto the transverse axis; negative
    (attraction toward the chain).  z defaults to cfg.b.
    """
    z = cfg.b if z is None else z
    _check_pos("pairwise_force_chain: z", z)
    terms = []
    for n in range(-n_terms, n_terms + 1):
        r = math.hypot(z, n * cfg.a - cfg.c)
        terms.append(-casimir_polder_gradient(cfg.g, r) * (z / r))
    return math.fsum(terms)


# ----------------------------------------------------------------------
# Continuous delta sheet (Lifshitz-type integral)
# ----------------------------------------------------------------------

def lifshitz_delta_planes(g_area, b, quad=None):
    """Energy per unit area of two delta sheets with area coupling g_area.

    Reflection factor r = 1 / (1 - 2 gamma / g_area); g_area = inf gives
    the bounding case r = 1.  Requires g_area * b > 2 so that
    |r e^{-gamma b}| < 1 as gamma -> 0 (otherwise ValidityError: the
    formula has a genuine infrared breakdown there, inherited from the
    single-sheet bound state).  The pole at gamma = g_area / 2 is a
    band-zero artifact; the window around it where |r e^{-gamma b}|
    exceeds 1 has width of order g_area * e^{-g_area b / 2} and an
    integrable principal value, so nodes landing inside it contribute 0
    instead of raising.
    """
    _check_pos("lifshitz_delta_planes: b", b)
    if not g_area > 0:
        raise DomainError("lifshitz_delta_planes: g_area must be positive")
    if not math.isinf(g_area) and g_area * b <= 2.0:
        raise ValidityError(
            "lifshitz_delta_planes: g_area*b = %.3g <= 2, reflection "
            "exceeds 1 at small gamma" % (g_area * b),
            diagnostics={"g_area": g_area, "b": b},
        )
    quad = quad or QuadratureSpec()

    # The (xi, q) quarter-plane integral of a radial function collapses
    # to a single radial one: int dxi int q dq f(gamma) = int gamma^2 f.
    if math.isinf(g_area):
        gamma_pole, w_cut = math.inf, 0.0
    else:
        gamma_pole = 0.5 * g_area
        w_cut = 2.0 * g_area * math.exp(-gamma_pole * b)

    def f(gamma):
        if gamma * b > 46.0:
            return 0.0
        if abs(gamma - gamma_pole) < w_cut:
            return 0.0  # pole window, see docstring
        r = 1.0 if math.isinf(g_area) else 1.0 / (1.0 - 2.0 * gamma / g_area)
        x = r * math.exp(-gamma * b)
        if abs(x) >= 1.0:
            return 0.0
        return gamma * gamma * math.log1p(-x * x)

    value, _ = integrate_semiinfinite(f, quad, scale=1.0 / (2.0 * b))
    return value / (4.0 * math.pi ** 2)


# ----------------------------------------------------------------------
# Thin-wire limit of the chain
# ----------------------------------------------------------------------

def wire_limit_asymptote(a, b):
    """Leading large-log energy per unit length, -1/(8 pi b^2 ln^2(a/b))."""
    _check_pos("wire_limit_asymptote: a", a)
    _check_pos("wire_limit_asymptote: b", b)
    ell = math.log(a / b)
    if abs(ell) < 0.1:
        raise DomainError("wire_limit_asymptote: |ln(a/b)| too small")
    return -1.0 / (8.0 * math.pi * b * b * ell * ell)


def wire_limit_energy(a, b, quad=None):
    """Dense-chain (wire) limit of the energy per unit length.

    E/L = (1/(4 pi b^2)) int rho ln(1 - (K_0(rho)/ln(a/b))^2) d rho.
    The integrand is only defined where K_0(rho) < |ln(a/b)|; the
    excluded disk rho < rho_c is exponentially small and is cut off at
    its (log-integrable) edge.  Independent of the coupling g.
    """
    _check_pos("wire_limit_energy: a", a)
    _check_pos("wire_limit_energy: b", b)
    ell = math.log(a / b)
    if abs(ell) < 0.1:
        raise DomainError("wire_limit_energy: |ln(a/b)| too small")
    quad = quad or QuadratureSpec()

    # K_0 is monotone; find K_0(rho_c) = |ell|.
    guess = 2.0 * math.exp(-abs(ell) - 0.5772156649015329)
    rho_c = float(_opt.brentq(lambda r: _sp.k0(r) - abs(ell), guess * 1e-3, 60.0))

    def f(u):
        rho = rho_c + u
        x = _sp.k0(rho) / abs(ell)
        if x >= 1.0:
            return 0.0  # roundoff at the edge; measure-zero boundary
        return rho * math.log1p(-x * x)

    value, _ = integrate_semiinfinite(f, quad, scale=1.0)
    return value / (4.0 * math.pi * b * b)


# ----------------------------------------------------------------------
# Sphere and cylinder scatterers
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SphereConfig:
    """Single sphere of radius R with contact coupling g."""

    radius: float
    g: float

    def __post_init__(self):
        _check_pos("SphereConfig.radius", self.radius)
        _check_pos("SphereConfig.g", self.g)


@dataclass(frozen=True)
class CylinderPairConfig:
    """Two parallel cylinders, radius R, axis separation d, coupling g."""

    radius: float
    separation: float
    g: float
    l_max: int = 10

    def __post_init__(self):
        _check_pos("CylinderPairConfig.radius", self.radius)
        _check_pos("CylinderPairConfig.separation", self.separation)
        _check_pos("CylinderPairConfig.g", self.g)
        if self.separation <= 2.0 * self.radius:
            raise DomainError("CylinderPairConfig: cylinders overlap")
        if self.l_max < 0:
            raise DomainError("CylinderPairConfig.l_max must be >= 0")


def sphere_phi_inverse(xi, l, cfg):
    """Channel-l inverse scattering factor of a single sphere.

    (-g R / 4 pi) / (1 + (g / (4 pi R^2)) I_{l+1/2}(xi R) K_{l+1/2}(xi R));
    at l = 0 the Bessel product reduces to (1 - e^{-2 xi R})/(2 xi R).
    """
    if xi < 0:
        raise DomainError("sphere_phi_inverse: xi must be >= 0")
    if l < 0 or int(l) != l:
        raise DomainError("sphere_phi_inverse: l must be a non-negative integer")
    r, g = cfg.radius, cfg.g
    x = xi * r
    if x == 0.0:
        ik = 1.0 if l == 0 else 0.5 / (2.0 * l + 1.0)
    else:
        # scaled product: e^{-x} I * e^{x} K has cancelling scales
        ik = float(_sp.ive(l + 0.5, x) * _sp.kve(l + 0.5, x))
    return (-g * r / (4.0 * math.pi)) / (1.0 + g / (4.0 * math.pi * r * r) * ik)


def sphere_large_separation_energy(cfg, d, quad=None):
    """Sphere pair at separations d >> R: the two-point energy with the
    same contact coupling."""
    _check_pos("sphere_large_separation_energy: d", d)
    if d <= 2.0 * cfg.radius:
        raise DomainError("sphere_large_separation_energy: spheres overlap")
    return casimir_polder_two_point(cfg.g, d, quad)


def _cylinder_logdet(xi, cfg, l_max):
    """log det(1 - N N) in the angular-momentum basis at frequency xi.

    The raw matrix N_{l,l'} = g R K_{l+l'}(xi d) I_{l'}^2 / (1 + g R I K)
    has entries spanning hundreds of decades at small xi; a diagonal
    similarity by I_l(xi R) balances them to I_l K_{l+l'} I_{l'}, which
    behaves like xi^(|l|+|l'|-|l+l'|) >= xi^0, without changing the
    determinant.  Entries are assembled from log magnitudes to avoid
    intermediate over/underflow.
    """
    r, d, g = cfg.radius, cfg.separation, cfg.g
    ls = np.arange(-l_max, l_max + 1)
    x = xi * r
    iv = _sp.ive(np.abs(ls), x)          # e^{-x} I_l(x)
    kv = _sp.kve(np.abs(ls), x)          # e^{+x} K_l(x)
    denom = 1.0 + g * r * iv * kv        # scales cancel in the product
    orders = np.abs(ls[:, None] + ls[None, :])
    with np.errstate(divide="ignore"):
        log_iv = np.log(iv) + x
        log_kt = np.log(_sp.kve(orders, xi * d)) - xi * d
    log_n = (
        math.log(g * r)
        + log_kt
        + log_iv[:, None]
        + log_iv[None, :]
        - np.log(denom)[None, :]
    )
    nmat = np.where(np.isneginf(log_n), 0.0, np.exp(np.minimum(log_n, 700.0)))
    m = nmat @ nmat
    sign, logdet = np.linalg.slogdet(np.eye(m.shape[0]) - m)
    if sign <= 0:
        raise ValidityError(
            "cylinder_energy_per_length: det(1 - M) <= 0 at xi=%g" % xi,
            diagnostics={"xi": xi},
        )
    return logdet


def cylinder_energy_per_length(cfg, quad=None):
    """Interaction energy per unit length of two parallel cylinders.

    E/L = (1/4 pi) int_0^inf xi log det(1 - N N) dxi, where N couples
    angular momenta |l| <= l_max on each cylinder.  l_max is doubled
    until the relative change drops below 1e-4 (starting from
    cfg.l_max); raises ConvergenceError via the quadrature if the
    frequency integral fails.
    """
    quad = quad or QuadratureSpec()
    d = cfg.separation

    def run(l_max):
        def f(xi):
            if xi * d > 60.0:
                return 0.0
            return xi * _cylinder_logdet(xi, cfg, l_max) / (4.0 * math.pi)

        value, _ = integrate_semiinfinite(f, quad, scale=1.0 / d)
        return value

    l_max = max(cfg.l_max, 1)
    value = run(l_max)
    while l_max < 64:
        nxt = run(2 * l_max)
        if abs(nxt - value) <= 1e-4 * abs(nxt):
            return nxt
        value, l_max = nxt, 2 * l_max
    return value


def cylinder_asymptote(cfg):
    """Leading thin-cylinder energy per length, -1/(8 pi d^2 ln^2(R/d))."""
    r, d = cfg.radius, cfg.separation
    ell = math.log(r / d)
    if abs(ell) < 0.1:
        raise DomainError("cylinder_asymptote: |ln(R/d)| too small")
    return -1.0 / (8.0 * math.pi * d * d * ell * ell)
