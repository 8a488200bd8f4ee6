r"""Geometry configs and single-lattice momentum-space building blocks.

Two parallel periodic arrays of identical renormalized point scatterers
are described either as chains (period a along x, transverse separation
b, longitudinal offset c) or as square lattices (period a in x and y,
separation b along z, in-plane offset vector c).

The scatterer strength g is the renormalized contact coupling; it is a
free positive parameter of the model with dimensions of length.

The central object is the momentum-space single-lattice function

    phi(i xi, k) = 1/g - sum'_n exp(-xi |a_n|) cos(k . a_n) / (4 pi |a_n|)

(the primed sum omits the origin).  phi is periodic in k with the
reciprocal lattice period.  For chains the sum has a closed form; for
square lattices it is evaluated either by direct summation with a tail
bound or by an Ewald split that stays accurate down to xi = 0.

A zero of phi marks a band / bound state of the single lattice; the
two-lattice energy integrand is invalid there, so evaluations close to
a zero raise SingularCouplingError instead of returning a number.
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import special as _sp

from .errors import DomainError, SingularCouplingError

__all__ = [
    "ChainPairConfig",
    "Lattice2DPairConfig",
    "TruncationSpec",
    "MomentumDecomposition",
    "reduce_displacement",
    "j1_lattice_sum",
    "phi_tilde_1d",
    "phi_tilde_2d",
    "lattice_offset_constant",
    "effective_area_coupling",
]

# Relative floor below which |phi| counts as a zero crossing.
_PHI_GUARD = 1e-12


def _check_positive(name, value):
    if not (value > 0.0 and math.isfinite(value)):
        raise DomainError("%s must be positive and finite" % name)


@dataclass(frozen=True)
class ChainPairConfig:
    """Two parallel chains: period a, separation b, offset c along the axis.

    c is stored reduced into [0, a).  d is the distance between closest
    scatterers of the two chains.
    """

    a: float
    b: float
    g: float
    c: float = 0.0

    def __post_init__(self):
        _check_positive("ChainPairConfig.a", self.a)
        _check_positive("ChainPairConfig.b", self.b)
        _check_positive("ChainPairConfig.g", self.g)
        if not math.isfinite(self.c):
            raise DomainError("ChainPairConfig.c must be finite")
        object.__setattr__(self, "c", self.c % self.a)

    @property
    def d(self):
        off = min(self.c, self.a - self.c)
        return math.hypot(self.b, off)


@dataclass(frozen=True)
class Lattice2DPairConfig:
    """Two parallel square lattices: period a, separation b, offset (cx, cy)."""

    a: float
    b: float
    g: float
    cx: float = 0.0
    cy: float = 0.0

    def __post_init__(self):
        _check_positive("Lattice2DPairConfig.a", self.a)
        _check_positive("Lattice2DPairConfig.b", self.b)
        _check_positive("Lattice2DPairConfig.g", self.g)
        for name in ("cx", "cy"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError("Lattice2DPairConfig.%s must be finite" % name)
        object.__setattr__(self, "cx", self.cx % self.a)
        object.__setattr__(self, "cy", self.cy % self.a)

    @property
    def d(self):
        ox = min(self.cx, self.a - self.cx)
        oy = min(self.cy, self.a - self.cy)
        return math.sqrt(self.b ** 2 + ox ** 2 + oy ** 2)


def reduce_displacement(cfg):
    """Return an equivalent config with offsets folded into [0, a).

    Construction already folds, so this is idempotent; it exists so
    callers can normalize values coming from user input explicitly.
    """
    if isinstance(cfg, ChainPairConfig):
        return replace(cfg, c=cfg.c % cfg.a)
    if isinstance(cfg, Lattice2DPairConfig):
        return replace(cfg, cx=cfg.cx % cfg.a, cy=cfg.cy % cfg.a)
    raise DomainError("reduce_displacement: unsupported config type")


@dataclass(frozen=True)
class TruncationSpec:
    """Cutoffs for lattice sums.

    n_direct  : shell cutoff (sup norm) for direct-space sums.
    n_recip   : reciprocal shell cutoff for the scattering kernel sum.
    ewald_split : Ewald splitting parameter eta; None picks pi/a.
    tail_tol  : relative bound the truncated tail must satisfy.
    """

    n_direct: int = 40
    n_recip: int = 8
    ewald_split: float | None = None
    tail_tol: float = 1e-8

    def __post_init__(self):
        if self.n_direct < 1:
            raise DomainError("TruncationSpec.n_direct must be >= 1")
        if self.n_recip < 1:
            raise DomainError("TruncationSpec.n_recip must be >= 1")
        if self.ewald_split is not None and self.ewald_split <= 0:
            raise DomainError("TruncationSpec.ewald_split must be positive")
        if not 0.0 < self.tail_tol < 1.0:
            raise DomainError("TruncationSpec.tail_tol must be in (0, 1)")

    def eta(self, a):
        return self.ewald_split if self.ewald_split is not None else math.pi / a


@dataclass(frozen=True)
class MomentumDecomposition:
    """k = q + (2 pi / a) N split into zone momentum and reciprocal index."""

    q: tuple
    n: tuple
    a: float

    @property
    def k(self):
        step = 2.0 * math.pi / self.a
        return tuple(qi + step * ni for qi, ni in zip(self.q, self.n))

    @staticmethod
    def fold(k, a):
        """Fold a momentum (tuple) into the first zone (-pi/a, pi/a]."""
        step = 2.0 * math.pi / a
        n = tuple(int(math.floor(ki / step + 0.5)) for ki in k)
        q = tuple(ki - step * ni for ki, ni in zip(k, n))
        return MomentumDecomposition(q=q, n=n, a=a)


# ----------------------------------------------------------------------
# Square-lattice screened sum J1(xi, k) = sum'_n e^{-xi r} cos(k.a_n)/r
# ----------------------------------------------------------------------

def _j1_direct_grid(xi, k1, k2, a, trunc):
    """Direct-space evaluation on a broadcast grid of zone momenta.

    Requires xi > 0; the tail beyond the shell cutoff is bounded by the
    integral 2 pi exp(-xi a n)/ (a^2 xi) and must sit below tail_tol.
    """
    if xi <= 0.0:
        raise DomainError("j1_lattice_sum: direct summation requires xi > 0")
    n = trunc.n_direct
    out = np.zeros(np.broadcast_shapes(np.shape(k1), np.shape(k2)))
    idx = np.arange(-n, n + 1)
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    for n1 in idx:
        x1 = n1 * a
        for n2 in idx:
            if n1 == 0 and n2 == 0:
                continue
            x2 = n2 * a
            r = math.hypot(x1, x2)
            out = out + (math.exp(-xi * r) / r) * np.cos(k1 * x1 + k2 * x2)
    tail = 2.0 * math.pi * math.exp(-xi * a * n) / (a * a * xi)
    ref = float(np.max(np.abs(out))) + 2.0 * math.pi / (a * a * math.hypot(xi, 1e-300))
    if tail > trunc.tail_tol * max(ref, 1e-300):
        raise DomainError(
            "j1_lattice_sum: direct tail bound %.2e exceeds tail_tol; "
            "increase n_direct or use the Ewald path" % tail
        )
    return out


def _ewald_short(r, xi, eta):
    """Short-range Ewald kernel S(r), the erfc-screened Yukawa term."""
    z1 = eta * r - 0.5 * xi / eta
    z2 = eta * r + 0.5 * xi / eta
    expo = math.exp(-(eta * r) ** 2 - (0.5 * xi / eta) ** 2)
    if z1 >= 0.0:
        t1 = _sp.erfcx(z1) * expo
    else:
        t1 = math.exp(-xi * r) * _sp.erfc(z1)
    t2 = _sp.erfcx(z2) * expo
    return 0.5 * (t1 + t2) / r


def _j1_ewald_grid(xi, k1, k2, a, trunc):
    """Ewald evaluation, uniformly accurate including xi = 0.

    Valid for zone momenta; J1 is periodic so callers fold first.  The
    (xi, k) = (0, 0) point is a genuine divergence and is rejected.
    """
    eta = trunc.eta(a)
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    if xi == 0.0 and np.any((k1 ** 2 + k2 ** 2) == 0.0):
        raise DomainError("j1_lattice_sum diverges at xi=0, k=0")

    # Direct-space part: erfc decay, a handful of shells suffices.
    n_r = max(2, int(math.ceil((6.0 + 0.5 * xi / eta) / (eta * a))))
    shape = np.broadcast_shapes(k1.shape, k2.shape)
    out = np.zeros(shape)
    for n1 in range(-n_r, n_r + 1):
        for n2 in range(-n_r, n_r + 1):
            if n1 == 0 and n2 == 0:
                continue
            r = a * math.hypot(n1, n2)
            s = _ewald_short(r, xi, eta)
            if s == 0.0:
                continue
            out = out + s * np.cos(k1 * (n1 * a) + k2 * (n2 * a))

    # Reciprocal part: 2 pi erfc(gamma/(2 eta)) / (a^2 gamma).
    step = 2.0 * math.pi / a
    m_r = max(3, int(math.ceil(2.0 * eta * 6.5 / step)) + 1)
    for m1 in range(-m_r, m_r + 1):
        g1 = k1 + step * m1
        for m2 in range(-m_r, m_r + 1):
            g2 = k2 + step * m2
            gam = np.sqrt(xi * xi + g1 * g1 + g2 * g2)
            out = out + (2.0 * math.pi / (a * a)) * _sp.erfc(0.5 * gam / eta) / gam

    # Subtract the long-range self term (n = 0 of the smooth part).
    l0 = (2.0 * eta / math.sqrt(math.pi)) * math.exp(-(0.5 * xi / eta) ** 2) \
        - xi * _sp.erfc(0.5 * xi / eta)
    return out - l0


def j1_lattice_sum(xi, k, a, trunc=None, method="auto"):
    """Screened square-lattice sum J1(i xi, k) (real, scalar interface).

    Parameters
    ----------
    xi : float, >= 0 (xi = 0 requires the Ewald path and k != 0)
    k : pair of floats, in-plane momentum (folded internally).
    a : float, lattice period.
    trunc : TruncationSpec
    method : "auto" | "direct" | "ewald"
    """
    if xi < 0.0:
        raise DomainError("j1_lattice_sum: xi must be >= 0")
    _check_positive("j1_lattice_sum: a", a)
    trunc = trunc or TruncationSpec()
    dec = MomentumDecomposition.fold(tuple(k), a)
    k1, k2 = dec.q
    if method == "auto":
        method = "direct" if xi * a >= 2.0 else "ewald"
    if method == "direct":
        return float(_j1_direct_grid(xi, np.float64(k1), np.float64(k2), a, trunc))
    if method == "ewald":
        return float(_j1_ewald_grid(xi, np.float64(k1), np.float64(k2), a, trunc))
    raise DomainError("j1_lattice_sum: unknown method %r" % (method,))


def _phi_guard_check(phi, g, where):
    scale = 1.0 / g
    bad = np.abs(phi) < _PHI_GUARD * scale
    if np.any(bad):
        raise SingularCouplingError(
            "phi passed through zero (%s): lattice band/bound state; "
            "the two-lattice integrand is invalid here" % where,
            diagnostics={"min_abs_phi": float(np.min(np.abs(phi)))},
        )


def _phi_tilde_1d_arr(xi, k1, cfg):
    """Closed form of the chain function, vectorized over k1.

    The screened sum over the chain equals -(1/a) log(arg) with
    arg = (1 - e^{-xi a})^2 + 2 e^{-xi a} (1 - cos k1 a), hence

        phi = 1/g + log(arg) / (4 pi a).

    arg -> 0 only at (xi, k1) -> (0, reciprocal points), where the sum
    genuinely diverges.
    """
    a = cfg.a
    x = math.exp(-xi * a)
    k1 = np.asarray(k1, dtype=float)
    arg = (1.0 - x) ** 2 + 2.0 * x * (1.0 - np.cos(k1 * a))
    if np.any(arg <= 0.0) or xi < 0.0:
        raise DomainError("phi_tilde_1d diverges at xi=0 on the reciprocal lattice")
    phi = 1.0 / cfg.g + np.log(arg) / (4.0 * math.pi * a)
    _phi_guard_check(phi, cfg.g, "chain")
    return phi


def phi_tilde_1d(xi, k1, cfg):
    """Chain single-lattice function phi(i xi, k1); scalar interface."""
    return float(_phi_tilde_1d_arr(xi, np.float64(k1), cfg))


def _phi_tilde_2d_grid(xi, k1, k2, cfg, trunc, method="ewald"):
    if method == "ewald":
        j1 = _j1_ewald_grid(xi, k1, k2, cfg.a, trunc)
    else:
        j1 = _j1_direct_grid(xi, k1, k2, cfg.a, trunc)
    phi = 1.0 / cfg.g - j1 / (4.0 * math.pi)
    _phi_guard_check(phi, cfg.g, "lattice2d")
    return phi


def phi_tilde_2d(xi, k, cfg, trunc=None, method="auto"):
    """Square-lattice single-lattice function phi(i xi, k); scalar."""
    trunc = trunc or TruncationSpec()
    dec = MomentumDecomposition.fold(tuple(k), cfg.a)
    k1, k2 = dec.q
    if method == "auto":
        method = "direct" if xi * cfg.a >= 2.0 else "ewald"
    return float(
        _phi_tilde_2d_grid(xi, np.float64(k1), np.float64(k2), cfg, trunc, method)
    )


def lattice_offset_constant(a, trunc=None):
    """Regular part of J1 at the origin of (xi, k) space.

    J1 = 2 pi / (a^2 gamma) + C/a + O(gamma); returns the dimensionless
    C (negative for the square lattice).  Evaluated from the Ewald form
    at a small screening value, which is accurate to O(gamma).
    """
    trunc = trunc or TruncationSpec()
    gamma = 1e-7 / a
    j1 = float(_j1_ewald_grid(gamma, np.float64(0.0), np.float64(0.0), a, trunc))
    return a * (j1 - 2.0 * math.pi / (a * a * gamma))


def effective_area_coupling(cfg, trunc=None):
    """Coupling per unit area of the continuous sheet a lattice mimics.

    In the dense-lattice limit the lattice reflects like a delta sheet
    whose area coupling includes the lattice's own screened self-sum:
        1 / g_area = a^2 / g - a^2 * C / (4 pi a)
    with C = lattice_offset_constant(a).  Using the bare g/a^2 instead
    leaves an O(a/b) mismatch in energy comparisons.
    """
    c = lattice_offset_constant(cfg.a, trunc)
    inv = cfg.a ** 2 / cfg.g - cfg.a * c / (4.0 * math.pi)
    if inv <= 0.0:
        raise DomainError("effective_area_coupling: not defined for this g, a")
    return 1.0 / inv
