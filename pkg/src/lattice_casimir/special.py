r"""Special functions and the shared semi-infinite quadrature driver.

Modified Bessel functions are thin wrappers around scipy.special with
domain checks and a uniform ``scaled`` switch; the wrappers exist so the
rest of the package has a single audited entry point (they are
cross-checked against the defining integral representation in the test
suite).  The dilogarithm is evaluated through Spence's function.

``integrate_semiinfinite`` maps (0, inf) onto (0, 1) with the rational
substitution xi = s*t/(1-t) and runs globally adaptive Gauss-Legendre
panels on t.  Gauss nodes are open, so endpoint singularities (log-type
at xi=0 are common here) are never evaluated directly.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special as _sp

from .errors import ConvergenceError, DomainError

__all__ = [
    "QuadratureSpec",
    "bessel_i",
    "bessel_k",
    "dilog",
    "integrate_semiinfinite",
]


def bessel_k(order, x, scaled=False):
    """Modified Bessel function of the second kind, K_order(x).

    Parameters
    ----------
    order : float
        Non-negative order; half-integer orders are accepted.
    x : float or array_like
        Strictly positive argument.
    scaled : bool
        If True, return exp(x) * K_order(x).
    """
    if order < 0:
        raise DomainError("bessel_k: order must be >= 0")
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0.0):
        raise DomainError("bessel_k: argument must be > 0")
    out = _sp.kve(order, xa) if scaled else _sp.kv(order, xa)
    return out if out.ndim else float(out)


def bessel_i(order, x, scaled=False):
    """Modified Bessel function of the first kind, I_order(x).

    With ``scaled`` set, returns exp(-x) * I_order(x), which stays
    bounded for large arguments.
    """
    if order < 0:
        raise DomainError("bessel_i: order must be >= 0")
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0.0):
        raise DomainError("bessel_i: argument must be >= 0")
    out = _sp.ive(order, xa) if scaled else _sp.iv(order, xa)
    return out if out.ndim else float(out)


def dilog(x):
    """Dilogarithm Li2(x) for x in [0, 1)."""
    if not 0.0 <= x < 1.0:
        raise DomainError("dilog: argument must lie in [0, 1)")
    return float(_sp.spence(1.0 - x))


@dataclass(frozen=True)
class QuadratureSpec:
    """Knobs for the nested frequency/momentum quadratures.

    xi_order / q_order are Gauss-Legendre node counts per panel for the
    outer (imaginary frequency) and inner (Brillouin zone) integrals.
    adaptive_tol is the relative target for the outer integral.  xi_min
    optionally clips the lower end of the frequency axis; workers is the
    thread count for independent node evaluations (results are reduced
    in a fixed order, so the value is bit-identical for any count).
    """

    xi_order: int = 64
    q_order: int = 64
    adaptive_tol: float = 1e-6
    xi_min: float = 0.0
    workers: int = 1
    max_rounds: int = 40
    max_panels: int = 2048

    def __post_init__(self):
        if self.xi_order < 4:
            raise DomainError("QuadratureSpec: xi_order must be >= 4")
        if self.q_order < 4:
            raise DomainError("QuadratureSpec: q_order must be >= 4")
        if not 0.0 < self.adaptive_tol < 1.0:
            raise DomainError("QuadratureSpec: adaptive_tol must be in (0, 1)")
        if self.xi_min < 0.0:
            raise DomainError("QuadratureSpec: xi_min must be >= 0")
        if self.workers < 1:
            raise DomainError("QuadratureSpec: workers must be >= 1")


@lru_cache(maxsize=64)
def gauss_rule(order):
    """Cached Gauss-Legendre nodes/weights on (-1, 1)."""
    x, w = _sp.roots_legendre(order)
    return x, w


# Accepted panels must get their summed error estimate below this
# fraction of adaptive_tol * |value|; the reported estimate is then the
# floor itself, which scales linearly in adaptive_tol by construction.
_EST_FLOOR = 0.25


def _map_panel(lo, hi, nodes, weights, scale):
    t = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
    xi = scale * t / (1.0 - t)
    w = 0.5 * (hi - lo) * weights * scale / (1.0 - t) ** 2
    return xi, w


def integrate_semiinfinite(f, spec, scale=1.0):
    """Integrate f over (xi_min, infinity), adaptively.

    Parameters
    ----------
    f : callable
        Scalar integrand of a single positive float.
    spec : QuadratureSpec
    scale : float
        Characteristic decay length of the integrand in xi; sets the
        rational change of variables.

    Returns
    -------
    (value, error_estimate) : tuple of float

    Raises
    ------
    ConvergenceError
        If the target cannot be met within the panel/round budget.  The
        best estimate is attached to the exception.
    """
    if scale <= 0.0 or not math.isfinite(scale):
        raise DomainError("integrate_semiinfinite: scale must be positive and finite")
    nodes, weights = gauss_rule(spec.xi_order)
    t0 = spec.xi_min / (scale + spec.xi_min)

    pool = ThreadPoolExecutor(spec.workers) if spec.workers > 1 else None
    try:
        def batch_eval(xis):
            if pool is None:
                return [f(x) for x in xis]
            return list(pool.map(f, xis))

        def panel_quad(lo, hi):
            xi, w = _map_panel(lo, hi, nodes, weights, scale)
            fv = batch_eval(list(xi))
            return math.fsum(wi * fi for wi, fi in zip(w, fv))

        def measure(lo, hi):
            """Refined value of a panel plus a whole-vs-halves error."""
            whole = panel_quad(lo, hi)
            mid = 0.5 * (lo + hi)
            left = panel_quad(lo, mid)
            right = panel_quad(mid, hi)
            refined = left + right
            return refined, abs(refined - whole)

        # Seed with two panels; the first split already separates the
        # xi -> 0 endpoint from the bulk.
        leaves = []
        for lo, hi in ((t0, 0.5 * (t0 + 1.0)), (0.5 * (t0 + 1.0), 1.0)):
            v, e = measure(lo, hi)
            leaves.append([lo, hi, v, e])

        for _ in range(spec.max_rounds):
            total = math.fsum(leaf[2] for leaf in leaves)
            err = math.fsum(leaf[3] for leaf in leaves)
            floor = _EST_FLOOR * spec.adaptive_tol * max(abs(total), 1e-300)
            if err <= floor:
                return total, max(err, floor)
            if len(leaves) >= spec.max_panels:
                break
            # Split every leaf that carries more than its share.
            share = floor / max(len(leaves), 1)
            new_leaves = []
            for lo, hi, v, e in leaves:
                if e > share and len(new_leaves) + 2 <= spec.max_panels:
                    mid = 0.5 * (lo + hi)
                    vl, el = measure(lo, mid)
                    vr, er = measure(mid, hi)
                    new_leaves.append([lo, mid, vl, el])
                    new_leaves.append([mid, hi, vr, er])
                else:
                    new_leaves.append([lo, hi, v, e])
            leaves = new_leaves

        total = math.fsum(leaf[2] for leaf in leaves)
        err = math.fsum(leaf[3] for leaf in leaves)
        raise ConvergenceError(
            "integrate_semiinfinite: tolerance %.3e not reached (err=%.3e)"
            % (spec.adaptive_tol, err),
            estimate=total,
            error_estimate=err,
        )
    finally:
        if pool is not None:
            pool.shutdown(wait=False)
