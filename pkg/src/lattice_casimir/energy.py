r"""Two-lattice vacuum interaction energy on the imaginary frequency axis.

The energy per unit cell of two parallel scatterer arrays is

    E0 = (1/2) int_0^inf dxi/pi  (cell) int_BZ dq/(2 pi)^dim  log(1 - |h|^2)

where h(i xi, q) is the dimensionless scattering kernel built from the
free propagator between the arrays and the single-lattice function phi.
For chains,

    h = (1/(2 pi a)) sum_N K_0(kappa_N b) e^{i 2 pi N c / a} / (-phi(q)),
    kappa_N = sqrt(xi^2 + (q + 2 pi N / a)^2),

and for square lattices,

    h = (1/a^2) sum_N e^{-gamma_N b + i (2 pi / a) N . c} / (-2 gamma_N phi(q)),
    gamma_N = sqrt(xi^2 + |q + (2 pi / a) N|^2).

phi is periodic, so it is evaluated once per zone momentum and pulled
out of the reciprocal sum.  The chain prefactor deserves a note: naive
bookkeeping can produce a spurious factor 2 in the denominator, and the
constant used here is fixed by two independent checks, the isolated-pair
limit a -> infinity (|h| -> g e^{-xi d} / (4 pi d)) and agreement with
the position-space determinant of finite arrays (finite_lattice_energy).

Validity: the formula requires |h| < 1.  Near a zero of phi (a band of
the single lattice) |h| diverges on a codimension-one sheet in (xi, q).
When the free propagator is strongly suppressed there (gamma * b >= 4,
gamma^2 = xi^2 + q^2) the window where |h| >= 1 is exponentially thin,
its logarithm has an integrable principal value, and dropping it changes
the integral by far less than the quadrature tolerance; grid points
inside such a window contribute zero and are counted in the diagnostics.
An unsuppressed violation (gamma * b < 4) indicates a finite invalid
region and raises ValidityError.

The outer xi integral is adaptive; the zone integral uses fixed
composite Gauss-Legendre panels, geometrically refined toward q = 0
when the transverse separation exceeds the period (the integrand then
concentrates in a small corner of the zone).
"""

import math
import threading
from dataclasses import dataclass, field

import numpy as np
from scipy import special as _sp

from .errors import DomainError, MatrixConditionError, ValidityError
from .lattice import (
    ChainPairConfig,
    Lattice2DPairConfig,
    TruncationSpec,
    _ewald_short,
    _phi_tilde_1d_arr,
    _phi_tilde_2d_grid,
)
from .special import QuadratureSpec, gauss_rule, integrate_semiinfinite

__all__ = [
    "EnergyResult",
    "FiniteLatticeSpec",
    "kernel_h_1d",
    "kernel_h_2d",
    "energy_1d",
    "energy_2d",
    "finite_lattice_energy",
    "chain_sites",
    "richardson_per_cell",
]

# Reciprocal-shell terms whose propagator exponent exceeds this are
# dropped; e^{-42} is far below every tail tolerance in use.
_EXP_CUT = 42.0


@dataclass
class EnergyResult:
    """Energy value with its quadrature error estimate and diagnostics.

    diagnostics keys: max_h2 (largest |h|^2 met on the grid),
    truncation_residual (bound on the dropped reciprocal tail),
    xi_evals (outer integrand evaluations), q_nodes (inner grid size).
    """

    value: float
    error_estimate: float
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class FiniteLatticeSpec:
    """Explicit finite arrays for the position-space oracle.

    sites_a / sites_b are (n, 3) arrays of scatterer positions; g is the
    common coupling.
    """

    sites_a: np.ndarray
    sites_b: np.ndarray
    g: float

    def __post_init__(self):
        for name in ("sites_a", "sites_b"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] < 1:
                raise DomainError("FiniteLatticeSpec.%s must be (n, 3)" % name)
            object.__setattr__(self, name, arr)
        if not self.g > 0:
            raise DomainError("FiniteLatticeSpec.g must be positive")


def _bz_edges(a, b, n_max=8):
    """Panel edges on [0, pi/a], geometrically refined toward zero.

    Resolves momenta down to ~1/b when b >> a; a single panel otherwise.
    """
    big_q = math.pi / a
    target = min(big_q, 1.0 / b)
    level = 0
    while big_q * 4.0 ** (-level) > target and level < n_max:
        level += 1
    edges = [0.0] + [big_q * 4.0 ** (-j) for j in range(level, -1, -1)]
    return edges


def _composite_nodes(edges, order):
    x, w = gauss_rule(order)
    qs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        qs.append(0.5 * (hi - lo) * x + 0.5 * (hi + lo))
        ws.append(0.5 * (hi - lo) * w)
    return np.concatenate(qs), np.concatenate(ws)


def _shell_range(b, a, n_recip):
    """Largest reciprocal shell whose propagator can matter."""
    n = 0
    while n < n_recip:
        # Minimal transverse exponent on shell n+1 over the zone.
        if (2.0 * (n + 1) - 1.0) * math.pi * b / a > _EXP_CUT:
            break
        n += 1
    return n


def _chain_kernel_sum(xi, q, cfg, trunc, diag=None):
    """S(q) = sum_N K_0(kappa_N b) e^{i 2 pi N c / a} over kept shells."""
    a, b, c = cfg.a, cfg.b, cfg.c
    n_keep = _shell_range(b, a, trunc.n_recip)
    step = 2.0 * math.pi / a
    acc = np.zeros(np.shape(q), dtype=complex)
    for n in range(-n_keep, n_keep + 1):
        k1 = q + step * n
        kap = np.hypot(xi, k1)
        acc = acc + _sp.k0(kap * b) * np.exp(1j * (step * n) * c)
    if diag is not None:
        edge = step * (n_keep + 1) - math.pi / a
        resid = float(_sp.k0(math.hypot(xi, edge) * b)) if edge * b < 600 else 0.0
        diag["truncation_residual"] = max(diag.get("truncation_residual", 0.0), 2 * resid)
    return acc


def _abs_h2_1d(xi, q, cfg, trunc, diag=None):
    phi = _phi_tilde_1d_arr(xi, q, cfg)
    s = _chain_kernel_sum(xi, q, cfg, trunc, diag)
    h = -s / (2.0 * math.pi * cfg.a * phi)
    return np.abs(h) ** 2


def kernel_h_1d(xi, q, cfg, trunc=None):
    """Chain scattering kernel h(i xi, q); complex scalar.

    Raises ValidityError if |h| >= 1 at the requested point.
    """
    if xi < 0:
        raise DomainError("kernel_h_1d: xi must be >= 0")
    trunc = trunc or TruncationSpec()
    phi = _phi_tilde_1d_arr(xi, np.float64(q), cfg)
    s = _chain_kernel_sum(xi, np.float64(q), cfg, trunc)
    h = complex(-s / (2.0 * math.pi * cfg.a * phi))
    if abs(h) >= 1.0:
        raise ValidityError(
            "kernel_h_1d: |h| >= 1 at xi=%g, q=%g" % (xi, q),
            diagnostics={"abs_h": abs(h), "xi": xi, "q": q},
        )
    return h


def _recip_offset_kernel(kappa, b, eta):
    """Reciprocal-space Ewald kernel for a sum displaced by height b.

    g(kappa) = (pi/kappa) [e^{b kappa} erfc(kappa/(2 eta) + b eta)
                         + e^{-b kappa} erfc(kappa/(2 eta) - b eta)]
    evaluated in overflow-safe form.
    """
    z1 = 0.5 * kappa / eta + b * eta
    t1 = _sp.erfcx(z1) * np.exp(-0.25 * (kappa / eta) ** 2 - (b * eta) ** 2)
    t2 = np.exp(-b * kappa) * _sp.erfc(0.5 * kappa / eta - b * eta)
    return (math.pi / kappa) * (t1 + t2)


def _lattice2d_kernel_grid(xi, q1, q2, cfg, trunc, diag=None):
    """|h|^2 on the tensor grid q1 x q2 for the square-lattice pair.

    The propagator sum over reciprocal vectors converges like
    exp(-2 pi |N| b / a), which is useless for b << a, so the sum is
    Ewald-split instead: short-range real-space images (a few shells at
    any separation) plus an erfc-damped reciprocal part.  Both halves
    are summed to machine-level tails; n_recip caps the reciprocal part.
    """
    a, b = cfg.a, cfg.b
    phi = _phi_tilde_2d_grid(xi, q1[:, None], q2[None, :], cfg, trunc)
    eta = trunc.eta(a)

    # Real-space images: S(r_n) decays like erfc(eta r - xi/(2 eta)).
    n_r = max(2, int(math.ceil((6.5 + 0.5 * xi / eta) / (eta * a))))
    real = np.zeros((q1.size, q2.size), dtype=complex)
    e2 = np.exp(-1j * q2 * a)  # phase step per image along y
    for n1 in range(-n_r, n_r + 1):
        x1 = n1 * a + cfg.cx
        col = np.zeros(q2.size, dtype=complex)
        for n2 in range(-n_r, n_r + 1):
            r = math.sqrt(b * b + x1 * x1 + (n2 * a + cfg.cy) ** 2)
            s = _ewald_short(r, xi, eta)
            if s != 0.0:
                col += s * np.exp(-1j * q2 * (n2 * a))
        real += np.outer(np.exp(-1j * q1 * (n1 * a)), col)

    # Reciprocal part with the height-offset kernel.
    step = 2.0 * math.pi / a
    recip = np.zeros((q1.size, q2.size), dtype=complex)
    m_cut = trunc.n_recip
    kept = 0
    for shell in range(0, m_cut + 1):
        # Worst-case kappa on this shell.
        kap_min = max(xi, step * max(shell - 1, 0))
        if shell > 2 and 0.5 * kap_min / eta - b * eta > 7.0 and b * kap_min > _EXP_CUT:
            break
        for m1 in range(-shell, shell + 1):
            for m2 in range(-shell, shell + 1):
                if max(abs(m1), abs(m2)) != shell:
                    continue
                g1 = q1 + step * m1
                g2 = q2 + step * m2
                kap = np.sqrt(xi * xi + g1[:, None] ** 2 + g2[None, :] ** 2)
                ph = step * (m1 * cfg.cx + m2 * cfg.cy)
                recip = recip + _recip_offset_kernel(kap, b, eta) * np.exp(1j * ph)
        kept = shell
    phase = np.exp(1j * (np.multiply.outer(q1 * cfg.cx, np.ones(q2.size))
                         + np.multiply.outer(np.ones(q1.size), q2 * cfg.cy)))
    total = real + phase * recip / (a * a)
    h2 = (np.abs(total) / (4.0 * math.pi * np.abs(phi))) ** 2
    if diag is not None:
        kap_edge = max(xi, step * kept)
        resid = float(
            _recip_offset_kernel(np.float64(kap_edge), b, eta)
        ) * 8 * (kept + 1) / (a * a)
        diag["truncation_residual"] = max(
            diag.get("truncation_residual", 0.0),
            resid / (4.0 * math.pi * float(np.min(np.abs(phi)))),
        )
    return h2


def kernel_h_2d(xi, q, cfg, trunc=None):
    """Square-lattice scattering kernel h(i xi, q).

    Returns |h| with the sign of its dominant real part folded in as a
    complex number of the grid representation; only |h| is physically
    meaningful and the scalar interface reports -|T| / (4 pi phi) with
    the same modulus as the grid path.
    """
    if xi < 0:
        raise DomainError("kernel_h_2d: xi must be >= 0")
    trunc = trunc or TruncationSpec()
    q1 = np.atleast_1d(np.float64(q[0]))
    q2 = np.atleast_1d(np.float64(q[1]))
    phi = float(_phi_tilde_2d_grid(xi, q1[:, None], q2[None, :], cfg, trunc)[0, 0])
    h2 = float(_lattice2d_kernel_grid(xi, q1, q2, cfg, trunc)[0, 0])
    if h2 >= 1.0:
        raise ValidityError(
            "kernel_h_2d: |h| >= 1 at xi=%g, q=%s" % (xi, tuple(q)),
            diagnostics={"abs_h": math.sqrt(h2), "xi": xi},
        )
    return complex(-math.copysign(math.sqrt(h2), phi))


class _DiagSink:
    """Thread-safe max/sum collector for integrand diagnostics."""

    def __init__(self):
        self._lock = threading.Lock()
        self.data = {
            "max_h2": 0.0,
            "truncation_residual": 0.0,
            "xi_evals": 0,
            "clipped_nodes": 0,
        }

    def update(self, h2max, local):
        with self._lock:
            self.data["max_h2"] = max(self.data["max_h2"], h2max)
            self.data["truncation_residual"] = max(
                self.data["truncation_residual"],
                local.get("truncation_residual", 0.0),
            )
            self.data["xi_evals"] += 1

    def count_clipped(self, n):
        with self._lock:
            self.data["clipped_nodes"] += n


# Threshold on gamma * b separating a thin, exponentially suppressed
# band-zero window (clip to zero) from a genuine invalid region (raise).
_SHELL_GAMMA_B = 4.0


def _screen_band_shell(kind, xi, h2, gamma_b, sink):
    """Zero out |h|^2 >= 1 nodes inside thin band-zero windows.

    A node violating |h| < 1 under strong propagator suppression
    (gamma * b >= 4) sits in an exponentially narrow window around a
    zero of phi; its principal value is integrable and its measure is
    negligible, so the node contributes zero and is tallied in the
    diagnostics.  Any unsuppressed violation aborts.
    """
    bad = h2 >= 1.0
    if not np.any(bad):
        return h2
    if np.any(bad & (gamma_b < _SHELL_GAMMA_B)):
        _validity_abort(kind, xi, h2)
    sink.count_clipped(int(np.count_nonzero(bad)))
    return np.where(bad, 0.0, h2)


def _validity_abort(kind, xi, h2):
    flat = int(np.argmax(h2))
    raise ValidityError(
        "%s: |h|^2 >= 1 on the integration grid (xi=%g, max |h|^2=%.6g); "
        "parameters lie outside the validity region of the two-body "
        "formula" % (kind, xi, float(np.max(h2))),
        diagnostics={"xi": xi, "max_h2": float(np.max(h2)), "argmax": flat},
    )


def energy_1d(cfg, trunc=None, quad=None):
    """Vacuum interaction energy per unit cell of two parallel chains.

    Returns an EnergyResult with value <= 0 for valid parameters.
    """
    if not isinstance(cfg, ChainPairConfig):
        raise DomainError("energy_1d expects a ChainPairConfig")
    trunc = trunc or TruncationSpec()
    quad = quad or QuadratureSpec()
    a = cfg.a
    qn, qw = _composite_nodes(_bz_edges(a, cfg.b), quad.q_order)
    sink = _DiagSink()

    def outer(xi):
        if xi * cfg.b > 46.0:  # integrand below 1e-40 of its peak
            return 0.0
        local = {}
        h2 = _abs_h2_1d(xi, qn, cfg, trunc, local)
        h2 = _screen_band_shell(
            "energy_1d", xi, h2, np.hypot(xi, qn) * cfg.b, sink
        )
        sink.update(float(np.max(h2)), local)
        # measure: (1/2)(1/pi) * a * (1/(2 pi)) * 2 * int_0^{pi/a} dq
        return (a / (2.0 * math.pi ** 2)) * float(qw @ np.log1p(-h2))

    value, err = integrate_semiinfinite(outer, quad, scale=1.0 / (2.0 * cfg.b))
    diag = dict(sink.data)
    diag["q_nodes"] = qn.size
    return EnergyResult(value=value, error_estimate=err, diagnostics=diag)


def energy_2d(cfg, trunc=None, quad=None):
    """Vacuum interaction energy per unit cell of two square lattices."""
    if not isinstance(cfg, Lattice2DPairConfig):
        raise DomainError("energy_2d expects a Lattice2DPairConfig")
    trunc = trunc or TruncationSpec()
    quad = quad or QuadratureSpec()
    a = cfg.a
    edges = _bz_edges(a, cfg.b)
    full_edges = [-e for e in edges[::-1]] + edges[1:]
    # Mirror symmetry in a momentum component holds when the matching
    # offset component vanishes; otherwise that component must run over
    # the full zone.
    if cfg.cx == 0.0:
        q1, w1 = _composite_nodes(edges, quad.q_order)
        m1 = 2.0
    else:
        q1, w1 = _composite_nodes(full_edges, quad.q_order)
        m1 = 1.0
    if cfg.cy == 0.0:
        q2, w2 = _composite_nodes(edges, quad.q_order)
        m2 = 2.0
    else:
        q2, w2 = _composite_nodes(full_edges, quad.q_order)
        m2 = 1.0
    sym = m1 * m2
    sink = _DiagSink()

    def outer(xi):
        if xi * cfg.b > 46.0:
            return 0.0
        local = {}
        h2 = _lattice2d_kernel_grid(xi, q1, q2, cfg, trunc, local)
        gamma_b = (
            np.sqrt(xi * xi + q1[:, None] ** 2 + q2[None, :] ** 2) * cfg.b
        )
        h2 = _screen_band_shell("energy_2d", xi, h2, gamma_b, sink)
        sink.update(float(np.max(h2)), local)
        inner = float(w1 @ np.log1p(-h2) @ w2)
        # measure: (1/2)(1/pi) * a^2 / (2 pi)^2 * sym * inner
        return (a * a * sym / (8.0 * math.pi ** 3)) * inner

    value, err = integrate_semiinfinite(outer, quad, scale=1.0 / (2.0 * cfg.b))
    diag = dict(sink.data)
    diag["q_nodes"] = q1.size * q2.size
    return EnergyResult(value=value, error_estimate=err, diagnostics=diag)


# ----------------------------------------------------------------------
# Position-space oracle: explicit finite arrays
# ----------------------------------------------------------------------

def chain_sites(n_sites, a, offset=0.0, z=0.0):
    """Collinear sites along x, centered on the origin."""
    idx = np.arange(n_sites) - (n_sites - 1) / 2.0
    out = np.zeros((n_sites, 3))
    out[:, 0] = idx * a + offset
    out[:, 2] = z
    return out


def _pair_distances(r1, r2):
    diff = r1[:, None, :] - r2[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=-1))


def finite_lattice_energy(spec, quad=None):
    """Interaction energy of two explicit finite arrays (oracle).

    Builds the position-space scattering matrices with free Yukawa
    propagators e^{-xi r}/(4 pi r) and integrates
    log det(1 - Phi_A^{-1} G_AB Phi_B^{-1} G_BA) over xi / (2 pi).
    Independent of every momentum-space ingredient above.
    """
    if not isinstance(spec, FiniteLatticeSpec):
        raise DomainError("finite_lattice_energy expects a FiniteLatticeSpec")
    quad = quad or QuadratureSpec()
    ra, rb = spec.sites_a, spec.sites_b
    daa = _pair_distances(ra, ra)
    dbb = _pair_distances(rb, rb)
    dab = _pair_distances(ra, rb)
    for name, dm in (("A", daa), ("B", dbb)):
        off = dm[~np.eye(dm.shape[0], dtype=bool)]
        if off.size and np.min(off) <= 0:
            raise DomainError("finite_lattice_energy: coincident sites in %s" % name)
    if np.min(dab) <= 0:
        raise DomainError("finite_lattice_energy: arrays overlap")

    # Diagonal dominance at xi = 0 (worst case) keeps the solves sane.
    for name, dm in (("A", daa), ("B", dbb)):
        mask = ~np.eye(dm.shape[0], dtype=bool)
        rows = np.where(mask, 1.0 / (4.0 * math.pi * np.where(mask, dm, 1.0)), 0.0)
        if rows.sum(axis=1).max() >= 1.0 / spec.g:
            raise MatrixConditionError(
                "finite_lattice_energy: scattering matrix for %s is not "
                "diagonally dominant at xi=0; reduce g or thin the array" % name
            )

    eye_a = np.eye(ra.shape[0])
    eye_b = np.eye(rb.shape[0])
    mask_a = ~np.eye(ra.shape[0], dtype=bool)
    mask_b = ~np.eye(rb.shape[0], dtype=bool)
    dmin = float(np.min(dab))

    def yukawa(xi, dm, mask=None):
        out = np.exp(-xi * dm) / (4.0 * math.pi * np.where(dm > 0, dm, 1.0))
        if mask is not None:
            out = np.where(mask, out, 0.0)
        return out

    def outer(xi):
        phi_a = eye_a / spec.g - yukawa(xi, daa, mask_a)
        phi_b = eye_b / spec.g - yukawa(xi, dbb, mask_b)
        gab = yukawa(xi, dab)
        x = np.linalg.solve(phi_a, gab)
        y = np.linalg.solve(phi_b, gab.T)
        sign, logdet = np.linalg.slogdet(eye_a - x @ y)
        if sign <= 0:
            raise ValidityError(
                "finite_lattice_energy: det(1 - M) <= 0 at xi=%g" % xi,
                diagnostics={"xi": xi},
            )
        return logdet / (2.0 * math.pi)

    value, err = integrate_semiinfinite(outer, quad, scale=1.0 / (2.0 * dmin))
    return EnergyResult(
        value=value,
        error_estimate=err,
        diagnostics={"n_a": int(ra.shape[0]), "n_b": int(rb.shape[0])},
    )


def richardson_per_cell(counts, energies):
    """Extrapolate per-cell energies e_N = E_N / N to N -> infinity.

    Assumes e_N = e_inf + alpha / N and uses the two largest N.
    """
    if len(counts) != len(energies) or len(counts) < 2:
        raise DomainError("richardson_per_cell needs >= 2 (N, E) pairs")
    pairs = sorted(zip(counts, energies))
    (n1, e1), (n2, e2) = pairs[-2], pairs[-1]
    per1, per2 = e1 / n1, e2 / n2
    return (n2 * per2 - n1 * per1) / (n2 - n1)
