"""Command-line front end: parameter sweeps written as CSV tables.

All lengths are entered in units of the lattice spacing (b/a, c/a,
g/a), matching the natural axes for the energy curves.  Every run
writes its resolved configuration as leading '#' key=value lines, then
a header row, then comma-separated values with 17 significant digits,
so files re-parse bit-exactly.

Rows whose evaluation hits a validity guard are written with a flag
column instead of fabricated numbers.  Exit codes: 0 success, 2 usage
error, 3 every row failed the validity guard, 4 quadrature
non-convergence on some row.
"""

import argparse
import math
import sys

from .energy import (
    FiniteLatticeSpec,
    chain_sites,
    energy_1d,
    energy_2d,
    finite_lattice_energy,
    richardson_per_cell,
)
from .errors import ConvergenceError, UsageError, ValidityError
from .lattice import (
    ChainPairConfig,
    Lattice2DPairConfig,
    TruncationSpec,
    effective_area_coupling,
)
from .limits import (
    CylinderPairConfig,
    casimir_polder_closed_form,
    cylinder_asymptote,
    cylinder_energy_per_length,
    lifshitz_delta_planes,
    pairwise_energy_chain,
    wire_limit_energy,
)
from .special import QuadratureSpec

_FMT = "%.17g"


def _parse_list(text):
    try:
        vals = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError("bad list %r: %s" % (text, exc))
    if not vals:
        raise UsageError("empty list %r" % text)
    return vals


def _parse_range(text):
    """start:stop:count[:log] -> list of floats."""
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise UsageError("bad range %r (want start:stop:count[:log])" % text)
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError("bad range %r: %s" % (text, exc))
    if count < 2:
        raise UsageError("range %r: count must be >= 2" % text)
    spacing = parts[3] if len(parts) == 4 else "linear"
    if spacing == "log":
        if start <= 0 or stop <= 0:
            raise UsageError("log range %r needs positive endpoints" % text)
        ls, le = math.log(start), math.log(stop)
        return [math.exp(ls + (le - ls) * i / (count - 1)) for i in range(count)]
    if spacing != "linear":
        raise UsageError("range %r: spacing must be linear or log" % text)
    return [start + (stop - start) * i / (count - 1) for i in range(count)]


def _read_config_file(path):
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError("%s:%d: expected key=value" % (path, lineno))
            key, val = line.split("=", 1)
            out[key.strip().replace("_", "-")] = val.strip()
    return out


def _write_csv(path, meta, header, rows):
    lines = ["# %s=%s" % (k, v) for k, v in meta.items()]
    lines.append(",".join(header))
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, float):
                cells.append(_FMT % cell)
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


class _SweepStatus:
    """Tracks per-row outcomes to decide the process exit code."""

    def __init__(self):
        self.ok = 0
        self.invalid = 0
        self.nonconv = 0

    def exit_code(self):
        if self.nonconv:
            return 4
        if self.ok == 0 and self.invalid > 0:
            return 3
        return 0


def _eval_row(status, fn):
    """Run fn() -> (value, err); return (value, err, flag) cells."""
    try:
        value, err = fn()
    except ValidityError as exc:
        status.invalid += 1
        return 0.0, 0.0, "invalid:%s" % type(exc).__name__
    except ConvergenceError:
        status.nonconv += 1
        return 0.0, 0.0, "nonconverged"
    status.ok += 1
    return value, err, "ok"


def _numerics(args, geometry=None):
    q_order = args.q_order
    if q_order is None:
        q_order = 32 if geometry == "lattice2d" else 64
    quad = QuadratureSpec(
        xi_order=args.xi_order,
        q_order=q_order,
        adaptive_tol=args.tol,
        workers=args.workers,
    )
    trunc = TruncationSpec(n_recip=args.n_recip)
    return quad, trunc


def _pair_energy(geometry, g, b, c, trunc, quad):
    if geometry == "chain":
        cfg = ChainPairConfig(a=1.0, b=b, g=g, c=c)
        res = energy_1d(cfg, trunc, quad)
    else:
        cfg = Lattice2DPairConfig(a=1.0, b=b, g=g, cx=c, cy=0.0)
        res = energy_2d(cfg, trunc, quad)
    return res.value, res.error_estimate


def _meta_common(args, mode):
    meta = {
        "mode": mode,
        "geometry": getattr(args, "geometry", "chain"),
        "xi-order": args.xi_order,
        "q-order": args.q_order if args.q_order is not None else "auto",
        "n-recip": args.n_recip,
        "tol": _FMT % args.tol,
        "workers": args.workers,
    }
    return meta


def _cmd_energy_curve(args):
    gs = _parse_list(args.g_over_a)
    bs = _parse_range(args.b_over_a)
    quad, trunc = _numerics(args, args.geometry)
    status = _SweepStatus()
    rows = []
    for g in gs:
        for b in bs:
            val, err, flag = _eval_row(
                status,
                lambda g=g, b=b: _pair_energy(args.geometry, g, b, args.c_over_a, trunc, quad),
            )
            rows.append((g, b, val, err, flag))
    meta = _meta_common(args, "energy-curve")
    meta["c-over-a"] = _FMT % args.c_over_a
    _write_csv(args.out, meta, ("g_over_a", "b_over_a", "energy", "error_estimate", "flag"), rows)
    return status.exit_code()


def _cmd_displacement(args):
    gs = _parse_list(args.g_over_a)
    betas = _parse_list(args.beta)
    cs = _parse_range(args.c_over_a)
    quad, trunc = _numerics(args, args.geometry)
    status = _SweepStatus()
    rows = []
    for g in gs:
        for beta in betas:
            ref, _ = _pair_energy(args.geometry, g, beta, 0.0, trunc, quad)
            for c in cs:
                val, err, flag = _eval_row(
                    status,
                    lambda g=g, beta=beta, c=c: _pair_energy(args.geometry, g, beta, c, trunc, quad),
                )
                eta = val / ref if flag == "ok" else 0.0
                rows.append((g, beta, c, eta, val, err, flag))
    meta = _meta_common(args, "displacement")
    _write_csv(
        args.out,
        meta,
        ("g_over_a", "beta", "c_over_a", "eta", "energy", "error_estimate", "flag"),
        rows,
    )
    return status.exit_code()


def _cmd_pairwise_compare(args):
    gs = _parse_list(args.g_over_a)
    bs = _parse_range(args.b_over_a)
    quad, trunc = _numerics(args, "chain")
    status = _SweepStatus()
    rows = []
    for g in gs:
        for b in bs:
            val, err, flag = _eval_row(
                status,
                lambda g=g, b=b: _pair_energy("chain", g, b, 0.0, trunc, quad),
            )
            cfg = ChainPairConfig(a=1.0, b=b, g=g, c=0.0)
            pw = pairwise_energy_chain(cfg, n_terms=args.n_terms)
            ratio = pw / val if flag == "ok" and val != 0.0 else 0.0
            rows.append((g, b, val, pw, ratio, err, flag))
    meta = _meta_common(args, "pairwise-compare")
    meta["n-terms"] = args.n_terms
    _write_csv(
        args.out,
        meta,
        ("g_over_a", "b_over_a", "energy_exact", "energy_pairwise", "ratio", "error_estimate", "flag"),
        rows,
    )
    return status.exit_code()


def _cmd_limits_check(args):
    quad, trunc = _numerics(args, args.geometry)
    status = _SweepStatus()
    rows = []
    if args.direction == "large-a":
        # chain vs two-point value at fixed b: sweep a/b upward via b/a down
        ratios = _parse_range(args.a_over_b)
        for aob in ratios:
            b = 1.0 / aob  # b in units of a
            g = args.g_over_a
            val, err, flag = _eval_row(
                status,
                lambda b=b, g=g: _pair_energy(args.geometry, g, b, 0.0, trunc, quad),
            )
            limit = casimir_polder_closed_form(g, b)
            ratio = val / limit if flag == "ok" else 0.0
            rows.append((aob, val, limit, ratio, err, flag))
        header = ("a_over_b", "energy", "limit_two_point", "ratio", "error_estimate", "flag")
    else:
        # small-a: chain against the wire formula, lattice2d against the
        # continuous-sheet integral, both per the a -> 0 reduction
        ratios = _parse_range(args.a_over_b)
        for aob in ratios:
            b = 1.0 / aob
            g = args.g_over_a
            if args.geometry == "chain":
                val, err, flag = _eval_row(
                    status,
                    lambda b=b, g=g: _pair_energy("chain", g, b, 0.0, trunc, quad),
                )
                limit = wire_limit_energy(1.0, b, quad)
                ratio = val / limit if flag == "ok" else 0.0
            else:
                def job(b=b, g=g):
                    cfg = Lattice2DPairConfig(a=1.0, b=b, g=g, cx=0.0, cy=0.0)
                    res = energy_2d(cfg, trunc, quad)
                    return res.value, res.error_estimate

                val, err, flag = _eval_row(status, job)
                cfg = Lattice2DPairConfig(a=1.0, b=b, g=g, cx=0.0, cy=0.0)
                limit = lifshitz_delta_planes(effective_area_coupling(cfg), b, quad)
                ratio = val / limit if flag == "ok" else 0.0
            rows.append((aob, val, limit, ratio, err, flag))
        header = ("a_over_b", "energy", "limit_formula", "ratio", "error_estimate", "flag")
    meta = _meta_common(args, "limits-check")
    meta["direction"] = args.direction
    meta["g-over-a"] = _FMT % args.g_over_a
    _write_csv(args.out, meta, header, rows)
    return status.exit_code()


def _cmd_cylinder_oracle(args):
    quad, _ = _numerics(args)
    ratios = _parse_list(args.r_over_d)
    status = _SweepStatus()
    rows = []
    for rod in ratios:
        cfg = CylinderPairConfig(
            radius=rod, separation=1.0, g=args.g_times_r / rod, l_max=args.l_max
        )

        def job(cfg=cfg):
            return cylinder_energy_per_length(cfg, quad), 0.0

        val, err, flag = _eval_row(status, job)
        asy = cylinder_asymptote(cfg)
        ratio = val / asy if flag == "ok" else 0.0
        rows.append((rod, val, asy, ratio, err, flag))
    meta = _meta_common(args, "cylinder-oracle")
    meta["g-times-r"] = _FMT % args.g_times_r
    _write_csv(
        args.out,
        meta,
        ("r_over_d", "energy_per_length", "asymptote", "ratio", "error_estimate", "flag"),
        rows,
    )
    return status.exit_code()


def _cmd_finite_oracle(args):
    quad, trunc = _numerics(args, "chain")
    counts = [int(v) for v in _parse_list(args.sites)]
    g, b = args.g_over_a, args.b_over_a_value
    status = _SweepStatus()
    per_cell = []
    rows = []
    for n in counts:
        def job(n=n):
            spec = FiniteLatticeSpec(
                sites_a=chain_sites(n, 1.0, offset=0.0, z=b),
                sites_b=chain_sites(n, 1.0, offset=0.0, z=0.0),
                g=g,
            )
            res = finite_lattice_energy(spec, quad)
            return res.value, res.error_estimate

        total, err, flag = _eval_row(status, job)
        if flag == "ok":
            per_cell.append((n, total))
        rows.append([n, total / n, err / n, flag])
    extrap = (
        richardson_per_cell([p[0] for p in per_cell], [p[1] for p in per_cell])
        if len(per_cell) >= 2
        else 0.0
    )
    cfg = ChainPairConfig(a=1.0, b=b, g=g, c=0.0)
    momentum = energy_1d(cfg, trunc, quad).value
    rel = abs(extrap / momentum - 1.0) if momentum != 0.0 else 0.0
    out_rows = [
        tuple(r[:3]) + (extrap, momentum, rel, r[3]) for r in rows
    ]
    meta = _meta_common(args, "finite-oracle")
    meta["g-over-a"] = _FMT % g
    meta["b-over-a"] = _FMT % b
    _write_csv(
        args.out,
        meta,
        (
            "n_sites",
            "per_cell_energy",
            "error_estimate",
            "extrapolated",
            "momentum_space",
            "relative_difference",
            "flag",
        ),
        out_rows,
    )
    return status.exit_code()


def _add_numerics_flags(p):
    p.add_argument("--xi-order", type=int, default=64)
    p.add_argument("--q-order", type=int, default=None)
    p.add_argument("--n-recip", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--config", default=None, help="key=value file; flags override")
    p.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="lattice-casimir",
        description="Casimir interaction of parallel delta-scatterer lattices",
    )
    sub = ap.add_subparsers(dest="mode", required=True)

    p = sub.add_parser("energy-curve", help="energy vs separation per coupling")
    p.add_argument("--geometry", choices=("chain", "lattice2d"), default="chain")
    p.add_argument("--g-over-a", required=True, help="comma list")
    p.add_argument("--b-over-a", required=True, help="start:stop:count[:log]")
    p.add_argument("--c-over-a", type=float, default=0.0)
    _add_numerics_flags(p)
    p.set_defaults(func=_cmd_energy_curve)

    p = sub.add_parser("displacement", help="eta(c) = E(c)/E(0) per beta")
    p.add_argument("--geometry", choices=("chain", "lattice2d"), default="chain")
    p.add_argument("--g-over-a", default="0.1", help="comma list")
    p.add_argument("--beta", required=True, help="comma list of b/a")
    p.add_argument("--c-over-a", required=True, help="start:stop:count[:log]")
    _add_numerics_flags(p)
    p.set_defaults(func=_cmd_displacement)

    p = sub.add_parser("pairwise-compare", help="exact vs pairwise chain energy")
    p.add_argument("--g-over-a", default="0.1", help="comma list")
    p.add_argument("--b-over-a", required=True, help="start:stop:count[:log]")
    p.add_argument("--n-terms", type=int, default=1000)
    _add_numerics_flags(p)
    p.set_defaults(func=_cmd_pairwise_compare)

    p = sub.add_parser("limits-check", help="full formula vs limiting formula")
    p.add_argument("--geometry", choices=("chain", "lattice2d"), default="chain")
    p.add_argument("--direction", choices=("large-a", "small-a"), required=True)
    p.add_argument("--a-over-b", required=True, help="start:stop:count[:log]")
    p.add_argument("--g-over-a", type=float, default=0.1)
    _add_numerics_flags(p)
    p.set_defaults(func=_cmd_limits_check)

    p = sub.add_parser("cylinder-oracle", help="cylinder pair vs thin asymptote")
    p.add_argument("--r-over-d", required=True, help="comma list")
    p.add_argument("--g-times-r", type=float, default=100.0)
    p.add_argument("--l-max", type=int, default=10)
    _add_numerics_flags(p)
    p.set_defaults(func=_cmd_cylinder_oracle)

    p = sub.add_parser("finite-oracle", help="finite chains vs momentum result")
    p.add_argument("--sites", required=True, help="comma list of site counts")
    p.add_argument("--g-over-a", type=float, default=0.1)
    p.add_argument("--b-over-a-value", type=float, default=1.0)
    _add_numerics_flags(p)
    p.set_defaults(func=_cmd_finite_oracle)

    return ap


def _apply_config_file(ap, args, argv):
    if args.config is None:
        return args
    overrides = _read_config_file(args.config)
    if not overrides:
        return args
    # config supplies defaults; explicit flags win by re-parsing with the
    # file values injected before the command line
    injected = []
    for key, val in overrides.items():
        injected.extend(["--%s" % key, val])
    return ap.parse_args([argv[0]] + injected + argv[1:])


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        args = _apply_config_file(ap, args, argv)
        return args.func(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
