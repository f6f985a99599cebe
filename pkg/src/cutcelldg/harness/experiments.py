"""Experiment drivers: convergence sweeps, shock tubes, error norms.

Each driver takes a RunConfig, runs the solver, and writes plot-ready CSV
plus a metadata JSON (config echo, git hash, timing) to the output
directory.  All randomness is seeded through the mesh spec, so identical
configs give identical outputs.
"""

from __future__ import annotations

import csv
import json
import subprocess
import time
import warnings
from pathlib import Path

import numpy as np

from .. import basis as bs
from .. import equations as eqs
from ..errors import CutCellDGError
from ..limiter import LimiterConfig, make_limiter
from ..marching import advance
from ..mesh import banded_mesh, sod_mesh, uniform_mesh
from ..riemann import default_flux_key, make_flux
from ..spatial import SpatialOperator
from . import exact_riemann


# ---------------------------------------------------------------------------
# plumbing

def git_hash():
    try:
        out = subprocess.run(["git", "rev-parse", "HEAD"],
                             capture_output=True, text=True, timeout=5,
                             cwd=Path(__file__).parent)
        return out.stdout.strip() if out.returncode == 0 else "unknown"
    except OSError:
        return "unknown"


def write_metadata(config, out_dir, elapsed, extra=None):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    meta = {"config": config.to_dict(), "git_hash": git_hash(),
            "elapsed_seconds": elapsed,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S")}
    if extra:
        meta.update(extra)
    with open(out_dir / "metadata.json", "w") as fh:
        json.dump(meta, fh, indent=2, default=str)
    return meta


def build_mesh(spec, n=None, domain=None):
    n = n if n is not None else spec.n
    domain = tuple(spec.domain if spec.domain is not None
                   else (domain if domain is not None else (0.0, 1.0)))
    if spec.band is None:
        return uniform_mesh(n, domain=domain)
    return banded_mesh(n, tuple(spec.band), alpha=spec.alpha,
                       seed=spec.seed, domain=domain)


def check_cfl_window(spec, nu):
    """Monotonicity needs alpha < nu < 1 - alpha for constant fractions."""
    if spec.band is not None and spec.alpha is not None:
        if not spec.alpha < nu < 1.0 - spec.alpha:
            warnings.warn(
                f"nu={nu} outside (alpha, 1-alpha)=({spec.alpha}, "
                f"{1.0 - spec.alpha}); monotonicity guarantee void",
                stacklevel=2)


MANUFACTURED = {"burgers": eqs.manufactured_burgers,
                "linsys": eqs.manufactured_linear_system,
                "euler": eqs.manufactured_euler}


def setup_operator(config, case, mesh, p):
    eq = case.equation
    flux = make_flux(config.flux or default_flux_key(eq.name), eq)
    op = SpatialOperator(mesh, eq, flux, p, bc=case.bc, nu=config.nu,
                         source=case.source, legacy_j1=config.legacy_j1)
    lim_cfg = LimiterConfig(enabled=config.limiter.enabled,
                            positivity=config.limiter.positivity,
                            cut_postprocess=config.limiter.cut_postprocess)
    return op, make_limiter(op, lim_cfg)


# ---------------------------------------------------------------------------
# error norms

def error_norms(state, exact, t, n_quad=None):
    """(L1, Linf) of ``state`` against ``exact(x, t)``.

    L1 by per-cell Gauss quadrature of |u_h - u| summed over components;
    Linf over the quadrature points plus both edge traces of every cell.
    """
    mesh = state.mesh
    quad = bs.Quadrature.gauss(n_quad if n_quad else state.p + 3)
    phi = bs.basis_values(quad.nodes, state.p)
    x_q = mesh.centers[:, None] + 0.5 * mesh.lengths[:, None] * quad.nodes
    u_q = np.einsum("jmn,nq->jqm", state.coeffs, phi)
    diff = np.abs(u_q - np.asarray(exact(x_q, t), dtype=float))
    l1 = float(np.einsum("jqm,q,j->", diff, quad.weights,
                         0.5 * mesh.lengths))

    left, right = bs.edge_traces(state)
    edge_err = max(
        float(np.abs(left - exact(mesh.edges[:-1], t)).max()),
        float(np.abs(right - exact(mesh.edges[1:], t)).max()))
    return l1, max(float(diff.max()), edge_err)


# ---------------------------------------------------------------------------
# convergence study

def run_convergence(config, quiet=False):
    """EOC sweep over ``config.n_list`` (and p_list); writes errors.csv."""
    case = MANUFACTURED[config.case or config.equation]()
    t_final = (config.final_time if config.final_time is not None
               else case.final_time)
    check_cfl_window(config.mesh, config.nu)
    t0 = time.perf_counter()
    rows = []
    for p in (config.p_list if config.p_list else [config.p]):
        prev_l1 = prev_linf = None
        for n in config.n_list:
            row = {"p": p, "n": n, "alpha": config.mesh.alpha,
                   "seed": config.mesh.seed}
            try:
                mesh = build_mesh(config.mesh, n=n, domain=case.domain)
                op, limiter = setup_operator(config, case, mesh, p)
                state = bs.project(lambda x: case.exact(x, 0.0), mesh, p,
                                   case.equation.m)
                out, info = advance(state, op, 0.0, t_final,
                                    order=config.order, limiter=limiter)
                l1, linf = error_norms(out, case.exact, t_final)
                row.update(n_cells=mesh.n_cells, steps=info.steps,
                           l1=l1, linf=linf,
                           eoc_l1=(np.log2(prev_l1 / l1)
                                   if prev_l1 else float("nan")),
                           eoc_linf=(np.log2(prev_linf / linf)
                                     if prev_linf else float("nan")))
                prev_l1, prev_linf = l1, linf
            except CutCellDGError as exc:
                row.update(n_cells=None, steps=None, l1=float("nan"),
                           linf=float("nan"), eoc_l1=float("nan"),
                           eoc_linf=float("nan"), error=str(exc))
                prev_l1 = prev_linf = None
            rows.append(row)
            if not quiet:
                print(format_row(row))
    out_dir = Path(config.output_dir)
    write_rows(rows, out_dir / "errors.csv")
    write_metadata(config, out_dir, time.perf_counter() - t0)
    return rows


def format_row(row):
    if np.isnan(row.get("l1", float("nan"))):
        return (f"p={row['p']} N={row['n']:4d}  FAILED: "
                f"{row.get('error', '?')}")
    return (f"p={row['p']} N={row['n']:4d} cells={row['n_cells']:4d} "
            f"steps={row['steps']:6d}  L1={row['l1']:.3e} "
            f"(EOC {row['eoc_l1']:5.2f})  Linf={row['linf']:.3e} "
            f"(EOC {row['eoc_linf']:5.2f})")


def write_rows(rows, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fields = sorted({key for row in rows for key in row})
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)


# ---------------------------------------------------------------------------
# snapshots and shock tests

def snapshot_rows(state, transform=None):
    """Per-cell (left edge, centroid, right edge) samples for plotting."""
    mesh = state.mesh
    left, right = bs.edge_traces(state)
    phi0 = bs.basis_values(np.array(0.0), state.p)
    center = np.einsum("jmn,n->jm", state.coeffs, phi0)
    rows = []
    for j in range(mesh.n_cells):
        for x, u in ((mesh.edges[j], left[j]),
                     (mesh.centers[j], center[j]),
                     (mesh.edges[j + 1], right[j])):
            values = transform(u) if transform else u
            rows.append({"x": x, "cell": j,
                         **{f"u{i}": values[i] for i in range(len(values))}})
    return rows


def total_variation(values):
    return float(np.abs(np.diff(values, axis=0)).sum())


def run_burgers_shock(config, quiet=False):
    """Sine-wave Burgers run into shock formation; reports overshoot."""
    t_final = config.final_time if config.final_time is not None else 0.1
    t0 = time.perf_counter()
    mesh = build_mesh(config.mesh)
    eq = eqs.burgers()
    case_like = type("_C", (), {})()
    case_like.equation = eq
    case_like.bc = "periodic"
    case_like.source = None
    op, limiter = setup_operator(config, case_like, mesh, config.p)

    def u0(x):
        return np.sin(4.0 * np.pi * (x + 0.5))[..., None]

    state = bs.project(u0, mesh, config.p, 1)
    out, info = advance(state, op, 0.0, t_final, order=config.order,
                        limiter=limiter)
    avgs = out.cell_averages()[:, 0]
    rows = snapshot_rows(out)
    samples = np.array([row["u0"] for row in rows])
    diag = {"min_average": float(avgs.min()),
            "max_average": float(avgs.max()),
            "overshoot": float(max(samples.max() - 1.0,
                                   -1.0 - samples.min(), 0.0)),
            "steps": info.steps, "finite": bool(np.all(np.isfinite(avgs)))}
    out_dir = Path(config.output_dir)
    write_rows(rows, out_dir / "snapshot.csv")
    write_metadata(config, out_dir, time.perf_counter() - t0,
                   extra={"diagnostics": diag})
    if not quiet:
        print(json.dumps(diag, indent=2))
    return out, diag


SOD_LEFT_CONSERVED = np.array([1.0, 0.0, 2.5])
SOD_RIGHT_CONSERVED = np.array([0.125, 0.0, 0.25])


def run_sod(config, quiet=False):
    """Sod shock tube on (-1, 1) with transmissive boundaries."""
    t_final = config.final_time if config.final_time is not None else 0.4
    t0 = time.perf_counter()
    spec = config.mesh
    mesh = sod_mesh(n=spec.n,
                    band=tuple(spec.band) if spec.band else (-0.75, 0.75),
                    alpha=spec.alpha,
                    seed=spec.seed if spec.seed is not None else 0,
                    domain=tuple(spec.domain) if spec.domain else (-1.0, 1.0))
    eq = eqs.euler()
    case_like = type("_C", (), {})()
    case_like.equation = eq
    case_like.bc = "transmissive"
    case_like.source = None
    op, limiter = setup_operator(config, case_like, mesh, config.p)

    def u0(x):
        x = np.asarray(x, dtype=float)
        return np.where(x[..., None] < 0.0, SOD_LEFT_CONSERVED,
                        SOD_RIGHT_CONSERVED)

    state = bs.project(u0, mesh, config.p, 3)
    out, info = advance(state, op, 0.0, t_final, order=config.order,
                        limiter=limiter)

    gamma = 1.4
    quad = bs.Quadrature.gauss(config.p + 3)
    phi = bs.basis_values(quad.nodes, config.p)
    x_q = mesh.centers[:, None] + 0.5 * mesh.lengths[:, None] * quad.nodes
    u_q = np.einsum("jmn,nq->jqm", out.coeffs, phi)
    rho_exact = exact_riemann.sod_exact(x_q, t_final, gamma)[0]
    l1_rho = float(np.einsum("jq,q,j->", np.abs(u_q[..., 0] - rho_exact),
                             quad.weights, 0.5 * mesh.lengths))

    avgs = out.cell_averages()
    rho_a, v_a, p_a = eqs.euler_primitives(avgs, gamma)
    rho_q, v_q2, p_q = eqs.euler_primitives(u_q.reshape(-1, 3), gamma)
    diag = {"min_density": float(rho_q.min()),
            "min_pressure": float(p_q.min()),
            "tv_density": total_variation(rho_a),
            "l1_density_error": l1_rho,
            "steps": info.steps,
            "finite": bool(np.all(np.isfinite(out.coeffs)))}

    def to_prim(u):
        rho, v, p = eqs.euler_primitives(u, gamma)
        return np.array([rho, v, p])

    out_dir = Path(config.output_dir)
    write_rows(snapshot_rows(out, transform=to_prim),
               out_dir / "snapshot.csv")
    write_metadata(config, out_dir, time.perf_counter() - t0,
                   extra={"diagnostics": diag})
    if not quiet:
        print(json.dumps(diag, indent=2))
    return out, diag


def run_solve(config, quiet=False):
    """Generic manufactured-solution run at a single resolution."""
    case = MANUFACTURED[config.case or config.equation]()
    t_final = (config.final_time if config.final_time is not None
               else case.final_time)
    t0 = time.perf_counter()
    mesh = build_mesh(config.mesh, domain=case.domain)
    op, limiter = setup_operator(config, case, mesh, config.p)
    state = bs.project(lambda x: case.exact(x, 0.0), mesh, config.p,
                       case.equation.m)
    out, info = advance(state, op, 0.0, t_final, order=config.order,
                        limiter=limiter)
    l1, linf = error_norms(out, case.exact, t_final)
    diag = {"l1": l1, "linf": linf, "steps": info.steps}
    out_dir = Path(config.output_dir)
    write_rows(snapshot_rows(out), out_dir / "snapshot.csv")
    write_metadata(config, out_dir, time.perf_counter() - t0,
                   extra={"diagnostics": diag})
    if not quiet:
        print(json.dumps(diag, indent=2))
    return out, diag
