"""Command-line interface.

Commands: ``analyze`` (equilibria, linearization and surface data for one
parameter triple), ``flow`` (trajectory integration, single start or seeded
batch), ``scan`` (region-classified parameter grid), ``surface`` (Q/Q1 slice
along a coordinate plane), ``blowup`` (the degenerate-point resolution
report), ``verify`` (the reproduction suite).

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 domain error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import equilibria as eq_mod
from . import linearize as lin_mod
from .blowup import blowup_linearizations
from .core import Parameters, is_exact, parse_scalar, scalar_to_json
from .flow import MetricPoint
from .integrate import classify_limit, integrate_flow, integrate_flow_3d
from .surfaces import component_classify, grad_q, q1_eval, q_eval
from .verify import run_all

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3


@dataclass
class Config:
    command: str
    out: str | None = None
    fmt: str = "json"
    exact: bool = False
    seed: int = 0
    threads: int = 1
    tol_omega: float | None = None


def _json_value(x):
    if is_exact(x):
        return scalar_to_json(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return float(x)


def _parse_triple(text: str) -> Parameters:
    parts = [t for t in text.split(",") if t.strip()]
    if len(parts) != 3:
        raise ValueError("expected three comma-separated values")
    return Parameters(*(parse_scalar(t) for t in parts))


def _write_text(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# --- analyze ----------------------------------------------------------------


def _analyze_payload(p: Parameters) -> dict:
    rays = eq_mod.solve_all(p)
    region = component_classify(p, rays=rays) if p.interior else None
    entries = []
    notes: list[str] = []
    for ray in rays:
        norm = ray.as_x3one()
        lin = lin_mod.linearize_at(p, norm)
        cls = lin_mod.classify(lin)
        unit = eq_mod.normalize_unit_volume(p, norm)
        entries.append({
            "rep": [_json_value(v) for v in ray.rep.x],
            "convention": ray.convention,
            "x3_one": [_json_value(v) for v in norm.rep.x],
            "unit_volume": [float(v) for v in unit.x],
            "family": ray.family_tag.value,
            "multiplicity": ray.multiplicity,
            "rho": _json_value(lin.rho),
            "delta": _json_value(lin.delta),
            "sigma": _json_value(lin.sigma),
            "eigenvalues": [_json_value(lin.lambda1), _json_value(lin.lambda2)],
            "classification": cls.kind.value,
            "near_degenerate": cls.near_degenerate,
        })
        if cls.kind is lin_mod.PointKind.DEGENERATE:
            notes.append(
                "degenerate equilibrium: run the `blowup` command for the "
                "resolved local phase portrait"
            )
    return {
        "parameters": {
            **p.to_json(),
            "exact": p.exact,
            "reduced_ok": p.reduced_ok,
            "wallach_range": p.wallach_range,
        },
        "surface": {
            "Q": _json_value(q_eval(p)),
            "Q1": _json_value(q1_eval(p)),
            "grad_Q": [_json_value(v) for v in grad_q(p)],
            "region": region.value if region is not None else None,
        },
        "equilibria": entries,
        "notes": notes,
    }


def cmd_analyze(cfg: Config, args) -> int:
    try:
        p = _parse_triple(args.a)
    except ValueError as exc:
        if "a1*a2" in str(exc):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.exact and not p.exact:
        print(
            "warning: decimal inputs cannot be promoted to exact rationals; "
            "continuing in float mode",
            file=sys.stderr,
        )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", eq_mod.CensusWarning)
        payload = _analyze_payload(p)
    _write_text(cfg.out, json.dumps(payload, indent=2))
    return EXIT_OK


# --- flow ------------------------------------------------------------------


def _run_one_flow(task):
    (a, x0, tmax, rtol, three_d) = task
    p = Parameters(*a)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", eq_mod.CensusWarning)
        if three_d:
            traj = integrate_flow_3d(p, MetricPoint(*x0), t_max=tmax, rel_tol=rtol)
        else:
            traj = integrate_flow(p, x0, t_max=tmax, rel_tol=rtol)
    return traj


def cmd_flow(cfg: Config, args) -> int:
    try:
        p = _parse_triple(args.a)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE if "three comma" in str(exc) else EXIT_DOMAIN
    if not p.reduced_ok:
        print("error: flow requires a1*a2*a3 != 0", file=sys.stderr)
        return EXIT_DOMAIN

    dim = 3 if args.three_d else 2
    starts: list[tuple[float, ...]] = []
    if args.x0 is not None:
        vals = [float(parse_scalar(t)) for t in args.x0.split(",")]
        if len(vals) != dim or any(v <= 0 for v in vals):
            print(f"error: --x0 needs {dim} positive values", file=sys.stderr)
            return EXIT_USAGE
        starts.append(tuple(vals))
    if args.random_starts:
        rng = np.random.default_rng(cfg.seed)
        for _ in range(args.random_starts):
            starts.append(tuple(np.exp(rng.uniform(-0.5, 0.5, dim))))
    if not starts:
        print("error: provide --x0 and/or --random-starts", file=sys.stderr)
        return EXIT_USAGE

    tasks = [(p.a, x0, args.tmax, args.rtol, args.three_d) for x0 in starts]
    if cfg.threads > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            trajectories = list(pool.map(_run_one_flow, tasks))
    else:
        trajectories = [_run_one_flow(t) for t in tasks]

    rows = []
    summary = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", eq_mod.CensusWarning)
        rays = eq_mod.solve_all(p)
        targets = [
            tuple(float(v) for v in eq_mod.normalize_unit_volume(p, r).x)[: dim]
            for r in rays
        ]
    for run, traj in enumerate(trajectories):
        for (t, x1, x2, x3, v) in traj.samples:
            rows.append((run, t, x1, x2, x3, v))
        limit = classify_limit(traj, targets)
        summary.append({
            "run": run,
            "x0": list(starts[run]),
            "status": traj.status,
            "steps": len(traj.samples),
            "max_volume_drift": traj.max_volume_drift,
            "equilibrium_id": limit.equilibrium_id,
            "exit_face": limit.exit_face,
        })

    out = args.traj_out or cfg.out
    if len(trajectories) == 1:
        lines = ["t,x1,x2,x3,V"]
        for _run, t, x1, x2, x3, v in rows:
            lines.append(f"{t:.17g},{x1:.17g},{x2:.17g},{x3:.17g},{v:.17g}")
    else:
        lines = ["run,t,x1,x2,x3,V"]
        for run, t, x1, x2, x3, v in rows:
            lines.append(
                f"{run},{t:.17g},{x1:.17g},{x2:.17g},{x3:.17g},{v:.17g}"
            )
    _write_text(out, "\n".join(lines) + "\n")
    if out is not None:
        print(json.dumps({"runs": summary}, indent=2))
    else:
        print(json.dumps({"runs": summary}, indent=2), file=sys.stderr)
    return EXIT_OK


# --- scan and surface --------------------------------------------------------


def _scan_chunk(task):
    values, tol = task
    out = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", eq_mod.CensusWarning)
        for a in values:
            p = Parameters(*a)
            region = component_classify(p, on_omega_tol=tol)
            g = grad_q(p)
            out.append((
                a[0], a[1], a[2],
                float(q_eval(p)), float(q1_eval(p)),
                float(g[0]), float(g[1]), float(g[2]),
                region.value,
            ))
    return out


def cmd_scan(cfg: Config, args) -> int:
    if args.n < 2:
        print("error: --n must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    axis = [(k + 0.5) / (2 * args.n) for k in range(args.n)]
    points = [(x, y, z) for x in axis for y in axis for z in axis]
    chunk_size = max(1, len(points) // max(1, cfg.threads * 4))
    chunks = [
        (points[i : i + chunk_size], cfg.tol_omega)
        for i in range(0, len(points), chunk_size)
    ]
    if cfg.threads > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(_scan_chunk, chunks))
    else:
        results = [_scan_chunk(c) for c in chunks]

    fields = ("a1", "a2", "a3", "Q", "Q1", "gQ1", "gQ2", "gQ3", "region")
    if args.json:
        payload = [
            dict(zip(fields, row)) for block in results for row in block
        ]
        _write_text(cfg.out, json.dumps(payload, indent=2))
        return EXIT_OK
    lines = [",".join(fields)]
    for block in results:
        for row in block:
            lines.append(
                ",".join([f"{v:.17g}" for v in row[:8]] + [row[8]])
            )
    _write_text(cfg.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_surface(cfg: Config, args) -> int:
    try:
        index, value_text = args.fix.split("=")
        fixed = {"a1": 0, "a2": 1, "a3": 2}[index.strip()]
        value = parse_scalar(value_text)
    except (ValueError, KeyError):
        print("error: --fix must look like a1=1/2", file=sys.stderr)
        return EXIT_USAGE
    if args.n < 2:
        print("error: --n must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    lo, hi = args.lo, args.hi
    axis = [lo + (hi - lo) * (k + 0.5) / args.n for k in range(args.n)]
    lines = ["a1,a2,a3,Q,Q1"]
    for u in axis:
        for v in axis:
            coords = [u, v]
            coords.insert(fixed, float(value))
            try:
                p = Parameters(*coords)
            except ValueError:
                continue
            lines.append(
                ",".join(
                    [f"{c:.17g}" for c in coords]
                    + [f"{float(q_eval(p)):.17g}", f"{float(q1_eval(p)):.17g}"]
                )
            )
    _write_text(cfg.out, "\n".join(lines) + "\n")
    return EXIT_OK


# --- blowup and verify -------------------------------------------------------


def cmd_blowup(cfg: Config, _args) -> int:
    report = blowup_linearizations()
    _write_text(cfg.out, json.dumps(report.to_json(), indent=2))
    return EXIT_OK


def cmd_verify(cfg: Config, args) -> int:
    results = run_all()
    if args.json:
        payload = [
            {
                "name": r.name,
                "passed": r.passed,
                "seconds": round(r.seconds, 3),
                "detail": r.detail,
            }
            for r in results
        ]
        _write_text(cfg.out, json.dumps(payload, indent=2))
    else:
        width = max(len(r.name) for r in results)
        lines = []
        for r in results:
            flag = "PASS" if r.passed else "FAIL"
            lines.append(f"{r.name:<{width}}  {flag}  {r.seconds:7.2f}s  {r.detail}")
        _write_text(cfg.out, "\n".join(lines) + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY_FAILED


# --- entry point -------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wallachflow",
        description="Analysis of the volume-normalized curvature flow on "
        "three-parameter homogeneous metrics",
    )
    parser.add_argument("--threads", type=int, default=None,
                        help="worker pool size (default: WALLACH_THREADS or 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="equilibria and surface data for one triple")
    pa.add_argument("--a", required=True, help="parameters, e.g. 1/6,1/6,1/6 or 0.2,0.3,0.4")
    pa.add_argument("--exact", action="store_true", help="insist on exact rational arithmetic")
    pa.add_argument("--out", default=None)

    pf = sub.add_parser("flow", help="integrate trajectories")
    pf.add_argument("--a", required=True)
    pf.add_argument("--x0", default=None, help="start point, e.g. 1.05,0.95")
    pf.add_argument("--random-starts", type=int, default=0)
    pf.add_argument("--seed", type=int, default=0)
    pf.add_argument("--tmax", type=float, default=50.0)
    pf.add_argument("--rtol", type=float, default=1e-10)
    pf.add_argument("--three-d", action="store_true", help="integrate the unreduced 3D flow")
    pf.add_argument("--out", dest="traj_out", default=None, help="trajectory CSV path")

    ps = sub.add_parser("scan", help="classified grid scan of the open parameter cube")
    ps.add_argument("--n", type=int, required=True, help="points per axis")
    ps.add_argument("--out", default=None)
    ps.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    ps.add_argument("--tol-omega", type=float, default=None)

    pu = sub.add_parser("surface", help="Q/Q1 slice along a coordinate plane")
    pu.add_argument("--fix", required=True, help="fixed coordinate, e.g. a1=1/2")
    pu.add_argument("--n", type=int, default=50)
    pu.add_argument("--lo", type=float, default=0.01)
    pu.add_argument("--hi", type=float, default=0.49)
    pu.add_argument("--out", default=None)

    pb = sub.add_parser("blowup", help="degenerate-point resolution report")
    pb.add_argument("--out", default=None)

    pv = sub.add_parser("verify", help="run the reproduction suite")
    pv.add_argument("--json", action="store_true")
    pv.add_argument("--out", default=None)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("WALLACH_THREADS", "1"))
    cfg = Config(
        command=args.command,
        out=getattr(args, "out", None),
        exact=getattr(args, "exact", False),
        seed=getattr(args, "seed", 0),
        threads=max(1, threads),
        tol_omega=getattr(args, "tol_omega", None),
    )
    handler = {
        "analyze": cmd_analyze,
        "flow": cmd_flow,
        "scan": cmd_scan,
        "surface": cmd_surface,
        "blowup": cmd_blowup,
        "verify": cmd_verify,
    }[cfg.command]
    try:
        return handler(cfg, args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
