"""Command-line front end.

    maxsurf matrix check FILE
    maxsurf sample   (--surface NAME | --matrix FILE) [--window X0 X1 Y0 Y1] [--n N] [--out CSV] [--mesh OBJ]
    maxsurf singular (--surface NAME | --matrix FILE) [--window ...]
    maxsurf levelset (--surface NAME | --matrix FILE) [--window ...] [--n N] [--out CSV]
    maxsurf verify NAME
    maxsurf catalog list

Every sampling command also reads ``--config FILE`` (plain ``key=value``
lines); flags given on the command line win.  Exit status is 0 on success,
1 when a verification fails and 2 for usage or input errors.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import genmat
from .families import CATALOG_NAMES, get_entry, verify_entry
from .genmat import NotApplicableError
from .singular import (
    find_special_points,
    lightcone_fit,
    sector_census,
    tangent_check,
    trace_unit_gradient_levelset,
    write_polylines,
)
from .surface import build_from_matrix, evaluate_grid

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
PARAM_KEYS = ("k", "m", "alpha", "a")


class UsageError(ValueError):
    pass


def fmt(v) -> str:
    """17 significant digits so that printed values round-trip."""
    if v is None:
        return "none"
    return f"{float(v):.17g}"


@dataclass
class RunConfig:
    command: str
    surface: str | None = None
    matrix: str | None = None
    params: dict = field(default_factory=dict)
    window: tuple[float, float, float, float] | None = None
    nx: int = 64
    ny: int = 64
    out: str | None = None
    mesh: str | None = None
    sheet: int = 0
    tol: float | None = None

    def validate(self) -> None:
        if (self.surface is None) == (self.matrix is None):
            raise UsageError("give exactly one of --surface or --matrix")
        if self.nx < 2 or self.ny < 2:
            raise UsageError("grid resolution must be at least 2")
        if self.window is not None:
            x0, x1, y0, y1 = self.window
            if not all(map(math.isfinite, self.window)) or not (x1 > x0 and y1 > y0):
                raise UsageError(f"degenerate window {self.window}")
        if self.tol is not None and not self.tol > 0:
            raise UsageError("tolerance must be positive")


def read_config(path: str) -> dict[str, str]:
    """Parse ``key=value`` lines; blank lines and ``#`` comments are skipped."""
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = (t.strip() for t in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _window(text) -> tuple[float, float, float, float]:
    vals = [float(t) for t in str(text).replace(",", " ").split()] if isinstance(text, str) else [float(t) for t in text]
    if len(vals) != 4:
        raise UsageError("window needs four numbers x0 x1 y0 y1")
    return tuple(vals)


def build_config(args: argparse.Namespace) -> RunConfig:
    file_cfg = read_config(args.config) if getattr(args, "config", None) else {}

    def pick(key, conv=str, default=None):
        v = getattr(args, key, None)
        if v is not None:
            return conv(v)
        if key in file_cfg:
            return conv(file_cfg[key])
        return default

    try:
        n = pick("n", int)
        cfg = RunConfig(
            command=args.command,
            surface=pick("surface"),
            matrix=pick("matrix"),
            params={k: v for k in PARAM_KEYS if (v := pick(k, float)) is not None},
            window=pick("window", _window),
            nx=pick("nx", int, n if n is not None else 64),
            ny=pick("ny", int, n if n is not None else 64),
            out=pick("out"),
            mesh=pick("mesh"),
            sheet=pick("sheet", int, 0),
            tol=pick("tol", float),
        )
    except ValueError as err:
        raise UsageError(str(err)) from err
    cfg.validate()
    return cfg


def load_surface(cfg: RunConfig):
    """``(surface, default window)`` for the configured catalog entry or matrix file."""
    if cfg.surface is not None:
        e = get_entry(cfg.surface, **cfg.params)
        s = e.surface.with_sheet(cfg.sheet) if cfg.sheet else e.surface
        return s, e.window
    if cfg.params:
        raise UsageError("parameters apply to catalog entries only")
    A = genmat.read_matrix(cfg.matrix)
    s = build_from_matrix(A, sheet=cfg.sheet, tol=cfg.tol or genmat.DEFAULT_TOL)
    T1, T2 = s.rhs.periods()
    return s, (0.0, T1 or 1.0, 0.0, T2 or 1.0)


# -- commands ------------------------------------------------------------


def cmd_matrix_check(path: str, tol: float | None, out) -> int:
    tol = genmat.DEFAULT_TOL if tol is None else tol
    A = genmat.read_matrix(path)
    ok = genmat.is_generating(A, tol)
    out.write(f"generating: {'yes' if ok else 'no'}\n")
    if not ok:
        return EXIT_FAIL
    theta = genmat.module_theta(A, tol)
    rep = genmat.discriminant_report(A, tol)
    out.write(f"theta: {fmt(theta)}\n")
    out.write(f"discriminant: {fmt(rep.value)}\n")
    out.write("discriminant_by_column: " + " ".join(fmt(v) for v in rep.by_column) + "\n")
    elliptic = genmat.is_elliptic(A, tol)
    out.write(f"kind: {'elliptic' if elliptic else 'parabolic'}\n")
    if elliptic:
        cf = genmat.canonical_elliptic_form(A, tol)
        out.write(f"canonical: a={fmt(cf.a)} b={fmt(cf.b)} c={fmt(cf.c)} eps2={cf.eps2} eps3={cf.eps3}\n")
        out.write(f"lambdas: {fmt(cf.lambdas[0])} {fmt(cf.lambdas[1])}\n")
        out.write(genmat.format_matrix(cf.matrix()))
    else:
        pf = genmat.classify_parabolic(A, tol)
        out.write(f"normal_form: {pf.form if pf.form is not None else 'none'}\n")
        out.write(genmat.format_matrix(pf.permuted))
    return EXIT_OK


def write_sample_csv(g, fh) -> None:
    fh.write("x,y,z,zx,zy,grad_norm_sq,causal,residual\n")
    labels = g.causal
    for iy, y in enumerate(g.ys):
        for ix, x in enumerate(g.xs):
            lab = "failed" if g.failed[iy, ix] else labels[iy, ix]
            fh.write(
                ",".join(
                    (fmt(x), fmt(y), fmt(g.z[iy, ix]), fmt(g.zx[iy, ix]), fmt(g.zy[iy, ix]),
                     fmt(g.grad_norm_sq[iy, ix]), lab, fmt(g.residual[iy, ix]))
                )
                + "\n"
            )


def write_mesh(g, fh) -> None:
    """OBJ-style text: ``v x y z`` records, ``f`` triangles, ``# singular i`` flags."""
    ny, nx = g.z.shape
    fh.write(f"# maxsurf mesh {nx}x{ny}\n")
    for iy, y in enumerate(g.ys):
        for ix, x in enumerate(g.xs):
            fh.write(f"v {fmt(x)} {fmt(y)} {fmt(g.z[iy, ix])}\n")
    for idx in np.flatnonzero(g.singular.ravel()):
        fh.write(f"# singular {idx + 1}\n")
    bad = g.failed
    for iy in range(ny - 1):
        for ix in range(nx - 1):
            if bad[iy : iy + 2, ix : ix + 2].any():
                continue
            v00 = iy * nx + ix + 1
            v10, v01, v11 = v00 + 1, v00 + nx, v00 + nx + 1
            fh.write(f"f {v00} {v10} {v11}\nf {v00} {v11} {v01}\n")


def cmd_sample(cfg: RunConfig, out, err) -> int:
    s, win = load_surface(cfg)
    x0, x1, y0, y1 = cfg.window or win
    g = evaluate_grid(s, np.linspace(x0, x1, cfg.nx), np.linspace(y0, y1, cfg.ny))
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            write_sample_csv(g, fh)
    else:
        write_sample_csv(g, out)
    if cfg.mesh:
        with open(cfg.mesh, "w") as fh:
            write_mesh(g, fh)
    res = np.abs(g.residual[np.isfinite(g.residual)])
    summary = (
        f"rows={g.z.size} failed={int(g.failed.sum())} singular={int(g.singular.sum())} "
        f"max_residual={fmt(res.max() if res.size else 0.0)}\n"
    )
    (out if cfg.out else err).write(summary)
    return EXIT_OK


def cmd_singular(cfg: RunConfig, out) -> int:
    s, win = load_surface(cfg)
    window = cfg.window or win
    pts = find_special_points(s, window)
    out.write(f"surface={s.name or cfg.matrix} points={len(pts)}\n")
    for n, p in enumerate(pts):
        out.write("\n")
        out.write(f"[point {n}]\nx0={fmt(p.x0)}\ny0={fmt(p.y0)}\nz0={fmt(p.z0)}\ndelta={p.delta}\ntype={p.type}\n")
        out.write("xi_roots=" + ("none" if p.xi_roots is None else " ".join(fmt(v) for v in p.xi_roots)) + "\n")
        for fit in lightcone_fit(s, p):
            out.write(f"sheet{fit.sheet}_delta={fit.delta}\nsheet{fit.sheet}_cone_fit_error={fmt(fit.fit_error)}\n")
        try:
            c = sector_census(s, p, 1e-2, others=pts)
            out.write(f"census_space_like={c.space_like}\ncensus_time_like={c.time_like}\n")
        except ValueError as e:
            out.write(f"census=unavailable ({e})\n")
    return EXIT_OK


def cmd_levelset(cfg: RunConfig, out, err) -> int:
    s, win = load_surface(cfg)
    window = cfg.window or win
    n = max(cfg.nx, cfg.ny) if (cfg.nx, cfg.ny) != (64, 64) else 512
    curves = trace_unit_gradient_levelset(s, window, n)
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            write_polylines(curves, fh)
    else:
        write_polylines(curves, out)
    log = out if cfg.out else err
    log.write(f"curves={len(curves)} vertices={sum(len(c) for c in curves)}\n")
    failed = False
    if s.matrix is not None:
        for p in find_special_points(s, window, fit=False):
            try:
                tc = tangent_check(s, p)
            except NotApplicableError as e:
                log.write(f"point ({fmt(p.x0)}, {fmt(p.y0)}): tangent check n/a ({e})\n")
                continue
            failed |= not tc.ok
            log.write(
                f"point ({fmt(p.x0)}, {fmt(p.y0)}): branches={len(tc.measured_deg)} "
                f"expected={len(tc.expected_deg)} max_error_deg={fmt(tc.max_error_deg)} {'ok' if tc.ok else 'MISMATCH'}\n"
            )
    return EXIT_FAIL if failed else EXIT_OK


def cmd_verify(name: str, params: dict, out) -> int:
    rep = verify_entry(get_entry(name, **params))
    out.write(rep.format() + "\n")
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_catalog_list(out) -> int:
    for name in CATALOG_NAMES:
        e = get_entry(name)
        params = " ".join(f"{k}={fmt(v)}" for k, v in e.params.items())
        out.write(f"{name}\t{e.title}" + (f"\t{params}" if params else "") + "\n")
    return EXIT_OK


# -- parser --------------------------------------------------------------


def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--surface", help="catalog name")
    p.add_argument("--matrix", help="file with nine reals (row-major)")
    for k in PARAM_KEYS:
        p.add_argument(f"--{k}", type=float, help=f"catalog parameter {k}")
    p.add_argument("--window", nargs=4, type=float, metavar=("X0", "X1", "Y0", "Y1"))
    p.add_argument("--n", type=int, help="grid points per axis")
    p.add_argument("--nx", type=int)
    p.add_argument("--ny", type=int)
    p.add_argument("--sheet", type=int, help="branch index of zeta (0 = fundamental)")
    p.add_argument("--tol", type=float, help="generating-matrix tolerance")
    p.add_argument("--out", help="output file (default stdout)")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="maxsurf", description="Implicit maximal surfaces zeta(z) = phi(x) psi(y).")
    sub = ap.add_subparsers(dest="command", required=True)

    pm = sub.add_parser("matrix", help="generating-matrix tools")
    msub = pm.add_subparsers(dest="action", required=True)
    pc = msub.add_parser("check", help="invariants and normal form of a matrix file")
    pc.add_argument("path")
    pc.add_argument("--tol", type=float)

    ps = sub.add_parser("sample", help="sample u on a grid to CSV (and a mesh)")
    _add_source(ps)
    ps.add_argument("--mesh", help="also write a triangle mesh")

    _add_source(sub.add_parser("singular", help="report special points"))
    _add_source(sub.add_parser("levelset", help="trace |grad u| = 1 curves"))

    pv = sub.add_parser("verify", help="run the invariant battery on a catalog entry")
    pv.add_argument("name", choices=CATALOG_NAMES)
    for k in PARAM_KEYS:
        pv.add_argument(f"--{k}", type=float)

    pl = sub.add_parser("catalog", help="catalog tools")
    lsub = pl.add_subparsers(dest="action", required=True)
    lsub.add_parser("list", help="list catalog entries")
    return ap


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        if args.command == "matrix":
            if args.tol is not None and not args.tol > 0:
                raise UsageError("tolerance must be positive")
            return cmd_matrix_check(args.path, args.tol, out)
        if args.command == "catalog":
            return cmd_catalog_list(out)
        if args.command == "verify":
            params = {k: getattr(args, k) for k in PARAM_KEYS if getattr(args, k) is not None}
            return cmd_verify(args.name, params, out)
        cfg = build_config(args)
        if cfg.command == "sample":
            return cmd_sample(cfg, out, err)
        if cfg.command == "singular":
            return cmd_singular(cfg, out)
        return cmd_levelset(cfg, out, err)
    except (ValueError, OSError) as e:
        err.write(f"maxsurf: error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
