"""Command-line front end: one subcommand per toolkit operation, JSON or CSV out."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from importlib import metadata

import numpy as np

from . import calibration, competitor, cones, energy, evolver, geom, onedim, presets, spherical
from .mesh import MeshError, read_tmesh, write_tmesh
from .sheets import SurgeryError

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_IO = 2
EXIT_USAGE = 64

FAMILY_NAMES = {
    "t-plus": cones.T_PLUS,
    "y-beta": cones.Y_BETA,
    "ybar-beta": cones.YBAR_BETA,
    "w-beta": cones.W_BETA,
    "delta-plus": cones.DELTA_PLUS,
    "c-plus": cones.C_PLUS,
}


class UsageError(Exception):
    pass


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


@dataclass
class RunManifest:
    command: str
    parameters: dict
    version: str
    inputs: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    wall_seconds: float = 0.0


# output


def _fmt(x: float) -> str:
    # adding zero folds -0.0 into 0.0
    return format(float(x) + 0.0, ".17g")


def _dumps(obj) -> str:
    """JSON with every float printed to 17 significant digits."""
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _csv(fields, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_fmt(r[f]) if isinstance(r[f], float) else r[f] for f in fields])
    return buf.getvalue()


def _emit(text: str, out: str | None, manifest: RunManifest) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        manifest.outputs.append(out)
    else:
        sys.stdout.write(text)


def _rad(deg: float) -> float:
    return math.radians(float(deg))


# figures


def _figure_gap(rows, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    x = [r["x0"] for r in rows]
    ax.semilogx(x, [r["gap_closed_form"] for r in rows], label="closed form")
    ax.semilogx(x, [r["j_quadrature"] - competitor.CONE_ENERGY for r in rows], "o", ms=3, label="quadrature")
    ax.axhline(0.0, color="0.5", lw=0.8)
    # the winning gaps are tiny next to the large-x0 losses
    ax.set_yscale("symlog", linthresh=1e-8)
    ax.set_xlabel("x0")
    ax.set_ylabel("J(competitor) - J(cone)")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _figure_trace(trace, cone_energy, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot([r.step for r in trace], [r.report.j_alpha for r in trace], label="mesh")
    if cone_energy is not None:
        ax.axhline(cone_energy, color="0.3", ls="--", lw=0.8, label="cone")
    ax.set_xlabel("step")
    ax.set_ylabel("J_alpha")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


# subcommands


def cmd_simplex(args, man) -> str:
    s = geom.simplex_vertices(args.n)
    return _dumps(
        {"n": s.n, "edge_length": geom.edge_length(s.n), "vertices": s.vertices.tolist(), "defects": s.check()}
    )


def _spec(args) -> cones.ConeSpec:
    fam = FAMILY_NAMES[args.family]
    beta = _rad(args.beta) if args.beta is not None else None
    if fam in (cones.Y_BETA, cones.YBAR_BETA, cones.W_BETA) and beta is None:
        raise geom.DomainError(f"{args.family} needs --beta (degrees)")
    return cones.ConeSpec(fam, beta=beta, n=args.n if fam == cones.DELTA_PLUS else None)


def cmd_calibrate(args, man) -> str:
    fam = calibration.calibration_for(_spec(args))
    alpha = fam.alpha_required if args.alpha is None else args.alpha
    return _dumps(calibration.verify_certificate(fam, alpha).to_dict())


def cmd_energy(args, man) -> str:
    spec = _spec(args)
    win = cones.window_by_name(spec, args.window)
    exact = energy.j_alpha_exact(spec, win, args.alpha)
    mesh = cones.build_mesh(spec, win, args.res)
    approx = energy.j_alpha_mesh(mesh, args.alpha)
    return _dumps(
        {
            "family": spec.family,
            "window": win.kind,
            "alpha": args.alpha,
            "exact": exact.to_dict(),
            "mesh": approx.to_dict(),
            "triangles": mesh.nt,
            "relative_error": abs(approx.j_alpha - exact.j_alpha) / exact.j_alpha if exact.j_alpha else 0.0,
        }
    )


def cmd_compete(args, man) -> str:
    if args.sweep:
        xs = [float(x) for x in np.logspace(-6, math.log10(0.3), args.points)]
        rows = competitor.sweep(args.alpha, xs)
        if args.figure:
            _figure_gap(rows, args.figure)
            man.outputs.append(args.figure)
        return _csv(("x0", "c", "alpha", "gap_closed_form", "j_quadrature"), rows)
    best = competitor.best_competitor(args.alpha)
    if best is None:
        return _dumps({"alpha": args.alpha, "found": False, "x0": None, "c": None, "gap": None})
    return _dumps(
        {
            "alpha": args.alpha,
            "found": True,
            "x0": best.x0,
            "log_scale": best.log_scale,
            "c": best.c,
            "gap": best.gap,
        }
    )


def parse_profile(text: str) -> list[onedim.Branch1D]:
    """Comma-separated branch angles in degrees; a trailing 'g' marks a branch lying in the plane."""
    out = []
    for tok in text.split(","):
        tok = tok.strip().lower()
        if not tok:
            continue
        in_gamma = tok.endswith("g")
        try:
            deg = float(tok[:-1] if in_gamma else tok)
        except ValueError as exc:
            raise geom.DomainError(f"bad branch {tok!r}") from exc
        out.append(onedim.Branch1D(_rad(deg), in_gamma))
    if not out:
        raise geom.DomainError("empty profile")
    return out


def cmd_classify1d(args, man) -> str:
    branches = parse_profile(args.profile)
    ok, reason = onedim.is_minimal_1d(branches, args.alpha)
    return _dumps(
        {
            "profile": args.profile,
            "alpha": args.alpha,
            "minimal": ok,
            "reason": reason,
            "theta_alpha_deg": math.degrees(onedim.theta_alpha(args.alpha)),
        }
    )


def _angle_out(rad: float) -> dict:
    return {"radians": rad, "degrees": math.degrees(rad), "cos": math.cos(rad)}


def cmd_taylor(args, man) -> str:
    f, vals = args.formula, [_rad(v) for v in args.args]
    need = {"triangle": 0, "rectangle": 1, "square": 0, "pentagon": 2, "regular-pentagon": 0}
    if len(vals) != need[f]:
        raise geom.DomainError(f"{f} takes {need[f]} angle(s), got {len(vals)}")
    if f == "triangle":
        side = spherical.triangle_side()
    elif f == "rectangle":
        side = spherical.rect_side(vals[0])
    elif f == "square":
        side = spherical.rect_fixed_point()
    elif f == "pentagon":
        side = spherical.pentagon_side(vals[0], vals[1], args.relation)
    else:
        side = spherical.regular_pentagon_side(args.relation)
    return _dumps({"formula": f, "relation": args.relation, "inputs_deg": args.args, "side": _angle_out(side)})


def cmd_pentagon(args, man) -> str:
    net = spherical.pentagon_family(_rad(args.beta), _rad(args.gamma))
    d = net.to_dict()
    d["junction_defect"] = spherical.junction_defect(net)
    d["formula_defect"] = spherical.pentagon_formula_defect(net)
    return _dumps(d)


def cmd_evolve(args, man) -> str:
    if (args.mesh is None) == (args.preset is None):
        raise UsageError("evolve needs exactly one of --mesh or --preset")
    if args.preset is not None:
        p = presets.preset(args.preset, args.sin_phi, args.alpha)
        cone = evolver.preset_cone_mesh(args.preset, args.sin_phi, args.alpha, args.res)
        mesh = evolver.pinch(cone, evolver.PinchRecipe(args.preset))
        alpha = p.alpha
    else:
        if args.alpha is None:
            raise UsageError("evolve --mesh needs --alpha")
        mesh = read_tmesh(args.mesh)
        man.inputs.append(args.mesh)
        alpha = args.alpha
    cfg = evolver.EvolveConfig(alpha, args.step_size, args.steps, args.grad_tol, args.averaging_every)
    out, trace = evolver.evolve(mesh, cfg)
    if args.mesh_out:
        write_tmesh(out, args.mesh_out)
        man.outputs.append(args.mesh_out)
    cone_energy = mesh.meta.get("cone_energy")
    if args.figure:
        _figure_trace(trace, cone_energy, args.figure)
        man.outputs.append(args.figure)
    if args.format == "csv":
        return evolver.trace_to_csv(trace)
    final = trace[-1].report
    return _dumps(
        {
            "preset": args.preset,
            "alpha": alpha,
            "cone_energy": cone_energy,
            "initial": trace[0].report.to_dict(),
            "final": final.to_dict(),
            "margin": None if cone_energy is None else cone_energy - final.j_alpha,
            "steps": trace[-1].step,
            "stop_reason": out.meta["stop_reason"],
        }
    )


# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="slidingcones", description="Sliding minimal cones toolkit.")
    ap.add_argument("--version", action="version", version=_version())
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    def common(p):
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--manifest", help="write a JSON run manifest here")
        return p

    p = common(sub.add_parser("simplex", help="canonical regular simplex"))
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_simplex)

    def family(p):
        p.add_argument("family", choices=sorted(FAMILY_NAMES))
        p.add_argument("--beta", type=float, help="tilt in degrees")
        p.add_argument("--n", type=int, default=3, help="dimension of the half simplex cone")

    p = common(sub.add_parser("calibrate", help="check a paired calibration"))
    family(p)
    p.add_argument("--alpha", type=float)
    p.set_defaults(func=cmd_calibrate)

    p = common(sub.add_parser("energy", help="exact and mesh window energy"))
    family(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--window", choices=["ball", "simplex", "prism", "box", "cylinder"])
    p.add_argument("--res", type=int, default=4)
    p.set_defaults(func=cmd_energy)

    p = common(sub.add_parser("compete", help="bent-fold competitor of the half-T cone"))
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--sweep", action="store_true", help="CSV of the gap over a range of roots")
    p.add_argument("--points", type=int, default=25)
    p.add_argument("--figure", help="with --sweep, also plot the gap to this file")
    p.set_defaults(func=cmd_compete)

    p = common(sub.add_parser("classify1d", help="minimality of a 1-D cone"))
    p.add_argument("profile", help="branch angles in degrees, 'g' marks plane branches, e.g. 0g,90,180g")
    p.add_argument("--alpha", type=float, required=True)
    p.set_defaults(func=cmd_classify1d)

    p = common(sub.add_parser("taylor", help="side lengths of 120-degree spherical polygons"))
    p.add_argument("formula", choices=["triangle", "rectangle", "square", "pentagon", "regular-pentagon"])
    p.add_argument("args", nargs="*", type=float, help="side lengths in degrees")
    p.add_argument("--relation", choices=[spherical.PRINTED, spherical.CLOSING], default=spherical.PRINTED)
    p.set_defaults(func=cmd_taylor)

    p = common(sub.add_parser("pentagon", help="symmetric pentagonal net"))
    p.add_argument("--beta", type=float, required=True, help="degrees")
    p.add_argument("--gamma", type=float, required=True, help="degrees")
    p.set_defaults(func=cmd_pentagon)

    p = common(sub.add_parser("evolve", help="evolve a mesh or a pinched preset"))
    p.add_argument("--mesh", help="TMESH input file")
    p.add_argument("--preset", choices=list(presets.PRESETS))
    p.add_argument("--alpha", type=float, help="defaults to the preset's matched weight")
    p.add_argument("--sin-phi", type=float, help="preset tilt parameter")
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--step-size", type=float, default=0.05)
    p.add_argument("--grad-tol", type=float, default=1e-9)
    p.add_argument("--averaging-every", type=int, default=10)
    p.add_argument("--res", type=int, default=3)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--mesh-out", help="write the evolved mesh here")
    p.add_argument("--figure", help="plot the energy trace to this file")
    p.set_defaults(func=cmd_evolve)
    return ap


DOMAIN_ERRORS = (
    geom.DomainError,
    cones.ConfigurationError,
    cones.UnsupportedError,
    calibration.StructuralError,
    MeshError,
    SurgeryError,
    evolver.EvolveError,
)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if args.command is None:
            raise UsageError("no subcommand given")
    except UsageError as exc:
        sys.stderr.write(ap.format_usage() + f"error: {exc}\n")
        return EXIT_USAGE
    params = {k: v for k, v in vars(args).items() if k not in ("func", "out", "manifest")}
    man = RunManifest(args.command, params, _version())
    t0 = time.perf_counter()
    try:
        text = args.func(args, man)
        _emit(text, args.out, man)
    except UsageError as exc:
        sys.stderr.write(ap.format_usage() + f"error: {exc}\n")
        return EXIT_USAGE
    except DOMAIN_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    man.wall_seconds = time.perf_counter() - t0
    if args.manifest:
        try:
            with open(args.manifest, "w") as fh:
                fh.write(_dumps(asdict(man)) + "\n")
        except OSError as exc:
            sys.stderr.write(f"error: {exc}\n")
            return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
