"""Command-line driver.

Subcommands: assemble | spectrum | convergence | condition | dispersion.
Every output is CSV with '#'-prefixed metadata lines and 17-significant-digit
values; identical configurations produce byte-identical files. Exit codes:
0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .assembly import (MatrixPair, PenaltyConfig, ProblemKind, assemble_dc,
                       assemble_standard, penalty_count, write_matrix_csv)
from .closedform import (DISPERSION_CASES, CUBIC_DIRICHLET, CUBIC_BOUNDARY_LIMITS,
                         CUBIC_INTERIOR_ERROR_COEFF, NEUMANN_BOUNDARY_ERROR_COEFFS,
                         NEUMANN_INTERIOR_ERROR_COEFF, constraint_reduce,
                         dispersion_boundary_rows, dispersion_interior,
                         infinite_penalty_constraints)
from .eigensolve import NumericalError, Spectrum, gevp
from .metrics import (condition_report, convergence_rate, eigenfunction_errors,
                      eigenvalue_errors, exact_spectrum, write_spectrum_csv)
from .splines import BreakpointGrid, SplineSpace, read_mesh_file
from .tensorize import TensorSystem, kron_sum_matrices, separable_spectrum

DC_MODES = ("off", "on", "both", "infinite")


@dataclass
class ExperimentConfig:
    """Resolved per-axis problem setup for one CLI invocation."""

    problem: ProblemKind
    dim: int
    degrees: tuple[int, ...]
    grids: tuple[BreakpointGrid, ...]
    dc: str
    eta_a: tuple[float, ...] | None
    eta_b: tuple[float, ...] | None
    out: Path
    modes: tuple[int, ...] | None

    @property
    def spaces(self) -> tuple[SplineSpace, ...]:
        return tuple(SplineSpace(p, g) for p, g in zip(self.degrees, self.grids))

    def penalty(self, p: int) -> PenaltyConfig:
        if self.eta_a is None and self.eta_b is None:
            return PenaltyConfig.default(self.problem, p)
        count = penalty_count(self.problem, p)
        eta_a = self.eta_a if self.eta_a is not None else (1.0,) * count
        eta_b = self.eta_b if self.eta_b is not None else (1.0,) * count
        cfg = PenaltyConfig(self.problem, tuple(eta_a), tuple(eta_b))
        cfg.validate_for_degree(p)
        return cfg


def _split(text: str, cast, what: str):
    try:
        return tuple(cast(part.strip()) for part in text.split(","))
    except ValueError:
        raise ValueError(f"cannot parse {what} list: {text!r}") from None


def _per_axis(values, dim: int, what: str):
    if len(values) == 1:
        return values * dim
    if len(values) != dim:
        raise ValueError(f"{what}: expected 1 or {dim} values, got {len(values)}")
    return values


def _resolve_config(args) -> ExperimentConfig:
    problem = ProblemKind(args.problem)
    dim = args.dim
    degrees = _per_axis(_split(args.degree, int, "degree"), dim, "--degree")
    mesh_paths = None
    if args.mesh_file:
        mesh_paths = _per_axis(_split(args.mesh_file, str, "mesh file"), dim, "--mesh-file")
    elements = None
    if args.elements:
        elements = _per_axis(_split(args.elements, int, "elements"), dim, "--elements")
    if mesh_paths is not None:
        grids = tuple(read_mesh_file(path) for path in mesh_paths)
        if elements is not None:
            for grid, n in zip(grids, elements):
                if grid.n_elements != n:
                    raise ValueError(
                        f"mesh file has {grid.n_elements} elements but --elements says {n}")
    elif elements is not None:
        grids = tuple(BreakpointGrid.uniform(n) for n in elements)
    else:
        raise ValueError("one of --elements or --mesh-file is required")
    eta_a = _split(args.eta_a, float, "eta-a") if args.eta_a else None
    eta_b = _split(args.eta_b, float, "eta-b") if args.eta_b else None
    modes = _split(args.modes, int, "modes") if args.modes else None
    return ExperimentConfig(problem, dim, degrees, grids, args.dc, eta_a, eta_b,
                            Path(args.out), modes)


def _axis_pairs(cfg: ExperimentConfig, corrected: bool) -> tuple[MatrixPair, ...]:
    pairs = []
    for space in cfg.spaces:
        if not corrected:
            pairs.append(assemble_standard(space, cfg.problem))
        elif cfg.dc == "infinite":
            std = assemble_standard(space, cfg.problem)
            cons = infinite_penalty_constraints(cfg.problem, space.degree, std.dim)
            pairs.append(constraint_reduce(std, cons))
        else:
            pairs.append(assemble_dc(space, cfg.penalty(space.degree)))
    return tuple(pairs)


def _variants(cfg: ExperimentConfig):
    if cfg.dc == "off":
        return [("std", False)]
    if cfg.dc in ("on", "infinite"):
        return [("dc", True)]
    return [("std", False), ("dc", True)]


def _spectrum_of(cfg: ExperimentConfig, pairs: tuple[MatrixPair, ...],
                 want_vectors: bool) -> tuple[Spectrum, list[Spectrum]]:
    if cfg.dim == 1:
        spec = gevp(pairs[0], want_vectors=want_vectors)
        return spec, [spec]
    axis_spectra = [gevp(p, want_vectors=False) for p in pairs]
    return separable_spectrum(TensorSystem(pairs), axis_spectra), axis_spectra


def _meta(cfg: ExperimentConfig, corrected: bool) -> dict:
    return {
        "problem": cfg.problem.value,
        "dim": cfg.dim,
        "degree": ",".join(str(p) for p in cfg.degrees),
        "elements": ",".join(str(g.n_elements) for g in cfg.grids),
        "dc": cfg.dc if corrected else "off",
        "eta_a": ",".join(str(v) for v in cfg.eta_a) if cfg.eta_a else "default",
        "eta_b": ",".join(str(v) for v in cfg.eta_b) if cfg.eta_b else "default",
    }


def cmd_assemble(args) -> int:
    cfg = _resolve_config(args)
    outdir = cfg.out
    outdir.mkdir(parents=True, exist_ok=True)
    names = {"std": ("K.csv", "M.csv"), "dc": ("K_dc.csv", "M_dc.csv")}
    for label, corrected in _variants(cfg):
        pairs = _axis_pairs(cfg, corrected)
        pair = pairs[0] if cfg.dim == 1 else kron_sum_matrices(TensorSystem(pairs))
        kname, mname = names[label]
        corrected_tag = cfg.dc if corrected else False
        write_matrix_csv(outdir / kname, pair.K, pair.kind, pair.degree, pair.elements,
                         corrected_tag)
        write_matrix_csv(outdir / mname, pair.M, pair.kind, pair.degree, pair.elements,
                         corrected_tag)
        print(f"wrote {outdir / kname} and {outdir / mname} ({pair.dim}x{pair.dim})")
    return 0


def _suffixed(path: Path, label: str) -> Path:
    return path.with_name(path.stem + f"_{label}" + path.suffix)


def cmd_spectrum(args) -> int:
    cfg = _resolve_config(args)
    if cfg.modes is not None and len(cfg.modes) != 1:
        raise ValueError("--modes takes a single count for the spectrum command")
    max_modes = cfg.modes[0] if cfg.modes else None
    variants = _variants(cfg)
    for label, corrected in variants:
        pairs = _axis_pairs(cfg, corrected)
        want_vectors = cfg.dim == 1 and cfg.dc != "infinite"
        spec, _ = _spectrum_of(cfg, pairs, want_vectors)
        exact = exact_spectrum(cfg.problem, cfg.dim, len(spec))
        eig_report = eigenvalue_errors(spec, exact)
        ef_report = None
        if want_vectors:
            ef_report = eigenfunction_errors(cfg.spaces[0], spec, exact)
        path = cfg.out if len(variants) == 1 else _suffixed(cfg.out, label)
        write_spectrum_csv(path, exact, spec, eig_report, ef_report,
                           header_meta=_meta(cfg, corrected), max_modes=max_modes)
        print(f"wrote {path} ({min(len(spec), max_modes or len(spec))} modes)")
    return 0


def cmd_convergence(args) -> int:
    if args.dim != 1:
        raise ValueError("convergence tables are 1D")
    if args.dc not in ("off", "on"):
        raise ValueError("convergence runs one variant: use --dc off or --dc on")
    if args.mesh_file:
        raise ValueError("convergence uses uniform meshes given by --elements")
    levels = _split(args.elements, int, "elements")
    modes = _split(args.modes, int, "modes") if args.modes else (1, 6)
    problem = ProblemKind(args.problem)
    degree = _split(args.degree, int, "degree")
    if len(degree) != 1:
        raise ValueError("convergence takes a single degree")
    p = degree[0]

    rows = []
    for N in levels:
        space = SplineSpace(p, BreakpointGrid.uniform(N))
        if args.dc == "on":
            eta_a = _split(args.eta_a, float, "eta-a") if args.eta_a else None
            eta_b = _split(args.eta_b, float, "eta-b") if args.eta_b else None
            count = penalty_count(problem, p)
            cfgp = PenaltyConfig(problem, eta_a or (1.0,) * count, eta_b or (1.0,) * count)
            cfgp.validate_for_degree(p)
            pair = assemble_dc(space, cfgp)
        else:
            pair = assemble_standard(space, problem)
        spec = gevp(pair)
        exact = exact_spectrum(problem, 1, len(spec))
        eig = eigenvalue_errors(spec, exact)
        ef = eigenfunction_errors(space, spec, exact)
        row = [float(N)]
        for mode in modes:
            if not 1 <= mode <= len(spec):
                raise ValueError(f"mode {mode} out of range for N={N} (dim {len(spec)})")
            idx = mode - 1
            row += [abs(eig.rel[idx]), ef.h1[idx], ef.l2[idx]]
        rows.append(row)

    header = ["N"]
    for mode in modes:
        header += [f"eig_mode{mode}", f"h1_mode{mode}", f"l2_mode{mode}"]
    out = Path(args.out)
    with open(out, "w") as fh:
        fh.write(f"# problem = {problem.value}\n# degree = {p}\n# dc = {args.dc}\n")
        fh.write("# columns: " + ",".join(header) + "\n")
        for row in rows:
            fh.write(f"{int(row[0])}," + ",".join(f"{v:.17g}" for v in row[1:]) + "\n")
        if len(levels) >= 2:
            Ns = [r[0] for r in rows]
            rates = [convergence_rate(Ns, [r[col] for r in rows])
                     for col in range(1, len(header))]
            fh.write("# rate," + ",".join(f"{r:.4f}" for r in rates) + "\n")
    print(f"wrote {out} ({len(levels)} levels)")
    return 0


def cmd_condition(args) -> int:
    cfg = _resolve_config(args)
    if cfg.problem is ProblemKind.NEUMANN:
        raise ValueError("condition numbers need a strictly positive spectrum; "
                         "the neumann problem has a zero mode")
    std_spec, _ = _spectrum_of(cfg, _axis_pairs(cfg, corrected=False), want_vectors=False)
    dc_spec, _ = _spectrum_of(cfg, _axis_pairs(cfg, corrected=True), want_vectors=False)
    report = condition_report(std_spec, dc_spec)
    out = cfg.out
    with open(out, "w") as fh:
        for key, value in _meta(cfg, corrected=True).items():
            fh.write(f"# {key} = {value}\n")
        fh.write("# columns: dim,degree,elements,lam_min,lam_max,lam_max_dc,"
                 "gamma,gamma_dc,rho,varrho_percent\n")
        fh.write(",".join([
            str(cfg.dim),
            "x".join(str(p) for p in cfg.degrees),
            "x".join(str(g.n_elements) for g in cfg.grids),
            f"{report.lam_min:.17g}", f"{report.lam_max:.17g}", f"{report.lam_max_dc:.17g}",
            f"{report.gamma:.17g}", f"{report.gamma_tilde:.17g}",
            f"{report.rho:.17g}", f"{report.varrho:.17g}",
        ]) + "\n")
    print(f"wrote {out} (rho = {report.rho:.3f}, varrho = {report.varrho:.2f}%)")
    return 0


def cmd_dispersion(args) -> int:
    case = args.case
    if not (0.0 < args.omega_min <= args.omega_max <= math.pi):
        raise ValueError("need 0 < --omega-min <= --omega-max <= pi")
    omega = np.linspace(args.omega_min, args.omega_max, args.samples)
    interior = dispersion_interior(case, omega)
    boundary = dispersion_boundary_rows(case, omega)
    out = Path(args.out)
    with open(out, "w") as fh:
        fh.write(f"# case = {case}\n")
        if case == CUBIC_DIRICHLET:
            fh.write("# interior error: LambdaH = Lambda + c4*Lambda^4, "
                     f"c4 = {CUBIC_INTERIOR_ERROR_COEFF:.17g}\n")
            fh.write("# boundary row limits: "
                     + ",".join(f"{v:.17g}" for v in CUBIC_BOUNDARY_LIMITS) + "\n")
        else:
            fh.write("# interior error: LambdaH = Lambda + c3*Lambda^3, "
                     f"c3 = {NEUMANN_INTERIOR_ERROR_COEFF:.17g}\n")
            fh.write("# boundary row error coefficients (on Lambda^2): "
                     + ",".join(f"{v:.17g}" for v in NEUMANN_BOUNDARY_ERROR_COEFFS) + "\n")
        cols = ["omega_h", "Lambda", "LambdaH_interior"]
        cols += [f"LambdaH_boundary_row_{i + 1}" for i in range(len(boundary))]
        fh.write("# columns: " + ",".join(cols) + "\n")
        for i in range(omega.size):
            row = [omega[i], omega[i] ** 2, interior[i]] + [b[i] for b in boundary]
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    print(f"wrote {out} ({omega.size} samples)")
    return 0


def _add_common(sub, elements_help="elements per axis"):
    sub.add_argument("--problem", choices=[k.value for k in ProblemKind],
                     default="dirichlet")
    sub.add_argument("-p", "--degree", default="3", help="degree per axis, comma-separated")
    sub.add_argument("-N", "--elements", default=None, help=elements_help)
    sub.add_argument("--mesh-file", default=None, help="breakpoint file per axis")
    sub.add_argument("--dim", type=int, choices=(1, 2, 3), default=1)
    sub.add_argument("--dc", choices=DC_MODES, default="off")
    sub.add_argument("--eta-a", default=None, help="stiffness penalty coefficients")
    sub.add_argument("--eta-b", default=None, help="mass penalty coefficients")
    sub.add_argument("--modes", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="igaspec",
        description="B-spline Galerkin spectra of the Laplacian on [0,1]^d with "
                    "boundary penalization that removes high-frequency outliers.")
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("assemble", help="dump stiffness/mass matrices as CSV")
    _add_common(s)
    s.add_argument("-o", "--out", default=".", help="output directory")
    s.set_defaults(func=cmd_assemble)

    s = subs.add_parser("spectrum", help="spectrum and per-mode errors")
    _add_common(s)
    s.add_argument("-o", "--out", default="spectrum.csv")
    s.set_defaults(func=cmd_spectrum)

    s = subs.add_parser("convergence", help="error table over a mesh sequence (1D)")
    _add_common(s, elements_help="comma list of mesh levels, e.g. 8,16,32,64")
    s.add_argument("-o", "--out", default="convergence.csv")
    s.set_defaults(func=cmd_convergence)

    s = subs.add_parser("condition", help="condition-number reduction report")
    _add_common(s)
    s.add_argument("-o", "--out", default="condition.csv")
    s.set_defaults(func=cmd_condition)

    s = subs.add_parser("dispersion", help="dispersion relation sweep")
    s.add_argument("--case", choices=DISPERSION_CASES, required=True)
    s.add_argument("--omega-min", type=float, default=0.01)
    s.add_argument("--omega-max", type=float, default=math.pi)
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("-o", "--out", default="dispersion.csv")
    s.set_defaults(func=cmd_dispersion)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
