"""Command-line interface.

Subcommands: ``model eval``, ``sweep``, ``ed-compare``, ``integrals``,
``mc``, ``report``.  Exit codes: 0 success, 2 usage, 3 degenerate or
missing model input, 4 I/O, 5 graph constraint, 6 size limit,
7 numerical divergence.  Errors go to stderr as one JSON object.

Configuration precedence is CLI flag > config file > built-in default.
A config file is plain UTF-8 text, one ``key = value`` per line with
``#`` comments; keys are the long flag names without the leading dashes.
All outputs are deterministic for identical invocations: CSV floats
carry 17 significant digits, JSON floats use the shortest exact
round-trip form, and no timestamps are emitted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import ed, integrals as xint, report as report_mod
from .errors import (
    DegenerateCouplingsError,
    NonConvergenceError,
    NonUniformCoordinationError,
    NotBipartiteError,
    QuadratureDivergenceError,
    SgPointError,
    SizeLimitError,
)
from .lattice import LatticeSpec, build, uniform_coordination
from .mc.core import Schedule, anneal
from .model import (
    Couplings,
    SystemSize,
    alpha_branches,
    classify_phase,
    decompose_state,
    energy_published_forms,
    k_factor,
    pair_probabilities,
    superposition_weights,
)

EXIT_USAGE = 2
EXIT_DEGENERATE = 3
EXIT_IO = 4
EXIT_GRAPH = 5
EXIT_SIZE = 6
EXIT_DIVERGENCE = 7

PHASE_COLORS = {
    "FM": "#d62728",
    "AFM": "#1f77b4",
    "SG": "#9467bd",
    "FM_SG": "#ff7f0e",
    "AFM_SG": "#17becf",
    "NONE": "#7f7f7f",
}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def fmt(x: float) -> str:
    """17-significant-digit decimal form; exact for golden-file comparison."""
    return format(float(x), ".17g")


def _emit_json(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        _write_text(out, text + "\n")
    else:
        print(text)


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc}") from exc


def _couplings(args) -> Couplings:
    try:
        return Couplings(args.a1, args.a2)
    except DegenerateCouplingsError:
        raise
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from exc


def _lattice_spec(args) -> LatticeSpec:
    extent = tuple(args.size)
    try:
        return LatticeSpec(args.lattice, extent, args.boundary)
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from exc


# ---------------------------------------------------------------- model eval

def cmd_model_eval(args) -> int:
    c = _couplings(args)
    size = SystemSize(args.n, args.z)
    weights = superposition_weights(c)
    probs = pair_probabilities(weights)
    k = k_factor(c)
    branches = alpha_branches(k)
    energies = energy_published_forms(c, size)
    phase = classify_phase(c, tol=args.tolerance)
    try:
        decomp = decompose_state(c)
        decomposition = {
            "pure_basis": decomp.pure_basis,
            "pure_coeff": decomp.pure_coeff,
            "glass_coeff": decomp.glass_coeff,
        }
    except SgPointError:
        decomposition = None
    payload = {
        "schema": "model_eval.v1",
        "couplings": {"a1": c.a1, "a2": c.a2},
        "system": {"n": size.n, "z": size.z},
        "weights": {"w1": weights.w1, "w2": weights.w2},
        "pair_probabilities": {
            "p_parallel": probs.p_parallel,
            "p_antiparallel": probs.p_antiparallel,
        },
        "k": k,
        "alpha_branches": [
            {"cos_alpha": b.cos_alpha, "sin_alpha": b.sin_alpha, "branch_sign": b.branch_sign}
            for b in branches
        ],
        "energies": {
            "competition": energies.e_competition,
            "conventional": energies.e_conventional,
            "abstract_variant": energies.e_abstract_variant,
            "consistent": energies.consistent,
        },
        "phase": phase.value,
        "decomposition": decomposition,
    }
    _emit_json(payload, args.out)
    return 0


# --------------------------------------------------------------------- sweep

def cmd_sweep(args) -> int:
    if args.steps < 2:
        raise CliError(EXIT_USAGE, "--steps must be >= 2")
    if args.a1_min > args.a1_max or args.a2_min > args.a2_max:
        raise CliError(EXIT_USAGE, "invalid coupling ranges")
    size = SystemSize(args.n, args.z)
    a1_grid = np.linspace(args.a1_min, args.a1_max, args.steps)
    a2_grid = np.linspace(args.a2_min, args.a2_max, args.steps)
    lines = ["a1,a2,k,e_competition,e_conventional,phase"]
    phases = []
    for a1 in a1_grid:
        for a2 in a2_grid:
            try:
                c = Couplings(float(a1), float(a2))
            except ValueError as exc:
                raise CliError(EXIT_USAGE, str(exc)) from exc
            phase = classify_phase(c, tol=args.tolerance)
            phases.append((float(a1), float(a2), phase))
            if c.degenerate:
                lines.append(f"{fmt(a1)},{fmt(a2)},,,,{phase.value}")
                continue
            rep = energy_published_forms(c, size)
            lines.append(
                f"{fmt(a1)},{fmt(a2)},{fmt(k_factor(c))},"
                f"{fmt(rep.e_competition)},{fmt(rep.e_conventional)},{phase.value}"
            )
    _write_text(args.out, "\n".join(lines) + "\n")
    if args.svg:
        _write_text(args.svg, _phase_svg(a1_grid, a2_grid, phases))
    return 0


def _phase_svg(a1_grid, a2_grid, phases) -> str:
    cell = 24
    width = len(a2_grid) * cell
    height = len(a1_grid) * cell
    rects = []
    for idx, (_, _, phase) in enumerate(phases):
        row, col = divmod(idx, len(a2_grid))
        x = col * cell
        y = height - (row + 1) * cell
        rects.append(
            f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" '
            f'fill="{PHASE_COLORS[phase.value]}"><title>{phase.value}</title></rect>'
        )
    body = "\n".join(rects)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
        f"{body}\n</svg>\n"
    )


# ---------------------------------------------------------------- ed-compare

def cmd_ed_compare(args) -> int:
    c = _couplings(args)
    spec = _lattice_spec(args)
    g = build(spec)
    if g.bipartition is None and c.abs_a2 > 0.0:
        raise CliError(EXIT_GRAPH, "superposition state requested on a non-bipartite graph")

    h1, h2 = ed.build_split_hamiltonians(g, c)
    h_combined = ed.build_hamiltonian(g, c.combined)
    identity_dev = ed.operator_identity_report(h1, h2, h_combined)

    method = "dense" if h_combined.dimension <= ed.MAX_DENSE_DIM else "iterative"
    spectrum = ed.ground_state(h_combined, method, seed=args.seed)

    ferro = ed.ferro_state(g)
    expectation_ferro = ed.expectation(h_combined, ferro)
    if g.bipartition is not None:
        neel = ed.neel_state(g)
        expectation_neel = ed.expectation(h_combined, neel)
        neel_residual = ed.residual_norm(h_combined, neel)
        x_state = ed.superposition_state(g, c)
        expectation_x = ed.expectation(h_combined, x_state)
        overlap_gx = ed.overlap(spectrum.ground_vector, x_state)
    else:
        expectation_neel = neel_residual = expectation_x = overlap_gx = None

    z = uniform_coordination(g)
    size = SystemSize(g.n_sites, z)
    model_e = energy_published_forms(c, size).e_competition
    payload = {
        "schema": "ed_compare.v1",
        "lattice": g.to_json_dict() | {"kind": spec.kind, "boundary": spec.boundary},
        "couplings": {"a1": c.a1, "a2": c.a2},
        "e0_exact": spectrum.ground_energy,
        "expectation_x": expectation_x,
        "expectation_ferro": expectation_ferro,
        "expectation_neel": expectation_neel,
        "overlap_ground_vs_x": overlap_gx,
        "operator_identity_deviation": identity_dev,
        "neel_residual": neel_residual,
        "model_energy_prediction": {
            "aligned_units": model_e,
            "quantum_units": ed.convention_rescale(model_e, "to_quantum"),
        },
        "convention_note": "quantum spin-1/2 energies; aligned-pair units differ by an exact factor 4",
    }
    _emit_json(payload, args.out)
    return 0


# ----------------------------------------------------------------- integrals

def cmd_integrals(args) -> int:
    if args.delta_e is None:
        raise CliError(EXIT_DEGENERATE, "--delta-e is required and was not given")
    if args.delta_e == 0.0:
        raise CliError(EXIT_DEGENERATE, "--delta-e must be nonzero")
    orbital = xint.RadialOrbital(zeff=args.zeff)
    attractive = not args.repulsive
    records = []
    for r in args.r_grid:
        geometry = xint.TwoCenterGeometry(r, args.charge)
        grid_cfg = xint.QuadratureConfig(resolution=args.resolution)
        mc_cfg = xint.QuadratureConfig(scheme="monte-carlo", samples=args.samples, seed=args.seed)
        try:
            s_ab, s_err = xint.overlap(orbital, orbital, geometry, grid_cfg)
            v_ba, v_err = xint.potential_element(orbital, orbital, geometry, grid_cfg,
                                                 attractive=attractive)
            gamma_ab, g_err = xint.gamma(orbital, orbital, geometry, args.delta_e,
                                         grid_cfg, attractive=attractive)
            k_ex, k_err = xint.direct_exchange(orbital, orbital, geometry, mc_cfg)
        except QuadratureDivergenceError as exc:
            raise CliError(EXIT_DIVERGENCE, f"quadrature divergence at R={r}: {exc}") from exc
        _, iset = xint.assemble_couplings(
            s_ab, v_ba, gamma_ab, k_ex,
            {"s_ab": s_err, "v_ba": v_err, "gamma_ab": g_err, "direct_exchange": k_err},
        )
        records.append({
            "schema": "integrals_record.v1",
            "separation": r,
            "charge": args.charge,
            **iset.to_json_dict(),
            "potential_sign": "attractive" if attractive else "repulsive",
        })
    if args.format == "json":
        _emit_json({"records": records}, args.out)
    else:
        header = ("R,Z,s_ab,v_ba,gamma_ab,direct_exchange,a1,a2,j_h,flags")
        lines = [header]
        for rec in records:
            lines.append(",".join([
                fmt(rec["separation"]), fmt(rec["charge"]), fmt(rec["s_ab"]),
                fmt(rec["v_ba"]), fmt(rec["gamma_ab"]), fmt(rec["direct_exchange"]),
                fmt(rec["a1"]), fmt(rec["a2"]), fmt(rec["j_h"]),
                ";".join(rec["flags"]),
            ]))
        text = "\n".join(lines) + "\n"
        if args.out:
            _write_text(args.out, text)
        else:
            print(text, end="")
    return 0


# ------------------------------------------------------------------------ mc

def cmd_mc(args) -> int:
    c = _couplings(args)
    spec = _lattice_spec(args)
    g = build(spec)
    try:
        schedule = Schedule(args.t_start, args.t_end, args.steps,
                            args.decay, args.sweeps_per_step)
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from exc
    best, replicas = anneal(g, c, schedule, args.seed, args.replicas, args.model)
    header = ("replica,seed,energy_per_site,magnetization,staggered_magnetization,"
              "parallel_bond_fraction,acceptance_rate")
    lines = [header]
    for idx, r in enumerate(replicas):
        ms = fmt(r.staggered_magnetization) if r.staggered_magnetization is not None else ""
        lines.append(
            f"{idx},{r.seed},{fmt(r.energy_per_site)},{fmt(r.magnetization)},"
            f"{ms},{fmt(r.parallel_bond_fraction)},{fmt(r.acceptance_rate)}"
        )
    ms = fmt(best.staggered_magnetization) if best.staggered_magnetization is not None else ""
    lines.append(
        f"best,{best.seed},{fmt(best.energy_per_site)},{fmt(best.magnetization)},"
        f"{ms},{fmt(best.parallel_bond_fraction)},{fmt(best.acceptance_rate)}"
    )
    _write_text(args.out, "\n".join(lines) + "\n")
    if args.json_out:
        _emit_json({
            "schema": "mc_result.v1",
            "best": best.to_json_dict(),
            "replicas": [r.to_json_dict() for r in replicas],
        }, args.json_out)
    return 0


# -------------------------------------------------------------------- report

def cmd_report(args) -> int:
    try:
        battery = report_mod.run_battery(seed=args.seed)
    except Exception as exc:  # battery item failed to execute
        print(json.dumps({"error": f"battery execution failed: {exc}", "exit_code": 1}),
              file=sys.stderr)
        return 1
    out_dir = Path(args.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot create {out_dir}: {exc}") from exc
    _write_text(str(out_dir / "report.json"), json.dumps(battery, indent=2) + "\n")
    _write_text(str(out_dir / "report.txt"), report_mod.render_text(battery))
    return 0


# -------------------------------------------------------------------- parser

def _int_list(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p]


def _float_list(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="excomp",
                                     description="two-term competing-exchange model toolkit")
    parser.add_argument("--config", help="key = value config file (defaults layer)")
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    model = sub.add_parser("model", help="closed-form model commands")
    model_sub = model.add_subparsers(dest="model_command", required=True)
    ev = model_sub.add_parser("eval", help="evaluate the model at one coupling point")
    ev.add_argument("--a1", type=float, required=True)
    ev.add_argument("--a2", type=float, required=True)
    ev.add_argument("--n", type=int, default=1)
    ev.add_argument("--z", type=int, default=1)
    ev.add_argument("--tolerance", type=float, default=1e-9)
    ev.add_argument("--out")
    ev.set_defaults(func=cmd_model_eval)

    sw = sub.add_parser("sweep", help="phase/energy sweep over a coupling grid")
    sw.add_argument("--a1-min", type=float, default=0.0)
    sw.add_argument("--a1-max", type=float, required=True)
    sw.add_argument("--a2-min", type=float, required=True)
    sw.add_argument("--a2-max", type=float, default=0.0)
    sw.add_argument("--steps", type=int, required=True)
    sw.add_argument("--n", type=int, default=1)
    sw.add_argument("--z", type=int, default=1)
    sw.add_argument("--tolerance", type=float, default=1e-9)
    sw.add_argument("--out", required=True)
    sw.add_argument("--svg")
    sw.set_defaults(func=cmd_sweep)

    edc = sub.add_parser("ed-compare", help="exact diagonalization vs model predictions")
    edc.add_argument("--lattice", choices=["chain", "ring", "square"], default="ring")
    edc.add_argument("--size", type=_int_list, required=True,
                     help="length, or width,height for square")
    edc.add_argument("--boundary", choices=["open", "periodic"], default="periodic")
    edc.add_argument("--a1", type=float, required=True)
    edc.add_argument("--a2", type=float, required=True)
    edc.add_argument("--seed", type=int, default=0)
    edc.add_argument("--out")
    edc.set_defaults(func=cmd_ed_compare)

    ig = sub.add_parser("integrals", help="two-center exchange-integral table")
    ig.add_argument("--charge", type=float, default=1.0, help="nuclear charge Z")
    ig.add_argument("--zeff", type=float, default=1.0, help="1s orbital exponent")
    ig.add_argument("--r-grid", type=_float_list, required=True,
                    help="comma-separated separations in bohr")
    ig.add_argument("--delta-e", type=float, default=None)
    ig.add_argument("--resolution", type=int, default=80)
    ig.add_argument("--samples", type=int, default=200_000)
    ig.add_argument("--seed", type=int, default=0)
    ig.add_argument("--repulsive", action="store_true",
                    help="use the positive sign for the potential V")
    ig.add_argument("--format", choices=["json", "csv"], default="csv")
    ig.add_argument("--out")
    ig.set_defaults(func=cmd_integrals)

    mc = sub.add_parser("mc", help="Metropolis annealing runs")
    mc.add_argument("--lattice", choices=["chain", "ring", "square"], default="square")
    mc.add_argument("--size", type=_int_list, required=True)
    mc.add_argument("--boundary", choices=["open", "periodic"], default="periodic")
    mc.add_argument("--a1", type=float, required=True)
    mc.add_argument("--a2", type=float, required=True)
    mc.add_argument("--model", choices=["ising", "vector3"], default="ising")
    mc.add_argument("--t-start", type=float, default=3.0)
    mc.add_argument("--t-end", type=float, default=0.01)
    mc.add_argument("--steps", type=int, default=60)
    mc.add_argument("--sweeps-per-step", type=int, default=10)
    mc.add_argument("--decay", choices=["geometric", "linear"], default="geometric")
    mc.add_argument("--seed", type=int, default=0)
    mc.add_argument("--replicas", type=int, default=1)
    mc.add_argument("--out", required=True)
    mc.add_argument("--json-out")
    mc.set_defaults(func=cmd_mc)

    rp = sub.add_parser("report", help="run the canned verification battery")
    rp.add_argument("--out-dir", required=True)
    rp.add_argument("--seed", type=int, default=1)
    rp.set_defaults(func=cmd_report)

    return parser


def _load_config(path: str) -> list[str]:
    """Config file lines as synthetic argv entries (inserted before real flags)."""
    extra = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read config {path}: {exc}") from exc
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(EXIT_USAGE, f"bad config line: {line!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        extra.extend([f"--{key}", value])
    return extra


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        # config values act as a defaults layer: injected right after the
        # subcommand tokens, so explicit flags (parsed later) win
        if "--config" in argv:
            idx = argv.index("--config")
            if idx + 1 >= len(argv):
                raise CliError(EXIT_USAGE, "--config needs a file path")
            config_extra = _load_config(argv[idx + 1])
            del argv[idx:idx + 2]
            insert_at = 2 if argv[:1] == ["model"] else 1
            argv = argv[:insert_at] + config_extra + argv[insert_at:]
        args = parser.parse_args(argv)
        if args.verbose:
            print(f"# effective args: {vars(args)}", file=sys.stderr)
        return args.func(args)
    except CliError as exc:
        print(json.dumps({"error": str(exc), "exit_code": exc.code}), file=sys.stderr)
        return exc.code
    except DegenerateCouplingsError as exc:
        print(json.dumps({"error": str(exc), "exit_code": EXIT_DEGENERATE}), file=sys.stderr)
        return EXIT_DEGENERATE
    except (NotBipartiteError, NonUniformCoordinationError) as exc:
        print(json.dumps({"error": str(exc), "exit_code": EXIT_GRAPH}), file=sys.stderr)
        return EXIT_GRAPH
    except SizeLimitError as exc:
        print(json.dumps({"error": str(exc), "exit_code": EXIT_SIZE}), file=sys.stderr)
        return EXIT_SIZE
    except (QuadratureDivergenceError, NonConvergenceError) as exc:
        print(json.dumps({"error": str(exc), "exit_code": EXIT_DIVERGENCE}), file=sys.stderr)
        return EXIT_DIVERGENCE


if __name__ == "__main__":
    sys.exit(main())
