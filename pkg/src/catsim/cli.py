"""Command-line front end.

Subcommands: feasibility | protocol | transient | verify | sweep.
All outputs are plain CSV / JSON-lines; identical configuration and seed
produce byte-identical files.  Numbers are written with 17 significant
digits so they round-trip through the text format without loss.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

from . import classical, protocol, verify
from .feasibility import FeasibilityReport, constraint_check
from .params import ConfigError, ParameterError, PhysicalScenario, \
    load_scenario, scenario_from_dict

log = logging.getLogger("catsim")

_FMT = ".17g"


def _fmt(v: float) -> str:
    return format(v, _FMT)


def _configure_logging() -> None:
    level = os.environ.get("CATSIM_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _load_config(name: str) -> PhysicalScenario:
    path = Path(name)
    if path.exists():
        return load_scenario(path)
    stem = name.removesuffix(".json")
    preset = resources.files("catsim") / "presets" / f"{stem}.json"
    if preset.is_file():
        return scenario_from_dict(json.loads(preset.read_text()))
    raise ConfigError(
        f"config '{name}' is neither an existing file nor a shipped preset "
        "(available presets: discussion, figure_transient)")


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# --- feasibility --------------------------------------------------------------

def _report_table(report: FeasibilityReport) -> str:
    lines = []
    lines.append(f"{'quantity':<22}{'value':>16}  unit")
    for name, value, unit in (
        ("omega_a", report.omega_a_radps, "rad/s"),
        ("tau_trap", report.tau_trap_s, "s"),
        ("eta", report.eta, "-"),
        ("omega_gg", report.omega_gg_radps, "rad/s"),
        ("delta_x", report.delta_x_m, "m"),
        ("phi_grav", report.phi_grav_rad, "rad"),
        ("phi3", report.phi3_rad, "rad"),
    ):
        lines.append(f"{name:<22}{value:>16.6g}  {unit}")
    lines.append("")
    lines.append(f"{'constraint':<22}{'lhs':>12}{'rhs':>12}"
                 f"{'margin':>12}  status")
    for v in report.verdicts:
        lines.append(f"{v.name:<22}{v.lhs:>12.4g}{v.rhs:>12.4g}"
                     f"{v.margin:>12.4g}  {v.status}")
    lines.append("")
    for note in report.notes:
        lines.append(f"note: {note}")
    lines.append(f"overall: {report.status}")
    return "\n".join(lines) + "\n"


def cmd_feasibility(args) -> int:
    scenario = _load_config(args.config)
    report = constraint_check(scenario)
    table = _report_table(report)
    sys.stdout.write(table)
    out = _out_dir(args)
    (out / "feasibility.txt").write_text(table, encoding="utf-8")
    with open(out / "feasibility.csv", "w", newline="",
              encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["name", "lhs", "rhs", "margin", "status"])
        for v in report.verdicts:
            w.writerow([v.name, _fmt(v.lhs), _fmt(v.rhs), _fmt(v.margin),
                        v.status])
    return report.exit_code


# --- protocol -----------------------------------------------------------------

def _summary_row(res: protocol.ProtocolResult) -> list[str]:
    return [_fmt(res.phi_grav), _fmt(res.p_down), _fmt(res.visibility),
            _fmt(res.residual)]


def cmd_protocol(args) -> int:
    scenario = _load_config(args.config)
    out = _out_dir(args)
    beta = args.beta
    if args.thermal is not None:
        initial = protocol.ThermalSample(args.thermal, args.seed, args.samples)
        if args.workers > 1:
            results = _thermal_parallel(scenario, initial, args)
        else:
            results = protocol.run_protocol(
                scenario, initial, exact_phase=args.exact_phase,
                force=args.force, beta=beta).results
    else:
        res = protocol.run_protocol(
            scenario, protocol.Coherent(complex(args.alpha)),
            exact_phase=args.exact_phase, force=args.force, beta=beta)
        results = (res,)
        with open(out / "steps.jsonl", "w", encoding="utf-8") as fh:
            for record in res.log:
                fh.write(json.dumps(record.to_json_dict(), sort_keys=True))
                fh.write("\n")
    with open(out / "summary.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["phi_grav_rad", "p_down", "visibility", "residual"])
        for res in results:
            w.writerow(_summary_row(res))
    first = results[0]
    sys.stdout.write(
        f"runs={len(results)} phi_grav={first.phi_grav:.6g} rad "
        f"p_down={first.p_down:.6g} visibility={first.visibility:.6g} "
        f"residual={first.residual:.3g}\n")
    return 0


def _thermal_worker(job) -> protocol.ProtocolResult:
    scenario, alpha, exact_phase, beta = job
    return protocol._run_single(scenario, alpha, exact_phase, beta,
                                include_cubic_correction=False,
                                with_log=False)


def _thermal_parallel(scenario, initial: protocol.ThermalSample, args):
    import numpy as np
    report = constraint_check(scenario)
    failed = [v.name for v in report.verdicts if v.status == "fail"]
    if failed and not args.force:
        raise protocol.ConstraintViolation(
            "feasibility constraints failed: " + ", ".join(failed))
    rng = np.random.default_rng(initial.seed)
    draws = rng.normal(size=(initial.count, 2)) * math.sqrt(initial.nbar / 2.0)
    jobs = [(scenario, complex(re, im), args.exact_phase, args.beta)
            for re, im in draws]
    with ProcessPoolExecutor(max_workers=args.workers) as ex:
        return tuple(ex.map(_thermal_worker, jobs))


# --- transient ----------------------------------------------------------------

def cmd_transient(args) -> int:
    scenario = _load_config(args.config)
    out = _out_dir(args)
    const = scenario.constants
    m = scenario.nanoparticle.mass_kg + scenario.atom.mass_kg
    omega = scenario.trap.paul_frequency_soft_radps
    dx = scenario.protocol.superposition_size_m
    if dx is None:
        raise ConfigError(
            "transient needs protocol.superposition_size_m in the config")
    x20 = const.g_E / omega**2
    t_f = 2.0 * math.pi / omega
    n = args.points
    with open(out / "transient.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["t_s", "dphi_harmonic_rad", "dphi_grav_rad", "rel_error"])
        for i in range(n + 1):
            t = t_f * i / n
            if t == 0.0:
                w.writerow([_fmt(0.0)] * 4)
                continue
            harm = classical.phase_difference_harmonic(
                x20, 0.0, dx, m, omega, t, const.hbar)
            grav = classical.phase_difference_freefall(
                dx, m, const.g_E, t, const.hbar)
            w.writerow([_fmt(t), _fmt(harm), _fmt(grav),
                        _fmt(1.0 - harm / grav)])
    sys.stdout.write(f"wrote {n + 1} rows over [0, {t_f:.6g}] s\n")
    return 0


# --- verify -------------------------------------------------------------------

def cmd_verify(args) -> int:
    results = verify.run_all(quick=args.quick)
    out = _out_dir(args)
    with open(out / "verify.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["name", "passed", "measured", "tolerance", "detail"])
        for r in results:
            w.writerow([r.name, str(r.passed).lower(), _fmt(r.measured),
                        _fmt(r.tolerance), r.detail])
    failures = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        sys.stdout.write(f"{status} {r.name}: measured {r.measured:.3g} "
                         f"vs tolerance {r.tolerance:.3g}\n")
        failures += 0 if r.passed else 1
    sys.stdout.write(f"{len(results) - failures}/{len(results)} checks passed\n")
    return 0 if failures == 0 else 1


# --- sweep --------------------------------------------------------------------

def _sweep_row(job) -> tuple[int, float, float, float, str]:
    index, scenario_doc, omega = job
    from dataclasses import replace
    scenario = scenario_from_dict(scenario_doc)
    scenario = replace(scenario,
                       trap=replace(scenario.trap,
                                    paul_frequency_soft_radps=omega))
    report = constraint_check(scenario)
    return (index, omega, report.delta_x_m, report.phi_grav_rad,
            report.status)


def cmd_sweep(args) -> int:
    scenario = _load_config(args.config)   # validate before sweeping
    del scenario
    doc = _config_doc(args.config)
    # the swept scenarios recompute delta_x from the beam so the 1/omega
    # scaling is visible
    doc["protocol"].pop("superposition_size_m", None)
    if args.min <= 0 or args.max <= args.min:
        raise ConfigError("sweep needs 0 < --min < --max")
    out = _out_dir(args)
    n = args.points
    omegas = [args.min * (args.max / args.min) ** (i / (n - 1))
              for i in range(n)] if n > 1 else [args.min]
    jobs = [(i, doc, w) for i, w in enumerate(omegas)]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as ex:
            rows = list(ex.map(_sweep_row, jobs))
    else:
        rows = [_sweep_row(j) for j in jobs]
    with open(out / "sweep.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "omega_soft_radps", "delta_x_m",
                    "phi_grav_rad", "status"])
        for index, omega, dx, phi, status in rows:
            w.writerow([index, _fmt(omega), _fmt(dx), _fmt(phi), status])
    sys.stdout.write(f"wrote {len(rows)} sweep rows\n")
    return 0


def _config_doc(name: str) -> dict:
    path = Path(name)
    if path.exists():
        return json.loads(path.read_text(encoding="utf-8"))
    stem = name.removesuffix(".json")
    preset = resources.files("catsim") / "presets" / f"{stem}.json"
    return json.loads(preset.read_text())


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catsim",
        description="Atom-nanoparticle cat-state protocol simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required,
                       help="scenario JSON path or preset name "
                            "(discussion, figure_transient)")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--force", action="store_true",
                       help="run even if feasibility constraints fail")

    p = sub.add_parser("feasibility", help="parameter budget report")
    common(p)
    p.set_defaults(func=cmd_feasibility)

    p = sub.add_parser("protocol", help="run the interferometric protocol")
    common(p)
    p.add_argument("--alpha", default="0",
                   help="initial coherent amplitude (python complex literal)")
    p.add_argument("--beta", type=float, default=None,
                   help="displacement-operator amplitude override")
    p.add_argument("--thermal", type=float, default=None, metavar="NBAR",
                   help="sample initial states from a thermal P-function")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--exact-phase", action=argparse.BooleanOptionalAction,
                   default=True,
                   help="reverse the evolved branch separation exactly")
    p.set_defaults(func=cmd_protocol)

    p = sub.add_parser("transient", help="phase-difference plot data")
    common(p)
    p.add_argument("--points", type=int, default=1000)
    p.set_defaults(func=cmd_transient)

    p = sub.add_parser("verify", help="oracle-equivalence suite")
    p.add_argument("--out", default=".")
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="soft-trap frequency sweep")
    common(p)
    p.add_argument("--min", type=float, required=True,
                   help="lowest soft-trap frequency, rad/s")
    p.add_argument("--max", type=float, required=True,
                   help="highest soft-trap frequency, rad/s")
    p.add_argument("--points", type=int, default=25)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParameterError, protocol.ProtocolError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
