"""
Command-line front end: ``design``, ``check``, ``simulate`` and ``spectrum``.

Exit codes: 0 when every check passes, 1 on input or usage errors, 2 when
the design is infeasible or a check fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import harmonics, sizing, transient
from .model import (
    Catalog,
    CatalogError,
    CouplerDesign,
    CouplingNetworkModel,
    FreewheelDiodePart,
    InductorPart,
    SourceSpec,
    ValidationError,
    ZenerPart,
    default_catalog_dir,
    load_catalog,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2

CATALOG_ENV = "INDUCTOLINK_CATALOG"
LOCAL_CATALOG = Path("catalog")
DEFAULT_POWER_FACTOR = 0.8

WAVEFORM_HEADER = ("t_s", "i_A", "v_coil_V")
SPECTRUM_HEADER = ("order", "f_Hz", "v_peak", "i_peak")


class InputError(Exception):
    pass


def fmt(value) -> str:
    """Locale-independent, shortest round-tripping number formatting."""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def resolve_catalog_dir(flag: str | None) -> Path:
    if flag:
        return Path(flag)
    env = os.environ.get(CATALOG_ENV)
    if env:
        return Path(env)
    if LOCAL_CATALOG.is_dir():
        return LOCAL_CATALOG
    return default_catalog_dir()


def open_catalog(flag: str | None) -> Catalog:
    path = resolve_catalog_dir(flag)
    try:
        return load_catalog(path)
    except (CatalogError, FileNotFoundError, ValidationError) as exc:
        raise InputError(f"catalog: {exc}") from None


# -- design ----------------------------------------------------------------

@dataclass
class DesignReport:
    inputs: dict
    design: CouplerDesign | None = None
    inductor: InductorPart | None = None
    i_dc: float | None = None
    ripple_sum: float | None = None
    i_total: float | None = None
    budget: float | None = None
    zener: ZenerPart | None = None
    diode: FreewheelDiodePart | None = None
    inductor_checks: sizing.ValidationReport | None = None
    disconnect: transient.AnalyticDisconnect | None = None
    stress: transient.StressReport | None = None
    attenuation: harmonics.AttenuationReport | None = None
    infeasible: str | None = None
    failed_stage: str | None = None

    @property
    def passed(self) -> bool:
        if self.infeasible is not None:
            return False
        checks = [self.inductor_checks, self.stress]
        return all(c is not None and c.passed for c in checks)

    def rows(self) -> list[tuple[str, object]]:
        rows: list[tuple[str, object]] = [(f"input.{k}", v) for k, v in self.inputs.items()]
        d = self.design
        if d is not None:
            rows += [("z_base_ohm", d.z_base), ("x_la_ohm", d.x_la), ("l_a_H", d.l_a),
                     ("l_c_H", d.l_c), ("percent", d.percent)]
        if self.inductor is not None:
            p = self.inductor
            rows += [("inductor", p.name), ("inductor.l_H", p.l), ("inductor.r_ohm", p.r),
                     ("inductor.i_max_A", p.i_max), ("inductor.p_max_W", p.p_max)]
        for key, value in (("i_dc_A", self.i_dc), ("ripple_sum_A", self.ripple_sum),
                           ("i_total_A", self.i_total), ("clamp_budget_V", self.budget)):
            if value is not None:
                rows.append((key, value))
        if self.zener is not None and self.diode is not None:
            rows += [("zener", self.zener.name), ("diode", self.diode.name),
                     ("chain_V", self.zener.v_z + self.diode.v_f)]
        if self.inductor_checks is not None:
            for c in self.inductor_checks.checks:
                rows += [(f"check.{c.name}", "pass" if c.passed else "FAIL"),
                         (f"check.{c.name}.actual", c.actual),
                         (f"check.{c.name}.required", c.required)]
        if self.disconnect is not None:
            rows += [("t_ext_s", self.disconnect.t_ext),
                     ("v_clamp_V", self.disconnect.v_eff)]
        if self.stress is not None:
            s = self.stress
            rows += [("check.zener_current", "pass" if s.current_ok else "FAIL"),
                     ("check.zener_current.margin_A", s.current_margin),
                     ("check.zener_time", "pass" if s.time_ok else "FAIL"),
                     ("check.zener_time.margin_s", s.time_margin)]
        if self.attenuation is not None:
            a = self.attenuation
            rows += [("thd_i_before", a.thd_before), ("thd_i_after", a.thd_after),
                     ("thd_ratio", a.thd_ratio), ("thd_ratio_in_0.3_0.7", a.in_halving_band)]
        if self.infeasible is not None:
            rows += [("infeasible_stage", self.failed_stage), ("infeasible", self.infeasible)]
        rows.append(("result", "PASS" if self.passed else "FAIL"))
        return rows

    def to_text(self) -> str:
        rows = self.rows()
        width = max(len(k) for k, _ in rows)
        return "".join(f"{k.ljust(width)}  {fmt(v)}\n" for k, v in rows)

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(("key", "value"))
        for k, v in self.rows():
            writer.writerow((k, fmt(v)))
        return out.getvalue()


def run_design(src: SourceSpec, catalog: Catalog, percent: float = sizing.DEFAULT_PERCENT,
               i_dc: float | None = None, power_factor: float = DEFAULT_POWER_FACTOR,
               k_max: int = harmonics.DEFAULT_K_MAX, z_i: float = 0.0, z_o: float = 0.0,
               inputs: dict | None = None) -> DesignReport:
    """Full sizing and verification chain for one source.

    ``i_dc`` defaults to the rated real power ``power_factor * s`` delivered
    at ``v_dc``. Ripple currents come from the ideal six-pulse spectrum at
    ``v_do = v_dc`` through the chosen inductor plus the Thevenin resistances.
    """
    report = DesignReport(inputs=dict(inputs or {}))

    def infeasible(stage, message):
        report.failed_stage = stage
        report.infeasible = message
        return report

    report.design = d = sizing.design_coupler(src, percent)
    if d.l_c <= 0:
        return infeasible("sizing", "coupler inductance is zero; connection would be unprotected")

    try:
        report.inductor = ind = sizing.select_inductor(d, catalog)
    except sizing.NoFeasiblePart as exc:
        return infeasible("inductor selection", str(exc))

    report.i_dc = i_dc if i_dc is not None else power_factor * src.s * 1000 / src.v_dc
    network = CouplingNetworkModel(
        v_i=src.v_dc, v_o=src.v_dc, ripple=harmonics.six_pulse_voltage_spectrum(src.v_dc, k_max, src.f),
        z_i=z_i, z_o=z_o)
    v_spec = network.ripple
    r_loop = ind.r + network.loop_resistance
    i_spec = harmonics.ripple_current_spectrum(v_spec, r_loop, ind.l)
    report.i_total = sizing.total_coil_current(report.i_dc, i_spec)
    report.ripple_sum = report.i_total - report.i_dc
    report.budget = budget = sizing.clamp_voltage_budget(ind.p_max, report.i_total)
    report.attenuation = harmonics.attenuation_report(v_spec, r_loop, 0.0, ind.l,
                                                      base=report.i_dc)

    # shortest possible extinction among chains within budget: every
    # candidate zener has to survive at least this long
    v_top = max(budget, 1e-12)
    t_required = transient.disconnect_analytic(
        ind.l, ind.r, transient.ClampChain(v_top / 2, v_top / 2), report.i_total).t_ext
    try:
        report.zener, report.diode = sizing.select_clamp_chain(budget, report.i_total, t_required, catalog)
    except sizing.NoFeasiblePart as exc:
        return infeasible("clamp selection", str(exc))

    report.inductor_checks = sizing.validate_inductor(ind, d, report.i_total)
    chain = transient.ClampChain.from_parts(report.zener, report.diode)
    report.disconnect = transient.disconnect_analytic(ind.l, ind.r, chain, report.i_total)
    report.stress = transient.zener_stress_check(report.disconnect, report.zener)
    return report


# -- output helpers ----------------------------------------------------------

def _emit(text: str, out: str | None, stream) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stream.write(text)


def waveform_csv(result) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(WAVEFORM_HEADER)
    for t, i, v in result.samples:
        writer.writerow((fmt(t), fmt(i), fmt(v)))
    return out.getvalue()


def spectrum_csv(v_spec, i_spec) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SPECTRUM_HEADER)
    for (n, v), (_, i) in zip(v_spec.entries, i_spec.entries):
        writer.writerow((n, fmt(v_spec.frequency(n)), fmt(v), fmt(i)))
    return out.getvalue()


# -- commands --------------------------------------------------------------

def cmd_design(args, stdout, stderr) -> int:
    try:
        src = SourceSpec(v_ll=args.vll_kv, s=args.s_kva, f=args.f_hz, v_dc=args.vdc)
    except ValidationError as exc:
        raise InputError(f"source: {exc}") from None
    if args.zi_ohm < 0 or args.zo_ohm < 0:
        raise InputError("Thevenin resistances must be >= 0")
    if not 0 <= args.percent < 1:
        raise InputError(f"--percent must be in [0, 1), got {args.percent}")
    catalog_dir = resolve_catalog_dir(args.catalog_dir)
    catalog = open_catalog(args.catalog_dir)
    inputs = {
        "vll_kv": args.vll_kv, "s_kva": args.s_kva, "f_hz": args.f_hz, "vdc": args.vdc,
        "percent": args.percent, "idc_a": args.idc_a, "pf": args.pf, "kmax": args.kmax,
        "zi_ohm": args.zi_ohm, "zo_ohm": args.zo_ohm, "catalog_dir": str(catalog_dir),
    }
    report = run_design(src, catalog, percent=args.percent, i_dc=args.idc_a, power_factor=args.pf,
                        k_max=args.kmax, z_i=args.zi_ohm, z_o=args.zo_ohm, inputs=inputs)
    text = report.to_text()
    stdout.write(text)
    if args.out:
        _emit(text, args.out, stdout)
    if args.csv:
        _emit(report.to_csv(), args.csv, stdout)
    if report.infeasible is not None:
        stderr.write(f"error: {report.failed_stage}: {report.infeasible}\n")
    return EXIT_OK if report.passed else EXIT_INFEASIBLE


def cmd_check(args, stdout, stderr) -> int:
    catalog = open_catalog(args.catalog_dir)
    try:
        inductor = catalog.inductor(args.inductor)
        zener = catalog.zener(args.zener)
        diode = catalog.diode(args.diode)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None
    if args.i0_a < 0:
        raise InputError(f"--i0-a must be >= 0, got {args.i0_a}")
    chain = transient.ClampChain.from_parts(zener, diode)
    disc = transient.disconnect_analytic(inductor.l, inductor.r, chain, args.i0_a)
    stress = transient.zener_stress_check(disc, zener)
    checks = [
        ("zener_current", stress.current_ok, stress.current_margin),
        ("zener_time", stress.time_ok, stress.time_margin),
        ("inductor_current", inductor.i_max >= args.i0_a, inductor.i_max - args.i0_a),
        ("diode_current", diode.i_max >= args.i0_a, diode.i_max - args.i0_a),
    ]
    if args.i0_a > 0:
        budget = sizing.clamp_voltage_budget(inductor.p_max, args.i0_a)
        checks.append(("clamp_budget", chain.v_eff <= budget, budget - chain.v_eff))
    rows = [("inductor", inductor.name), ("zener", zener.name), ("diode", diode.name),
            ("i0_A", float(args.i0_a)), ("t_ext_s", disc.t_ext),
            ("v_peak_V", chain.v_eff + chain.r_d * args.i0_a if args.i0_a > 0 else 0.0)]
    for name, ok, margin in checks:
        rows += [(f"check.{name}", "pass" if ok else "FAIL"), (f"check.{name}.margin", margin)]
    passed = all(ok for _, ok, _ in checks)
    rows.append(("result", "PASS" if passed else "FAIL"))
    width = max(len(k) for k, _ in rows)
    text = "".join(f"{k.ljust(width)}  {fmt(v)}\n" for k, v in rows)
    stdout.write(text)
    if args.out:
        _emit(text, args.out, stdout)
    return EXIT_OK if passed else EXIT_INFEASIBLE


def cmd_simulate(args, stdout, stderr) -> int:
    try:
        part = InductorPart(name="cli", l=args.l_uh * 1e-6, r=args.rc_ohm,
                            i_max=args.imax_a, p_max=args.pmax_w)
        chain = transient.ClampChain(args.vz_v, args.vf_v, args.rd_ohm)
        zener = ZenerPart(name="cli", v_z=args.vz_v, i_zsm=args.izsm_a, t_surge=args.tsurge_ms * 1e-3)
        result = transient.simulate_disconnect(part, chain, args.i0_a, args.dt_us * 1e-6)
    except (ValidationError, ValueError) as exc:
        raise InputError(str(exc)) from None
    stress = transient.zener_stress_check(result, zener)
    summary = (
        f"t_ext_s={fmt(result.t_ext)} v_peak_V={fmt(result.v_peak)} "
        f"e_dissipated_J={fmt(result.e_dissipated)} "
        f"zener_current_margin_A={fmt(stress.current_margin)} "
        f"zener_time_margin_s={fmt(stress.time_margin)} "
        f"stress={'pass' if stress.passed else 'FAIL'}\n"
    )
    if args.out:
        _emit(waveform_csv(result), args.out, stdout)
        stdout.write(summary)
    else:
        stdout.write(waveform_csv(result))
        stderr.write(summary)
    return EXIT_OK if stress.passed else EXIT_INFEASIBLE


def cmd_spectrum(args, stdout, stderr) -> int:
    try:
        v_spec = harmonics.six_pulse_voltage_spectrum(args.vdo_v, args.kmax, args.f_hz)
        i_spec = harmonics.ripple_current_spectrum(v_spec, args.r_ohm, args.l_uh * 1e-6)
    except (ValidationError, ValueError) as exc:
        raise InputError(str(exc)) from None
    thd_v = harmonics.thd(v_spec, args.vdo_v) if args.vdo_v > 0 else 0.0
    # current THD needs a DC reference; without one, use the DC current the
    # same loop would carry from v_do
    i_dc = args.idc_a if args.idc_a else (args.vdo_v / args.r_ohm if args.r_ohm > 0 else None)
    summary = f"thd_v={fmt(thd_v)}"
    if i_dc:
        summary += f" thd_i={fmt(harmonics.thd(i_spec, i_dc))}"
    summary += f" ripple_rss_A={fmt(harmonics.thd(i_spec, 1.0))}\n"
    if args.out:
        _emit(spectrum_csv(v_spec, i_spec), args.out, stdout)
        stdout.write(summary)
    else:
        stdout.write(spectrum_csv(v_spec, i_spec))
        stderr.write(summary)
    return EXIT_OK


# -- argument parsing ------------------------------------------------------

def _positive_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inductolink",
        description="Size and verify an inductor coupler with a zener/diode freewheel clamp.",
    )
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--catalog-dir", default=argparse.SUPPRESS,
                        help=f"catalog directory (default: ${CATALOG_ENV}, ./catalog, or the bundled one)")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output file")
    parser.add_argument("--catalog-dir", default=None, help=argparse.SUPPRESS)
    parser.add_argument("--out", default=None, help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", parents=[common], help="size the coupler and pick parts")
    p.add_argument("--vll-kv", type=float, required=True, help="line voltage [kV]")
    p.add_argument("--s-kva", type=float, required=True, help="apparent power [kVA]")
    p.add_argument("--f-hz", type=float, default=50.0, help="mains frequency [Hz]")
    p.add_argument("--vdc", type=float, required=True, help="DC link voltage [V]")
    p.add_argument("--percent", type=float, default=sizing.DEFAULT_PERCENT,
                   help="AC reactor size as a fraction of Z_base (default 0.03)")
    p.add_argument("--idc-a", type=float, default=None,
                   help="maximum DC current of the source [A] (default pf * S / Vdc)")
    p.add_argument("--pf", type=float, default=DEFAULT_POWER_FACTOR,
                   help="power factor used for the default DC current (default 0.8)")
    p.add_argument("--kmax", type=_positive_int, default=harmonics.DEFAULT_K_MAX,
                   help="number of ripple harmonics (default 50)")
    p.add_argument("--zi-ohm", type=float, default=0.0, help="converter Thevenin resistance")
    p.add_argument("--zo-ohm", type=float, default=0.0, help="network Thevenin resistance")
    p.add_argument("--csv", default=None, help="also write the report as key,value CSV")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("check", parents=[common], help="stress-check an explicit part set")
    p.add_argument("--inductor", required=True)
    p.add_argument("--zener", required=True)
    p.add_argument("--diode", required=True)
    p.add_argument("--i0-a", "--i0", type=float, required=True, help="current at disconnection [A]")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("simulate", parents=[common], help="simulate the disconnection transient")
    p.add_argument("--l-uh", type=float, default=500.0, help="coil inductance [uH]")
    p.add_argument("--rc-ohm", type=float, default=0.2, help="coil series resistance [ohm]")
    p.add_argument("--imax-a", type=float, default=20.0, help="coil current rating [A]")
    p.add_argument("--pmax-w", type=float, default=80.0, help="coil power rating [W]")
    p.add_argument("--vz-v", type=float, default=3.9, help="zener voltage [V]")
    p.add_argument("--vf-v", type=float, default=0.5, help="freewheel diode forward drop [V]")
    p.add_argument("--rd-ohm", type=float, default=0.00134, help="diode dynamic resistance [ohm]")
    p.add_argument("--i0-a", "--i0", type=float, default=17.6, help="initial coil current [A]")
    p.add_argument("--dt-us", type=float, default=1.0, help="integration step [us]")
    p.add_argument("--izsm-a", type=float, default=17.6, help="zener surge current rating [A]")
    p.add_argument("--tsurge-ms", type=float, default=8.3, help="zener surge duration rating [ms]")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("spectrum", parents=[common], help="six-pulse ripple spectrum as CSV")
    p.add_argument("--vdo-v", type=float, default=48.0, help="average DC voltage [V]")
    p.add_argument("--kmax", type=_positive_int, default=harmonics.DEFAULT_K_MAX)
    p.add_argument("--r-ohm", type=float, default=0.2, help="loop resistance [ohm]")
    p.add_argument("--l-uh", type=float, default=500.0, help="loop inductance [uH]")
    p.add_argument("--f-hz", type=float, default=50.0, help="mains frequency [Hz]")
    p.add_argument("--idc-a", type=float, default=None, help="DC current used as the current THD reference")
    p.set_defaults(func=cmd_spectrum)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, stdout, stderr)
    except InputError as exc:
        stderr.write(f"error: {args.command}: {exc}\n")
        return EXIT_INPUT
    except OSError as exc:
        stderr.write(f"error: {args.command}: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
