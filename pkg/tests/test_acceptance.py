"""Exit criteria for the toolkit, one test per criterion.

Each test records a PASS/FAIL line that is printed in the pytest terminal
summary under "acceptance criteria".
"""

import math
import time

import numpy as np
import pytest

from inductolink.harmonics import attenuation_report, six_pulse_voltage_spectrum
from inductolink.model import InductorPart, SourceSpec, load_default_catalog
from inductolink.sizing import (
    clamp_voltage_budget,
    compute_z_base,
    design_coupler,
    select_clamp_chain,
)
from inductolink.transient import (
    ClampChain,
    disconnect_analytic,
    simulate_disconnect,
    zener_stress_check,
)

from conftest import EXAMPLE_I0, EXAMPLE_L, EXAMPLE_RC, record_criterion

EXAMPLE_SOURCE = SourceSpec(v_ll=0.048, s=0.8, f=50.0, v_dc=48.0)
EXAMPLE_PART = InductorPart("example-500uH", EXAMPLE_L, EXAMPLE_RC, 20.0, 80.0)
EXAMPLE_CHAIN = ClampChain(3.9, 0.5, 1.34e-3)


def check(number, title, conditions, detail=""):
    passed = all(conditions)
    record_criterion(number, title, passed, detail)
    assert passed, detail


def test_1_base_impedance():
    z = compute_z_base(EXAMPLE_SOURCE)
    check(1, "Z_base = 2.88 ohm", [z == pytest.approx(2.88, rel=2 * np.finfo(float).eps, abs=0)],
          f"Z_base = {z!r}")


def test_2_sizing_regression():
    d = design_coupler(EXAMPLE_SOURCE)
    conditions = [
        abs(d.l_a / 270e-6 - 1) <= 0.03,
        abs(d.l_c / 459e-6 - 1) <= 0.03,
        d.l_c == 1.7 * d.l_a,
    ]
    check(2, "L_a, L_c within 3% of 270/459 uH, L_c = 1.7 L_a", conditions,
          f"L_a = {d.l_a * 1e6:.2f} uH, L_c = {d.l_c * 1e6:.2f} uH")


def test_3_clamp_budget_and_selection():
    budget = clamp_voltage_budget(80.0, 17.02)
    zener, diode = select_clamp_chain(budget, 17.6, 1.5e-3, load_default_catalog())
    chain_v = zener.v_z + diode.v_f
    conditions = [
        abs(budget - 4.70) <= 0.01,
        (zener.name, diode.name) == ("1N5335B", "SBR20A200CTB"),
        chain_v == pytest.approx(4.4),
        chain_v <= 4.7,
    ]
    check(3, "clamp budget 4.70 V, chain 1N5335B + SBR20A200CTB", conditions,
          f"budget = {budget:.4f} V, chain = {zener.name} + {diode.name} = {chain_v:.2f} V")


def test_4_transient_peak_voltage():
    start = time.perf_counter()
    res = simulate_disconnect(EXAMPLE_PART, EXAMPLE_CHAIN, EXAMPLE_I0, 1e-6)
    elapsed = time.perf_counter() - start
    closed_form = EXAMPLE_CHAIN.v_eff + EXAMPLE_CHAIN.r_d * EXAMPLE_I0
    conditions = [
        res.v_peak <= 5.0,
        abs(res.v_peak - 4.424) <= 0.01,
        abs(closed_form - 4.424) <= 0.01,
        max(res.voltages) == res.v_peak,
        elapsed < 1.0,
    ]
    check(4, "peak coil voltage <= 5 V, 4.424 +- 0.01 V", conditions,
          f"v_peak = {res.v_peak:.4f} V in {elapsed:.3f} s")


def random_configs(n, seed=20240101):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        yield dict(
            l=float(rng.uniform(50e-6, 5e-3)),
            r_c=float(rng.uniform(0.0, 1.0)),
            v_z=float(rng.uniform(2.0, 20.0)),
            v_f=float(rng.uniform(0.3, 1.0)),
            r_d=float(rng.uniform(0.0, 0.05)),
            i_0=float(rng.uniform(0.5, 50.0)),
        )


@pytest.fixture(scope="module")
def randomized_runs():
    start = time.perf_counter()
    runs = []
    for cfg in random_configs(100):
        part = InductorPart("L", cfg["l"], cfg["r_c"], 100.0, 100.0)
        chain = ClampChain(cfg["v_z"], cfg["v_f"], cfg["r_d"])
        disc = disconnect_analytic(cfg["l"], cfg["r_c"], chain, cfg["i_0"])
        res = simulate_disconnect(part, chain, cfg["i_0"], disc.t_ext / 1e4)
        runs.append((cfg, disc, res))
    return runs, time.perf_counter() - start


def max_error_on_grid(part, chain, i_0, disc, dt, grid):
    res = simulate_disconnect(part, chain, i_0, dt)
    stride = round(grid / dt)
    return max(abs(i - disc.current(t)) for t, i, _ in res.samples[:-1][::stride])


def halving_ratios(part, chain, i_0):
    disc = disconnect_analytic(part.l, part.r, chain, i_0)
    grid = disc.t_ext / 100
    errors = [max_error_on_grid(part, chain, i_0, disc, grid / 2 ** k, grid) for k in range(3)]
    return [a / b for a, b in zip(errors, errors[1:])]


def test_5_oracle_equivalence(randomized_runs):
    runs, elapsed = randomized_runs
    start = time.perf_counter()
    t_errors = []
    i_errors = []
    for cfg, disc, res in runs:
        t_errors.append(abs(res.t_ext / disc.t_ext - 1))
        i_errors.append(max(abs(i - disc.current(t)) for t, i, _ in res.samples) / cfg["i_0"])
    ratios = halving_ratios(EXAMPLE_PART, EXAMPLE_CHAIN, EXAMPLE_I0)
    ratios += halving_ratios(InductorPart("L", 100e-6, 0.5, 100, 100), ClampChain(1.0, 0.3), 40.0)
    elapsed += time.perf_counter() - start
    conditions = [
        len(runs) == 100,
        max(t_errors) <= 1e-3,
        max(i_errors) <= 5e-4,
        all(12 <= r <= 20 for r in ratios),
        elapsed < 10.0,
    ]
    check(5, "numeric vs closed form over 100 configs, 4th-order convergence", conditions,
          f"max t_ext err = {max(t_errors):.2e}, max i err = {max(i_errors):.2e} of range, "
          f"halving ratios = {', '.join(f'{r:.1f}' for r in ratios)}, {elapsed:.2f} s")


def test_6_energy_conservation(randomized_runs):
    runs, _ = randomized_runs
    rel = [abs(res.e_dissipated / disc.energy - 1) for _, disc, res in runs]
    check(6, "dissipated energy = L i0^2 / 2 within 0.5%", [max(rel) <= 5e-3],
          f"max relative error = {max(rel):.2e}")


def test_7_spectrum_oracle():
    start = time.perf_counter()
    v_do = 48.0
    n = 2 ** 14
    theta = np.arange(n) * 2 * np.pi / n
    seg = np.pi / 3
    wave = v_do * math.pi / 3 * np.cos(np.mod(theta + seg / 2, seg) - seg / 2)
    amps = 2 * np.abs(np.fft.rfft(wave)) / n
    closed = dict(six_pulse_voltage_spectrum(v_do, 10).entries)
    rel = [abs(closed[k] / amps[k] - 1) for k in range(6, 61, 6)]
    noise = max(amps[k] for k in range(1, 61) if k % 6)
    signal_floor = min(amps[k] for k in range(6, 61, 6))
    elapsed = time.perf_counter() - start
    conditions = [
        max(rel) <= 5e-3,
        set(closed) == set(range(6, 61, 6)),
        signal_floor > 1e3 * noise,
        elapsed < 5.0,
    ]
    check(7, "closed-form 6-pulse spectrum vs FFT, orders 6..60", conditions,
          f"max rel err = {max(rel):.2e}, non-6k noise = {noise:.1e} V, smallest 6k line = {signal_floor:.3f} V")


def test_8_zener_stress():
    zener = load_default_catalog().zener("1N5335B")
    disc = disconnect_analytic(EXAMPLE_L, EXAMPLE_RC, EXAMPLE_CHAIN, EXAMPLE_I0)
    ok = zener_stress_check(disc, zener)
    over = zener_stress_check(disconnect_analytic(EXAMPLE_L, EXAMPLE_RC, EXAMPLE_CHAIN, 17.61), zener)
    conditions = [
        ok.passed,
        ok.current_margin == 0,
        abs(disc.t_ext - 1.47e-3) <= 5e-6,
        disc.t_ext <= 8.3e-3,
        not over.passed and not over.current_ok,
    ]
    check(8, "1N5335B passes at 17.6 A, fails at 17.61 A", conditions,
          f"t_ext = {disc.t_ext * 1e3:.3f} ms, time margin = {ok.time_margin * 1e3:.2f} ms")


def test_9_substituted_property_checks():
    rep = attenuation_report(six_pulse_voltage_spectrum(48.0, 50), r_base=EXAMPLE_RC, l_base=0.0,
                             l_added=EXAMPLE_L)
    # the band flag is recorded, not asserted
    check(9, "attenuation property checks; THD band flag recorded",
          [all(0 < f <= 1 for f in rep.factors),
           all(a > b for a, b in zip(rep.factors, rep.factors[1:])),
           math.isfinite(rep.thd_ratio)],
          f"THD after/before = {rep.thd_ratio:.3f}, in [0.3, 0.7]: {rep.in_halving_band}; "
          "oscilloscope traces not reproduced")
