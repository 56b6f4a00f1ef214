"""
Coupler sizing: base impedance, AC reactor, DC coupler inductor, clamp
voltage budget and part selection.

The AC and DC sides share one base (1:1 inverter-transformer), so no base
conversion happens anywhere in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import (
    Catalog,
    CouplerDesign,
    FreewheelDiodePart,
    HarmonicSpectrum,
    InductorPart,
    SourceSpec,
    ZenerPart,
)

DEFAULT_PERCENT = 0.03
DC_TO_AC_INDUCTANCE_RATIO = 1.7


class NoFeasiblePart(Exception):
    """No catalog part (or part combination) satisfies the constraints."""

    def __init__(self, message: str, violations: tuple[tuple[str, float], ...] = ()):
        super().__init__(message)
        self.violations = violations


def compute_z_base(src: SourceSpec) -> float:
    """Base impedance in ohms from ``v_ll`` [kV] and ``s`` [kVA].

    Same value as ``v_ll**2 * 1000 / s``; converting to volts and
    volt-amperes first keeps round inputs exact in floating point.
    """
    return (src.v_ll * 1000) ** 2 / (src.s * 1000)


def size_ac_reactor(z_base: float, percent: float = DEFAULT_PERCENT, f: float = 50.0) -> float:
    """Inductance [H] of a ``percent`` per-unit series reactor at frequency ``f``."""
    if not f > 0:
        raise ValueError(f"frequency must be > 0, got {f}")
    if not 0 <= percent < 1:
        raise ValueError(f"percent must be in [0, 1), got {percent}")
    if z_base < 0:
        raise ValueError(f"z_base must be >= 0, got {z_base}")
    return percent * z_base / (2 * math.pi * f)


def size_dc_inductor(l_a: float) -> float:
    if l_a < 0:
        raise ValueError(f"l_a must be >= 0, got {l_a}")
    return DC_TO_AC_INDUCTANCE_RATIO * l_a


def design_coupler(src: SourceSpec, percent: float = DEFAULT_PERCENT) -> CouplerDesign:
    """Run the sizing chain z_base -> L_a -> L_c for one source."""
    z_base = compute_z_base(src)
    l_a = size_ac_reactor(z_base, percent, src.f)
    return CouplerDesign(
        z_base=z_base,
        x_la=percent * z_base,
        l_a=l_a,
        l_c=size_dc_inductor(l_a),
        percent=percent,
    )


def total_coil_current(i_dc_max: float, ripple_currents: HarmonicSpectrum | None = None) -> float:
    """Worst-case coil current: DC maximum plus the plain sum of ripple amplitudes.

    Amplitudes are added arithmetically (all harmonics peaking together),
    which is the conservative reading of the current sum.
    """
    if ripple_currents is None:
        return float(i_dc_max)
    if ripple_currents.quantity != "A":
        raise ValueError("ripple spectrum must hold currents (quantity 'A')")
    return i_dc_max + math.fsum(ripple_currents.amplitudes)


def clamp_voltage_budget(p_lcmax: float, i_total: float) -> float:
    """Highest clamp-chain voltage the inductor's power rating allows."""
    if p_lcmax < 0:
        raise ValueError(f"p_lcmax must be >= 0, got {p_lcmax}")
    if i_total <= 0:
        if p_lcmax == 0:
            return 0.0
        raise ValueError(f"total current must be > 0, got {i_total}")
    return p_lcmax / i_total


def _chain_margins(zener: ZenerPart, diode: FreewheelDiodePart, budget: float,
                   i_0: float, t_required: float) -> dict[str, float]:
    return {
        "chain voltage <= budget": budget - (zener.v_z + diode.v_f),
        "zener surge current >= i_0": zener.i_zsm - i_0,
        "diode current >= i_0": diode.i_max - i_0,
        "zener surge time >= t_required": zener.t_surge - t_required,
    }


def _relative(margin: float, reference: float) -> float:
    return margin / reference if reference > 0 else margin


def select_clamp_chain(budget: float, i_0: float, t_required: float,
                       catalog: Catalog) -> tuple[ZenerPart, FreewheelDiodePart]:
    """Pick the zener + freewheel diode pair for the disconnection clamp.

    Feasible pairs keep ``v_z + v_f`` within ``budget``, carry ``i_0`` in both
    parts and have a zener surge rating at least ``t_required`` long. Among
    them the highest chain voltage wins (it empties the coil fastest); ties go
    to the lexicographically smallest ``(zener name, diode name)``.

    Raises :class:`NoFeasiblePart` naming the violated constraints of the pair
    that came closest.
    """
    if not catalog.zeners or not catalog.diodes:
        missing = "zeners" if not catalog.zeners else "diodes"
        raise NoFeasiblePart(f"catalog has no {missing}")

    best = None
    closest = None
    for zener in catalog.zeners:
        for diode in catalog.diodes:
            margins = _chain_margins(zener, diode, budget, i_0, t_required)
            if all(m >= 0 for m in margins.values()):
                key = (-(zener.v_z + diode.v_f), zener.name, diode.name)
                if best is None or key < best[0]:
                    best = (key, zener, diode)
                continue
            refs = (budget, i_0, i_0, t_required)
            worst = min(_relative(m, r) for m, r in zip(margins.values(), refs))
            if closest is None or worst > closest[0]:
                closest = (worst, zener, diode, margins)

    if best is not None:
        return best[1], best[2]
    _, zener, diode, margins = closest
    violated = tuple(sorted(((k, m) for k, m in margins.items() if m < 0), key=lambda kv: -kv[1]))
    detail = "; ".join(f"{k} violated by {-m:.6g}" for k, m in violated)
    raise NoFeasiblePart(
        f"no feasible clamp chain (closest: {zener.name} + {diode.name}: {detail})",
        violated,
    )


def select_inductor(design: CouplerDesign, catalog: Catalog) -> InductorPart:
    """Smallest catalog inductor with ``l >= design.l_c`` (ties by name)."""
    candidates = [p for p in catalog.inductors if p.l >= design.l_c]
    if not candidates:
        raise NoFeasiblePart(f"no catalog inductor with l >= {design.l_c:.6g} H")
    return min(candidates, key=lambda p: (p.l, p.name))


@dataclass(frozen=True)
class Check:
    name: str
    actual: float
    required: float
    passed: bool

    @property
    def margin(self) -> float:
        return self.actual - self.required


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)


def validate_inductor(part: InductorPart, design: CouplerDesign, i_total: float) -> ValidationReport:
    return ValidationReport((
        Check("inductance", part.l, design.l_c, part.l >= design.l_c),
        Check("current", part.i_max, i_total, part.i_max >= i_total),
    ))
