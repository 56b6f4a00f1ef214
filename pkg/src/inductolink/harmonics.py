"""
DC-side ripple of an ideal six-pulse bridge and its filtering by the coupler.

Amplitudes are peak values throughout; THD ratios are therefore the same
as RMS ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import HarmonicSpectrum

DEFAULT_K_MAX = 50
PULSES = 6
HALVING_BAND = (0.3, 0.7)


def six_pulse_voltage_spectrum(v_do: float, k_max: int = DEFAULT_K_MAX, f0: float = 50.0) -> HarmonicSpectrum:
    """Ripple voltage of an ideal six-pulse bridge (no overlap, no firing delay).

    Orders ``n = 6k`` for ``k = 1..k_max`` with peak amplitude
    ``v_do * 2 / (n**2 - 1)``, where ``v_do`` is the average DC output.
    """
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    if v_do < 0:
        raise ValueError(f"v_do must be >= 0, got {v_do}")
    entries = []
    for k in range(1, k_max + 1):
        n = PULSES * k
        entries.append((n, v_do * 2.0 / (n * n - 1)))
    return HarmonicSpectrum(f0=f0, entries=tuple(entries), quantity="V")


def series_rl_magnitude(r: float, l: float, frequency: float) -> float:
    return abs(complex(r, 2 * math.pi * frequency * l))


def ripple_current_spectrum(v_spec: HarmonicSpectrum, r: float, l: float) -> HarmonicSpectrum:
    """Currents driven by a ripple voltage spectrum through a series R-L."""
    if v_spec.quantity != "V":
        raise ValueError("ripple_current_spectrum expects a voltage spectrum")
    if r < 0 or l < 0:
        raise ValueError(f"r and l must be >= 0, got r={r}, l={l}")
    if r == 0 and l == 0:
        raise ValueError("degenerate impedance: r and l are both zero")
    entries = tuple(
        (n, v / series_rl_magnitude(r, l, v_spec.frequency(n))) for n, v in v_spec.entries
    )
    return HarmonicSpectrum(f0=v_spec.f0, entries=entries, quantity="A")


def thd(spec: HarmonicSpectrum, base: float) -> float:
    """Root-sum-square of the harmonic amplitudes over a reference amplitude."""
    if not base > 0:
        raise ValueError(f"base must be > 0, got {base}")
    return math.sqrt(math.fsum(a * a for a in spec.amplitudes)) / base


@dataclass(frozen=True)
class AttenuationReport:
    orders: tuple[int, ...]
    factors: tuple[float, ...]
    before: HarmonicSpectrum
    after: HarmonicSpectrum
    thd_before: float
    thd_after: float
    base: float

    @property
    def thd_ratio(self) -> float:
        if self.thd_before == 0:
            return 1.0
        return self.thd_after / self.thd_before

    @property
    def in_halving_band(self) -> bool:
        """Whether the THD reduction lands within the "about half" band."""
        lo, hi = HALVING_BAND
        return lo <= self.thd_ratio <= hi


def attenuation_report(v_spec: HarmonicSpectrum, r_base: float, l_base: float,
                       l_added: float, base: float = 1.0) -> AttenuationReport:
    """Effect of inserting ``l_added`` in series with an ``r_base``/``l_base`` loop.

    ``factors[k]`` is the current at ``orders[k]`` after insertion divided by
    the current before. ``base`` only scales the reported THD values; the
    ratio does not depend on it.
    """
    if l_added < 0:
        raise ValueError(f"l_added must be >= 0, got {l_added}")
    before = ripple_current_spectrum(v_spec, r_base, l_base)
    after = ripple_current_spectrum(v_spec, r_base, l_base + l_added)
    # |Z_before / Z_after|**2 = 1 - c * w**2 / (r**2 + l_tot**2 * w**2) with
    # c = l_tot**2 - l_base**2. Written as 1 / (r**2 / w**2 + l_tot**2), every
    # step is monotone in w, so rounding cannot break the ordering of factors.
    l_tot = l_base + l_added
    c = l_added * (2 * l_base + l_added)
    factors = []
    for n in v_spec.orders:
        w = 2 * math.pi * v_spec.frequency(n)
        factors.append(math.sqrt(1 - c / (r_base * r_base / (w * w) + l_tot * l_tot)))
    return AttenuationReport(
        orders=tuple(v_spec.orders),
        factors=tuple(factors),
        before=before,
        after=after,
        thd_before=thd(before, base),
        thd_after=thd(after, base),
        base=base,
    )
