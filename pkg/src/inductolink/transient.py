"""
Disconnection transient of the coupler inductor discharging through the
zener + freewheel diode clamp, and the connection inrush slew.

Loop equation while the clamp conducts::

    L di/dt = -(r_c + r_d) i - (v_z + v_f)

The zener is an ideal threshold; only the freewheel diode carries a dynamic
resistance. There is no capacitance, so the current ramps to zero once and
the diode blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .model import FreewheelDiodePart, InductorPart, TransientResult, ZenerPart

RESOLUTION_STEPS = 100


class ResolutionError(ValueError):
    """Time step too coarse for the extinction time being resolved."""


@dataclass(frozen=True)
class ClampChain:
    v_z: float
    v_f: float
    r_d: float = 0.0

    def __post_init__(self):
        if not self.v_z > 0:
            raise ValueError(f"v_z must be > 0, got {self.v_z}")
        if not self.v_f > 0:
            raise ValueError(f"v_f must be > 0, got {self.v_f}")
        if not self.r_d >= 0:
            raise ValueError(f"r_d must be >= 0, got {self.r_d}")

    @classmethod
    def from_parts(cls, zener: ZenerPart, diode: FreewheelDiodePart) -> "ClampChain":
        return cls(v_z=zener.v_z, v_f=diode.v_f, r_d=diode.r_d)

    @property
    def v_eff(self) -> float:
        return self.v_z + self.v_f


@dataclass(frozen=True)
class AnalyticDisconnect:
    """Closed-form solution of the clamp discharge."""

    l: float
    r_tot: float
    v_eff: float
    i_0: float
    t_ext: float

    @property
    def i_zener_initial(self) -> float:
        return self.i_0

    def current(self, t: float) -> float:
        if self.i_0 == 0 or t >= self.t_ext:
            return 0.0
        if t <= 0:
            return self.i_0
        a = self.r_tot * t / self.l
        # (1 - exp(-a)) / a -> 1 as r_tot -> 0, which recovers the linear ramp
        # without dividing by a vanishing resistance
        ramp = -math.expm1(-a) / a if a > 0 else 1.0
        return self.i_0 * math.exp(-a) - self.v_eff * t / self.l * ramp

    __call__ = current

    @property
    def energy(self) -> float:
        return 0.5 * self.l * self.i_0 ** 2


def _extinction_time(l: float, r_tot: float, v_eff: float, i_0: float) -> float:
    if i_0 == 0:
        return 0.0
    # (L/R) ln(1 + i_0 R / V) written as the linear ramp time times
    # ln(1 + x)/x, which stays finite as R -> 0
    x = i_0 * r_tot / v_eff
    shrink = math.log1p(x) / x if x > 0 else 1.0
    return l * i_0 / v_eff * shrink


def disconnect_analytic(l: float, r_c: float, chain: ClampChain, i_0: float) -> AnalyticDisconnect:
    if not l > 0:
        raise ValueError(f"l must be > 0, got {l}")
    if i_0 < 0:
        raise ValueError(f"i_0 must be >= 0, got {i_0}")
    if r_c < 0:
        raise ValueError(f"r_c must be >= 0, got {r_c}")
    r_tot = r_c + chain.r_d
    v_eff = chain.v_eff
    if v_eff <= 0 and r_tot == 0:
        raise ValueError("no discharge path: clamp voltage and loop resistance are both zero")
    return AnalyticDisconnect(l=l, r_tot=r_tot, v_eff=v_eff, i_0=float(i_0),
                              t_ext=_extinction_time(l, r_tot, v_eff, i_0))


def rk4_step(f: Callable[[float, float], float], t: float, y: float, h: float) -> float:
    k1 = f(t, y)
    k2 = f(t + h / 2, y + h / 2 * k1)
    k3 = f(t + h / 2, y + h / 2 * k2)
    k4 = f(t + h, y + h * k3)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _trapezoid(t: Sequence[float], y: Sequence[float]) -> float:
    return math.fsum((t[k + 1] - t[k]) * (y[k] + y[k + 1]) / 2 for k in range(len(t) - 1))


def simulate_disconnect(part: InductorPart, chain: ClampChain, i_0: float, dt: float) -> TransientResult:
    """Integrate the clamp discharge with fixed-step RK4 until the current hits zero.

    The step that crosses zero is cut back by linear interpolation so the
    last sample sits exactly at ``i = 0``. ``dt`` must resolve the extinction
    time with at least 100 steps.
    """
    if i_0 < 0:
        raise ValueError(f"i_0 must be >= 0, got {i_0}")
    if not dt > 0:
        raise ResolutionError(f"dt must be > 0, got {dt}")
    analytic = disconnect_analytic(part.l, part.r, chain, i_0)
    if i_0 == 0:
        return TransientResult(samples=(), t_ext=0.0, v_peak=0.0, e_dissipated=0.0, i_zener_initial=0.0)
    if dt > analytic.t_ext / RESOLUTION_STEPS:
        raise ResolutionError(
            f"dt = {dt:.6g} s is coarser than t_ext/{RESOLUTION_STEPS} = "
            f"{analytic.t_ext / RESOLUTION_STEPS:.6g} s"
        )

    l, r_tot, v_eff = part.l, part.r + chain.r_d, chain.v_eff

    def di_dt(_t, i):
        return -(r_tot * i + v_eff) / l

    times = [0.0]
    currents = [float(i_0)]
    k = 0
    i = float(i_0)
    # the bound only guards against a runaway loop
    max_steps = 2 * math.ceil(analytic.t_ext / dt) + 10
    while k < max_steps:
        i_next = rk4_step(di_dt, k * dt, i, dt)
        t_next = (k + 1) * dt
        if i_next <= 0:
            t_zero = k * dt + dt * i / (i - i_next)
            if t_zero > times[-1]:
                times.append(t_zero)
                currents.append(0.0)
            else:
                currents[-1] = 0.0
            break
        times.append(t_next)
        currents.append(i_next)
        i = i_next
        k += 1
    else:  # pragma: no cover - unreachable for a monotone decay
        raise RuntimeError("integration did not reach extinction")

    voltages = [v_eff + chain.r_d * c for c in currents]
    power = [r_tot * c * c + v_eff * c for c in currents]
    return TransientResult(
        samples=tuple(zip(times, currents, voltages)),
        t_ext=times[-1],
        v_peak=v_eff + chain.r_d * i_0,
        e_dissipated=_trapezoid(times, power),
        i_zener_initial=float(i_0),
    )


@dataclass(frozen=True)
class StressReport:
    current_margin: float  # i_zsm - i_initial, A
    time_margin: float  # t_surge - t_ext, s
    current_ok: bool
    time_ok: bool

    @property
    def passed(self) -> bool:
        return self.current_ok and self.time_ok


def zener_stress_check(result, zener: ZenerPart) -> StressReport:
    """Compare the clamp event against the zener's surge rating.

    ``result`` is anything carrying ``i_zener_initial`` and ``t_ext``, so a
    :class:`TransientResult` and an :class:`AnalyticDisconnect` both work.
    """
    current_margin = zener.i_zsm - result.i_zener_initial
    time_margin = zener.t_surge - result.t_ext
    return StressReport(
        current_margin=current_margin,
        time_margin=time_margin,
        current_ok=result.i_zener_initial <= zener.i_zsm,
        time_ok=result.t_ext <= zener.t_surge,
    )


@dataclass(frozen=True)
class InrushResult:
    slew: float  # A/s
    t_to_limit: float  # s, math.inf when the slew is zero


def connect_inrush(delta_v: float, l_c: float, i_limit: float) -> InrushResult:
    """Worst-case (resistance-free) current slew when closing onto a mismatched link."""
    if not l_c > 0:
        raise ValueError(f"l_c must be > 0, got {l_c}")
    if not i_limit > 0:
        raise ValueError(f"i_limit must be > 0, got {i_limit}")
    delta_v = abs(delta_v)
    slew = delta_v / l_c
    t_to_limit = i_limit * l_c / delta_v if delta_v > 0 else math.inf
    return InrushResult(slew=slew, t_to_limit=t_to_limit)
