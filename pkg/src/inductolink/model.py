"""
Domain types shared across the toolkit and the parts catalog loader.

All stored quantities are SI base units (volts, amperes, henries, ohms,
seconds). The only exception is :class:`SourceSpec`, which takes the line
voltage in kV and the apparent power in kVA because that is how generator
nameplates are written.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, fields
from importlib import resources
from pathlib import Path
from typing import Sequence, Union

PathLike = Union[str, "os.PathLike[str]"]


class ValidationError(ValueError):
    """A value violates a type invariant."""


class CatalogError(ValueError):
    """A catalog file could not be parsed."""

    def __init__(self, message: str, path: PathLike | None = None, row: int | None = None):
        self.path = path
        self.row = row
        where = ""
        if path is not None:
            where += f"{os.fspath(path)}"
        if row is not None:
            where += f" row {row}"
        super().__init__(f"{where}: {message}" if where else message)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValidationError(message)


def _finite(obj, *names: str) -> None:
    for name in names:
        value = getattr(obj, name)
        _require(math.isfinite(value), f"{type(obj).__name__}.{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class SourceSpec:
    """Ratings of one generation source.

    ``v_ll`` is in kV and ``s`` in kVA; ``f`` in Hz and ``v_dc`` in volts.
    """

    v_ll: float
    s: float
    f: float
    v_dc: float

    def __post_init__(self):
        _finite(self, "v_ll", "s", "f", "v_dc")
        _require(self.v_ll > 0, f"v_ll must be > 0, got {self.v_ll}")
        _require(self.s > 0, f"s must be > 0, got {self.s}")
        _require(self.f > 0, f"f must be > 0, got {self.f}")
        _require(self.v_dc > 0, f"v_dc must be > 0, got {self.v_dc}")


@dataclass(frozen=True)
class HarmonicSpectrum:
    """Peak amplitudes of ripple components at integer multiples of ``f0``.

    ``entries`` is a tuple of ``(order, amplitude)`` pairs with strictly
    increasing orders. ``quantity`` labels what the amplitudes are
    (``"V"`` or ``"A"``).
    """

    f0: float
    entries: tuple[tuple[int, float], ...] = ()
    quantity: str = "V"

    def __post_init__(self):
        entries = tuple((int(n), float(a)) for n, a in self.entries)
        object.__setattr__(self, "entries", entries)
        _require(self.f0 > 0 and math.isfinite(self.f0), f"f0 must be > 0, got {self.f0}")
        _require(self.quantity in ("V", "A"), f"quantity must be 'V' or 'A', got {self.quantity!r}")
        prev = 0
        for n, a in entries:
            _require(n > prev, f"orders must be positive and strictly increasing, got {n} after {prev}")
            _require(a >= 0 and math.isfinite(a), f"amplitude at order {n} must be >= 0, got {a}")
            prev = n

    @property
    def orders(self) -> list[int]:
        return [n for n, _ in self.entries]

    @property
    def amplitudes(self) -> list[float]:
        return [a for _, a in self.entries]

    def frequency(self, order: int) -> float:
        return order * self.f0

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


@dataclass(frozen=True)
class CouplingNetworkModel:
    """Thevenin reduction of the two sides of the coupler.

    The converter side is ``v_i`` behind ``z_i`` with the ripple source
    ``ripple`` in series; the network side is ``v_o`` behind ``z_o``.
    ``z_i = z_o = 0`` is the worst case for sizing and is the default.
    """

    v_i: float
    v_o: float
    ripple: HarmonicSpectrum
    z_i: float = 0.0
    z_o: float = 0.0

    def __post_init__(self):
        _require(self.z_i >= 0, f"z_i must be >= 0, got {self.z_i}")
        _require(self.z_o >= 0, f"z_o must be >= 0, got {self.z_o}")
        _require(self.ripple.quantity == "V", "ripple source must be a voltage spectrum")

    @property
    def loop_resistance(self) -> float:
        return self.z_i + self.z_o


@dataclass(frozen=True)
class CouplerDesign:
    z_base: float
    x_la: float
    l_a: float
    l_c: float
    percent: float = 0.03

    def __post_init__(self):
        for f_ in fields(self):
            value = getattr(self, f_.name)
            _require(value >= 0 and math.isfinite(value), f"{f_.name} must be >= 0, got {value}")
        _require(self.l_c == 1.7 * self.l_a, f"l_c must equal 1.7 * l_a ({1.7 * self.l_a}), got {self.l_c}")
        _require(math.isclose(self.x_la, self.percent * self.z_base, rel_tol=1e-12, abs_tol=1e-300),
                 f"x_la must equal percent * z_base, got {self.x_la}")


@dataclass(frozen=True)
class InductorPart:
    name: str
    l: float  # H
    r: float  # series resistance, ohm
    i_max: float  # A
    p_max: float  # W

    def __post_init__(self):
        _require(bool(self.name), "part name must not be empty")
        _finite(self, "l", "r", "i_max", "p_max")
        _require(self.l > 0, f"{self.name}: l must be > 0, got {self.l}")
        _require(self.r >= 0, f"{self.name}: r must be >= 0, got {self.r}")
        _require(self.i_max > 0, f"{self.name}: i_max must be > 0, got {self.i_max}")
        _require(self.p_max > 0, f"{self.name}: p_max must be > 0, got {self.p_max}")


@dataclass(frozen=True)
class ZenerPart:
    name: str
    v_z: float  # V
    i_zsm: float  # non-repetitive surge current, A
    t_surge: float  # duration the surge rating applies to, s

    def __post_init__(self):
        _require(bool(self.name), "part name must not be empty")
        _finite(self, "v_z", "i_zsm", "t_surge")
        _require(self.v_z > 0, f"{self.name}: v_z must be > 0, got {self.v_z}")
        _require(self.i_zsm > 0, f"{self.name}: i_zsm must be > 0, got {self.i_zsm}")
        _require(self.t_surge > 0, f"{self.name}: t_surge must be > 0, got {self.t_surge}")


@dataclass(frozen=True)
class FreewheelDiodePart:
    name: str
    v_f: float  # V
    i_max: float  # A
    v_r: float  # reverse blocking, V
    r_d: float  # dynamic resistance, ohm

    def __post_init__(self):
        _require(bool(self.name), "part name must not be empty")
        _finite(self, "v_f", "i_max", "v_r", "r_d")
        for name in ("v_f", "i_max", "v_r", "r_d"):
            value = getattr(self, name)
            _require(value > 0, f"{self.name}: {name} must be > 0, got {value}")


@dataclass(frozen=True)
class TransientResult:
    """Sampled disconnection waveform.

    ``samples`` holds ``(t, i, v_coil)`` triples. An ``i_0 = 0`` run has no
    samples at all.
    """

    samples: tuple[tuple[float, float, float], ...]
    t_ext: float
    v_peak: float
    e_dissipated: float
    i_zener_initial: float

    def __post_init__(self):
        samples = tuple((float(t), float(i), float(v)) for t, i, v in self.samples)
        object.__setattr__(self, "samples", samples)
        _require(self.t_ext >= 0, f"t_ext must be >= 0, got {self.t_ext}")
        for (_, i_prev, _), (_, i_next, _) in zip(samples, samples[1:]):
            _require(i_next <= i_prev, "current must be non-increasing over the samples")
        if samples:
            _require(abs(samples[-1][1]) <= 1e-9 * max(1.0, abs(samples[0][1])),
                     f"final current must be 0, got {samples[-1][1]}")
            _require(self.t_ext <= samples[-1][0] * (1 + 1e-12),
                     "t_ext must not exceed the last sample time")

    @property
    def times(self) -> list[float]:
        return [s[0] for s in self.samples]

    @property
    def currents(self) -> list[float]:
        return [s[1] for s in self.samples]

    @property
    def voltages(self) -> list[float]:
        return [s[2] for s in self.samples]


# -- catalog ---------------------------------------------------------------

INDUCTORS_FILE = "inductors.csv"
ZENERS_FILE = "zeners.csv"
DIODES_FILE = "diodes.csv"

# column name -> record field, in file order
INDUCTOR_COLUMNS = {"name": "name", "l_H": "l", "r_ohm": "r", "i_max_A": "i_max", "p_max_W": "p_max"}
ZENER_COLUMNS = {"name": "name", "v_z_V": "v_z", "i_zsm_A": "i_zsm", "t_surge_s": "t_surge"}
DIODE_COLUMNS = {"name": "name", "v_f_V": "v_f", "i_max_A": "i_max", "v_r_V": "v_r", "r_d_ohm": "r_d"}

_KINDS = (
    ("inductors", INDUCTORS_FILE, InductorPart, INDUCTOR_COLUMNS),
    ("zeners", ZENERS_FILE, ZenerPart, ZENER_COLUMNS),
    ("diodes", DIODES_FILE, FreewheelDiodePart, DIODE_COLUMNS),
)


@dataclass(frozen=True)
class Catalog:
    inductors: tuple[InductorPart, ...] = ()
    zeners: tuple[ZenerPart, ...] = ()
    diodes: tuple[FreewheelDiodePart, ...] = ()

    def __post_init__(self):
        for kind, _, _, _ in _KINDS:
            parts = tuple(getattr(self, kind))
            object.__setattr__(self, kind, parts)
            seen = set()
            for part in parts:
                _require(part.name not in seen, f"duplicate {kind[:-1]} name {part.name!r}")
                seen.add(part.name)

    def is_empty(self) -> bool:
        return not (self.inductors or self.zeners or self.diodes)

    def inductor(self, name: str) -> InductorPart:
        return _by_name(self.inductors, name, "inductor")

    def zener(self, name: str) -> ZenerPart:
        return _by_name(self.zeners, name, "zener")

    def diode(self, name: str) -> FreewheelDiodePart:
        return _by_name(self.diodes, name, "diode")


def _by_name(parts, name, kind):
    for part in parts:
        if part.name == name:
            return part
    raise KeyError(f"no {kind} named {name!r} in catalog")


def _parse_rows(text: str, path, record_type, columns: dict[str, str]) -> list:
    lines = [
        (lineno, line) for lineno, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        return []
    reader = csv.reader(io.StringIO("\n".join(line for _, line in lines)))
    rows = list(reader)
    header = [h.strip() for h in rows[0]]
    if header != list(columns):
        raise CatalogError(f"expected header {','.join(columns)!s}, got {','.join(header)}",
                           path, lines[0][0])
    parts = []
    names = set()
    for (lineno, _), row in zip(lines[1:], rows[1:]):
        if len(row) != len(columns):
            raise CatalogError(f"expected {len(columns)} fields, got {len(row)}", path, lineno)
        kwargs = {}
        for (column, attr), raw in zip(columns.items(), row):
            raw = raw.strip()
            if attr == "name":
                kwargs[attr] = raw
                continue
            try:
                kwargs[attr] = float(raw)
            except ValueError:
                raise CatalogError(f"field {column!r}: cannot parse {raw!r} as a number",
                                   path, lineno) from None
        try:
            part = record_type(**kwargs)
        except ValidationError as exc:
            raise CatalogError(f"invalid record: {exc}", path, lineno) from None
        if part.name in names:
            raise CatalogError(f"duplicate name {part.name!r}", path, lineno)
        names.add(part.name)
        parts.append(part)
    return parts


def load_catalog(path: PathLike) -> Catalog:
    """Load ``inductors.csv``, ``zeners.csv`` and ``diodes.csv`` from a directory.

    A missing file is treated as an empty list of that kind. Row numbers in
    :class:`CatalogError` are 1-based physical line numbers.
    """
    directory = Path(path)
    if not directory.is_dir():
        raise FileNotFoundError(f"catalog directory not found: {directory}")
    loaded = {}
    for kind, filename, record_type, columns in _KINDS:
        file = directory / filename
        if file.exists():
            loaded[kind] = _parse_rows(file.read_text(encoding="utf-8"), file, record_type, columns)
        else:
            loaded[kind] = []
    return Catalog(**loaded)


def default_catalog_dir() -> Path:
    """Directory of the catalog bundled with the package."""
    return Path(str(resources.files("inductolink") / "data" / "catalog"))


def load_default_catalog() -> Catalog:
    return load_catalog(default_catalog_dir())


def _format_number(value: float) -> str:
    # repr gives the shortest string that round-trips and never uses a locale
    return repr(float(value))


def dump_parts(parts: Sequence, columns: dict[str, str]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(list(columns))
    for part in parts:
        writer.writerow([
            getattr(part, attr) if attr == "name" else _format_number(getattr(part, attr))
            for attr in columns.values()
        ])
    return out.getvalue()


def save_catalog(catalog: Catalog, path: PathLike) -> None:
    directory = Path(path)
    directory.mkdir(parents=True, exist_ok=True)
    for kind, filename, _, columns in _KINDS:
        (directory / filename).write_text(dump_parts(getattr(catalog, kind), columns), encoding="utf-8")

