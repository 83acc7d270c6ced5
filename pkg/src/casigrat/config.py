"""Flat key-value configuration files with unit-suffixed quantities.

Files are INI-style sections of ``key = value`` lines.  Every physical
quantity carries a unit suffix (``depth = 98nm``, ``voltage = 0.3V``) and
is converted on read to the package-wide working units: meters, volts,
hertz, seconds, and degrees for angles.  Grids use the compact form
``start:stop:stepUNIT`` (inclusive of ``stop``) or a comma list.
"""

from __future__ import annotations

import configparser
import hashlib
import math
import re
from dataclasses import dataclass

import numpy as np

Array = np.ndarray


class ConfigError(ValueError):
    """A configuration file is malformed or a value cannot be parsed."""


# multipliers onto the working units (m, V, Hz, s, deg)
_UNIT_SCALE = {
    "": 1.0,
    "m": 1.0, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9,
    "pm": 1e-12,
    "v": 1.0, "mv": 1e-3, "uv": 1e-6,
    "hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9,
    "s": 1.0, "ms": 1e-3, "us": 1e-6,
    "deg": 1.0, "rad": 180.0 / math.pi,
}
# case matters only where SI prefixes collide (mV vs MHz); resolve by
# lowercasing everything except the M prefix
_CASE_SENSITIVE = {"MHz": "mhz", "mHz": None, "Mv": None, "MV": None}

_QUANTITY_RE = re.compile(
    r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*([a-zA-Zµ]*)\s*$")


def _unit_scale(unit: str) -> float:
    if unit in _CASE_SENSITIVE:
        mapped = _CASE_SENSITIVE[unit]
        if mapped is None:
            raise ConfigError(f"ambiguous unit suffix {unit!r}")
        return _UNIT_SCALE[mapped]
    key = unit if unit in _UNIT_SCALE else unit.lower()
    if key not in _UNIT_SCALE:
        raise ConfigError(f"unknown unit suffix {unit!r}")
    return _UNIT_SCALE[key]


def parse_quantity(text: str) -> float:
    """Parse ``98nm`` / ``0.3V`` / ``94.6deg`` / ``1.5`` to a float in
    working units.  Bare numbers are dimensionless."""
    match = _QUANTITY_RE.match(str(text))
    if match is None:
        raise ConfigError(f"cannot parse quantity {text!r}")
    value, unit = match.groups()
    return float(value) * _unit_scale(unit)


def parse_grid(text: str) -> Array:
    """Parse a sampling grid.

    ``100:600:25nm`` means start 100, stop 600 inclusive, step 25, all in
    the trailing unit; the step must divide the span.  A comma list or a
    single quantity is also accepted.
    """
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid {text!r} must be start:stop:stepUNIT")
        match = _QUANTITY_RE.match(parts[2])
        if match is None:
            raise ConfigError(f"cannot parse grid step {parts[2]!r}")
        scale = _unit_scale(match.group(2))
        start, stop = (float(p) * scale for p in parts[:2])
        step = float(match.group(1)) * scale
        if not step > 0.0 or not stop > start:
            raise ConfigError(f"grid {text!r} needs stop > start, step > 0")
        n = (stop - start) / step
        if abs(n - round(n)) > 1e-9 * max(1.0, abs(n)):
            raise ConfigError(f"grid {text!r}: step does not divide the span")
        return np.linspace(start, stop, int(round(n)) + 1)
    values = np.array([parse_quantity(p) for p in text.split(",")])
    if np.any(np.diff(values) <= 0.0):
        raise ConfigError(f"grid {text!r} must be strictly increasing")
    return values


def parse_int_range(text: str) -> list[int]:
    """Parse ``4:14:2`` (inclusive) or a comma list to a list of ints."""
    text = str(text).strip()
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
                raise ValueError
            return list(range(parts[0], parts[1] + 1, parts[2]))
        return [int(p) for p in text.split(",")]
    except ValueError:
        raise ConfigError(f"cannot parse integer range {text!r}") from None


_REQUIRED = object()


@dataclass(frozen=True)
class Config:
    """Parsed configuration with typed, unit-aware accessors."""

    text: str
    _parser: configparser.ConfigParser

    @classmethod
    def from_text(cls, text: str) -> "Config":
        parser = configparser.ConfigParser(interpolation=None, strict=True,
                                           inline_comment_prefixes=("#",))
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(f"bad config: {exc}") from exc
        return cls(text=text, _parser=parser)

    @classmethod
    def from_file(cls, path) -> "Config":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def sections(self) -> tuple[str, ...]:
        return tuple(self._parser.sections())

    def digest(self) -> str:
        """Hash of the normalized content, for output provenance."""
        lines = []
        for section in sorted(self._parser.sections()):
            for key in sorted(self._parser[section]):
                lines.append(f"{section}.{key}={self._parser[section][key]}")
        payload = "\n".join(lines).encode()
        return hashlib.sha256(payload).hexdigest()[:16]

    def _raw(self, section: str, key: str, default):
        if self._parser.has_option(section, key):
            return self._parser.get(section, key)
        if default is _REQUIRED:
            raise ConfigError(f"missing required key [{section}] {key}")
        return None

    def string(self, section: str, key: str, default=_REQUIRED):
        raw = self._raw(section, key, default)
        return default if raw is None else raw.strip()

    def quantity(self, section: str, key: str, default=_REQUIRED) -> float:
        raw = self._raw(section, key, default)
        if raw is None:
            return default
        try:
            return parse_quantity(raw)
        except ConfigError as exc:
            raise ConfigError(f"[{section}] {key}: {exc}") from None

    def grid(self, section: str, key: str, default=_REQUIRED) -> Array:
        raw = self._raw(section, key, default)
        if raw is None:
            if isinstance(default, str):
                return parse_grid(default)
            return np.asarray(default, dtype=float)
        try:
            return parse_grid(raw)
        except ConfigError as exc:
            raise ConfigError(f"[{section}] {key}: {exc}") from None

    def integer(self, section: str, key: str, default=_REQUIRED) -> int:
        raw = self._raw(section, key, default)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(
                f"[{section}] {key}: not an integer: {raw!r}") from None

    def boolean(self, section: str, key: str, default=_REQUIRED) -> bool:
        raw = self._raw(section, key, default)
        if raw is None:
            return default
        lowered = raw.strip().lower()
        if lowered in ("true", "yes", "on", "1"):
            return True
        if lowered in ("false", "no", "off", "0"):
            return False
        raise ConfigError(f"[{section}] {key}: not a boolean: {raw!r}")
