"""Flat key-value config files with [universe], [scan] and [regime] sections.

Example::

    [universe]
    # H_F row-major, complex entries as re+imj
    h_forward = 0, 0.5-0.5j, 0.5+0.5j, 0
    psi0 = 1, 0
    tau = 0.1
    N = 10

A universe is given either by ``h_forward`` (d*d entries) or by ``dim`` and
``seed`` for a random one.  Errors carry the offending line number, which is
why the stdlib configparser (it drops key positions) is not used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BievolutionError, ConfigError

SECTIONS = {
    "universe": {"dim", "seed", "normalize", "h_forward", "psi0", "tau", "N", "band"},
    "scan": {"N", "n", "z_min", "z_max", "points", "output"},
    "regime": {"f", "tau_model", "tau", "c", "strict", "duration"},
}


@dataclass
class Entry:
    value: str
    line: int


@dataclass
class Config:
    sections: dict = field(default_factory=dict)

    def section(self, name: str) -> dict:
        return self.sections.get(name, {})

    def has(self, section: str, key: str) -> bool:
        return key in self.section(section)

    def _entry(self, section: str, key: str) -> Entry:
        try:
            return self.section(section)[key]
        except KeyError:
            raise ConfigError(f"missing key '{key}' in [{section}]") from None

    def get(self, section, key, convert=str, default=None):
        if not self.has(section, key):
            if default is None:
                raise ConfigError(f"missing key '{key}' in [{section}]")
            return default
        entry = self._entry(section, key)
        try:
            return convert(entry.value)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad value for '{key}': {exc}", entry.line) from None

    def line_of(self, section: str, key: str) -> int | None:
        entry = self.section(section).get(key)
        return entry.line if entry else None


def parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def parse_int(text: str) -> int:
    return int(text.strip())


def parse_float(text: str) -> float:
    value = float(text.strip())
    if not math.isfinite(value):
        raise ValueError(f"not finite: {text!r}")
    return value


def parse_complex(text: str) -> complex:
    token = text.strip().replace(" ", "").replace("i", "j")
    if not token:
        raise ValueError("empty entry")
    return complex(token)


def parse_complex_list(text: str) -> np.ndarray:
    return np.array([parse_complex(part) for part in text.split(",")], dtype=complex)


def parse_int_list(text: str) -> list:
    return [parse_int(part) for part in text.split(",")]


def parse_config(text: str) -> Config:
    cfg = Config()
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"malformed section header {raw.strip()!r}", lineno)
            current = line[1:-1].strip()
            if current not in SECTIONS:
                raise ConfigError(f"unknown section [{current}]", lineno)
            if current in cfg.sections:
                raise ConfigError(f"duplicate section [{current}]", lineno)
            cfg.sections[current] = {}
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        if current is None:
            raise ConfigError("key outside of any section", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in SECTIONS[current]:
            raise ConfigError(f"unknown key '{key}' in [{current}]", lineno)
        if key in cfg.sections[current]:
            raise ConfigError(f"duplicate key '{key}'", lineno)
        if not value:
            raise ConfigError(f"empty value for '{key}'", lineno)
        cfg.sections[current][key] = Entry(value, lineno)
    return cfg


def load_config(path) -> Config:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)


def universe_from_config(cfg: Config):
    """Build a ToyUniverse from the [universe] section."""
    from .toy import ToyUniverse, random_universe

    if "universe" not in cfg.sections:
        raise ConfigError("missing [universe] section")
    tau = cfg.get("universe", "tau", parse_float)
    if cfg.has("universe", "h_forward"):
        entries = cfg.get("universe", "h_forward", parse_complex_list)
        line = cfg.line_of("universe", "h_forward")
        d = math.isqrt(len(entries))
        if d * d != len(entries):
            raise ConfigError(f"h_forward has {len(entries)} entries, not a square count", line)
        if cfg.has("universe", "dim") and cfg.get("universe", "dim", parse_int) != d:
            raise ConfigError("dim disagrees with h_forward size", cfg.line_of("universe", "dim"))
        h = entries.reshape(d, d)
        if cfg.has("universe", "psi0"):
            psi0 = cfg.get("universe", "psi0", parse_complex_list)
            psi_line = cfg.line_of("universe", "psi0")
        else:
            psi0 = np.eye(d, dtype=complex)[0]
            psi_line = line
        if psi0.shape != (d,):
            raise ConfigError(f"psi0 needs {d} entries, got {len(psi0)}", psi_line)
        norm = np.linalg.norm(psi0)
        if norm == 0:
            raise ConfigError("psi0 is the zero vector", psi_line)
        try:
            return ToyUniverse.from_forward(h, psi0 / norm, tau)
        except BievolutionError as exc:
            raise ConfigError(str(exc), line) from None
    dim = cfg.get("universe", "dim", parse_int)
    seed = cfg.get("universe", "seed", parse_int)
    normalize = cfg.get("universe", "normalize", parse_bool, default=False)
    try:
        return random_universe(dim, seed, tau, normalize)
    except BievolutionError as exc:
        raise ConfigError(str(exc), cfg.line_of("universe", "dim")) from None
