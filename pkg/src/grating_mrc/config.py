"""Run configuration: defaults, flat key=value config files, angle aliases.

Defaults mirror the benchmark runs: L = pi, k = 1, N = 256, M = 64,
w_min = 1e-8 (relative), b = 1.2, |j| <= 120.  A config file holds one
``key = value`` pair per line with ``#`` comments; command-line flags
override file values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .geometry import Profile, load_tabulated_profile
from .modes import ScatterParams
from .solver import ScatterConfig

THETA_ALIASES = {
    "pi/4": math.pi / 4.0,
    "pi/3": math.pi / 3.0,
    "pi/2": math.pi / 2.0,
    "pi/6": math.pi / 6.0,
}

PROFILE_CHOICES = ("I", "II", "III", "IV", "flat")


def parse_theta(text: str) -> float:
    """Angle in radians, or one of the literal aliases pi/4, pi/3, pi/2."""
    key = text.strip().lower().replace(" ", "")
    if key in THETA_ALIASES:
        return THETA_ALIASES[key]
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"cannot parse angle {text!r}") from None


def parse_pole_offset(text: str) -> tuple[float, float]:
    """'DY' (vertical shift) or 'DX,DY'."""
    parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
    if len(parts) == 1:
        return (0.0, float(parts[0]))
    if len(parts) == 2:
        return (float(parts[0]), float(parts[1]))
    raise ValueError(f"pole offset must be 'DY' or 'DX,DY', got {text!r}")


@dataclass
class RunConfig:
    """One solve's worth of physics, discretization and solver knobs."""

    profile: str = "I"  # I | II | III | IV | flat | file:PATH
    flat_height: float = 0.0
    k: float = 1.0
    period: float = math.pi
    theta: float = math.pi / 2.0
    nodes: int = 256
    poles: int = 64
    depth: float = 1.2
    j_max: int = 120
    w_min: float = 1e-8
    epsilon: float = 0.05
    max_refinements: int = 3
    dictionary: str = "poles"
    order: int = 2
    pole_offset: tuple[float, float] | None = None
    quadrature_points: int = 1024
    match_height: float | None = None

    def build_profile(self) -> Profile:
        name = self.profile
        if name.startswith("file:"):
            return load_tabulated_profile(name[5:], self.period)
        if name == "flat":
            return Profile(kind="flat", period=self.period, height=self.flat_height)
        if name in PROFILE_CHOICES:
            return Profile(kind=name, period=self.period)
        raise ValueError(
            f"unknown profile {name!r}; expected one of "
            f"{', '.join(PROFILE_CHOICES)} or file:PATH"
        )

    def to_scatter_config(self) -> ScatterConfig:
        return ScatterConfig(
            profile=self.build_profile(),
            params=ScatterParams(k=self.k, period=self.period, theta=self.theta),
            n_nodes=self.nodes,
            n_poles=self.poles,
            depth=self.depth,
            j_max=self.j_max,
            w_min=self.w_min,
            epsilon=self.epsilon,
            max_refinements=self.max_refinements,
            dictionary=self.dictionary,
            order=self.order,
            pole_offset=self.pole_offset,
            quadrature_points=self.quadrature_points,
            match_height=self.match_height,
        )


# config-file keys and CLI spellings that differ from the field names
KEY_ALIASES = {
    "wmin": "w_min",
    "jmax": "j_max",
    "l": "period",
}

_PARSERS = {
    "profile": str,
    "dictionary": str,
    "flat_height": float,
    "k": float,
    "period": float,
    "theta": parse_theta,
    "nodes": int,
    "poles": int,
    "depth": float,
    "j_max": int,
    "w_min": float,
    "epsilon": float,
    "max_refinements": int,
    "order": int,
    "pole_offset": parse_pole_offset,
    "quadrature_points": int,
    "match_height": float,
}


def load_config_file(path) -> dict[str, str]:
    """Read ``key = value`` pairs; ``#`` starts a comment, blank lines skipped."""
    pairs: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = line.split("=", 1)
            pairs[key.strip().lower()] = value.strip()
    return pairs


def apply_settings(config: RunConfig, settings: dict[str, str]) -> RunConfig:
    """Return a copy of config with the given raw string settings applied."""
    known = {f.name for f in fields(RunConfig)}
    out = RunConfig(**{f.name: getattr(config, f.name) for f in fields(RunConfig)})
    for raw_key, raw_value in settings.items():
        key = KEY_ALIASES.get(raw_key, raw_key)
        if key not in known:
            raise ValueError(f"unknown config key {raw_key!r}")
        setattr(out, key, _PARSERS[key](raw_value))
    return out
