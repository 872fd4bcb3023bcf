"""Periodic boundary profiles, boundary nodes and interior source points.

Four built-in profiles on one period [0, L] (used with L = pi in the
benchmark runs), plus a flat line and a tabulated graph:

    I      f(x) = sin(2 x)
    II     f(x) = sin(0.2 x)
    III    f(x) = x for x <= L/2, L - x after      (triangle)
    IV     f(x) = x for 0 <= x <= L, closed by a vertical segment at x = L
    flat   f(x) = c
    tabulated  piecewise-linear through a CSV table of (x, y) points

Profiles are defined on [0, L) and extended periodically; profile II is not
pi-periodic, so it carries a jump at the period seam, which is accepted.
Profile I dips to -1; no shift to nonnegative heights is applied because the
method only needs the boundary to stay above the artificial line y = -b.

Node rule (graph profiles): t_i = i L / N, i = 1..N, nodes (t_i, f(t_i)).
Profile IV places N/2 nodes on the slant and N/2 on the vertical segment.

Source-point ("pole") rule: every fourth node, shifted into the region below
the boundary; (0, -0.1) for graph profiles, (-0.03, -0.05) for profile IV.
Pole placement is a free experimental choice, so the offset is overridable.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BadCount, NotAGraph, PoleOutsideRegion

GRAPH_KINDS = ("I", "II", "III", "flat", "tabulated")
PROFILE_KINDS = GRAPH_KINDS + ("IV",)

# poles closer than this to profile IV's vertical segment are flagged, not
# rejected: "below the boundary" is ambiguous next to the wall
VERTICAL_SEGMENT_MARGIN = 0.01

DEFAULT_POLE_OFFSET = (0.0, -0.1)
PROFILE_IV_POLE_OFFSET = (-0.03, -0.05)


@dataclass(frozen=True)
class Profile:
    """One L-periodic boundary profile."""

    kind: str
    period: float
    height: float = 0.0  # flat level c (kind == "flat" only)
    table: tuple = ()    # ((x, y), ...) for kind == "tabulated"

    def __post_init__(self):
        if self.kind not in PROFILE_KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if not self.period > 0:
            raise ValueError(f"period must be > 0, got {self.period}")
        if self.kind == "tabulated" and len(self.table) < 2:
            raise ValueError("tabulated profile needs at least two points")

    @property
    def is_graph(self) -> bool:
        return self.kind in GRAPH_KINDS

    def default_pole_offset(self) -> tuple[float, float]:
        return PROFILE_IV_POLE_OFFSET if self.kind == "IV" else DEFAULT_POLE_OFFSET


@dataclass(frozen=True)
class Discretization:
    """Boundary nodes and interior poles for one solve pass."""

    nodes: np.ndarray  # (N, 2)
    poles: np.ndarray  # (M, 2)

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    @property
    def n_poles(self) -> int:
        return self.poles.shape[0]


def profile_height(profile: Profile, x: float) -> float:
    """f(x) for a graph profile, 0 <= x <= L.  Raises NotAGraph for IV."""
    if profile.kind == "IV":
        raise NotAGraph("profile IV has a vertical segment; no height function")
    if not 0.0 <= x <= profile.period:
        raise ValueError(f"x={x} outside [0, {profile.period}]")
    return _graph_height(profile, x)


def boundary_height(profile: Profile, x: float) -> float:
    """Height of the periodically extended graph above x (any real x).

    Inside [0, L] the defining formula is evaluated on the closed interval
    (so the seam point x = L keeps its own height, matching the node rule);
    outside, x is wrapped into [0, L).  For profile IV the reference is the
    slant f(x) = x, the graph used for containment tests near the vertical
    segment.
    """
    L = profile.period
    if 0.0 <= x <= L:
        return _graph_height(profile, x)
    return _graph_height(profile, x - L * math.floor(x / L))


def _graph_height(profile: Profile, x: float) -> float:
    L = profile.period
    if profile.kind == "I":
        return math.sin(2.0 * x)
    if profile.kind == "II":
        return math.sin(0.2 * x)
    if profile.kind == "III":
        return x if x <= L / 2.0 else L - x
    if profile.kind == "IV":
        return x
    if profile.kind == "flat":
        return profile.height
    xs, ys = _table_arrays(profile)
    return float(np.interp(x, xs, ys))


def profile_nodes(profile: Profile, n_nodes: int) -> np.ndarray:
    """The N boundary nodes of one period, shape (N, 2).

    Graph profiles: x_i = (t_i, f(t_i)), t_i = i L / N, i = 1..N.
    Profile IV: N/2 slant nodes (t_i, t_i) with t_i = 2 i L / N, then N/2
    nodes (L, 2 (i - N/2) L / N) on the vertical segment (N must be even).
    """
    L = profile.period
    if profile.kind == "IV":
        if n_nodes < 2 or n_nodes % 2 != 0:
            raise BadCount(f"profile IV needs an even node count >= 2, got {n_nodes}")
        half = n_nodes // 2
        t = 2.0 * np.arange(1, half + 1) * L / n_nodes
        slant = np.column_stack([t, t])
        vertical = np.column_stack([np.full(half, L), t])
        return np.vstack([slant, vertical])
    if n_nodes < 2:
        raise BadCount(f"need at least 2 nodes, got {n_nodes}")
    t = np.arange(1, n_nodes + 1) * L / n_nodes
    f = np.array([_graph_height(profile, min(x, L)) for x in t])
    return np.column_stack([t, f])


def default_poles(
    profile: Profile,
    nodes: np.ndarray,
    n_poles: int,
    depth: float,
    offset: tuple[float, float] | None = None,
) -> np.ndarray:
    """M interior poles: node 4m (1-based) shifted by the pole offset.

    Every pole is checked to lie strictly below the boundary and strictly
    above y = -depth; violations raise PoleOutsideRegion.  For profile IV,
    poles within a small margin of the vertical segment are flagged with a
    warning instead (containment there is tested against the extended slant).
    """
    n_nodes = nodes.shape[0]
    if 4 * n_poles > n_nodes:
        raise BadCount(f"pole rule needs 4M <= N, got M={n_poles}, N={n_nodes}")
    if offset is None:
        offset = profile.default_pole_offset()
    picks = nodes[4 * np.arange(1, n_poles + 1) - 1]
    poles = picks + np.asarray(offset, dtype=float)

    L = profile.period
    for px, py in poles:
        if py <= -depth:
            raise PoleOutsideRegion(
                f"pole ({px:.6g}, {py:.6g}) not above the line y = {-depth}"
            )
        if py >= boundary_height(profile, px):
            raise PoleOutsideRegion(
                f"pole ({px:.6g}, {py:.6g}) not strictly below the boundary "
                f"(height {boundary_height(profile, px):.6g})"
            )
        if profile.kind == "IV":
            wall_dist = min(abs(px - L), abs(px))
            if wall_dist < VERTICAL_SEGMENT_MARGIN:
                warnings.warn(
                    f"pole ({px:.6g}, {py:.6g}) within 0.01 of the vertical "
                    "segment; containment tested against the slant only",
                    stacklevel=2,
                )
    return poles


def discretize(
    profile: Profile,
    n_nodes: int,
    n_poles: int,
    depth: float,
    offset: tuple[float, float] | None = None,
) -> Discretization:
    """Nodes and poles for one pass; enforces M < N."""
    if not n_poles < n_nodes:
        raise BadCount(f"need M < N, got M={n_poles}, N={n_nodes}")
    nodes = profile_nodes(profile, n_nodes)
    poles = default_poles(profile, nodes, n_poles, depth, offset)
    return Discretization(nodes=nodes, poles=poles)


def load_tabulated_profile(path, period: float) -> Profile:
    """Read a tabulated profile from CSV with header ``x,y``.

    Rows must be sorted by x with 0 <= x <= period; anything else is
    rejected.  Heights between table points are linearly interpolated.
    """
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:2]] != ["x", "y"]:
            raise ValueError(f"{path}: expected CSV header 'x,y'")
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError) as exc:
                raise ValueError(f"{path}:{lineno}: bad row {row!r}") from exc
    if len(rows) < 2:
        raise ValueError(f"{path}: need at least two (x, y) rows")
    xs = [r[0] for r in rows]
    if any(b < a for a, b in zip(xs, xs[1:])):
        raise ValueError(f"{path}: x column must be sorted ascending")
    if xs[0] < 0.0 or xs[-1] > period:
        raise ValueError(f"{path}: x values must lie in [0, {period}]")
    return Profile(kind="tabulated", period=period, table=tuple(rows))


def _table_arrays(profile: Profile):
    xs = np.array([p[0] for p in profile.table])
    ys = np.array([p[1] for p in profile.table])
    return xs, ys
