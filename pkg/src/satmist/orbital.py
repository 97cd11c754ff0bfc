"""Constellation geometry: circular-orbit propagation and position traces.

Satellite positions come from one of two interchangeable sources. The
default is an analytic propagator over circular Keplerian orbits; the
alternative is a CSV trace imported from an external tool, interpolated
linearly between samples. Both expose the same lookup surface, so the
simulation engine never cares which one drives it.
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import IO, Iterable, Mapping, Sequence

import numpy as np

from .errors import ConfigurationError, TraceFormatError
from .layers import LAYER_ORDER, Layer

R_EARTH_M = 6_371_000.0
MU_EARTH_M3_S2 = 3.986004418e14
MIN_ALTITUDE_M = 400_000.0

_TWO_PI = 2.0 * math.pi

DEFAULT_ALTITUDE_BY_LAYER: Mapping[Layer, float] = {
    Layer.MIST: 400_000.0,
    Layer.EDGE_DC: 2_000_000.0,
    Layer.CLOUD: 10_000_000.0,
}

DEFAULT_INCLINATION_RAD = math.radians(53.0)

TRACE_HEADER = ("sat_id", "t", "x", "y", "z")


class Vec3(tuple):
    """Earth-centered cartesian position in meters."""

    __slots__ = ()

    def __new__(cls, x: float, y: float, z: float):
        fx, fy, fz = float(x), float(y), float(z)
        if not (math.isfinite(fx) and math.isfinite(fy) and math.isfinite(fz)):
            raise ValueError(f"position components must be finite, got {(x, y, z)}")
        return tuple.__new__(cls, (fx, fy, fz))

    @property
    def x(self) -> float:
        return self[0]

    @property
    def y(self) -> float:
        return self[1]

    @property
    def z(self) -> float:
        return self[2]


def distance(a: Sequence[float], b: Sequence[float]) -> float:
    """Euclidean distance between two positions, in meters."""
    return math.dist(a, b)


@dataclass(frozen=True)
class OrbitalElements:
    """A circular orbit: altitude plus inclination, RAAN, and in-plane phase.

    All angles are radians in [0, 2*pi); altitude is above the mean Earth
    radius and must sit at or above the 400 km floor.
    """

    altitude_m: float
    inclination_rad: float = 0.0
    raan_rad: float = 0.0
    phase_rad: float = 0.0

    def __post_init__(self):
        if self.altitude_m < MIN_ALTITUDE_M:
            raise ConfigurationError(
                f"altitude_m must be >= {MIN_ALTITUDE_M:.0f}, got {self.altitude_m}"
            )
        for name in ("inclination_rad", "raan_rad", "phase_rad"):
            value = getattr(self, name)
            if not 0.0 <= value < _TWO_PI:
                raise ConfigurationError(f"{name} must lie in [0, 2*pi), got {value}")

    @property
    def semi_major_axis_m(self) -> float:
        return R_EARTH_M + self.altitude_m


def orbital_period_s(elements: OrbitalElements) -> float:
    """Keplerian period T = 2*pi*sqrt(a^3 / mu) for a circular orbit."""
    a = elements.semi_major_axis_m
    return _TWO_PI * math.sqrt(a * a * a / MU_EARTH_M3_S2)


def angular_rate_rad_s(elements: OrbitalElements) -> float:
    a = elements.semi_major_axis_m
    return math.sqrt(MU_EARTH_M3_S2 / (a * a * a))


def position_at(elements: OrbitalElements, t_seconds: float) -> Vec3:
    """Position on the circular orbit at time t.

    The in-plane point (a*cos(theta), a*sin(theta), 0) with
    theta = phase + n*t is rotated about x by the inclination and then
    about z by the RAAN. Pure function of its inputs.
    """
    a = elements.semi_major_axis_m
    theta = elements.phase_rad + angular_rate_rad_s(elements) * t_seconds
    ct, st = math.cos(theta), math.sin(theta)
    ci, si = math.cos(elements.inclination_rad), math.sin(elements.inclination_rad)
    co, so = math.cos(elements.raan_rad), math.sin(elements.raan_rad)
    return Vec3(
        a * (ct * co - st * ci * so),
        a * (ct * so + st * ci * co),
        a * (st * si),
    )


class Phasing(str, Enum):
    WALKER_DELTA = "walker_delta"
    RANDOM_UNIFORM = "random_uniform"


@dataclass(frozen=True)
class ConstellationSpec:
    """Layered constellation description.

    walker_delta spreads each layer's satellites over `planes` evenly
    spaced orbital planes with uniform in-plane phasing; random_uniform
    draws inclination/RAAN/phase for every satellite from a seeded RNG.
    """

    mist: int = 1000
    edge_dc: int = 24
    cloud: int = 18
    altitude_by_layer: Mapping[Layer, float] = field(
        default_factory=lambda: dict(DEFAULT_ALTITUDE_BY_LAYER)
    )
    planes: int = 8
    inclination_rad: float = DEFAULT_INCLINATION_RAD
    phasing: Phasing = Phasing.WALKER_DELTA
    rng_seed: int = 1

    def __post_init__(self):
        if self.mist < 0 or self.edge_dc < 0 or self.cloud < 0:
            raise ConfigurationError("satellite counts must be non-negative")
        if self.total < 1:
            raise ConfigurationError("constellation needs at least one satellite")
        if self.planes < 1:
            raise ConfigurationError("planes must be >= 1")
        for layer in Layer:
            if layer not in self.altitude_by_layer:
                raise ConfigurationError(f"altitude_by_layer missing {layer.value}")
            if self.altitude_by_layer[layer] < MIN_ALTITUDE_M:
                raise ConfigurationError(
                    f"{layer.value} altitude below the {MIN_ALTITUDE_M:.0f} m floor"
                )

    def count_for(self, layer: Layer) -> int:
        return {Layer.MIST: self.mist, Layer.EDGE_DC: self.edge_dc, Layer.CLOUD: self.cloud}[layer]

    @property
    def total(self) -> int:
        return self.mist + self.edge_dc + self.cloud


def _walker_layer(count: int, altitude: float, inclination: float, planes: int):
    """Evenly distribute one layer over `planes`; remainder fills early planes."""
    per_plane = [count // planes + (1 if p < count % planes else 0) for p in range(planes)]
    out = []
    for p, size in enumerate(per_plane):
        if size == 0:
            continue
        raan = _TWO_PI * p / planes
        for k in range(size):
            phase = _TWO_PI * k / size
            out.append(
                OrbitalElements(
                    altitude_m=altitude,
                    inclination_rad=inclination,
                    raan_rad=raan,
                    phase_rad=phase,
                )
            )
    return out


def build_constellation(spec: ConstellationSpec) -> list[tuple[Layer, OrbitalElements]]:
    """Instantiate the constellation, layer-major then plane then slot.

    Deterministic: a pure function of its ConstellationSpec, including
    the random_uniform case whose draws come from spec.rng_seed.
    """
    out: list[tuple[Layer, OrbitalElements]] = []
    if spec.phasing is Phasing.WALKER_DELTA:
        for layer in LAYER_ORDER:
            altitude = spec.altitude_by_layer[layer]
            for elements in _walker_layer(
                spec.count_for(layer), altitude, spec.inclination_rad, spec.planes
            ):
                out.append((layer, elements))
    elif spec.phasing is Phasing.RANDOM_UNIFORM:
        rng = random.Random(spec.rng_seed)
        for layer in LAYER_ORDER:
            altitude = spec.altitude_by_layer[layer]
            for _ in range(spec.count_for(layer)):
                # Draw order per satellite: inclination, RAAN, phase.
                inc = rng.random() * _TWO_PI
                raan = rng.random() * _TWO_PI
                phase = rng.random() * _TWO_PI
                out.append(
                    (
                        layer,
                        OrbitalElements(
                            altitude_m=altitude,
                            inclination_rad=inc,
                            raan_rad=raan,
                            phase_rad=phase,
                        ),
                    )
                )
    else:  # pragma: no cover
        raise ConfigurationError(f"unknown phasing {spec.phasing!r}")
    return out


class OrbitPositions:
    """Vectorized position source for a fixed satellite list.

    Per-satellite orbit constants are precomputed; positions_all fills a
    reused (n, 3) buffer, so instances are not safe to share across
    threads.
    """

    def __init__(self, elements: Sequence[OrbitalElements]):
        if not elements:
            raise ConfigurationError("OrbitPositions needs at least one satellite")
        self._elements = tuple(elements)
        n = len(elements)
        self._a = np.array([e.semi_major_axis_m for e in elements])
        self._rate = np.array([angular_rate_rad_s(e) for e in elements])
        self._phase = np.array([e.phase_rad for e in elements])
        self._ci = np.array([math.cos(e.inclination_rad) for e in elements])
        self._si = np.array([math.sin(e.inclination_rad) for e in elements])
        self._co = np.array([math.cos(e.raan_rad) for e in elements])
        self._so = np.array([math.sin(e.raan_rad) for e in elements])
        self._theta = np.empty(n)
        self._ct = np.empty(n)
        self._st = np.empty(n)
        self._buf = np.empty(n)
        self._out = np.empty((n, 3))

    def __len__(self) -> int:
        return len(self._elements)

    def positions_all(self, t_seconds: float) -> np.ndarray:
        """All positions at time t as an (n, 3) array (reused buffer)."""
        th, ct, st, buf = self._theta, self._ct, self._st, self._buf
        np.multiply(self._rate, t_seconds, out=th)
        th += self._phase
        np.cos(th, out=ct)
        np.sin(th, out=st)
        out = self._out
        # x = a*(ct*co - st*ci*so)
        np.multiply(st, self._ci, out=buf)
        x = out[:, 0]
        np.multiply(buf, self._so, out=x)
        np.negative(x, out=x)
        x += ct * self._co
        x *= self._a
        # y = a*(ct*so + st*ci*co)
        y = out[:, 1]
        np.multiply(buf, self._co, out=y)
        y += ct * self._so
        y *= self._a
        # z = a*st*si
        z = out[:, 2]
        np.multiply(st, self._si, out=z)
        z *= self._a
        return out

    def position_one(self, index: int, t_seconds: float) -> Vec3:
        return position_at(self._elements[index], t_seconds)


class PositionTrace:
    """Imported trace: per-satellite time series with linear interpolation.

    Lookups are exact at sample times and clamp to the first/last sample
    outside the sampled window.
    """

    def __init__(self, samples: Mapping[str, tuple[np.ndarray, np.ndarray]], ids: Sequence[str]):
        self._samples = dict(samples)
        self._ids = tuple(ids)

    @property
    def ids(self) -> tuple[str, ...]:
        return self._ids

    def lookup(self, sat_id: str, t_seconds: float) -> Vec3:
        try:
            times, pos = self._samples[sat_id]
        except KeyError:
            raise TraceFormatError(f"unknown satellite id {sat_id!r}") from None
        if t_seconds <= times[0]:
            row = pos[0]
        elif t_seconds >= times[-1]:
            row = pos[-1]
        else:
            j = int(np.searchsorted(times, t_seconds, side="right"))
            t0, t1 = times[j - 1], times[j]
            w = (t_seconds - t0) / (t1 - t0)
            row = pos[j - 1] + w * (pos[j] - pos[j - 1])
        return Vec3(row[0], row[1], row[2])

    def as_provider(self, id_order: Sequence[str] | None = None) -> "TracePositions":
        return TracePositions(self, id_order or self._ids)


class TracePositions:
    """Adapter giving a PositionTrace the same surface as OrbitPositions."""

    def __init__(self, trace: PositionTrace, id_order: Sequence[str]):
        for sat_id in id_order:
            if sat_id not in trace.ids:
                raise TraceFormatError(f"unknown satellite id {sat_id!r}")
        self._trace = trace
        self._order = tuple(id_order)

    def __len__(self) -> int:
        return len(self._order)

    def positions_all(self, t_seconds: float) -> np.ndarray:
        out = np.empty((len(self._order), 3))
        for i, sat_id in enumerate(self._order):
            out[i] = self._trace.lookup(sat_id, t_seconds)
        return out

    def position_one(self, index: int, t_seconds: float) -> Vec3:
        return self._trace.lookup(self._order[index], t_seconds)


def _as_text(source) -> io.TextIOBase:
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8"))
    if isinstance(source, str):
        return io.StringIO(source)
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return io.StringIO(data)


def load_trace(source) -> PositionTrace:
    """Parse a position trace from a byte or text stream.

    Expected CSV layout: header `sat_id,t,x,y,z`, then one row per
    (satellite, sample time) with strictly increasing t per satellite.
    """
    reader = csv.reader(_as_text(source))
    try:
        header = next(reader)
    except StopIteration:
        return PositionTrace({}, [])
    if tuple(h.strip() for h in header) != TRACE_HEADER:
        raise TraceFormatError(
            f"bad trace header {header!r}, expected {','.join(TRACE_HEADER)}"
        )
    times: dict[str, list[float]] = {}
    points: dict[str, list[tuple[float, float, float]]] = {}
    order: list[str] = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 5:
            raise TraceFormatError(f"line {lineno}: expected 5 fields, got {len(row)}")
        sat_id = row[0].strip()
        try:
            t, x, y, z = (float(v) for v in row[1:])
        except ValueError:
            raise TraceFormatError(f"line {lineno}: non-numeric field in {row!r}") from None
        if sat_id not in times:
            times[sat_id] = []
            points[sat_id] = []
            order.append(sat_id)
        elif t <= times[sat_id][-1]:
            raise TraceFormatError(
                f"line {lineno}: timestamps for {sat_id!r} must increase strictly"
            )
        times[sat_id].append(t)
        points[sat_id].append((x, y, z))
    samples = {
        sat_id: (np.array(times[sat_id]), np.array(points[sat_id])) for sat_id in order
    }
    return PositionTrace(samples, order)


def dump_trace(stream: IO[str], provider, ids: Sequence[str], times: Iterable[float]) -> None:
    """Write positions in the trace CSV layout (importable by load_trace).

    Rows are grouped per satellite in `ids` order, times ascending; float
    formatting uses repr so a round trip is exact.
    """
    time_list = sorted(set(float(t) for t in times))
    if not time_list:
        raise ConfigurationError("dump_trace needs at least one sample time")
    stream.write(",".join(TRACE_HEADER) + "\n")
    for i, sat_id in enumerate(ids):
        for t in time_list:
            x, y, z = provider.position_one(i, t)
            stream.write(f"{sat_id},{t!r},{x!r},{y!r},{z!r}\n")
