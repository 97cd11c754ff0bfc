from __future__ import annotations

import io
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from satmist.errors import ConfigurationError, TraceFormatError
from satmist.layers import Layer
from satmist.orbital import (
    MU_EARTH_M3_S2,
    R_EARTH_M,
    ConstellationSpec,
    OrbitPositions,
    OrbitalElements,
    Phasing,
    Vec3,
    build_constellation,
    distance,
    dump_trace,
    load_trace,
    orbital_period_s,
    position_at,
)

LEO = OrbitalElements(altitude_m=400_000.0)


def test_kepler_period_at_400_km():
    # independent oracle: T = 2*pi*sqrt(a^3/mu) with a = 6371 km + 400 km
    a = 6_771_000.0
    expected = 2.0 * math.pi * math.sqrt(a ** 3 / 3.986004418e14)
    got = orbital_period_s(LEO)
    assert got == pytest.approx(expected, rel=1e-12)
    assert abs(got - 5545.0) < 1.0


def test_position_at_zero_angles_sits_on_x_axis():
    p = position_at(LEO, 0.0)
    assert p == (6_771_000.0, 0.0, 0.0)


def test_orbit_radius_is_conserved():
    e = OrbitalElements(altitude_m=400_000.0, inclination_rad=1.0,
                        raan_rad=2.0, phase_rad=3.0)
    a = R_EARTH_M + 400_000.0
    for t in (0.0, 17.3, 1000.0, 5544.0, 123456.0):
        p = position_at(e, t)
        assert math.hypot(p.x, p.y, p.z) == pytest.approx(a, rel=1e-12)


def test_position_periodicity():
    e = OrbitalElements(altitude_m=400_000.0, inclination_rad=0.9,
                        raan_rad=0.4, phase_rad=1.7)
    period = orbital_period_s(e)
    p0 = position_at(e, 0.0)
    p1 = position_at(e, period)
    a = e.semi_major_axis_m
    assert distance(p0, p1) <= 1e-6 * a


def test_position_against_rotation_matrix_oracle():
    e = OrbitalElements(altitude_m=1_234_000.0, inclination_rad=0.7,
                        raan_rad=2.1, phase_rad=0.3)
    t = 321.5
    a = 6_371_000.0 + 1_234_000.0
    theta = 0.3 + math.sqrt(3.986004418e14 / a ** 3) * t
    in_plane = np.array([a * math.cos(theta), a * math.sin(theta), 0.0])
    ci, si = math.cos(0.7), math.sin(0.7)
    co, so = math.cos(2.1), math.sin(2.1)
    rot_x = np.array([[1, 0, 0], [0, ci, -si], [0, si, ci]])
    rot_z = np.array([[co, -so, 0], [so, co, 0], [0, 0, 1]])
    expected = rot_z @ rot_x @ in_plane
    got = position_at(e, t)
    assert np.allclose([got.x, got.y, got.z], expected, rtol=1e-12, atol=1e-6)


def test_zero_inclination_stays_equatorial():
    e = OrbitalElements(altitude_m=500_000.0, inclination_rad=0.0,
                        raan_rad=1.0, phase_rad=2.0)
    for t in (0.0, 100.0, 4000.0):
        assert position_at(e, t).z == pytest.approx(0.0, abs=1e-9)


def test_altitude_floor_enforced():
    with pytest.raises(ValueError):
        OrbitalElements(altitude_m=399_999.0)
    with pytest.raises(ValueError):
        OrbitalElements(altitude_m=400_000.0, inclination_rad=-0.1)
    with pytest.raises(ValueError):
        OrbitalElements(altitude_m=400_000.0, raan_rad=2 * math.pi)


def test_distance_hand_values():
    assert distance(Vec3(0, 0, 0), Vec3(3, 4, 0)) == 5.0
    p = Vec3(1.5, -2.5, 3.5)
    assert distance(p, p) == 0.0
    assert distance(Vec3(1e6, 0, 0), Vec3(0, 1e6, 0)) == pytest.approx(
        1.41421356e6, abs=1.0
    )


@given(
    ax=st.floats(-1e7, 1e7), ay=st.floats(-1e7, 1e7), az=st.floats(-1e7, 1e7),
    bx=st.floats(-1e7, 1e7), by=st.floats(-1e7, 1e7), bz=st.floats(-1e7, 1e7),
    cx=st.floats(-1e7, 1e7), cy=st.floats(-1e7, 1e7), cz=st.floats(-1e7, 1e7),
)
def test_distance_symmetry_and_triangle_inequality(ax, ay, az, bx, by, bz, cx, cy, cz):
    a, b, c = Vec3(ax, ay, az), Vec3(bx, by, bz), Vec3(cx, cy, cz)
    assert distance(a, b) == distance(b, a)
    assert distance(a, c) <= distance(a, b) + distance(b, c) + 1e-6


def test_single_satellite_walker_has_zero_phase():
    spec = ConstellationSpec(mist=1, edge_dc=0, cloud=0, planes=1)
    layered = build_constellation(spec)
    assert len(layered) == 1
    layer, elements = layered[0]
    assert layer is Layer.MIST
    assert elements.phase_rad == 0.0
    assert elements.raan_rad == 0.0


def test_walker_four_satellites_two_planes():
    spec = ConstellationSpec(mist=4, edge_dc=0, cloud=0, planes=2)
    layered = build_constellation(spec)
    raans = sorted({e.raan_rad for _, e in layered})
    assert raans == pytest.approx([0.0, math.pi])
    for raan in raans:
        phases = sorted(e.phase_rad for _, e in layered if e.raan_rad == raan)
        assert phases == pytest.approx([0.0, math.pi])


def test_full_scale_counts():
    spec = ConstellationSpec(mist=1000, edge_dc=24, cloud=18)
    layered = build_constellation(spec)
    assert len(layered) == 1042
    counts = {layer: 0 for layer in Layer}
    for layer, _ in layered:
        counts[layer] += 1
    assert counts == {Layer.MIST: 1000, Layer.EDGE_DC: 24, Layer.CLOUD: 18}


def test_layer_major_output_order():
    spec = ConstellationSpec(mist=3, edge_dc=2, cloud=1)
    layers = [layer for layer, _ in build_constellation(spec)]
    assert layers == [Layer.MIST] * 3 + [Layer.EDGE_DC] * 2 + [Layer.CLOUD]


def test_build_constellation_is_deterministic():
    spec = ConstellationSpec(mist=7, edge_dc=3, cloud=2,
                             phasing=Phasing.RANDOM_UNIFORM, rng_seed=42)
    assert build_constellation(spec) == build_constellation(spec)


def test_random_uniform_respects_altitude_and_angle_ranges():
    spec = ConstellationSpec(mist=50, edge_dc=5, cloud=5,
                             phasing=Phasing.RANDOM_UNIFORM, rng_seed=9)
    for layer, e in build_constellation(spec):
        assert e.altitude_m >= 400_000.0
        for angle in (e.inclination_rad, e.raan_rad, e.phase_rad):
            assert 0.0 <= angle < 2 * math.pi


def test_zero_total_satellites_rejected():
    with pytest.raises(ConfigurationError):
        ConstellationSpec(mist=0, edge_dc=0, cloud=0)
    with pytest.raises(ConfigurationError):
        ConstellationSpec(mist=-1, edge_dc=2, cloud=0)


def test_orbit_positions_matches_scalar_propagator():
    spec = ConstellationSpec(mist=6, edge_dc=2, cloud=1)
    layered = build_constellation(spec)
    provider = OrbitPositions([e for _, e in layered])
    assert len(provider) == 9
    for t in (0.0, 55.5, 1234.0):
        block = provider.positions_all(t)
        for i, (_, e) in enumerate(layered):
            p = position_at(e, t)
            assert np.allclose(block[i], [p.x, p.y, p.z], rtol=1e-12, atol=1e-6)
            q = provider.position_one(i, t)
            assert (q.x, q.y, q.z) == (p.x, p.y, p.z)


def test_altitude_floor_holds_over_a_period():
    spec = ConstellationSpec(mist=5, edge_dc=2, cloud=1,
                             phasing=Phasing.RANDOM_UNIFORM, rng_seed=3)
    layered = build_constellation(spec)
    provider = OrbitPositions([e for _, e in layered])
    period = orbital_period_s(layered[0][1])
    for t in range(0, int(period) + 1, 60):
        radii = np.linalg.norm(provider.positions_all(float(t)), axis=1)
        assert (radii - R_EARTH_M >= 400_000.0 - 1e-6).all()


def trace_text(rows):
    return "sat_id,t,x,y,z\n" + "".join(f"{r}\n" for r in rows)


def test_trace_midpoint_interpolation():
    trace = load_trace(trace_text(["s0,0,0,0,0", "s0,10,10,0,0"]))
    assert tuple(trace.lookup("s0", 5.0)) == (5.0, 0.0, 0.0)
    assert tuple(trace.lookup("s0", 0.0)) == (0.0, 0.0, 0.0)
    assert tuple(trace.lookup("s0", 10.0)) == (10.0, 0.0, 0.0)


def test_trace_clamps_beyond_sampled_interval():
    trace = load_trace(trace_text(["s0,0,1,2,3", "s0,10,11,12,13"]))
    assert tuple(trace.lookup("s0", -5.0)) == (1.0, 2.0, 3.0)
    assert tuple(trace.lookup("s0", 50.0)) == (11.0, 12.0, 13.0)


def test_empty_trace_loads_but_rejects_queries():
    trace = load_trace("")
    with pytest.raises(TraceFormatError):
        trace.lookup("s0", 0.0)


def test_trace_rejects_bad_header():
    with pytest.raises(TraceFormatError):
        load_trace("id,t,x,y,z\ns0,0,0,0,0\n")


def test_trace_rejects_wrong_field_count():
    with pytest.raises(TraceFormatError, match="line 2"):
        load_trace("sat_id,t,x,y,z\ns0,0,0,0\n")


def test_trace_rejects_non_numeric_fields():
    with pytest.raises(TraceFormatError, match="line 3"):
        load_trace(trace_text(["s0,0,0,0,0", "s0,ten,1,1,1"]))


def test_trace_rejects_non_increasing_timestamps():
    with pytest.raises(TraceFormatError, match="increase strictly"):
        load_trace(trace_text(["s0,5,0,0,0", "s0,5,1,1,1"]))


def test_trace_rejects_unknown_satellite():
    trace = load_trace(trace_text(["s0,0,0,0,0"]))
    with pytest.raises(TraceFormatError):
        trace.lookup("s9", 0.0)


def test_dump_then_load_round_trip():
    spec = ConstellationSpec(mist=3, edge_dc=1, cloud=1)
    layered = build_constellation(spec)
    provider = OrbitPositions([e for _, e in layered])
    times = [0.0, 30.0, 60.0]
    buf = io.StringIO()
    dump_trace(buf, provider, [str(i) for i in range(5)], times)
    trace = load_trace(buf.getvalue())
    for i in range(5):
        for t in times:
            expected = provider.position_one(i, t)
            got = trace.lookup(str(i), t)
            assert tuple(got) == (expected.x, expected.y, expected.z)


def test_trace_provider_adapter_matches_lookup():
    trace = load_trace(trace_text(["a,0,0,0,0", "a,10,10,0,0",
                                   "b,0,5,5,5", "b,10,5,5,5"]))
    provider = trace.as_provider()
    assert len(provider) == 2
    block = provider.positions_all(5.0)
    assert tuple(block[0]) == (5.0, 0.0, 0.0)
    assert tuple(block[1]) == (5.0, 5.0, 5.0)


def test_vec3_finite_enforced():
    with pytest.raises(ValueError):
        Vec3(math.nan, 0.0, 0.0)
    with pytest.raises(ValueError):
        Vec3(0.0, math.inf, 0.0)


def test_orbital_period_uses_gravitational_parameter():
    # doubling altitude grows the period as a^(3/2)
    lo = orbital_period_s(OrbitalElements(altitude_m=400_000.0))
    hi = orbital_period_s(OrbitalElements(altitude_m=2_000_000.0))
    ratio = ((R_EARTH_M + 2_000_000.0) / (R_EARTH_M + 400_000.0)) ** 1.5
    assert hi / lo == pytest.approx(ratio, rel=1e-12)
    assert MU_EARTH_M3_S2 == 3.986004418e14
