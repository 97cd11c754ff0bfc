"""
Constellation geometry and orbit propagation
============================================

Builds the default three-tier constellation, inspects its layer layout
and orbital periods, and samples satellite motion over time.
"""

import math

from satmist import (
    ConstellationSpec,
    Layer,
    OrbitPositions,
    build_constellation,
    orbital_period_s,
)

# A small constellation keeps the printout readable: four mist satellites
# on two planes, two edge datacenters, one cloud satellite.
spec = ConstellationSpec(mist=4, edge_dc=2, cloud=1, planes=2)
layered = build_constellation(spec)

print("satellite  layer      altitude_km  raan_deg  phase_deg  period_s")
for index, (layer, elements) in enumerate(layered):
    print(
        f"{index:9d}  {layer.value:9s}  {elements.altitude_m / 1e3:11.0f}"
        f"  {math.degrees(elements.raan_rad):8.1f}"
        f"  {math.degrees(elements.phase_rad):9.1f}"
        f"  {orbital_period_s(elements):8.1f}"
    )

# Walker-delta phasing spreads the mist layer over equally spaced planes:
# with 4 satellites on 2 planes the ascending nodes sit at 0 and 180
# degrees and the in-plane phases at 0 and 180 degrees.

# The position provider evaluates every satellite at once; radii stay
# constant because the orbits are circular.
positions = OrbitPositions([elements for _, elements in layered])
for t in (0.0, 1000.0, 2000.0):
    radii = [math.hypot(*row) for row in positions.positions_all(t)]
    print(f"t={t:6.0f} s  radius range {min(radii) / 1e3:8.1f} .. "
          f"{max(radii) / 1e3:8.1f} km")

# One full period brings a satellite back to its starting point.
layer, elements = layered[0]
period = orbital_period_s(elements)
start = positions.position_one(0, 0.0)
after = positions.position_one(0, period)
print(f"\nmist satellite 0: period {period:.1f} s, "
      f"displacement after one period {math.dist(start, after):.2e} m")

# Layer altitudes differ by design, so periods separate cleanly by tier.
for layer in Layer:
    altitude = spec.altitude_by_layer[layer]
    print(f"{layer.value:9s} tier period at {altitude / 1e3:6.0f} km: "
          f"{2 * math.pi * math.sqrt((6.371e6 + altitude) ** 3 / 3.986004418e14):8.1f} s")
