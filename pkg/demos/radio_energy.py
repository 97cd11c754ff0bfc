"""
Radio energy model
==================

Explores the two-regime transmission energy model: electronics cost per
bit plus an amplifier term that grows with distance squared below the
crossover distance and with distance to the fourth power above it.
"""

from satmist import RadioParams, energy_db, rx_energy, tx_energy

radio = RadioParams()
print(f"electronics   : {radio.e_elec:.1e} J/bit")
print(f"free-space amp: {radio.eps_fs:.1e} J/bit/m^2")
print(f"multipath amp : {radio.eps_mp:.1e} J/bit/m^4")
print(f"crossover     : {radio.crossover_m:.2f} m")

# Below the crossover the amplifier term is negligible next to the
# electronics term; past it, the d^4 regime dominates within kilometers.
bits = 8e6
print(f"\ntransmitting {bits:.0e} bits:")
print("distance_m      tx_energy_j    regime")
for d in (10.0, 87.0, 88.0, 1e3, 1e5, 1e6, 3.2e7):
    regime = "free-space" if d < radio.crossover_m else "multipath"
    print(f"{d:10.0f}  {tx_energy(bits, d):15.6e}  {regime}")

# Reception only pays the electronics term, independent of distance.
print(f"\nreceiving {bits:.0e} bits: {rx_energy(bits):.3f} J")

# Aggregate energies span many orders of magnitude across a simulation,
# so totals are reported as dB(J): 10*log10(energy / 1 J).
print("\nenergy        dB(J)")
for joules in (1.0, 1e3, 1.04e12, 1e17):
    print(f"{joules:10.2e}  {energy_db(joules):8.2f}")

# A mist-range transfer at 32,000 km costs about 10^19 J under this
# first-order model; policies that keep tasks local avoid that entirely.
far = tx_energy(bits, 3.2e7) + rx_energy(bits)
print(f"\nfull mist-range round trip for one task upload: "
      f"{far:.3e} J = {energy_db(far):.1f} dB(J)")
