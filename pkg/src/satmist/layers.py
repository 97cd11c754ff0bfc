"""The three infrastructure tiers a satellite can belong to."""

from enum import Enum


class Layer(str, Enum):
    MIST = "mist"
    EDGE_DC = "edge_dc"
    CLOUD = "cloud"

    def __str__(self) -> str:
        return self.value


# Canonical ordering used everywhere satellites are enumerated.
LAYER_ORDER = (Layer.MIST, Layer.EDGE_DC, Layer.CLOUD)

# Stable integer codes for array-based bookkeeping.
LAYER_CODE = {layer: i for i, layer in enumerate(LAYER_ORDER)}
