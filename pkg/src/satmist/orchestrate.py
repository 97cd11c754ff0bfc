"""Task placement policies over snapshot candidate lists.

Each policy receives the same decision-time snapshot, one entry per VM in
the constellation, and returns the selected VM. Infeasible candidates
(layer disabled by the architecture mask, or farther than the layer's
range) are never selected; score ties go to the lowest candidate index.

Policies accept either a sequence of Candidate records or a CandidateView
holding the same fields as parallel arrays; the engine feeds views so the
hot path stays vectorized, and both forms run the identical arithmetic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .layers import LAYER_CODE, LAYER_ORDER, Layer
from .netenergy import DEFAULT_LINK, DEFAULT_RADIO, LinkParams, RadioParams

__all__ = [
    "PolicyId",
    "Candidate",
    "CandidateView",
    "TaskInfo",
    "Selection",
    "PlacementError",
    "feasible",
    "standardize",
    "distance_only",
    "round_robin",
    "random_vm",
    "trade_off",
    "weight_greedy",
    "select",
    "DEFAULT_TRADEOFF_LAYER_WEIGHTS",
    "WEIGHT_GREEDY_RATIOS",
]


class PolicyId(str, Enum):
    DISTANCE_ONLY = "distance_only"
    ROUND_ROBIN = "round_robin"
    TRADE_OFF = "trade_off"
    RANDOM_VM = "random_vm"
    WEIGHT_GREEDY = "weight_greedy"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Candidate:
    """One VM as seen at decision time."""

    vm_id: int
    host_layer: Layer
    distance_m: float
    queue_len: int
    vm_mips: float
    assigned_count: int

    def __post_init__(self):
        if self.distance_m < 0:
            raise ValueError(f"distance_m must be non-negative, got {self.distance_m}")
        if self.vm_mips <= 0:
            raise ValueError(f"vm_mips must be positive, got {self.vm_mips}")


class TaskInfo(NamedTuple):
    """The task fields placement cares about."""

    length_mi: float
    input_bits: float = 0.0


@dataclass(frozen=True)
class Selection:
    """Chosen VM plus the policy-specific score it won with."""

    vm_id: int
    score: float


class PlacementError(RuntimeError):
    """No feasible candidate for this task."""


DEFAULT_TRADEOFF_LAYER_WEIGHTS: Mapping[Layer, float] = {
    Layer.MIST: 1.0,
    Layer.EDGE_DC: 1.0,
    Layer.CLOUD: 1.2,
}

WEIGHT_GREEDY_RATIOS = (6.0, 6.0, 5.0, 3.0)


class CandidateView:
    """Column-oriented candidate snapshot: one array per Candidate field."""

    __slots__ = ("vm_ids", "layer_codes", "distances", "queue_lens", "mips", "assigned")

    def __init__(self, vm_ids, layer_codes, distances, queue_lens, mips, assigned):
        self.vm_ids = vm_ids
        self.layer_codes = layer_codes
        self.distances = distances
        self.queue_lens = queue_lens
        self.mips = mips
        self.assigned = assigned

    def __len__(self) -> int:
        return len(self.vm_ids)

    @classmethod
    def from_candidates(cls, cands: Sequence[Candidate]) -> "CandidateView":
        return cls(
            vm_ids=np.array([c.vm_id for c in cands], dtype=np.int64),
            layer_codes=np.array([LAYER_CODE[c.host_layer] for c in cands], dtype=np.int64),
            distances=np.array([c.distance_m for c in cands], dtype=np.float64),
            queue_lens=np.array([c.queue_len for c in cands], dtype=np.float64),
            mips=np.array([c.vm_mips for c in cands], dtype=np.float64),
            assigned=np.array([c.assigned_count for c in cands], dtype=np.int64),
        )


def _coerce(cands) -> CandidateView:
    if isinstance(cands, CandidateView):
        return cands
    if len(cands) == 0:
        raise PlacementError("empty candidate list")
    return CandidateView.from_candidates(cands)


def feasible(cand: Candidate, task, architecture: frozenset[Layer] | set[Layer],
             link: LinkParams = DEFAULT_LINK) -> bool:
    """Layer enabled and candidate within that layer's range (inclusive)."""
    del task  # feasibility is task-independent; kept for a uniform signature
    return cand.host_layer in architecture and cand.distance_m <= link.range_by_layer[cand.host_layer]


def _range_vector(link: LinkParams) -> np.ndarray:
    return np.array([link.range_by_layer[layer] for layer in LAYER_ORDER])


def _arch_vector(architecture) -> np.ndarray:
    return np.array([layer in architecture for layer in LAYER_ORDER])


def _feasible_mask(view: CandidateView, architecture, link: LinkParams) -> np.ndarray:
    mask = _arch_vector(architecture)[view.layer_codes]
    mask &= view.distances <= _range_vector(link)[view.layer_codes]
    return mask


def _feasible_indices(view: CandidateView, architecture, link: LinkParams) -> np.ndarray:
    idx = np.flatnonzero(_feasible_mask(view, architecture, link))
    if idx.size == 0:
        raise PlacementError("no feasible candidate")
    return idx


def _pick_min(values: np.ndarray, idx: np.ndarray) -> int:
    """Index (into the full view) of the feasible minimum, first on ties."""
    return int(idx[np.argmin(values[idx])])


def standardize(values: Sequence[float]) -> list[float]:
    """Z-scores with the population standard deviation.

    A zero-spread input maps to all zeros. Errors on an empty sequence.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("standardize needs at least one value")
    return list(_zscores(arr))


def _zscores(arr: np.ndarray) -> np.ndarray:
    std = float(arr.std())
    if std == 0.0:
        return np.zeros(arr.shape)
    return (arr - arr.mean()) / std


def distance_only(cands, task, architecture, *, link: LinkParams = DEFAULT_LINK) -> Selection:
    """Feasible candidate with the smallest standardized distance.

    Standardization is a positive affine map, so the argmin is taken on
    the raw distances (immune to variance underflow on extreme inputs);
    the reported score is the winner's z-score over the full list.
    """
    view = _coerce(cands)
    idx = _feasible_indices(view, architecture, link)
    chosen = _pick_min(view.distances, idx)
    z = _zscores(view.distances)
    return Selection(int(view.vm_ids[chosen]), float(z[chosen]))


def round_robin(cands, task, architecture, *, link: LinkParams = DEFAULT_LINK) -> Selection:
    """Feasible candidate with the fewest assignments so far."""
    view = _coerce(cands)
    idx = _feasible_indices(view, architecture, link)
    chosen = _pick_min(view.assigned, idx)
    return Selection(int(view.vm_ids[chosen]), float(view.assigned[chosen]))


def random_vm(cands, task, architecture, rng: random.Random, *,
              link: LinkParams = DEFAULT_LINK) -> Selection:
    """Uniform draw over all candidates, then forward cyclic scan to feasibility.

    Exactly one RNG draw per call, so the outcome is a deterministic
    function of (seed, call index, candidate list).
    """
    view = _coerce(cands)
    n = len(view)
    drawn = rng.randrange(n)
    mask = _feasible_mask(view, architecture, link)
    if mask[drawn]:
        chosen = drawn
    else:
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            raise PlacementError("no feasible candidate")
        j = int(np.searchsorted(idx, drawn + 1))
        chosen = int(idx[j]) if j < idx.size else int(idx[0])
    return Selection(int(view.vm_ids[chosen]), float(drawn))


def trade_off(cands, task, architecture, *, link: LinkParams = DEFAULT_LINK,
              layer_weights: Mapping[Layer, float] = DEFAULT_TRADEOFF_LAYER_WEIGHTS) -> Selection:
    """Latency-proxy score mixing queue backlog, VM speed, and distance.

    score = layer_weight * (queue_len + 1) * length_mi / vm_mips
            + distance_m / propagation_speed
    """
    view = _coerce(cands)
    idx = _feasible_indices(view, architecture, link)
    weights = np.array([layer_weights[layer] for layer in LAYER_ORDER])[view.layer_codes]
    score = weights * (view.queue_lens + 1.0) * task.length_mi / view.mips \
        + view.distances / link.propagation_speed_mps
    chosen = _pick_min(score, idx)
    return Selection(int(view.vm_ids[chosen]), float(score[chosen]))


def weight_greedy(cands, task, architecture, *, link: LinkParams = DEFAULT_LINK,
                  radio: RadioParams = DEFAULT_RADIO,
                  ratios: Sequence[float] = WEIGHT_GREEDY_RATIOS) -> Selection:
    """Weighted sum of min-max normalized indicators, lowest score wins.

    Indicators, weighted 6:6:5:3 by default: transfer distance, CPU time
    ((queue_len + 1) * length_mi / vm_mips), queued parallel tasks, and
    transmit energy for the task's input at that distance. Each indicator
    is normalized over the feasible set; a constant indicator contributes
    zeros.
    """
    view = _coerce(cands)
    idx = _feasible_indices(view, architecture, link)
    d = view.distances[idx]
    q = view.queue_lens[idx]
    cpu = (q + 1.0) * task.length_mi / view.mips[idx]
    d2 = d * d
    energy = task.input_bits * np.where(
        d < radio.crossover_m,
        radio.e_elec + radio.eps_fs * d2,
        radio.e_elec + radio.eps_mp * (d2 * d2),
    )
    score = ratios[0] * _minmax(d) + ratios[1] * _minmax(cpu) \
        + ratios[2] * _minmax(q) + ratios[3] * _minmax(energy)
    j = int(np.argmin(score))
    chosen = int(idx[j])
    return Selection(int(view.vm_ids[chosen]), float(score[j]))


def _minmax(values: np.ndarray) -> np.ndarray:
    lo = values.min()
    span = values.max() - lo
    if span == 0.0:
        return np.zeros(values.shape)
    return (values - lo) / span


def select(policy: PolicyId, cands, task, architecture, *,
           rng: random.Random | None = None,
           link: LinkParams = DEFAULT_LINK,
           radio: RadioParams = DEFAULT_RADIO,
           layer_weights: Mapping[Layer, float] = DEFAULT_TRADEOFF_LAYER_WEIGHTS) -> Selection:
    """Dispatch to one of the five policies."""
    if policy is PolicyId.DISTANCE_ONLY:
        return distance_only(cands, task, architecture, link=link)
    if policy is PolicyId.ROUND_ROBIN:
        return round_robin(cands, task, architecture, link=link)
    if policy is PolicyId.TRADE_OFF:
        return trade_off(cands, task, architecture, link=link, layer_weights=layer_weights)
    if policy is PolicyId.RANDOM_VM:
        if rng is None:
            raise ValueError("random_vm needs an rng")
        return random_vm(cands, task, architecture, rng, link=link)
    if policy is PolicyId.WEIGHT_GREEDY:
        return weight_greedy(cands, task, architecture, link=link, radio=radio)
    raise ValueError(f"unknown policy {policy!r}")
