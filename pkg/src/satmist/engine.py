"""Event-driven simulation of task generation, placement, and execution.

The run is a single priority queue of (time, seq) ordered events; seq is a
monotonic push counter, so simultaneous events resolve in push order and a
run is a pure function of its configuration. Mist satellites generate
tasks from seeded Poisson streams; each task is placed once, at creation
time, over a snapshot of every VM in the constellation; transfers charge
radio energy on both ends; results are censored, not extrapolated, at the
simulation horizon.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Callable, Sequence

import numpy as np

from . import metrics as metrics_mod
from .config import SimulationConfig, validate
from .errors import ConfigurationError
from .infra import SatelliteNode, Vm, build_nodes
from .layers import LAYER_CODE, Layer
from .netenergy import (
    propagation_delay,
    rx_energy,
    transmission_delay,
    tx_energy,
)
from .orbital import OrbitPositions, build_constellation
from .orchestrate import CandidateView, PlacementError, PolicyId, select


class TaskState(str, Enum):
    CREATED = "created"
    UPLOADING = "uploading"
    QUEUED = "queued"
    EXECUTING = "executing"
    DOWNLOADING = "downloading"
    SUCCEEDED = "succeeded"
    FAILED = "failed"


class FailureCause(str, Enum):
    NONE = "none"
    DEADLINE = "deadline"
    MOBILITY = "mobility"
    NO_DESTINATION = "no_destination"


class EventKind(IntEnum):
    TASK_GENERATED = 0
    UPLOAD_COMPLETE = 1
    EXECUTION_COMPLETE = 2
    DOWNLOAD_COMPLETE = 3
    MOBILITY_TICK = 4
    SIM_END = 5


@dataclass(slots=True)
class Task:
    id: int
    origin_satellite: int
    created_at: float
    length_mi: float
    input_bits: float
    output_bits: float
    max_latency_s: float
    state: TaskState = TaskState.CREATED
    assigned_vm: int = -1
    service_start_s: float = math.nan
    finished_at: float = math.nan
    failure_cause: FailureCause = FailureCause.NONE

    @property
    def e2e_s(self) -> float:
        return self.finished_at - self.created_at


@dataclass(frozen=True)
class Event:
    time: float
    seq: int
    kind: EventKind
    task_id: int


def generate_tasks(config: SimulationConfig, origin: SatelliteNode | int,
                   rng: random.Random) -> list[Task]:
    """Poisson arrivals for one mist satellite over [0, duration).

    Task ids are local placeholders; the runner renumbers globally by
    (created_at, origin). With rate_is_global set, the profile rate is
    split evenly across mist satellites.
    """
    origin_id = origin.id if isinstance(origin, SatelliteNode) else int(origin)
    profile = config.task
    rate_per_s = profile.rate_per_min / 60.0
    if profile.rate_is_global and config.constellation.mist > 0:
        rate_per_s /= config.constellation.mist
    tasks: list[Task] = []
    if rate_per_s <= 0:
        return tasks
    t = rng.expovariate(rate_per_s)
    while t < config.duration_s:
        tasks.append(
            Task(
                id=len(tasks),
                origin_satellite=origin_id,
                created_at=t,
                length_mi=profile.length_mi,
                input_bits=profile.input_bits,
                output_bits=profile.output_bits,
                max_latency_s=profile.max_latency_s,
            )
        )
        t += rng.expovariate(rate_per_s)
    return tasks


class Simulation:
    """One configured run; single use, call run() once."""

    def __init__(self, config: SimulationConfig, *,
                 tasks: Sequence[Task] | None = None,
                 positions=None,
                 on_transfer: Callable[[int, float, float, float, float], None] | None = None,
                 record_events: bool = False):
        validate(config)
        self.config = config
        layered = build_constellation(config.constellation)
        self.nodes, self.vms = build_nodes(layered, config.profiles)
        self.positions = positions if positions is not None else OrbitPositions(
            [elements for _, elements in layered]
        )
        if len(self.positions) != len(self.nodes):
            raise ConfigurationError(
                f"position source covers {len(self.positions)} satellites, "
                f"constellation has {len(self.nodes)}"
            )
        self.on_transfer = on_transfer
        self.record_events = record_events
        self.events: list[Event] = []

        n_sats = len(self.nodes)
        n_vms = len(self.vms)
        self._vm_host = np.array([vm.host_satellite for vm in self.vms], dtype=np.int64)
        self._view = CandidateView(
            vm_ids=np.arange(n_vms, dtype=np.int64),
            layer_codes=np.array([LAYER_CODE[vm.host_layer] for vm in self.vms], dtype=np.int64),
            distances=np.empty(n_vms),
            queue_lens=np.zeros(n_vms),
            mips=np.array([vm.mips for vm in self.vms]),
            assigned=np.zeros(n_vms, dtype=np.int64),
        )
        self._dist_sat = np.empty(n_sats)
        self._diff = np.empty((n_sats, 3))
        self._layer_weights = {
            Layer.MIST: 1.0,
            Layer.EDGE_DC: 1.0,
            Layer.CLOUD: config.tradeoff_cloud_weight,
        }
        self._policy_rng = random.Random(f"{config.seed}:policy")

        if tasks is None:
            self.tasks = self._generated_tasks()
        else:
            self.tasks = [tasks[i] for i in range(len(tasks))]
            for i, task in enumerate(self.tasks):
                if task.id != i:
                    raise ConfigurationError("injected task ids must be 0..n-1 in order")

        self._heap: list[tuple[float, int, int, int]] = []
        self._seq = 0
        for task in self.tasks:
            self._push(task.created_at, EventKind.TASK_GENERATED, task.id)
        tick = config.tick_s
        k = 1
        while k * tick <= config.duration_s:
            self._push(k * tick, EventKind.MOBILITY_TICK, -1)
            k += 1

        self.total_energy_j = 0.0
        self._e2e: list[float] = []
        self._per_layer = {layer: 0 for layer in Layer}
        self._ran = False

    def _generated_tasks(self) -> list[Task]:
        raw: list[Task] = []
        for node in self.nodes:
            if node.layer is not Layer.MIST:
                continue
            rng = random.Random(f"{self.config.seed}:arrivals:{node.id}")
            raw.extend(generate_tasks(self.config, node, rng))
        raw.sort(key=lambda task: (task.created_at, task.origin_satellite))
        out = []
        for i, task in enumerate(raw):
            task.id = i
            out.append(task)
        return out

    def _push(self, time: float, kind: EventKind, task_id: int) -> None:
        heapq.heappush(self._heap, (time, self._seq, int(kind), task_id))
        self._seq += 1

    def run(self) -> metrics_mod.MetricsRecord:
        if self._ran:
            raise RuntimeError("Simulation.run() is single use")
        self._ran = True
        duration = self.config.duration_s
        heap = self._heap
        handlers = {
            EventKind.TASK_GENERATED: self.on_task_generated,
            EventKind.UPLOAD_COMPLETE: self.on_upload_complete,
            EventKind.EXECUTION_COMPLETE: self.on_execution_complete,
            EventKind.DOWNLOAD_COMPLETE: self.on_download_complete,
        }
        while heap and heap[0][0] <= duration:
            time, seq, kind_code, task_id = heapq.heappop(heap)
            kind = EventKind(kind_code)
            if self.record_events:
                self.events.append(Event(time, seq, kind, task_id))
            if kind is EventKind.MOBILITY_TICK:
                self.on_mobility_tick(time)
            else:
                handlers[kind](self.tasks[task_id], time)
        if self.record_events:
            self.events.append(Event(duration, self._seq, EventKind.SIM_END, -1))
        return self._build_record()

    # -- event handlers -------------------------------------------------

    def on_task_generated(self, task: Task, now: float) -> None:
        view = self._snapshot_distances(task.origin_satellite, now)
        try:
            sel = select(
                self.config.policy,
                view,
                task,
                self.config.architecture,
                rng=self._policy_rng,
                link=self.config.link,
                radio=self.config.radio,
                layer_weights=self._layer_weights,
            )
        except PlacementError:
            self._fail(task, FailureCause.NO_DESTINATION, now)
            return
        vm_index = sel.vm_id
        vm = self.vms[vm_index]
        vm.assigned_count += 1
        self._view.assigned[vm_index] += 1
        self._per_layer[vm.host_layer] += 1
        task.assigned_vm = vm_index
        if vm.host_satellite == task.origin_satellite:
            self._enqueue(task, vm, now)
        else:
            d = float(self._view.distances[vm_index])
            self._charge_transfer(task, task.input_bits, d)
            task.state = TaskState.UPLOADING
            delay = transmission_delay(task.input_bits, self.config.link) \
                + propagation_delay(d, self.config.link)
            self._push(now + delay, EventKind.UPLOAD_COMPLETE, task.id)

    def on_upload_complete(self, task: Task, now: float) -> None:
        self._enqueue(task, self.vms[task.assigned_vm], now)

    def on_execution_complete(self, task: Task, now: float) -> None:
        vm = self.vms[task.assigned_vm]
        done = vm.queue.popleft()
        if done != task.id:  # pragma: no cover - FIFO order is structural
            raise RuntimeError(f"queue order violated on vm {vm.id}")
        self._view.queue_lens[task.assigned_vm] -= 1.0
        if vm.queue:
            self.tasks[vm.queue[0]].state = TaskState.EXECUTING
        origin = task.origin_satellite
        if vm.host_satellite == origin:
            task.state = TaskState.DOWNLOADING
            self._push(now, EventKind.DOWNLOAD_COMPLETE, task.id)
            return
        p_origin = self.positions.position_one(origin, now)
        p_exec = self.positions.position_one(vm.host_satellite, now)
        d = math.dist(p_origin, p_exec)
        if d > self.config.link.range_by_layer[vm.host_layer]:
            self._fail(task, FailureCause.MOBILITY, now)
            return
        self._charge_transfer(task, task.output_bits, d)
        task.state = TaskState.DOWNLOADING
        delay = transmission_delay(task.output_bits, self.config.link) \
            + propagation_delay(d, self.config.link)
        self._push(now + delay, EventKind.DOWNLOAD_COMPLETE, task.id)

    def on_download_complete(self, task: Task, now: float) -> None:
        task.finished_at = now
        if now - task.created_at <= task.max_latency_s:
            task.state = TaskState.SUCCEEDED
            self._e2e.append(now - task.created_at)
        else:
            task.state = TaskState.FAILED
            task.failure_cause = FailureCause.DEADLINE

    def on_mobility_tick(self, now: float) -> None:
        """Reserved sampling hook; positions are computed lazily at events."""

    # -- internals -------------------------------------------------------

    def _snapshot_distances(self, origin: int, now: float) -> CandidateView:
        pos = self.positions.positions_all(now)
        diff = self._diff
        np.subtract(pos, pos[origin], out=diff)
        np.multiply(diff, diff, out=diff)
        np.sum(diff, axis=1, out=self._dist_sat)
        np.sqrt(self._dist_sat, out=self._dist_sat)
        np.take(self._dist_sat, self._vm_host, out=self._view.distances)
        return self._view

    def _enqueue(self, task: Task, vm: Vm, now: float) -> None:
        starts_now = vm.busy_until <= now
        exec_seconds = task.length_mi / vm.mips
        completion = vm.enqueue(task.id, now, exec_seconds, horizon=self.config.duration_s)
        task.state = TaskState.EXECUTING if starts_now else TaskState.QUEUED
        task.service_start_s = completion - exec_seconds
        self._view.queue_lens[vm.id] += 1.0
        self._push(completion, EventKind.EXECUTION_COMPLETE, task.id)

    def _charge_transfer(self, task: Task, bits: float, distance_m: float) -> None:
        tx = tx_energy(bits, distance_m, self.config.radio)
        rx = rx_energy(bits, self.config.radio)
        self.total_energy_j += tx + rx
        if self.on_transfer is not None:
            self.on_transfer(task.id, bits, distance_m, tx, rx)

    def _fail(self, task: Task, cause: FailureCause, now: float) -> None:
        task.state = TaskState.FAILED
        task.failure_cause = cause
        task.finished_at = now

    def _build_record(self) -> metrics_mod.MetricsRecord:
        succeeded = failed_deadline = failed_mobility = failed_no_dest = 0
        for task in self.tasks:
            if task.state is TaskState.SUCCEEDED:
                succeeded += 1
            elif task.state is TaskState.FAILED:
                if task.failure_cause is FailureCause.DEADLINE:
                    failed_deadline += 1
                elif task.failure_cause is FailureCause.MOBILITY:
                    failed_mobility += 1
                else:
                    failed_no_dest += 1
        generated = len(self.tasks)
        unfinished = generated - succeeded - failed_deadline - failed_mobility - failed_no_dest
        return metrics_mod.MetricsRecord(
            policy=self.config.policy,
            satellite_count=self.config.constellation.mist,
            seed=self.config.seed,
            generated=generated,
            succeeded=succeeded,
            failed_deadline=failed_deadline,
            failed_mobility=failed_mobility,
            failed_no_destination=failed_no_dest,
            unfinished=unfinished,
            success_rate_pct=metrics_mod.success_rate(succeeded, generated, unfinished),
            avg_e2e_s=metrics_mod.avg_e2e(self._e2e),
            total_energy_j=self.total_energy_j,
            total_energy_db=metrics_mod.energy_db_or_neg_inf(self.total_energy_j),
            avg_vm_cpu_pct=metrics_mod.avg_cpu(self.vms, self.config.duration_s),
            per_layer_task_counts=dict(self._per_layer),
        )


def run(config: SimulationConfig, **kwargs) -> metrics_mod.MetricsRecord:
    """Build and execute one simulation, returning its metrics."""
    return Simulation(config, **kwargs).run()
