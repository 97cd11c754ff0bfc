"""Grid runner: constellation size x policy x seed.

Produces one MetricsRecord per grid point in construction order
(count-major, then policy, then seed), regardless of how many worker
processes execute the runs. Writers emit results.csv plus one
plot_<metric>.csv per headline metric, shaped for line charts: a
satellites column and one column per policy, averaged over seeds.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

from .config import SimulationConfig, validate
from .engine import Simulation
from .errors import ConfigurationError
from .metrics import MetricsRecord, emit_csv
from .orchestrate import PolicyId

DEFAULT_COUNTS = tuple(range(100, 1001, 100))
PLOT_METRICS = (
    "success_rate_pct",
    "avg_e2e_s",
    "total_energy_db",
    "avg_vm_cpu_pct",
)


@dataclass(frozen=True)
class SweepSpec:
    satellite_counts: tuple[int, ...] = DEFAULT_COUNTS
    policies: tuple[PolicyId, ...] = tuple(PolicyId)
    seeds: tuple[int, ...] = (1,)
    scale_all_layers: bool = False
    output_dir: Path | None = None

    def __post_init__(self):
        if not self.satellite_counts:
            raise ConfigurationError("sweep needs at least one satellite count")
        if any(c <= 0 for c in self.satellite_counts):
            raise ConfigurationError("satellite counts must be positive")
        if any(b <= a for a, b in zip(self.satellite_counts, self.satellite_counts[1:])):
            raise ConfigurationError("satellite counts must be strictly increasing")
        if not self.policies:
            raise ConfigurationError("sweep needs at least one policy")
        if len(set(self.policies)) != len(self.policies):
            raise ConfigurationError("duplicate policy in sweep")
        if not self.seeds:
            raise ConfigurationError("sweep needs at least one seed")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigurationError("duplicate seed in sweep")


def derive_config(base: SimulationConfig, count: int, policy: PolicyId,
                  seed: int, scale_all_layers: bool) -> SimulationConfig:
    """Base config specialized to one grid point.

    The count replaces the mist layer; with scale_all_layers the edge and
    cloud counts scale by count / base mist count (floor 1).
    """
    const = base.constellation
    if scale_all_layers:
        if const.mist <= 0:
            raise ConfigurationError("scale_all_layers needs a positive base mist count")
        factor = count / const.mist
        const = replace(
            const,
            mist=count,
            edge_dc=max(1, round(const.edge_dc * factor)),
            cloud=max(1, round(const.cloud * factor)),
            rng_seed=seed,
        )
    else:
        const = replace(const, mist=count, rng_seed=seed)
    return replace(base, constellation=const, policy=policy, seed=seed)


def _run_one(config: SimulationConfig) -> MetricsRecord:
    return Simulation(config).run()


def run_sweep(spec: SweepSpec, base: SimulationConfig,
              parallel: int = 1) -> list[MetricsRecord]:
    """Run the grid; optionally write CSV artifacts to spec.output_dir."""
    if parallel < 1:
        raise ConfigurationError("parallel must be >= 1")
    configs = [
        derive_config(base, count, policy, seed, spec.scale_all_layers)
        for count in spec.satellite_counts
        for policy in spec.policies
        for seed in spec.seeds
    ]
    for config in configs:
        validate(config)
    if parallel == 1:
        records = [_run_one(config) for config in configs]
    else:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            records = list(pool.map(_run_one, configs))
    if spec.output_dir is not None:
        write_outputs(spec, records)
    return records


def write_outputs(spec: SweepSpec, records: Sequence[MetricsRecord]) -> None:
    out = Path(spec.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "results.csv").write_bytes(emit_csv(records))
    for metric in PLOT_METRICS:
        data = plot_data(spec, records, metric)
        (out / f"plot_{metric}.csv").write_bytes(data)


def plot_data(spec: SweepSpec, records: Sequence[MetricsRecord],
              metric: str) -> bytes:
    """One chart-ready table: satellites column, one column per policy.

    Cell = metric averaged over seeds at that grid point; absent values
    propagate (any absent seed value makes the cell absent).
    """
    by_key: dict[tuple[int, PolicyId], list] = {}
    for rec in records:
        by_key.setdefault((rec.satellite_count, rec.policy), []).append(
            getattr(rec, metric)
        )
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["satellites"] + [policy.value for policy in spec.policies])
    for count in spec.satellite_counts:
        row: list[str] = [str(count)]
        for policy in spec.policies:
            values = by_key.get((count, policy), [])
            if len(values) != len(spec.seeds) or any(v is None for v in values):
                row.append("")
            else:
                row.append("%.6g" % (sum(values) / len(values)))
        writer.writerow(row)
    return buf.getvalue().encode("utf-8")
