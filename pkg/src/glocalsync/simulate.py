"""Deterministic tick-based replay of synthetic update workloads.

Time is logical: one tick is one event slot, and every update or ack
consumes one logical-time unit so the emitted event log is strictly
ordered. Randomness comes from two independent streams (update
generation vs. fault sampling) so a baseline run with propagation
disabled sees exactly the same update sequence as the policy run for
the same seed. Both streams are Python's random.Random, i.e. the
MT19937 Mersenne Twister, seeded with "<seed>/updates" and
"<seed>/faults" respectively; string seeding is stable across runs.

Per tick the loop is: generate updates, deliver acks due this tick
(zero-latency acks land in the same tick), then audit and accumulate
one window unit per open finding.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import InvalidFaultModel
from .network import SiteNetwork
from .patterns import Catalog, ConsistencyLevel, ContentCategory, scope_of_pattern
from .sync import PropagationTask, SyncState, UpdateEvent


@dataclass
class Workload:
    seed: int
    horizon: int
    rates: Dict[ContentCategory, float]  # per-item update probability per tick

    def __post_init__(self):
        if self.horizon < 1:
            raise InvalidFaultModel("horizon must be >= 1")
        for rate in self.rates.values():
            if rate < 0:
                raise InvalidFaultModel("update rates must be >= 0")


@dataclass
class FaultModel:
    # (lo, hi) inclusive uniform integer delay per level; Strict is always 0.
    bounded_delay: Tuple[int, int] = (0, 0)
    lazy_delay: Tuple[int, int] = (0, 0)
    drop_probability: float = 0.0
    retry_interval: int = 5
    retries: bool = True

    def __post_init__(self):
        for lo, hi in (self.bounded_delay, self.lazy_delay):
            if lo < 0 or hi < lo:
                raise InvalidFaultModel(f"bad delay bounds ({lo}, {hi})")
        if not 0.0 <= self.drop_probability <= 1.0:
            raise InvalidFaultModel("drop probability must be in [0, 1]")
        if self.retry_interval < 1:
            raise InvalidFaultModel("retry interval must be >= 1")

    def delay_for(self, level: ConsistencyLevel, rng: random.Random) -> int:
        if level is ConsistencyLevel.STRICT:
            return 0
        lo, hi = self.bounded_delay if level is ConsistencyLevel.BOUNDED else self.lazy_delay
        return lo if lo == hi else rng.randint(lo, hi)


@dataclass
class SimulationMetrics:
    # (category, finding kind) -> accumulated replica-ticks of open findings
    windows: Dict[Tuple[str, str], int] = field(default_factory=dict)
    peaks: Dict[Tuple[str, str], int] = field(default_factory=dict)
    converged: bool = False
    updates_applied: int = 0

    def category_window(self, category: ContentCategory) -> int:
        return sum(
            window for (cat, _), window in self.windows.items() if cat == category.value
        )

    def to_json(self) -> dict:
        return {
            "windows": {
                f"{cat}/{kind}": window for (cat, kind), window in sorted(self.windows.items())
            },
            "peaks": {
                f"{cat}/{kind}": peak for (cat, kind), peak in sorted(self.peaks.items())
            },
            "converged": self.converged,
            "updates_applied": self.updates_applied,
        }


def run(
    net: SiteNetwork,
    catalog: Catalog,
    workload: Workload,
    faults: Optional[FaultModel] = None,
    propagate: bool = True,
) -> Tuple[SimulationMetrics, SyncState, str]:
    """Drive the sync engine under a seeded workload; returns metrics,
    the final state, and the emitted event log text."""
    from .sync import dump_log

    faults = faults or FaultModel()
    rng_updates = random.Random(f"{workload.seed}/updates")
    rng_faults = random.Random(f"{workload.seed}/faults")

    state = SyncState()
    metrics = SimulationMetrics()
    logical = 0
    event_seq = 0
    # schedule entries: (due_tick, seq, task, kind) with kind "ack" | "retry"
    schedule: List[Tuple[int, int, PropagationTask, str]] = []
    schedule_seq = 0
    item_ids = sorted(catalog.items)

    def schedule_task(task: PropagationTask, tick: int) -> None:
        nonlocal schedule_seq
        if rng_faults.random() < faults.drop_probability:
            if faults.retries:
                schedule.append((tick + faults.retry_interval, schedule_seq, task, "retry"))
                schedule_seq += 1
            return
        delay = faults.delay_for(task.level, rng_faults)
        schedule.append((tick + delay, schedule_seq, task, "ack"))
        schedule_seq += 1

    for tick in range(1, workload.horizon + 1):
        for item_id in item_ids:
            item = catalog.items[item_id]
            rate = workload.rates.get(item.category, 0.0)
            if rng_updates.random() >= rate:
                continue
            component = rng_updates.choice(item.components)
            scope = scope_of_pattern(net, item.origin, component.pattern)
            author = rng_updates.choice(scope.sorted())
            logical += 1
            event_seq += 1
            event = UpdateEvent(
                event_id=f"e{event_seq}",
                item_id=item_id,
                component_id=component.component_id,
                at=author,
                new_digest=f"{item_id}:{component.component_id}:r{event_seq}",
                logical_time=logical,
            )
            tasks = state.apply_update(net, catalog, event)
            metrics.updates_applied += 1
            if propagate:
                for task in tasks:
                    schedule_task(task, tick)

        due = sorted(
            (entry for entry in schedule if entry[0] <= tick),
            key=lambda entry: (entry[0], entry[1]),
        )
        schedule = [entry for entry in schedule if entry[0] > tick]
        for _, _, task, kind in due:
            if kind == "retry":
                schedule_task(task, tick)
                continue
            if task.acked:
                continue
            logical += 1
            state.ack_task(task.task_id, task.revision.digest, logical_time=logical)

        report = state.audit(net, catalog)
        open_counts: Dict[Tuple[str, str], int] = {}
        for finding in report.findings:
            item = catalog.items[finding.item_id]
            key = (item.category.value, finding.kind.value)
            open_counts[key] = open_counts.get(key, 0) + 1
        for key, count in open_counts.items():
            metrics.windows[key] = metrics.windows.get(key, 0) + count
            metrics.peaks[key] = max(metrics.peaks.get(key, 0), count)

    final = state.audit(net, catalog)
    metrics.converged = (
        len(final) == 0 and not state.pending_tasks() and not schedule
    )
    return metrics, state, dump_log(state)


def baseline_no_policy(
    net: SiteNetwork, catalog: Catalog, workload: Workload
) -> Tuple[SimulationMetrics, SyncState, str]:
    """Replay the identical workload with propagation disabled: every task
    stays pending, so multi-replica updates leave permanent findings."""
    return run(net, catalog, workload, FaultModel(), propagate=False)
