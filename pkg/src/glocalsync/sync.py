"""Versioned replica state, propagation planning, and inconsistency audit.

One logical head revision exists per (item, component); updates advance
it and fan out one propagation task per other in-scope replica. Replicas
catch up by acking tasks. The audit classifies every in-scope replica as
Missing (no entry), Outdated (entry behind the head counter), or
Conflicting (entry at the head counter with a divergent digest), and
labels each finding with how the divergence relates to languages:

  WithinSite      the replica's own site already holds current content
                  (or, for conflicts, content that disagrees with it)
  SharedLanguage  the replica's language is also offered at the head
                  revision's author site
  UnsharedLanguage  neither of the above

State has a single writer; read-only queries (audit, plan, converged)
are safe on a snapshot. The engine never spawns concurrent work.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import (
    AlreadyAcked,
    OutOfScopeWrite,
    ParseError,
    StaleEvent,
    UnknownItem,
    UnknownTask,
)
from .network import ReplicaId, SiteNetwork
from .patterns import Catalog, ConsistencyLevel, scope_of_pattern

DEFAULT_BOUNDED_DEADLINE = 10  # logical-time offset for Bounded tasks

_LEVEL_RANK = {ConsistencyLevel.STRICT: 0, ConsistencyLevel.BOUNDED: 1, ConsistencyLevel.LAZY: 2}


class FindingKind(str, Enum):
    MISSING = "Missing"
    OUTDATED = "Outdated"
    CONFLICTING = "Conflicting"


class LanguageRelation(str, Enum):
    SHARED = "SharedLanguage"
    UNSHARED = "UnsharedLanguage"
    WITHIN_SITE = "WithinSite"


@dataclass(frozen=True)
class Revision:
    counter: int
    digest: str
    author: ReplicaId
    logical_time: int


@dataclass
class Entry:
    counter: int
    digest: str


@dataclass(frozen=True)
class UpdateEvent:
    event_id: str
    item_id: str
    component_id: str
    at: ReplicaId
    new_digest: str
    logical_time: int


@dataclass
class PropagationTask:
    task_id: str
    item_id: str
    component_id: str
    target: ReplicaId
    revision: Revision
    level: ConsistencyLevel
    deadline: Optional[int]  # absolute logical time, Bounded only
    acked: bool = False

    def sort_key(self):
        return (
            _LEVEL_RANK[self.level],
            self.deadline if self.deadline is not None else 0,
            self.revision.logical_time,
            self.target,
        )


@dataclass(frozen=True)
class Finding:
    item_id: str
    component_id: str
    replica: ReplicaId
    kind: FindingKind
    language_relation: LanguageRelation
    details: str

    def to_json(self) -> dict:
        return {
            "item_id": self.item_id,
            "component_id": self.component_id,
            "replica": {"country": self.replica.country, "language": self.replica.language},
            "kind": self.kind.value,
            "language_relation": self.language_relation.value,
            "details": self.details,
        }


@dataclass
class InconsistencyReport:
    findings: List[Finding] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.findings)

    def to_json(self) -> dict:
        return {"findings": [f.to_json() for f in self.findings]}


class SyncState:
    """Mutable replica state for one (network, catalog) pair."""

    def __init__(self, bounded_deadline: int = DEFAULT_BOUNDED_DEADLINE):
        self.bounded_deadline = bounded_deadline
        self.heads: Dict[Tuple[str, str], Revision] = {}
        self.entries: Dict[Tuple[str, str], Dict[ReplicaId, Entry]] = {}
        self.tasks: Dict[str, PropagationTask] = {}
        self.last_time = 0
        self.log: List[dict] = []
        self._task_seq = 0

    # -- event application ------------------------------------------------

    def _next_task_id(self) -> str:
        self._task_seq += 1
        return f"t{self._task_seq}"

    def apply_update(
        self, net: SiteNetwork, catalog: Catalog, event: UpdateEvent
    ) -> List[PropagationTask]:
        """Advance the component head and emit one task per other in-scope replica."""
        item = catalog.item(event.item_id)
        component = item.component(event.component_id)
        if event.logical_time <= self.last_time:
            raise StaleEvent(
                f"event {event.event_id} at t={event.logical_time} "
                f"does not advance past t={self.last_time}"
            )
        scope = scope_of_pattern(net, item.origin, component.pattern)
        if event.at not in scope:
            raise OutOfScopeWrite(
                f"replica {event.at.as_key()} is outside the scope of "
                f"{event.item_id}/{event.component_id}"
            )

        key = (event.item_id, event.component_id)
        prev = self.heads.get(key)
        revision = Revision(
            counter=(prev.counter + 1) if prev else 1,
            digest=event.new_digest,
            author=event.at,
            logical_time=event.logical_time,
        )
        self.heads[key] = revision
        self.entries.setdefault(key, {})[event.at] = Entry(revision.counter, revision.digest)
        self.last_time = event.logical_time

        emitted: List[PropagationTask] = []
        for target in sorted(scope.replicas):
            if target == event.at:
                continue
            deadline = None
            if item.consistency is ConsistencyLevel.BOUNDED:
                deadline = event.logical_time + self.bounded_deadline
            task = PropagationTask(
                task_id=self._next_task_id(),
                item_id=event.item_id,
                component_id=event.component_id,
                target=target,
                revision=revision,
                level=item.consistency,
                deadline=deadline,
            )
            self.tasks[task.task_id] = task
            emitted.append(task)

        self.log.append(
            {
                "type": "update",
                "event_id": event.event_id,
                "item_id": event.item_id,
                "component_id": event.component_id,
                "country": event.at.country,
                "language": event.at.language,
                "new_digest": event.new_digest,
                "logical_time": event.logical_time,
            }
        )
        return emitted

    def ack_task(
        self, task_id: str, acked_digest: str, logical_time: Optional[int] = None
    ) -> None:
        """Record delivery of a task at its target, closing the task.

        A digest differing from the task revision's digest is stored as-is;
        the audit will surface it as Conflicting.
        """
        task = self.tasks.get(task_id)
        if task is None:
            raise UnknownTask(f"unknown task: {task_id}")
        if task.acked:
            raise AlreadyAcked(f"task already acked: {task_id}")
        if logical_time is None:
            logical_time = self.last_time + 1
        if logical_time <= self.last_time:
            raise StaleEvent(
                f"ack of {task_id} at t={logical_time} does not advance past t={self.last_time}"
            )
        task.acked = True
        key = (task.item_id, task.component_id)
        current = self.entries.setdefault(key, {}).get(task.target)
        # Entries never regress: a late ack for a superseded revision only
        # closes the task.
        if current is None or task.revision.counter >= current.counter:
            self.entries[key][task.target] = Entry(task.revision.counter, acked_digest)
        self.last_time = logical_time
        self.log.append(
            {
                "type": "ack",
                "task_id": task_id,
                "acked_digest": acked_digest,
                "logical_time": logical_time,
            }
        )

    # -- queries -----------------------------------------------------------

    def pending_tasks(self) -> List[PropagationTask]:
        return [task for task in self.tasks.values() if not task.acked]

    def plan(self) -> List[PropagationTask]:
        """Pending tasks in a deterministic total order: Strict before
        Bounded before Lazy, then deadline, origin time, and target."""
        return sorted(self.pending_tasks(), key=PropagationTask.sort_key)

    def audit(self, net: SiteNetwork, catalog: Catalog) -> InconsistencyReport:
        report = InconsistencyReport()
        for (item_id, component_id), head in sorted(self.heads.items()):
            item = catalog.item(item_id)
            component = item.component(component_id)
            scope = scope_of_pattern(net, item.origin, component.pattern)
            entries = self.entries.get((item_id, component_id), {})
            for replica in sorted(scope.replicas):
                entry = entries.get(replica)
                if entry is None:
                    kind = FindingKind.MISSING
                    details = f"no entry; head is r{head.counter}"
                elif entry.counter < head.counter:
                    kind = FindingKind.OUTDATED
                    details = f"at r{entry.counter}, head is r{head.counter}"
                elif entry.digest != head.digest:
                    kind = FindingKind.CONFLICTING
                    details = (
                        f"digest {entry.digest!r} diverges from head {head.digest!r} "
                        f"at r{head.counter}"
                    )
                else:
                    continue
                relation = _language_relation(net, scope, entries, replica, head, kind, entry)
                report.findings.append(
                    Finding(item_id, component_id, replica, kind, relation, details)
                )
        return report

    def converged(self, net: SiteNetwork, catalog: Catalog, item_id: str) -> bool:
        """True iff the item has no findings and no pending tasks."""
        catalog.item(item_id)
        for task in self.tasks.values():
            if not task.acked and task.item_id == item_id:
                return False
        report = self.audit(net, catalog)
        return not any(f.item_id == item_id for f in report.findings)

    def snapshot(self) -> dict:
        """JSON-ready view of all replica entries plus pending tasks."""
        return {
            "heads": {
                f"{item}/{comp}": {
                    "counter": head.counter,
                    "digest": head.digest,
                    "author": head.author.as_key(),
                    "logical_time": head.logical_time,
                }
                for (item, comp), head in sorted(self.heads.items())
            },
            "entries": {
                f"{item}/{comp}/{replica.as_key()}": {
                    "counter": entry.counter,
                    "digest": entry.digest,
                }
                for (item, comp), per_replica in sorted(self.entries.items())
                for replica, entry in sorted(per_replica.items())
            },
            "pending_tasks": [
                {
                    "task_id": task.task_id,
                    "item_id": task.item_id,
                    "component_id": task.component_id,
                    "target": task.target.as_key(),
                    "counter": task.revision.counter,
                    "digest": task.revision.digest,
                    "level": task.level.value,
                    "deadline": task.deadline,
                }
                for task in self.plan()
            ],
            "last_time": self.last_time,
        }


def _language_relation(
    net: SiteNetwork,
    scope,
    entries: Dict[ReplicaId, Entry],
    replica: ReplicaId,
    head: Revision,
    kind: FindingKind,
    entry: Optional[Entry],
) -> LanguageRelation:
    site_peers = [
        other
        for other in scope.replicas
        if other.country == replica.country and other != replica
    ]
    if kind is FindingKind.CONFLICTING:
        # A conflict is within-site when a sibling language at the same
        # site holds content that disagrees with this replica's.
        for peer in site_peers:
            peer_entry = entries.get(peer)
            if peer_entry is not None and peer_entry.digest != entry.digest:
                return LanguageRelation.WITHIN_SITE
    else:
        for peer in site_peers:
            peer_entry = entries.get(peer)
            if (
                peer_entry is not None
                and peer_entry.counter == head.counter
                and peer_entry.digest == head.digest
            ):
                return LanguageRelation.WITHIN_SITE
    if replica.language in net.languages(head.author.country):
        return LanguageRelation.SHARED
    return LanguageRelation.UNSHARED


# -- event log (newline-delimited JSON) -------------------------------------


def parse_log_line(line: str, line_no: int) -> dict:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {line_no}: invalid JSON: {exc}") from exc
    if not isinstance(record, dict) or record.get("type") not in ("update", "ack"):
        raise ParseError(f"line {line_no}: expected an update or ack record")
    return record


def replay_log(
    net: SiteNetwork,
    catalog: Catalog,
    lines: Iterable[str],
    bounded_deadline: int = DEFAULT_BOUNDED_DEADLINE,
) -> SyncState:
    """Rebuild state from a log; bit-identical inputs give identical state."""
    state = SyncState(bounded_deadline=bounded_deadline)
    for line_no, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        record = parse_log_line(line, line_no)
        try:
            if record["type"] == "update":
                event = UpdateEvent(
                    event_id=str(record["event_id"]),
                    item_id=str(record["item_id"]),
                    component_id=str(record["component_id"]),
                    at=ReplicaId(str(record["country"]).upper(), str(record["language"]).lower()),
                    new_digest=str(record["new_digest"]),
                    logical_time=int(record["logical_time"]),
                )
                state.apply_update(net, catalog, event)
            else:
                state.ack_task(
                    task_id=str(record["task_id"]),
                    acked_digest=str(record["acked_digest"]),
                    logical_time=int(record["logical_time"]),
                )
        except KeyError as exc:
            raise ParseError(f"line {line_no}: missing field {exc}") from exc
    return state


def dump_log(state: SyncState) -> str:
    return "".join(json.dumps(record, sort_keys=True) + "\n" for record in state.log)
