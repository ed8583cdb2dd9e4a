"""Domain model: tasks, jobs and the DAG analytics derived from them.

A task is a non-preemptible unit of work that holds a fixed number of
same-kind cores for a fixed integer duration. A job is a DAG of tasks plus
an arrival tick, a maximum value and a value curve. Upward ranks and the
critical path are derived once per job and never change afterwards.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .curves import ValueCurve

# Architecture label; a task may only run on a cluster of the same kind.
Kind = int


class WorkloadError(ValueError):
    """A job or workload failed validation at load time."""


@dataclass
class Task:
    id: int
    duration: int          # execution ticks, >= 1
    cores: int             # concurrent cores held for the whole duration
    kind: Kind
    deps: tuple[int, ...]  # task ids within the same job, sorted
    succs: tuple[int, ...] = ()     # derived inverse of deps
    upward_rank: Optional[int] = None  # derived, set by finalize_job()

    def __post_init__(self):
        if self.duration < 1:
            raise WorkloadError(f"task {self.id}: duration must be >= 1, got {self.duration}")
        if self.cores < 1:
            raise WorkloadError(f"task {self.id}: cores must be >= 1, got {self.cores}")


@dataclass
class Job:
    id: int
    tasks: dict[int, Task]  # keyed by task id
    arrive: int
    vmax: float
    curve: ValueCurve
    cp: Optional[int] = field(default=None)  # critical path ticks, derived

    @classmethod
    def build(cls, id: int, tasks: list[Task], arrive: int, vmax: float,
              curve: ValueCurve) -> "Job":
        """Validate task references, derive successor sets and check acyclicity."""
        if vmax <= 0:
            raise WorkloadError(f"job {id}: vmax must be positive, got {vmax}")
        by_id = {}
        for t in tasks:
            if t.id in by_id:
                raise WorkloadError(f"job {id}: duplicate task id {t.id}")
            by_id[t.id] = t
        succs: dict[int, list[int]] = {t.id: [] for t in tasks}
        for t in tasks:
            for d in t.deps:
                if d not in by_id:
                    raise WorkloadError(f"job {id}: task {t.id} depends on unknown task {d}")
                if d == t.id:
                    raise WorkloadError(f"job {id}: task {t.id} depends on itself")
                succs[d].append(t.id)
        for t in tasks:
            t.succs = tuple(sorted(succs[t.id]))
        job = cls(id=id, tasks=by_id, arrive=arrive, vmax=vmax, curve=curve)
        topo_order(job)  # raises on cycles
        return job


def topo_order(job: Job) -> list[int]:
    """Topological order of task ids, deterministic: ties go to the lowest id.

    Raises WorkloadError naming one edge of a cycle if the dependency graph
    is not acyclic.
    """
    indeg = {tid: len(t.deps) for tid, t in job.tasks.items()}
    ready = [tid for tid, d in indeg.items() if d == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        tid = heapq.heappop(ready)
        order.append(tid)
        for s in job.tasks[tid].succs:
            indeg[s] -= 1
            if indeg[s] == 0:
                heapq.heappush(ready, s)
    if len(order) < len(job.tasks):
        a, b = _find_cycle_edge(job, {tid for tid, d in indeg.items() if d > 0})
        raise WorkloadError(
            f"job {job.id}: dependency cycle detected (task {b} depends on task {a})")
    return order


def _find_cycle_edge(job: Job, leftover: set[int]) -> tuple[int, int]:
    """Walk dependency edges inside the unresolved set until a node repeats.

    Every unresolved node keeps at least one unresolved dependency, so the
    walk must close a cycle; the last edge walked belongs to it.
    """
    cur = min(leftover)
    seen = set()
    prev = cur
    while cur not in seen:
        seen.add(cur)
        prev = cur
        cur = min(d for d in job.tasks[cur].deps if d in leftover)
    return cur, prev  # task `prev` depends on task `cur`


CommCost = Callable[[Task, Task], int]


def kind_comm_cost(ccr: Fraction) -> CommCost:
    """Edge-delay estimate used for upward ranks.

    Same-kind edges assume co-location (zero cost). Mixed-kind edges always
    pay the producing task's transfer delay, rounded up to whole ticks.
    """
    def cost(u: Task, v: Task) -> int:
        if u.kind == v.kind:
            return 0
        return transfer_ticks(u.duration, ccr)
    return cost


def transfer_ticks(duration: int, ccr: Fraction) -> int:
    """Ceiling of duration * ccr, exact when ccr is a Fraction."""
    return math.ceil(duration * ccr)


def upward_rank(job: Job, comm_cost: CommCost) -> dict[int, int]:
    """Upward rank per task: duration plus the costliest route to any sink.

    rank(t) = duration(t)                                     if t has no successors
    rank(t) = duration(t) + max over succ s of (comm(t, s) + rank(s))  otherwise
    """
    ranks: dict[int, int] = {}
    for tid in reversed(topo_order(job)):
        t = job.tasks[tid]
        best = 0
        for s in t.succs:
            r = comm_cost(t, job.tasks[s]) + ranks[s]
            if r > best:
                best = r
        ranks[tid] = t.duration + best
    return ranks


def critical_path(job: Job) -> int:
    """Largest upward rank in the job: its minimum possible response time."""
    assert all(t.upward_rank is not None for t in job.tasks.values()), \
        "finalize_job() must run before critical_path()"
    return max(t.upward_rank for t in job.tasks.values())


def finalize_job(job: Job, ccr: Fraction) -> None:
    """Compute and store upward ranks and the critical path for one job."""
    ranks = upward_rank(job, kind_comm_cost(ccr))
    for tid, r in ranks.items():
        job.tasks[tid].upward_rank = r
    job.cp = critical_path(job)
