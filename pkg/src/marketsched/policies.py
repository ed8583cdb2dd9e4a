"""The ten bidding policies.

Each policy turns a ready task (plus queue context) into a comparable bid.
The ordering sense is a property of the policy: lowest-wins policies treat
small bids as most urgent, highest-wins the opposite. All policies share
one tiebreak, ascending (job arrival, job id, task id), so every clearing
instant has a total order over bids.

    random  highest   fresh uniform draw each instant
    fifo    lowest    parent job arrival tick
    srtf    lowest    upward rank
    lrtf    highest   upward rank
    pslr    highest   projected SLR plus quadratic anti-starvation term
    edf     lowest    absolute final-deadline tick
    pv      highest   projected value
    pvd     highest   projected value / downstream resource
    pvdsq   highest   pvd squared
    pvr     lowest    area remaining under the value curve
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass

from .model import Job, Task


@dataclass(frozen=True)
class QueueContext:
    """Per-instant facts shared by all bidders."""
    now: int
    max_cp_in_queue: int  # max critical path over parent jobs of queued tasks


def p_slr(task: Task, job: Job, now: int) -> float:
    """Projected SLR if the task ran right now: the job would finish after
    the task's upward rank, so ((rank + now) - arrive) / cp.

    Tasks off the critical path can project below 1; value curves are flat
    there. The +1 and anti-starvation terms belong to the P-SLR bid only.
    """
    return ((task.upward_rank + now) - job.arrive) / job.cp


def bid_fifo(task: Task, job: Job) -> float:
    return float(job.arrive)


def bid_srtf(task: Task) -> float:
    return float(task.upward_rank)


def bid_lrtf(task: Task) -> float:
    return float(task.upward_rank)


def bid_pslr(task: Task, job: Job, ctx: QueueContext) -> float:
    """Projected SLR bid with one extra tick (prefers smaller tasks among
    simultaneous arrivals) plus a floored quadratic term that grows without
    bound while a job waits, so nothing starves behind fresh arrivals."""
    waited = ctx.now - job.arrive
    anti = (waited // ctx.max_cp_in_queue) ** 2
    return ((task.upward_rank + ctx.now + 1) - job.arrive) / job.cp + anti


def bid_edf(task: Task, job: Job) -> float:
    """Absolute final-deadline tick; d_final is in SLR units, so times cp."""
    return job.arrive + job.curve.d_final * job.cp


def bid_pv(task: Task, job: Job, ctx: QueueContext) -> float:
    return job.curve.value(job.vmax, p_slr(task, job, ctx.now))


def bid_pvd(task: Task, job: Job, ctx: QueueContext, succ_sum: int) -> float:
    return bid_pv(task, job, ctx) / succ_sum


def bid_pvdsq(task: Task, job: Job, ctx: QueueContext, succ_sum: int) -> float:
    return bid_pvd(task, job, ctx, succ_sum) ** 2


def bid_pvr(task: Task, job: Job, ctx: QueueContext) -> float:
    return job.curve.remaining_area(job.vmax, p_slr(task, job, ctx.now))


def bid_random(seed: int, now: int, job_id: int, task_id: int) -> float:
    """Uniform in [0, 1), redrawn each instant, from a dedicated stream of
    the run seed keyed by (instant, job, task) so the draw is independent
    of queue iteration order and of every other random consumer."""
    h = hashlib.blake2b(struct.pack("<qqqq", seed, now, job_id, task_id),
                        digest_size=8).digest()
    return (int.from_bytes(h, "little") >> 11) * 2.0 ** -53


def succ_sums(job: Job, literal: bool = False) -> dict[int, int]:
    """Downstream resource per task: own core-ticks plus those of the tasks
    that transitively depend on it.

    Default counts each distinct transitive successor once, which is the
    physically single-counted resource. The literal recursive variant sums
    over immediate successors and double-counts shared descendants in a
    DAG; it is kept behind a flag for fidelity experiments.
    """
    out: dict[int, int] = {}
    order = sorted(job.tasks, key=lambda tid: job.tasks[tid].upward_rank)
    if literal:
        for tid in order:  # ascending rank puts successors before predecessors
            t = job.tasks[tid]
            out[tid] = t.duration * t.cores + sum(out[s] for s in t.succs)
        return out
    closure: dict[int, frozenset[int]] = {}
    for tid in order:
        t = job.tasks[tid]
        desc = frozenset().union(*(closure[s] | {s} for s in t.succs)) if t.succs else frozenset()
        closure[tid] = desc
        own = t.duration * t.cores
        out[tid] = own + sum(job.tasks[s].duration * job.tasks[s].cores for s in desc)
    return out


class Policy:
    """Base: a named bid rule with a fixed ordering sense.

    prepare() runs once per simulation with the full job list, letting a
    policy precompute per-task constants (succ sums) without touching the
    hot per-instant path.
    """
    name = "?"
    sense = "low"  # "low": smallest bid wins; "high": largest bid wins

    def prepare(self, jobs: list[Job]) -> None:
        pass

    def bid(self, task: Task, job: Job, ctx: QueueContext) -> float:
        raise NotImplementedError


class RandomPolicy(Policy):
    name, sense = "random", "high"

    def __init__(self, seed: int):
        self.seed = seed

    def bid(self, task, job, ctx):
        return bid_random(self.seed, ctx.now, job.id, task.id)


class FifoPolicy(Policy):
    name, sense = "fifo", "low"

    def bid(self, task, job, ctx):
        return bid_fifo(task, job)


class SrtfPolicy(Policy):
    name, sense = "srtf", "low"

    def bid(self, task, job, ctx):
        return bid_srtf(task)


class LrtfPolicy(Policy):
    name, sense = "lrtf", "high"

    def bid(self, task, job, ctx):
        return bid_lrtf(task)


class PslrPolicy(Policy):
    name, sense = "pslr", "high"

    def bid(self, task, job, ctx):
        return bid_pslr(task, job, ctx)


class EdfPolicy(Policy):
    name, sense = "edf", "low"

    def bid(self, task, job, ctx):
        return bid_edf(task, job)


class PvPolicy(Policy):
    name, sense = "pv", "high"

    def bid(self, task, job, ctx):
        return bid_pv(task, job, ctx)


class _SuccSumPolicy(Policy):
    def __init__(self, literal_succ_sum: bool = False):
        self.literal = literal_succ_sum
        self._ss: dict[tuple[int, int], int] = {}

    def prepare(self, jobs):
        for j in jobs:
            for tid, s in succ_sums(j, literal=self.literal).items():
                self._ss[(j.id, tid)] = s


class PvdPolicy(_SuccSumPolicy):
    name, sense = "pvd", "high"

    def bid(self, task, job, ctx):
        return bid_pvd(task, job, ctx, self._ss[(job.id, task.id)])


class PvdsqPolicy(_SuccSumPolicy):
    name, sense = "pvdsq", "high"

    def bid(self, task, job, ctx):
        return bid_pvdsq(task, job, ctx, self._ss[(job.id, task.id)])


class PvrPolicy(Policy):
    name, sense = "pvr", "low"

    def bid(self, task, job, ctx):
        return bid_pvr(task, job, ctx)


POLICY_NAMES = ["random", "fifo", "srtf", "lrtf", "pslr", "edf", "pv", "pvd", "pvdsq", "pvr"]


def make_policy(name: str, seed: int = 0, literal_succ_sum: bool = False) -> Policy:
    if name == "random":
        return RandomPolicy(seed)
    if name == "fifo":
        return FifoPolicy()
    if name == "srtf":
        return SrtfPolicy()
    if name == "lrtf":
        return LrtfPolicy()
    if name == "pslr":
        return PslrPolicy()
    if name == "edf":
        return EdfPolicy()
    if name == "pv":
        return PvPolicy()
    if name == "pvd":
        return PvdPolicy(literal_succ_sum)
    if name == "pvdsq":
        return PvdsqPolicy(literal_succ_sum)
    if name == "pvr":
        return PvrPolicy()
    raise ValueError(f"unknown policy {name!r}; expected one of {'|'.join(POLICY_NAMES)}")
