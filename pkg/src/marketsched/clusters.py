"""Kinded clusters of cores behind a central router.

Clusters hold an occupancy ledger over discrete time; inter-cluster data
transfers pay the producing task's duration times CCR, rounded up to whole
ticks. Transfer delay is a property of crossing the router, so it applies
between any two distinct clusters, same kind or not.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .model import Job, Kind, Task, transfer_ticks


@dataclass
class ClusterSpec:
    kind: Kind
    cores: int


@dataclass
class PlatformSpec:
    clusters: list[ClusterSpec]
    ccr: float = 0.2

    def __post_init__(self):
        if self.ccr < 0:
            raise ValueError(f"ccr must be non-negative, got {self.ccr}")

    @property
    def ccr_frac(self) -> Fraction:
        # exact decimal semantics for the configured ratio, so ceil() of
        # duration * ccr never trips on float representation error
        return Fraction(str(self.ccr))

    @property
    def total_cores(self) -> int:
        return sum(c.cores for c in self.clusters)

    def kinds(self) -> set[Kind]:
        return {c.kind for c in self.clusters}

    @classmethod
    def from_dict(cls, d: dict) -> "PlatformSpec":
        specs = [ClusterSpec(kind=int(c["kind"]), cores=int(c["cores"])) for c in d["clusters"]]
        return cls(clusters=specs, ccr=float(d.get("ccr", 0.2)))

    def to_dict(self) -> dict:
        return {"ccr": self.ccr,
                "clusters": [{"kind": c.kind, "cores": c.cores} for c in self.clusters]}


# The paper-scale default: 4000 cores in four 1000-core clusters, three of
# Kind1 and one of Kind2, CCR 0.2.
def default_platform(cores_per_cluster: int = 1000) -> PlatformSpec:
    return PlatformSpec(clusters=[ClusterSpec(1, cores_per_cluster),
                                  ClusterSpec(1, cores_per_cluster),
                                  ClusterSpec(1, cores_per_cluster),
                                  ClusterSpec(2, cores_per_cluster)],
                        ccr=0.2)


@dataclass
class Cluster:
    """Mutable occupancy ledger for one cluster during a simulation run."""
    id: int
    kind: Kind
    total_cores: int
    free_cores: int = field(init=False)
    running: dict = field(init=False)  # (job id, task id) -> (finish tick, cores)

    def __post_init__(self):
        self.free_cores = self.total_cores
        self.running = {}

    def place(self, job_id: int, task: Task, now: int) -> int:
        """Start a task immediately; returns its finish tick.

        Violations are simulator bugs, not runtime events: the auctioneer
        only hands over tasks that are guaranteed to fit.
        """
        assert task.kind == self.kind, f"kind mismatch on cluster {self.id}"
        assert self.free_cores >= task.cores, f"oversubscription on cluster {self.id}"
        finish = now + task.duration
        self.free_cores -= task.cores
        self.running[(job_id, task.id)] = (finish, task.cores)
        return finish

    def release(self, job_id: int, task_id: int) -> None:
        finish, cores = self.running.pop((job_id, task_id))
        self.free_cores += cores
        assert self.free_cores <= self.total_cores


def build_clusters(spec: PlatformSpec) -> list[Cluster]:
    return [Cluster(id=i, kind=c.kind, total_cores=c.cores)
            for i, c in enumerate(spec.clusters)]


def data_ready_time(task: Task, job: Job, placements: dict[int, tuple[int, int]],
                    clusters: list[Cluster], ccr: Fraction) -> int:
    """Tick at which a task's inputs are available and it may join the queue.

    placements maps finished dep task ids to (cluster id, finish tick).
    If every dep ran on one cluster that could also host this task, the
    data is already local and readiness is the latest finish. Otherwise a
    transfer through the router is unavoidable for at least one input, and
    the conservative broadcast rule charges every dep its transfer delay,
    keeping readiness a single tick for the single global queue.
    """
    if not task.deps:
        return job.arrive
    dep_clusters = {placements[d][0] for d in task.deps}
    if len(dep_clusters) == 1:
        (cid,) = dep_clusters
        if clusters[cid].kind == task.kind:
            return max(placements[d][1] for d in task.deps)
    return max(placements[d][1] + transfer_ticks(job.tasks[d].duration, ccr)
               for d in task.deps)
