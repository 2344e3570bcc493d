"""
Fork-join pool over independent replicas.

Replica r always draws from RngStream(seed).replica(r), and results come
back ordered by replica index, so outputs do not depend on the worker count.
"""

import logging
from dataclasses import dataclass
from datetime import datetime
from multiprocessing import Pool
from typing import Callable, Dict, List, Optional

from ..errors import ConfigInvalidError
from ..flows.reduction import simulate_flow
from ..penalty.coupling import simulate_coupled
from ..penalty.penalized import simulate_penalized
from ..processes.process_config import ProcessConfig
from ..processes.simulators import simulate_averaged, simulate_constrained, simulate_mirror
from ..switching.rng import RngStream

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReplicaTask:
    """Everything one worker needs to simulate one replica."""

    process: str
    cfg: ProcessConfig
    k: int
    x_horizon: float
    seed: int
    replica: int


SIMULATORS: Dict[str, Callable[[ReplicaTask, RngStream], object]] = {
    "constrained": lambda task, rng: simulate_constrained(task.cfg, rng),
    "averaged": lambda task, rng: simulate_averaged(task.cfg, rng),
    "penalized": lambda task, rng: simulate_penalized(task.cfg, task.k, rng),
    "mirror": lambda task, rng: simulate_mirror(task.cfg, rng, task.x_horizon),
    "flow": lambda task, rng: simulate_flow(task.cfg, rng),
    "coupled": lambda task, rng: simulate_coupled(task.cfg, task.k, rng),
}


def simulate_replica(task: ReplicaTask):
    """Simulate one replica; module level so worker processes can unpickle it."""
    if task.process not in SIMULATORS:
        raise ConfigInvalidError(f"unknown process {task.process!r}")
    rng = RngStream(task.seed).replica(task.replica)
    return SIMULATORS[task.process](task, rng)


@dataclass
class PoolStats:
    """Timing of one pool run."""
    replicas: int = 0
    workers: int = 1
    start_time: Optional[datetime] = None
    end_time: Optional[datetime] = None

    @property
    def processing_time(self) -> float:
        """Wall time in seconds."""
        if self.start_time and self.end_time:
            return (self.end_time - self.start_time).total_seconds()
        return 0.0


def run_replicas(
    process: str,
    cfg: ProcessConfig,
    replicas: int,
    seed: int,
    workers: int = 1,
    k: int = 1,
    x_horizon: float = 1.0,
    stats: Optional[PoolStats] = None,
) -> List:
    """
    Simulate replicas 0..replicas-1 and return their results in replica order.

    Args:
        process: One of the SIMULATORS keys
        cfg: Process configuration shared by all replicas
        replicas: Number of replicas
        seed: Root seed
        workers: Worker processes; 1 runs everything in this process
        k: Penalty exponent (penalized and coupled only)
        x_horizon: Space horizon (mirror only)
        stats: Optional PoolStats filled with timing
    """
    if process not in SIMULATORS:
        raise ConfigInvalidError(f"unknown process {process!r}; known: {sorted(SIMULATORS)}")
    if replicas < 1 or workers < 1:
        raise ConfigInvalidError(f"need replicas >= 1 and workers >= 1, got {replicas} and {workers}")

    stats = stats if stats is not None else PoolStats()
    stats.replicas, stats.workers = replicas, min(workers, replicas)
    stats.start_time = datetime.now()
    tasks = [ReplicaTask(process, cfg, k, x_horizon, seed, r) for r in range(replicas)]
    logger.info("simulating %d %s replicas on %d worker(s)", replicas, process, stats.workers)

    if stats.workers == 1:
        results = [simulate_replica(task) for task in tasks]
    else:
        chunksize = max(1, replicas // (4 * stats.workers))
        with Pool(processes=stats.workers) as pool:
            # map keeps task order
            results = pool.map(simulate_replica, tasks, chunksize=chunksize)

    stats.end_time = datetime.now()
    logger.info("%d replicas done in %.2fs", replicas, stats.processing_time)
    return results
