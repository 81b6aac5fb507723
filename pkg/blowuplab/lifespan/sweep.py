"""
Lifespan sweeps over ε.

Each ε is run at dr and dr/2 in one worker; the record keeps the dr result
and is marked converged when the two agree within ``convergence_tol``.
Horizons are bootstrapped: the two largest ε use the base horizon and the
rest use a multiple of the lifespan predicted by the two-point fit through
those first results.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from blowuplab.lifespan.exponents import predicted_exponent
from blowuplab.schema.geometry import ExteriorGeometry
from blowuplab.schema.records import LifespanRecord
from blowuplab.specfun.base import DomainError
from blowuplab.wavesim.data import InitialData
from blowuplab.wavesim.solver import RadialGrid, SolverConfig, run_until_blowup

logger = logging.getLogger(__name__)

BOOTSTRAP_RUNS = 2


@dataclass(frozen=True)
class SweepPlan:
    """
    Everything shared by the runs of a sweep.

    :param geom: Exterior geometry; ``support_radius_r0`` sizes the grids.
    :param data: Data template; its ε is replaced per run.
    :param config: Solver parameters; ``t_horizon`` is the base horizon.
    :param dr: Coarse grid spacing.
    :param horizon_factor: Multiple of the provisional lifespan used as horizon.
    :param convergence_tol: Relative dr vs dr/2 agreement needed for ``converged``.
    """

    geom: ExteriorGeometry
    data: InitialData
    config: SolverConfig
    dr: float
    horizon_factor: float = 3.0
    convergence_tol: float = 0.05


@dataclass(frozen=True)
class _Task:
    epsilon: float
    t_horizon: float
    plan: SweepPlan


def _single_run(
    plan: SweepPlan, epsilon: float, config: SolverConfig, dr: float
) -> LifespanRecord:
    grid = RadialGrid.for_horizon(
        plan.geom.support_radius_r0,
        config.t_horizon,
        dr,
        config.cfl_factor,
        plan.geom.dim_n,
    )
    return run_until_blowup(grid, plan.data.with_epsilon(epsilon), config)


def _run_task(task: _Task) -> LifespanRecord:
    """Coarse and refined run for one ε; failures end up in ``error``."""
    plan = task.plan
    config = replace(plan.config, t_horizon=task.t_horizon)
    try:
        coarse = _single_run(plan, task.epsilon, config, plan.dr)
        fine = _single_run(plan, task.epsilon, config, 0.5 * plan.dr)
    except (ValueError, MemoryError) as exc:
        logger.warning("run eps=%.6g failed: %s", task.epsilon, exc)
        return LifespanRecord(
            epsilon=task.epsilon,
            t_num=None,
            dr=plan.dr,
            dt=config.cfl_factor * plan.dr,
            threshold=config.blowup_threshold,
            t_horizon=config.t_horizon,
            dim_n=plan.geom.dim_n,
            p_exponent=config.p_exponent,
            error=f"{type(exc).__name__}: {exc}",
        )

    converged = False
    if coarse.t_num is not None and fine.t_num is not None:
        converged = abs(coarse.t_num - fine.t_num) <= plan.convergence_tol * fine.t_num
    logger.info(
        "eps=%.6g t_num=%s refined=%s converged=%s",
        task.epsilon,
        coarse.t_num,
        fine.t_num,
        converged,
    )
    return coarse.model_copy(update={"converged": converged, "t_num_refined": fine.t_num})


def _run_all(tasks: Sequence[_Task], jobs: int) -> list[LifespanRecord]:
    if jobs <= 1 or len(tasks) <= 1:
        return [_run_task(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_task, tasks))


def provisional_horizon(
    finished: Iterable[LifespanRecord], plan: SweepPlan, epsilon: float
) -> float:
    """
    ``horizon_factor`` times the lifespan extrapolated to ``epsilon``.

    Uses the two-point line through finished finite records when its slope
    is negative, else the predicted slope anchored at one finite record.
    Never below the base horizon.
    """
    base = plan.config.t_horizon
    finite = [r for r in finished if r.t_num is not None and r.error is None]
    if not finite:
        return base
    anchor = finite[0]
    slope: float | None = None
    if len(finite) >= 2 and finite[0].epsilon != finite[1].epsilon:
        a, b = finite[0], finite[1]
        slope = math.log(b.t_num / a.t_num) / math.log(b.epsilon / a.epsilon)
    if slope is None or not slope < 0.0:
        try:
            slope = -predicted_exponent(plan.geom.dim_n, plan.config.p_exponent)
        except DomainError:
            return base
    estimate = anchor.t_num * (epsilon / anchor.epsilon) ** slope
    return max(base, plan.horizon_factor * estimate)


def sweep(
    epsilons: Sequence[float], plan: SweepPlan, *, jobs: int = 1
) -> list[LifespanRecord]:
    """
    Run every ε and return the records in the input order.

    :param epsilons: Amplitudes ε > 0.
    :type epsilons: collections.abc.Sequence[float]
    :param plan: Shared data, solver and grid settings.
    :type plan: SweepPlan
    :param jobs: Worker processes; 1 runs in-process.
    :type jobs: int
    :return: One record per ε; failures carry ``error`` instead of aborting.
    :rtype: list[blowuplab.schema.records.LifespanRecord]
    :raises ValueError: If an ε is not positive.
    """
    if any(not eps > 0.0 for eps in epsilons):
        raise ValueError("sweep amplitudes must be positive")
    order = sorted(range(len(epsilons)), key=lambda i: -epsilons[i])
    head, tail = order[:BOOTSTRAP_RUNS], order[BOOTSTRAP_RUNS:]

    base = plan.config.t_horizon
    results: dict[int, LifespanRecord] = {}
    head_records = _run_all([_Task(epsilons[i], base, plan) for i in head], jobs)
    results.update(zip(head, head_records))

    tail_tasks = [
        _Task(epsilons[i], provisional_horizon(head_records, plan, epsilons[i]), plan)
        for i in tail
    ]
    for task in tail_tasks:
        logger.debug("eps=%.6g horizon %.6g", task.epsilon, task.t_horizon)
    results.update(zip(tail, _run_all(tail_tasks, jobs)))

    ordered = [results[i] for i in range(len(epsilons))]
    check_monotone(ordered)
    return ordered


def check_monotone(records: Sequence[LifespanRecord]) -> bool:
    """
    Warn when a smaller ε produced a shorter lifespan.

    :return: ``True`` when finite lifespans are nondecreasing as ε decreases.
    """
    finite = sorted(
        (r for r in records if r.t_num is not None), key=lambda r: r.epsilon, reverse=True
    )
    monotone = True
    for larger, smaller in zip(finite, finite[1:]):
        if smaller.t_num < larger.t_num and smaller.epsilon < larger.epsilon:
            logger.warning(
                "lifespan decreased from %.6g (eps=%.6g) to %.6g (eps=%.6g)",
                larger.t_num,
                larger.epsilon,
                smaller.t_num,
                smaller.epsilon,
            )
            monotone = False
    return monotone
