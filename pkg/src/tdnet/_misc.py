# -*- coding: utf-8 -*-

import logging
import multiprocessing as mp
from collections.abc import Callable, Iterable
from typing import Any, Optional

import numpy as np

from .io import _update_logger


def check_ncores(ncores, logger: logging.Logger) -> Optional[int]:
    """Validate an 'ncores' argument; `None` means run in the calling process."""
    if ncores is None:
        return None
    try:
        ncores = int(ncores)
    except (ValueError, TypeError):
        raise ValueError(f"{ncores!r} is not a valid value for the 'ncores' argument!")
    max_cores = max(mp.cpu_count() - 1, 1)
    if ncores > max_cores:
        logger.info(
            f"Value {ncores} passed to the 'ncores' argument is too high "
            "and may result in performance penalty, setting it down to "
            f"{max_cores}."
        )
        ncores = max_cores
    if ncores < 2:
        return None
    return ncores


def run_parallel(
    func: Callable[[Any], Any],
    tasks: Iterable[Any],
    ncores: Optional[int] = None,
    logger: Optional[logging.Logger] = None,
) -> list:
    """Apply ``func`` to every task, possibly on several processes.

    Results always come back in task order, so that any reduction over them
    is independent of worker scheduling. ``func`` and the tasks must be
    picklable when ``ncores`` is at least 2.
    """
    if logger is None:
        logger = logging.getLogger(__name__)
    tasks = list(tasks)
    ncores = check_ncores(ncores, logger)
    if ncores is None or len(tasks) < 2:
        return [func(task) for task in tasks]
    ncores = min(ncores, len(tasks))
    logger.debug(f"Dispatching {len(tasks)} tasks to {ncores} processes.")
    # Records of forked workers carry their PID.
    show_pid = getattr(logger, "show_pid", False)
    _update_logger(logger, show_pid=True)
    try:
        with mp.Pool(ncores) as pool:
            return pool.map(func, tasks, chunksize=max(len(tasks) // (4 * ncores), 1))
    finally:
        _update_logger(logger, show_pid=show_pid)


def derive_seeds(seed: int, *keys: int, count: int) -> list[int]:
    """``count`` independent 32-bit seeds derived from ``seed`` and integer keys."""
    ss = np.random.SeedSequence([int(seed), *(int(k) for k in keys)])
    return [int(s.generate_state(1)[0]) for s in ss.spawn(count)]

