# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Execution of independent replications, either sequentially or in a pool
of worker processes. Each replication derives its random numbers from its
own seed, so results do not depend on the number of workers or the order in
which replications complete.
"""

from typing import Any, Callable, List, Optional, Sequence, Tuple

import logging
import multiprocessing


logger = logging.getLogger(__name__)


def replicate(
    task: Callable, arguments: Sequence[Tuple], workers: Optional[int] = 1
) -> List[Any]:
    """Apply a task to each tuple of arguments. The result list is in the
    order of the argument list.

    Parameters
    ----------
    task: callable
        Module-level function (has to be picklable if workers > 1).
    arguments: list of tuple
        Positional arguments for each replication.
    workers: int, default=1
        Number of worker processes.

    Returns
    -------
    list
    """
    arguments = list(arguments)
    if workers is None or workers <= 1 or len(arguments) <= 1:
        return [task(*args) for args in arguments]
    logger.debug('running %d replications on %d workers', len(arguments), workers)
    with multiprocessing.Pool(min(workers, len(arguments))) as pool:
        return pool.starmap(task, arguments)
