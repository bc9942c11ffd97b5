from shadows.services.recursion import ShadowTable, build_table
import logging

logger = logging.getLogger(__name__)


class SynchronousTask:
    """
    Runs a task immediately in the calling thread, with a Celery-like ``.delay()``.
    Families are independent, so a queue-backed runner can replace this without
    changing callers; results are merged in j order either way.
    """
    def __init__(self, task_func):
        self.task_func = task_func

    def delay(self, *args, **kwargs):
        try:
            return self.task_func(*args, **kwargs)
        except Exception as e:
            logger.error(f"Task {self.task_func.__name__} failed: {e}")
            raise


def run_family_build(geometry, kind, j, max_h, max_f, max_order=None, layout=None):
    """Solve one (kind, j) family."""
    return build_table(geometry, kind, [j], max_h, max_f, max_order, layout=layout)


def run_table_build(geometry, kind, j_list, max_h, max_f, max_order=None, layout=None):
    """Solve each requested family independently and merge them deterministically."""
    table = ShadowTable(geometry)
    for j in sorted(set(j_list)):
        table.merge(build_family.delay(geometry, kind, j, max_h, max_f, max_order, layout))
    logger.info(f"Table for {geometry} {kind} j={sorted(set(j_list))}: {len(table)} entries")
    return table


build_family = SynchronousTask(run_family_build)
build_tables = SynchronousTask(run_table_build)
