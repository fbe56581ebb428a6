from contextlib import ContextDecorator
import time
import resource

_who = getattr(resource, "RUSAGE_THREAD", resource.RUSAGE_SELF)

class log_rusage(ContextDecorator):
    """Logs CPU and wall time spent inside a block, plus throughput when
    n_items is given (e.g. Monte Carlo drops per second).  Works as a context
    manager or a decorator; a block that raises is logged at error level.
    """

    def __init__(self, logger, message="", n_items=None, item_name="drops"):
        self.logger = logger
        self.message = message
        self.n_items = n_items
        self.item_name = item_name

    def __enter__(self):
        self._start_wall = time.perf_counter()
        self._start_usage = resource.getrusage(_who)
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        wall = time.perf_counter() - self._start_wall
        usage = resource.getrusage(_who)
        user = usage.ru_utime - self._start_usage.ru_utime
        system = usage.ru_stime - self._start_usage.ru_stime
        rate = ""
        if self.n_items is not None and wall > 0:
            rate = "; {:.1f} {}/s".format(self.n_items / wall, self.item_name)
        level_log = self.logger.info if exc_type is None else self.logger.error
        level_log("%s (user %.3fs, system %.3fs, wall %.3fs%s)", self.message, user, system, wall, rate)
        return False
