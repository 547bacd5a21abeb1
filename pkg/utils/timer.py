import asyncio
import logging
import time
from functools import wraps


def _stamp(t: float) -> str:
    return time.strftime("%Y-%m-%d %H:%M:%S", time.localtime(t))


class Timer:
    def __init__(
        self,
        prefix: str = "Start at {start_time}",
        postfix: str = "End at {end_time}, took {duration} seconds.",
        level: int = logging.INFO,
    ):
        self.prefix = prefix
        self.postfix = postfix
        self.level = level
        self.duration = 0.0

    def _begin(self) -> float:
        start_time = time.time()
        logging.log(self.level, self.prefix.replace("{start_time}", _stamp(start_time)))
        return start_time

    def _end(self, start_time: float) -> None:
        end_time = time.time()
        self.duration = end_time - start_time
        postfix = self.postfix.replace("{end_time}", _stamp(end_time)).replace("{duration}", f"{self.duration:.2f}")
        logging.log(self.level, postfix)

    def __call__(self, func):
        if asyncio.iscoroutinefunction(func):
            @wraps(func)
            async def async_wrapper(*args, **kwargs):
                start_time = self._begin()
                result = await func(*args, **kwargs)
                self._end(start_time)
                return result
            return async_wrapper

        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = self._begin()
            result = func(*args, **kwargs)
            self._end(start_time)
            return result
        return wrapper

    def __enter__(self):
        self.start_time = self._begin()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type is not None:
            return False
        self._end(self.start_time)
        return False
