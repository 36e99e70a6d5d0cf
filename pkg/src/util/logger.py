import time
from functools import wraps

from loguru import logger

from infra.env import TIMING_LOG_FILE

template = "{} — {} — {}"

timing_logger = logger.bind(timing=True)

if TIMING_LOG_FILE:
    logger.add(
        TIMING_LOG_FILE,
        format="{message}",
        filter=lambda record: record["extra"].get("timing", False),
    )


def log(message):
    def wrapper(func):
        @wraps(func)
        def wrapped(*args, **kwargs):
            start_time = time.time()
            result = func(*args, **kwargs)
            end_time = time.time()
            timing_logger.info(template.format(f"{round(end_time - start_time, 3)}s", message, func.__name__))
            return result
        return wrapped
    return wrapper
