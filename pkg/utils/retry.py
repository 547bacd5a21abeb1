import logging
import os
import traceback
from typing import Optional

import tenacity

SEED_ENV = "CTXFORGE_SEED"


def after_func(retry_state: tenacity.RetryCallState) -> None:
    if retry_state.outcome.failed:
        exc = retry_state.outcome.exception()
        name = getattr(retry_state.fn, "__name__", "construction")
        logging.warning(f"Retrying {name} due to {repr(exc)} (Attempt {retry_state.attempt_number})")
        logging.debug("".join(traceback.format_exception(type(exc), exc, exc.__traceback__)))


def attempt_seed(seed: int, attempt: int) -> int:
    """Seed for a retry attempt; attempt 1 keeps the caller's seed."""
    return seed if attempt <= 1 else (seed * 1_000_003 + attempt) % (2**63)


def resolve_seed(explicit: Optional[int] = None) -> Optional[int]:
    """--seed wins, then CTXFORGE_SEED; None leaves the configured seed in place."""
    if explicit is not None:
        return explicit
    value = os.environ.get(SEED_ENV)
    if value is None or not value.strip():
        return None
    return int(value)
