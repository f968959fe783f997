"""Thread-parallel sweeps over batches of points.

Work is always cut into chunks of ``CHUNK`` rows, whatever the thread count,
and results are reassembled in chunk order.  The thread count therefore
changes wall time only, never a single output bit.
"""

import threading
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

import numpy as np

CHUNK = 256

_state = threading.local()
_default_threads = 1


def get_threads():
    return getattr(_state, "threads", _default_threads)


def set_threads(n):
    global _default_threads
    if int(n) < 1:
        raise ValueError("thread count must be >= 1")
    _default_threads = int(n)


@contextmanager
def threads(n):
    old = getattr(_state, "threads", None)
    _state.threads = int(n)
    try:
        yield
    finally:
        if old is None:
            del _state.threads
        else:
            _state.threads = old


def sweep(fn, X, axis=0):
    """``fn`` applied to fixed-size row chunks of ``X``, concatenated in order along ``axis``."""
    if len(X) <= CHUNK:
        return fn(X)
    chunks = [X[s:s + CHUNK] for s in range(0, len(X), CHUNK)]
    n = get_threads()
    if n == 1:
        parts = [fn(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            parts = list(pool.map(fn, chunks))
    return np.concatenate(parts, axis=axis)
