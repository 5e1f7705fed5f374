"""Working precision shared by the real-valued parts of the package.

All mpmath evaluations run inside ``workdps()``; the CLI raises the digit
count through ``precision()``.  Values are returned as ``mpf`` and keep their
mantissa, but arithmetic done by the caller outside a matching context rounds
to the caller's ``mp.dps``.
"""
from __future__ import annotations

import contextvars
from contextlib import contextmanager

from mpmath import mp

DEFAULT_DPS = 50

_dps = contextvars.ContextVar("fermipart_dps", default=DEFAULT_DPS)


def get_dps() -> int:
    return _dps.get()


@contextmanager
def precision(dps: int):
    if dps < 30:
        raise ValueError(f"precision must be at least 30 digits, got {dps}")
    token = _dps.set(int(dps))
    try:
        yield
    finally:
        _dps.reset(token)


def workdps():
    return mp.workdps(_dps.get())
