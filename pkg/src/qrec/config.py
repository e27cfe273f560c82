"""Thresholds shared by the finite searches."""

from __future__ import annotations

import contextlib
from dataclasses import dataclass, fields


@dataclass
class Limits:
    max_total_dim: int = 64
    # largest p^d searched exhaustively in a Hom space
    enum_threshold: int = 2**20
    random_trials: int = 4096
    # largest universe handed to subset enumeration
    enumeration_cap: int = 16
    seed: int = 20240229


LIMITS = Limits()


@contextlib.contextmanager
def override(**kw):
    """Temporarily change fields of :data:`LIMITS`."""
    names = {f.name for f in fields(Limits)}
    bad = set(kw) - names
    if bad:
        raise TypeError(f"unknown limits: {sorted(bad)}")
    old = {k: getattr(LIMITS, k) for k in kw}
    for k, v in kw.items():
        setattr(LIMITS, k, v)
    try:
        yield LIMITS
    finally:
        for k, v in old.items():
            setattr(LIMITS, k, v)
