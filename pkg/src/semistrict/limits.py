"""Global size caps.

The caps are plain module state so that deep constructions do not need to
thread them through every call.  Use :func:`caps` to override temporarily.
"""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, fields

from .errors import SizeCapExceeded


@dataclass
class Limits:
    table_cap: int = 256          # exhaustive O(n^3) checks
    element_cap: int = 10**7      # elements or pairs enumerated by one construction
    iso_cap: int = 256            # largest order handed to the isomorphism search
    retraction_cap: int = 16      # largest |Q| tried by the retraction search
    trunc: int = 5                # default truncation level


LIMITS = Limits()


@contextmanager
def caps(**overrides):
    old = {f.name: getattr(LIMITS, f.name) for f in fields(LIMITS)}
    try:
        for k, v in overrides.items():
            if k not in old:
                raise TypeError(f"unknown cap {k!r}")
            setattr(LIMITS, k, int(v))
        yield LIMITS
    finally:
        for k, v in old.items():
            setattr(LIMITS, k, v)


def check_elements(count, what="carrier"):
    if count > LIMITS.element_cap:
        raise SizeCapExceeded(
            f"{what} would have {count} elements, cap is {LIMITS.element_cap}",
            size=int(count), cap=LIMITS.element_cap)
