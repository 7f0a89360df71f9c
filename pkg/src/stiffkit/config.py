"""Process-wide limits for constructors and enumeration loops."""

from __future__ import annotations

import os

DEFAULT_SIZE_CAP = 2**22

ENV_SIZE_CAP = "STIFFKIT_SIZE_CAP"


class SizeCapExceeded(ValueError):
    """Raised when a construction or enumeration would exceed the cap."""


def size_cap() -> int:
    """Current cap on generated point counts and enumeration sizes."""
    raw = os.environ.get(ENV_SIZE_CAP)
    if raw is None:
        return DEFAULT_SIZE_CAP
    cap = int(raw)
    if cap <= 0:
        raise ValueError(f"{ENV_SIZE_CAP} must be positive, got {raw!r}")
    return cap


def check_size(n: int, what: str) -> None:
    cap = size_cap()
    if n > cap:
        raise SizeCapExceeded(
            f"{what} needs {n} items, above the cap {cap}"
            f" (raise {ENV_SIZE_CAP} to override)"
        )
