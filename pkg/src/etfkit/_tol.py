from __future__ import annotations

import os

DEFAULT_ENTRY_TOL = 1e-9


def entry_tol() -> float:
    """Entrywise tolerance; ``ETFKIT_TOL`` overrides the default at call time."""
    raw = os.environ.get("ETFKIT_TOL")
    if not raw:
        return DEFAULT_ENTRY_TOL
    value = float(raw)
    if not value > 0:
        raise ValueError(f"ETFKIT_TOL must be positive, got {raw!r}")
    return value
