"""Receipt-free e-voting simulator built on key-private proxy re-encryption."""

from .groups import (
    BACKEND,
    CURVE_ORDER,
    GroupContext,
    OpCounter,
    setup_group,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CURVE_ORDER",
    "GroupContext",
    "OpCounter",
    "setup_group",
    "__version__",
]
