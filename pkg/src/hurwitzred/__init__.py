"""Components, cusps and reduction mod p of Hurwitz spaces of 4-point G-covers."""

__version__ = "0.1.0"


class InconsistencyError(RuntimeError):
    """An internal invariant failed; the computed data cannot be trusted."""
