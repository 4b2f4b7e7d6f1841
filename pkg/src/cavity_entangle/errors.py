"""Exception and warning types raised across the package."""

from __future__ import annotations


class CutoffError(ValueError):
    """Fock cutoff is invalid or too small for the requested cavity preparation.

    ``minimal_cutoff`` carries the smallest adequate number of Fock levels.
    """

    def __init__(self, message: str, minimal_cutoff: int | None = None):
        super().__init__(message)
        self.minimal_cutoff = minimal_cutoff


class ResonanceError(ValueError):
    """Cavity too close to the qubit transition for the dispersive expansion."""


class DegeneracyError(ValueError):
    """Degenerate unperturbed levels are coupled by the interaction."""

    def __init__(self, message: str, pairs=()):
        super().__init__(message)
        self.pairs = list(pairs)


class ShapeError(ValueError):
    """Operand lives on the wrong Hilbert space."""


class HermiticityError(ValueError):
    pass


class StateError(ValueError):
    """Vector or matrix violates the state invariants (norm, trace, positivity)."""


class ConsistencyError(RuntimeError):
    """A computed figure of merit left its allowed range by more than round-off."""


class RegimeWarning(UserWarning):
    """Parameters are valid but outside the regime where the expansion is accurate."""
