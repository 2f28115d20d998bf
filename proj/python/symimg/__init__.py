"""Symbolic images of dynamical systems.

Build directed graphs over cell coverings, localize the chain recurrent set,
encode and shadow orbits, refine consistent simple-flow chains and compute
averaging spectra. The heavy lifting lives in the compiled ``_symimg`` module.
"""

from ._symimg import (
    CapabilityError,
    CapError,
    ConsistencyError,
    DomainEscapeError,
    Error,
    ExhaustionError,
    LineageError,
    Localization,
    Map,
    NotCoveredError,
    ParseError,
    PreconditionError,
    StructuralError,
    SymbolicImage,
    build,
    check,
    decompose,
    encode,
    is_admissible,
    is_flow,
    localize,
    mean_cycles,
    orbit,
    project_flow,
    refine_to_ergodic,
    shadow,
    spectrum,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
