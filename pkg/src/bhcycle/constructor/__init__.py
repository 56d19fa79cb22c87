"""Constructive Hamiltonian cycles in faulty balanced hypercubes."""

from .core import (
    ConstructionFailed,
    ConstructionUnknown,
    PreconditionError,
    PreconditionReport,
    check_preconditions,
    construct,
    inductive_construct,
    lemma8_construct,
)
from .rings import StitchError, stitch
from .trace import CaseTrace, Event, Impasse, TraceEntry
