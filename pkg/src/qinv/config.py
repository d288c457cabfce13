"""Numerical tolerances shared by every module.

The defaults are the values the test-suite pins; pass a modified copy
(``dataclasses.replace(DEFAULT, ...)``) where a caller needs something else.
"""
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    unitary: float = 1e-8
    hermitian: float = 1e-8
    rotation: float = 1e-10
    normalized: float = 1e-10
    commute: float = 1e-7
    cluster_gap: float = 1e-6
    kron_rank: float = 1e-6
    kron_residual: float = 1e-8
    local_gate: float = 1e-7
    gate_equiv: float = 1e-6
    spectrum_pairing: float = 1e-6
    witness: float = 1e-7
    hull: float = 1e-9
    inequality: float = 1e-9
    g1_phase_floor: float = 1e-12
    state_equiv: float = 1e-10
    degeneracy: float = 1e-7
    trace: float = 1e-8
    positivity: float = 1e-8
    root_mismatch: float = 1e-10


DEFAULT = Tolerances()
