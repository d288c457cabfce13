"""Local-equivalence invariants for two-qubit gates and states."""
from .config import DEFAULT, Tolerances
from .errors import FactorizationFailure, InputError, NotEquivalent, NotUnitary, NumericalError, QinvError
from .gates import (
    CNOT,
    IDENTITY,
    NAMED_GATES,
    SQRT_SWAP,
    SWAP,
    EquivalenceWitness,
    GateInvariants,
    ent_form,
    gates_equivalent,
    is_local_gate,
    is_perfect_entangler,
    makhlin_invariants,
    perfect_entangler_inequality,
    synthesize_witness,
)
from .linalg import LocalGatePair, kron, kron_factor
from .pulse import (
    HamiltonianFamily,
    SynthesisResult,
    entangler_windows,
    evolve,
    invariant_curve,
    josephson_alpha,
    solve_time,
)
from .states import (
    PauliForm,
    StateInvariants,
    canonicalize_state,
    fixture_pair,
    invariants18,
    pauli_compose,
    pauli_decompose,
    states_equivalent,
)

__version__ = "0.1.0"

__all__ = [
    "CNOT",
    "DEFAULT",
    "EquivalenceWitness",
    "FactorizationFailure",
    "GateInvariants",
    "HamiltonianFamily",
    "IDENTITY",
    "InputError",
    "LocalGatePair",
    "NAMED_GATES",
    "NotEquivalent",
    "NotUnitary",
    "NumericalError",
    "PauliForm",
    "QinvError",
    "SQRT_SWAP",
    "SWAP",
    "StateInvariants",
    "SynthesisResult",
    "Tolerances",
    "canonicalize_state",
    "ent_form",
    "entangler_windows",
    "evolve",
    "fixture_pair",
    "gates_equivalent",
    "invariant_curve",
    "invariants18",
    "is_local_gate",
    "is_perfect_entangler",
    "josephson_alpha",
    "kron",
    "kron_factor",
    "makhlin_invariants",
    "pauli_compose",
    "pauli_decompose",
    "perfect_entangler_inequality",
    "solve_time",
    "states_equivalent",
    "synthesize_witness",
]
