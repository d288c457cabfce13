"""Local-equivalence classification of two-qubit gates.

Gates are 4x4 unitaries in the standard basis |00>, |01>, |10>, |11>.  In the
Bell basis defined by :data:`Q` local gates with unit determinant become real
orthogonal matrices, and the class of a gate ``M`` is encoded by the
spectrum of the symmetric unitary ``m = M_B^T M_B``.
"""
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import FactorizationFailure, NotAProduct, NotEquivalent, NotNormalized
from .linalg import (
    LocalGatePair,
    check_unitary,
    kron_factor,
    max_abs,
    simdiag_commuting_symmetric,
    wrap_phase,
)

TWO_PI = 2 * np.pi

Q = np.array(
    [
        [1, 0, 0, 1j],
        [0, 1j, 1, 0],
        [0, 1j, -1, 0],
        [1, 0, 0, -1j],
    ],
    dtype=complex,
) / np.sqrt(2)

IDENTITY = np.eye(4, dtype=complex)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)
# the square root of SWAP reached by exp(+i t sigma.sigma / 4) at t = pi/2
SQRT_SWAP = np.array(
    [
        [1, 0, 0, 0],
        [0, (1 - 1j) / 2, (1 + 1j) / 2, 0],
        [0, (1 + 1j) / 2, (1 - 1j) / 2, 0],
        [0, 0, 0, 1],
    ],
    dtype=complex,
)

NAMED_GATES = {
    "identity": IDENTITY,
    "cnot": CNOT,
    "swap": SWAP,
    "sqrt-swap": SQRT_SWAP,
}


@dataclass(frozen=True)
class GateInvariants:
    """Complete local-class label of a two-qubit gate.

    ``g1`` and ``g2`` are invariant under local gates and under a global
    phase.  ``spectrum`` holds the eigenvalues of the det-normalised ``m``
    sorted by phase in [0, 2*pi); it is defined only up to an overall sign,
    because the fourth root used for normalisation is ambiguous by ``i**k``.
    """

    g1: complex
    g2: float
    spectrum: np.ndarray

    @property
    def phases(self) -> np.ndarray:
        return np.mod(np.angle(self.spectrum), TWO_PI)


@dataclass(frozen=True)
class EquivalenceWitness:
    """``target = exp(i*phase) * left.matrix() @ source @ right.matrix()``."""

    left: LocalGatePair
    right: LocalGatePair
    phase: float

    def apply(self, source) -> np.ndarray:
        return np.exp(1j * self.phase) * self.left.matrix() @ np.asarray(source) @ self.right.matrix()


def to_bell(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    return Q.conj().T @ m @ Q


def _to_bell_batch(us):
    return np.einsum("ji,...jk,kl->...il", Q.conj(), us, Q)


def from_bell(mb) -> np.ndarray:
    return Q @ np.asarray(mb, dtype=complex) @ Q.conj().T


def is_local_gate(m, tol: Tolerances = DEFAULT) -> bool:
    """True when ``m`` is a global phase times ``kron(W1, W2)``."""
    m = check_unitary(m, tol.unitary)
    mb = to_bell(m)
    k = np.argmax(np.abs(mb))
    rotated = mb * np.exp(-1j * np.angle(mb.flat[k]))
    if max_abs(rotated.imag) > tol.local_gate:
        return False
    # real orthogonal with det -1 (SWAP, for instance) is not local
    return bool(np.linalg.det(rotated.real) > 0)


def _invariants_arrays(us):
    """G1, G2 and det-normalised eigenphases for a stack of unitaries."""
    us = np.asarray(us, dtype=complex)
    mb = _to_bell_batch(us)
    m = np.swapaxes(mb, -1, -2) @ mb
    det = np.linalg.det(us)
    tr = np.trace(m, axis1=-2, axis2=-1)
    tr2 = np.trace(m @ m, axis1=-2, axis2=-1)
    g1 = tr**2 / (16 * det)
    g2 = (tr**2 - tr2) / (4 * det)
    m_norm = m / np.sqrt(det)[..., None, None]
    lam = np.linalg.eigvals(m_norm)
    lam = lam / np.abs(lam)
    phases = np.sort(np.mod(np.angle(lam), TWO_PI), axis=-1)
    return g1, g2, phases


def makhlin_invariants(m, tol: Tolerances = DEFAULT) -> GateInvariants:
    """Local invariants ``(G1, G2)`` and the normalised spectrum of ``M_B^T M_B``.

    Args:
        m: 4x4 unitary with any determinant.

    Returns:
        GateInvariants with ``G1 = tr^2(m) / (16 det M)`` and
        ``G2 = (tr^2(m) - tr(m^2)) / (4 det M)``.

    Raises:
        NotUnitary: input is not a 4x4 unitary.
    """
    m = check_unitary(m, tol.unitary)
    g1, g2, phases = _invariants_arrays(m)
    return GateInvariants(complex(g1), float(g2.real), np.exp(1j * phases))


def gates_equivalent(a, b, tol: float = DEFAULT.gate_equiv) -> bool:
    ia = makhlin_invariants(a)
    ib = makhlin_invariants(b)
    return abs(ia.g1 - ib.g1) <= tol and abs(ia.g2 - ib.g2) <= tol


def _circular_max_gap(phases):
    phases = np.sort(np.asarray(phases), axis=-1)
    wrap = phases[..., :1] + TWO_PI - phases[..., -1:]
    gaps = np.concatenate([np.diff(phases, axis=-1), wrap], axis=-1)
    return gaps.max(axis=-1)


def hull_margin(phases):
    """``pi - (largest circular gap)``; zero lies in the hull iff this is >= 0."""
    return np.pi - _circular_max_gap(phases)


def is_perfect_entangler(m, tol: Tolerances = DEFAULT) -> bool:
    """Convex hull of the eigenvalues of ``m`` contains the origin.

    Gap exactly pi (CNOT, sqrt(SWAP)) counts as perfect.
    """
    inv = makhlin_invariants(m, tol)
    return bool(hull_margin(inv.phases) >= -tol.hull)


def perfect_entangler_inequality(inv: GateInvariants, tol: Tolerances = DEFAULT) -> bool:
    """Perfect-entangler test written in terms of ``G1 = |G1| e^{i gamma}`` and ``G2``.

    Evaluates ``sin^2(gamma) <= 4|G1| <= 1`` and
    ``cos(gamma) (cos(gamma) - G2) >= 0``.  When ``|G1|`` is too small for
    ``gamma`` to be defined, the hull test on ``inv.spectrum`` decides.
    """
    a = abs(inv.g1)
    if a <= tol.g1_phase_floor:
        return bool(hull_margin(inv.phases) >= -tol.hull)
    gamma = np.angle(inv.g1)
    eps = tol.inequality
    first = np.sin(gamma) ** 2 <= 4 * a + eps and 4 * a <= 1 + eps
    second = np.cos(gamma) * (np.cos(gamma) - inv.g2) >= -eps
    return bool(first and second)


def ent_form(psi, tol: Tolerances = DEFAULT) -> complex:
    """``psi00 psi11 - psi01 psi10`` for a normalised two-qubit pure state."""
    psi = np.asarray(psi, dtype=complex).reshape(4)
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > tol.normalized:
        raise NotNormalized(f"state norm is {norm:.12g}, expected 1")
    return complex(psi[0] * psi[3] - psi[1] * psi[2])


def _det_normalized(u):
    root = np.linalg.det(u) ** 0.25
    return u / root, root


def _match_spectra(dm, dl, tol):
    """Permutation ``perm`` with ``dl[j] ~ dm[perm[j]]``, or None."""
    perm = []
    used = set()
    for val in dl:
        dist = [abs(val - x) if k not in used else np.inf for k, x in enumerate(dm)]
        k = int(np.argmin(dist))
        if dist[k] > tol:
            return None
        used.add(k)
        perm.append(k)
    return perm


def _real_eigenbasis(msym, tol):
    basis, dx, dy = simdiag_commuting_symmetric(msym.real, msym.imag, tol)
    return basis, dx + 1j * dy


def synthesize_witness(m, l, tol: Tolerances = DEFAULT) -> EquivalenceWitness:
    """Local gates turning ``m`` into ``l``.

    Finds ``U1 = kron(W1, W2)``, ``U2 = kron(W3, W4)`` and a phase with
    ``l = exp(i*phase) U1 @ m @ U2``.  Works in the Bell basis: both gates
    are normalised to unit determinant, ``m_B^T m_B`` and ``l_B^T l_B`` are
    brought to diagonal form by real rotations, the eigenvalues are paired,
    and the left factor follows as ``l_B O^T m_B^{-1}``.

    Raises:
        NotEquivalent: the invariants of ``m`` and ``l`` differ.
        FactorizationFailure: a factor that should be local is not, or the
            reconstruction misses ``l`` (numerical breakdown).
    """
    m = check_unitary(m, tol.unitary, "source gate")
    l = check_unitary(l, tol.unitary, "target gate")
    if not gates_equivalent(m, l, tol.gate_equiv):
        raise NotEquivalent("gates are not locally equivalent")

    m1, root_m = _det_normalized(m)
    l1, root_l = _det_normalized(l)
    lb = to_bell(l1)
    lsym = lb.T @ lb
    basis_l, dl = _real_eigenbasis(lsym, tol)

    for k in range(4):
        mk = (1j**k) * m1
        mb = to_bell(mk)
        msym = mb.T @ mb
        lam_m = np.linalg.eigvals(msym)
        if _match_spectra(lam_m, np.linalg.eigvals(lsym), tol.spectrum_pairing) is None:
            continue
        basis_m, dm = _real_eigenbasis(msym, tol)
        perm = _match_spectra(dm, dl, tol.spectrum_pairing)
        if perm is None:
            continue
        perm_mat = np.zeros((4, 4))
        perm_mat[perm, np.arange(4)] = 1.0
        bl = basis_l.copy()
        if np.linalg.det(perm_mat) < 0:
            bl[:, 0] *= -1
        o_right = basis_m @ perm_mat @ bl.T
        o_left = lb @ o_right.T @ mb.conj().T
        try:
            right = kron_factor(from_bell(o_right), tol)
            left = kron_factor(from_bell(o_left), tol)
        except NotAProduct as exc:
            raise FactorizationFailure(str(exc)) from exc
        phase = wrap_phase(np.angle(root_l / root_m * 1j**k) + left.phase + right.phase)
        witness = EquivalenceWitness(
            LocalGatePair(left.w1, left.w2), LocalGatePair(right.w1, right.w2), phase
        )
        err = max_abs(l - witness.apply(m))
        if err > tol.witness:
            raise FactorizationFailure(f"witness reconstruction error {err:.3g}")
        return witness
    raise FactorizationFailure("no pairing of the spectra of m and l was found")
