"""Local-equivalence classification of two-qubit mixed states.

A density matrix is written as

    rho = 1/4 + (1/2) s.sigma^1 + (1/2) p.sigma^2 + beta_ij sigma_i^1 sigma_j^2

and a local operation acts through a pair of 3x3 rotations ``(O, P)`` as
``s -> O s``, ``p -> P p``, ``beta -> O beta P^T``.  The 18 polynomials in
:func:`invariants18` separate the orbits of this action.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.spatial.transform import Rotation

from .config import DEFAULT, Tolerances
from .errors import BadIndex, BadTrace, NotARotation, NotPositive
from .linalg import I2, PAULIS, check_hermitian, max_abs, svd3_proper

_PAULI_1 = [np.kron(s, I2) for s in PAULIS]
_PAULI_2 = [np.kron(I2, s) for s in PAULIS]
_PAULI_12 = [[np.kron(a, b) for b in PAULIS] for a in PAULIS]

CASE_TAGS = ("A_i", "A_ii", "A_iii", "B_i", "B_ii", "C", "D", "E")

# invariants whose sign, not value, is compared
SIGN_ONLY = frozenset({10, 11, 15, 16, 17, 18})

# comparator tolerance at which the fixture pairs are resolved
FIXTURE_TOL = 1e-12


@dataclass(frozen=True)
class PauliForm:
    s: np.ndarray
    p: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "s", np.asarray(self.s, dtype=float).reshape(3))
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float).reshape(3))
        object.__setattr__(self, "beta", np.asarray(self.beta, dtype=float).reshape(3, 3))

    def rotated(self, o, p_rot) -> "PauliForm":
        return PauliForm(o @ self.s, p_rot @ self.p, o @ self.beta @ p_rot.T)

    def scaled(self, c: float) -> "PauliForm":
        return PauliForm(c * self.s, c * self.p, c * self.beta)

    def distance(self, other: "PauliForm") -> float:
        return max(
            max_abs(self.s - other.s), max_abs(self.p - other.p), max_abs(self.beta - other.beta)
        )


@dataclass(frozen=True)
class StateInvariants:
    """The 18 invariants; ``inv[k]`` is ``I_k`` with ``k`` counted from 1."""

    values: np.ndarray

    def __getitem__(self, k: int) -> float:
        if not 1 <= k <= 18:
            raise IndexError(k)
        return float(self.values[k - 1])

    def as_dict(self) -> dict:
        return {f"i{k}": float(v) for k, v in enumerate(self.values, start=1)}


@dataclass(frozen=True)
class StateWitness:
    """Rotation pair taking a source form to its canonical form."""

    o: np.ndarray
    p_rot: np.ndarray


class Canonicalization(NamedTuple):
    canonical: PauliForm
    witness: StateWitness
    case: str


def pauli_decompose(rho, strict: bool = False, tol: Tolerances = DEFAULT) -> PauliForm:
    """Bloch vectors and spin-spin correlator of a Hermitian unit-trace 4x4 matrix.

    Positivity is only enforced with ``strict=True``.
    """
    rho = check_hermitian(rho, tol.hermitian)
    if rho.shape != (4, 4):
        raise BadTrace(f"expected a 4x4 matrix, got shape {rho.shape}")
    tr = np.trace(rho).real
    if abs(tr - 1) > tol.trace:
        raise BadTrace(f"trace is {tr:.12g}, expected 1")
    if strict:
        low = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
        if low < -tol.positivity:
            raise NotPositive(f"smallest eigenvalue {low:.3g} is negative")
    s = [0.5 * np.trace(rho @ a).real for a in _PAULI_1]
    p = [0.5 * np.trace(rho @ b).real for b in _PAULI_2]
    beta = [[0.25 * np.trace(rho @ ab).real for ab in row] for row in _PAULI_12]
    return PauliForm(s, p, beta)


def pauli_compose(f: PauliForm) -> np.ndarray:
    rho = 0.25 * np.eye(4, dtype=complex)
    for i in range(3):
        rho += 0.5 * f.s[i] * _PAULI_1[i] + 0.5 * f.p[i] * _PAULI_2[i]
        for j in range(3):
            rho += f.beta[i, j] * _PAULI_12[i][j]
    return rho


def _triple(a, b, c):
    return float(np.dot(a, np.cross(b, c)))


def _cofactor(b):
    # C_il = (1/2) e_ijk e_lmn b_jm b_kn
    return np.array(
        [[np.linalg.det(np.delete(np.delete(b, i, 0), l, 1)) * (-1) ** (i + l) for l in range(3)]
         for i in range(3)]
    )


def invariants18(f: PauliForm) -> StateInvariants:
    s, p, b = f.s, f.p, f.beta
    bbt = b @ b.T
    btb = b.T @ b
    sb = s @ b
    bp = b @ p
    sbbt = s @ bbt
    btbp = btb @ p
    vals = [
        np.linalg.det(b),
        np.trace(btb),
        np.trace(btb @ btb),
        s @ s,
        sb @ sb,
        sbbt @ sbbt,
        p @ p,
        bp @ bp,
        btbp @ btbp,
        _triple(s, sbbt, s @ bbt @ bbt),
        _triple(p, btbp, btb @ btbp),
        s @ b @ p,
        s @ bbt @ b @ p,
        2 * s @ _cofactor(b) @ p,
        _triple(s, sbbt, bp),
        _triple(sb, p, btbp),
        _triple(sb, sbbt @ b, p),
        _triple(s, bp, bbt @ bp),
    ]
    return StateInvariants(np.array(vals, dtype=float))


def _sign(x, tol):
    return 0 if abs(x) <= tol else (1 if x > 0 else -1)


def invariant_mismatches(a, b, tol: float = DEFAULT.state_equiv, skip=()) -> list:
    """Indices ``k`` (1-based) at which the invariant comparison fails.

    ``a`` and ``b`` may be PauliForms or StateInvariants.  Values are compared
    for all indices except 10, 11 and 15-18, where only signs (with a dead
    zone of width ``tol`` around zero) are compared.
    """
    ia = a if isinstance(a, StateInvariants) else invariants18(a)
    ib = b if isinstance(b, StateInvariants) else invariants18(b)
    bad = []
    for k in range(1, 19):
        if k in skip:
            continue
        if k in SIGN_ONLY:
            if _sign(ia[k], tol) != _sign(ib[k], tol):
                bad.append(k)
        elif abs(ia[k] - ib[k]) > tol:
            bad.append(k)
    return bad


def states_equivalent(a: PauliForm, b: PauliForm, tol: float = DEFAULT.state_equiv) -> bool:
    return not invariant_mismatches(a, b, tol)


def _rot_about(axis: int, angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    i, j = [k for k in range(3) if k != axis]
    r = np.eye(3)
    r[i, i] = c
    r[i, j] = -s
    r[j, i] = s
    r[j, j] = c
    return r


def _plane_to_first_axis(axis: int, v) -> np.ndarray:
    """Rotation about ``axis`` bringing the in-plane part of ``v`` onto the first plane axis."""
    i, j = [k for k in range(3) if k != axis]
    return _rot_about(axis, -np.arctan2(v[j], v[i]))


def _to_z(v) -> np.ndarray:
    """A proper rotation with ``R v = |v| e_z``."""
    e3 = v / np.linalg.norm(v)
    trial = np.eye(3)[int(np.argmin(np.abs(e3)))]
    e1 = trial - (trial @ e3) * e3
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(e3, e1)
    return np.array([e1, e2, e3])


def _first_nonzero_sign(values, tol):
    for v in values:
        if abs(v) > tol:
            return 1.0 if v > 0 else -1.0
    return 1.0


def _case_a(f, tol):
    lead = []
    for j in range(3):
        if abs(f.s[j]) > tol:
            lead.append(f.s[j])
        elif abs(f.p[j]) > tol:
            lead.append(f.p[j])
        else:
            lead.append(0.0)
    eps = np.ones(3)
    zero_axes = [j for j in range(3) if lead[j] == 0.0]
    if zero_axes:
        for j in range(3):
            if lead[j] != 0.0:
                eps[j] = np.sign(lead[j])
        eps[zero_axes[0]] = np.prod(np.delete(eps, zero_axes[0]))
    else:
        eps[0], eps[1] = np.sign(lead[0]), np.sign(lead[1])
        eps[2] = eps[0] * eps[1]
    g = np.diag(eps)
    out = f.rotated(g, g)
    s_nz = [j for j in range(3) if abs(out.s[j]) > tol]
    p_nz = [j for j in range(3) if abs(out.p[j]) > tol]
    if len(s_nz) >= 2 or len(p_nz) >= 2:
        tag = "A_i"
    elif s_nz and p_nz and s_nz != p_nz:
        tag = "A_iii"
    else:
        tag = "A_ii"
    return g, g, tag


def _case_b(f, plane, other, tol):
    i, j = plane
    k = other
    g = np.eye(3)
    s_perp = np.hypot(f.s[i], f.s[j])
    p_perp = np.hypot(f.p[i], f.p[j])
    if s_perp > tol:
        g = _plane_to_first_axis(k, f.s)
        cur = f.rotated(g, g)
        keys = (cur.s[k], cur.p[j], cur.p[k])
    elif p_perp > tol:
        g = _plane_to_first_axis(k, f.p)
        cur = f.rotated(g, g)
        keys = (cur.s[k], cur.p[k])
    else:
        cur = f
        keys = (cur.s[k], cur.p[k])
    if _first_nonzero_sign(keys, tol) < 0:
        # pi rotation about the first plane axis preserves the degenerate beta
        g = _rot_about(i, np.pi) @ g
    cur = f.rotated(g, g)
    tag = "B_i" if abs(cur.s[k]) <= tol and abs(cur.p[k]) <= tol else "B_ii"
    return g, g, tag


def _case_c(f, tol):
    go = _plane_to_first_axis(0, f.s) if np.hypot(f.s[1], f.s[2]) > tol else np.eye(3)
    gp = _plane_to_first_axis(0, f.p) if np.hypot(f.p[1], f.p[2]) > tol else np.eye(3)
    cur = f.rotated(go, gp)
    if _first_nonzero_sign((cur.s[0], cur.p[0]), tol) < 0:
        flip = _rot_about(1, np.pi)
        go, gp = flip @ go, flip @ gp
    return go, gp, "C"


def _case_d(f, tol):
    if np.linalg.norm(f.s) > tol:
        g = _to_z(f.s)
        p = g @ f.p
        if np.hypot(p[0], p[1]) > tol:
            g = _plane_to_first_axis(2, p) @ g
    elif np.linalg.norm(f.p) > tol:
        g = _to_z(f.p)
    else:
        g = np.eye(3)
    return g, g, "D"


def _case_e(f, tol):
    go = _to_z(f.s) if np.linalg.norm(f.s) > tol else np.eye(3)
    gp = _to_z(f.p) if np.linalg.norm(f.p) > tol else np.eye(3)
    return go, gp, "E"


def canonicalize_state(f: PauliForm, tol: Tolerances = DEFAULT) -> Canonicalization:
    """Bring a state to a fixed representative of its local-equivalence orbit.

    The correlator is first diagonalised by proper rotations, with
    ``|b1| >= |b2| >= |b3|`` and all ``b_i`` of the sign of ``det beta``.
    What remains is the subgroup of local rotations that keeps this diagonal
    matrix fixed; its size depends on which ``b_i`` coincide or vanish
    (cases A-E), and within it ``s`` and ``p`` are rotated/reflected to a
    unique position.  Entries within ``tol.degeneracy`` are treated as equal.

    Returns:
        Canonicalization(canonical, witness, case) with
        ``canonical == f.rotated(witness.o, witness.p_rot)``.
    """
    delta = tol.degeneracy
    o, d, p = svd3_proper(f.beta)
    rot_o, rot_p = o.T, p.T
    if d[2] < 0 and abs(d[2]) <= delta:
        # det beta is numerically zero: use the nonnegative representative
        fix = np.diag([-1.0, -1.0, 1.0])
        rot_o = fix @ rot_o
        d = d * np.array([-1.0, -1.0, 1.0])
    cur = f.rotated(rot_o, rot_p)
    b = np.abs(d)
    nonzero = b > delta

    if not nonzero[0]:
        go, gp, tag = _case_e(cur, delta)
    elif not nonzero[1]:
        go, gp, tag = _case_c(cur, delta)
    elif nonzero[2] and b[0] - b[1] <= delta and b[1] - b[2] <= delta:
        go, gp, tag = _case_d(cur, delta)
    elif b[0] - b[1] <= delta:
        go, gp, tag = _case_b(cur, (0, 1), 2, delta)
    elif nonzero[2] and b[1] - b[2] <= delta:
        go, gp, tag = _case_b(cur, (1, 2), 0, delta)
    else:
        go, gp, tag = _case_a(cur, delta)

    witness = StateWitness(go @ rot_o, gp @ rot_p)
    return Canonicalization(f.rotated(witness.o, witness.p_rot), witness, tag)


def check_rotation(o, tol: float = DEFAULT.rotation) -> np.ndarray:
    o = np.asarray(o, dtype=float)
    if o.shape != (3, 3):
        raise NotARotation(f"expected a 3x3 matrix, got shape {o.shape}")
    if max_abs(o.T @ o - np.eye(3)) > tol or abs(np.linalg.det(o) - 1) > tol:
        raise NotARotation("matrix is not a proper rotation")
    return o


def lift_rotation_to_qubit(o, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Special-unitary ``W`` with ``W^dag sigma_i W = sum_j o_ij sigma_j``.

    Then ``kron(lift(O), lift(P))`` acting as ``U rho U^dag`` realises the
    rotation pair ``(O, P)`` on the Pauli form.  The overall sign of ``W`` is
    fixed so its largest-magnitude entry has nonnegative real part.
    """
    o = check_rotation(o, tol.rotation)
    # V = W^dag rotates Bloch vectors by o^T: V sigma_i V^dag = sum_j (o^T)_ji sigma_j
    x, y, z, w = Rotation.from_matrix(o.T).as_quat()
    v = w * I2 - 1j * (x * PAULIS[0] + y * PAULIS[1] + z * PAULIS[2])
    out = v.conj().T
    k = np.argmax(np.abs(out))
    if out.flat[k].real < 0:
        out = -out
    return out


FIXTURE_BETA = {"nondegenerate": (0.2, 0.1, 0.05), "flat": (0.2, 0.1, 0.0)}

# Pairs (s, p) in which only invariant k tells the two states apart; the
# upper sign gives the first member.  b1, b2 enter rows 12 and 13.
def _fixture_vectors(k, sign, b1, b2):
    table = {
        10: ((1, 1, sign), (0, 0, 0)),
        11: ((0, 0, 0), (1, 1, sign)),
        12: ((1, sign * b1**3, 0), (-sign * b2**3, 1, 0)),
        13: ((1, sign * b1, 0), (-sign * b2, 1, 0)),
        14: ((0, 0, 1), (0, 0, sign)),
        15: ((0, 1, 1), (sign, 0, 0)),
        16: ((sign, 0, 0), (0, 1, 1)),
        17: ((1, 1, 0), (0, 0, sign)),
        18: ((0, 0, sign), (1, 1, 0)),
    }
    return table[k]


def _is_psd(f: PauliForm, tol: float = 1e-10) -> bool:
    return bool(np.linalg.eigvalsh(pauli_compose(f))[0] >= -tol)


def fixture_pair(k: int):
    """Two inequivalent states that differ only in invariant ``I_k`` (10 <= k <= 18).

    Every invariant is separately homogeneous in ``s``, ``p`` and ``beta``,
    so shrinking them by positive factors keeps the pattern of agreements.
    ``beta`` is halved until it alone gives a positive semidefinite state,
    then ``s`` and ``p`` are halved together until both members are.
    """
    if k not in range(10, 19):
        raise BadIndex(f"fixture index must be in 10..18, got {k}")
    b = FIXTURE_BETA["nondegenerate" if k in (10, 11) else "flat"]
    beta = np.diag(b)
    pair = []
    for sign in (1, -1):
        s, p = _fixture_vectors(k, sign, b[0], b[1])
        pair.append(PauliForm(s, p, beta))
    zero = np.zeros(3)
    while not _is_psd(PauliForm(zero, zero, beta)):
        beta = beta / 2
    c = 1.0
    while not all(_is_psd(PauliForm(c * f.s, c * f.p, beta)) for f in pair):
        c /= 2
    return tuple(PauliForm(c * f.s, c * f.p, beta) for f in pair)
