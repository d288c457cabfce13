"""Fixed-size dense kernels: 2x2 / 4x4 complex and 3x3 / 4x4 real matrices.

Everything here is a pure function on numpy arrays.  Basis order for
two-qubit operators is |00>, |01>, |10>, |11> (first qubit is the most
significant index).
"""
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import NotAProduct, NotCommuting, NotHermitian, NotUnitary

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


@dataclass(frozen=True)
class LocalGatePair:
    """A local operation ``exp(i*phase) * kron(w1, w2)`` with det w1 = det w2 = 1."""

    w1: np.ndarray
    w2: np.ndarray
    phase: float = 0.0

    def matrix(self) -> np.ndarray:
        return np.exp(1j * self.phase) * np.kron(self.w1, self.w2)


def wrap_phase(phi: float) -> float:
    """Map an angle into [0, 2*pi)."""
    phi = float(phi) % (2 * np.pi)
    # rounding just below a full turn counts as zero
    return 0.0 if phi >= 2 * np.pi - 1e-14 else phi


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def max_abs(a) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def unitarity_defect(u) -> float:
    u = np.asarray(u)
    return max_abs(u.conj().T @ u - np.eye(u.shape[0]))


def check_unitary(u, tol: float = DEFAULT.unitary, name: str = "matrix") -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (4, 4):
        raise NotUnitary(f"{name} must be 4x4, got shape {u.shape}")
    if not np.all(np.isfinite(u)):
        raise NotUnitary(f"{name} has non-finite entries")
    defect = unitarity_defect(u)
    if defect > tol:
        raise NotUnitary(f"{name} is not unitary (|U^dag U - 1|_max = {defect:.3g})")
    return u


def check_hermitian(h, tol: float = DEFAULT.hermitian) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {h.shape}")
    defect = max_abs(h - h.conj().T)
    if defect > tol:
        raise NotHermitian(f"matrix is not Hermitian (|H - H^dag|_max = {defect:.3g})")
    return h


def eig_hermitian(h, tol: Tolerances = DEFAULT):
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns)."""
    h = check_hermitian(h, tol.hermitian)
    h = 0.5 * (h + h.conj().T)
    return np.linalg.eigh(h)


def expm_i_hermitian(h, t: float, tol: Tolerances = DEFAULT) -> np.ndarray:
    """``exp(+i*h*t)`` through the spectral decomposition of ``h``."""
    w, v = eig_hermitian(h, tol)
    return (v * np.exp(1j * w * t)) @ v.conj().T


def svd3_proper(b):
    """Singular value decomposition of a real 3x3 matrix with proper rotations.

    Returns ``(o, d, p)`` with ``b = o @ diag(d) @ p.T``, ``det o = det p = +1``
    and ``|d1| >= |d2| >= |d3|``.  All ``d`` are nonnegative when
    ``det b >= 0`` and all are nonpositive when ``det b < 0``.
    """
    b = np.asarray(b, dtype=float)
    if not np.any(b):
        return np.eye(3), np.zeros(3), np.eye(3)
    u, s, vt = np.linalg.svd(b)
    v = vt.T
    su = np.sign(np.linalg.det(u))
    sv = np.sign(np.linalg.det(v))
    u[:, 2] *= su
    v[:, 2] *= sv
    d = s.copy()
    d[2] *= su * sv
    if d[2] < 0:
        # det b < 0: move the sign onto all three entries with an even flip
        u[:, :2] *= -1
        d[:2] *= -1
    elif d[2] == 0:
        d[2] = 0.0
    return u, d, v


def _eigh_sorted(a):
    w, v = np.linalg.eigh(0.5 * (a + a.T))
    return w, v


def _clusters(values, gap):
    groups = [[0]]
    for k in range(1, len(values)):
        if values[k] - values[k - 1] <= gap:
            groups[-1].append(k)
        else:
            groups.append([k])
    return groups


def simdiag_commuting_symmetric(x, y, tol: Tolerances = DEFAULT):
    """Common real orthogonal eigenbasis of two commuting real symmetric matrices.

    ``x`` is diagonalised first; ``y`` is then diagonalised inside each
    eigenvalue cluster of ``x`` (and ``x`` once more inside clusters of
    ``y``, which cleans up nearly-degenerate pairs).

    Returns:
        (basis, dx, dy): ``basis`` has orthonormal columns and det +1, and
        ``basis.T @ x @ basis`` / ``basis.T @ y @ basis`` are diagonal with
        entries ``dx`` / ``dy``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    comm = max_abs(x @ y - y @ x)
    if comm > tol.commute:
        raise NotCommuting(f"matrices do not commute (|xy - yx|_max = {comm:.3g})")
    wx, basis = _eigh_sorted(x)
    for group in _clusters(wx, tol.cluster_gap):
        if len(group) < 2:
            continue
        sub = basis[:, group]
        wy, rot = _eigh_sorted(sub.T @ y @ sub)
        sub = sub @ rot
        for inner in _clusters(wy, tol.cluster_gap):
            if len(inner) < 2:
                continue
            block = sub[:, inner]
            _, rot2 = _eigh_sorted(block.T @ x @ block)
            sub[:, inner] = block @ rot2
        basis[:, group] = sub
    if np.linalg.det(basis) < 0:
        basis[:, -1] *= -1
    dx = np.einsum("ij,ik,kj->j", basis, x, basis)
    dy = np.einsum("ij,ik,kj->j", basis, y, basis)
    return basis, dx, dy


def _rearrange(u):
    # R[(i1, j1), (i2, j2)] = u[2*i1 + i2, 2*j1 + j2], so a (x) b  ->  vec(a) vec(b)^T
    return u.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)


def _sign_convention(w):
    k = np.argmax(np.abs(w))
    return -1.0 if w.flat[k].real < 0 else 1.0


def kron_factor(u, tol: Tolerances = DEFAULT) -> LocalGatePair:
    """Factor a local 4x4 unitary as ``exp(i*phi) * kron(w1, w2)``.

    Uses the nearest-Kronecker-product rearrangement: the 4x4 matrix of
    flattened 2x2 blocks has rank one exactly when ``u`` is a product.

    Raises:
        NotUnitary: input is not unitary.
        NotAProduct: the second singular value of the rearrangement exceeds
            ``tol.kron_rank`` (``u`` entangles, e.g. CNOT).
    """
    u = check_unitary(u, tol.unitary)
    lhs, s, rhs = np.linalg.svd(_rearrange(u))
    if s[1] > tol.kron_rank:
        raise NotAProduct(f"matrix is not a tensor product (second singular value {s[1]:.3g})")
    a = np.sqrt(s[0]) * lhs[:, 0].reshape(2, 2)
    b = np.sqrt(s[0]) * rhs[0].reshape(2, 2)
    ra = np.sqrt(np.linalg.det(a))
    rb = np.sqrt(np.linalg.det(b))
    w1 = a / ra
    w2 = b / rb
    scale = ra * rb
    # W1 carries the sign convention; W2 takes the sign keeping |phase| <= pi/2
    sign1 = _sign_convention(w1)
    sign2 = 1.0 if (scale * sign1).real >= 0 else -1.0
    w1 = w1 * sign1
    w2 = w2 * sign2
    phase = wrap_phase(np.angle(scale * sign1 * sign2))
    pair = LocalGatePair(w1, w2, phase)
    residual = max_abs(u - pair.matrix())
    if residual > tol.kron_residual:
        raise NotAProduct(f"rank-one factorization residual {residual:.3g} exceeds tolerance")
    return pair
