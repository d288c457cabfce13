"""One-step gate synthesis for a fixed interaction Hamiltonian.

A device implements ``exp(+i H t)`` for some Hamiltonian family ``H``.  A
target gate can be reached with a single such pulse (plus arbitrary local
gates) exactly when the invariant curve ``(G1(t), G2(t))`` passes through the
target's invariants.  Units: hbar = 1 and, for the Josephson family, E_L = 1.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import bisect

from .config import DEFAULT, Tolerances
from .gates import (
    CNOT,
    GateInvariants,
    _invariants_arrays,
    gates_equivalent,
    hull_margin,
    is_local_gate,
    makhlin_invariants,
)
from .linalg import SIGMA_X, SIGMA_Y, SIGMA_Z, I2, check_hermitian, check_unitary, eig_hermitian, expm_i_hermitian

log = logging.getLogger(__name__)

GOLDEN = (math.sqrt(5) - 1) / 2

FAMILY_KINDS = ("heisenberg", "xy", "yy", "josephson", "custom")


def _two_body(a, b):
    return np.kron(a, b)


@dataclass(frozen=True)
class HamiltonianFamily:
    kind: str
    matrix: np.ndarray
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown Hamiltonian family {self.kind!r}")
        m = check_hermitian(self.matrix)
        if m.shape != (4, 4):
            raise ValueError("Hamiltonian must be 4x4")
        object.__setattr__(self, "matrix", m)


def heisenberg() -> HamiltonianFamily:
    h = 0.25 * sum(_two_body(s, s) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z))
    return HamiltonianFamily("heisenberg", h)


def xy() -> HamiltonianFamily:
    h = 0.25 * (_two_body(SIGMA_X, SIGMA_X) + _two_body(SIGMA_Y, SIGMA_Y))
    return HamiltonianFamily("xy", h)


def yy() -> HamiltonianFamily:
    return HamiltonianFamily("yy", 0.25 * _two_body(SIGMA_Y, SIGMA_Y))


def josephson(alpha: float) -> HamiltonianFamily:
    """``-E_J/2 (sx1 + sx2) + (E_J^2 / E_L) sy1 sy2`` with ``E_J = alpha``, ``E_L = 1``."""
    ej = float(alpha)
    h = -0.5 * ej * (_two_body(SIGMA_X, I2) + _two_body(I2, SIGMA_X)) + ej**2 * _two_body(SIGMA_Y, SIGMA_Y)
    return HamiltonianFamily("josephson", h, {"alpha": ej})


def custom(matrix) -> HamiltonianFamily:
    return HamiltonianFamily("custom", np.asarray(matrix, dtype=complex))


def family_from_name(name: str) -> HamiltonianFamily:
    """Parse ``heisenberg``, ``xy``, ``yy`` or ``josephson:ALPHA``."""
    builders = {"heisenberg": heisenberg, "xy": xy, "yy": yy}
    if name in builders:
        return builders[name]()
    if name.startswith("josephson:"):
        try:
            alpha = float(name.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad josephson parameter in {name!r}") from None
        if not math.isfinite(alpha) or alpha <= 0:
            raise ValueError("josephson alpha must be a positive number")
        return josephson(alpha)
    raise ValueError(f"unknown Hamiltonian family {name!r}")


@dataclass(frozen=True)
class SynthesisResult:
    times: list
    verdict: str


def evolve(h: HamiltonianFamily, t: float) -> np.ndarray:
    if not math.isfinite(t):
        raise ValueError("evolution time must be finite")
    return expm_i_hermitian(h.matrix, t)


class _Propagator:
    """Batched ``exp(i H t)`` from one eigendecomposition of ``H``."""

    def __init__(self, h: HamiltonianFamily):
        self.w, self.v = eig_hermitian(h.matrix)

    def __call__(self, ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        phases = np.exp(1j * np.outer(ts, self.w))
        return np.einsum("ik,tk,jk->tij", self.v, phases, self.v.conj())

    def invariants(self, ts):
        return _invariants_arrays(self(ts))


def invariant_curve(h: HamiltonianFamily, t_grid) -> list:
    g1, g2, phases = _Propagator(h).invariants(t_grid)
    return [GateInvariants(complex(a), float(b.real), np.exp(1j * ph)) for a, b, ph in zip(g1, g2, phases)]


def _golden_min(f, lo, hi, width):
    """Golden-section search for a minimum of ``f`` on ``[lo, hi]``."""
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > width:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    t = 0.5 * (a + b)
    return t, f(t)


def _polish(delta, t, lo, hi, h=1e-3, deg=6, npts=41):
    """Sharpen a tangential root of the vector function ``delta`` near ``t``.

    Where the curve only touches the target (SWAP on the Heisenberg curve,
    CNOT on the yy curve) every component of ``delta`` is quadratic in
    ``t - t*``, so the mismatch is flat to ~1e-8 at double precision.  The
    components are fitted by polynomials on ``[t - h, t + h]`` and the root
    is taken where their projection on the curvature direction is stationary,
    which is a simple zero of the fitted derivative.  Transversal roots are
    returned unchanged.
    """
    a, b = max(lo, t - h), min(hi, t + h)
    ts = np.linspace(a, b, npts)
    u = (ts - t) / h
    coef = P.polyfit(u, delta(ts), deg)
    d1 = P.polyder(coef)
    slope = np.linalg.norm(d1[0]) / h
    curve = P.polyder(coef, 2)[0]
    if slope > 1e-3 or not np.any(curve):
        return t
    g = d1 @ curve
    roots = [r.real for r in P.polyroots(g) if abs(r.imag) < 1e-9 and u[0] <= r.real <= u[-1]]
    if not roots:
        return t
    return t + h * min(roots, key=abs)


def solve_time(h: HamiltonianFamily, target, t_max: float, n_grid: int = 10_000,
               tol: Tolerances = DEFAULT) -> SynthesisResult:
    """Pulse durations ``t`` in ``(0, t_max]`` with ``exp(i H t)`` locally equivalent to ``target``.

    The squared invariant mismatch is scanned on a uniform grid; each grid
    local minimum below 1e-4 is refined by golden-section search and kept
    when the mismatch there is at most ``tol.root_mismatch``.

    ``verdict`` is ``"local"`` for a local target, ``"one_step"`` when some
    duration works, and otherwise ``"at_least_two"`` (a lower bound only).
    """
    target = check_unitary(target, tol.unitary, "target gate")
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    goal = makhlin_invariants(target, tol)
    prop = _Propagator(h)

    def delta(ts):
        g1, g2, _ = prop.invariants(ts)
        return np.stack([g1.real - goal.g1.real, g1.imag - goal.g1.imag, g2.real - goal.g2], axis=-1)

    def norm(ts):
        return np.linalg.norm(delta(ts), axis=-1)

    def norm1(t):
        return float(norm([t])[0])

    ts = t_max * np.arange(1, n_grid + 1) / n_grid
    r = norm(ts)
    padded = np.concatenate([[np.inf], r, [np.inf]])
    is_min = (r <= padded[:-2]) & (r <= padded[2:]) & (r**2 < 1e-4)

    roots = []
    for k in np.flatnonzero(is_min):
        lo = ts[k - 1] if k > 0 else 0.0
        hi = ts[k + 1] if k + 1 < n_grid else t_max
        t, ft = _golden_min(norm1, lo, hi, 1e-12)
        if ft**2 > tol.root_mismatch:
            continue
        polished = min(_polish(delta, t, 0.0, t_max), t_max)
        if norm1(polished) <= 10 * ft + 1e-13:
            t = polished
        mismatch = norm1(t) ** 2
        if t <= 1e-9 or mismatch > tol.root_mismatch:
            continue
        if roots and abs(roots[-1][0] - t) < 1e-7:
            if mismatch < roots[-1][1]:
                roots[-1] = (t, mismatch)
            continue
        roots.append((t, mismatch))

    if is_local_gate(target, tol):
        verdict = "local"
    elif roots:
        verdict = "one_step"
    else:
        verdict = "at_least_two"
    return SynthesisResult([(float(t), float(m)) for t, m in roots], verdict)


def josephson_condition(alpha: float, n: int) -> float:
    """``alpha^2 cos[pi (n + 1/2) sqrt(1 + alpha^-2)] + 1``; CNOT is reachable at its zeros."""
    return alpha**2 * math.cos(math.pi * (n + 0.5) * math.sqrt(1 + alpha**-2)) + 1


def josephson_cnot_time(alpha: float, n: int) -> float:
    """Pulse length at which the Josephson gate is CNOT-equivalent.

    The coupling phase ``(E_J^2 / E_L) t`` equals ``pi (2n + 1) / 4``.
    """
    return math.pi * (2 * n + 1) / (4 * alpha**2)


def josephson_alpha(n_max: int, alpha_max: float = 50.0, n_grid: int = 100_000,
                    tol: Tolerances = DEFAULT) -> list:
    """Josephson couplings ``alpha = E_J / E_L`` that give CNOT in one pulse.

    For each ``n`` in ``0..n_max`` the sign changes of
    :func:`josephson_condition` on ``(0, alpha_max]`` are bisected to 1e-12.

    Returns:
        List of ``(n, alpha, t)``; each entry was checked to evolve into a
        CNOT-equivalent gate.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    alphas = alpha_max * np.arange(1, n_grid + 1) / n_grid
    out = []
    for n in range(n_max + 1):
        vals = alphas**2 * np.cos(np.pi * (n + 0.5) * np.sqrt(1 + alphas**-2)) + 1
        flips = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
        for k in flips:
            alpha = bisect(josephson_condition, alphas[k], alphas[k + 1], args=(n,), xtol=1e-12)
            t = josephson_cnot_time(alpha, n)
            if not gates_equivalent(evolve(josephson(alpha), t), CNOT, tol.gate_equiv):
                log.warning("root n=%d alpha=%.12g does not give CNOT; dropped", n, alpha)
                continue
            out.append((n, float(alpha), float(t)))
    return out


def _edge(margin1, a, b, inside_at_a, width):
    """Bisect the boundary of ``margin >= 0`` between ``a`` and ``b``."""
    while b - a > width:
        mid = 0.5 * (a + b)
        if (margin1(mid) >= 0) == inside_at_a:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def entangler_windows(h: HamiltonianFamily, t_max: float, n_grid: int = 10_000,
                      tol: Tolerances = DEFAULT) -> list:
    """Maximal intervals of ``[0, t_max]`` on which ``exp(i H t)`` is a perfect entangler.

    Isolated perfect entanglers (the curve only touches the boundary of the
    perfect-entangler set) come back as zero-width intervals ``(t, t)``.
    """
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    prop = _Propagator(h)

    def margin(ts):
        return hull_margin(prop.invariants(ts)[2])

    def margin1(t):
        return float(margin([t])[0])

    def shifted(t):
        return margin1(t) + tol.hull

    ts = np.linspace(0.0, t_max, n_grid)
    m = margin(ts) + tol.hull
    inside = m >= 0

    windows = []
    k = 0
    while k < n_grid:
        if not inside[k]:
            k += 1
            continue
        start = k
        while k + 1 < n_grid and inside[k + 1]:
            k += 1
        lo = ts[0] if start == 0 else _edge(shifted, ts[start - 1], ts[start], False, 1e-9)
        hi = ts[-1] if k == n_grid - 1 else _edge(shifted, ts[k], ts[k + 1], True, 1e-9)
        windows.append((float(lo), float(hi)))
        k += 1

    # isolated touch points: local maxima of the margin that sit outside every window
    padded = np.concatenate([[-np.inf], m, [-np.inf]])
    peaks = np.flatnonzero((m >= padded[:-2]) & (m >= padded[2:]) & ~inside)
    for k in peaks:
        lo = ts[max(k - 1, 0)]
        hi = ts[min(k + 1, n_grid - 1)]
        t, neg = _golden_min(lambda x: -margin1(x), lo, hi, 1e-12)
        if -neg >= -tol.hull and not any(a - 1e-9 <= t <= b + 1e-9 for a, b in windows):
            windows.append((float(t), float(t)))
    windows.sort()
    return windows
