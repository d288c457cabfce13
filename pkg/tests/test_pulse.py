import math

import numpy as np
import pytest
from scipy.optimize import brentq

from qinv.errors import NotUnitary
from qinv.gates import CNOT, IDENTITY, SQRT_SWAP, SWAP, gates_equivalent, is_perfect_entangler, makhlin_invariants
from qinv.pulse import (
    custom,
    entangler_windows,
    evolve,
    family_from_name,
    heisenberg,
    invariant_curve,
    josephson,
    josephson_alpha,
    josephson_condition,
    solve_time,
    xy,
    yy,
)

# Josephson CNOT couplings found with scipy's brentq on the scalar condition
JOSEPHSON_ROOTS = {
    2: [1.1991512512834],
    4: [1.5433115523653],
    5: [1.1687221042616, 1.4690322946059],
}

CLOSED_FORMS = {
    "heisenberg": (lambda t: np.exp(1j * t) * (3 + np.exp(-2j * t)) ** 2 / 16, lambda t: 3 * np.cos(t)),
    "xy": (lambda t: np.cos(t / 2) ** 4, lambda t: 1 + 2 * np.cos(t)),
    "yy": (lambda t: np.cos(t / 2) ** 2, lambda t: 2 + np.cos(t)),
}


def test_evolve_examples():
    for fam in (heisenberg(), xy(), yy(), josephson(1.3)):
        assert np.allclose(evolve(fam, 0.0), IDENTITY)
    inv = makhlin_invariants(evolve(heisenberg(), np.pi))
    assert abs(inv.g1 + 1) < 1e-12 and abs(inv.g2 + 3) < 1e-12
    inv = makhlin_invariants(evolve(yy(), np.pi))
    assert abs(inv.g1) < 1e-12 and abs(inv.g2 - 1) < 1e-12


def test_evolve_rejects_nonfinite_time():
    with pytest.raises(ValueError):
        evolve(xy(), math.inf)


@pytest.mark.parametrize("name", sorted(CLOSED_FORMS))
def test_invariant_curve_closed_forms(name):
    ts = np.linspace(0, 4 * np.pi, 1000)
    curve = invariant_curve(family_from_name(name), ts)
    g1f, g2f = CLOSED_FORMS[name]
    assert max(abs(inv.g1 - g1f(t)) for inv, t in zip(curve, ts)) <= 1e-9
    assert max(abs(inv.g2 - g2f(t)) for inv, t in zip(curve, ts)) <= 1e-9


def test_family_parsing():
    assert family_from_name("josephson:1.5").params == {"alpha": 1.5}
    for bad in ("nope", "josephson:", "josephson:-1", "josephson:x"):
        with pytest.raises(ValueError):
            family_from_name(bad)
    with pytest.raises(ValueError):
        custom(np.ones((4, 4)) + 1j * np.triu(np.ones((4, 4))))


def _roots(res):
    return [t for t, _ in res.times]


def test_solve_yy_cnot():
    res = solve_time(yy(), CNOT, 4 * np.pi)
    assert res.verdict == "one_step"
    assert min(abs(t - np.pi) for t in _roots(res)) <= 1e-9


def test_solve_heisenberg_cnot_needs_two():
    res = solve_time(heisenberg(), CNOT, 4 * np.pi)
    assert res.verdict == "at_least_two" and res.times == []


def test_solve_heisenberg_sqrt_swap_and_swap():
    res = solve_time(heisenberg(), SQRT_SWAP, 4 * np.pi)
    assert res.verdict == "one_step"
    assert min(abs(t - np.pi / 2) for t in _roots(res)) <= 1e-9
    res = solve_time(heisenberg(), SWAP, 4 * np.pi)
    assert min(abs(t - np.pi) for t in _roots(res)) <= 1e-9


def test_solve_local_target():
    assert solve_time(xy(), IDENTITY, 4 * np.pi).verdict == "local"


def test_solve_rejects_bad_input():
    with pytest.raises(NotUnitary):
        solve_time(xy(), 2 * IDENTITY, 1.0)
    with pytest.raises(ValueError):
        solve_time(xy(), CNOT, 0.0)


@pytest.mark.parametrize("fam", [heisenberg(), xy(), yy(), josephson(1.2)], ids=lambda f: f.kind)
def test_every_root_reproduces_target(fam, rng):
    for t0 in rng.uniform(0.1, 6.0, 4):
        target = evolve(fam, t0)
        res = solve_time(fam, target, 4 * np.pi)
        assert min(abs(t - t0) for t in _roots(res)) <= 1e-9
        for t, mismatch in res.times:
            assert mismatch <= 1e-10
            assert gates_equivalent(evolve(fam, t), target, 1e-6)


def test_josephson_condition_asymptotes():
    for n in (0, 1):
        vals = [josephson_condition(a, n) for a in np.linspace(1e-3, 50, 20_000)]
        assert min(vals) > 0


def test_josephson_roots_match_independent_solver():
    for n, roots in JOSEPHSON_ROOTS.items():
        alphas = np.linspace(0.5, 3.0, 2501)
        vals = [josephson_condition(a, n) for a in alphas]
        found = [brentq(josephson_condition, alphas[i], alphas[i + 1], args=(n,), xtol=1e-14)
                 for i in range(len(alphas) - 1) if vals[i] * vals[i + 1] < 0]
        assert np.allclose(sorted(found), roots, atol=1e-12)


def test_josephson_alpha():
    sols = josephson_alpha(5)
    by_n = {}
    for n, alpha, t in sols:
        by_n.setdefault(n, []).append(alpha)
        assert abs(josephson_condition(alpha, n)) <= 1e-10
        assert gates_equivalent(evolve(josephson(alpha), t), CNOT, 1e-6)
    assert set(by_n) == set(JOSEPHSON_ROOTS)
    for n, roots in JOSEPHSON_ROOTS.items():
        assert np.allclose(sorted(by_n[n]), roots, atol=1e-10)
    assert josephson_alpha(1) == []


def test_josephson_alpha_rejects_negative():
    with pytest.raises(ValueError):
        josephson_alpha(-1)


def test_windows_examples():
    (win,) = entangler_windows(xy(), 2 * np.pi)
    assert abs(win[0] - np.pi / 2) <= 1e-6 and abs(win[1] - 3 * np.pi / 2) <= 1e-6
    wins = entangler_windows(heisenberg(), 2 * np.pi)
    assert len(wins) == 2
    for (lo, hi), want in zip(wins, (np.pi / 2, 3 * np.pi / 2)):
        assert lo == hi and abs(lo - want) <= 1e-6
    (win,) = entangler_windows(yy(), 2 * np.pi)
    assert win[0] == win[1] and abs(win[0] - np.pi) <= 1e-6


@pytest.mark.parametrize("fam", [xy(), josephson(1.2), josephson(0.6)], ids=["xy", "j1.2", "j0.6"])
def test_windows_match_pointwise_predicate(fam):
    t_max = 4 * np.pi
    wins = entangler_windows(fam, t_max)
    for t in np.linspace(0, t_max, 100_001)[::7]:
        inside = any(lo - 1e-7 <= t <= hi + 1e-7 for lo, hi in wins)
        near_edge = any(min(abs(t - lo), abs(t - hi)) < 1e-6 for lo, hi in wins)
        if not near_edge:
            assert inside == is_perfect_entangler(evolve(fam, t))
