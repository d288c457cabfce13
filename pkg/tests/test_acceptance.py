"""Acceptance criteria 1-10.

Each test records one line through :func:`report`; the lines are printed
together at the end of the pytest run (see ``conftest.py``), or directly
when this file is executed as a script.
"""
import time

import numpy as np

from conftest import random_local, random_rotation, random_unitary
from qinv.gates import (
    CNOT,
    IDENTITY,
    Q,
    SQRT_SWAP,
    SWAP,
    ent_form,
    gates_equivalent,
    hull_margin,
    is_perfect_entangler,
    makhlin_invariants,
    perfect_entangler_inequality,
    synthesize_witness,
)
from qinv.pulse import (
    entangler_windows,
    evolve,
    heisenberg,
    invariant_curve,
    josephson,
    josephson_alpha,
    solve_time,
    xy,
    yy,
)
from qinv.states import (
    CASE_TAGS,
    FIXTURE_TOL,
    PauliForm,
    canonicalize_state,
    fixture_pair,
    invariant_mismatches,
    invariants18,
    pauli_compose,
)
from test_states import case_form, random_form

RESULTS = {}


def report(criterion, ok, detail):
    RESULTS.setdefault(criterion, []).append((bool(ok), detail))
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok


def summary_lines():
    lines = []
    for k in sorted(RESULTS):
        parts = RESULTS[k]
        ok = all(p for p, _ in parts)
        lines.append(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  " + "; ".join(d for _, d in parts))
    return lines


def direct_g(u):
    """G1, G2 straight from the trace formulas, for cross-checking."""
    mb = Q.conj().T @ u @ Q
    m = mb.T @ mb
    det = np.linalg.det(u)
    return np.trace(m) ** 2 / (16 * det), (np.trace(m) ** 2 - np.trace(m @ m)) / (4 * det)


def test_criterion_1_table_constants():
    start = time.perf_counter()
    table = [("identity", IDENTITY, 1, 3), ("cnot", CNOT, 0, 1), ("swap", SWAP, -1, -3), ("sqrt-swap", SQRT_SWAP, 0.25j, 0)]
    worst = 0.0
    for _, gate, g1, g2 in table:
        inv = makhlin_invariants(gate)
        worst = max(worst, abs(inv.g1 - g1), abs(inv.g2 - g2))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 1
    assert report(1, ok, f"max deviation {worst:.1e}, {elapsed:.3f} s")


def test_criterion_2_table_curves():
    start = time.perf_counter()
    forms = {
        "heisenberg": (heisenberg(), lambda t: np.exp(1j * t) * (3 + np.exp(-2j * t)) ** 2 / 16, lambda t: 3 * np.cos(t)),
        "xy": (xy(), lambda t: np.cos(t / 2) ** 4, lambda t: 1 + 2 * np.cos(t)),
        "yy": (yy(), lambda t: np.cos(t / 2) ** 2, lambda t: 2 + np.cos(t)),
    }
    ts = np.linspace(0, 4 * np.pi, 1000)
    worst = 0.0
    for fam, g1f, g2f in forms.values():
        for inv, t in zip(invariant_curve(fam, ts), ts):
            worst = max(worst, abs(inv.g1 - g1f(t)), abs(inv.g2 - g2f(t)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 5
    assert report(2, ok, f"max deviation {worst:.1e}, {elapsed:.2f} s")


def test_criterion_3_gate_equivalence():
    rng = np.random.default_rng(3)
    start = time.perf_counter()
    worst = 0.0
    missed = 0
    for _ in range(1000):
        m = random_unitary(rng)
        l = np.exp(1j * rng.uniform(0, 2 * np.pi)) * random_local(rng) @ m @ random_local(rng)
        if not gates_equivalent(m, l):
            missed += 1
            continue
        w = synthesize_witness(m, l)
        worst = max(worst, np.max(np.abs(l - w.apply(m))))
    wrong = 0
    for _ in range(1000):
        a, b = random_unitary(rng), random_unitary(rng)
        ga, gb = direct_g(a), direct_g(b)
        match = abs(ga[0] - gb[0]) <= 1e-6 and abs(ga[1] - gb[1]) <= 1e-6
        if gates_equivalent(a, b) != match:
            wrong += 1
    elapsed = time.perf_counter() - start
    ok = missed == 0 and worst <= 1e-7 and wrong == 0 and elapsed < 30
    assert report(3, ok, f"missed {missed}, witness error {worst:.1e}, false verdicts {wrong}, {elapsed:.1f} s")


def test_criterion_4_named_gates_and_windows():
    named = (
        is_perfect_entangler(CNOT),
        is_perfect_entangler(SQRT_SWAP),
        not is_perfect_entangler(IDENTITY),
        not is_perfect_entangler(SWAP),
    )
    ((lo, hi),) = entangler_windows(xy(), 2 * np.pi)
    xy_err = max(abs(lo - np.pi / 2), abs(hi - 3 * np.pi / 2))
    heis = entangler_windows(heisenberg(), 2 * np.pi)
    heis_ok = len(heis) == 2 and all(
        a == b and abs(a - want) <= 1e-6 for (a, b), want in zip(heis, (np.pi / 2, 3 * np.pi / 2))
    )
    yy_w = entangler_windows(yy(), 2 * np.pi)
    yy_ok = len(yy_w) == 1 and yy_w[0][0] == yy_w[0][1] and abs(yy_w[0][0] - np.pi) <= 1e-6
    ok = all(named) and xy_err <= 1e-6 and heis_ok and yy_ok
    assert report(4, ok, f"named gates {'ok' if all(named) else 'wrong'}, xy edge error {xy_err:.1e}, "
                         f"heisenberg points {'ok' if heis_ok else 'wrong'}, yy point {'ok' if yy_ok else 'wrong'}")


def test_criterion_4_inequality_agrees_with_hull():
    rng = np.random.default_rng(4)
    tested = disagree = 0
    for _ in range(10_000):
        inv = makhlin_invariants(random_unitary(rng))
        if abs(inv.g1) <= 1e-6:
            continue
        tested += 1
        hull = bool(hull_margin(inv.phases) >= -1e-9)
        if hull != perfect_entangler_inequality(inv):
            disagree += 1
    ok = disagree == 0
    assert report(4, ok, f"inequality vs hull disagree on {disagree}/{tested} random unitaries")


def test_criterion_5_state_invariance():
    rng = np.random.default_rng(5)
    worst = 0.0
    worst_rel = 0.0
    for _ in range(10_000):
        f = random_form(rng)
        g = f.rotated(random_rotation(rng), random_rotation(rng))
        a, b = invariants18(f).values, invariants18(g).values
        worst = max(worst, np.max(np.abs(a - b) / (1 + np.abs(a))))
        big = np.abs(a) >= 1e-6
        worst_rel = max(worst_rel, np.max(np.abs(a - b)[big] / np.abs(a[big]), initial=0.0))
    ok = worst <= 1e-9
    assert report(5, ok, f"max |dI|/(1+|I|) {worst:.1e}, max |dI|/|I| for |I|>=1e-6 {worst_rel:.1e}, 10^4 rotations")


def test_criterion_6_fixture_minimality():
    bad = []
    for k in range(10, 19):
        a, b = fixture_pair(k)
        psd = all(np.linalg.eigvalsh(pauli_compose(f))[0] >= -1e-10 for f in (a, b))
        if not psd or invariant_mismatches(invariants18(a), invariants18(b), FIXTURE_TOL) != [k]:
            bad.append(k)
    ok = not bad
    assert report(6, ok, "all of 10..18 differ only at k and are PSD" if ok else f"failing rows {bad}")


def test_criterion_7_canonical_completeness():
    rng = np.random.default_rng(7)
    worst = 0.0
    collapsed = 0
    wrong_tag = 0
    mirror = np.diag([1.0, 1.0, -1.0])
    for tag in CASE_TAGS:
        for _ in range(1000):
            f = case_form(tag, rng)
            g = f.rotated(random_rotation(rng), random_rotation(rng))
            cf, cg = canonicalize_state(f), canonicalize_state(g)
            wrong_tag += (cf.case != tag) + (cg.case != tag)
            worst = max(worst, cf.canonical.distance(cg.canonical))
            h = PauliForm(mirror @ f.s, mirror @ f.p, mirror @ f.beta @ mirror)
            h = h.rotated(random_rotation(rng), random_rotation(rng))
            if invariant_mismatches(invariants18(f), invariants18(h)):
                collapsed += cf.canonical.distance(canonicalize_state(h).canonical) <= 1e-7
    for _ in range(1000):
        f, g = random_form(rng), random_form(rng)
        collapsed += canonicalize_state(f).canonical.distance(canonicalize_state(g).canonical) <= 1e-7
    ok = worst <= 1e-7 and collapsed == 0 and wrong_tag == 0
    assert report(7, ok, f"max canonical distance {worst:.1e} over 8x10^3 pairs, inequivalent collapses {collapsed}")


def test_criterion_8_heisenberg_synthesis():
    cnot = solve_time(heisenberg(), CNOT, 4 * np.pi)
    swap = solve_time(heisenberg(), SWAP, 4 * np.pi)
    root = solve_time(heisenberg(), SQRT_SWAP, 4 * np.pi)
    swap_err = min(abs(t - np.pi) for t, _ in swap.times)
    root_err = min(abs(t - np.pi / 2) for t, _ in root.times)
    ok = cnot.verdict == "at_least_two" and swap_err <= 1e-9 and root_err <= 1e-9
    assert report(8, ok, f"CNOT verdict {cnot.verdict}, SWAP t error {swap_err:.1e}, sqrt-SWAP t error {root_err:.1e}")


def test_criterion_9_josephson():
    sols = josephson_alpha(5)
    worst_f = 0.0
    bad = 0
    for n, alpha, t in sols:
        worst_f = max(worst_f, abs(alpha**2 * np.cos(np.pi * (n + 0.5) * np.sqrt(1 + alpha**-2)) + 1))
        bad += not gates_equivalent(evolve(josephson(alpha), t), CNOT, 1e-6)
    near = [a for n, a, _ in sols if n == 2 and abs(a - 1.2) < 0.01]
    ok = bool(sols) and worst_f <= 1e-10 and bad == 0 and bool(near)
    assert report(9, ok, f"{len(sols)} solutions for n<=5, max |f| {worst_f:.1e}, non-CNOT {bad}, "
                         f"n=2 root {near[0] if near else None}")


def test_criterion_10_ent_form():
    rng = np.random.default_rng(10)
    r = np.sqrt(0.5)
    bells = [[r, 0, 0, r], [r, 0, 0, -r], [0, r, r, 0], [0, r, -r, 0]]
    bell_err = max(abs(abs(ent_form(b)) - 0.5) for b in bells)
    prod = 0.0
    drift = 0.0
    for _ in range(1000):
        a, b = random_unitary(rng, 2)[:, 0], random_unitary(rng, 2)[:, 0]
        prod = max(prod, abs(ent_form(np.kron(a, b))))
        psi = random_unitary(rng)[:, 0]
        drift = max(drift, abs(ent_form(random_local(rng) @ psi) - ent_form(psi)))
    ok = bell_err <= 1e-12 and prod <= 1e-12 and drift <= 1e-10
    assert report(10, ok, f"Bell error {bell_err:.1e}, product max {prod:.1e}, local drift {drift:.1e}")


if __name__ == "__main__":
    import sys

    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    print("\n".join(summary_lines()))
    sys.exit(1 if failures else 0)
