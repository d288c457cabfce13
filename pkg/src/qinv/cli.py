"""Command-line front end.

Gates are 4x4 complex matrices in the standard basis order |00>, |01>, |10>,
|11> (first qubit most significant).  Complex numbers are ``[re, im]`` pairs.
Exit codes: 0 yes, 1 no, 2 bad input, 3 numerical failure.
"""
import argparse
import contextlib
import dataclasses
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import gates, pulse, states
from .config import DEFAULT
from .errors import InputError, NumericalError

EXIT_YES, EXIT_NO, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3

BASIS_NOTE = (
    "Basis order for all 4x4 matrices: |00>, |01>, |10>, |11> (first qubit is the "
    "most significant index). Complex entries are written as [re, im]. "
    "Built-in gates usable wherever FILE appears: " + ", ".join(gates.NAMED_GATES) + "."
)

FILE_UNITARY_TOL = 1e-6
FILE_HERMITIAN_TOL = 1e-6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- formatting

def _num(x):
    x = float(x)
    if not math.isfinite(x):
        raise NumericalError(f"non-finite value {x}")
    if abs(x) < 1e-12:
        return 0.0
    return float(f"{x:.12g}")


def _cplx(z):
    z = complex(z)
    return [_num(z.real), _num(z.imag)]


def _cmatrix(a):
    return [[_cplx(z) for z in row] for row in np.asarray(a)]


def _rmatrix(a):
    return [[_num(x) for x in row] for row in np.asarray(a)]


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# ------------------------------------------------------------------- parsing

def _load_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _complex_matrix(raw, where):
    try:
        a = np.array(raw, dtype=float)
    except (TypeError, ValueError):
        raise UsageError(f"{where}: expected a 4x4 array of [re, im] pairs") from None
    if a.shape != (4, 4, 2):
        raise UsageError(f"{where}: expected a 4x4 array of [re, im] pairs, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise UsageError(f"{where}: non-finite entry")
    return a[..., 0] + 1j * a[..., 1]


def _real_array(raw, shape, where):
    try:
        a = np.array(raw, dtype=float)
    except (TypeError, ValueError):
        raise UsageError(f"{where}: expected real numbers of shape {shape}") from None
    if a.shape != shape or not np.all(np.isfinite(a)):
        raise UsageError(f"{where}: expected finite real numbers of shape {shape}")
    return a


def load_gate(source: str) -> np.ndarray:
    """A built-in gate name or a JSON gate file, projected to the nearest unitary."""
    if source in gates.NAMED_GATES:
        return gates.NAMED_GATES[source].copy()
    data = _load_json(source)
    if not isinstance(data, dict) or "matrix" not in data:
        raise UsageError(f"{source}: gate file needs a 'matrix' field")
    u = _complex_matrix(data["matrix"], source)
    defect = float(np.max(np.abs(u.conj().T @ u - np.eye(4))))
    if defect > FILE_UNITARY_TOL:
        raise UsageError(f"{source}: matrix is not unitary (defect {defect:.3g})")
    # polar projection removes the rounding left by a 12-digit file
    lhs, _, rhs = np.linalg.svd(u)
    return lhs @ rhs


def load_state(source: str) -> states.PauliForm:
    data = _load_json(source)
    if not isinstance(data, dict) or ("rho" in data) == ("pauli" in data):
        raise UsageError(f"{source}: state file needs exactly one of 'rho' or 'pauli'")
    if "rho" in data:
        rho = _complex_matrix(data["rho"], source)
        defect = float(np.max(np.abs(rho - rho.conj().T)))
        if defect > FILE_HERMITIAN_TOL:
            raise UsageError(f"{source}: rho is not Hermitian (defect {defect:.3g})")
        return states.pauli_decompose(0.5 * (rho + rho.conj().T))
    pauli = data["pauli"]
    if not isinstance(pauli, dict) or set(pauli) != {"s", "p", "beta"}:
        raise UsageError(f"{source}: 'pauli' needs exactly the fields s, p, beta")
    return states.PauliForm(
        _real_array(pauli["s"], (3,), source),
        _real_array(pauli["p"], (3,), source),
        _real_array(pauli["beta"], (3, 3), source),
    )


def _pauli_record(f: states.PauliForm) -> dict:
    return {"s": [_num(x) for x in f.s], "p": [_num(x) for x in f.p], "beta": _rmatrix(f.beta)}


def _env_tol(default: float) -> float:
    raw = os.environ.get("QINV_TOL")
    if raw is None:
        return default
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"QINV_TOL is not a number: {raw!r}") from None
    if not (math.isfinite(tol) and tol > 0):
        raise UsageError("QINV_TOL must be a positive number")
    return tol


def _positive(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _family(text):
    try:
        return pulse.family_from_name(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# ------------------------------------------------------------------ commands

def cmd_gate_inv(args):
    inv = gates.makhlin_invariants(load_gate(args.file))
    return EXIT_YES, {
        "g1": _cplx(inv.g1),
        "g2": _num(inv.g2),
        "spectrum_phases": [_num(x) for x in inv.phases],
    }


def cmd_gate_equiv(args):
    a, b = load_gate(args.a), load_gate(args.b)
    tol = args.tol if args.tol is not None else _env_tol(DEFAULT.gate_equiv)
    ia, ib = gates.makhlin_invariants(a), gates.makhlin_invariants(b)
    same = gates.gates_equivalent(a, b, tol)
    out = {
        "equivalent": same,
        "a": {"g1": _cplx(ia.g1), "g2": _num(ia.g2)},
        "b": {"g1": _cplx(ib.g1), "g2": _num(ib.g2)},
    }
    if args.witness and same:
        w = gates.synthesize_witness(a, b, dataclasses.replace(DEFAULT, gate_equiv=tol))
        out["witness"] = {
            "w1_left": _cmatrix(w.left.w1),
            "w2_left": _cmatrix(w.left.w2),
            "w1_right": _cmatrix(w.right.w1),
            "w2_right": _cmatrix(w.right.w2),
            "phase": _num(w.phase),
        }
    return (EXIT_YES if same else EXIT_NO), out


def cmd_entangler(args):
    u = load_gate(args.file)
    inv = gates.makhlin_invariants(u)
    hull = gates.is_perfect_entangler(u)
    out = {
        "perfect_entangler": hull,
        "hull_test": hull,
        "inequality_test": gates.perfect_entangler_inequality(inv),
        "hull_margin": _num(gates.hull_margin(inv.phases)),
    }
    return (EXIT_YES if hull else EXIT_NO), out


def cmd_state_inv(args):
    inv = states.invariants18(load_state(args.file))
    return EXIT_YES, {k: _num(v) for k, v in inv.as_dict().items()}


def cmd_state_equiv(args):
    a, b = load_state(args.a), load_state(args.b)
    tol = args.tol if args.tol is not None else _env_tol(DEFAULT.state_equiv)
    bad = states.invariant_mismatches(states.invariants18(a), states.invariants18(b), tol)
    return (EXIT_NO if bad else EXIT_YES), {"equivalent": not bad, "differing_invariants": bad}


def cmd_state_canon(args):
    res = states.canonicalize_state(load_state(args.file))
    return EXIT_YES, {
        "case": res.case,
        "canonical": _pauli_record(res.canonical),
        "witness": {"o": _rmatrix(res.witness.o), "p": _rmatrix(res.witness.p_rot)},
    }


def cmd_pulse_solve(args):
    res = pulse.solve_time(args.family, load_gate(args.target), args.t_max)
    out = {
        "family": args.family.kind,
        "params": {k: _num(v) for k, v in args.family.params.items()},
        "verdict": res.verdict,
        "times": [{"t": _num(t), "mismatch": _num(m)} for t, m in res.times],
    }
    return (EXIT_NO if res.verdict == "at_least_two" else EXIT_YES), out


def cmd_pulse_josephson(args):
    if args.n_max < 0:
        raise UsageError("--n-max must be nonnegative")
    roots = pulse.josephson_alpha(args.n_max, args.alpha_max)
    out = {"solutions": [{"n": n, "alpha": _num(a), "t": _num(t)} for n, a, t in roots]}
    return (EXIT_YES if roots else EXIT_NO), out


def cmd_pulse_windows(args):
    wins = pulse.entangler_windows(args.family, args.t_max)
    out = {"family": args.family.kind, "windows": [[_num(a), _num(b)] for a, b in wins]}
    return (EXIT_YES if wins else EXIT_NO), out


def cmd_fixtures(args):
    pair = states.fixture_pair(args.index)
    out_dir = Path(args.out_dir)
    paths = []
    for tag, f in zip("ab", pair):
        path = out_dir / f"fixture_{args.index}_{tag}.json"
        try:
            path.write_text(_dump({"pauli": _pauli_record(f)}))
        except OSError as exc:
            raise UsageError(f"cannot write {path}: {exc.strerror}") from None
        paths.append(str(path))
    return EXIT_YES, {"index": args.index, "files": paths}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qinv", description="Local-equivalence tools for two-qubit gates and states.",
                     epilog=BASIS_NOTE)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gate-inv", help="G1, G2 and spectrum of a gate", epilog=BASIS_NOTE)
    p.add_argument("file")
    p.set_defaults(func=cmd_gate_inv)

    p = sub.add_parser("gate-equiv", help="are two gates locally equivalent", epilog=BASIS_NOTE)
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--witness", action="store_true", help="also print local gates taking A to B")
    p.add_argument("--tol", type=_positive, help="invariant tolerance (default 1e-6 or $QINV_TOL)")
    p.set_defaults(func=cmd_gate_equiv)

    p = sub.add_parser("entangler", help="is a gate a perfect entangler", epilog=BASIS_NOTE)
    p.add_argument("file")
    p.set_defaults(func=cmd_entangler)

    state_note = BASIS_NOTE + ' State files hold {"rho": 4x4} or {"pauli": {"s", "p", "beta"}}.'
    p = sub.add_parser("state-inv", help="the 18 state invariants", epilog=state_note)
    p.add_argument("file")
    p.set_defaults(func=cmd_state_inv)

    p = sub.add_parser("state-equiv", help="are two states locally equivalent", epilog=state_note)
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--tol", type=_positive, help="invariant tolerance (default 1e-10 or $QINV_TOL)")
    p.set_defaults(func=cmd_state_equiv)

    p = sub.add_parser("state-canon", help="canonical representative of a state", epilog=state_note)
    p.add_argument("file")
    p.set_defaults(func=cmd_state_canon)

    pp = sub.add_parser("pulse", help="one-pulse synthesis")
    psub = pp.add_subparsers(dest="pulse_command", required=True, parser_class=_Parser)
    family_help = "heisenberg, xy, yy or josephson:ALPHA"

    p = psub.add_parser("solve", help="pulse lengths giving a target gate", epilog=BASIS_NOTE)
    p.add_argument("--family", type=_family, required=True, help=family_help)
    p.add_argument("--target", required=True)
    p.add_argument("--t-max", type=_positive, required=True)
    p.set_defaults(func=cmd_pulse_solve)

    p = psub.add_parser("josephson", help="Josephson couplings giving CNOT")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--alpha-max", type=_positive, default=50.0)
    p.set_defaults(func=cmd_pulse_josephson)

    p = psub.add_parser("windows", help="time windows of perfect entanglers")
    p.add_argument("--family", type=_family, required=True, help=family_help)
    p.add_argument("--t-max", type=_positive, required=True)
    p.set_defaults(func=cmd_pulse_windows)

    p = sub.add_parser("fixtures", help="write a pair of states differing in one invariant")
    p.add_argument("--index", type=int, required=True, help="invariant index, 10..18")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_fixtures)
    return parser


def run(argv) -> tuple:
    """Execute one command; returns ``(exit_code, stdout_text)``.

    Diagnostics go to stderr as a single line.
    """
    parser = build_parser()
    captured = io.StringIO()
    try:
        with contextlib.redirect_stdout(captured):
            args = parser.parse_args(list(argv))
    except SystemExit as exc:
        # --help
        return (exc.code or 0), captured.getvalue()
    except UsageError as exc:
        print(f"qinv: {exc}", file=sys.stderr)
        return EXIT_INPUT, ""
    try:
        code, out = args.func(args)
    except (UsageError, InputError, ValueError) as exc:
        print(f"qinv: {exc}", file=sys.stderr)
        return EXIT_INPUT, ""
    except (NumericalError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"qinv: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC, ""
    return code, _dump(out)


def main(argv=None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
