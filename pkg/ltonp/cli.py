"""
Command-line surface: `python -m ltonp <command> ...`

Progress lines go to stderr, JSON results to stdout or --out. Exit codes:
0 success, 1 a verification check above --tol, 2 an LtonpError.
"""
import argparse
import logging
import sys
from typing import List, Optional

import numpy as np

from .codec import (encode_matrix, leech_from_dict, lifting_from_dict, parameter_from_dict,
                    problem_from_dict, problem_to_dict, read_json, system_from_dict,
                    system_to_dict, write_json)
from .complementary import BASIS_NOTE
from .errors import LambdaNotStrictlyPositive, LtonpError
from .fronts import (LEECH_NOTE, commutant_lifting_coefficients, commutant_lifting_instance,
                     leech_residuals, leech_truncate)
from .problem import ProblemData
from .sampling import random_instance
from .settings import DEFAULT_SETTINGS, Settings
from .solver import InterpolationSolver
from .verify import (default_grid, entropy_central, entropy_of_solution, interpolation_residual,
                     schur_margin, szego_check, verify_solution)

logger = logging.getLogger("ltonp")


def say(message: str):
    print(message, file=sys.stderr)


def _settings(args) -> Settings:
    settings = Settings.from_file(args.config) if args.config else DEFAULT_SETTINGS
    return settings.with_overrides(tol=args.tol, circle_points=args.grid, seed=args.seed)


def _load_problem(path: str) -> ProblemData:
    prob = problem_from_dict(read_json(path))
    say(f"📥 Loaded problem: {prob.describe()}")
    return prob


def _solver(prob: ProblemData, settings: Settings) -> InterpolationSolver:
    solver = InterpolationSolver(prob, settings)
    pick = solver.pick
    status = "✅" if pick.is_strictly_positive else "❌"
    say(f"{status} Pick operator: {pick.classification.value} "
        f"(min eigenvalue {pick.min_eigenvalue:.3e})")
    if not pick.is_strictly_positive:
        raise LambdaNotStrictlyPositive(pick.classification, pick.min_eigenvalue)
    return solver


def _parameter(args, solver: InterpolationSolver):
    if not args.param:
        return None
    X = parameter_from_dict(read_json(args.param))
    say(f"🎛️  Parameter: {X.kind}, shape {X.shape}")
    return X


def _pick_summary(solver: InterpolationSolver) -> dict:
    pick = solver.pick
    return {
        "classification": pick.classification.value,
        "min_eigenvalue": pick.min_eigenvalue,
        "stein_residuals": dict(pick.residuals),
    }


def _solution_payload(prob: ProblemData, solver: InterpolationSolver, args, settings: Settings) -> dict:
    X = _parameter(args, solver)
    F = solver.solution(X)
    residual = interpolation_residual(prob, F, settings.stein_tol)
    margin = schur_margin(F, default_grid(settings))
    say(f"📊 Interpolation residual {residual:.3e}, Schur margin {margin:.3e}")
    return {
        "problem": problem_to_dict(prob),
        "pick": _pick_summary(solver),
        "solution": system_to_dict(F),
        "central": X is None,
        "diagnostics": {"interpolation_residual": residual, "schur_margin": margin},
        "notes": solver.notes(),
    }


def cmd_solve(args, settings: Settings) -> int:
    prob = _load_problem(args.problem)
    write_json(_solution_payload(prob, _solver(prob, settings), args, settings), args.out)
    return 0


def cmd_verify(args, settings: Settings) -> int:
    prob = _load_problem(args.problem)
    if args.solution:
        solver = InterpolationSolver(prob, settings)
        F = system_from_dict(read_json(args.solution))
        say(f"📥 Candidate solution with state dimension {F.state_dim}")
    else:
        solver = _solver(prob, settings)
        F = solver.solution(_parameter(args, solver))
    report = verify_solution(prob, F, settings, solver=solver)
    write_json(report.to_dict(), args.out)
    failures = report.failures(settings.tol)
    if failures:
        say(f"❌ Checks above tolerance {settings.tol:.1e}: {', '.join(failures)}")
        return 1
    say(f"✅ All checks within {settings.tol:.1e}")
    return 0


def cmd_pair(args, settings: Settings) -> int:
    prob = _load_problem(args.problem)
    solver = InterpolationSolver(prob, settings)
    pair = solver.pair
    say(f"✅ Complementary pair with e={pair.e}, worst identity residual {pair.residuals.max():.3e}")
    write_json({
        "e": pair.e,
        "C": encode_matrix(pair.C),
        "D": encode_matrix(pair.D),
        "residuals": pair.residuals.as_dict(),
        "notes": [f"C and D are {BASIS_NOTE}"],
    }, args.out)
    return 0


def cmd_entropy(args, settings: Settings) -> int:
    prob = _load_problem(args.problem)
    solver = _solver(prob, settings)
    central = entropy_central(solver.pick, prob)
    szego = szego_check(prob, solver.pick, solver.central(), settings.szego_nodes)
    say(f"📊 Szego check: det {szego.lhs:.6e} vs quadrature {szego.rhs:.6e}")
    payload = {
        "entropy_central": encode_matrix(central),
        "szego": {"lhs": szego.lhs, "rhs": szego.rhs, "relative_gap": szego.relative_gap},
        "notes": solver.notes(),
    }
    X = _parameter(args, solver)
    if X is not None:
        entropy = entropy_of_solution(solver.solution(X), settings.entropy_start,
                                      settings.entropy_tol, settings.entropy_cap)
        gap = float(np.min(np.linalg.eigvalsh(central - entropy)))
        say(f"📊 Smallest eigenvalue of the entropy gap: {gap:.3e}")
        payload["entropy_solution"] = encode_matrix(entropy)
        payload["min_gap_eigenvalue"] = gap
    write_json(payload, args.out)
    return 0


def cmd_leech(args, settings: Settings) -> int:
    leech = leech_from_dict(read_json(args.problem))
    prob = leech_truncate(leech)
    say(f"📥 Leech data reduced at order N={leech.N}: {prob.describe()}")
    solver = InterpolationSolver(prob, settings)
    payload = {"problem": problem_to_dict(prob), "pick": _pick_summary(solver), "notes": [LEECH_NOTE]}
    if solver.pick.is_strictly_positive:
        F = solver.central()
        table = leech_residuals(leech, F)
        say(f"📊 Worst residual modulo lambda^N: {max(table):.3e}")
        payload["solution"] = system_to_dict(F)
        payload["residuals"] = table
    else:
        say(f"⚠️  Pick operator is {solver.pick.classification.value}; no solution produced")
    write_json(payload, args.out)
    return 0


def cmd_clift(args, settings: Settings) -> int:
    lifting = lifting_from_dict(read_json(args.problem))
    prob = commutant_lifting_instance(lifting, settings.lifting_tol)
    say(f"✅ Co-isometric lifting data: {prob.describe()}")
    solver = _solver(prob, settings)
    payload = _solution_payload(prob, solver, args, settings)
    lifted = commutant_lifting_coefficients(prob, solver.pick, solver.pair, solver.coeffs)
    payload["lifting"] = {
        "order": lifted.order,
        "gramian_residual": lifted.gramian_residual,
        "lifting_identity_residual": lifted.lifting_identity_residual,
        "q0_residual": lifted.q0_residual,
        "r0_residual": lifted.r0_residual,
    }
    write_json(payload, args.out)
    return 0


def cmd_sample(args, settings: Settings) -> int:
    rng = np.random.default_rng(settings.seed)
    prob = random_instance(rng, args.n, args.p, args.q)
    say(f"🎲 Seed {settings.seed}: {prob.describe()}")
    write_json(problem_to_dict(prob), args.out)
    return 0


COMMANDS = {
    "solve": (cmd_solve, "solve a problem (central solution or --param)"),
    "verify": (cmd_verify, "run every verification check"),
    "pair": (cmd_pair, "complementary pair and its identities"),
    "entropy": (cmd_entropy, "central entropy, Szego check, optional --param gap"),
    "leech": (cmd_leech, "reduce and solve a polynomial Leech problem"),
    "clift": (cmd_clift, "solve a commutant lifting instance"),
    "sample": (cmd_sample, "write a seeded random problem"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="acceptance threshold (default 1e-8)")
    common.add_argument("--grid", type=int, default=None, help="number of unit-circle samples")
    common.add_argument("--param", default=None, help="Schur parameter JSON file")
    common.add_argument("--out", default=None, help="write JSON here instead of stdout")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for sample and for the random entropy comparison of verify")
    common.add_argument("--config", default=None, help="settings JSON file")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(prog="ltonp", description="LTONP interpolation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        cmd = sub.add_parser(name, parents=[common], help=help_text)
        if name == "sample":
            cmd.add_argument("--n", type=int, default=3)
            cmd.add_argument("--p", type=int, default=2)
            cmd.add_argument("--q", type=int, default=2)
        else:
            cmd.add_argument("problem", help="problem JSON file")
        if name == "verify":
            cmd.add_argument("--solution", default=None, help="candidate solution system JSON")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    handler, _ = COMMANDS[args.command]
    try:
        return handler(args, _settings(args))
    except LtonpError as exc:
        say(f"❌ {type(exc).__name__}: {exc}")
        return 2
    except (OSError, ValueError) as exc:
        say(f"❌ {exc}")
        return 2
