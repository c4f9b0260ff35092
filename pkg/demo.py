#!/usr/bin/env python3
"""
Complete LTONP Demo
Walks through the one-point case, a random instance, the Leech reduction
and a commutant lifting instance
"""
import argparse

import numpy as np

from ltonp import (CommutantLiftingInstance, InterpolationSolver, LeechInstance, ProblemData,
                   SchurParameter, commutant_lifting_coefficients, commutant_lifting_instance,
                   entropy_central, entropy_of_solution, interpolation_residual, leech_residual,
                   leech_solvability, leech_truncate, schur_margin)
from ltonp.complementary import ComplementaryPair
from ltonp.sampling import random_contraction, random_instance
from ltonp.verify import default_grid, szego_check

GRID = default_grid()


def pause(args, message: str):
    if not args.no_pause:
        input(f"\n📍 {message}")


def demo_scalar():
    """One point, F(0) = 1/2"""
    print("\n" + "="*60)
    print("🎯 ONE-POINT DEMO")
    print("="*60)
    print("Z = 0, B = 1, Btilde = 1/2: every solution is (lambda x + 1/2) / (1 + lambda x / 2)")

    pair = ComplementaryPair(C=np.array([[1.0 + 0j]]), D=np.array([[0.0 + 0j]]))
    solver = InterpolationSolver(ProblemData(Z=[[0.0]], B=[[1.0]], Btilde=[[0.5]]), pair=pair)
    print(f"📊 Pick operator: {solver.pick.classification.value}, Lambda = {solver.pick.Lambda[0, 0].real:.4f}")

    for x in (0.0, 0.3, -0.8):
        F = solver.solution(SchurParameter.constant([[x]]))
        value = F.evaluate(0.5)[0, 0]
        expected = (0.5 * x + 0.5) / (1 + 0.25 * x)
        entropy = entropy_of_solution(F)[0, 0].real
        print(f"   x = {x:+.1f}: F(0.5) = {value.real:.6f} (closed form {expected:.6f}), entropy {entropy:.6f}")

    print(f"🔥 Central entropy: {entropy_central(solver.pick, solver.prob)[0, 0].real:.6f} (1 - b^2 = 0.75)")
    print("✅ One-point demo completed!")


def demo_random_instance(seed: int):
    print("\n" + "="*60)
    print("🎲 RANDOM INSTANCE DEMO")
    print("="*60)
    rng = np.random.default_rng(seed)
    prob = random_instance(rng, 4, 2, 2)
    print(f"📥 {prob.describe()}")

    solver = InterpolationSolver(prob)
    pick = solver.pick
    print(f"📊 Pick operator: {pick.classification.value}, min eigenvalue {pick.min_eigenvalue:.4f}")
    print(f"🔗 Complementary pair: e = {solver.pair.e}, worst identity residual {solver.pair.residuals.max():.2e}")

    central = solver.central()
    print(f"⭐ Central solution: state dimension {central.state_dim}, "
          f"residual {interpolation_residual(prob, central):.2e}, Schur margin {schur_margin(central, GRID):+.4f}")

    X = SchurParameter.constant(random_contraction(rng, solver.pair.e, prob.q, 0.7))
    F = solver.solution(X)
    print(f"🎛️  Solution for a random contraction: residual {interpolation_residual(prob, F):.2e}, "
          f"Schur margin {schur_margin(F, GRID):+.4f}")

    gap = entropy_central(pick, prob) - entropy_of_solution(F)
    print(f"🔥 Smallest eigenvalue of the entropy gap: {np.min(np.linalg.eigvalsh(gap)):.3e}")
    szego = szego_check(prob, pick, central)
    print(f"📈 Szego: det {szego.lhs:.8f} vs quadrature {szego.rhs:.8f}")
    print("✅ Random instance demo completed!")


def demo_leech():
    print("\n" + "="*60)
    print("🧩 LEECH DEMO")
    print("="*60)
    print("G(lambda) = [2, lambda], K = 1: find a Schur column F with G F = 1 modulo lambda^N")
    for N in (1, 2, 4, 8):
        leech = LeechInstance(G_coeffs=[[[2.0, 0.0]], [[0.0, 1.0]]], K_coeffs=[[[1.0]]], N=N)
        result = leech_solvability(leech)
        line = f"   N = {N}: {result.classification.value}, min eigenvalue {result.min_eigenvalue:.4f}"
        solver = InterpolationSolver(leech_truncate(leech))
        if solver.pick.is_strictly_positive:
            line += f", residual {leech_residual(leech, solver.central()):.2e}"
        print(line)
    print("✅ Leech demo completed!")


def demo_commutant_lifting():
    print("\n" + "="*60)
    print("🏗️  COMMUTANT LIFTING DEMO")
    print("="*60)
    c = 0.6
    lifting = CommutantLiftingInstance(Z=[[0.0, 0.0], [c, 0.0]], B=np.diag([1.0, np.sqrt(1 - c * c)]),
                                       Btilde=[[0.3], [0.2]])
    prob = commutant_lifting_instance(lifting)
    solver = InterpolationSolver(prob)
    lifted = commutant_lifting_coefficients(prob, solver.pick, solver.pair, solver.coeffs)
    print(f"📥 Co-isometric data: {prob.describe()}")
    print(f"📊 ||P - I|| = {lifted.gramian_residual:.2e}")
    print(f"🔁 Lifting identity residual {lifted.lifting_identity_residual:.2e} at order {lifted.order}")
    print(f"   Q0 agreement {lifted.q0_residual:.2e}, R0 agreement {lifted.r0_residual:.2e}")
    print("✅ Commutant lifting demo completed!")


def main():
    """Run the complete demo"""
    parser = argparse.ArgumentParser(description="LTONP walkthrough")
    parser.add_argument("--no-pause", action="store_true", help="run without waiting for Enter")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    print("🧮 LTONP Interpolation Demo")
    print("Solves left-tangential Nevanlinna-Pick problems and checks every answer")
    pause(args, "Press Enter to start the demo...")

    demo_scalar()
    pause(args, "Press Enter to continue to the random instance...")

    demo_random_instance(args.seed)
    pause(args, "Press Enter to continue to the Leech reduction...")

    demo_leech()
    pause(args, "Press Enter to continue to commutant lifting...")

    demo_commutant_lifting()

    print("\n" + "="*60)
    print("🎉 ALL DEMOS COMPLETED!")
    print("="*60)
    print(f"\n💡 Next steps:")
    print("- Solve the bundled problems: python -m ltonp solve settings/problems/scalar.json")
    print("- Run the acceptance suite: python -m ltonp.tests.acceptance_test")
    print("- Try your own data with python -m ltonp verify <problem.json>")

    print("\n👋 Demo finished!")

if __name__ == '__main__':
    main()
