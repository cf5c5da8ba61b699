"""Compare forward, backward, mixed and exact solutions on a queueing instance.

Run with ``python3 demos/truncation_errors.py``.
"""
from bdpoisson import (
    Arithmetic,
    TruncationPolicy,
    build_tables,
    mm1m,
    passage_tables,
    solve_exact,
    solve_forward,
    solve_mixed,
)


def main():
    model = mm1m(0.9, 1.0, 0.5)
    tables = build_tables(model, TruncationPolicy(min_states=42))
    passage = passage_tables(tables)
    reference = build_tables(model, TruncationPolicy(min_states=42), arith=Arithmetic.multiprecision(50))

    exact = solve_exact(reference, nmax=29)
    forward = solve_forward(tables, nmax=29)
    nudged = solve_forward(tables, "perturbed:+1", nmax=29)
    mixed = solve_mixed(tables, passage, N=42)

    print(f"{'n':>3} {'exact':>22} {'forward':>12} {'forward+ulp':>12} {'mixed':>22}")
    for n in range(0, 30, 3):
        print(
            f"{n:>3} {float(exact.phi[n]):22.15f} {forward.phi[n]:12.4g} "
            f"{nudged.phi[n]:12.4g} {mixed.phi[n]:22.15f}"
        )
    print(f"crossovers of the mixed scheme: m={mixed.crossover_m}, M={mixed.crossover_M}")


if __name__ == "__main__":
    main()
