"""Probe the closed-form shortcut for the tracked-card top probability.

The shortcut claims that for the half-lazy shuffle the card starting at
the bottom sits on top at time t with probability exactly

    (1 - C(t, floor(t/2)) / 2^t) / n

i.e. the chance that a +-1 lattice path of length t dips below zero,
divided by n.  This script computes the exact probability three ways and
shows where the shortcut breaks:

1. the single-card position chain (dynamic program) agrees with full-deck
   path enumeration exactly, on every small instance checked, so the DP
   is a trustworthy exact oracle;
2. the implied tail 1 - n * Pr(top at t) equals the lattice fraction for
   t <= 2 but diverges from t = 3 on; at t = 3 the exact implied tail is
   3/8 + 1/(8n), so the discrepancy vanishes only as n -> infinity;
3. at (n=52, t=10) the exact probability is below the claimed value, yet
   the separation lower bound derived from the claim still holds because
   the true implied tail exceeds the lattice fraction.

Run:  python scripts/walk1_exactness_probe.py
"""

from fractions import Fraction as F

from mixscope.verify import (
    count_nonnegative_paths,
    enumerate_paths,
    walk1_position_distribution,
)


def enumerated_top_probability(n: int, t: int) -> F:
    total = F(0)
    for path in enumerate_paths("walk1", n, t):
        if path.decks[-1].index(n) == 0:
            total += path.weight
    return total


def lattice_fraction(t: int) -> F:
    return F(count_nonnegative_paths(t), 2 ** t)


def main() -> int:
    print("1. single-card DP vs full-deck enumeration")
    for n, t in [(3, 2), (4, 2), (4, 3), (5, 3), (5, 4), (6, 3)]:
        dp = walk1_position_distribution(n, t, n).weight(1)
        enum = enumerated_top_probability(n, t)
        print(f"   n={n} t={t}: dp={dp}  enumeration={enum}  match={dp == enum}")
        assert dp == enum
    print()

    print("2. implied tail 1 - n*Pr(top at t) vs lattice fraction C(t,t//2)/2^t")
    print("   (equal means the shortcut is exact)")
    for t in range(1, 6):
        lf = lattice_fraction(t)
        row = [f"t={t} lattice={lf}"]
        for n in (6, 8, 10, 12):
            implied = 1 - n * walk1_position_distribution(n, t, n).weight(1)
            marker = "=" if implied == lf else "!"
            row.append(f"n={n}:{implied}{marker}")
        print("  ", "  ".join(row))
    print()

    print("   at t=3 the exact implied tail is 3/8 + 1/(8n):")
    for n in range(5, 10):
        implied = 1 - n * walk1_position_distribution(n, 3, n).weight(1)
        expected = F(3, 8) + F(1, 8 * n)
        print(f"   n={n}: implied={implied}  3/8+1/(8n)={expected}  "
              f"match={implied == expected}")
        assert implied == expected
    print()

    print("3. the advertised instance (n=52, t=10)")
    law = walk1_position_distribution(52, 10, 52)
    pr = law.weight(1)
    claimed = (1 - lattice_fraction(10)) / 52
    bound = F(252, 1024)
    print(f"   exact Pr(top) = {pr} = {float(pr):.7f}")
    print(f"   claimed value = {claimed} = {float(claimed):.7f}")
    print(f"   equal: {pr == claimed}")
    print(f"   separation lower bound 1 - 52*Pr(top) = {1 - 52 * pr} "
          f"= {float(1 - 52 * pr):.7f}")
    print(f"   still >= {bound} = {float(bound):.7f}: {1 - 52 * pr >= bound}")
    assert pr != claimed
    assert 1 - 52 * pr >= bound
    print()
    print("conclusion: the shortcut's path-reversal argument overcounts; its")
    print("inequality consequence survives, its exactness claim does not.")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
