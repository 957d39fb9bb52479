"""Exhaustive audit of the colored-cycle mixing bounds.

Four claims about the lazy walk on a balanced red/blue cycle are checked
by exact computation over every balanced coloring of small cycles, every
start vertex, and every step count up to a horizon:

  coverage   separation(t) <= Pr(midpoint-coverage time > t)
  vertices   separation(t) <= Pr(fewer than 2k-1 distinct vertices visited)
  distance   separation(t) <= Pr(not yet moved 2k-1 from the start)
  fairness   paths that crossed a set's midpoint end on red and blue
             members of that set with equal mass

plus the decomposition gap claim:

  gaps       every alternating set of the decomposition has consecutive
             members at most 2k-1 apart

The sweep shows coverage, vertices, fairness, and gaps are all violated
(gaps unachievably so: some colorings admit NO k-set partition within the
bound), while distance holds everywhere tested.  The failing invariant
tests in tests/test_cycle.py and the failing acceptance criteria cite
this script.

Run:  python scripts/sweep_cycle_bounds.py [--full]
      --full extends the gap-existence search to 14-vertex cycles
"""

import argparse
import sys
from fractions import Fraction as F
from itertools import combinations

from mixscope.cycle import (
    alternating_decomposition,
    compute_k,
    coverage_time_tail,
    distance_moved_tail,
    max_gap,
    parse_coloring,
    reflection_balance,
    check_red_dominance,
    separation_profile,
    vertex_count_tail,
)


def balanced_colorings(size):
    for reds in combinations(range(size), size // 2):
        yield tuple("R" if v in reds else "B" for v in range(size))


def sweep_walk_bounds(sizes=(4, 6, 8), horizon=12):
    counts = {"coverage": 0, "vertices": 0, "distance": 0, "fairness": 0,
              "dominance": 0, "instances": 0}
    first = {}
    for size in sizes:
        for coloring in balanced_colorings(size):
            sets = alternating_decomposition(coloring)
            for x0 in range(size):
                counts["instances"] += 1
                seps = separation_profile(coloring, x0, horizon)
                tails = {
                    "coverage": coverage_time_tail(coloring, x0, horizon),
                    "vertices": vertex_count_tail(coloring, x0, horizon),
                    "distance": distance_moved_tail(coloring, x0, horizon),
                }
                for name, tail in tails.items():
                    for t, (s, b) in enumerate(zip(seps, tail)):
                        if s > b:
                            counts[name] += 1
                            first.setdefault(
                                name, ("".join(coloring), x0, t, s, b))
                for aset in sets:
                    for t, (red, blue) in enumerate(
                            reflection_balance(coloring, aset, x0, horizon)):
                        if red != blue:
                            counts["fairness"] += 1
                            first.setdefault(
                                "fairness",
                                ("".join(coloring), x0, t, red, blue))
                rep = check_red_dominance(coloring, x0, horizon)
                if rep.precondition_holds and not rep.dominance_holds:
                    counts["dominance"] += 1
                    first.setdefault("dominance", ("".join(coloring), x0))
    return counts, first


def gap_audit(sizes, search_sizes):
    print("decomposition gap bound (members at most 2k-1 apart)")
    for size in sizes:
        bad = 0
        worst = 0
        for coloring in balanced_colorings(size):
            k = compute_k(coloring)
            for a in alternating_decomposition(coloring):
                g = max_gap(a, size)
                if g > 2 * k - 1:
                    bad += 1
                    worst = max(worst, g - (2 * k - 1))
        print(f"  size {size}: {bad} sets over the bound (worst excess {worst})")
    print()
    print("existence search: colorings with NO k-set partition within the bound")
    for size in search_sizes:
        missing = [
            "".join(c) for c in balanced_colorings(size)
            if not conforming_partition_exists(c)
        ]
        print(f"  size {size}: {len(missing)} colorings"
              + (f", e.g. {missing[0]}" if missing else ""))


def conforming_partition_exists(coloring):
    size = len(coloring)
    k = compute_k(coloring)
    cap = 2 * k - 1
    state = [None] * k

    def wrap_ok():
        for st in state:
            if st is None or st[0] == st[2] or st[3] == st[1]:
                return False
            if (st[0] - st[2]) % size > cap:
                return False
        return True

    def bt(v):
        if v == size:
            return wrap_ok()
        if any(st is not None and v - st[2] > cap for st in state):
            return False
        opened = sum(st is not None for st in state)
        for j in range(min(opened + 1, k)):
            st = state[j]
            if st is None:
                state[j] = (v, coloring[v], v, coloring[v])
                if bt(v + 1):
                    return True
                state[j] = None
            elif coloring[v] != st[3] and v - st[2] <= cap:
                state[j] = (st[0], st[1], v, coloring[v])
                if bt(v + 1):
                    return True
                state[j] = st
        return False

    return bt(0)


def mod6_case_study(horizon=10):
    coloring = parse_coloring("RRBRBB" * 2)
    print("twelve-vertex case study (RRBRBB twice, start 0)")
    seps = separation_profile(coloring, 0, horizon)
    cov = coverage_time_tail(coloring, 0, horizon)
    dst = distance_moved_tail(coloring, 0, horizon)
    hand = [(0, 2, 3, 5, 6, 8, 9, 11), (1, 4, 7, 10)]
    hand_cov = coverage_time_tail(coloring, 0, horizon, sets=hand)
    print(f"  {'t':>3} {'separation':>14} {'coverage':>14} "
          f"{'hand-set cov':>14} {'distance':>14}")
    for t in range(horizon + 1):
        flag = "  <-- exceeds coverage" if seps[t] > cov[t] else ""
        print(f"  {t:>3} {str(seps[t]):>14} {str(cov[t]):>14} "
              f"{str(hand_cov[t]):>14} {str(dst[t]):>14}{flag}")
    hand_bad = sum(s > c for s, c in zip(seps, hand_cov))
    print(f"  hand-set coverage violations: {hand_bad} (their midpoints are "
          "evenly spaced, so the reflection pairing actually works there)")
    print()


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--full", action="store_true",
                        help="extend the existence search to size 14")
    args = parser.parse_args()

    mod6_case_study()

    print("exhaustive walk-bound sweep: sizes 4, 6, 8, all starts, t <= 12")
    counts, first = sweep_walk_bounds()
    print(f"  instances: {counts['instances']}")
    for name in ("coverage", "vertices", "distance", "fairness", "dominance"):
        line = f"  {name:<9} violations: {counts[name]}"
        if name in first:
            line += f"  first: {first[name]}"
        print(line)
    print()

    gap_audit(sizes=(4, 6, 8, 10, 12),
              search_sizes=(6, 8, 10, 12, 14) if args.full else (6, 8, 10, 12))

    ok = counts["distance"] == 0 and counts["dominance"] == 0
    print()
    print("distance bound and red dominance: "
          + ("no violations, as expected" if ok else "UNEXPECTED VIOLATIONS"))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
