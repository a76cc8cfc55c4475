"""Run the lowest-term identity on many seeded instances and tabulate (j, i)."""

import argparse
import collections
import random
import time

from wittkit.harness import lowest_term_check, random_lowest_term_instance


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=100)
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    tally = collections.Counter()
    bad = 0
    t0 = time.perf_counter()
    for _ in range(args.instances):
        a, f = random_lowest_term_instance(rng.randrange(1 << 62), 2, args.n)
        rep = lowest_term_check(a, f)
        tally[(rep.j, rep.i, len(rep.records))] += 1
        bad += len(rep.falsifications)
    print(f"{args.instances} instances in W_{args.n}, {bad} falsifications, "
          f"{time.perf_counter() - t0:.1f}s")
    for (j, i, m), count in sorted(tally.items()):
        print(f"  j={j} i={i} n_max={m}: {count}")


if __name__ == "__main__":
    main()
