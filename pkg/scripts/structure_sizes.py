"""Term counts and build times of the structure polynomials within the caps."""

import argparse
import time

from wittkit.config import get_settings
from wittkit.wittpoly import compute_structure


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 3, 5])
    args = ap.parse_args()
    caps = get_settings().caps
    for p in args.primes:
        n = caps.cap(p)
        t0 = time.perf_counter()
        ws = compute_structure(p, n)
        dt = time.perf_counter() - t0
        print(f"p={p} n={n} built in {dt:.2f}s")
        for k in range(n):
            print(f"  k={k}: |S|={len(ws.sum_polys[k])} |P|={len(ws.prod_polys[k])} "
                  f"|N|={len(ws.neg_polys[k])}")


if __name__ == "__main__":
    main()
