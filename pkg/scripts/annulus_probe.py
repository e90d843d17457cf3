"""Check the annulus relations on every bridging triangulation of a given
(n, m) and report whether the summaries agree."""
import argparse
import itertools
import time

from plabic_dimer.surface import annulus_triangulation, lambda_relation_check


def words(n: int, m: int):
    for pos in itertools.combinations(range(n + m), n):
        yield "".join("o" if i in pos else "i" for i in range(n + m))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("n", type=int)
    ap.add_argument("m", type=int)
    ap.add_argument("--budget", type=int, default=100_000)
    args = ap.parse_args()
    seen = {}
    for w in words(args.n, args.m):
        start = time.perf_counter()
        rep = lambda_relation_check(annulus_triangulation(args.n, args.m, w), budget=args.budget)
        seen.setdefault(tuple(rep.summary()), []).append(w)
        print(f"{w}: confirmed={rep.confirmed} ({time.perf_counter() - start:.2f}s)")
    print(f"{len(seen)} distinct summaries")
