"""Run the labelled-quiver checks, degree agreement and boundary table over
every maximal collection for a list of (k, n)."""
import argparse
import time

from plabic_dimer.algebra import boundary_algebra
from plabic_dimer.cmrank1 import deg_min_formula, deg_min_oracle
from plabic_dimer.collection import enumerate_maximal_collections
from plabic_dimer.dimer import gamma_of_collection, labelled_checks


def sweep(k: int, n: int, grade: int):
    cols = enumerate_maximal_collections(k, n)
    failures = 0
    start = time.perf_counter()
    for C in cols:
        Q = gamma_of_collection(C)
        bad = [v for rep in labelled_checks(Q) for v in rep.violations]
        bad += [f"deg {I} {J}" for I in C.members for J in C.members
                if deg_min_formula(I, J, n) != deg_min_oracle(I, J, n)]
        bad += boundary_algebra(Q, max_grade=grade).violations
        if bad:
            failures += 1
            print(f"  {C.labels()}: {bad[:3]}")
    print(f"({k},{n}): {len(cols)} collections, {failures} failing, {time.perf_counter() - start:.2f}s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("pairs", nargs="*", default=["2,4", "2,5", "2,6", "3,6"], help="k,n pairs")
    ap.add_argument("--grade", type=int, default=5)
    args = ap.parse_args()
    for p in args.pairs:
        k, n = map(int, p.split(","))
        sweep(k, n, args.grade)
