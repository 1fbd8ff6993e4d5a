"""Count completions of an instance two ways: SAT enumeration and brute force.

    python scripts/count_completions.py fixtures/tol.aie fixtures/repaired.ais \
        --default-scope 0 --scope TruckList=3
"""
import argparse
import time

from metareason.instance import ScopeConfig
from metareason.kernel.brute import count_models
from metareason.pipeline import Analysis, load_instance, load_metamodel


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("metamodel")
    ap.add_argument("instance")
    ap.add_argument("--default-scope", type=int, default=3)
    ap.add_argument("--scope", action="append", default=[], metavar="Class=n")
    ap.add_argument("--bitwidth", type=int, default=8)
    ap.add_argument("--skip-brute", action="store_true")
    args = ap.parse_args()

    per_class = {k: int(v) for k, v in (s.split("=") for s in args.scope)}
    mm = load_metamodel(args.metamodel)
    an = Analysis(mm, load_instance(args.instance, mm), ScopeConfig(args.default_scope, per_class, args.bitwidth))
    print(f"universe: {len(an.prepared.universe)} atoms, {an.translation.num_vars} vars, "
          f"{len(an.translation.clauses)} clauses")

    t = time.perf_counter()
    n = sum(1 for _ in an.completions())
    print(f"sat enumeration: {n} completions in {time.perf_counter() - t:.2f}s")
    if not args.skip_brute:
        t = time.perf_counter()
        prep = an.prepared
        m = count_models([c.formula for c in prep.problem.constraints], prep.bounds, args.bitwidth)
        print(f"brute force:     {m} instances in {time.perf_counter() - t:.2f}s")
        print("match" if m == n else "MISMATCH")


if __name__ == "__main__":
    main()
