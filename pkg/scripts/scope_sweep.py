"""Translation size and solve time of check-meta on a metamodel as the default scope grows."""
import argparse

from metareason.instance import ScopeConfig
from metareason.pipeline import Analysis, load_metamodel


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("metamodel")
    ap.add_argument("--max-scope", type=int, default=5)
    ap.add_argument("--bitwidth", type=int, default=8)
    args = ap.parse_args()
    mm = load_metamodel(args.metamodel)
    print(f"{'scope':>5} {'vars':>8} {'clauses':>9} {'transl_ms':>10} {'solve_ms':>9} outcome")
    for k in range(1, args.max_scope + 1):
        out = Analysis(mm, scope=ScopeConfig(default_scope=k, bitwidth=args.bitwidth)).solve()
        s = out.stats
        print(f"{k:>5} {s['vars']:>8} {s['clauses']:>9} {s['translation_ms']:>10.1f} {s['solving_ms']:>9.1f} {s['outcome']}")


if __name__ == "__main__":
    main()
