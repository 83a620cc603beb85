"""Multinet and resonance census over the catalog.

    python3 scripts/multinet_census.py [--budget-ms N]
"""
import argparse
from collections import Counter

from arrmono.arrgeo import BUILTIN_NAMES, builtin, intersection_lattice
from arrmono.multinet import BudgetExceeded, EnumerationOptions, enumerate_multinets, monodromy_lower_bounds
from arrmono.oscohom import resonance_components

NAMES = ["A3", "B3", "Pappus", "Hesse", "Ceva(2)", "Ceva(3)"]


def census(name: str, budget_ms: int | None) -> None:
    arr = builtin(name)
    lat = intersection_lattice(arr)
    found, complete = [], True
    for k in (3, 4):
        opts = EnumerationOptions(max_support=arr.d, time_budget_ms=budget_ms)
        try:
            found += enumerate_multinets(arr, lat, k, opts)
        except BudgetExceeded as exc:
            found += exc.partial
            complete = False
    comps = resonance_components(arr, lat, found)
    kinds = Counter((mn.k, len(mn.support), mn.reduced) for mn in found)
    print(f"{name}: d={arr.d}, points {dict(sorted(Counter(lat.multiplicities()).items()))}")
    for (k, size, reduced), count in sorted(kinds.items()):
        print(f"  {count} x {k}-multinet on {size} lines, {'reduced' if reduced else 'non-reduced'}")
    if not complete:
        print("  search stopped at the time budget")
    dims = Counter((c.provenance, c.dimension) for c in comps)
    print("  resonance: " + ", ".join(f"{n} {p} of dim {dim}" for (p, dim), n in sorted(dims.items())))
    full = [mn for mn in found if len(mn.support) == arr.d]
    for mn in full:
        for b in monodromy_lower_bounds(mn, arr.d):
            print(f"  bound: order {b.order} root exp(2 pi i {b.exponent}) has dim >= {b.bound}")


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--budget-ms", type=int, default=20000)
    ap.add_argument("names", nargs="*", default=NAMES, help=f"catalog names ({', '.join(BUILTIN_NAMES)})")
    args = ap.parse_args()
    for name in args.names:
        census(name, args.budget_ms)


if __name__ == "__main__":
    main()
