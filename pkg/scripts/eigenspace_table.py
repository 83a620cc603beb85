"""Print H^1(F) eigenspace dimensions for the real catalog arrangements,
next to the multinet lower bounds, and check the deconing line does not matter.

    python3 scripts/eigenspace_table.py [--all-lines]
"""
import argparse
import time

from arrmono.arrgeo import builtin, intersection_lattice
from arrmono.multinet import EnumerationOptions, enumerate_multinets, monodromy_lower_bounds
from arrmono.pi1cover import arrangement_presentation, milnor_eigenspaces

NAMES = ["A3", "B3", "Pappus"]


def bounds_by_order(arr, lat) -> dict[int, int]:
    out: dict[int, int] = {}
    for k in (3, 4):
        for mn in enumerate_multinets(arr, lat, k, EnumerationOptions(max_support=arr.d)):
            for b in monodromy_lower_bounds(mn, arr.d):
                out[b.order] = max(out.get(b.order, 0), b.bound)
    return out


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--all-lines", action="store_true", help="recompute with every line sent to infinity")
    args = ap.parse_args()
    print(f"{'name':8} {'order':>5} {'roots':>5} {'dim':>4} {'bound':>5}")
    for name in NAMES:
        arr = builtin(name)
        lat = intersection_lattice(arr)
        t0 = time.perf_counter()
        rep = milnor_eigenspaces(arr, lattice=lat, all_roots=True)
        elapsed = time.perf_counter() - t0
        bounds = bounds_by_order(arr, lat)
        for entry in rep.to_json()["by_order"]:
            n = entry["order"]
            b = bounds.get(n, "-")
            print(f"{name:8} {n:5} {entry['roots']:5} {entry['dim']:4} {b:>5}")
        mono = "trivial" if rep.trivial_monodromy else "non-trivial"
        print(f"{name:8} b1(F) = {rep.b1_F}, monodromy {mono}, {elapsed:.2f}s")
        if args.all_lines:
            seen = {milnor_eigenspaces(arr, arrangement_presentation(arr, lat, i)).b1_F for i in range(arr.d)}
            print(f"{name:8} b1(F) over all {arr.d} infinity lines: {sorted(seen)}")
        print()


if __name__ == "__main__":
    main()
