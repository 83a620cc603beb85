"""Rewrite the golden CLI reports in tests/golden.

Run after an intentional change to the report format, then review the diff.
"""
import json
from pathlib import Path

from arrmono.cli import main

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"

CASES = {
    "analyze_A3.json": ["analyze", "--builtin", "A3", "--json"],
    "analyze_B3.json": ["analyze", "--builtin", "B3", "--json"],
    "analyze_Pappus.json": ["analyze", "--builtin", "Pappus", "--json"],
    "analyze_Hesse.json": ["analyze", "--builtin", "Hesse", "--json"],
    "analyze_Ceva4.json": ["analyze", "--builtin", "Ceva(4)", "--json"],
    "lattice_B3.json": ["lattice", "--builtin", "B3", "--json"],
    "milnor_A3_inf0.json": ["milnor", "--builtin", "A3", "--json", "--infinity-line", "0"],
    "resonance_B3_sub9.json": ["resonance", "--builtin", "B3", "--json", "--k", "3", "--subarrangements", "9"],
}


def regenerate() -> None:
    GOLDEN.mkdir(exist_ok=True)
    for name, argv in CASES.items():
        code = main(argv + ["--out", str(GOLDEN / name)])
        print(f"{name}: exit {code}")
    (GOLDEN / "index.json").write_text(json.dumps(CASES, indent=2) + "\n")


if __name__ == "__main__":
    regenerate()
