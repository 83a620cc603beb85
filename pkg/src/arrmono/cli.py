"""Command line entry point: ``arrmono <command> (--builtin NAME | --input FILE) [options]``.

Exit codes: 0 success with every consistency check passing, 2 when some
check fails, 1 on input errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from math import comb
from pathlib import Path

from .arrgeo import (
    BUILTIN_NAMES,
    Arrangement,
    ArrangementError,
    Lattice,
    arrangement_to_json,
    builtin,
    ceva_multinet,
    hesse_classes,
    intersection_lattice,
    load_arrangement,
)
from .exact import Cyclo, format_rational
from .multinet import (
    AxiomViolation,
    BudgetExceeded,
    EnumerationOptions,
    MultinetStructure,
    SpanNotTwo,
    direction_count,
    enumerate_multinets,
    monodromy_lower_bounds,
    nontriviality_certificate,
    realize_pencil,
    validate_multinet,
)
from .oscohom import ConsistencyError, resonance_components
from .pi1cover import (
    Character,
    NotReal,
    PresentationError,
    ProductNotOne,
    arrangement_presentation,
    cover_monodromy,
    load_presentation,
    milnor_eigenspaces,
    milnor_images,
)

SCHEMA_VERSION = "1.0"
COMMANDS = ("analyze", "lattice", "resonance", "multinets", "milnor", "certify")

# which report sections each command produces
_STAGES = {
    "lattice": {"lattice"},
    "resonance": {"lattice", "multinets", "resonance"},
    "multinets": {"lattice", "multinets", "pencils"},
    "milnor": {"lattice", "milnor"},
    "certify": {"lattice", "multinets", "pencils", "certify"},
    "analyze": {"lattice", "multinets", "pencils", "resonance", "certify", "milnor"},
}


class InputError(Exception):
    pass


@dataclass
class Checks:
    items: list = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.items.append({"name": name, "passed": bool(passed), "detail": detail})

    @property
    def ok(self) -> bool:
        return all(c["passed"] for c in self.items)


def _num(c: Cyclo):
    return format_rational(c.to_fraction()) if c.is_rational() else c.to_json()


def _point_json(arr: Arrangement, lattice: Lattice, idx: int) -> dict:
    pt = lattice.points[idx]
    return {"index": idx, "coords": [_num(c) for c in pt.point], "lines": list(pt.incident), "multiplicity": pt.multiplicity}


def catalog_multinets(arr: Arrangement, lattice: Lattice) -> list[MultinetStructure]:
    """Multinets known for catalog arrangements, validated before use."""
    if arr.name == "Hesse":
        return [validate_multinet(arr, lattice, hesse_classes(), 1)]
    if arr.name.startswith("Ceva("):
        r = int(arr.name[5:-1])
        classes, mu = ceva_multinet(r)
        return [validate_multinet(arr, lattice, classes, mu)]
    return []


def _load(args) -> Arrangement:
    if args.builtin:
        try:
            return builtin(args.builtin)
        except ArrangementError as exc:
            raise InputError(str(exc)) from exc
    try:
        return load_arrangement(args.input)
    except OSError as exc:
        raise InputError(f"{args.input}: {exc.strerror}") from exc
    except ArrangementError as exc:
        raise InputError(str(exc)) from exc


def _load_characters(path: str, d: int) -> list[Character]:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from exc
    out = []
    for n, item in enumerate(data if isinstance(data, list) else [data]):
        try:
            chi = Character.from_json(item)
            chi.check_product()
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{path}: character {n}: {exc}") from exc
        if chi.d != d:
            raise InputError(f"{path}: character {n} has {chi.d} entries, arrangement has {d} lines")
        out.append(chi)
    return out


def _search(args, arr: Arrangement, lattice: Lattice, checks: Checks) -> dict:
    ks = [args.k] if args.k else [3, 4]
    opts = EnumerationOptions(
        reduced_only=args.reduced_only,
        max_mu=args.max_mu,
        max_support=args.subarrangements,
        time_budget_ms=args.budget_ms,
    )
    found: list[tuple[MultinetStructure, str]] = []
    keys = set()
    exhaustive = True
    for k in ks:
        try:
            res = enumerate_multinets(arr, lattice, k, opts)
        except BudgetExceeded as exc:
            res, exhaustive = exc.partial, False
        for mn in res:
            if mn.key() not in keys:
                keys.add(mn.key())
                found.append((mn, "search"))
    for mn in catalog_multinets(arr, lattice):
        if mn.k in ks and (mn.reduced or not args.reduced_only) and mn.key() not in keys:
            keys.add(mn.key())
            found.append((mn, "catalog"))
    ok = True
    for mn, _ in found:
        try:
            validate_multinet(arr, lattice, mn.classes, mn.mu)
        except AxiomViolation:
            ok = False
    checks.add("multinets_revalidate", ok, f"{len(found)} multinet(s) pass M1-M4 again")
    return {
        "options": {
            "k": ks,
            "reduced_only": args.reduced_only,
            "max_mu": args.max_mu,
            "subarrangements": args.subarrangements,
            "budget_ms": args.budget_ms,
        },
        "exhaustive": exhaustive,
        "found": found,
    }


def build_report(args) -> tuple[dict, Checks, list[str]]:
    stages = _STAGES[args.command]
    arr = _load(args)
    lattice = intersection_lattice(arr)
    checks = Checks()
    warnings: list[str] = []
    d = arr.d
    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "arrangement": {**arrangement_to_json(arr), "d": d, "real": arr.is_real()},
    }

    mults = lattice.multiplicities()
    pair_total = sum(comb(m, 2) for m in mults)
    checks.add("lattice_pair_count", pair_total == comb(d, 2), f"sum C(m_X, 2) = {pair_total}, C(d, 2) = {comb(d, 2)}")
    report["lattice"] = {
        "points": [_point_json(arr, lattice, i) for i in range(len(lattice.points))],
        "counts": {str(m): mults.count(m) for m in sorted(set(mults))},
    }

    multinets: list[tuple[MultinetStructure, str]] = []
    if "multinets" in stages:
        search = _search(args, arr, lattice, checks)
        multinets = search["found"]
        entries = []
        for mn, source in multinets:
            m_list, n_dir = direction_count(mn)
            entries.append({**mn.to_json(), "source": source, "class_gcds": m_list, "direction_count": n_dir})
        report["multinets"] = {"options": search["options"], "exhaustive": search["exhaustive"], "items": entries}

    pencils = {}
    if "pencils" in stages:
        out = []
        span_ok = True
        for n, (mn, _) in enumerate(multinets):
            try:
                pen = realize_pencil(arr, mn)
                pencils[n] = pen
                out.append({"multinet": n, **pen.to_json()})
            except SpanNotTwo as exc:
                span_ok = False
                out.append({"multinet": n, "error": str(exc)})
        report["pencils"] = out
        checks.add("pencil_span_two", span_ok, f"{len(pencils)} of {len(multinets)} pencils span dimension 2")

    if "resonance" in stages:
        try:
            comps = resonance_components(arr, lattice, [mn for mn, _ in multinets])
            checks.add("resonance_isotropic", True, f"{len(comps)} components, each isotropic and resonant")
        except ConsistencyError as exc:
            comps = resonance_components(arr, lattice, [mn for mn, _ in multinets], verify=False)
            checks.add("resonance_isotropic", False, str(exc))
        keys = [mn.key() for mn, _ in multinets]
        items = []
        for c in comps:
            src = (
                {"point": lattice.points.index(c.source)}
                if c.provenance == "local"
                else {"multinet": keys.index(c.source.key())}
            )
            items.append({
                "provenance": c.provenance,
                "dimension": c.dimension,
                **src,
                "span": [[_num(x) for x in v] for v in c.span],
            })
        report["resonance"] = {
            "components": items,
            "local": sum(c.provenance == "local" for c in comps),
            "multinet": sum(c.provenance == "multinet" for c in comps),
        }

    bounds_by_order: dict[int, int] = {}
    if "certify" in stages:
        bounds_out, certs = [], []
        for n, (mn, _) in enumerate(multinets):
            bounds = monodromy_lower_bounds(mn, d)
            for b in bounds:
                bounds_by_order[b.order] = max(bounds_by_order.get(b.order, 0), b.bound)
                bounds_out.append({"multinet": n, **b.to_json()})
            if mn.reduced and n in pencils:
                cert = nontriviality_certificate(mn, pencils[n], bounds)
                certs.append({"multinet": n, **cert.to_json()})
        report["bounds"] = bounds_out
        report["certificates"] = certs
        backed = all(
            multinets[c["multinet"]][0].reduced and pencils[c["multinet"]].span_dim == 2 for c in certs
        )
        checks.add("certificates_backed", backed, f"{len(certs)} certificate(s) with reduced multinet and 2-dim pencil")

    if "milnor" in stages:
        report["eigenspaces"] = _milnor_section(args, arr, lattice, checks, warnings, bounds_by_order)

    report["consistency"] = checks.items
    report["warnings"] = warnings
    return report, checks, warnings


def _milnor_section(args, arr, lattice, checks: Checks, warnings: list, bounds_by_order: dict) -> dict:
    d = arr.d
    if args.presentation:
        try:
            pres = load_presentation(args.presentation)
        except OSError as exc:
            raise InputError(f"{args.presentation}: {exc.strerror}") from exc
        except PresentationError as exc:
            raise InputError(str(exc)) from exc
        if len(pres.meridians) != d:
            raise InputError(f"{args.presentation}: {len(pres.meridians)} meridians for {d} lines")
        source = "external presentation"
    else:
        try:
            pres = arrangement_presentation(arr, lattice, args.infinity_line)
        except NotReal as exc:
            warnings.append(f"exact eigenspaces skipped: {exc}; supply --presentation to compute them")
            return {
                "status": "bounds only (non-real)",
                "bounds": [{"order": n, "lower_bound": b} for n, b in sorted(bounds_by_order.items())],
            }
        source = "wiring diagram"
    free, torsion = pres.abelianization()
    checks.add("abelianization_free", free == d - 1 and not torsion, f"H_1(M) has rank {free}, torsion {torsion}")
    try:
        rep = milnor_eigenspaces(arr, pres)
        checks.add("eigenspace_at_one", rep.dims[1] == d - 1, f"dim H^1(F)_1 = {rep.dims[1]}")
    except PresentationError as exc:
        raise InputError(f"presentation: {exc}") from exc
    except AssertionError as exc:
        checks.add("eigenspace_at_one", False, str(exc))
        return {"status": "failed", "source": source}
    bounded = all(rep.dim(n) >= b for n, b in bounds_by_order.items())
    checks.add("bounds_below_exact", bounded, "every multinet bound is at most the exact dimension")
    cover = cover_monodromy(pres, milnor_images(pres, d), d, _characters(args, d))
    checks.add(
        "cover_matches_fox",
        cover.character_dims == rep.dims and cover.b1 == rep.b1_F,
        f"b1(F) = {cover.b1} from the cover, {rep.b1_F} from twisted cohomology",
    )
    if cover.pullback_checks:
        checks.add("pullback_inequality", all(p.ok for p in cover.pullback_checks),
                   f"{len(cover.pullback_checks)} supplied character(s)")
    out = {"status": "exact", "source": source, **rep.to_json(), "cover": cover.to_json()}
    if args.infinity_line is not None and not args.presentation:
        out["infinity_line"] = args.infinity_line
    return out


def _characters(args, d: int) -> list[Character]:
    return _load_characters(args.characters, d) if args.characters else []


def render_text(report: dict) -> str:
    a = report["arrangement"]
    lines = [f"arrangement {a['name']}: {a['d']} lines over Q(zeta_{a['cyclotomic_order']})"]
    counts = ", ".join(f"{v} of multiplicity {k}" for k, v in report["lattice"]["counts"].items())
    lines.append(f"points: {counts}")
    if "multinets" in report:
        m = report["multinets"]
        flag = "exhaustive" if m["exhaustive"] else "partial (budget reached)"
        lines.append(f"multinets ({flag}): {len(m['items'])}")
        for n, mn in enumerate(m["items"]):
            tag = "reduced" if mn["reduced"] else "mu=" + ",".join(map(str, mn["mu"]))
            lines.append(f"  [{n}] k={mn['k']} e={mn['e']} {tag} classes={mn['classes']} ({mn['source']})")
    if "resonance" in report:
        r = report["resonance"]
        lines.append(f"resonance components: {r['local']} local, {r['multinet']} from multinets")
    if "bounds" in report:
        for b in report["bounds"]:
            lam = b["lambda"]
            lines.append(f"  bound: dim H^1(F)_lambda >= {b['lower_bound']} for lambda = exp(2 pi i {lam['exponent']}/{lam['order']})")
        for c in report["certificates"]:
            lines.append(f"  certificate for multinet [{c['multinet']}]: {c['conclusion']}")
    if "eigenspaces" in report:
        e = report["eigenspaces"]
        if e["status"] == "exact":
            dims = ", ".join(f"order {x['order']}: {x['dim']}" for x in e["by_order"])
            lines.append(f"H^1(F) eigenspaces ({e['source']}): {dims}; b1(F) = {e['b1_F']}")
            lines.append("monodromy " + ("trivial" if e["trivial_monodromy"] else "non-trivial") + " on H^1(F)")
        else:
            lines.append(f"H^1(F) eigenspaces: {e['status']}")
    for c in report["consistency"]:
        lines.append(f"check {c['name']}: {'pass' if c['passed'] else 'FAIL'} ({c['detail']})")
    for w in report["warnings"]:
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"


def _write_atomic(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=target.name + ".")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    mask = os.umask(0)
    os.umask(mask)
    os.chmod(tmp, 0o666 & ~mask)
    os.replace(tmp, target)


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="arrmono", description="Resonance, multinets and Milnor fiber monodromy of line arrangements")
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", metavar="NAME", help=f"one of {', '.join(BUILTIN_NAMES)}")
    src.add_argument("--input", metavar="FILE", help="arrangement JSON file")
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    p.add_argument("--k", type=int, choices=(3, 4), help="number of classes to search (default both)")
    p.add_argument("--reduced-only", action="store_true")
    p.add_argument("--max-mu", type=int, default=4)
    p.add_argument("--subarrangements", type=int, metavar="N", help="also search supports of up to N lines")
    p.add_argument("--budget-ms", type=int, help="time budget for the multinet search")
    p.add_argument("--infinity-line", type=int, metavar="I", help="line sent to infinity (default the last)")
    p.add_argument("--presentation", metavar="FILE", help="pi_1 presentation JSON with meridians")
    p.add_argument("--characters", metavar="FILE", help="torsion characters for the pullback check")
    return p


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        report, checks, _ = build_report(args)
    except (InputError, ProductNotOne) as exc:
        print(f"arrmono: error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # out-of-range indices and similar bad option values
        print(f"arrmono: error: {exc}", file=sys.stderr)
        return 1
    text = json.dumps(report, indent=2) + "\n" if args.json else render_text(report)
    if args.out:
        _write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return 0 if checks.ok else 2


if __name__ == "__main__":
    sys.exit(main())
