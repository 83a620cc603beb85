import json
import random
from collections import Counter
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arrmono.arrgeo import (
    ArrangementError,
    DuplicateLine,
    UnknownName,
    ZeroForm,
    arrangement_to_json,
    builtin,
    intersection_lattice,
    load_arrangement,
    validate_arrangement,
)
from conftest import catalog
from oracles import brute_lattice

CATALOG = ["A3", "B3", "Pappus", "Hesse", "Ceva(1)", "Ceva(2)", "Ceva(3)", "Ceva(4)"]

# multiplicity -> number of points
EXPECTED_COUNTS = {
    "A3": {2: 3, 3: 4},
    "B3": {2: 6, 3: 4, 4: 3},
    "Pappus": {2: 9, 3: 9},
    "Hesse": {2: 12, 4: 9},
    "Ceva(4)": {2: 12, 3: 16, 6: 3},
}


@pytest.mark.parametrize("name", CATALOG)
def test_lattice_counting_identity(name):
    arr, lat = catalog(name)
    assert sum(comb(m, 2) for m in lat.multiplicities()) == comb(arr.d, 2)


@pytest.mark.parametrize("name", CATALOG)
def test_lattice_matches_brute_force(name):
    arr, lat = catalog(name)
    brute = brute_lattice(arr)
    assert {frozenset(p.incident) for p in lat.points} == set(brute)
    for p in lat.points:
        assert all(arr.lines[i](p.point).is_zero() for i in p.incident)


@pytest.mark.parametrize("name,counts", EXPECTED_COUNTS.items())
def test_catalog_point_counts(name, counts):
    _, lat = catalog(name)
    assert dict(Counter(lat.multiplicities())) == counts


def test_a3_points_on_z():
    arr, lat = catalog("A3")
    on_z = [lat.points[k] for k in lat.points_on(2)]
    assert sorted(p.multiplicity for p in on_z) == [2, 3, 3]


def test_point_of_is_symmetric():
    arr, lat = catalog("B3")
    for i in range(arr.d):
        for j in range(arr.d):
            if i != j:
                k = lat.point_of(i, j)
                assert k == lat.point_of(j, i)
                assert {i, j} <= set(lat.points[k].incident)


def test_reals():
    assert builtin("A3").is_real() and builtin("Pappus").is_real()
    assert not builtin("Hesse").is_real()
    assert not builtin("Ceva(3)").is_real()


def test_validation_errors():
    with pytest.raises(DuplicateLine):
        validate_arrangement([[1, 0, 0], [0, 1, 0], [2, 0, 0]])
    with pytest.raises(ZeroForm):
        validate_arrangement([[1, 0, 0], [0, 0, 0]])
    with pytest.raises(ArrangementError):
        validate_arrangement([[1, 0]])
    with pytest.raises(UnknownName):
        builtin("Foo")


def test_duplicate_over_cyclotomic_field():
    z = {"order": 3, "coeffs": ["0", "1"]}
    z2 = {"order": 3, "coeffs": ["-1", "-1"]}  # z^2
    # (1, z) and (z^2, 1) are proportional by z^2
    with pytest.raises(DuplicateLine):
        validate_arrangement([[1, z, 0], [z2, 1, 0], [0, 0, 1]])


def test_json_round_trip(tmp_path):
    arr = builtin("Hesse")
    path = tmp_path / "hesse.json"
    path.write_text(json.dumps(arrangement_to_json(arr)))
    back = load_arrangement(path)
    assert back.order == arr.order
    assert [ln.key() for ln in back.lines] == [ln.key() for ln in arr.lines]


def test_load_errors_carry_context(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"lines": [[1, 0, 0],\n [0, 1')
    with pytest.raises(ArrangementError, match="bad.json:2"):
        load_arrangement(bad)
    dup = tmp_path / "dup.json"
    dup.write_text('{"lines": [[1, 0, 0], [3, 0, 0]]}')
    with pytest.raises(ArrangementError, match="dup.json"):
        load_arrangement(dup)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(*[st.integers(-3, 3)] * 3), min_size=2, max_size=7))
def test_counting_identity_random(raw):
    seen, lines = set(), []
    for t in raw:
        if not any(t):
            continue
        if any(_prop(t, k) for k in seen):
            continue
        seen.add(t)
        lines.append(list(t))
    if len(lines) < 2:
        return
    arr = validate_arrangement(lines)
    lat = intersection_lattice(arr)
    assert sum(comb(m, 2) for m in lat.multiplicities()) == comb(arr.d, 2)


def _prop(a, b) -> bool:
    return all(a[i] * b[j] == a[j] * b[i] for i in range(3) for j in range(3))


def test_rescaling_keeps_lattice():
    rng = random.Random(3)
    arr = builtin("Pappus")
    lines = []
    for ln in arr.lines:
        s = rng.choice([1, -2, 3])
        lines.append([s * x.to_fraction() for x in ln.coeffs])
    lat2 = intersection_lattice(validate_arrangement(lines))
    assert {p.incident for p in lat2.points} == {p.incident for p in catalog("Pappus")[1].points}
