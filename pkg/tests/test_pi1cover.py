import json
import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arrmono.arrgeo import validate_arrangement
from arrmono.pi1cover import (
    Character,
    GroupPresentation,
    NotReal,
    NotSurjective,
    PresentationError,
    ProductNotOne,
    cover_monodromy,
    load_presentation,
    milnor_eigenspaces,
    milnor_images,
    randell_presentation,
    subgroup_presentation,
    twisted_h1,
    twisted_h1_values,
    wiring_diagram,
)
from arrmono.pi1cover.cover import restricted_exponents
from arrmono.pi1cover.fox import check_fox_identity, fox_jacobian, generator_exponents
from arrmono.pi1cover.words import abelianize, inverse, product, reduce_word
from conftest import catalog, presentation
from oracles import numeric_fox_h1

REAL = ["A3", "B3", "Pappus"]


def random_character(rng: random.Random, d: int, orders=(2, 3, 4, 5, 6)) -> Character:
    n = rng.choice(orders)
    e = [rng.randrange(n) for _ in range(d - 1)]
    e.append(-sum(e) % n)
    return Character(n, tuple(e))


@st.composite
def characters(draw, d, orders=(2, 3, 4, 5, 6, 9)):
    n = draw(st.sampled_from(orders))
    e = draw(st.lists(st.integers(0, n - 1), min_size=d - 1, max_size=d - 1))
    return Character(n, tuple(e) + (-sum(e) % n,))


# --- words --------------------------------------------------------------------


def test_words():
    assert reduce_word([1, 2, -2, -1, 3]) == (3,)
    assert product((1, 2), inverse((1, 2))) == ()
    assert abelianize((1, 2, -1, 2), 3) == [0, 2, 0]


# --- wiring diagrams -----------------------------------------------------------


def test_two_lines_single_crossing():
    arr = validate_arrangement([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    wd = wiring_diagram(arr, 2)
    assert [c.lines for c in wd.crossings] == [(0, 1)]
    pres = randell_presentation(wd)
    assert pres.n_generators == 2
    # the node relation: the two meridians commute
    assert pres.relators == ((1, 2, -1, -2),)


def test_three_concurrent_lines():
    arr = validate_arrangement([[1, 0, 0], [0, 1, 0], [1, -1, 0], [0, 0, 1]])
    wd = wiring_diagram(arr, 3)
    assert [c.multiplicity for c in wd.crossings] == [3]
    pres = randell_presentation(wd)
    a, b, c = 1, 2, 3
    expected = {product((a, b, c), inverse((b, c, a))), product((a, b, c), inverse((c, a, b)))}
    assert set(pres.relators) == expected
    # relabelling a <-> c turns these into cba = acb, cba = bac
    swap = {1: 3, 3: 1, 2: 2, -1: -3, -3: -1, -2: -2}
    relabelled = {tuple(swap[x] for x in r) for r in pres.relators}
    assert relabelled == {product((c, b, a), inverse((a, c, b))), product((c, b, a), inverse((b, a, c)))}


def test_a3_deconed_at_z():
    arr, lat = catalog("A3")
    wd = wiring_diagram(arr, 2, lat)
    # z carries one double and two triple points; the rest are affine
    assert sorted(c.multiplicity for c in wd.crossings) == [2, 2, 3, 3]
    assert all(2 not in c.lines for c in wd.crossings)


@pytest.mark.parametrize("name", REAL)
@pytest.mark.parametrize("inf", [0, 2, None])
def test_crossings_match_lattice(name, inf):
    arr, lat = catalog(name)
    wd = wiring_diagram(arr, inf, lat)
    line = arr.d - 1 if inf is None else inf
    expected = Counter(p.multiplicity for p in lat.points if line not in p.incident)
    assert Counter(c.multiplicity for c in wd.crossings) == expected
    us = [c.u for c in wd.crossings]
    assert us == sorted(us) and len(set(us)) == len(us)
    pres = randell_presentation(wd)
    assert pres.n_generators == arr.d - 1
    assert len(pres.relators) == sum(c.multiplicity - 1 for c in wd.crossings)


@pytest.mark.parametrize("name", REAL)
def test_abelianization_is_free_of_rank_d_minus_1(name):
    arr, _ = catalog(name)
    for inf in range(arr.d):
        assert presentation(name, inf).abelianization() == (arr.d - 1, [])


def test_meridian_at_infinity_is_inverse_product():
    pres = presentation("A3")
    assert pres.meridians[5] == (-5, -4, -3, -2, -1)
    assert product(*(pres.meridians[i] for i in range(6) if len(pres.meridians[i]) == 1)) != ()


def test_not_real():
    arr, lat = catalog("Hesse")
    with pytest.raises(NotReal):
        wiring_diagram(arr, None, lat)
    with pytest.raises(NotReal):
        milnor_eigenspaces(arr, lattice=lat)


def test_forced_shear_must_be_generic():
    arr, lat = catalog("A3")
    with pytest.raises(ValueError):
        wiring_diagram(arr, 5, lat, shear=0)  # A3 at x - z has a vertical line for t = 0


# --- Fox calculus ---------------------------------------------------------------


@pytest.mark.parametrize("name", REAL)
@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_fox_identity(name, data):
    arr, _ = catalog(name)
    skip = data.draw(st.integers(0, 2))
    inf = data.draw(st.integers(0, arr.d - 1))
    pres = presentation(name, inf, skip)
    chi = data.draw(characters(arr.d))
    vals = generator_exponents(pres, chi)
    check_fox_identity(pres, fox_jacobian(pres, vals, chi.order), vals, chi.order)


@pytest.mark.parametrize("name", REAL)
@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_twisted_h1_matches_numeric_oracle(name, data):
    arr, _ = catalog(name)
    pres = presentation(name)
    chi = data.draw(characters(arr.d))
    vals = generator_exponents(pres, chi)
    assert twisted_h1(pres, chi) == numeric_fox_h1(pres.n_generators, pres.relators, vals, chi.order)


@pytest.mark.parametrize("name", ["A3", "B3"])
@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_sweep_and_infinity_invariance(name, data):
    arr, _ = catalog(name)
    chi = data.draw(characters(arr.d))
    values = {twisted_h1(presentation(name, None, s), chi) for s in range(3)}
    values |= {twisted_h1(presentation(name, inf), chi) for inf in (0, arr.d // 2)}
    assert len(values) == 1


def test_twisted_h1_examples():
    pres = presentation("A3")
    assert twisted_h1(pres, Character(1, (0,) * 6)) == 5
    assert twisted_h1(pres, Character(3, (1,) * 6)) == 1
    # order-5 character outside all components
    assert twisted_h1(pres, Character(5, (1, 2, 0, 3, 1, 3))) == 0


def test_twisted_h1_rejects_bad_character():
    pres = presentation("A3")
    with pytest.raises(ProductNotOne):
        twisted_h1(pres, Character(3, (1, 0, 0, 0, 0, 0)))
    with pytest.raises(PresentationError):
        twisted_h1_values(GroupPresentation(1, ((1,),)), [1], 2)


@pytest.mark.parametrize(
    "name,dims,b1",
    [
        ("A3", {1: 5, 2: 0, 3: 1, 6: 0}, 7),
        ("B3", {1: 8, 3: 0, 9: 0}, 8),
        ("Pappus", {1: 8, 3: 1, 9: 0}, 10),
    ],
)
def test_milnor_eigenspaces(name, dims, b1):
    arr, lat = catalog(name)
    rep = milnor_eigenspaces(arr, presentation(name), all_roots=True)
    assert rep.dims == dims and rep.b1_F == b1
    assert rep.weight2_dim == arr.d - 1 and rep.weight1_dim == b1 - arr.d + 1
    assert rep.galois_checked


def test_milnor_independent_of_infinity_line():
    arr, lat = catalog("A3")
    assert {milnor_eigenspaces(arr, presentation("A3", inf)).b1_F for inf in range(6)} == {7}


# --- covers ---------------------------------------------------------------------


def test_free_group_cover():
    cov = subgroup_presentation(GroupPresentation(2, ()), [1, 1], 2)
    assert cov.presentation.n_generators == 3 and cov.presentation.relators == ()


def test_commuting_pair_cover():
    cov = subgroup_presentation(GroupPresentation(2, ((1, 2, -1, -2),)), [1, 0], 2)
    k = cov.presentation
    assert k.n_generators == 2 * 2 - 1 and len(k.relators) == 2
    assert k.abelianization() == (2, [])


def test_not_surjective():
    with pytest.raises(NotSurjective):
        subgroup_presentation(GroupPresentation(2, ()), [2, 2], 4)


def test_circle_cover_is_trivial():
    cm = cover_monodromy(GroupPresentation(1, ()), [1], 5)
    assert cm.trivial and cm.b1 == 1


@pytest.mark.parametrize("name", REAL)
def test_cover_matches_fox(name):
    arr, lat = catalog(name)
    pres = presentation(name)
    cov = subgroup_presentation(pres, milnor_images(pres, arr.d), arr.d)
    g, r = pres.n_generators, len(pres.relators)
    assert cov.presentation.n_generators == g * arr.d - (arr.d - 1)
    assert len(cov.presentation.relators) == r * arr.d
    free, torsion = cov.presentation.abelianization()
    rep = milnor_eigenspaces(arr, pres)
    cm = cover_monodromy(pres, milnor_images(pres, arr.d), arr.d, cover=cov)
    assert free == rep.b1_F == cm.b1
    assert cm.character_dims == rep.dims
    assert cm.trivial == (name == "B3")


def test_pullback_agrees_with_induced_sum():
    # H^1(K, chi|K) splits as the sum over the characters chi * eps^j, eps the Milnor character
    arr, lat = catalog("A3")
    pres = presentation("A3")
    d = arr.d
    cov = subgroup_presentation(pres, milnor_images(pres, d), d)
    rng = random.Random(4)
    for _ in range(6):
        chi = random_character(rng, d, orders=(2, 3))
        n = math.lcm(chi.order, d)
        vals = [v * (n // chi.order) for v in generator_exponents(pres, chi)]
        up = twisted_h1_values(cov.presentation, restricted_exponents(cov, vals, n), n)
        shifted = [Character(n, tuple(e * (n // chi.order) + j * (n // d) for e in chi.exponents)) for j in range(d)]
        assert up == sum(twisted_h1(pres, s) for s in shifted)


def test_presentation_json(tmp_path):
    pres = presentation("A3")
    path = tmp_path / "p.json"
    path.write_text(json.dumps(pres.to_json()))
    back = load_presentation(path)
    assert back == pres
    path.write_text(json.dumps({"generators": 1, "relators": [[2]]}))
    with pytest.raises(PresentationError):
        load_presentation(path)
    path.write_text("{")
    with pytest.raises(PresentationError, match="p.json:1"):
        load_presentation(path)


def test_external_presentation_needs_meridian_generators():
    pres = GroupPresentation(2, (), ((1,), (1, 2), (-2, -1, -1)))
    with pytest.raises(PresentationError):
        generator_exponents(pres, Character(2, (1, 1, 0)))
