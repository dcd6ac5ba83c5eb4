import itertools
import math

import pytest

from commuting_tuples.components import (
    PLUS,
    SYMBOL_PERMUTATIONS,
    ComponentLabel,
    canonicalize,
    classify,
    count_closed_form,
    count_enumerate,
    count_recurrence,
    enumerate_components,
    is_canonical,
    is_valid_minus,
    klein_product,
    orbit,
    relabel,
)
from commuting_tuples.errors import BoundError, InvalidPatternError, NonCommutingError
from commuting_tuples.rotations import RotationElement

from conftest import E1, E2, E3, invol, rot_about

I = RotationElement.identity()


def brute_force_orbit_count(n):
    """Distinct orbits of valid patterns under all relabelings of X, Y, Z,
    found by building each orbit as a set; no canonical form involved."""
    orbits = set()
    for p in itertools.product("EXYZ", repeat=n):
        if len(set(p) - {"E"}) >= 2:
            orbits.add(frozenset("".join(perm[c] for c in p) for perm in SYMBOL_PERMUTATIONS))
    return len(orbits)


def test_klein_table():
    for a in "EXYZ":
        assert klein_product("E", a) == a
        assert klein_product(a, a) == "E"
    assert klein_product("X", "Y") == "Z"
    for a, b, c in itertools.product("EXYZ", repeat=3):
        assert klein_product(klein_product(a, b), c) == klein_product(a, klein_product(b, c))


def test_classify_examples():
    assert classify([I, I, I]) == PLUS
    assert classify([invol(E1), invol(E2), invol(E1) @ invol(E2)]) == ComponentLabel("minus", "XYZ")
    assert classify([invol(E2), I, invol(E1)]) == ComponentLabel("minus", "XEY")
    assert classify([rot_about(E3, 0.4), rot_about(E3, math.pi)]) == PLUS


def test_classify_colinear_involutions_is_plus():
    assert classify([invol(E1), invol(-E1), I]) == PLUS


def test_classify_errors():
    with pytest.raises(NonCommutingError):
        classify([invol(E1), rot_about(E3, 1.0)])
    with pytest.raises(NonCommutingError):
        classify([invol(E1), invol(E2), invol([1.0, 1.0, 0.0])])


def test_canonicalize_examples():
    assert canonicalize("YZE") == "XYE"
    assert canonicalize("ZXY") == "XYZ"
    assert canonicalize("XYZ") == "XYZ"
    with pytest.raises(InvalidPatternError):
        canonicalize("EXX")


def test_counts_small():
    for n, want in [(1, 0), (2, 1), (3, 7)]:
        assert count_closed_form(n) == count_recurrence(n) == count_enumerate(n) == want


def test_count_four_against_brute_force():
    # x4 = 16 + (3/2)(16 - 4) + 1
    assert count_recurrence(4) == 35
    assert brute_force_orbit_count(4) == 35
    assert count_enumerate(4) == 35


@pytest.mark.parametrize("n", range(1, 8))
def test_enumeration_matches_orbit_oracle(n):
    assert count_enumerate(n) == brute_force_orbit_count(n)


def test_closed_form_large_n():
    n = 40
    assert count_closed_form(n) == (4**n - 3 * 2**n + 2) // 6
    assert count_closed_form(n) == count_recurrence(n)
    assert count_closed_form(41) == count_recurrence(41)


def test_enumerate_components():
    assert enumerate_components(1) == [PLUS]
    assert enumerate_components(2) == [PLUS, ComponentLabel("minus", "XY")]
    labels = enumerate_components(3)
    assert len(labels) == 8
    patterns = [l.pattern for l in labels[1:]]
    assert patterns == sorted(patterns, key=lambda p: ["EXYZ".index(c) for c in p])
    assert set(patterns) == {"XYE", "XYX", "XYY", "XYZ", "XEY", "XXY", "EXY"}


def test_enumeration_cap():
    with pytest.raises(BoundError):
        count_enumerate(13)
    with pytest.raises(BoundError):
        enumerate_components(0)


def test_label_json_round_trip():
    for label in enumerate_components(3):
        assert ComponentLabel.from_json(label.to_json()) == label
    assert ComponentLabel("minus", "XYZEE").to_json() == {"component": "minus", "pattern": "XYZEE"}


def test_label_rejects_non_canonical():
    with pytest.raises(InvalidPatternError):
        ComponentLabel("minus", "YX")
    assert ComponentLabel.minus("YX").pattern == "XY"


@pytest.mark.parametrize("n", range(2, 9))
def test_orbits_are_free(n):
    valid = 0
    for p in itertools.product("EXYZ", repeat=n):
        p = "".join(p)
        if not is_valid_minus(p):
            continue
        valid += 1
        assert len(orbit(p)) == 6
    assert valid % 6 == 0 and valid // 6 == count_enumerate(n)


def test_canonical_iff_fixed_by_canonicalize():
    for p in itertools.product("EXYZ", repeat=4):
        p = "".join(p)
        if is_valid_minus(p):
            assert is_canonical(p) == (canonicalize(p) == p)
            assert sum(is_canonical(relabel(p, perm)) for perm in SYMBOL_PERMUTATIONS) == 1
