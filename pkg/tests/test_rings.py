"""Structure-constant ring presentations and unit inversion."""

import random
from fractions import Fraction

import pytest

from mirrorkit import rings, toric
from mirrorkit.errors import NotAUnit, RingMismatch, UnknownModel

MODES = ("cohomology", "k_theory")


@pytest.mark.parametrize("name", ["pt", "P1", "P2", "P1xP1"])
@pytest.mark.parametrize("mode", MODES)
def test_catalog_rings_validate(name, mode):
    model = toric.catalog_model(name)
    ring = rings.catalog_ring(model, mode)
    ring.validate()  # commutativity + associativity, exhaustive


def test_p2_cohomology_nilpotency():
    model = toric.catalog_model("P2")
    ring = rings.catalog_ring(model, "cohomology")
    p = ring.generator(ring.field, "p")
    assert not (p * p).is_zero
    assert (p * p * p).is_zero


def test_k_theory_generator_is_unipotent():
    model = toric.catalog_model("P1")
    ring = rings.catalog_ring(model, "k_theory")
    P = ring.generator(ring.field, "P")
    unit = ring.unit(ring.field)
    assert ((unit - P) * (unit - P)).is_zero


def test_invert_unit_examples():
    model = toric.catalog_model("P1")
    ring = rings.catalog_ring(model, "cohomology")
    field = ring.field
    unit = ring.unit(field)
    p = ring.generator(field, "p")
    z = field.var("z")
    x = p - unit.scale(z)  # p - z, invertible since z is a unit scalar
    inv = rings.invert_unit(x)
    assert (inv * x - unit).is_zero
    # explicit expansion: (p - z)^-1 = -1/z - p/z^2
    expect = unit.scale(field.const(-1) / z) - p.scale(field.const(1) / (z * z))
    assert (inv - expect).is_zero


@pytest.mark.parametrize("name", ["pt", "P1", "P2", "P1xP1"])
@pytest.mark.parametrize("mode", MODES)
def test_invert_random_units(name, mode):
    model = toric.catalog_model(name)
    ring = rings.catalog_ring(model, mode)
    field = ring.field
    unit = ring.unit(field)
    rng = random.Random(hash((name, mode)) & 0xFFFF)
    for _ in range(50):
        coords = [Fraction(rng.randint(-5, 5)) for _ in range(ring.dim)]
        if coords[ring.unit_index] == 0:
            coords[ring.unit_index] = Fraction(1)
        x = ring.element(field, [field.const(c) for c in coords])
        inv = rings.invert_unit(x)
        assert (x * inv - unit).is_zero


def test_invert_non_unit_raises():
    model = toric.catalog_model("P1")
    ring = rings.catalog_ring(model, "cohomology")
    p = ring.generator(ring.field, "p")
    with pytest.raises(NotAUnit):
        rings.invert_unit(p)


def test_ring_mismatch_between_models():
    r1 = rings.catalog_ring(toric.catalog_model("P1"), "cohomology")
    r2 = rings.catalog_ring(toric.catalog_model("P2"), "cohomology")
    a = r1.unit(r1.field)
    b = r2.unit(r2.field)
    with pytest.raises(RingMismatch):
        a + b


def test_presentation_from_json_and_unknown_products():
    data = {
        "basis": ["1", "g"],
        "table": {"g*g": [0, 0]},
        "generators": {"g": [0, 1]},
    }
    ring = rings.presentation_from_json(data)
    ring.validate()
    bad = {"basis": ["1", "g"], "table": {}, "generators": {}}
    with pytest.raises(UnknownModel):
        rings.presentation_from_json(bad).validate()


def test_element_dump_skips_zeros():
    ring = rings.catalog_ring(toric.catalog_model("P1"), "cohomology")
    p = ring.generator(ring.field, "p")
    dumped = p.dump()
    assert list(dumped.keys()) == ["p"]
