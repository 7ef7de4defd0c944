"""Instance containers, JSON round trips, and the bundled fixtures."""
from __future__ import annotations

import pytest

from tensurf import (
    Instance,
    PointSet,
    fixture,
    fixture_names,
    instance_from_json,
    instance_to_json,
    load_instance,
    random_generic_points,
    save_instance,
)


def test_fixture_listing_and_loading():
    names = fixture_names()
    assert "skew4" in names and "r2_a3" in names and "r0_a20" in names
    for name in names:
        inst = fixture(name)
        assert (inst.forms is None) != (inst.seed is None)
        if inst.forms is not None:
            assert len(inst.forms) == 4
            for f in inst.forms:
                assert f.bidegree == (inst.a, 1)


def test_fixture_unknown_name():
    with pytest.raises(KeyError):
        fixture("no-such-fixture")


def test_instance_validation():
    X = PointSet(())
    with pytest.raises(ValueError):
        Instance(points=X, a=2)  # neither seed nor forms
    with pytest.raises(ValueError):
        Instance(points=X, a=2, seed=0, forms=[])  # both


def test_round_trip_seeded(tmp_path):
    X = random_generic_points(3, seed=7)
    inst = Instance(points=X, a=3, seed=11, name="trip")
    data = instance_to_json(inst)
    back = instance_from_json(data)
    assert back.a == 3 and back.seed == 11
    assert list(back.points) == list(X)
    path = tmp_path / "inst.json"
    save_instance(inst, path)
    again = load_instance(path)
    assert list(again.points) == list(X) and again.seed == 11


def test_round_trip_explicit_forms(tmp_path):
    inst = fixture("r2_a3")
    path = tmp_path / "forms.json"
    save_instance(inst, path)
    back = load_instance(path)
    assert [str(f) for f in back.forms] == [str(f) for f in inst.forms]
    assert back.seed is None
    assert back.r == 2


def test_r_property():
    inst = fixture("r2_a8")
    assert inst.r == len(inst.points) == 2
    assert inst.a == 8
