"""Problem instances as JSON, plus the bundled example fixtures.

An instance bundles a point set on P^1 x P^1, the degree ``a`` of the
parameterizing forms, and the choice of the subspace U: either four
explicit bidegree-(a, 1) forms (key ``"U"``) or a seed for a random
generic choice (key ``"seed"``).  Exactly one of the two must be
present.  Point coordinates are written as strings so arbitrary exact
rationals survive the round trip.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .bipoly import parse_biform
from .points import PointSet, points_from_json, points_to_json


@dataclass
class Instance:
    """A named surface problem: points, degree, and the subspace choice."""

    points: PointSet
    a: int
    seed: int | None = None
    forms: list | None = None
    name: str | None = None

    @property
    def r(self):
        return len(self.points)

    def __post_init__(self):
        if (self.forms is None) == (self.seed is None):
            raise ValueError(
                "an instance needs exactly one of forms or seed"
            )
        if self.forms is not None and len(self.forms) != 4:
            raise ValueError("U must consist of exactly four forms")


def instance_to_json(inst):
    data = points_to_json(inst.points)
    data["a"] = inst.a
    if inst.forms is not None:
        data["U"] = [str(f) for f in inst.forms]
    else:
        data["seed"] = inst.seed
    return data


def instance_from_json(data, name=None):
    pts = points_from_json(data)
    a = int(data["a"])
    if ("U" in data) == ("seed" in data):
        raise ValueError(
            "instance JSON needs exactly one of the keys 'U' and 'seed'"
        )
    if "U" in data:
        forms = [parse_biform(text, (a, 1)) for text in data["U"]]
        return Instance(points=pts, a=a, forms=forms, name=name)
    return Instance(points=pts, a=a, seed=int(data["seed"]), name=name)


def load_instance(path):
    with open(path) as fh:
        data = json.load(fh)
    return instance_from_json(data, name=str(path))


def save_instance(inst, path):
    with open(path, "w") as fh:
        json.dump(instance_to_json(inst), fh, indent=1)
        fh.write("\n")


def fixture_names():
    root = resources.files("tensurf") / "fixtures"
    return sorted(
        entry.name[:-5]
        for entry in root.iterdir()
        if entry.name.endswith(".json")
    )


def fixture(name):
    """Load one of the bundled example instances by name."""
    root = resources.files("tensurf") / "fixtures"
    entry = root / f"{name}.json"
    if not entry.is_file():
        raise KeyError(
            f"unknown fixture {name!r}; available: "
            + ", ".join(fixture_names())
        )
    return instance_from_json(json.loads(entry.read_text()), name=name)
