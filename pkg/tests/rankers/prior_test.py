import json

import pytest

from lgrnav.categories import room_categories
from lgrnav.errors import ScenarioFormatError
from lgrnav.rankers.prior import CoOccurrencePrior, default_prior


def test_default_rows_sum_to_one():
    """
    Every row of the built-in table is a distribution over the room categories.
    """
    prior = default_prior()
    for name in prior.classes:
        assert sum(prior.probability(name, room) for room in room_categories()) == pytest.approx(1.0)


def test_unknown_entries_read_zero():
    """
    Unknown classes and categories have zero probability.
    """
    prior = default_prior()
    assert prior.probability("spaceship", "kitchen") == 0.0
    assert prior.probability("oven", "wall") == 0.0
    assert prior.probability("oven", "kitchen") == 1.0


def test_from_weights_normalizes():
    """
    Weight rows are scaled to sum to one.
    """
    prior = CoOccurrencePrior.from_weights({"lamp": {"bedroom": 3, "living room": 1}})
    assert prior.probability("lamp", "bedroom") == pytest.approx(0.75)
    assert prior.classes_for("living room") == [("lamp", pytest.approx(0.25))]
    assert prior.classes_for("kitchen") == []


@pytest.mark.parametrize("weights", [
    {"lamp": {"attic": 1.0}},
    {"lamp": {"bedroom": 0.0}},
    {"lamp": {"bedroom": 2.0, "kitchen": -1.0}},
])
def test_bad_rows(weights):
    """
    Unknown rooms, empty rows and negative entries are rejected.
    """
    with pytest.raises(ScenarioFormatError):
        CoOccurrencePrior.from_weights(weights)


def test_rows_must_sum_to_one():
    """
    A probability table that is not normalized is rejected.
    """
    with pytest.raises(ScenarioFormatError):
        CoOccurrencePrior({"lamp": {"bedroom": 0.5}})


def test_load(tmp_path):
    """
    A JSON weight table loads and round-trips through to_native.
    """
    path = tmp_path / "prior.json"
    path.write_text(json.dumps({"lamp": {"bedroom": 1, "kitchen": 1}}), encoding="utf-8")
    prior = CoOccurrencePrior.load(path)
    assert prior.to_native()["lamp"]["kitchen"] == 0.5
    assert prior.to_native()["lamp"]["bathroom"] == 0.0
