import math

import numpy as np
import pytest
from conftest import column_of, row_for

from errors import BadAxis, EmptyFilter, GeomorphError, ShapeMismatch
from exponence import TotalParadigmMatrix, competition, max_rows, smart_init
from rotation_classes import (
    DEPONENT_ANGLE,
    ClassInventory,
    PlaneRotation,
    RotationLearnConfig,
    RotationPlan,
    apply_rotation,
    base_configuration,
    class_of_base,
    deponent_transform,
    hamming_distance,
    learn_all_classes,
    learn_class_rotation,
    sigmoid_gain,
    weighted_counts,
)

# Hamming distances from the Class III base, recomputed from the class tables
DISTANCES = {
    "I": 3, "II": 1, "III": 0, "IV": 2, "V": 5, "VI": 2, "VII": 1, "VIII": 4,
    "IX": 2, "X": 1, "XI": 2, "XII": 3, "XIII": 4, "XIV": 3, "XV": 3, "XVI": 3,
}


def test_nuer_inventory(nuer):
    assert list(nuer.classes.classes) == list(DISTANCES)
    assert nuer.classes.lexeme_counts["I"] == 61
    assert nuer.classes.lexeme_counts["XVI"] == 1
    assert list(nuer.classes.filtered(3)) == ["I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X"]


def test_weighted_counts(nuer):
    counts = weighted_counts(nuer.classes, nuer.phi)
    m = list(nuer.classes.classes["I"].morphemes)
    assert counts[:, m.index("∅")].tolist() == [460, 177, 374, 127, 136]
    assert counts[:, m.index("ni")].tolist() == [0, 504, 80, 216, 208]
    assert counts[:, m.index("kä")].tolist() == [221, 0, 0, 111, 110]


def test_base_configuration(nuer):
    b = base_configuration(nuer.classes, nuer.phi)
    assert column_of(b, "∅") == pytest.approx([0.712, 0.274, 0.579, 0.197, 0.211], abs=0.002)
    assert column_of(b, "ni") == pytest.approx([0, 0.852, 0.135, 0.365, 0.351], abs=0.002)
    assert column_of(b, "kä") == pytest.approx([0.817, 0, 0, 0.410, 0.406], abs=0.002)


def test_base_is_class_three(nuer):
    b = base_configuration(nuer.classes, nuer.phi)
    assert class_of_base(b, nuer.phi, nuer.classes) == "III"
    c = competition(nuer.phi, b)
    expected = {
        "sg nom": ("∅", 1.291), "sg gen": ("kä", 1.227), "sg loc": ("kä", 1.223),
        "pl nom": ("ni", 0.987), "pl gen": ("ni", 1.216), "pl loc": ("ni", 1.203),
    }
    for label, (morpheme, value) in expected.items():
        assert row_for(c, label)[c.morphemes.index(morpheme)] == pytest.approx(value, abs=0.002)


def test_single_class_weighting_is_plain_smart_init(english):
    inventory = ClassInventory({"only": english.gold}, {"only": 1})
    b = base_configuration(inventory, english.phi, min_lexemes=1)
    assert np.allclose(b.columns, smart_init(english.phi, english.gold).columns)
    assert class_of_base(b, english.phi, inventory) == "only"


def test_without_kae_the_base_falls_to_class_four(nuer):
    b = base_configuration(nuer.classes, nuer.phi)
    columns = b.columns.copy()
    columns[:, list(b.morphemes).index("kä")] = 0.0
    assert class_of_base(b.with_columns(columns), nuer.phi, nuer.classes) == "IV"


def test_all_tied_selection_matches_no_class(nuer):
    b = base_configuration(nuer.classes, nuer.phi)
    assert class_of_base(b.with_columns(np.zeros_like(b.columns)), nuer.phi, nuer.classes) is None


def test_empty_filter(nuer):
    with pytest.raises(EmptyFilter):
        weighted_counts(nuer.classes, nuer.phi, min_lexemes=1000)


def test_classes_must_share_shape(english, german_present):
    with pytest.raises(ShapeMismatch):
        ClassInventory({"a": english.gold, "b": german_present.gold}, {"a": 1, "b": 1})


def test_hamming_distances(nuer):
    base = max_rows(competition(nuer.phi, base_configuration(nuer.classes, nuer.phi))).tpm
    assert {label: hamming_distance(base, tpm) for label, tpm in nuer.classes.classes.items()} == DISTANCES


def test_sigmoid_gain():
    assert sigmoid_gain(0.5, 0.5) == pytest.approx(0.25)
    assert sigmoid_gain(1.0, 0.0) == pytest.approx(0.7758, abs=1e-4)
    assert sigmoid_gain(0.0, 1.0) == pytest.approx(0.014209, abs=1e-6)


def test_sigmoid_gain_grows_with_the_winner_lead():
    leads = np.linspace(-3.0, 3.0, 61)
    gains = [sigmoid_gain(lead, 0.0) for lead in leads]
    assert all(0.0 < g < 1.0 for g in gains)
    assert all(a < b for a, b in zip(gains, gains[1:]))
    # only the difference of the activations matters
    assert sigmoid_gain(1.3, 0.8) == pytest.approx(sigmoid_gain(0.5, 0.0))


def test_plane_rotation_matches_its_matrix():
    columns = np.arange(12, dtype=float).reshape(4, 3)
    rotation = PlaneRotation(1, 3, 0.7)
    assert np.allclose(rotation.apply(columns), rotation.matrix(4) @ columns)


@pytest.mark.parametrize("i,j", [(2, 2), (-1, 0)])
def test_bad_plane(i, j):
    with pytest.raises(BadAxis):
        PlaneRotation(i, j, 0.1)


def test_axis_outside_space():
    with pytest.raises(BadAxis):
        PlaneRotation(0, 5, 0.1).apply(np.eye(3))


def test_identity_plan(nuer):
    b = base_configuration(nuer.classes, nuer.phi)
    assert np.array_equal(apply_rotation(b, RotationPlan()).columns, b.columns)


def test_rotation_keeps_gram(nuer):
    b = base_configuration(nuer.classes, nuer.phi)
    fs = nuer.fs
    rotated = apply_rotation(b, RotationPlan([PlaneRotation(fs.index("nom"), fs.index("gen"), 0.3)]))
    assert np.allclose(rotated.gram(), b.gram(), atol=1e-12)
    assert rotated.is_unit()


def test_plan_round_trip():
    plan = RotationPlan([PlaneRotation(0, 2, 0.25), PlaneRotation(3, 1, -0.1)], "IV")
    again = RotationPlan.from_dict(plan.to_dict())
    assert again.label == "IV"
    assert again.rotations == plan.rotations


def test_deponent_transform(deponent):
    b = smart_init(deponent.phi, deponent.gold)
    active, passive = deponent.fs.index("active"), deponent.fs.index("passive")
    rotated = deponent_transform(b, active, passive)
    third = 1 / math.sqrt(3)
    assert column_of(rotated, "or")[active] == pytest.approx(third, abs=1e-9)
    assert column_of(rotated, "or")[passive] == pytest.approx(0.0, abs=1e-9)
    assert column_of(rotated, "o")[passive] == pytest.approx(-third, abs=1e-9)
    assert column_of(rotated, "o")[active] == pytest.approx(0.0, abs=1e-9)
    # the other coordinates are untouched
    others = [k for k in range(deponent.fs.num_values) if k not in (active, passive)]
    assert np.array_equal(rotated.columns[others], b.columns[others])


def test_deponent_selection(deponent):
    b = smart_init(deponent.phi, deponent.gold)
    fs = deponent.fs
    rotated = deponent_transform(b, fs.index("active"), fs.index("passive"))
    c = competition(deponent.phi, rotated)
    winners = dict(zip((cell.label for cell in c.row_labels), max_rows(c).tpm.winners()))
    active_cells = ["sg 1st active", "sg 2nd active", "sg 3rd active",
                    "pl 1st active", "pl 2nd active", "pl 3rd active"]
    assert [winners[cell] for cell in active_cells] == ["or", "āris", "ātur", "āmur", "āmini", "antur"]
    row = row_for(c, "sg 1st active")
    assert row[c.morphemes.index("or")] == pytest.approx(math.sqrt(3))


def test_four_quarter_turns_return_home(deponent):
    b = smart_init(deponent.phi, deponent.gold)
    fs = deponent.fs
    turned = b
    for _ in range(4):
        turned = deponent_transform(turned, fs.index("active"), fs.index("passive"))
    assert np.allclose(turned.columns, b.columns, atol=1e-12)
    assert DEPONENT_ANGLE == pytest.approx(3 * math.pi / 2)


def test_base_class_needs_no_rotation(nuer):
    b = base_configuration(nuer.classes, nuer.phi)
    result = learn_class_rotation(b, nuer.phi, nuer.classes.classes["III"], RotationLearnConfig())
    assert result.converged
    assert result.iterations == 0
    assert result.plan.rotations == []


@pytest.mark.parametrize("label", ["I", "II"])
def test_single_class_learning(nuer, label):
    b = base_configuration(nuer.classes, nuer.phi)
    target = nuer.classes.classes[label]
    results = [learn_class_rotation(b, nuer.phi, target, RotationLearnConfig(seed=seed)) for seed in range(10)]
    done = [r for r in results if r.converged]
    assert len(done) >= 9
    for result in done:
        assert result.min_margin >= 0.02
        assert max_rows(competition(nuer.phi, result.b)).tpm.equals(target)
        assert np.allclose(result.b.gram(), b.gram(), atol=1e-9)
        assert np.allclose(apply_rotation(b, result.plan).columns, result.b.columns, atol=1e-9)


def test_target_shape_mismatch(nuer, english):
    b = base_configuration(nuer.classes, nuer.phi)
    with pytest.raises(ShapeMismatch):
        learn_class_rotation(b, nuer.phi, english.gold, RotationLearnConfig())


def test_target_with_missing_cells(nuer):
    b = base_configuration(nuer.classes, nuer.phi)
    full = nuer.classes.classes["I"]
    short = TotalParadigmMatrix(full.entries[:4], full.row_labels[:4], full.morphemes)
    with pytest.raises(ShapeMismatch, match="cells"):
        learn_class_rotation(b, nuer.phi, short, RotationLearnConfig())


@pytest.mark.parametrize("kwargs", [{"base_increment": 0.0}, {"runs": 0}, {"max_iters": 0}])
def test_bad_rotation_config(kwargs):
    with pytest.raises(GeomorphError):
        RotationLearnConfig(**kwargs)


def test_nuer_batch_of_100_runs(nuer):
    b = base_configuration(nuer.classes, nuer.phi)
    reference = {"I": 8.73, "II": 1.48}
    summaries, plans = learn_all_classes(nuer.classes, nuer.phi, b, RotationLearnConfig(runs=100, seed=7),
                                         reference=reference)
    assert [s.label for s in summaries] == list(DISTANCES)
    for summary in summaries:
        assert summary.runs == 100
        assert summary.converged_runs >= 95, summary.label
        assert summary.distance == DISTANCES[summary.label]
        assert summary.smallest_margin >= 0.02
    assert set(plans) == set(DISTANCES)
    assert plans["III"].rotations == []
    for label, plan in plans.items():
        rotated = apply_rotation(b, plan)
        assert max_rows(competition(nuer.phi, rotated)).tpm.equals(nuer.classes.classes[label]), label


def test_batch_is_reproducible(nuer):
    b = base_configuration(nuer.classes, nuer.phi)
    cfg = RotationLearnConfig(runs=3, seed=5)
    first, _ = learn_all_classes(nuer.classes, nuer.phi, b, cfg)
    second, _ = learn_all_classes(nuer.classes, nuer.phi, b, cfg)
    assert [s.to_dict() for s in first] == [s.to_dict() for s in second]


def test_flag_against_reference(nuer):
    b = base_configuration(nuer.classes, nuer.phi)
    summaries, _ = learn_all_classes(nuer.classes, nuer.phi, b, RotationLearnConfig(runs=2, seed=1),
                                     reference={"II": 1e-6, "III": 1.0})
    by_label = {s.label: s for s in summaries}
    assert by_label["II"].flagged
    assert not by_label["III"].flagged  # zero iterations never exceed the reference
    assert not by_label["I"].flagged  # no reference given
