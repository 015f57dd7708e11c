from pathlib import Path

import numpy as np
import pytest

import paradigm_io
from environment_config import get_environment_config
from errors import DuplicateDeclaration, ParadigmSyntaxError, ShapeMismatch, UndeclaredName
from paradigm_io import NULL_LABEL, list_fixtures, parse_text, resolve_fixture, serialize

BUNDLED = [
    "english_weak_verb", "german_full", "german_plurals", "german_present", "latin_adjectives",
    "latin_deponent", "nuer_classes", "russian_class1", "spanish_verbs",
]

HEADER = "FEATURE number: sg pl\nFEATURE case: nom acc\nMORPHEMES: 0 s\n"


def test_bundled_fixtures_are_listed():
    assert list_fixtures() == BUNDLED


def test_english_file(english):
    assert english.kind == "paradigm"
    assert english.fs.num_values == 7
    assert len(english.cells) == 12
    assert english.morphemes == [NULL_LABEL, "s", "ed"]
    assert english.gold.winners()[8] == "s"
    assert english.gold.winners()[:6] == ["ed"] * 6


def test_nuer_file(nuer):
    assert nuer.kind == "classes"
    assert len(nuer.classes.classes) == 16
    assert sum(nuer.classes.lexeme_counts.values()) == 61 + 52 + 45 + 23 + 11 + 10 + 9 + 8 + 5 + 3 + 2 + 2 + 2 + 1 + 1 + 1
    assert nuer.phi.shape == (6, 5)


def test_composition_file(plurals):
    assert plurals.kind == "composition"
    assert plurals.plane == ("pl", "sg")
    assert plurals.stems["Auto"] == pytest.approx(-0.550966)
    assert NULL_LABEL in plurals.affixes
    assert len(plurals.forms) == 10


def test_comments_and_blank_lines():
    pf = parse_text("# header\n\n" + HEADER + "CELL sg nom -> 0  # bare\n  \nCELL sg acc -> s\n")
    assert [c.label for c in pf.cells] == ["sg nom", "sg acc"]
    assert pf.gold.winners() == [NULL_LABEL, "s"]


def test_undeclared_value_reports_its_line():
    with pytest.raises(UndeclaredName) as info:
        parse_text(HEADER + "CELL sg nom -> 0\nCELL du nom -> s\n")
    assert info.value.line == 5
    assert info.value.name == "du"


def test_undeclared_morpheme():
    with pytest.raises(UndeclaredName) as info:
        parse_text(HEADER + "CELL sg nom -> en\n")
    assert info.value.kind == "morpheme"


def test_syntax_error_position():
    with pytest.raises(ParadigmSyntaxError) as info:
        parse_text(HEADER + "CELL sg nom s\n")
    assert info.value.line == 4
    assert info.value.col > 1
    assert "4:" in str(info.value)


def test_unknown_statement():
    with pytest.raises(ParadigmSyntaxError) as info:
        parse_text("FEATURES number: sg pl\n")
    assert info.value.line == 1


def test_duplicate_declarations():
    with pytest.raises(DuplicateDeclaration):
        parse_text(HEADER + "CELL sg nom -> 0\nCELL sg nom -> s\n")
    with pytest.raises(DuplicateDeclaration):
        parse_text("FEATURE number: sg pl\nFEATURE number: du tr\n")
    with pytest.raises(DuplicateDeclaration):
        parse_text("FEATURE number: sg pl\nMORPHEMES: a a\n")


def test_values_out_of_feature_order():
    with pytest.raises(ParadigmSyntaxError):
        parse_text(HEADER + "CELL nom sg -> 0\n")


def test_unclosed_class():
    with pytest.raises(ParadigmSyntaxError) as info:
        parse_text(HEADER + "CLASS A LEXEMES 3\nCELL sg nom -> 0\n")
    assert "END" in str(info.value)


def test_classes_must_cover_the_same_cells():
    text = HEADER + (
        "CLASS A LEXEMES 3\nCELL sg nom -> 0\nCELL sg acc -> s\nEND\n"
        "CLASS B LEXEMES 2\nCELL sg nom -> 0\nEND\n"
    )
    with pytest.raises(ShapeMismatch):
        parse_text(text)


def test_form_with_undeclared_stem():
    text = "FEATURE number: sg pl\nPLANE pl sg\nAFFIX s @ 0.5\nFORM Haus pl -> s\n"
    with pytest.raises(UndeclaredName) as info:
        parse_text(text)
    assert info.value.kind == "stem"


def test_angles_are_optional():
    pf = parse_text("FEATURE number: sg pl\nPLANE pl sg\nSTEM Kind\nAFFIX er @ -0.5\nFORM Kind pl -> er\n")
    assert pf.stems == {"Kind": None}
    assert pf.affixes == {"er": -0.5}


@pytest.mark.parametrize("name", BUNDLED)
def test_serialize_is_a_fixpoint(name):
    pf = paradigm_io.load(name)
    text = serialize(pf)
    again = parse_text(text, pf.source)
    assert serialize(again) == text
    assert again.fs.value_names == pf.fs.value_names
    if pf.phi is not None:
        assert np.array_equal(again.phi.entries, pf.phi.entries)
    if pf.gold is not None:
        assert again.gold.equals(pf.gold)
    if pf.classes is not None:
        assert again.classes.lexeme_counts == pf.classes.lexeme_counts
    assert again.stems == pf.stems
    assert again.affixes == pf.affixes


def test_resolve_by_prefix():
    assert resolve_fixture("nuer").name == "nuer_classes.para"
    assert resolve_fixture("english_weak_verb").name == "english_weak_verb.para"


def test_resolve_ambiguous_or_missing():
    with pytest.raises(FileNotFoundError, match="ambiguous"):
        resolve_fixture("german")
    with pytest.raises(FileNotFoundError):
        resolve_fixture("klingon")


def test_resolve_path(tmp_path):
    path = tmp_path / "tiny.para"
    path.write_text(HEADER + "CELL sg nom -> 0\nCELL pl nom -> s\n", encoding="utf-8")
    pf = paradigm_io.load(str(path))
    assert pf.name == "tiny"
    assert pf.summary()["cells"] == ["sg nom", "pl nom"]


def test_fixture_dir_override(tmp_path, monkeypatch):
    (tmp_path / "mine.para").write_text(HEADER + "CELL sg nom -> 0\n", encoding="utf-8")
    monkeypatch.setenv("GEOMORPH_FIXTURE_DIR", str(tmp_path))
    assert list_fixtures() == ["mine"]
    assert paradigm_io.load("mine").cells[0].label == "sg nom"


def test_fixture_dir_follows_the_environment_config(tmp_path, monkeypatch):
    monkeypatch.setenv("GEOMORPH_FIXTURE_DIR", str(tmp_path))
    assert paradigm_io.fixture_dir() == Path(get_environment_config().fixture_dir)
    monkeypatch.setenv("GEOMORPH_FIXTURE_DIR", "")
    assert get_environment_config().fixture_dir is None
    assert paradigm_io.fixture_dir() == paradigm_io.BUNDLED_FIXTURES
