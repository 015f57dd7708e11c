"""
Paradigm description files.

Grammar, one statement per line ('#' starts a comment):

    FEATURE <name>: <v1> <v2> ...
    MORPHEMES: <m1> <m2> ...            token 0 is the null morpheme
    CELL <value per feature> -> <morpheme>
    CLASS <label> LEXEMES <count>       opens a block of CELL lines ...
    END                                 ... closed here
    PLANE <x-value> <y-value>
    STEM <label> [@ <angle-rad>]
    AFFIX <label> [@ <angle-rad>]
    FORM <stem> <value per feature> -> <affix>
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path

import pyparsing as pp

from environment_config import get_fixture_dir
from errors import (
    DuplicateDeclaration,
    GeomorphError,
    ParadigmSyntaxError,
    ShapeMismatch,
    UndeclaredName,
)
from exponence import TotalParadigmMatrix
from feature_core import ParadigmCell, build_feature_system, build_phi
from rotation_classes import ClassInventory

logger = logging.getLogger(__name__)

NULL_TOKEN = "0"
NULL_LABEL = "∅"
FIXTURE_SUFFIX = ".para"
BUNDLED_FIXTURES = Path(__file__).resolve().parent / "fixtures"

# Grammar
ARROW = pp.Suppress(pp.Literal("->")).set_name("'->'")
COLON = pp.Suppress(":").set_name("':'")
AT = pp.Suppress("@").set_name("'@'")
token = pp.Regex(r"(?!->)[^\s:#@]+").set_name("name")
values = pp.Group(pp.OneOrMore(token)).set_name("values")
count = pp.pyparsing_common.integer.copy().set_name("count")
angle = pp.pyparsing_common.fnumber.copy().set_name("angle")

feature_line = pp.Keyword("FEATURE")("kind") - token("name") - COLON - values("values")
morphemes_line = pp.Keyword("MORPHEMES")("kind") - COLON - values("values")
cell_line = pp.Keyword("CELL")("kind") - values("values") - ARROW - token("exponent")
class_line = pp.Keyword("CLASS")("kind") - token("name") - pp.Keyword("LEXEMES") - count("count")
end_line = pp.Keyword("END")("kind")
plane_line = pp.Keyword("PLANE")("kind") - token("x") - token("y")
stem_line = pp.Keyword("STEM")("kind") - token("name") - pp.Optional(AT - angle("angle"))
affix_line = pp.Keyword("AFFIX")("kind") - token("name") - pp.Optional(AT - angle("angle"))
form_line = pp.Keyword("FORM")("kind") - token("name") - values("values") - ARROW - token("exponent")

statement = (
    feature_line | morphemes_line | cell_line | class_line | end_line
    | plane_line | stem_line | affix_line | form_line
).set_name("statement")
line_grammar = statement + pp.StringEnd()
line_grammar.ignore(pp.python_style_comment)


def _label(tok):
    return NULL_LABEL if tok == NULL_TOKEN else tok


def _token(label):
    return NULL_TOKEN if label == NULL_LABEL else label


@dataclass
class ParadigmFile:
    source: str
    features: list = field(default_factory=list)
    morphemes: list = field(default_factory=list)
    cells: list = field(default_factory=list)
    gold: TotalParadigmMatrix | None = None
    classes: ClassInventory | None = None
    plane: tuple | None = None
    stems: dict = field(default_factory=dict)  # label -> angle or None
    affixes: dict = field(default_factory=dict)
    forms: list = field(default_factory=list)  # (stem, ParadigmCell, affix)
    fs: object = None
    phi: object = None

    @property
    def kind(self):
        if self.classes is not None:
            return "classes"
        if self.stems or self.affixes:
            return "composition"
        return "paradigm"

    @property
    def name(self):
        return Path(self.source).stem if self.source else ""

    def summary(self):
        return {
            "name": self.name,
            "kind": self.kind,
            "features": [[n, list(v)] for n, v in self.features],
            "num_values": self.fs.num_values if self.fs else 0,
            "cells": [c.label for c in self.cells],
            "morphemes": list(self.morphemes),
            "classes": list(self.classes.classes) if self.classes else [],
            "plane": list(self.plane) if self.plane else None,
            "stems": list(self.stems),
            "affixes": list(self.affixes),
        }


class _Builder:
    """Collects parsed statements and checks names as they are declared"""

    def __init__(self, source):
        self.pf = ParadigmFile(source=source)
        self.feature_names = set()
        self.fs = None
        self.current_class = None
        self.class_cells = {}  # label -> [(cell, morpheme)]
        self.class_counts = {}
        self.class_lines = {}
        self.single_cells = []
        self.seen_cells = set()

    def _fs(self, line):
        if self.fs is None:
            if not self.pf.features:
                raise UndeclaredName("FEATURE", line, "feature declaration", self.pf.source)
            self.fs = build_feature_system(self.pf.features)
            self.pf.fs = self.fs
        return self.fs

    def _cell(self, vals, line):
        fs = self._fs(line)
        vals = list(vals)
        for v in vals:
            if v not in fs.value_index:
                raise UndeclaredName(v, line, "value", self.pf.source)
        if len(vals) != len(fs.features):
            raise ParadigmSyntaxError(line, 1, f"{len(fs.features)} feature values, got {len(vals)}",
                                      self.pf.source)
        try:
            return ParadigmCell.from_values(fs, vals)
        except GeomorphError as e:
            raise ParadigmSyntaxError(line, 1, f"values in feature order ({e})", self.pf.source) from None

    def feature(self, res, line):
        if self.fs is not None:
            raise ParadigmSyntaxError(line, 1, "FEATURE lines before any other statement", self.pf.source)
        name = res["name"]
        if name in self.feature_names:
            raise DuplicateDeclaration(name, line, self.pf.source)
        declared = {v for _, vs in self.pf.features for v in vs}
        for v in res["values"]:
            if v in declared:
                raise DuplicateDeclaration(v, line, self.pf.source)
        self.feature_names.add(name)
        self.pf.features.append((name, list(res["values"])))

    def morphemes(self, res, line):
        if self.pf.morphemes:
            raise DuplicateDeclaration("MORPHEMES", line, self.pf.source)
        labels = [_label(t) for t in res["values"]]
        if len(set(labels)) != len(labels):
            dup = next(m for m in labels if labels.count(m) > 1)
            raise DuplicateDeclaration(dup, line, self.pf.source)
        self.pf.morphemes = labels

    def cell(self, res, line):
        cell = self._cell(res["values"], line)
        morpheme = _label(res["exponent"])
        if morpheme not in self.pf.morphemes:
            raise UndeclaredName(res["exponent"], line, "morpheme", self.pf.source)
        key = (self.current_class, cell)
        if key in self.seen_cells:
            raise DuplicateDeclaration(cell.label, line, self.pf.source)
        self.seen_cells.add(key)
        if self.current_class is None:
            if self.class_cells:
                raise ParadigmSyntaxError(line, 1, "CELL inside a CLASS block", self.pf.source)
            self.single_cells.append((cell, morpheme))
        else:
            self.class_cells[self.current_class].append((cell, morpheme))

    def open_class(self, res, line):
        if self.current_class is not None:
            raise ParadigmSyntaxError(line, 1, "END before the next CLASS", self.pf.source)
        if self.single_cells:
            raise ParadigmSyntaxError(line, 1, "no CLASS blocks after free-standing CELL lines", self.pf.source)
        label = res["name"]
        if label in self.class_cells:
            raise DuplicateDeclaration(label, line, self.pf.source)
        if res["count"] < 1:
            raise ParadigmSyntaxError(line, 1, "a positive lexeme count", self.pf.source)
        self.current_class = label
        self.class_cells[label] = []
        self.class_counts[label] = res["count"]
        self.class_lines[label] = line

    def close_class(self, res, line):
        if self.current_class is None:
            raise ParadigmSyntaxError(line, 1, "CLASS before END", self.pf.source)
        self.current_class = None

    def plane(self, res, line):
        fs = self._fs(line)
        if self.pf.plane is not None:
            raise DuplicateDeclaration("PLANE", line, self.pf.source)
        for v in (res["x"], res["y"]):
            if v not in fs.value_index:
                raise UndeclaredName(v, line, "value", self.pf.source)
        if res["x"] == res["y"]:
            raise ParadigmSyntaxError(line, 1, "two distinct plane axes", self.pf.source)
        self.pf.plane = (res["x"], res["y"])

    def _entry(self, table, res, line):
        label = _label(res["name"])
        if label in self.pf.stems or label in self.pf.affixes:
            raise DuplicateDeclaration(res["name"], line, self.pf.source)
        table[label] = float(res["angle"]) if "angle" in res else None

    def stem(self, res, line):
        self._entry(self.pf.stems, res, line)

    def affix(self, res, line):
        self._entry(self.pf.affixes, res, line)

    def form(self, res, line):
        stem = _label(res["name"])
        if stem not in self.pf.stems:
            raise UndeclaredName(res["name"], line, "stem", self.pf.source)
        affix = _label(res["exponent"])
        if affix not in self.pf.affixes:
            raise UndeclaredName(res["exponent"], line, "affix", self.pf.source)
        cell = self._cell(res["values"], line)
        if any(s == stem and c == cell for s, c, _ in self.pf.forms):
            raise DuplicateDeclaration(f"{res['name']} {cell.label}", line, self.pf.source)
        self.pf.forms.append((stem, cell, affix))

    def finish(self, last_line):
        pf = self.pf
        if self.current_class is not None:
            raise ParadigmSyntaxError(last_line + 1, 1, "END", pf.source)
        self._fs(last_line)
        if self.class_cells:
            first_label = next(iter(self.class_cells))
            order = [cell for cell, _ in self.class_cells[first_label]]
            pf.cells = order
            pf.phi = build_phi(pf.fs, order)
            classes = {}
            for label, rows in self.class_cells.items():
                by_cell = dict(rows)
                if set(by_cell) != set(order):
                    raise ShapeMismatch(
                        f"{pf.source}:{self.class_lines[label]}: class {label} covers different cells "
                        f"than class {first_label}"
                    )
                winners = [by_cell[cell] for cell in order]
                classes[label] = TotalParadigmMatrix.from_winners(tuple(order), tuple(pf.morphemes), winners)
            pf.classes = ClassInventory(classes, dict(self.class_counts))
        elif self.single_cells:
            pf.cells = [cell for cell, _ in self.single_cells]
            pf.phi = build_phi(pf.fs, pf.cells)
            pf.gold = TotalParadigmMatrix.from_winners(
                tuple(pf.cells), tuple(pf.morphemes), [m for _, m in self.single_cells]
            )
        return pf


HANDLERS = {
    "FEATURE": _Builder.feature,
    "MORPHEMES": _Builder.morphemes,
    "CELL": _Builder.cell,
    "CLASS": _Builder.open_class,
    "END": _Builder.close_class,
    "PLANE": _Builder.plane,
    "STEM": _Builder.stem,
    "AFFIX": _Builder.affix,
    "FORM": _Builder.form,
}


def parse_text(text, source="<string>"):
    builder = _Builder(source)
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        try:
            res = line_grammar.parse_string(raw, parse_all=True)
        except pp.ParseBaseException as exc:
            expected = str(exc.msg)
            if expected.startswith("Expected "):
                expected = expected[len("Expected "):]
            raise ParadigmSyntaxError(lineno, exc.col, expected, source) from None
        HANDLERS[res["kind"]](builder, res, lineno)
    pf = builder.finish(lineno)
    logger.debug("Parsed %s: %s with %d cells", source, pf.kind, len(pf.cells))
    return pf


def parse(path):
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_text(text, str(path))


def serialize(pf):
    """Render a ParadigmFile back into the line grammar"""
    lines = []
    for name, vals in pf.features:
        lines.append(f"FEATURE {name}: {' '.join(vals)}")
    if pf.morphemes:
        lines.append("MORPHEMES: " + " ".join(_token(m) for m in pf.morphemes))
    if pf.classes is not None:
        for label, tpm in pf.classes.classes.items():
            lines.append("")
            lines.append(f"CLASS {label} LEXEMES {pf.classes.lexeme_counts[label]}")
            for cell, winner in zip(tpm.row_labels, tpm.winners()):
                lines.append(f"  CELL {cell.label} -> {_token(winner)}")
            lines.append("END")
    elif pf.gold is not None:
        for cell, winner in zip(pf.gold.row_labels, pf.gold.winners()):
            lines.append(f"CELL {cell.label} -> {_token(winner)}")
    if pf.plane is not None:
        lines.append(f"PLANE {pf.plane[0]} {pf.plane[1]}")
    for keyword, table in (("STEM", pf.stems), ("AFFIX", pf.affixes)):
        for label, theta in table.items():
            suffix = f" @ {theta!r}" if theta is not None else ""
            lines.append(f"{keyword} {_token(label)}{suffix}")
    for stem, cell, affix in pf.forms:
        lines.append(f"FORM {_token(stem)} {cell.label} -> {_token(affix)}")
    return "\n".join(lines) + "\n"


def fixture_dir():
    override = get_fixture_dir()
    return Path(override) if override else BUNDLED_FIXTURES


def list_fixtures():
    return sorted(p.stem for p in fixture_dir().glob(f"*{FIXTURE_SUFFIX}"))


def resolve_fixture(name):
    """A path as given, or a bundled fixture by exact name or unique prefix"""
    candidate = Path(name)
    if candidate.is_file():
        return candidate
    names = list_fixtures()
    if name in names:
        return fixture_dir() / f"{name}{FIXTURE_SUFFIX}"
    matches = [n for n in names if n.startswith(name)]
    if len(matches) == 1:
        return fixture_dir() / f"{matches[0]}{FIXTURE_SUFFIX}"
    if matches:
        raise FileNotFoundError(f"fixture name '{name}' is ambiguous: {', '.join(matches)}")
    raise FileNotFoundError(f"no paradigm file or bundled fixture named '{name}'")


def load(name):
    return parse(resolve_fixture(name))
