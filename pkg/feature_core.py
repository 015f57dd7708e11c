"""
Feature systems, paradigm cells and the cell-to-corner matrix Phi.

Coordinates of feature-value space follow declaration order: features in
the order given, values in the order given within each feature.
"""
import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from errors import DuplicateCell, DuplicateValue, EmptyFeature, UnknownValue

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FeatureSystem:
    features: tuple  # ((name, (value, ...)), ...)
    value_index: dict = field(compare=False, repr=False)

    @property
    def num_values(self):
        return len(self.value_index)

    @property
    def feature_names(self):
        return [name for name, _ in self.features]

    @property
    def value_names(self):
        return [value for _, values in self.features for value in values]

    def index(self, value):
        try:
            return self.value_index[value]
        except KeyError:
            raise UnknownValue(f"unknown feature value '{value}'") from None

    def values_of(self, feature):
        for name, values in self.features:
            if name == feature:
                return values
        raise UnknownValue(f"unknown feature '{feature}'")

    def feature_of(self, value):
        for name, values in self.features:
            if value in values:
                return name
        raise UnknownValue(f"unknown feature value '{value}'")

    def block(self, feature):
        """Column indices belonging to one feature"""
        return [self.value_index[v] for v in self.values_of(feature)]


@dataclass(frozen=True)
class ParadigmCell:
    assignment: tuple  # ((feature, value), ...) in declaration order

    @classmethod
    def from_values(cls, fs, values):
        """Build a cell from one value per feature, in declaration order"""
        values = list(values)
        if len(values) != len(fs.features):
            raise UnknownValue(
                f"cell {' '.join(values)} gives {len(values)} values for {len(fs.features)} features"
            )
        pairs = []
        for (name, allowed), value in zip(fs.features, values):
            if value not in allowed:
                raise UnknownValue(f"'{value}' is not a value of feature '{name}'")
            pairs.append((name, value))
        return cls(tuple(pairs))

    @property
    def values(self):
        return tuple(value for _, value in self.assignment)

    def value_for(self, feature):
        return dict(self.assignment)[feature]

    @property
    def label(self):
        return " ".join(self.values)


@dataclass(frozen=True)
class PhiMatrix:
    entries: np.ndarray
    row_labels: tuple

    @property
    def shape(self):
        return self.entries.shape

    @property
    def labels(self):
        return [cell.label for cell in self.row_labels]

    def row_of(self, cell):
        return self.row_labels.index(cell)


def build_feature_system(declarations):
    if not declarations:
        raise EmptyFeature("a feature system needs at least one feature")
    value_index = {}
    features = []
    for name, values in declarations:
        values = tuple(values)
        if len(values) < 2:
            raise EmptyFeature(f"feature '{name}' needs at least two values")
        for value in values:
            if value in value_index:
                raise DuplicateValue(f"value '{value}' declared twice")
            value_index[value] = len(value_index)
        features.append((name, values))
    fs = FeatureSystem(tuple(features), value_index)
    logger.debug("Built feature system with %d values", fs.num_values)
    return fs


def corner_vector(cell, fs):
    vec = np.zeros(fs.num_values)
    assigned = dict(cell.assignment)
    for name, _ in fs.features:
        if name not in assigned:
            raise UnknownValue(f"cell {cell.label} has no value for '{name}'")
    for name, value in cell.assignment:
        if value not in fs.values_of(name):
            raise UnknownValue(f"'{value}' is not a value of feature '{name}'")
        vec[fs.index(value)] = 1.0
    return vec


def all_cells(fs):
    """Every cell of the full cross-product, first feature varying slowest"""
    value_lists = [values for _, values in fs.features]
    return [ParadigmCell.from_values(fs, combo) for combo in itertools.product(*value_lists)]


def build_phi(fs, cells):
    cells = tuple(cells)
    if not cells:
        raise DuplicateCell("a paradigm needs at least one cell")
    seen = set()
    for cell in cells:
        if cell in seen:
            raise DuplicateCell(f"cell '{cell.label}' listed twice")
        seen.add(cell)
    entries = np.vstack([corner_vector(cell, fs) for cell in cells])
    return PhiMatrix(entries, cells)


def validate_feature_blocks(phi, fs):
    """List violations of the per-feature column structure of Phi.

    Within one feature's block, distinct columns must be orthogonal and the
    columns must add up to the all-ones vector.
    """
    diagnostics = []
    entries = phi.entries
    if entries.shape[1] != fs.num_values:
        return [{"feature": None, "problem": "shape", "detail": list(entries.shape)}]
    ones = np.ones(entries.shape[0])
    for name, values in fs.features:
        cols = fs.block(name)
        for a, b in itertools.combinations(cols, 2):
            if abs(float(entries[:, a] @ entries[:, b])) > 1e-12:
                diagnostics.append({
                    "feature": name,
                    "problem": "not orthogonal",
                    "detail": [fs.value_names[a], fs.value_names[b]],
                })
        if not np.allclose(entries[:, cols].sum(axis=1), ones):
            diagnostics.append({"feature": name, "problem": "block sum", "detail": list(values)})
    return diagnostics
