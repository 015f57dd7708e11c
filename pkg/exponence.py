"""
Morpheme vectors, smart initialization and selection by maximal inner product.

B holds one unit-length column per morpheme. A paradigm cell is realized by
the morpheme whose column has the strictly largest inner product with the
cell's corner vector.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from errors import ShapeMismatch, ZeroColumn

logger = logging.getLogger(__name__)

UNIT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ExponentMatrix:
    morphemes: tuple
    columns: np.ndarray  # NumFeaVal x NumMorph

    def __post_init__(self):
        if self.columns.shape[1] != len(self.morphemes):
            raise ShapeMismatch(
                f"{self.columns.shape[1]} columns for {len(self.morphemes)} morphemes"
            )

    def column(self, morpheme):
        return self.columns[:, self.morphemes.index(morpheme)]

    def norms(self):
        return np.linalg.norm(self.columns, axis=0)

    def is_unit(self, tol=UNIT_TOLERANCE):
        return bool(np.all(np.abs(self.norms() - 1.0) <= tol))

    def gram(self):
        return self.columns.T @ self.columns

    def with_columns(self, columns):
        return ExponentMatrix(self.morphemes, columns)


@dataclass(frozen=True)
class TotalParadigmMatrix:
    entries: np.ndarray  # NumParaPos x NumMorph, 0/1
    row_labels: tuple
    morphemes: tuple

    def winners(self):
        """Morpheme label per row, None for an all-zero row"""
        result = []
        for row in self.entries:
            hits = np.flatnonzero(row)
            result.append(self.morphemes[hits[0]] if len(hits) == 1 else None)
        return result

    def winner_indices(self):
        return [int(np.flatnonzero(row)[0]) if row.sum() == 1 else -1 for row in self.entries]

    @classmethod
    def from_winners(cls, row_labels, morphemes, winners):
        entries = np.zeros((len(row_labels), len(morphemes)))
        for i, label in enumerate(winners):
            if label is not None:
                entries[i, morphemes.index(label)] = 1.0
        return cls(entries, tuple(row_labels), tuple(morphemes))

    def equals(self, other):
        return self.entries.shape == other.entries.shape and bool(
            np.array_equal(self.entries, other.entries)
        )


@dataclass(frozen=True)
class CompetitionMatrix:
    entries: np.ndarray  # NumParaPos x NumMorph
    row_labels: tuple
    morphemes: tuple


@dataclass
class Selection:
    tpm: TotalParadigmMatrix
    ties: list = field(default_factory=list)  # [{'row': i, 'cell': label, 'morphemes': [...]}]


@dataclass
class EvaluationReport:
    matches: list
    mismatches: list  # [{'row', 'cell', 'expected', 'predicted'}]
    margins: np.ndarray
    ties: list

    @property
    def min_margin(self):
        return float(self.margins.min()) if len(self.margins) else 0.0

    @property
    def correct(self):
        return sum(self.matches)

    @property
    def all_correct(self):
        return not self.mismatches


def _check_rows(phi, gold):
    if phi.entries.shape[0] != gold.entries.shape[0]:
        raise ShapeMismatch(
            f"Phi has {phi.entries.shape[0]} rows but the paradigm has {gold.entries.shape[0]}"
        )


def count_features(phi, gold, weights=None):
    """Feature-value by morpheme co-occurrence counts, Phi^T diag(w) TPM"""
    _check_rows(phi, gold)
    if weights is None:
        weights = np.ones(phi.entries.shape[0])
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (phi.entries.shape[0],):
        raise ShapeMismatch(f"expected {phi.entries.shape[0]} row weights, got {weights.shape}")
    if np.any(weights <= 0):
        raise ShapeMismatch("row weights must be positive")
    return phi.entries.T @ (weights[:, None] * gold.entries)


def normalize_columns(counts, morphemes):
    counts = np.asarray(counts, dtype=float)
    norms = np.linalg.norm(counts, axis=0)
    for j, norm in enumerate(norms):
        if norm == 0.0:
            raise ZeroColumn(f"morpheme '{morphemes[j]}' is never attested")
    return ExponentMatrix(tuple(morphemes), counts / norms)


def smart_init(phi, gold, weights=None):
    counts = count_features(phi, gold, weights)
    b = normalize_columns(counts, gold.morphemes)
    logger.debug("Smart initialization over %d cells, %d morphemes", *gold.entries.shape)
    return b


def competition(phi, b):
    if phi.entries.shape[1] != b.columns.shape[0]:
        raise ShapeMismatch(
            f"Phi has {phi.entries.shape[1]} columns but B has {b.columns.shape[0]} rows"
        )
    return CompetitionMatrix(phi.entries @ b.columns, phi.row_labels, b.morphemes)


def max_rows(c, tie_level=logging.WARNING):
    """Strict row-wise argmax; a tied row stays all zero and is reported

    Ties are logged at tie_level; training loops pass DEBUG.
    """
    entries = np.zeros_like(c.entries)
    ties = []
    for i, row in enumerate(c.entries):
        best = row.max()
        top = np.flatnonzero(row == best)
        if len(top) == 1:
            entries[i, top[0]] = 1.0
        else:
            label = c.row_labels[i].label if hasattr(c.row_labels[i], "label") else str(c.row_labels[i])
            ties.append({"row": i, "cell": label, "morphemes": [c.morphemes[k] for k in top]})
            logger.log(tie_level, "Tie at %s between %s", label, ", ".join(c.morphemes[k] for k in top))
    return Selection(TotalParadigmMatrix(entries, c.row_labels, c.morphemes), ties)


def row_margins(c):
    """Winner activation minus runner-up, per row"""
    if c.entries.shape[1] < 2:
        return np.full(c.entries.shape[0], np.inf)
    ordered = np.sort(c.entries, axis=1)
    return ordered[:, -1] - ordered[:, -2]


def gold_margins(c, gold):
    """Gold morpheme's activation minus the best rival's; negative where gold loses"""
    idx = np.argmax(gold.entries, axis=1)
    rows = np.arange(c.entries.shape[0])
    gold_act = c.entries[rows, idx]
    rivals = c.entries.copy()
    rivals[rows, idx] = -np.inf
    return gold_act - rivals.max(axis=1)


def evaluate(predicted, gold, c=None):
    if predicted.entries.shape != gold.entries.shape:
        raise ShapeMismatch(
            f"predicted {predicted.entries.shape} and gold {gold.entries.shape} differ in shape"
        )
    if tuple(predicted.morphemes) != tuple(gold.morphemes):
        raise ShapeMismatch("predicted and gold use different morpheme labels")
    got = predicted.winners()
    want = gold.winners()
    matches, mismatches, ties = [], [], []
    for i, (p, g) in enumerate(zip(got, want)):
        label = gold.row_labels[i].label
        matches.append(p == g)
        if p is None:
            ties.append({"row": i, "cell": label})
        if p != g:
            mismatches.append({"row": i, "cell": label, "expected": g, "predicted": p})
    margins = row_margins(c) if c is not None else np.zeros(len(got))
    return EvaluationReport(matches, mismatches, margins, ties)


def select(phi, b, gold=None):
    """Competition, Max_rows and, when gold is given, the evaluation"""
    c = competition(phi, b)
    selection = max_rows(c)
    report = evaluate(selection.tpm, gold, c) if gold is not None else None
    return c, selection, report
