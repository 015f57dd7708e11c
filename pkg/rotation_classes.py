"""
Inflection classes as rotations of one rigid base configuration.

The base configuration is the lexeme-weighted smart initialization over the
well-attested classes. Every other class is reached by a sequence of plane
rotations applied to all morpheme columns alike, so lengths and angles
between morphemes never change.
"""
import logging
import math
from dataclasses import dataclass, field
from multiprocessing import Pool

import numpy as np

from errors import BadAxis, EmptyFilter, GeomorphError, ShapeMismatch
from exponence import (
    ExponentMatrix,
    competition,
    count_features,
    max_rows,
    normalize_columns,
)

logger = logging.getLogger(__name__)

DEPONENT_ANGLE = 3 * math.pi / 2


@dataclass(frozen=True)
class PlaneRotation:
    axis_i: int
    axis_j: int
    theta: float

    def __post_init__(self):
        if self.axis_i == self.axis_j:
            raise BadAxis(f"a plane needs two distinct axes, got {self.axis_i} twice")
        if self.axis_i < 0 or self.axis_j < 0:
            raise BadAxis(f"negative axis in ({self.axis_i}, {self.axis_j})")

    def matrix(self, n):
        if max(self.axis_i, self.axis_j) >= n:
            raise BadAxis(f"axis ({self.axis_i}, {self.axis_j}) outside a {n}-dimensional space")
        r = np.eye(n)
        c, s = math.cos(self.theta), math.sin(self.theta)
        i, j = self.axis_i, self.axis_j
        r[i, i], r[i, j] = c, -s
        r[j, i], r[j, j] = s, c
        return r

    def apply(self, columns):
        """Rotate every column; rows i and j change, the rest are copied"""
        n = columns.shape[0]
        if max(self.axis_i, self.axis_j) >= n:
            raise BadAxis(f"axis ({self.axis_i}, {self.axis_j}) outside a {n}-dimensional space")
        out = columns.copy()
        c, s = math.cos(self.theta), math.sin(self.theta)
        xi, xj = columns[self.axis_i], columns[self.axis_j]
        out[self.axis_i] = c * xi - s * xj
        out[self.axis_j] = s * xi + c * xj
        return out

    def to_dict(self):
        return {"i": self.axis_i, "j": self.axis_j, "theta": self.theta}


@dataclass
class RotationPlan:
    rotations: list = field(default_factory=list)
    label: str = ""

    def to_dict(self):
        return {"class": self.label, "rotations": [r.to_dict() for r in self.rotations]}

    @classmethod
    def from_dict(cls, data):
        return cls([PlaneRotation(r["i"], r["j"], r["theta"]) for r in data["rotations"]],
                   data.get("class", ""))


@dataclass
class ClassInventory:
    classes: dict  # label -> TotalParadigmMatrix, in declaration order
    lexeme_counts: dict  # label -> int

    def __post_init__(self):
        shapes = {(tpm.entries.shape, tuple(tpm.morphemes)) for tpm in self.classes.values()}
        if len(shapes) > 1:
            raise ShapeMismatch("all classes must share cells and morphemes")

    def filtered(self, min_lexemes):
        return {label: tpm for label, tpm in self.classes.items()
                if self.lexeme_counts[label] >= min_lexemes}


@dataclass(frozen=True)
class RotationLearnConfig:
    base_increment: float = 0.1
    max_iters: int = 500
    runs: int = 1
    seed: int = 0
    margin_floor: float = 0.02

    def __post_init__(self):
        if not self.base_increment > 0:
            raise GeomorphError(f"base_increment must be positive, got {self.base_increment}")
        if self.runs < 1:
            raise GeomorphError(f"runs must be at least 1, got {self.runs}")
        if self.max_iters < 1:
            raise GeomorphError(f"max_iters must be at least 1, got {self.max_iters}")


@dataclass
class RotationResult:
    plan: RotationPlan
    converged: bool
    iterations: int
    min_margin: float
    b: ExponentMatrix


@dataclass
class ClassSummary:
    label: str
    lexemes: int
    distance: int
    runs: int
    converged_runs: int
    mean_iterations: float
    smallest_margin: float
    mean_margin: float
    flagged: bool = False

    def to_dict(self):
        return {
            "class": self.label,
            "lexemes": self.lexemes,
            "distance": self.distance,
            "runs": self.runs,
            "converged_runs": self.converged_runs,
            "mean_iterations": self.mean_iterations,
            "smallest_margin": self.smallest_margin,
            "mean_margin": self.mean_margin,
            "flagged": self.flagged,
        }


def weighted_counts(inventory, phi, min_lexemes=3):
    chosen = inventory.filtered(min_lexemes)
    if not chosen:
        raise EmptyFilter(f"no class has at least {min_lexemes} lexemes")
    n = phi.entries.shape[0]
    total = None
    for label, tpm in chosen.items():
        counts = count_features(phi, tpm, np.full(n, float(inventory.lexeme_counts[label])))
        total = counts if total is None else total + counts
    return total


def base_configuration(inventory, phi, min_lexemes=3):
    counts = weighted_counts(inventory, phi, min_lexemes)
    morphemes = next(iter(inventory.classes.values())).morphemes
    return normalize_columns(counts, morphemes)


def class_of_base(b, phi, inventory):
    predicted = max_rows(competition(phi, b)).tpm
    for label, tpm in inventory.classes.items():
        if predicted.equals(tpm):
            return label
    return None


def hamming_distance(tpm_a, tpm_b):
    return int(sum(not np.array_equal(a, b) for a, b in zip(tpm_a.entries, tpm_b.entries)))


def sigmoid_gain(a_winner, a_intended):
    return 1.0 / (1.0 + math.exp(-2.0 * (a_winner - a_intended))) ** 2


def apply_rotation(b, plan):
    columns = b.columns
    for rotation in plan.rotations:
        columns = rotation.apply(columns)
    return b.with_columns(columns)


def deponent_transform(b, active_axis, passive_axis):
    """Three-quarter turn in the (active, passive) plane"""
    rotation = PlaneRotation(active_axis, passive_axis, DEPONENT_ANGLE)
    return b.with_columns(rotation.apply(b.columns))


def _cell_margins(phi_entries, columns, target_idx):
    act = phi_entries @ columns
    rows = np.arange(act.shape[0])
    intended = act[rows, target_idx]
    rivals = act.copy()
    rivals[rows, target_idx] = -np.inf
    rival_idx = rivals.argmax(axis=1)
    return intended - rivals[rows, rival_idx], rival_idx, act


def _deficit(margins, floor):
    return float(np.maximum(0.0, 2 * floor - margins).sum())


def _fits(margins, floor):
    return bool(np.all(margins > 0) and margins.min() >= floor)


def learn_class_rotation(b_base, phi, target, cfg, rng=None):
    """Search for a rotation sequence that turns b_base into the target class.

    Each pass visits every cell once. For a cell the learner rotates away
    from the free axis where the intended morpheme leads its closest rival
    the most, toward one of the cell's own axes picked at random, through
    base_increment * sigmoid_gain. A rotation that would raise the class
    deficit is halved up to three times and otherwise dropped; a pass that
    keeps nothing is followed by a pass that keeps every proposal.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    if target.entries.shape[1] != b_base.columns.shape[1]:
        raise ShapeMismatch("target and base configuration use different morphemes")
    if target.entries.shape[0] != phi.entries.shape[0]:
        raise ShapeMismatch(f"target has {target.entries.shape[0]} cells, Phi has {phi.entries.shape[0]}")
    phi_entries = phi.entries
    target_idx = np.argmax(target.entries, axis=1)
    cells = phi_entries.shape[0]
    columns = b_base.columns.copy()
    plan = RotationPlan()

    margins, _, _ = _cell_margins(phi_entries, columns, target_idx)
    if _fits(margins, cfg.margin_floor):
        return RotationResult(plan, True, 0, float(margins.min()), b_base)

    corners = [np.flatnonzero(row) for row in phi_entries]
    free_axes = [[k for k in range(columns.shape[0]) if k not in set(c)] for c in corners]
    unconditional = False
    converged = False
    iterations = 0
    for iterations in range(1, cfg.max_iters + 1):
        kept = 0
        for i in range(cells):
            margins, rival_idx, act = _cell_margins(phi_entries, columns, target_idx)
            w, r = target_idx[i], rival_idx[i]
            if not free_axes[i]:
                continue
            away = max(free_axes[i], key=lambda k: columns[k, w] - columns[k, r])
            toward = int(rng.choice(corners[i]))
            theta = cfg.base_increment * sigmoid_gain(act[i, r], act[i, w])

            best = None
            for sign in (1.0, -1.0):
                rotation = PlaneRotation(int(away), toward, sign * theta)
                rotated = rotation.apply(columns)
                cell_margin = _cell_margins(phi_entries[i:i + 1], rotated, target_idx[i:i + 1])[0][0]
                if best is None or cell_margin > best[0]:
                    best = (cell_margin, rotation, rotated)
            _, rotation, rotated = best

            if not unconditional:
                before = _deficit(margins, cfg.margin_floor)
                accepted = None
                for _ in range(4):
                    after = _deficit(_cell_margins(phi_entries, rotated, target_idx)[0], cfg.margin_floor)
                    if after <= before + 1e-12:
                        accepted = (rotation, rotated)
                        break
                    rotation = PlaneRotation(rotation.axis_i, rotation.axis_j, rotation.theta / 2)
                    rotated = rotation.apply(columns)
                if accepted is None:
                    continue
                rotation, rotated = accepted

            columns = rotated
            plan.rotations.append(rotation)
            kept += 1

        margins, _, _ = _cell_margins(phi_entries, columns, target_idx)
        logger.debug("Pass %d: kept %d rotations, min margin %.4f", iterations, kept, margins.min())
        if _fits(margins, cfg.margin_floor):
            converged = True
            break
        unconditional = kept == 0

    return RotationResult(plan, converged, iterations, float(margins.min()), b_base.with_columns(columns))


def _learn_class_runs(args):
    class_index, label, b_base, phi, target, cfg = args
    results = []
    for run in range(cfg.runs):
        rng = np.random.default_rng([cfg.seed, class_index, run])
        result = learn_class_rotation(b_base, phi, target, cfg, rng)
        result.plan.label = label
        results.append(result)
    return results


def learn_all_classes(inventory, phi, b_base, cfg, reference=None, workers=1):
    """Learn every class cfg.runs times; returns (summaries, best plan per class)"""
    base_tpm = max_rows(competition(phi, b_base)).tpm
    jobs = [(n, label, b_base, phi, tpm, cfg) for n, (label, tpm) in enumerate(inventory.classes.items())]
    if workers > 1:
        with Pool(workers) as pool:
            batches = pool.map(_learn_class_runs, jobs)
    else:
        batches = [_learn_class_runs(job) for job in jobs]

    summaries, plans = [], {}
    for (_, label, _, _, tpm, _), results in zip(jobs, batches):
        done = [r for r in results if r.converged]
        mean_iters = float(np.mean([r.iterations for r in done])) if done else float("nan")
        summary = ClassSummary(
            label=label,
            lexemes=inventory.lexeme_counts[label],
            distance=hamming_distance(base_tpm, tpm),
            runs=len(results),
            converged_runs=len(done),
            mean_iterations=mean_iters,
            smallest_margin=float(min(r.min_margin for r in done)) if done else float("nan"),
            mean_margin=float(np.mean([r.min_margin for r in done])) if done else float("nan"),
        )
        expected = (reference or {}).get(label)
        if expected is not None and done and mean_iters > 5 * expected:
            summary.flagged = True
            logger.warning("Class %s needed %.2f iterations on average, over 5x the reference %.2f",
                           label, mean_iters, expected)
        summaries.append(summary)
        if done:
            plans[label] = min(done, key=lambda r: len(r.plan.rotations)).plan
        logger.info("Class %s: %d/%d runs converged", label, len(done), len(results))
    return summaries, plans
