"""
Error-driven Delta Rule training of B.

Each visited row applies mu_j += eta * (t_ij - a_ij) * Phi_i and renormalizes
the columns it modified before the next row.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from errors import GeomorphError, ZeroColumn
from exponence import competition, gold_margins, max_rows, row_margins

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    eta: float = 0.1
    error_driven: bool = True
    max_iters: int = 100
    tolerance: float = 0.0

    def __post_init__(self):
        if not self.eta >= 0:
            raise GeomorphError(f"eta must be non-negative, got {self.eta}")
        if self.max_iters < 1:
            raise GeomorphError(f"max_iters must be at least 1, got {self.max_iters}")


@dataclass
class TrainRecord:
    iteration: int
    mismatches: int
    min_margin: float
    updated: list
    loss: float

    def to_dict(self):
        return {
            "iteration": self.iteration,
            "mismatches": self.mismatches,
            "min_margin": self.min_margin,
            "updated": list(self.updated),
            "loss": self.loss,
        }


@dataclass
class TrainTrace:
    records: list = field(default_factory=list)
    converged: bool = False

    @property
    def iterations(self):
        return max(len(self.records) - 1, 0)

    @property
    def final(self):
        return self.records[-1] if self.records else None


def _wrong_rows(phi, b, gold):
    predicted = max_rows(competition(phi, b), tie_level=logging.DEBUG).tpm
    return [i for i in range(gold.entries.shape[0])
            if not np.array_equal(predicted.entries[i], gold.entries[i])]


def delta_update(columns, x, t, eta):
    """Summed Delta Rule change for corners x with targets t, and the loss

    The change is -eta times the gradient of 1/2 sum (t - x B)^2 with respect to B.
    """
    err = t - x @ columns
    return eta * (x.T @ err), 0.5 * float(np.sum(err ** 2))


def delta_step(b, phi, gold, cfg):
    """One Delta Rule step; returns (new B, updated morpheme labels, loss)

    Rows are chosen when the step starts and then applied one at a time in
    Phi order, each change renormalizing the columns it modified before the
    next row is seen. The loss sums each visited row's error before its update.
    """
    rows = _wrong_rows(phi, b, gold) if cfg.error_driven else list(range(gold.entries.shape[0]))
    if not rows or cfg.eta == 0:
        return b, [], 0.0

    columns = b.columns.copy()
    touched = set()
    loss = 0.0
    for i in rows:
        delta, row_loss = delta_update(columns, phi.entries[i:i + 1], gold.entries[i:i + 1], cfg.eta)
        loss += row_loss
        changed = [j for j in range(columns.shape[1]) if np.any(delta[:, j] != 0)]
        columns = columns + delta
        for j in changed:
            norm = np.linalg.norm(columns[:, j])
            if norm == 0.0:
                raise ZeroColumn(f"update drove morpheme '{b.morphemes[j]}' to the zero vector")
            columns[:, j] = columns[:, j] / norm
        touched.update(changed)
    return b.with_columns(columns), [b.morphemes[j] for j in sorted(touched)], loss


def _record(iteration, phi, b, gold, updated, loss):
    c = competition(phi, b)
    selection = max_rows(c, tie_level=logging.DEBUG)
    wrong = int(sum(not np.array_equal(p, g) for p, g in zip(selection.tpm.entries, gold.entries)))
    margins = gold_margins(c, gold) if wrong else row_margins(c)
    return TrainRecord(iteration, wrong, float(margins.min()), updated, loss)


def train(b0, phi, gold, cfg):
    b = b0
    trace = TrainTrace()
    trace.records.append(_record(0, phi, b, gold, [], 0.0))
    if trace.final.mismatches == 0:
        trace.converged = True
        logger.info("Gold paradigm already reproduced; no training needed")
        return b, trace

    for iteration in range(1, cfg.max_iters + 1):
        b, updated, loss = delta_step(b, phi, gold, cfg)
        record = _record(iteration, phi, b, gold, updated, loss)
        trace.records.append(record)
        logger.debug("Iteration %d: %d wrong, min margin %.4f", iteration, record.mismatches, record.min_margin)
        if record.mismatches == 0:
            trace.converged = True
            break

    logger.info(
        "Delta training %s after %d iterations (min margin %.4f)",
        "converged" if trace.converged else "did not converge",
        trace.iterations, trace.final.min_margin,
    )
    return b, trace
