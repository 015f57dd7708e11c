"""
Stem + affix composition.

In general a form is the (stem, affix) pair whose vector sum lies closest to
the target corner. In a two-dimensional feature plane every morpheme is a
unit vector given by one angle, the sum of two of them points along the
bisector, and selection compares angles to the target axis.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from errors import DegenerateSum, EmptyInventory, GeomorphError, UnknownStem

logger = logging.getLogger(__name__)

# Axis angles inside a plane declared as (x-value, y-value)
X_AXIS = 0.0
Y_AXIS = math.pi / 2


def wrap_angle(theta):
    """Map an angle into (-pi, pi]"""
    wrapped = math.remainder(theta, 2 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


@dataclass
class AngleModel:
    angles: dict  # label -> radians
    plane: tuple  # (x value, y value)
    stems: list = field(default_factory=list)
    affixes: list = field(default_factory=list)

    def vector(self, label):
        theta = self.angles[label]
        return np.array([math.cos(theta), math.sin(theta)])

    def axis_angle(self, value):
        if value == self.plane[0]:
            return X_AXIS
        if value == self.plane[1]:
            return Y_AXIS
        raise GeomorphError(f"'{value}' is not an axis of the plane {self.plane[0]}/{self.plane[1]}")

    def copy(self):
        return AngleModel(dict(self.angles), self.plane, list(self.stems), list(self.affixes))


@dataclass
class CompositionInventory:
    stems: dict  # label -> unit vector
    affixes: dict  # label -> unit vector
    gold_forms: dict = field(default_factory=dict)  # (stem, cell) -> affix

    @classmethod
    def from_angle_model(cls, model, num_values, x_index, y_index, gold_forms=None):
        def embed(theta):
            vec = np.zeros(num_values)
            vec[x_index] = math.cos(theta)
            vec[y_index] = math.sin(theta)
            return vec

        return cls(
            {s: embed(model.angles[s]) for s in model.stems},
            {a: embed(model.angles[a]) for a in model.affixes},
            dict(gold_forms or {}),
        )


@dataclass(frozen=True)
class AngleLearnConfig:
    stepsize: float = 0.01
    margin: float = 0.05
    max_iters: int = 500
    seed: int = 0
    restart_after: int = 250  # adjusting iterations before fresh starting angles are drawn

    def __post_init__(self):
        if not self.stepsize > 0:
            raise GeomorphError(f"stepsize must be positive, got {self.stepsize}")
        if not self.margin >= 0:
            raise GeomorphError(f"margin must be non-negative, got {self.margin}")
        if self.max_iters < 1:
            raise GeomorphError(f"max_iters must be at least 1, got {self.max_iters}")
        if self.restart_after < 1:
            raise GeomorphError(f"restart_after must be at least 1, got {self.restart_after}")


@dataclass
class AngleLearnResult:
    model: AngleModel
    converged: bool
    iterations: int
    adjustments: int
    restarts: int = 0


@dataclass
class PairChoice:
    stem: str | None
    affix: str | None
    distance: float
    ties: list = field(default_factory=list)


def select_pair(inv, corner, stems=None):
    """Pair minimizing the Euclidean distance of stem + affix to the corner"""
    stem_labels = list(stems) if stems is not None else list(inv.stems)
    if not stem_labels or not inv.affixes:
        raise EmptyInventory("both stems and affixes are needed to select a pair")
    for label in stem_labels:
        if label not in inv.stems:
            raise UnknownStem(f"unknown stem '{label}'")
    corner = np.asarray(corner, dtype=float)
    scored = []
    for s in stem_labels:
        for a, vec in inv.affixes.items():
            scored.append((float(np.linalg.norm(corner - (inv.stems[s] + vec))), s, a))
    best = min(d for d, _, _ in scored)
    top = [(s, a) for d, s, a in scored if d == best]
    if len(top) > 1:
        logger.warning("Tie between pairs %s", top)
        return PairChoice(None, None, best, top)
    return PairChoice(top[0][0], top[0][1], best)


def angle_of_sum(a, b):
    """Angle and length of the sum of two unit vectors at angles a and b"""
    diff = wrap_angle(a - b)
    if abs(diff) >= math.pi - 1e-15:
        raise DegenerateSum(f"unit vectors at {a:.6f} and {b:.6f} cancel out")
    angle = wrap_angle(b + diff / 2)
    return angle, 2 * math.cos(diff / 2)


def axis_distance(model, stem, affix, target):
    angle, _ = angle_of_sum(model.angles[stem], model.angles[affix])
    return abs(wrap_angle(angle - target))


def select_affix_for_stem(model, stem, target_value):
    """Affix whose sum with the stem points nearest the target axis"""
    if stem not in model.stems:
        raise UnknownStem(f"unknown stem '{stem}'")
    if not model.affixes:
        raise EmptyInventory("no affixes to choose from")
    target = model.axis_angle(target_value)
    return min(model.affixes, key=lambda affix: axis_distance(model, stem, affix, target))


def _toward(current, target):
    """+1 or -1: the turning direction that brings current nearer target"""
    return 1.0 if wrap_angle(target - current) >= 0 else -1.0


# Learned angles stay inside the open half-plane around the x axis, where the
# y axis always selects the affix with the largest angle.
HALF_PLANE_LIMIT = math.pi / 2 - 0.01


def _nudge(theta, step):
    return min(HALF_PLANE_LIMIT, max(-HALF_PLANE_LIMIT, theta + step))


def _draw_angles(rng, labels):
    starts = rng.uniform(-math.pi / 2, math.pi / 2, size=len(labels))
    return dict(zip(labels, map(float, starts)))


def learn_angles(model_shape, gold, cfg):
    """Place stems and affixes on the unit circle so every gold form wins.

    model_shape supplies the plane and the stem/affix inventories; gold maps
    (stem, axis value) to the required affix. Angles start uniformly in
    (-pi/2, pi/2). Each sweep visits the stems in a fresh random order; a run
    still adjusting after cfg.restart_after sweeps starts over from newly
    drawn angles, within the cfg.max_iters budget.
    """
    rng = np.random.default_rng(cfg.seed)
    labels = list(model_shape.stems) + list(model_shape.affixes)
    model = AngleModel(_draw_angles(rng, labels), model_shape.plane,
                       list(model_shape.stems), list(model_shape.affixes))
    for (stem, _), affix in gold.items():
        if stem not in model.stems:
            raise UnknownStem(f"unknown stem '{stem}'")
        if affix not in model.affixes:
            raise EmptyInventory(f"gold affix '{affix}' is not in the inventory")

    axes = [model.plane[1], model.plane[0]]  # singular-like y target first, then x
    iterations = 0
    adjustments = 0
    restarts = 0
    since_start = 0
    converged = False
    for _ in range(cfg.max_iters):
        if since_start == cfg.restart_after:
            model.angles = _draw_angles(rng, labels)
            restarts += 1
            since_start = 0
            logger.debug("Angle learning restarted after %d iterations", iterations)
        adjusted = False
        for k in rng.permutation(len(model.stems)):
            stem = model.stems[k]
            for axis in axes:
                want = gold.get((stem, axis))
                if want is None:
                    continue
                target = model.axis_angle(axis)
                for rival in model.affixes:
                    if rival == want:
                        continue
                    d_gold = axis_distance(model, stem, want, target)
                    d_rival = axis_distance(model, stem, rival, target)
                    if d_rival > d_gold + cfg.margin:
                        continue
                    gold_sum, _ = angle_of_sum(model.angles[stem], model.angles[want])
                    rival_sum, _ = angle_of_sum(model.angles[stem], model.angles[rival])
                    toward = _toward(gold_sum, target)
                    away = -_toward(rival_sum, target)
                    model.angles[stem] = _nudge(model.angles[stem], toward * cfg.stepsize)
                    model.angles[want] = _nudge(model.angles[want], toward * cfg.stepsize)
                    model.angles[rival] = _nudge(model.angles[rival], away * cfg.stepsize)
                    adjusted = True
                    adjustments += 1
        if not adjusted:
            converged = True
            break
        iterations += 1
        since_start += 1
        logger.debug("Angle iteration %d: %d adjustments so far", iterations, adjustments)

    logger.info("Angle learning %s after %d adjusting iterations (%d restarts)",
                "converged" if converged else "did not converge", iterations, restarts)
    return AngleLearnResult(model, converged, iterations, adjustments, restarts)


def model_reproduces(model, gold):
    return all(select_affix_for_stem(model, stem, axis) == affix for (stem, axis), affix in gold.items())


def nearest_affix_to_axis(model, value):
    """Affix whose own angle is nearest the given axis"""
    target = model.axis_angle(value)
    return min(model.affixes, key=lambda a: abs(wrap_angle(model.angles[a] - target)))
