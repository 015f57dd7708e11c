"""
Command pipelines shared by the CLI and the HTTP API.

Each cmd_* function takes CommandOptions and returns a RunReport whose
exit_code follows the CLI contract: 0 success, 1 input error, 2 not
converged, 3 tie in a gold evaluation.
"""
import logging
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import pandas as pd

import paradigm_io
from composition import (
    AngleLearnConfig,
    AngleModel,
    CompositionInventory,
    angle_of_sum,
    learn_angles,
    select_affix_for_stem,
    select_pair,
)
from delta_trainer import TrainConfig, train
from environment_config import resolve_seed
from errors import GeomorphError
from exponence import competition, count_features, gold_margins, row_margins, select, smart_init
from reports import EXIT_NOT_CONVERGED, EXIT_TIE, RunReport, labeled_table
from rotation_classes import (
    RotationLearnConfig,
    base_configuration,
    class_of_base,
    deponent_transform,
    learn_all_classes,
    weighted_counts,
)
from trace_logger import log_iteration, write_trace

logger = logging.getLogger(__name__)

REFERENCE_SUFFIX = ".reference.tsv"

# Options accepted from JSON bodies; float options also take integers
OPTION_TYPES = {
    "eta": (int, float),
    "error_driven": bool,
    "max_iters": int,
    "seed": int,
    "stepsize": (int, float),
    "margin": (int, float),
    "increment": (int, float),
    "margin_floor": (int, float),
    "runs": int,
    "min_lexemes": int,
    "learn": bool,
}


@dataclass
class CommandOptions:
    fixture: str
    eta: float = 0.1
    error_driven: bool = True
    max_iters: int | None = None
    seed: int | None = None
    stepsize: float = 0.01
    margin: float = 0.05
    increment: float = 0.1
    margin_floor: float = 0.02
    runs: int = 1
    min_lexemes: int = 3
    learn: bool = False
    workers: int = 1
    trace: str | None = None

    @classmethod
    def from_mapping(cls, fixture, data):
        """Options from a JSON body; unknown keys and wrong types are rejected"""
        unknown = set(data) - set(OPTION_TYPES)
        if unknown:
            raise GeomorphError(f"unknown option(s): {', '.join(sorted(unknown))}")
        for key, value in data.items():
            kind = OPTION_TYPES[key]
            if value is None and key in ("max_iters", "seed"):
                continue
            ok = isinstance(value, bool) if kind is bool else (
                isinstance(value, kind) and not isinstance(value, bool))
            if not ok:
                name = "a number" if isinstance(kind, tuple) else kind.__name__
                raise GeomorphError(f"option '{key}' must be {name}, got {value!r}")
        return cls(fixture=fixture, **data)

    def echo(self, **extra):
        data = {k: v for k, v in asdict(self).items() if k not in ("trace", "workers")}
        data.update(extra)
        return data


def _iters(opts, default):
    return default if opts.max_iters is None else opts.max_iters


def _b_table(pf, b):
    return labeled_table(pf.fs.value_names, b.morphemes, b.columns)


def _competition_table(c):
    return labeled_table([cell.label for cell in c.row_labels], c.morphemes, c.entries)


def _selection_fields(report, phi, b, gold=None):
    """Competition table, winners with margins, mismatches and ties"""
    c, selection, evaluation = select(phi, b, gold)
    report.tables["competition"] = _competition_table(c)
    report.winners = [{"cell": cell.label, "morpheme": w}
                      for cell, w in zip(c.row_labels, selection.tpm.winners())]
    report.margins = row_margins(c).tolist()
    report.ties = selection.ties
    if evaluation is not None:
        for winner, margin in zip(report.winners, gold_margins(c, gold)):
            winner["gold_margin"] = float(margin)
        report.mismatches = evaluation.mismatches
        if evaluation.ties:
            report.status = "tie"
            report.exit_code = EXIT_TIE
    return c


def _exponents(pf, opts):
    """Smart-init counts and B for a single paradigm or a class inventory"""
    if pf.classes is not None:
        counts = weighted_counts(pf.classes, pf.phi, opts.min_lexemes)
        return counts, base_configuration(pf.classes, pf.phi, opts.min_lexemes)
    if pf.gold is None:
        raise GeomorphError(f"{pf.source} has no CELL lines to initialize from")
    return count_features(pf.phi, pf.gold), smart_init(pf.phi, pf.gold)


def cmd_init(opts):
    pf = paradigm_io.load(opts.fixture)
    counts, b = _exponents(pf, opts)
    report = RunReport("init", pf.name, opts.echo())
    report.tables["counts"] = labeled_table(pf.fs.value_names, b.morphemes, counts)
    report.tables["B"] = _b_table(pf, b)
    return report


def cmd_select(opts):
    pf = paradigm_io.load(opts.fixture)
    _, b = _exponents(pf, opts)
    report = RunReport("select", pf.name, opts.echo())
    report.tables["B"] = _b_table(pf, b)
    _selection_fields(report, pf.phi, b, pf.gold)
    if pf.classes is not None:
        matched = class_of_base(b, pf.phi, pf.classes)
        report.records = [{"base_class": matched}]
    return report


def cmd_train(opts):
    pf = paradigm_io.load(opts.fixture)
    if pf.gold is None:
        raise GeomorphError(f"{pf.source} has no single paradigm to train on")
    cfg = TrainConfig(eta=opts.eta, error_driven=opts.error_driven, max_iters=_iters(opts, 100))
    b0 = smart_init(pf.phi, pf.gold)
    b, trace = train(b0, pf.phi, pf.gold, cfg)
    for record in trace.records:
        log_iteration(record, pf.name)
    if opts.trace:
        write_trace(trace.records, opts.trace)

    report = RunReport("train", pf.name, opts.echo(max_iters=cfg.max_iters))
    report.tables["B_initial"] = _b_table(pf, b0)
    report.tables["B"] = _b_table(pf, b)
    _selection_fields(report, pf.phi, b, pf.gold)
    report.trace = {
        "converged": trace.converged,
        "iterations": trace.iterations,
        "records": [r.to_dict() for r in trace.records],
    }
    if not trace.converged:
        report.status = "not_converged"
        report.exit_code = EXIT_NOT_CONVERGED
    return report


def _plane_axis(pf, cell):
    hits = [v for v in cell.values if v in pf.plane]
    if len(hits) != 1:
        raise GeomorphError(f"form cell '{cell.label}' does not name exactly one plane axis")
    return hits[0]


def cmd_compose(opts):
    pf = paradigm_io.load(opts.fixture)
    if pf.plane is None:
        raise GeomorphError(f"{pf.source} declares no PLANE to compose in")
    gold = {(stem, _plane_axis(pf, cell)): affix for stem, cell, affix in pf.forms}
    shape = AngleModel({}, pf.plane, list(pf.stems), list(pf.affixes))
    angles = {**pf.stems, **pf.affixes}
    seed = resolve_seed(opts.seed)
    report = RunReport("compose", pf.name, opts.echo(seed=seed, plane=list(pf.plane),
                                                     stems=list(pf.stems), affixes=list(pf.affixes)))

    if opts.learn or any(theta is None for theta in angles.values()):
        cfg = AngleLearnConfig(stepsize=opts.stepsize, margin=opts.margin,
                               max_iters=_iters(opts, 500), seed=seed)
        result = learn_angles(shape, gold, cfg)
        model = result.model
        report.trace = {"converged": result.converged, "iterations": result.iterations,
                        "adjustments": result.adjustments, "restarts": result.restarts}
        if not result.converged:
            report.status = "not_converged"
            report.exit_code = EXIT_NOT_CONVERGED
    else:
        model = AngleModel(dict(angles), pf.plane, list(pf.stems), list(pf.affixes))

    labels = model.stems + model.affixes
    report.tables["angles"] = labeled_table(
        labels, ["radians", "degrees", "x", "y"],
        [[theta, math.degrees(theta), math.cos(theta), math.sin(theta)]
         for theta in (model.angles[label] for label in labels)],
    )

    inventory = CompositionInventory.from_angle_model(
        model, pf.fs.num_values, pf.fs.index(pf.plane[0]), pf.fs.index(pf.plane[1]))
    for stem, cell, affix in pf.forms:
        axis = _plane_axis(pf, cell)
        chosen = select_affix_for_stem(model, stem, axis)
        target = np.zeros(pf.fs.num_values)
        target[pf.fs.index(axis)] = 2.0
        by_distance = select_pair(inventory, target, stems=[stem]).affix
        angle, length = angle_of_sum(model.angles[stem], model.angles[chosen])
        report.records.append({
            "stem": stem,
            "cell": cell.label,
            "gold": affix,
            "selected": chosen,
            "by_distance": by_distance,
            "sum_radians": angle,
            "sum_degrees": math.degrees(angle),
            "magnitude": length,
            "correct": chosen == affix,
        })
        if chosen != affix:
            report.mismatches.append({"cell": f"{stem} {cell.label}", "expected": affix, "predicted": chosen})
    return report


def load_reference(pf):
    """Reference iteration averages stored next to a class fixture, if any"""
    path = Path(pf.source).with_name(pf.name + REFERENCE_SUFFIX)
    if not path.is_file():
        return None
    frame = pd.read_csv(path, sep="\t", dtype={"class": str})
    return dict(zip(frame["class"], frame["iterations"].astype(float)))


def _voice_axes(pf):
    for name, vals in pf.features:
        if "active" in vals and "passive" in vals:
            return pf.fs.index("active"), pf.fs.index("passive")
    return None


def cmd_rotate(opts):
    pf = paradigm_io.load(opts.fixture)
    seed = resolve_seed(opts.seed)
    report = RunReport("rotate", pf.name, opts.echo(seed=seed))

    if pf.classes is not None:
        b = base_configuration(pf.classes, pf.phi, opts.min_lexemes)
        cfg = RotationLearnConfig(base_increment=opts.increment, max_iters=_iters(opts, 500),
                                  runs=opts.runs, seed=seed, margin_floor=opts.margin_floor)
        summaries, plans = learn_all_classes(pf.classes, pf.phi, b, cfg,
                                             reference=load_reference(pf), workers=opts.workers)
        report.tables["B"] = _b_table(pf, b)
        report.tables["competition"] = _competition_table(competition(pf.phi, b))
        report.records = [s.to_dict() for s in summaries]
        report.trace = {
            "base_class": class_of_base(b, pf.phi, pf.classes),
            "plans": {label: plan.to_dict() for label, plan in plans.items()},
        }
        if any(s.converged_runs == 0 for s in summaries):
            report.status = "not_converged"
            report.exit_code = EXIT_NOT_CONVERGED
        return report

    axes = _voice_axes(pf)
    if axes is None or pf.gold is None:
        raise GeomorphError(f"{pf.source} has neither CLASS blocks nor an active/passive voice feature")
    b = smart_init(pf.phi, pf.gold)
    rotated = deponent_transform(b, *axes)
    report.tables["B"] = _b_table(pf, b)
    report.tables["B_rotated"] = _b_table(pf, rotated)
    c = _selection_fields(report, pf.phi, rotated)
    active = pf.fs.value_names[axes[0]]
    report.records = [w for w, cell in zip(report.winners, c.row_labels) if active in cell.values]
    return report


def cmd_report(path):
    """Load a saved JSON report for re-rendering"""
    return RunReport.from_json(Path(path).read_text(encoding="utf-8"))


COMMANDS = {
    "init": cmd_init,
    "select": cmd_select,
    "train": cmd_train,
    "compose": cmd_compose,
    "rotate": cmd_rotate,
}
