"""Mamdani fuzzy classifier for the EEG features.

Three inputs (arousal, valence, dominance) and one output (drowsiness),
each partitioned into Small/Medium/Large triangular terms.  Operators are
the canonical Mamdani set: AND = min, implication = min, aggregation =
max, defuzzification = centroid over a uniform sample of the output
universe.  The crisp output maps to an integer EEG level 0/1/2 through
the winning output term.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import VigilError

SMALL, MEDIUM, LARGE = "Small", "Medium", "Large"
TERM_ORDER = (SMALL, MEDIUM, LARGE)

INPUT_NAMES = ("arousal", "valence", "dominance")
OUTPUT_NAME = "drowsiness"

# Pre-calibration universes chosen to bracket plausible ratio ranges;
# calibration from data is the recommended path and overrides them.
DEFAULT_UNIVERSES = {
    "arousal": (0.0, 4.0),
    "valence": (-3.0, 3.0),
    "dominance": (0.0, 9.0),
}
OUTPUT_UNIVERSE = (0.0, 1.0)

DEFAULT_SAMPLE_POINTS = 201

EEG_LEVEL_BY_TERM = {SMALL: 0, MEDIUM: 1, LARGE: 2}


class BadCalibration(VigilError):
    """Calibration peaks are not strictly increasing inside the universe."""


@dataclass(frozen=True)
class MembershipFunction:
    """Triangle with feet ``a``/``c`` and peak ``b``.

    ``a == b`` makes a left shoulder (degree 1 from the universe edge up
    to ``b``); ``b == c`` the mirror-image right shoulder.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.a <= self.b <= self.c):
            raise ValueError(f"triangle corners must be ordered, got {self}")

    def degree(self, x: float) -> float:
        if x < self.a:
            return 1.0 if self.a == self.b else 0.0
        if x > self.c:
            return 1.0 if self.b == self.c else 0.0
        if x < self.b:
            return (x - self.a) / (self.b - self.a)
        if x > self.b:
            return (self.c - x) / (self.c - self.b)
        return 1.0

    def degrees(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.float64)
        out = np.zeros_like(xs)
        if self.b > self.a:
            rising = (xs >= self.a) & (xs < self.b)
            out[rising] = (xs[rising] - self.a) / (self.b - self.a)
        else:
            out[xs < self.b] = 1.0
        if self.c > self.b:
            falling = (xs > self.b) & (xs <= self.c)
            out[falling] = (self.c - xs[falling]) / (self.c - self.b)
        else:
            out[xs > self.b] = 1.0
        out[xs == self.b] = 1.0
        return out


def three_terms(
    lo: float,
    hi: float,
    peaks: tuple[float, float, float] | None = None,
) -> dict[str, MembershipFunction]:
    """Small/Medium/Large partition of [lo, hi] peaking at ``peaks``.

    Without peaks the terms are the symmetric 50%-overlap layout peaking
    at lo, midpoint, hi.  Adjacent peaks serve as each triangle's feet and
    the outer terms grow shoulders, so the universe stays fully covered.
    """
    if peaks is None:
        peaks = (lo, (lo + hi) / 2.0, hi)
    p1, p2, p3 = peaks
    if not (lo <= p1 < p2 < p3 <= hi):
        raise BadCalibration(
            f"peaks {peaks} must be strictly increasing within [{lo}, {hi}]"
        )
    return {
        SMALL: MembershipFunction(p1, p1, p2),
        MEDIUM: MembershipFunction(p1, p2, p3),
        LARGE: MembershipFunction(p2, p3, p3),
    }


@dataclass(frozen=True)
class LinguisticVariable:
    name: str
    lo: float
    hi: float
    terms: dict[str, MembershipFunction]

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"universe [{self.lo}, {self.hi}] is empty")
        if tuple(self.terms) != TERM_ORDER:
            raise ValueError(f"terms must be exactly {TERM_ORDER}")
        peaks = [self.terms[t].b for t in TERM_ORDER]
        if not (peaks[0] < peaks[1] < peaks[2]):
            raise BadCalibration(f"term peaks {peaks} must be strictly ordered")
        grid = np.linspace(self.lo, self.hi, 257)
        coverage = np.maximum.reduce([mf.degrees(grid) for mf in self.terms.values()])
        if not (coverage > 0).all():
            raise ValueError(f"terms leave part of {self.name}'s universe uncovered")

    def clamp(self, x: float) -> float:
        return min(max(x, self.lo), self.hi)

    def fuzzify(self, x: float) -> dict[str, float]:
        x = self.clamp(x)
        return {name: mf.degree(x) for name, mf in self.terms.items()}


@dataclass(frozen=True)
class Rule:
    """IF all antecedents hold (AND = min) THEN consequent term."""

    antecedents: tuple[tuple[str, str], ...]
    consequent: tuple[str, str]

    def __post_init__(self):
        if not self.antecedents:
            raise ValueError("a rule needs at least one antecedent")


# The nine-rule base of the classifier, in canonical order.
RULEBASE = (
    Rule((("arousal", MEDIUM),), (OUTPUT_NAME, SMALL)),
    Rule((("arousal", SMALL), ("valence", SMALL), ("dominance", SMALL)), (OUTPUT_NAME, SMALL)),
    Rule((("arousal", LARGE), ("valence", LARGE), ("dominance", LARGE)), (OUTPUT_NAME, LARGE)),
    Rule((("arousal", LARGE), ("valence", SMALL), ("dominance", MEDIUM)), (OUTPUT_NAME, SMALL)),
    Rule((("arousal", LARGE), ("valence", SMALL), ("dominance", LARGE)), (OUTPUT_NAME, SMALL)),
    Rule((("arousal", SMALL), ("valence", MEDIUM), ("dominance", MEDIUM)), (OUTPUT_NAME, SMALL)),
    Rule((("arousal", SMALL), ("valence", LARGE), ("dominance", MEDIUM)), (OUTPUT_NAME, MEDIUM)),
    Rule((("arousal", SMALL), ("valence", MEDIUM), ("dominance", LARGE)), (OUTPUT_NAME, SMALL)),
    Rule((("arousal", SMALL), ("valence", LARGE), ("dominance", LARGE)), (OUTPUT_NAME, MEDIUM)),
)


@dataclass(frozen=True)
class FuzzySystem:
    inputs: tuple[LinguisticVariable, ...]
    output: LinguisticVariable
    rules: tuple[Rule, ...]

    def __post_init__(self):
        known = {v.name for v in self.inputs} | {self.output.name}
        for rule in self.rules:
            for var, term in list(rule.antecedents) + [rule.consequent]:
                if var not in known:
                    raise ValueError(f"rule references unknown variable {var!r}")
                if term not in TERM_ORDER:
                    raise ValueError(f"rule references unknown term {term!r}")

    def input_by_name(self, name: str) -> LinguisticVariable:
        for var in self.inputs:
            if var.name == name:
                return var
        raise KeyError(name)


def build_default_system(calibration: Mapping | None = None) -> FuzzySystem:
    """The nine-rule classifier, optionally with data-calibrated terms.

    ``calibration`` maps input names to objects bearing ``lo``/``hi``/
    ``peaks`` (see :mod:`vigil.clustering`); raises
    :class:`BadCalibration` when peaks violate the strict ordering.
    """
    inputs = []
    for name in INPUT_NAMES:
        if calibration is not None and name in calibration:
            cal = calibration[name]
            lo, hi = float(cal.lo), float(cal.hi)
            peaks = tuple(float(p) for p in cal.peaks)
        else:
            lo, hi = DEFAULT_UNIVERSES[name]
            peaks = None
        inputs.append(LinguisticVariable(name, lo, hi, three_terms(lo, hi, peaks)))
    out_lo, out_hi = OUTPUT_UNIVERSE
    output = LinguisticVariable(OUTPUT_NAME, out_lo, out_hi, three_terms(out_lo, out_hi))
    return FuzzySystem(tuple(inputs), output, RULEBASE)


@dataclass(frozen=True)
class InferenceResult:
    crisp: float
    winning_term: str
    activations: tuple[float, ...]
    no_rule_fired: bool


def aggregate_and_defuzz(
    output: LinguisticVariable,
    clipped: list[tuple[str, float]],
    n_points: int = DEFAULT_SAMPLE_POINTS,
) -> tuple[float, float]:
    """Centroid of the max-aggregated, min-clipped output terms.

    Returns (crisp, total mass); mass 0 means nothing fired.
    """
    ys = np.linspace(output.lo, output.hi, n_points)
    agg = np.zeros(n_points)
    for term, activation in clipped:
        if activation > 0:
            np.maximum(agg, np.minimum(activation, output.terms[term].degrees(ys)), out=agg)
    mass = float(agg.sum())
    if mass == 0.0:
        return output.lo, 0.0
    return float(np.dot(ys, agg) / mass), mass


def infer_mamdani(system: FuzzySystem, x, n_points: int = DEFAULT_SAMPLE_POINTS) -> InferenceResult:
    """Run one Mamdani inference; inputs outside a universe are clamped.

    ``x`` is a mapping of input name to value, or any object with
    arousal/valence/dominance attributes.  When no rule activates, the
    result is flagged and pinned to the bottom of the output universe.
    """
    if isinstance(x, Mapping):
        values = dict(x)
    else:
        values = {name: getattr(x, name) for name in INPUT_NAMES}

    degrees = {
        var.name: var.fuzzify(float(values[var.name])) for var in system.inputs
    }
    activations = tuple(
        min(degrees[var][term] for var, term in rule.antecedents)
        for rule in system.rules
    )
    clipped = [
        (rule.consequent[1], act)
        for rule, act in zip(system.rules, activations)
    ]
    crisp, mass = aggregate_and_defuzz(system.output, clipped, n_points)
    if mass == 0.0:
        return InferenceResult(system.output.lo, SMALL, activations, True)

    # Winning term at the crisp point; ties resolve toward the more
    # severe term.
    winning, best = SMALL, -1.0
    for term in TERM_ORDER:
        d = system.output.terms[term].degree(crisp)
        if d >= best:
            winning, best = term, d
    return InferenceResult(crisp, winning, activations, False)


def classify_eeg_level(winning_term: str) -> int:
    """Map the winning drowsiness term to the integer EEG level."""
    try:
        return EEG_LEVEL_BY_TERM[winning_term]
    except KeyError:
        raise ValueError(f"unknown term {winning_term!r}") from None


def _variable_to_obj(var: LinguisticVariable) -> dict:
    return {
        "name": var.name,
        "universe": [var.lo, var.hi],
        "terms": {
            name: [mf.a, mf.b, mf.c] for name, mf in var.terms.items()
        },
    }


def _variable_from_obj(obj: dict) -> LinguisticVariable:
    lo, hi = (float(v) for v in obj["universe"])
    terms = {
        name: MembershipFunction(*(float(v) for v in obj["terms"][name]))
        for name in TERM_ORDER
    }
    return LinguisticVariable(str(obj["name"]), lo, hi, terms)


def system_to_json(system: FuzzySystem) -> str:
    """Canonical JSON export of universes, terms, and rules."""
    obj = {
        "inputs": [_variable_to_obj(v) for v in system.inputs],
        "output": _variable_to_obj(system.output),
        "rules": [
            {
                "if": [[var, term] for var, term in rule.antecedents],
                "then": list(rule.consequent),
            }
            for rule in system.rules
        ],
    }
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def system_from_json(text: str | bytes) -> FuzzySystem:
    obj = json.loads(text)
    rules = tuple(
        Rule(
            tuple((str(v), str(t)) for v, t in entry["if"]),
            (str(entry["then"][0]), str(entry["then"][1])),
        )
        for entry in obj["rules"]
    )
    return FuzzySystem(
        tuple(_variable_from_obj(v) for v in obj["inputs"]),
        _variable_from_obj(obj["output"]),
        rules,
    )
