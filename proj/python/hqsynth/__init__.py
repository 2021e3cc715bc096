"""Quantitative reactive synthesis for LTL with quality operators.

Specs and transducers are plain dicts in the same JSON shapes the command-line
tool reads and writes. Values come back as exact ``Fraction`` objects.
"""

import json
from fractions import Fraction

from . import _hqsynth
from ._hqsynth import AssumptionHasZeroProbability, ParseError, ResourceLimit

__all__ = [
    "AssumptionHasZeroProbability",
    "ParseError",
    "ResourceLimit",
    "evaluate",
    "eval_lasso",
    "format_formula",
    "prob_of_assumption",
    "set_state_ceiling",
    "simulate",
    "synthesize",
    "values",
]


def _spec_text(spec, **overrides):
    doc = dict(spec)
    for key, value in overrides.items():
        if value is not None:
            doc[key] = str(value) if isinstance(value, Fraction) else value
    return json.dumps(doc)


def synthesize(spec, threshold=None, assumption=None):
    """Synthesize a transducer maximizing the expected value.

    Returns a dict with ``realizable``, ``mode``, ``value``, ``certified_value``,
    the optional certificates, size statistics and the ``transducer``.
    """
    out = json.loads(_hqsynth.synthesize(_spec_text(spec, threshold=threshold, assumption=assumption)))
    for key in ("value", "certified_value", "almost_sure_floor", "assumption_probability"):
        if key in out:
            out[key] = Fraction(out[key])
    out["values"] = [Fraction(v) for v in out["values"]]
    return out


def evaluate(spec, transducer, mode="expected"):
    """Exact value of a transducer: expected, almost-sure, worst-case,
    conditional or conditional-almost-sure."""
    return Fraction(_hqsynth.evaluate(json.dumps(spec), json.dumps(transducer), mode))


def simulate(spec, transducer, samples=10000, seed=1):
    """Monte-Carlo estimate and the per-run values."""
    estimate, runs = _hqsynth.simulate(json.dumps(spec), json.dumps(transducer), samples, seed)
    return Fraction(estimate), [Fraction(v) for v in runs]


def prob_of_assumption(formula, inputs, distribution=None, outputs=()):
    """Probability that a random input word satisfies a Boolean formula."""
    dist = json.dumps(distribution) if distribution is not None else ""
    return Fraction(_hqsynth.prob_of_assumption(formula, list(inputs), dist, list(outputs)))


def values(formula, atoms):
    """Possible satisfaction values, ascending."""
    return [Fraction(v) for v in _hqsynth.values(formula, list(atoms))]


def eval_lasso(formula, atoms, prefix, period):
    """Value of the word prefix · period^ω; letters are bitmasks over atoms."""
    return Fraction(_hqsynth.eval_lasso(formula, list(atoms), list(prefix), list(period)))


def format_formula(formula, atoms):
    return _hqsynth.format_formula(formula, list(atoms))


def set_state_ceiling(states):
    _hqsynth.set_state_ceiling(states)
