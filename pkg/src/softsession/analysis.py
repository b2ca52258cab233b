"""Executable polynomial bounds.

For a checked derivation ``d`` with ``s = max(1, |erase(d)|)`` and box depth
``b``, every reduction of the erasure takes at most ``weight(d)`` steps
(each step is a comp rewrite, which strictly lowers the weight), and a
process reached after ``k`` steps has size at most ``k*s + s``. The
interface-level envelope ``s**(b+2)`` composes the duplicability and weight
bounds and is reported next to the exact one.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import calculus as pc
from .derivation import erase
from .dynamics import rewrite_to_normal
from .measures import MeasureReport, measure, weight
from .types import Judgment, context_depth, type_depth

__all__ = [
    "AnalysisReport", "compute_bounds", "polynomial_bound", "analyze",
    "depth_from_interface",
]


@dataclass(frozen=True)
class AnalysisReport:
    measures: MeasureReport
    stepBound: int
    sizeBound: int
    polynomialBound: int
    observedSteps: int
    maxObservedSize: int
    withinBounds: bool | None
    mode: str
    budgetExhausted: bool

    def as_dict(self):
        return {
            "measures": self.measures.as_dict(),
            "stepBound": self.stepBound,
            "sizeBound": self.sizeBound,
            "polynomialBound": self.polynomialBound,
            "observedSteps": self.observedSteps,
            "maxObservedSize": self.maxObservedSize,
            "withinBounds": self.withinBounds,
            "mode": self.mode,
            "budgetExhausted": self.budgetExhausted,
        }


def _size(d):
    return max(1, pc.size(erase(d)))


def compute_bounds(d) -> tuple:
    """``(stepBound, sizeBound)`` for the reductions of ``erase(d)``."""
    steps = weight(d)
    s = _size(d)
    return steps, steps * s + s


def polynomial_bound(d) -> int:
    return _size(d) ** (pc.box_depth(erase(d)) + 2)


def depth_from_interface(j: Judgment) -> int:
    return max(context_depth(j.contexts), type_depth(j.type))


def analyze(d, budget: int, mode: str = "dsll") -> AnalysisReport:
    """Reduce ``d`` (at most ``budget`` steps) and compare with its bounds.

    In ``dill`` mode the erasure is reduced directly and no verdict is given:
    the bounds are computed as if the soft discipline applied.
    """
    report = measure(d, mode)
    steps_bound, size_bound = compute_bounds(d)
    p = erase(d)
    s0 = pc.size(p)
    if mode == "dsll":
        r = rewrite_to_normal(d, budget)
        observed, sizes, exhausted = r.compCount, r.sizes, r.exhausted
    else:
        t = pc.reduce_trace(p, budget)
        observed, sizes, exhausted = t.steps, t.sizes, t.exhausted
    biggest = max([s0, *sizes])
    verdict = None
    if mode == "dsll":
        verdict = observed <= steps_bound and biggest <= size_bound
    return AnalysisReport(
        report, steps_bound, size_bound, polynomial_bound(d), observed, biggest,
        verdict, mode, exhausted,
    )

