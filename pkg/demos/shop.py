"""A shop talking to a bank, followed step by step on the typing derivation.

Every process reduction is matched by a rewrite of the derivation; the
weight of the derivation drops at each computational step.
"""

from pathlib import Path

from softsession import calculus as pc
from softsession.analysis import analyze
from softsession.derivation import barendregt, check_derivation, erase
from softsession.dynamics import subject_reduce
from softsession.measures import weight
from softsession.program import load, resolve

src = load(Path(__file__).resolve().parent.parent / "corpus" / "shop.sst")
d = barendregt(resolve(src, "purchase").derivation)
print("judgment:", check_derivation(d))
print("process: ", erase(d))
print()
k = 0
while rs := pc.find_redexes(erase(d)):
    d, path = subject_reduce(d, rs[0])
    k += 1
    rules = " ".join(f"{s.relation}:{s.rule}" for s in path)
    print(f"step {k}: {rs[0].kind} on {rs[0].channel:<6} weight {weight(d):>3}   {rules}")
print()
rep = analyze(resolve(src, "purchase").derivation, 1000)
print(f"observed {rep.observedSteps} steps, bound {rep.stepBound}, within bounds: {rep.withinBounds}")
