"""Servers that duplicate their requests.

The same program is accepted by the two-zone copy discipline (dill) and
rejected by the soft one (dsll).  Under dill the number of steps doubles
with every server added to the chain.
"""

from softsession import calculus as pc
from softsession.elaborator import Signature, elaborate
from softsession.syntax import parse_process
from softsession.types import ONE, Bang


def system(n):
    news = "".join(f"new x{i}. " for i in range(n + 1))
    servers = [f"!x{i}(y{i}). x{i + 1}<z{i}>. x{i + 1}<w{i}>" for i in reversed(range(n))]
    return parse_process(news + "(" + " | ".join([f"!x{n}(s)", *servers, "x0<y>"]) + ")")


dupser = parse_process("!x0(y). x1<z>. x1<w>")
print("dupser_0 =", dupser)
for mode, zone in (("dill", "usesLinear"), ("dsll", "usesAux")):
    sig = Signature("dupser0", ("x0", Bang(ONE)), **{zone: {"x1": Bang(ONE) if mode == "dill" else ONE}}, mode=mode)
    out = elaborate(dupser, sig)
    print(f"  {mode}:", out if isinstance(out, list) else "typed")

print()
print(f"{'n':>2} {'|P|':>5} {'steps':>6} {'max size':>9}")
for n in range(1, 9):
    p = system(n)
    t = pc.reduce_trace(p, 10**6)
    print(f"{n:>2} {pc.size(p):>5} {t.steps:>6} {max(t.sizes):>9}")
