"""Two bounds that do not hold as stated.

1. W_n(d) <= |P| * n^(B+1) at n = D(d) fails for a server reached k >= 3
   times through a multiplexor cut: the weight is 3k, the bound 2k + 2.
2. The box depth of a normal process can be smaller than the depth read
   off its interface: a client of a !(1 + 1) channel contains no box.
"""

from pathlib import Path

from softsession import calculus as pc
from softsession.analysis import depth_from_interface
from softsession.derivation import check_derivation, erase
from softsession.measures import duplicability, weight_n
from softsession.program import load, resolve

src = load(Path(__file__).resolve().parent.parent / "corpus" / "servers.sst")

d = resolve(src, "thrice").derivation
p = erase(d)
n, s, b = duplicability(d), pc.size(p), pc.box_depth(p)
print(p)
print(f"  D = {n}, |P| = {s}, B = {b}: W_D = {weight_n(d, n)} > {s * n ** (b + 1)}")
print(f"  with n = D + 1: W = {weight_n(d, n + 1)} <= {s * (n + 1) ** (b + 1)}")
print()
d = resolve(src, "once").derivation
j = check_derivation(d)
print(j, "   ", erase(d))
print(f"  interface depth {depth_from_interface(j)}, box depth {pc.box_depth(erase(d))}")
