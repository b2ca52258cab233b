"""Soft session types: a checker and bound analyzer for a soft-linear-logic
session type system over the pi calculus.

The modules follow the layers of the system:

* ``calculus``: processes, structural congruence, reduction
* ``types``: session types and typing contexts
* ``derivation``: typing derivations and the checking kernel
* ``measures``: virtual occurrences, duplicability, weight
* ``dynamics``: derivation rewriting and subject reduction
* ``elaborator``: derivations from processes plus signatures
* ``frontend``: ``.sst`` files, bound analysis, command line
"""

from .calculus import alpha_eq, canonical_form, congruent, find_redexes, reduce_step, reduce_trace, size, box_depth
from .derivation import CheckError, check_derivation, erase
from .elaborator import Diagnostic, Signature, elaborate, elaborate_composition
from .measures import duplicability, measure, virtual_occurrences, weight, weight_n
from .types import Judgment, ContextTriple

__version__ = "0.1.0"
