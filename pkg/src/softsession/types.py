"""Session types and the three-zone typing contexts.

A judgment ``G; D; T |- P :: x : A`` has an auxiliary zone ``G`` (split
multiplicatively), a multiplexor zone ``D`` (shared additively) and a linear
zone ``T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

__all__ = [
    "One", "Tensor", "Lolli", "Plus", "With", "Bang", "SessionType",
    "ONE", "ContextTriple", "Judgment", "ContextError",
    "type_depth", "context_depth", "type_equal",
]


@dataclass(frozen=True, slots=True)
class One:
    def __str__(self):
        return "1"


@dataclass(frozen=True, slots=True)
class Tensor:
    left: "SessionType"
    right: "SessionType"

    def __str__(self):
        return _binary(self, "*")


@dataclass(frozen=True, slots=True)
class Lolli:
    left: "SessionType"
    right: "SessionType"

    def __str__(self):
        left = f"({self.left})" if isinstance(self.left, Lolli) else str(self.left)
        return f"{left} -o {self.right}"


@dataclass(frozen=True, slots=True)
class Plus:
    left: "SessionType"
    right: "SessionType"

    def __str__(self):
        return _binary(self, "+")


@dataclass(frozen=True, slots=True)
class With:
    left: "SessionType"
    right: "SessionType"

    def __str__(self):
        return _binary(self, "&")


@dataclass(frozen=True, slots=True)
class Bang:
    inner: "SessionType"

    def __str__(self):
        if isinstance(self.inner, (One, Bang)):
            return f"!{self.inner}"
        return f"!({self.inner})"


SessionType = Union[One, Tensor, Lolli, Plus, With, Bang]
ONE = One()


def _binary(t, op):
    def side(s, is_left):
        # same connective associates to the left; anything else binary needs parens
        if isinstance(s, (One, Bang)) or (is_left and type(s) is type(t)):
            return str(s)
        return f"({s})"

    return f"{side(t.left, True)} {op} {side(t.right, False)}"


def type_depth(a: SessionType) -> int:
    """Nesting depth of ``!`` inside ``a``."""
    match a:
        case One():
            return 0
        case Bang(inner):
            return type_depth(inner) + 1
        case Tensor(l, r) | Lolli(l, r) | Plus(l, r) | With(l, r):
            return max(type_depth(l), type_depth(r))
    raise TypeError(f"not a session type: {a!r}")


def type_equal(a: SessionType, b: SessionType) -> bool:
    return a == b


class ContextError(ValueError):
    """A channel bound twice across the zones of a context."""

    def __init__(self, channel, message):
        super().__init__(message)
        self.channel = channel


@dataclass(frozen=True)
class ContextTriple:
    aux: dict = field(default_factory=dict)
    mux: dict = field(default_factory=dict)
    lin: dict = field(default_factory=dict)

    def __post_init__(self):
        for a, b in ((self.aux, self.mux), (self.aux, self.lin), (self.mux, self.lin)):
            clash = a.keys() & b.keys()
            if clash:
                c = sorted(clash)[0]
                raise ContextError(c, f"channel {c} occurs in two context zones")

    def channels(self) -> set:
        return set(self.aux) | set(self.mux) | set(self.lin)

    def exponential(self) -> dict:
        return {**self.aux, **self.mux}

    def __str__(self):
        def zone(z):
            return ", ".join(f"{k}:{v}" for k, v in z.items()) or "."
        return f"{zone(self.aux)}; {zone(self.mux)}; {zone(self.lin)}"


def context_depth(c: ContextTriple) -> int:
    return max((type_depth(t) for z in (c.aux, c.mux, c.lin) for t in z.values()), default=0)


@dataclass(frozen=True)
class Judgment:
    contexts: ContextTriple
    subject: str
    type: SessionType

    def __post_init__(self):
        if self.subject in self.contexts.channels():
            raise ContextError(self.subject, f"subject {self.subject} also occurs in the context")

    def __str__(self):
        return f"{self.contexts} |- {self.subject} : {self.type}"
