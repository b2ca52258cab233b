"""Turn the definitions of a parsed ``.sst`` file into derivations."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .derivation import CheckError, check_derivation
from .elaborator import Diagnostic, elaborate, elaborate_composition
from .syntax import ComposeDecl, DerivationDecl, ProcessDecl, SourceFile, parse

__all__ = ["Resolved", "load", "resolve", "resolve_all"]


@dataclass
class Resolved:
    name: str
    mode: str
    derivation: object = None
    diagnostics: list = dataclasses.field(default_factory=list)
    judgment: object = None

    @property
    def ok(self):
        return self.derivation is not None


def load(path) -> SourceFile:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def _signature(decl, mode):
    return dataclasses.replace(decl.signature, mode=mode) if mode else decl.signature


def resolve(src: SourceFile, name: str, mode: str | None = None) -> Resolved:
    """Elaborate, kernel-check or compose the definition called ``name``.

    ``mode`` overrides the mode written in the file.
    """
    decl = src.named(name)
    match decl:
        case ProcessDecl():
            sig = _signature(decl, mode)
            r = elaborate(decl.process, sig)
            return _result(name, sig.mode, r)
        case DerivationDecl():
            m = mode or decl.mode
            try:
                j = check_derivation(decl.derivation, m)
            except CheckError as err:
                diag = Diagnostic("no-rule", "", err.location, f"kernel rejects the literal: {err}")
                return Resolved(name, m, None, [diag])
            return Resolved(name, m, decl.derivation, [], j)
        case ComposeDecl():
            parts = []
            for part in decl.parts:
                pd = src.named(part)
                if not isinstance(pd, ProcessDecl):
                    raise KeyError(f"{part} is not a process definition")
                parts.append((pd.process, _signature(pd, mode or decl.mode)))
            m = parts[0][1].mode
            return _result(name, m, elaborate_composition(parts, decl.channels))
    raise KeyError(f"{name} is not a definition")


def _result(name, mode, r):
    if isinstance(r, list):
        return Resolved(name, mode, None, r)
    return Resolved(name, mode, r, [], check_derivation(r, mode))


def resolve_all(src: SourceFile, mode: str | None = None) -> list:
    return [resolve(src, d.name, mode) for d in src.definitions()]
