"""File parsing, the bound analyzer and the command line, in one namespace."""

from .analysis import AnalysisReport, analyze, compute_bounds, depth_from_interface, polynomial_bound
from .cli import run_cli
from .program import Resolved, load, resolve, resolve_all
from .syntax import SourceFile, SstSyntaxError, parse, pretty

__all__ = [
    "AnalysisReport", "analyze", "compute_bounds", "depth_from_interface", "polynomial_bound",
    "run_cli", "Resolved", "load", "resolve", "resolve_all", "SourceFile", "SstSyntaxError",
    "parse", "pretty",
]
