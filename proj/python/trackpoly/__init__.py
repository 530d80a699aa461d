"""Polynomial invariants of train track maps.

Specs are passed as text in the line format read by the command-line tool.
Reports come back as plain dicts with the same keys as ``analyze --format
structured``.
"""

import json
from pathlib import Path

from ._trackpoly import InputError, InvariantError
from . import _trackpoly as _core

__all__ = [
    "InputError",
    "InvariantError",
    "analyze",
    "analyze_text",
    "cover",
    "restrict",
    "normalize_spec",
    "power_roots",
    "cli",
    "load",
]


def load(path):
    """Reads a spec or matrix file as text."""
    return Path(path).read_text()


def analyze(spec, tol="1e-6", loop=None, seed=0):
    return json.loads(_core.analyze_json(spec, tol=str(tol), loop=loop, seed=seed))


def analyze_text(spec, tol="1e-6"):
    return _core.analyze_text(spec, tol=str(tol))


def cover(spec):
    """Orientation cover blocks A and B, both identities and the two lifted specs."""
    out = json.loads(_core.cover_json(spec))
    for key in ("A", "B"):
        out[key] = [[int(x) for x in row] for row in out[key]]
    return out


def restrict(T, Q):
    out = json.loads(_core.restrict_json(T, Q))
    out["A"] = [[int(x) for x in row] for row in out["A"]]
    return out


def normalize_spec(spec):
    return _core.normalize_spec(spec)


def power_roots(poly, n):
    return _core.power_roots(poly, n)


def cli(*args):
    """Runs the command-line tool in process; returns (exit code, stdout, stderr)."""
    return _core.cli([str(a) for a in args])
