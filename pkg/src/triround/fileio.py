"""JSON (de)serialization for matroids.

One descriptor dict per matroid.  Concrete representations:

- ``{"type": "linear_gf2", "matrix": [[0/1, ...], ...], "labels": [...]}``
- ``{"type": "graphic", "vertices": n, "edges": [[u, v, "label"], ...]}``
- ``{"type": "uniform", "r": .., "n": ..}`` (optional ``labels``)
- ``{"type": "rational_affine", "dim": d, "points": {"label": ["p/q", ...]}}``

Derived matroids serialize structurally:

- ``{"type": "derived", "op": .., "args": .., "children": [...]}``

with ops ``dual``, ``minor``, ``truncation``, ``principal_extension``,
``relaxation``, ``two_sum``, ``three_sum``, ``relabel``.  Round-trips are
lossless: loading a dump reproduces the ground labels and the rank
function (derived operations are re-derived, not flattened).
"""

from __future__ import annotations

import json

from .kernel import ValidationError, build

__all__ = ["loads", "dumps", "load", "save", "descriptor"]


def descriptor(M):
    """The JSON-ready descriptor dict of a matroid."""
    return M.describe()


def dumps(M, indent=None):
    """Serialize a matroid (or a raw descriptor dict) to a JSON string."""
    desc = M if isinstance(M, dict) else M.describe()
    return json.dumps(desc, indent=indent, sort_keys=True)


def loads(text):
    """Parse a JSON string into a matroid."""
    try:
        desc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    return build(desc)


def save(M, path, indent=2):
    """Write a matroid to a JSON file (trailing newline included)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(M, indent=indent))
        fh.write("\n")


def load(path):
    """Read a matroid from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())
