"""Paradoxical DGP_1 instances: validation, generation, (de)serialization.

A paradoxical instance is a cycle ``1 - 2 - ... - n - 1`` on the real line.
It is stored as the ``n - 1`` consecutive distances ``d(k, k+1)`` plus the
closing distance ``d(1, n)``.  All public interfaces use 1-based vertex ranks.
"""

from __future__ import annotations

import json
import math
import warnings
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import (
    DuplicateEdge,
    ExtraEdge,
    InstanceError,
    InstanceSyntaxError,
    InvalidSize,
    MissingClosingEdge,
    MissingConsecutiveEdge,
    NegativeWeight,
    ZeroDistanceWarning,
)


def _check_distance(w, what):
    w = float(w)
    if math.isnan(w) or math.isinf(w):
        raise InstanceError(f"{what} must be finite, got {w!r}")
    if w < 0:
        raise NegativeWeight(f"{what} must be nonnegative, got {w!r}")
    return w


@dataclass(frozen=True)
class ParadoxicalInstance:
    """Cycle instance with ``n`` vertices.

    ``consecutive[k-1]`` is ``d(k, k+1)``; ``closing`` is ``d(1, n)``.  For
    ``n == 1`` there are no consecutive distances and ``closing`` is the
    (theoretical) self-distance ``d(1, 1)``.
    """

    n: int
    consecutive: tuple[float, ...]
    closing: float
    label: Optional[str] = None

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise InvalidSize(f"n must be an integer >= 1, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        cons = tuple(
            _check_distance(w, f"d({k + 1},{k + 2})") for k, w in enumerate(self.consecutive)
        )
        if len(cons) != self.n - 1:
            raise InstanceError(
                f"expected {self.n - 1} consecutive distances, got {len(cons)}"
            )
        object.__setattr__(self, "consecutive", cons)
        object.__setattr__(self, "closing", _check_distance(self.closing, f"d(1,{self.n})"))

    def edges(self) -> list[tuple[int, int, float]]:
        """Edge list ``(u, v, w)`` in vertex order, closing edge last."""
        out = [(k, k + 1, w) for k, w in enumerate(self.consecutive, start=1)]
        out.append((1, self.n, self.closing))
        return out


@dataclass(frozen=True)
class AugmentedInstance:
    """Fictive-vertex form: the distance chain ``y = (d12, ..., d(n-1)n, d1n)``."""

    n: int
    y: tuple[float, ...]

    def __post_init__(self):
        y = tuple(float(v) for v in self.y)
        if len(y) != self.n:
            raise InstanceError(f"chain length {len(y)} does not match n={self.n}")
        object.__setattr__(self, "y", y)

    @classmethod
    def from_chain(cls, y: Iterable[float]) -> "AugmentedInstance":
        y = tuple(float(v) for v in y)
        return cls(len(y), y)


def augment(inst: ParadoxicalInstance) -> AugmentedInstance:
    """Move the closing distance onto a fictive edge ``{n, n+1}``."""
    return AugmentedInstance(inst.n, inst.consecutive + (inst.closing,))


def validate(edges, n: int, label: Optional[str] = None) -> ParadoxicalInstance:
    """Build an instance from an edge list ``[(u, v, w), ...]``.

    The edge set must be exactly ``{k-1, k}`` for ``2 <= k <= n`` plus ``{1, n}``,
    in any order and orientation.  For ``n == 2`` the consecutive and closing
    edges are the same vertex pair; it may be listed once (closing equals the
    consecutive distance) or twice (consecutive first, closing second).  For
    ``n == 1`` the only edge is the self-loop ``(1, 1, d11)``.

    Raises
    ------
    NegativeWeight, DuplicateEdge, ExtraEdge, MissingConsecutiveEdge, MissingClosingEdge
    """
    edges = list(edges)
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidSize(f"n must be an integer >= 1, got {n!r}")
    if not edges:
        raise InstanceError("edge list is empty")

    allowed = Counter({(k - 1, k): 1 for k in range(2, n + 1)})
    allowed[(1, n)] += 1
    seen: dict[tuple[int, int], list[float]] = {}
    for e in edges:
        u, v, w = e
        if not (1 <= u <= n and 1 <= v <= n):
            raise ExtraEdge(u, v)
        key = (min(u, v), max(u, v))
        if key not in allowed:
            raise ExtraEdge(u, v)
        w = _check_distance(w, f"d({u},{v})")
        weights = seen.setdefault(key, [])
        if len(weights) >= allowed[key]:
            raise DuplicateEdge(u, v)
        weights.append(w)

    for k in range(2, n + 1):
        if (k - 1, k) not in seen:
            raise MissingConsecutiveEdge(k)
    if (1, n) not in seen:
        raise MissingClosingEdge(n)

    consecutive = [seen[(k - 1, k)][0] for k in range(2, n + 1)]
    closing = seen[(1, n)][-1]
    inst = ParadoxicalInstance(n, tuple(consecutive), closing, label)
    zeros = [k for k, w in enumerate(consecutive, start=2) if w == 0.0]
    if zeros:
        warnings.warn(
            f"zero consecutive distance on edges ending at vertices {zeros}",
            ZeroDistanceWarning,
            stacklevel=2,
        )
    return inst


def _positions(signs, dists):
    x = [0.0]
    for s, d in zip(signs, dists):
        x.append(x[-1] + s * d)
    return x


def generate_feasible(n: int, seed: int, dmax: float = 10.0) -> ParadoxicalInstance:
    """Random instance that is feasible by construction.

    Consecutive distances are uniform on ``(0, dmax]``, a random sign vector
    places the vertices, and the closing distance is ``|x_1 - x_n|``.
    """
    if n < 2:
        raise InvalidSize(f"generators need n >= 2, got {n}")
    if not dmax > 0:
        raise InstanceError(f"dmax must be positive, got {dmax!r}")
    rng = np.random.default_rng(seed)
    d = dmax * (1.0 - rng.random(n - 1))
    s = rng.choice((-1.0, 1.0), size=n - 1)
    x = _positions(s.tolist(), d.tolist())
    return ParadoxicalInstance(n, tuple(d.tolist()), abs(x[-1]), f"feasible-n{n}-s{seed}")


def generate_random(n: int, seed: int, dmax: float = 1.0) -> ParadoxicalInstance:
    """Random instance with all ``n`` distances uniform on ``(0, dmax]``; usually infeasible."""
    if n < 2:
        raise InvalidSize(f"generators need n >= 2, got {n}")
    if not dmax > 0:
        raise InstanceError(f"dmax must be positive, got {dmax!r}")
    rng = np.random.default_rng(seed)
    d = (dmax * (1.0 - rng.random(n))).tolist()
    return ParadoxicalInstance(n, tuple(d[:-1]), d[-1], f"random-n{n}-s{seed}")


# -- serialization -----------------------------------------------------------

def _fmt(x: float) -> str:
    return format(x, ".17g")


def serialize(inst: ParadoxicalInstance) -> str:
    """Canonical JSON text (compact, fixed key order, 17 significant digits)."""
    parts = [
        f'"n":{inst.n}',
        '"consecutive":[' + ",".join(_fmt(w) for w in inst.consecutive) + "]",
        f'"closing":{_fmt(inst.closing)}',
    ]
    if inst.label is not None:
        parts.append('"label":' + json.dumps(inst.label, ensure_ascii=False))
    return "{" + ",".join(parts) + "}\n"


def _number(value, field):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InstanceSyntaxError(f"expected a number, got {value!r}", field=field)
    return float(value)


def parse(text: str) -> ParadoxicalInstance:
    """Parse an instance document.

    Raises
    ------
    InstanceSyntaxError
        Malformed JSON (with line number) or a missing/ill-typed field.
    InstanceError
        Structurally valid document describing an invalid instance.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceSyntaxError(exc.msg, line=exc.lineno) from exc
    if not isinstance(doc, dict):
        raise InstanceSyntaxError("top level must be a JSON object")
    unknown = set(doc) - {"n", "consecutive", "closing", "label"}
    if unknown:
        raise InstanceSyntaxError("unknown field", field=sorted(unknown)[0])
    for key in ("n", "consecutive", "closing"):
        if key not in doc:
            raise InstanceSyntaxError("missing field", field=key)

    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InstanceSyntaxError(f"n must be a positive integer, got {n!r}", field="n")
    cons = doc["consecutive"]
    if not isinstance(cons, list):
        raise InstanceSyntaxError("expected an array", field="consecutive")
    if len(cons) != n - 1:
        raise InstanceSyntaxError(
            f"expected {n - 1} entries for n={n}, got {len(cons)}", field="consecutive"
        )
    cons = tuple(_number(w, f"consecutive[{i}]") for i, w in enumerate(cons))
    closing = _number(doc["closing"], "closing")
    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise InstanceSyntaxError("label must be a string", field="label")
    return ParadoxicalInstance(n, cons, closing, label)


def load(path) -> ParadoxicalInstance:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def dump(inst: ParadoxicalInstance, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize(inst))
