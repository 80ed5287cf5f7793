"""Exact Branch-and-Prune over the binary realization tree.

With the fictive vertex appended every layer branches the same way,
``x_k = x_{k-1} + s_k y_k``, and a leaf is a solution when ``x_{n+1}``
returns to the anchor ``x_1 = 0``.  Paradoxical instances prune nothing
before the last layer, so the search visits all ``2**n`` leaves.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import LayerOutOfRange, SizeLimit
from .instance import AugmentedInstance
from .mvm import MAX_N, encode_signs


@dataclass(frozen=True)
class Realization:
    """Sign vector ``(s_2, ..., s_{n+1})`` and positions ``(x_1, ..., x_{n+1})``."""

    signs: tuple[int, ...]
    positions: tuple[float, ...]
    scale: float = 1.0

    @property
    def row(self) -> int:
        return encode_signs(self.signs)

    def mirrored(self) -> "Realization":
        return Realization(
            tuple(-s for s in self.signs), tuple(0.0 - x for x in self.positions), self.scale
        )


def positions_from_signs(signs: Sequence[int], y: Sequence[float]) -> tuple[float, ...]:
    x = [0.0]
    for s, d in zip(signs, y):
        x.append(x[-1] + s * d)
    return tuple(x)


def default_eps(y: Sequence[float]) -> float:
    """Slack for floating inputs: ``1e-9 * max(y)``."""
    return 1e-9 * max(y, default=0.0)


def _dfs(y, eps, prefix):
    """Leaves below ``prefix`` with ``|x_{n+1}| <= eps``, as sign tuples."""
    n = len(y)
    signs = list(prefix) + [0] * (n - len(prefix))
    pos = list(positions_from_signs(prefix, y)) + [0.0] * (n - len(prefix))
    found = []
    d0 = len(prefix)
    if d0 == n:
        if abs(pos[n]) <= eps:
            found.append(tuple(signs))
        return found
    stack = [(d0, 1), (d0, -1)]
    while stack:
        d, s = stack.pop()
        signs[d] = s
        x = pos[d] + s * y[d]
        pos[d + 1] = x
        if d + 1 == n:
            if abs(x) <= eps:
                found.append(tuple(signs))
        else:
            stack.append((d + 1, 1))
            stack.append((d + 1, -1))
    return found


def solve_bp(aug: AugmentedInstance, eps: float = 0.0, *, cap: int = MAX_N, n_jobs: int = 1) -> list[Realization]:
    """All realizations with ``|x_{n+1}| <= eps``, ordered by row index.

    Parameters
    ----------
    aug : AugmentedInstance
    eps : float
        Closure tolerance; ``0`` for exact data, see :func:`default_eps` otherwise.
    cap : int
        Largest ``n`` accepted before raising :class:`SizeLimit`.
    n_jobs : int
        Worker processes; subtrees are searched independently and merged.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if aug.n > cap:
        raise SizeLimit(f"n={aug.n} exceeds the enumeration cap of {cap}")
    y = aug.y
    if n_jobs > 1 and aug.n > 4:
        depth = min(aug.n - 1, max(1, int(np.ceil(np.log2(4 * n_jobs)))))
        prefixes = [tuple(1 if (b >> j) & 1 else -1 for j in range(depth)) for b in range(1 << depth)]
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            parts = pool.map(_dfs, [y] * len(prefixes), [eps] * len(prefixes), prefixes)
            found = [s for part in parts for s in part]
    else:
        found = _dfs(y, eps, ())
    found.sort(key=encode_signs)
    return [Realization(s, positions_from_signs(s, y)) for s in found]


def enumerate_layer(aug: AugmentedInstance, k: int) -> np.ndarray:
    """All ``2**(k-1)`` candidate positions of vertex ``k`` (duplicates kept).

    Entries follow the row encoding of the sign prefix ``(s_2, ..., s_k)``.
    Layer ``n + 1`` is the fictive vertex, whose zeros are the solutions.
    """
    if not 1 <= k <= aug.n + 1:
        raise LayerOutOfRange(f"layer {k} outside 1..{aug.n + 1}")
    if k - 1 > MAX_N:
        raise SizeLimit(f"layer {k} exceeds the enumeration cap")
    layer = np.zeros(1)
    for d in aug.y[: k - 1]:
        layer = np.concatenate((layer - d, layer + d))
    return layer
