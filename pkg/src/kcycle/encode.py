"""Matrix encoding of a reduced K-Cycle instance.

Cells are addressed 0-based internally: vertex ``v`` maps to row/column
``v - 1``. The encoded matrix is the Tutte matrix without signs, with unit
diagonal on every vertex outside the closed terminal neighbourhood, the two
edges at terminal 1 oriented, and each edge at terminal ``i >= 2`` tagged
with an orientation variable ``a_i``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

import numpy as np

from kcycle import field
from kcycle.graph import Graph, ReducedInstance
from kcycle.linalg import AffineMatrix, DenseMatrix


class Polarity(enum.Enum):
    PLAIN = "plain"  # factor a_i
    FLIPPED = "flipped"  # factor 1 + a_i


@dataclass(frozen=True)
class OrientationTag:
    row: int
    col: int
    terminal: int
    polarity: Polarity


@dataclass(frozen=True)
class TargetSet:
    """Edge-variable ids of the 2k terminal edges, ordered by terminal."""

    variables: tuple[int, ...]

    def __len__(self):
        return len(self.variables)

    def __iter__(self):
        return iter(self.variables)


@dataclass(frozen=True, eq=False)
class EncodedMatrix:
    """The encoded matrix before or after random evaluation.

    ``edge_var[r, c]`` is the edge-variable id at a cell (-1 if none),
    ``positions[e]`` lists the cells of variable ``e``, and ``constant`` holds
    the diagonal. ``values`` is None until :func:`apply_evaluation`; afterwards
    it is the full evaluated matrix with orientation tags at full value.
    """

    n: int
    k: int
    edges: tuple[tuple[int, int], ...]
    edge_var: np.ndarray
    positions: tuple[tuple[tuple[int, int], ...], ...]
    constant: np.ndarray
    tags: tuple[OrientationTag, ...]
    values: np.ndarray | None = None
    seed: int | None = None

    @property
    def evaluated(self) -> bool:
        return self.values is not None

    def terminals_with_tags(self) -> list[int]:
        return sorted({t.terminal for t in self.tags})

    def cells_of(self, variables: Iterable[int]) -> list[tuple[int, int]]:
        return [cell for e in variables for cell in self.positions[e]]


def _assemble(n: int, k: int, graph: Graph, skip: set[tuple[int, int]], diag: np.ndarray,
              tags: tuple[OrientationTag, ...]) -> EncodedMatrix:
    edges = tuple(graph.sorted_edges())
    edge_var = np.full((n, n), -1, dtype=np.int64)
    positions = []
    for e, (u, v) in enumerate(edges):
        cells = tuple(c for c in ((u - 1, v - 1), (v - 1, u - 1)) if c not in skip)
        for r, c in cells:
            edge_var[r, c] = e
        positions.append(cells)
    return EncodedMatrix(n, k, edges, edge_var, tuple(positions), diag, tags)


def build_matrix(r: ReducedInstance) -> tuple[EncodedMatrix, TargetSet]:
    k, n, g = r.k, r.n, r.graph
    if k < 2:
        raise ValueError("build_matrix needs k >= 2")

    diag = np.zeros(n, dtype=np.uint64)
    diag[3 * k:] = 1
    # orient terminal 1 as v1'' -> v1 -> v1'
    skip = {(0, k + 1), (k, 0)}
    tags = []
    for i in range(2, k + 1):
        t0, a, b = i - 1, k + 2 * i - 2, k + 2 * i - 1  # 0-based: v_i, v_i', v_i''
        tags += [
            OrientationTag(a, t0, i, Polarity.PLAIN),
            OrientationTag(t0, b, i, Polarity.PLAIN),
            OrientationTag(b, t0, i, Polarity.FLIPPED),
            OrientationTag(t0, a, i, Polarity.FLIPPED),
        ]
    m = _assemble(n, k, g, skip, diag, tuple(tags))

    index = {e: idx for idx, e in enumerate(m.edges)}
    targets = []
    for i in range(1, k + 1):
        for twin in r.twins(i):
            targets.append(index[(i, twin)])
    return m, TargetSet(tuple(targets))


def build_tutte_matrix(g: Graph) -> EncodedMatrix:
    """Plain Tutte matrix: zero diagonal, symmetric, no orientations."""
    return _assemble(g.n, 0, g, set(), np.zeros(g.n, dtype=np.uint64), ())


def apply_evaluation(m: EncodedMatrix, seed: int) -> EncodedMatrix:
    """Assign each edge variable an independent uniform nonzero field value."""
    rng = field.make_rng(seed)
    draws = field.random_nonzero_elements(rng, len(m.edges))
    values = np.zeros((m.n, m.n), dtype=np.uint64)
    values[np.diag_indices(m.n)] = m.constant
    mask = m.edge_var >= 0
    values[mask] = draws[m.edge_var[mask]]
    values.setflags(write=False)
    return replace(m, values=values, seed=seed)


def _require_values(m: EncodedMatrix) -> np.ndarray:
    if m.values is None:
        raise ValueError("matrix has not been evaluated")
    return m.values


def instantiate(m: EncodedMatrix, orientation: Mapping[int, int] | None = None,
                zero_set: Iterable[int] = ()) -> DenseMatrix:
    """Concrete matrix for an orientation assignment and a zero-set.

    ``orientation`` maps each tagged terminal to 0 or 1; None leaves every
    tagged cell at full value (no orientation at all). Cells of the edge
    variables in ``zero_set`` become 0.
    """
    out = _require_values(m).copy()
    if orientation is not None:
        for t in m.tags:
            a = orientation[t.terminal]
            keep = a if t.polarity is Polarity.PLAIN else 1 - a
            if not keep:
                out[t.row, t.col] = 0
    cells = m.cells_of(zero_set)
    if cells:
        rows, cols = zip(*cells)
        out[list(rows), list(cols)] = 0
    return out


def orientation_cells(m: EncodedMatrix) -> dict[int, tuple[list[tuple[int, int]], list[tuple[int, int]]]]:
    """terminal -> (cells zeroed when a_i = 0, cells zeroed when a_i = 1)."""
    out: dict[int, tuple[list, list]] = {}
    for t in m.tags:
        plain, flipped = out.setdefault(t.terminal, ([], []))
        (plain if t.polarity is Polarity.PLAIN else flipped).append((t.row, t.col))
    return out


def to_affine(m: EncodedMatrix) -> AffineMatrix:
    """Evaluated matrix with orientation tags as affine entries.

    PLAIN cells ``a_i * x`` become ``c1 = x, c0 = 0``; FLIPPED cells
    ``(1 + a_i) * x`` become ``c1 = c0 = x``.
    """
    values = _require_values(m)
    c0 = values.copy()
    c1 = np.zeros_like(c0)
    var = np.zeros(c0.shape, dtype=np.int32)
    for t in m.tags:
        x = values[t.row, t.col]
        var[t.row, t.col] = t.terminal
        c1[t.row, t.col] = x
        c0[t.row, t.col] = 0 if t.polarity is Polarity.PLAIN else x
    return AffineMatrix(c0, c1, var)
