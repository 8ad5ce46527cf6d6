"""Rank-k bases when ``k`` does not divide ``d d'``.

The coefficient grid is split into two blocks whose area is a multiple of
``k`` (filled by the cyclic construction) and a ``(k + r) x (k + r')`` corner.
The corner is covered exactly by

* generalized k-diagonals: ``k`` cells with pairwise distinct rows and
  columns, each carrying ``k`` states, and
* L-patterns: ``k - 1`` singleton cells plus ``s + 1`` cells sharing one
  column (or row), each carrying ``k + s`` states of rank ``k``.

The corner cover is found by a deterministic exact-cover backtracking search.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations

import numpy as np

from . import isometry as iso
from .construct import coefficient_matrix, cyclic_states
from .exceptions import (
    DegenerateCoefficientError,
    DispatchError,
    InvalidInputError,
    TilingNotFoundError,
)
from .model import BipartiteState, EntangledBasis

ENTRY_TOL = 1e-10


@dataclass(frozen=True)
class Block:
    row0: int
    col0: int
    rows: int
    cols: int
    kind: str

    def cells(self) -> list:
        return [(self.row0 + r, self.col0 + c) for r in range(self.rows) for c in range(self.cols)]


@dataclass(frozen=True)
class BlockDecomposition:
    d: int
    dprime: int
    k: int
    s: int
    r: int
    sprime: int
    rprime: int
    blocks: tuple

    @property
    def corner(self) -> Block:
        return next(b for b in self.blocks if b.kind == "corner")


def block_decompose(d: int, dprime: int, k: int) -> BlockDecomposition:
    if not 2 <= k <= d <= dprime:
        raise InvalidInputError(f"need 2 <= k <= d <= d', got k={k}, {d}x{dprime}")
    if (d * dprime) % k == 0:
        raise DispatchError(f"{k} divides {d}*{dprime}; the cyclic construction applies")
    s, r = divmod(d, k)
    sprime, rprime = divmod(dprime, k)
    c0 = (sprime - 1) * k
    blocks = []
    if sprime >= 2:
        blocks.append(Block(0, 0, d, c0, "cyclic"))
    if s >= 2:
        blocks.append(Block(k + r, c0, (s - 1) * k, k + rprime, "cyclic"))
    blocks.append(Block(0, c0, k + r, k + rprime, "corner"))
    return BlockDecomposition(d, dprime, k, s, r, sprime, rprime, tuple(blocks))


@dataclass(frozen=True)
class LPattern:
    """Cells of one L-pattern in display order: singletons first, then the shared line."""

    k: int
    s: int
    orientation: str
    positions: tuple

    def __post_init__(self):
        k, s = self.k, self.s
        if not 1 <= s <= k - 1:
            raise InvalidInputError(f"excess s={s} must lie in [1, {k - 1}]")
        if self.orientation not in ("column", "row"):
            raise InvalidInputError(f"unknown orientation {self.orientation!r}")
        cells = tuple((int(a), int(b)) for a, b in self.positions)
        if len(cells) != k + s or len(set(cells)) != k + s:
            raise InvalidInputError(f"an L-pattern of excess {s} has {k + s} distinct cells")
        single, line = cells[: k - 1], cells[k - 1 :]
        # along: the coordinate shared by the line; across: the one that varies
        along, across = (1, 0) if self.orientation == "column" else (0, 1)
        if len({c[along] for c in line}) != 1:
            raise InvalidInputError("shared-line cells must share one column (row)")
        used_across = [c[across] for c in cells]
        used_along = [c[along] for c in single] + [line[0][along]]
        if len(set(used_across)) != k + s or len(set(used_along)) != k:
            raise InvalidInputError("L-pattern cells must be row- and column-disjoint")
        object.__setattr__(self, "positions", cells)


@dataclass(frozen=True)
class Tiling:
    rows: int
    cols: int
    k: int
    pieces: tuple = field(default=())

    @property
    def diagonals(self) -> tuple:
        return tuple(p for kind, p in self.pieces if kind == "diagonal")

    @property
    def l_patterns(self) -> tuple:
        return tuple(p for kind, p in self.pieces if kind == "l")

    def cell_owner(self) -> dict:
        owner = {}
        for idx, (_, piece) in enumerate(self.pieces):
            cells = piece.positions if isinstance(piece, LPattern) else piece
            for cell in cells:
                owner[cell] = idx
        return owner


def is_k_diagonal(cells) -> bool:
    rows = [c[0] for c in cells]
    cols = [c[1] for c in cells]
    return len(set(rows)) == len(rows) and len(set(cols)) == len(cols)


def _excess_partitions(total: int, largest: int):
    """Partitions of ``total`` into parts ``<= largest``, largest parts first."""
    if total == 0:
        yield ()
        return
    for part in range(min(total, largest), 0, -1):
        for rest in _excess_partitions(total - part, part):
            yield (part,) + rest


class _CornerSearch:
    def __init__(self, rows: int, cols: int, k: int):
        self.rows, self.cols, self.k = rows, cols, k
        self.free = np.ones((rows, cols), dtype=bool)
        self.row_free = [cols] * rows
        self.col_free = [rows] * cols
        self.n_free = rows * cols
        self.pieces = []

    def first_free(self):
        for i in range(self.rows):
            if self.row_free[i]:
                row = self.free[i]
                for j in range(self.cols):
                    if row[j]:
                        return (i, j)
        return None

    def diagonals_at(self, i: int, j: int):
        k, free = self.k, self.free

        def extend(cells, used_cols, next_row):
            if len(cells) == k:
                yield tuple(cells)
                return
            need = k - len(cells)
            for row in range(next_row, self.rows - need + 1):
                for col in range(self.cols):
                    if col in used_cols or not free[row, col]:
                        continue
                    cells.append((row, col))
                    used_cols.add(col)
                    yield from extend(cells, used_cols, row + 1)
                    used_cols.discard(col)
                    cells.pop()

        yield from extend([(i, j)], {j}, i + 1)

    def l_placements(self, s: int):
        """Free L-patterns of excess ``s``, column orientation first.

        Generation order: singleton rows, singleton columns, shared line,
        shared cells, each ascending.
        """
        k = self.k
        for orientation in ("column", "row"):
            # frame where the shared line is a column; transposed for rows
            if orientation == "column":
                nr, nc, free = self.rows, self.cols, self.free
                to_grid = lambda c: c
            else:
                nr, nc, free = self.cols, self.rows, self.free.T
                to_grid = lambda c: (c[1], c[0])
            if k + s > nr or k > nc:
                continue
            for srows in combinations(range(nr), k - 1):
                for scols in permutations(range(nc), k - 1):
                    singles = list(zip(srows, scols))
                    if not all(free[c] for c in singles):
                        continue
                    for line_col in range(nc):
                        if line_col in scols:
                            continue
                        rows_left = [r for r in range(nr) if r not in srows and free[r, line_col]]
                        for line_rows in combinations(rows_left, s + 1):
                            cells = [to_grid(c) for c in singles] + [to_grid((r, line_col)) for r in line_rows]
                            yield LPattern(k, s, orientation, tuple(cells))

    def place(self, cells):
        for r, c in cells:
            self.free[r, c] = False
            self.row_free[r] -= 1
            self.col_free[c] -= 1
        self.n_free -= len(cells)

    def lift(self, cells):
        for r, c in cells:
            self.free[r, c] = True
            self.row_free[r] += 1
            self.col_free[c] += 1
        self.n_free += len(cells)

    def feasible(self) -> bool:
        # Cells left for diagonals form a bipartite graph (rows x columns);
        # a partition into matchings of size k exists iff no row or column
        # holds more cells than there are diagonals to place (de Werra's
        # equitable edge colouring), so the diagonal phase never dead-ends.
        diagonals, spare = divmod(self.n_free, self.k)
        if spare:
            return False
        return max(self.row_free) <= diagonals and max(self.col_free) <= diagonals

    def place_patterns(self, split: tuple) -> bool:
        if not split:
            return self.feasible() and self.place_diagonals()
        for pattern in self.l_placements(split[0]):
            if not all(self.free[c] for c in pattern.positions):
                continue
            self.place(pattern.positions)
            self.pieces.append(("l", pattern))
            if self.place_patterns(split[1:]):
                return True
            self.pieces.pop()
            self.lift(pattern.positions)
        return False

    def place_diagonals(self) -> bool:
        anchor = self.first_free()
        if anchor is None:
            return True
        if not self.feasible():
            return False
        for diag in self.diagonals_at(*anchor):
            self.place(diag)
            if not self.feasible():
                self.lift(diag)
                continue
            self.pieces.append(("diagonal", diag))
            if self.place_diagonals():
                return True
            self.pieces.pop()
            self.lift(diag)
        return False


def tile_corner(m: int, n: int, k: int) -> Tiling:
    """Cover an ``m x n`` grid (``k < m, n < 2k``) by L-patterns and k-diagonals.

    L-pattern excesses must add up to ``m n mod k``; candidate excess splits
    are tried largest-part first. For each split the L-patterns are placed
    first, in a fixed generation order, then diagonals are added at the first
    free cell in row-major order, so the result is deterministic.
    """
    if k < 2 or not (k < m < 2 * k and k < n < 2 * k):
        raise InvalidInputError(f"corner must be (k+r)x(k+r') with 1 <= r, r' <= k-1; got {m}x{n}, k={k}")
    excess = (m * n) % k
    largest = min(k - 1, max(m, n) - k)
    targets = [excess + j * k for j in range(3) if excess + j * k > 0] if excess else [0]
    for target in targets:
        for split in _excess_partitions(target, largest):
            if sum(k + s for s in split) > m * n:
                continue
            search = _CornerSearch(m, n, k)
            if search.place_patterns(split):
                return Tiling(m, n, k, tuple(search.pieces))
    raise TilingNotFoundError(f"no cover of a {m}x{n} corner by L-patterns and {k}-diagonals")


def l_pattern_basis(k: int, s: int, coeffs=None, layout: str = "l") -> list:
    """Orthonormal rank-``k`` matrices spanning one pattern space.

    ``layout="l"``: the ``(k + s) x k`` space with ``x_1..x_{k-1}`` on the
    diagonal and ``x_k..x_{k+s}`` down the last column. ``layout="diagonal"``:
    the ``(k + s) x (k + s)`` diagonal matrices. Matrix ``i`` takes its
    ``x_p`` from column ``i`` of ``coeffs`` (default: DFT of size ``k + s``).
    """
    if not 1 <= s <= k - 1:
        raise InvalidInputError(f"excess s={s} must lie in [1, {k - 1}]")
    n = k + s
    x = iso.dft(n) if coeffs is None else coeffs
    if not isinstance(x, iso.Isometry):
        x = iso.from_matrix(x)
    if x.shape != (n, n):
        raise InvalidInputError(f"need a {n}x{n} coefficient matrix, got {x.shape}")
    entries = x.entries
    out = []
    for i in range(n):
        col = entries[:, i]
        if layout == "l":
            if np.any(np.abs(col[: k - 1]) <= ENTRY_TOL) or np.linalg.norm(col[k - 1 :]) <= ENTRY_TOL:
                raise DegenerateCoefficientError(f"column {i} would give a matrix of rank < {k}")
            a = np.zeros((n, k), dtype=np.complex128)
            for p in range(k - 1):
                a[p, p] = col[p]
            a[k - 1 :, k - 1] = col[k - 1 :]
        elif layout == "diagonal":
            if int(np.sum(np.abs(col) > ENTRY_TOL)) != k:
                raise DegenerateCoefficientError(f"column {i} does not have exactly {k} nonzero entries")
            a = np.diag(col).astype(np.complex128)
        else:
            raise InvalidInputError(f"unknown layout {layout!r}")
        out.append(a)
    return out


def _pattern_states(cells, x: iso.Isometry) -> list:
    return [[(r, c, x.entries[p, i]) for p, (r, c) in enumerate(cells)] for i in range(len(cells))]


def assemble(d: int, dprime: int, k: int, coeffs=None, field: str = "complex") -> EntangledBasis:
    """EBk of ``C^d (x) C^d'`` for ``k`` not dividing ``d d'``."""
    decomposition = block_decompose(d, dprime, k)
    diag_x = coefficient_matrix(coeffs, k, field)
    if not iso.no_zero_entries(diag_x):
        raise DegenerateCoefficientError("coefficient matrix has a zero entry; states would lose rank")
    pattern_source = coeffs if isinstance(coeffs, str) else None
    entries = []
    block_log = []
    for block in decomposition.blocks:
        start = len(entries)
        if block.kind == "cyclic":
            if block.rows <= block.cols:
                local = cyclic_states(block.rows, block.cols, k, diag_x)
                place = lambda r, c, b=block: (b.row0 + r, b.col0 + c)
            else:
                local = cyclic_states(block.cols, block.rows, k, diag_x)
                place = lambda r, c, b=block: (b.row0 + c, b.col0 + r)
            for state in local:
                entries.append([(*place(r, c), v) for r, c, v in state])
            block_log.append({"kind": "cyclic", "origin": [block.row0, block.col0],
                              "shape": [block.rows, block.cols], "states": [start, len(entries)]})
            continue
        tiling = tile_corner(block.rows, block.cols, k)
        pieces_log = []
        for kind, piece in tiling.pieces:
            if kind == "l":
                x = coefficient_matrix(pattern_source, k + piece.s, field)
                l_pattern_basis(k, piece.s, x)  # rank check of the coefficients
                cells = piece.positions
                pieces_log.append({"kind": "l", "s": piece.s, "orientation": piece.orientation})
            else:
                x, cells = diag_x, piece
                pieces_log.append({"kind": "diagonal"})
            cells = [(block.row0 + r, block.col0 + c) for r, c in cells]
            pieces_log[-1]["cells"] = [list(c) for c in cells]
            entries.extend(_pattern_states(cells, x))
        block_log.append({"kind": "corner", "origin": [block.row0, block.col0],
                          "shape": [block.rows, block.cols], "states": [start, len(entries)],
                          "pieces": pieces_log})
    states = tuple(BipartiteState(d, dprime, tuple(e)) for e in entries)
    provenance = {
        "construction": "tiling",
        "isometry": diag_x.source,
        "field": field,
        "blocks": block_log,
    }
    return EntangledBasis((d, dprime), k, states, "ebk", provenance)
