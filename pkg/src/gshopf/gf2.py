"""Exact linear algebra over the two-element field.

Vectors are plain Python ints used as bitmasks (bit ``i`` is coordinate
``i``).  Matrices are stored column-major as tuples of such masks; row
reduction runs on a bit-packed numpy mirror, which keeps desk-scale
eliminations (a few thousand rows and columns) fast.  Everything here is
exact: a "pass" from this module means equality in GF(2), never equality
up to tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np


class NotAComplexError(ValueError):
    """d_out composed with d_in is not zero."""


class NotACocycleError(ValueError):
    """class_of was applied to a vector that is not in the kernel."""


# ---------------------------------------------------------------------------
# bit packing helpers
# ---------------------------------------------------------------------------

def _pack(masks: Sequence[int], width: int) -> np.ndarray:
    """Pack int bitmasks into a (len(masks), words) uint64 array."""
    words = max(1, (width + 63) // 64)
    arr = np.zeros((len(masks), words), dtype=np.uint64)
    for i, m in enumerate(masks):
        if m:
            arr[i] = np.frombuffer(m.to_bytes(words * 8, "little"), dtype=np.uint64)
    return arr


def _unpack(arr: np.ndarray) -> list[int]:
    return [int.from_bytes(row.tobytes(), "little") for row in arr]


def _rref_masks(masks: Sequence[int], width: int,
                reverse: bool = False) -> tuple[list[int], list[int], list[int]]:
    """Reduced row echelon form of int-mask rows.

    Returns (reduced rows in original count, pivot columns, row order) where
    ``row order`` maps output row position to input row index (the elimination
    permutes rows so pivot rows come first).  With ``reverse`` the columns are
    scanned highest-first, which pivots each row on its highest set bit.
    """
    n = len(masks)
    if n == 0:
        return [], [], []
    work = _pack(masks, width)
    perm = list(range(n))
    r = 0
    pivots: list[int] = []
    column_order = range(width - 1, -1, -1) if reverse else range(width)
    for c in column_order:
        if r == n:
            break
        word, bit = divmod(c, 64)
        col = (work[r:, word] >> np.uint64(bit)) & np.uint64(1)
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            work[[r, p]] = work[[p, r]]
            perm[r], perm[p] = perm[p], perm[r]
        colall = (work[:, word] >> np.uint64(bit)) & np.uint64(1)
        colall[r] = 0
        hits = np.nonzero(colall)[0]
        if hits.size:
            work[hits] ^= work[r]
        pivots.append(c)
        r += 1
    return _unpack(work), pivots, perm


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BitMatrix:
    """Immutable GF(2) matrix; ``columns[j]`` is the bitmask of column j over row indices."""

    rows: int
    cols: int
    columns: tuple[int, ...]

    def __post_init__(self):
        if len(self.columns) != self.cols:
            raise ValueError("column count mismatch")

    @staticmethod
    def zeros(rows: int, cols: int) -> "BitMatrix":
        return BitMatrix(rows, cols, (0,) * cols)

    @staticmethod
    def identity(n: int) -> "BitMatrix":
        return BitMatrix(n, n, tuple(1 << i for i in range(n)))

    @staticmethod
    def from_entries(rows: int, cols: int, entries: Iterable[tuple[int, int]]) -> "BitMatrix":
        col = [0] * cols
        for i, j in entries:
            col[j] ^= 1 << i
        return BitMatrix(rows, cols, tuple(col))

    @staticmethod
    def from_rows(rows_as_masks: Sequence[int], cols: int) -> "BitMatrix":
        col = [0] * cols
        for i, m in enumerate(rows_as_masks):
            while m:
                j = (m & -m).bit_length() - 1
                col[j] ^= 1 << i
                m &= m - 1
        return BitMatrix(len(rows_as_masks), cols, tuple(col))

    def entry(self, i: int, j: int) -> int:
        return (self.columns[j] >> i) & 1

    def row_masks(self) -> list[int]:
        out = [0] * self.rows
        for j, c in enumerate(self.columns):
            while c:
                i = (c & -c).bit_length() - 1
                out[i] ^= 1 << j
                c &= c - 1
        return out

    def matvec(self, x: int) -> int:
        """Matrix times column vector (x over self.cols bits)."""
        acc = 0
        while x:
            j = (x & -x).bit_length() - 1
            acc ^= self.columns[j]
            x &= x - 1
        return acc

    def compose(self, other: "BitMatrix") -> "BitMatrix":
        """self @ other."""
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        return BitMatrix(self.rows, other.cols,
                         tuple(self.matvec(c) for c in other.columns))

    def transpose(self) -> "BitMatrix":
        return BitMatrix(self.cols, self.rows, tuple(self.row_masks()))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.columns)

    def dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for j, c in enumerate(self.columns):
            while c:
                i = (c & -c).bit_length() - 1
                out[i, j] = 1
                c &= c - 1
        return out


def rref(m: BitMatrix) -> tuple[BitMatrix, list[int]]:
    """Reduced row echelon form and ordered pivot columns; rank = len(pivots)."""
    reduced, pivots, _ = _rref_masks(m.row_masks(), m.cols)
    return BitMatrix.from_rows(reduced, m.cols), pivots


def rank(m: BitMatrix) -> int:
    return len(rref(m)[1])


# ---------------------------------------------------------------------------
# solving
# ---------------------------------------------------------------------------

class RrefSolver:
    """Factorized elimination of a fixed matrix, reusable across right-hand sides.

    Rows of [A | I] are reduced; the I part records which combination of original
    rows produced each reduced row, so consistency and canonical solutions for
    any b come out of cheap bit operations.
    """

    def __init__(self, a: BitMatrix):
        self.rows = a.rows
        self.cols = a.cols
        masks = a.row_masks()
        # augment with the identity on the right: bits cols..cols+rows-1
        aug = [m | (1 << (a.cols + i)) for i, m in enumerate(masks)]
        reduced, pivots, _ = _rref_masks(aug, a.cols + a.rows)
        self.pivots = [p for p in pivots if p < a.cols]
        lhs_mask = (1 << a.cols) - 1
        self.reduced_lhs = [r & lhs_mask for r in reduced]
        self.combos = [r >> a.cols for r in reduced]
        self.rank = len(self.pivots)

    def reduce_rhs(self, b: int) -> list[int]:
        """Per reduced row, the transformed right-hand-side bit."""
        return [(c & b).bit_count() & 1 for c in self.combos]

    def solve(self, b: int) -> int | None:
        """Canonical solution of A x = b (free variables zero), or None."""
        cb = self.reduce_rhs(b)
        x = 0
        for i in range(self.rows):
            if self.reduced_lhs[i] == 0:
                if cb[i]:
                    return None
            elif i < self.rank and cb[i]:
                x |= 1 << self.pivots[i]
        return x

    def infeasibility_witness(self, b: int) -> int | None:
        """Bitmask over original row indices whose XOR gives 0 = 1, or None if consistent."""
        for i in range(self.rows):
            if self.reduced_lhs[i] == 0 and (self.combos[i] & b).bit_count() & 1:
                return self.combos[i]
        return None

    def in_span_of_columns(self, b: int) -> bool:
        return self.infeasibility_witness(b) is None


def solve_affine(a: BitMatrix, b: int) -> int | None:
    """Canonical solution x of a·x = b, free variables of the RREF set to zero."""
    if b >> a.rows:
        raise ValueError("right-hand side has more bits than matrix rows")
    return RrefSolver(a).solve(b)


def solve_rows(row_masks: Sequence[int], ncols: int, b: int) -> int | None:
    """Canonical solution of the system given as rows, single right-hand side.

    Cheaper than RrefSolver for one-shot solves: only [A | b] is reduced,
    no row-combination bookkeeping is kept.
    """
    aug = [(m | (((b >> i) & 1) << ncols)) for i, m in enumerate(row_masks)]
    reduced, pivots, _ = _rref_masks(aug, ncols + 1)
    x = 0
    for i, p in enumerate(pivots):
        if p == ncols:
            return None  # a pivot in the b column: inconsistent
        if (reduced[i] >> ncols) & 1:
            x |= 1 << p
    return x


def kernel_basis(a: BitMatrix) -> list[int]:
    """Basis of ker(a) as column-bit masks; size = cols - rank."""
    reduced, pivots, _ = _rref_masks(a.row_masks(), a.cols)
    pivot_set = set(pivots)
    basis = []
    for f in range(a.cols):
        if f in pivot_set:
            continue
        v = 1 << f
        for i, p in enumerate(pivots):
            if (reduced[i] >> f) & 1:
                v |= 1 << p
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# homology of a two-step complex
# ---------------------------------------------------------------------------

@dataclass
class HomologyData:
    """Kernel-mod-image data for one graded piece of a complex."""

    dim: int
    class_count: int
    representatives: list[int]          # canonical cocycle per class, echelon form
    image_rank: int
    kernel_dim: int
    _d_out: BitMatrix
    _coord_solver: RrefSolver

    def class_of(self, v: int) -> int:
        """Coordinates of the class of cocycle v in the representative basis."""
        if self._d_out.matvec(v):
            raise NotACocycleError("vector is not a cocycle")
        x = self._coord_solver.solve(v)
        if x is None:  # kernel vectors always lie in span(reps) + image
            raise AssertionError("cocycle outside kernel span")
        return x & ((1 << self.class_count) - 1)

    def representative_of(self, coords: int) -> int:
        v = 0
        c = coords
        while c:
            i = (c & -c).bit_length() - 1
            v ^= self.representatives[i]
            c &= c - 1
        return v

    def is_boundary(self, v: int) -> bool:
        return self.class_of(v) == 0


def homology_of_pair(d_in: BitMatrix | None, d_out: BitMatrix | None,
                     dim: int | None = None) -> HomologyData:
    """Homology ker(d_out)/im(d_in) with canonical representatives.

    ``d_in`` maps into the graded piece, ``d_out`` maps out of it; pass None
    for a zero map.  Representatives are the kernel-basis vectors not in the
    image, reduced against the image and put in echelon form, so that
    class_of(representative_of(c)) == c exactly.
    """
    if dim is None:
        if d_out is not None:
            dim = d_out.cols
        elif d_in is not None:
            dim = d_in.rows
        else:
            raise ValueError("dimension undetermined")
    if d_out is None:
        d_out = BitMatrix.zeros(0, dim)
    if d_in is None:
        d_in = BitMatrix.zeros(dim, 0)
    if d_out.cols != dim or d_in.rows != dim:
        raise ValueError("dimension mismatch")
    for c in d_in.columns:
        if d_out.matvec(c):
            raise NotAComplexError("d_out∘d_in != 0: not a complex")

    kernel = kernel_basis(d_out)
    # Echelonize the image pivoting on highest coordinates: reducing a kernel
    # vector then clears its image-pivot coordinates from the top down, which
    # fixes the representative of e.g. im=[(1,1)] in GF(2)^2 to be (1,0).
    image_rref, image_pivots, _ = _rref_masks(list(d_in.columns), dim, reverse=True)
    image_basis = [r for r in image_rref if r]
    image_rank = len(image_basis)

    # reduce kernel vectors against the image, then canonicalize
    reduced = []
    for v in kernel:
        for i, p in enumerate(image_pivots):
            if (v >> p) & 1:
                v ^= image_rref[i]
        if v:
            reduced.append(v)
    rep_rref, _, _ = _rref_masks(reduced, dim, reverse=True)
    reps = sorted((r for r in rep_rref if r), key=int.bit_length)
    if len(reps) != len(kernel) - image_rank:
        raise AssertionError("homology dimension bookkeeping failed")

    coord_matrix = BitMatrix(dim, len(reps) + image_rank,
                             tuple(reps) + tuple(image_basis))
    return HomologyData(
        dim=dim,
        class_count=len(reps),
        representatives=reps,
        image_rank=image_rank,
        kernel_dim=len(kernel),
        _d_out=d_out,
        _coord_solver=RrefSolver(coord_matrix),
    )
