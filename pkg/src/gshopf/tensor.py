"""Graded bases, GF(2) elements of tensor powers, and sparse multilinear maps.

Coefficients live in GF(2), so an element is just a set of basis tuples
(presence = 1) and addition is symmetric difference.  All the sign
bookkeeping of the graded world disappears; what remains is exact
combinatorics.  Every multilinear map is homogeneous of a fixed internal
degree p (output degree = input degree + p) and carries a *window*: the
largest total input degree on which its table is trusted.  Applying a map
beyond its window raises ``WindowViolation`` instead of silently returning
zero, which keeps every downstream "pass" sound.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .gf2 import BitMatrix


class WindowViolation(Exception):
    """A computation stepped beyond the degree range where tables are exact."""


class SpaceMismatch(ValueError):
    """Operands live over different bases or arities."""


# ---------------------------------------------------------------------------
# graded bases and tensor spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradedBasis:
    """Ordered basis with integer degrees, truncated at ``cap``.

    The ordering is fixed at construction; it indexes matrix rows/columns
    everywhere downstream, so reports and canonical solutions are
    byte-reproducible.
    """

    names: tuple[str, ...]
    degrees: tuple[int, ...]
    cap: int

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise ValueError("names/degrees length mismatch")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate basis names")
        for n, d in zip(self.names, self.degrees):
            if d > self.cap:
                raise ValueError(f"basis element {n!r} of degree {d} exceeds cap {self.cap}")

    @functools.cached_property
    def index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}

    @functools.cached_property
    def degree_of(self) -> dict[str, int]:
        return dict(zip(self.names, self.degrees))

    def __len__(self) -> int:
        return len(self.names)

    def tuple_degree(self, t: tuple[str, ...]) -> int:
        d = self.degree_of
        return sum(d[x] for x in t)

    def tuples(self, arity: int, degree: int) -> tuple[tuple[str, ...], ...]:
        """All arity-tuples of exact total degree, lexicographic in basis order."""
        return _tuples_cached(self, arity, degree)

    def tuples_upto(self, arity: int, max_degree: int) -> Iterator[tuple[str, ...]]:
        for d in range(max_degree + 1):
            yield from self.tuples(arity, d)

    def tuple_index(self, arity: int, degree: int) -> dict[tuple[str, ...], int]:
        return _tuple_index_cached(self, arity, degree)


@functools.lru_cache(maxsize=None)
def _tuples_cached(basis: GradedBasis, arity: int, degree: int) -> tuple[tuple[str, ...], ...]:
    if degree < 0:
        return ()
    if arity == 0:
        return ((),) if degree == 0 else ()
    out = []
    for name, d in zip(basis.names, basis.degrees):
        if d <= degree:
            out.extend((name,) + rest for rest in _tuples_cached(basis, arity - 1, degree - d))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def _tuple_index_cached(basis: GradedBasis, arity: int, degree: int):
    return {t: i for i, t in enumerate(_tuples_cached(basis, arity, degree))}


@dataclass(frozen=True)
class TensorSpace:
    basis: GradedBasis
    arity: int

    def __post_init__(self):
        if self.arity < 0:
            raise ValueError("negative arity")


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Element:
    """Finite GF(2)-linear combination of basis tuples of a tensor power.

    Construction through ``make`` validates names and arities; the raw
    constructor is used on hot paths where terms are already known-good.
    """

    space: TensorSpace
    terms: frozenset[tuple[str, ...]]

    @staticmethod
    def zero(space: TensorSpace) -> "Element":
        return Element(space, frozenset())

    @staticmethod
    def make(space: TensorSpace, terms: Iterable[tuple[str, ...]]) -> "Element":
        acc: set[tuple[str, ...]] = set()
        idx = space.basis.index
        for t in terms:
            t = tuple(t)
            if len(t) != space.arity:
                raise SpaceMismatch(f"term {t} has arity {len(t)}, expected {space.arity}")
            for x in t:
                if x not in idx:
                    raise SpaceMismatch(f"unknown basis name {x!r}")
            acc.symmetric_difference_update({t})
        return Element(space, frozenset(acc))

    @staticmethod
    def scalar_one(basis: GradedBasis) -> "Element":
        return Element(TensorSpace(basis, 0), frozenset({()}))

    def __add__(self, other: "Element") -> "Element":
        if self.space != other.space:
            raise SpaceMismatch("cannot add elements of different spaces")
        return Element(self.space, self.terms ^ other.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def term_degrees(self) -> set[int]:
        return {self.space.basis.tuple_degree(t) for t in self.terms}

    def homogeneous_degree(self) -> int | None:
        """Degree if homogeneous (zero counts, returning None)."""
        degs = self.term_degrees()
        if len(degs) == 1:
            return degs.pop()
        return None

    def graded_piece(self, degree: int) -> "Element":
        b = self.space.basis
        return Element(self.space, frozenset(t for t in self.terms
                                             if b.tuple_degree(t) == degree))

    def sorted_terms(self) -> list[tuple[str, ...]]:
        idx = self.space.basis.index
        return sorted(self.terms, key=lambda t: tuple(idx[x] for x in t))

    def render(self) -> str:
        """`a*b + c*d` form; arity-0 scalar renders as `1`, zero as `0`."""
        if not self.terms:
            return "0"
        parts = []
        for t in self.sorted_terms():
            parts.append("*".join(t) if t else "1")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.render()


def tensor(e1: Element, e2: Element) -> Element:
    """Tensor product; arities add, duplicate tuples cancel mod 2."""
    if e1.space.basis != e2.space.basis:
        raise SpaceMismatch("tensor of elements over different bases")
    space = TensorSpace(e1.space.basis, e1.space.arity + e2.space.arity)
    acc: set[tuple[str, ...]] = set()
    for t1 in e1.terms:
        for t2 in e2.terms:
            acc.symmetric_difference_update({t1 + t2})
    return Element(space, frozenset(acc))


def sigma_permute(m: int, n: int, e: Element) -> Element:
    """Block transpose (A^m)^n -> (A^n)^m; no signs over GF(2).

    The input tuple is read as n blocks of length m; output slot (i, j) of
    the m-by-n grid is input slot (j, i).
    """
    if e.space.arity != m * n:
        raise SpaceMismatch(f"sigma_{m},{n} needs arity {m*n}, got {e.space.arity}")
    acc: set[tuple[str, ...]] = set()
    for t in e.terms:
        out = tuple(t[j * m + i] for i in range(m) for j in range(n))
        acc.symmetric_difference_update({out})
    return Element(e.space, frozenset(acc))


# ---------------------------------------------------------------------------
# multilinear maps
# ---------------------------------------------------------------------------

def _min_window(*ws: int | None) -> int | None:
    vals = [w for w in ws if w is not None]
    return min(vals) if vals else None


@dataclass
class MultiMap:
    """Homogeneous multilinear map, stored as a sparse table on basis tuples.

    Tuples absent from the table map to zero — but only inside the window;
    beyond it the map is undefined and ``apply`` raises.
    """

    in_space: TensorSpace
    out_space: TensorSpace
    p: int
    table: dict[tuple[str, ...], Element]
    window: int | None = None

    def __post_init__(self):
        if self.in_space.arity < 1 or self.out_space.arity < 1:
            raise ValueError("multimap arities must be >= 1")
        self.table = {t: v for t, v in self.table.items() if not v.is_zero()}
        ib = self.in_space.basis
        for t, v in self.table.items():
            if len(t) != self.in_space.arity:
                raise SpaceMismatch(f"table key {t} has wrong arity")
            if v.space != self.out_space:
                raise SpaceMismatch("table value lives in the wrong space")
            din = ib.tuple_degree(t)
            for deg in v.term_degrees():
                if deg != din + self.p:
                    raise SpaceMismatch(
                        f"inhomogeneous entry at {t}: output degree {deg} != {din} + {self.p}")
            if self.window is not None and din > self.window:
                raise WindowViolation(f"table entry at {t} beyond window {self.window}")

    @property
    def m(self) -> int:
        return self.in_space.arity

    @property
    def n(self) -> int:
        return self.out_space.arity

    def _check_window(self, degree: int):
        if self.window is not None and degree > self.window:
            raise WindowViolation(
                f"map applied at input degree {degree}, window is {self.window}")

    def value(self, t: tuple[str, ...]) -> Element:
        self._check_window(self.in_space.basis.tuple_degree(t))
        return self.table.get(t, Element.zero(self.out_space))

    def apply(self, e: Element) -> Element:
        """Linear extension of the table."""
        if e.space != self.in_space:
            raise SpaceMismatch("apply: element space mismatch")
        acc = Element.zero(self.out_space)
        for t in e.terms:
            acc = acc + self.value(t)
        return acc

    def __add__(self, other: "MultiMap") -> "MultiMap":
        if (self.in_space, self.out_space, self.p) != (other.in_space, other.out_space, other.p):
            raise SpaceMismatch("cannot add maps of different shapes")
        w = _min_window(self.window, other.window)
        keys = set(self.table) | set(other.table)
        table = {}
        for t in keys:
            if w is not None and self.in_space.basis.tuple_degree(t) > w:
                continue
            v = self.table.get(t, Element.zero(self.out_space)) + \
                other.table.get(t, Element.zero(self.out_space))
            if not v.is_zero():
                table[t] = v
        return MultiMap(self.in_space, self.out_space, self.p, table, w)

    def is_zero_within(self, window: int) -> bool:
        self._check_window(window)
        b = self.in_space.basis
        return all(v.is_zero() or b.tuple_degree(t) > window for t, v in self.table.items())

    def equal_within(self, other: "MultiMap", window: int) -> bool:
        return (self + other).is_zero_within(window)

    def support(self) -> list[tuple[str, ...]]:
        idx = self.in_space.basis.index
        return sorted(self.table, key=lambda t: tuple(idx[x] for x in t))


def zero_map(in_space: TensorSpace, out_space: TensorSpace, p: int,
             window: int | None = None) -> MultiMap:
    return MultiMap(in_space, out_space, p, {}, window)


def identity_map(basis: GradedBasis) -> MultiMap:
    sp = TensorSpace(basis, 1)
    table = {(n,): Element(sp, frozenset({(n,)})) for n in basis.names}
    return MultiMap(sp, sp, 0, table, None)


def compose(f: MultiMap, g: MultiMap) -> MultiMap:
    """f after g; internal degrees add.

    Built sparsely from g's table: tuples outside it map to zero, so the
    composite's support is contained in g's.  The composite inherits g's
    window; where f cannot evaluate a value (beyond f's own window) the
    composite's window shrinks below that input degree rather than erroring
    here — callers checking a specific window get a loud failure then.
    """
    if g.out_space != f.in_space:
        raise SpaceMismatch("compose: inner spaces disagree")
    w = g.window
    b = g.in_space.basis
    entries = sorted(g.table.items(), key=lambda kv: b.tuple_degree(kv[0]))
    table = {}
    for t, v in entries:
        deg = b.tuple_degree(t)
        if w is not None and deg > w:
            break
        try:
            fv = f.apply(v)
        except WindowViolation:
            w = deg - 1
            table = {tt: vv for tt, vv in table.items() if b.tuple_degree(tt) <= w}
            break
        if not fv.is_zero():
            table[t] = fv
    return MultiMap(g.in_space, f.out_space, f.p + g.p, table, w)


def hom_tensor(f: MultiMap, g: MultiMap) -> MultiMap:
    """(f tensor g)(x tensor y) = f(x) tensor g(y); arities and degrees add."""
    if f.in_space.basis != g.in_space.basis or f.out_space.basis != g.out_space.basis:
        raise SpaceMismatch("hom_tensor: bases disagree")
    in_space = TensorSpace(f.in_space.basis, f.m + g.m)
    out_space = TensorSpace(f.out_space.basis, f.n + g.n)
    w = _min_window(f.window, g.window)
    b = f.in_space.basis
    table: dict[tuple[str, ...], Element] = {}
    for t1, v1 in f.table.items():
        for t2, v2 in g.table.items():
            t = t1 + t2
            if w is not None and b.tuple_degree(t) > w:
                continue
            prod = tensor(v1, v2)
            if t in table:
                prod = table[t] + prod
                if prod.is_zero():
                    del table[t]
                    continue
            table[t] = prod
    return MultiMap(in_space, out_space, f.p + g.p, table, w)


def sigma_map(basis: GradedBasis, m: int, n: int, window: int | None = None) -> MultiMap:
    """The block-transpose permutation as a MultiMap of arity m*n."""
    sp = TensorSpace(basis, m * n)
    table = {}
    w = window if window is not None else basis.cap
    for t in basis.tuples_upto(m * n, w):
        out = sigma_permute(m, n, Element(sp, frozenset({t})))
        table[t] = out
    return MultiMap(sp, sp, 0, table, window)


def as_matrix(f: MultiMap, input_degree: int) -> BitMatrix:
    """Matrix of f on the graded piece of the given total input degree.

    Columns are indexed by input tuples, rows by output tuples, both in the
    fixed lexicographic tuple order.
    """
    f._check_window(input_degree)
    in_tuples = f.in_space.basis.tuples(f.m, input_degree)
    out_index = f.out_space.basis.tuple_index(f.n, input_degree + f.p)
    cols = []
    for t in in_tuples:
        v = f.table.get(t)
        mask = 0
        if v is not None:
            for term in v.terms:
                mask |= 1 << out_index[term]
        cols.append(mask)
    return BitMatrix(len(out_index), len(in_tuples), tuple(cols))


def element_to_mask(e: Element, degree: int) -> int:
    """Coordinates of the degree-graded piece of e as a bitmask."""
    idx = e.space.basis.tuple_index(e.space.arity, degree)
    b = e.space.basis
    mask = 0
    for t in e.terms:
        if b.tuple_degree(t) == degree:
            mask |= 1 << idx[t]
    return mask


def mask_to_element(space: TensorSpace, degree: int, mask: int) -> Element:
    tuples = space.basis.tuples(space.arity, degree)
    acc = set()
    while mask:
        i = (mask & -mask).bit_length() - 1
        acc.add(tuples[i])
        mask &= mask - 1
    return Element(space, frozenset(acc))
