"""Bar construction of a 1-connected DGA, with homotopy-Gerstenhaber perturbation.

Words ``[x1|...|xk]`` carry bar degree ``sum(|x_i| - 1)``; 1-connectedness
(every non-unit generator of degree >= 2) makes each graded piece finite.
The standard differential contracts adjacent letters through the product
(plus the internal differential); the cofree coproduct deconcatenates; the
shuffle product interleaves.  When the underlying algebra carries
operations E_{1,q} the product is perturbed: an interleaving may fuse one
left letter with a consecutive run of q right letters into the single
letter E_{1,q}(x; y_1..y_q).  With all E zero this is exactly the shuffle.

Homology is computed degreewise by exact GF(2) elimination, with canonical
echelon representatives.  Because coefficients form a field, the homology
of a tensor power of the bar complex has a basis of tensor products of
class representatives; ``TensorHomology`` exposes class coordinates in
that basis, which is what the structure transfer needs.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

from . import gf2
from .gf2 import BitMatrix, RrefSolver
from .presentation import AlgebraPresentation, PresentationError
from .reporting import Report
from .tensor import (
    Element,
    GradedBasis,
    MultiMap,
    SpaceMismatch,
    TensorSpace,
    WindowViolation,
    element_to_mask,
    mask_to_element,
    tensor,
)


class NotOneConnectedError(ValueError):
    """A non-unit generator of degree <= 1 makes bar-degree pieces infinite."""


def word_name(letters: tuple[str, ...]) -> str:
    return "[" + "|".join(letters) + "]"


def parse_word_name(name: str) -> tuple[str, ...]:
    if not (name.startswith("[") and name.endswith("]")):
        raise ValueError(f"not a bar word: {name!r}")
    inner = name[1:-1]
    return tuple(inner.split("|")) if inner else ()


# ---------------------------------------------------------------------------
# the bar complex
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class BarComplex:
    """Words of bar degree <= cap over a DGA, with d, the cofree coproduct,
    and the (possibly perturbed) product as windowed MultiMaps."""

    algebra: AlgebraPresentation
    cap: int
    words: list[list[tuple[str, ...]]]            # words[deg], length-then-lex order
    basis: GradedBasis                            # word names, ordered by (deg, len, lex)
    d: MultiMap                                   # (1,1,+1), window cap-1
    delta: MultiMap                               # (1,2,0), deconcatenation
    mu: MultiMap                                  # (2,1,0), perturbed product
    sh: MultiMap                                  # (2,1,0), plain shuffle

    @property
    def space1(self) -> TensorSpace:
        return TensorSpace(self.basis, 1)

    def letter_weight(self, letter: str) -> int:
        return self.algebra.basis.degree_of[letter] - 1

    def word_degree(self, letters: tuple[str, ...]) -> int:
        return sum(self.letter_weight(x) for x in letters)

    def el(self, *words) -> Element:
        """Element of the bar complex from letter tuples or rendered names."""
        terms = []
        for w in words:
            letters = parse_word_name(w) if isinstance(w, str) and w.startswith("[") \
                else tuple(w)
            terms.append((word_name(letters),))
        return Element.make(self.space1, terms)

    def el_tensor(self, *word_tuples) -> Element:
        """Element of (bar)^n from n-tuples of word names."""
        arity = len(word_tuples[0])
        return Element.make(TensorSpace(self.basis, arity), list(word_tuples))

    @functools.cache
    def tensor_homology(self, n: int) -> "TensorHomology":
        return TensorHomology(self, n)


def _letters(algebra: AlgebraPresentation) -> list[str]:
    out = []
    for nm, deg in zip(algebra.basis.names, algebra.basis.degrees):
        if nm == algebra.unit:
            continue
        if deg <= 1:
            raise NotOneConnectedError(
                f"generator {nm!r} has degree {deg}; bar construction needs degree >= 2")
        out.append(nm)
    return out


def _enumerate_words(algebra: AlgebraPresentation, cap: int) -> list[list[tuple[str, ...]]]:
    letters = _letters(algebra)
    weights = {nm: algebra.basis.degree_of[nm] - 1 for nm in letters}
    by_degree: list[list[tuple[str, ...]]] = [[] for _ in range(cap + 1)]
    by_degree[0].append(())

    def extend(prefix: tuple[str, ...], deg: int):
        for nm in letters:
            d2 = deg + weights[nm]
            if d2 <= cap:
                w = prefix + (nm,)
                by_degree[d2].append(w)
                extend(w, d2)

    extend((), 0)
    order = {nm: i for i, nm in enumerate(algebra.basis.names)}
    for deg in range(cap + 1):
        by_degree[deg].sort(key=lambda w: (len(w), tuple(order[x] for x in w)))
    return by_degree


def bar_differential_letters(algebra: AlgebraPresentation, letters: tuple[str, ...],
                             out_space: TensorSpace) -> Element:
    """Standard bar differential of one word, with unit-collapse on products."""
    unit = algebra.unit
    terms: set[tuple[str, ...]] = set()
    # internal differential on each letter
    for i, x in enumerate(letters):
        for (sub,) in algebra.d.value((x,)).terms:
            w = letters[:i] + ((sub,) if sub != unit else ()) + letters[i + 1:]
            terms.symmetric_difference_update({(word_name(w),)})
    # adjacent products
    for i in range(len(letters) - 1):
        prod = algebra.mu.value((letters[i], letters[i + 1]))
        for (sub,) in prod.terms:
            w = letters[:i] + ((sub,) if sub != unit else ()) + letters[i + 2:]
            terms.symmetric_difference_update({(word_name(w),)})
    return Element(out_space, frozenset(terms))


def cofree_coproduct_letters(letters: tuple[str, ...], out_space: TensorSpace) -> Element:
    terms = set()
    for i in range(len(letters) + 1):
        terms.symmetric_difference_update(
            {(word_name(letters[:i]), word_name(letters[i:]))})
    return Element(out_space, frozenset(terms))


def perturbed_product_letters(algebra: AlgebraPresentation,
                              w1: tuple[str, ...], w2: tuple[str, ...],
                              out_space: TensorSpace,
                              use_E: bool = True) -> Element:
    """Sum over grouped interleavings of w1 and w2.

    Each block of the output is a single w1-letter, a single w2-letter, or
    (when E_{1,q} is present) the fusion of one w1-letter with a consecutive
    run of q w2-letters.  With no E this enumerates exactly the shuffles;
    identical interleavings cancel mod 2.
    """
    unit = algebra.unit
    E = algebra.E if use_E else {}
    acc: set[tuple[str, ...]] = set()

    def rec(i: int, j: int, prefix: tuple[str, ...]):
        if i == len(w1) and j == len(w2):
            acc.symmetric_difference_update({prefix})
            return
        if i < len(w1):
            rec(i + 1, j, prefix + (w1[i],))
        if j < len(w2):
            rec(i, j + 1, prefix + (w2[j],))
        if i < len(w1):
            for q, emap in E.items():
                if j + q > len(w2):
                    continue
                val = emap.value((w1[i],) + w2[j:j + q])
                for (sub,) in val.terms:
                    rec(i + 1, j + q, prefix + ((sub,) if sub != unit else ()))

    rec(0, 0, ())
    return Element(out_space, frozenset((word_name(w),) for w in acc))


def bar_basis(algebra: AlgebraPresentation, cap: int) -> BarComplex:
    """Assemble the bar complex of a 1-connected DGA, truncated at bar degree cap."""
    words = _enumerate_words(algebra, cap)
    names, degrees = [], []
    for deg in range(cap + 1):
        for w in words[deg]:
            names.append(word_name(w))
            degrees.append(deg)
    basis = GradedBasis(tuple(names), tuple(degrees), cap)
    sp1 = TensorSpace(basis, 1)
    sp2 = TensorSpace(basis, 2)

    d_table, delta_table = {}, {}
    for deg in range(cap + 1):
        for w in words[deg]:
            key = (word_name(w),)
            if deg < cap:
                v = bar_differential_letters(algebra, w, sp1)
                if not v.is_zero():
                    d_table[key] = v
            dv = cofree_coproduct_letters(w, sp2)
            delta_table[key] = dv

    mu_table, sh_table = {}, {}
    for d1 in range(cap + 1):
        for d2 in range(cap + 1 - d1):
            for w1 in words[d1]:
                for w2 in words[d2]:
                    key = (word_name(w1), word_name(w2))
                    v = perturbed_product_letters(algebra, w1, w2, sp1)
                    if not v.is_zero():
                        mu_table[key] = v
                    if algebra.E:
                        s = perturbed_product_letters(algebra, w1, w2, sp1, use_E=False)
                    else:
                        s = v
                    if not s.is_zero():
                        sh_table[key] = s

    d_is_zero = not d_table
    return BarComplex(
        algebra=algebra,
        cap=cap,
        words=words,
        basis=basis,
        d=MultiMap(sp1, sp1, 1, d_table, window=None if d_is_zero else cap - 1),
        delta=MultiMap(sp1, sp2, 0, delta_table, window=cap),
        mu=MultiMap(sp2, sp1, 0, mu_table, window=cap),
        sh=MultiMap(sp2, sp1, 0, sh_table, window=cap),
    )


def bar_presentation(bc: BarComplex, name: str = "") -> AlgebraPresentation:
    """The bar complex as a DGHA presentation (words as basis elements)."""
    return AlgebraPresentation(
        basis=bc.basis, unit=word_name(()), d=bc.d, mu=bc.mu, delta=bc.delta,
        E={}, name=name or f"bar({bc.algebra.name})")


# ---------------------------------------------------------------------------
# the direct coproduct-iteration form of the perturbed product (oracle)
# ---------------------------------------------------------------------------

def perturbed_product_by_iteration(algebra: AlgebraPresentation,
                                   w1: tuple[str, ...], w2: tuple[str, ...],
                                   use_E: bool = True) -> frozenset[tuple[str, ...]]:
    """Expand sum_k (blocks)^{ox k} of the k-fold deconcatenation-transpose.

    Independent of the grouped-interleaving enumeration: pairs of words are
    split by the iterated coproduct of the pair coalgebra, each piece is fed
    to the block rule (pass a single letter through when the other side is
    empty, fuse via E_{1,q} otherwise), and the outputs are concatenated.
    """
    unit = algebra.unit
    E = algebra.E if use_E else {}

    def splittings(u: tuple[str, ...], k: int):
        # ordered k-compositions into possibly-empty segments
        if k == 1:
            yield (u,)
            return
        for i in range(len(u) + 1):
            for rest in splittings(u[i:], k - 1):
                yield (u[:i],) + rest

    def block_values(piece_u: tuple[str, ...], piece_v: tuple[str, ...]):
        out = []
        if len(piece_u) == 0 and len(piece_v) == 1:
            out.append(piece_v)
        if len(piece_v) == 0 and len(piece_u) == 1:
            out.append(piece_u)
        if len(piece_u) == 1 and len(piece_v) >= 1:
            emap = E.get(len(piece_v))
            if emap is not None:
                val = emap.value((piece_u[0],) + piece_v)
                for (sub,) in val.terms:
                    out.append((sub,) if sub != unit else ())
        return out

    acc: set[tuple[str, ...]] = set()
    if not w1 and not w2:
        # unit law: the empty block sequence is the only contribution
        return frozenset({()})
    for k in range(1, len(w1) + len(w2) + 1):
        for parts_u in splittings(w1, k):
            for parts_v in splittings(w2, k):
                # expand the product of block values multilinearly
                partials = [()]
                dead = False
                for pu, pv in zip(parts_u, parts_v):
                    vals = block_values(pu, pv)
                    if not vals:
                        dead = True
                        break
                    partials = [p + v for p in partials for v in vals]
                if dead:
                    continue
                for w in partials:
                    acc.symmetric_difference_update({w})
    return frozenset(acc)


# ---------------------------------------------------------------------------
# HGA relation checks
# ---------------------------------------------------------------------------

def _e_value(algebra: AlgebraPresentation, q: int, a: str, bs: tuple[str, ...]) -> Element:
    """E_{1,q}(a; b_1..b_q) with the conventions E_{1,0} = identity."""
    sp = algebra.space1
    if q == 0:
        return Element.make(sp, [(a,)])
    emap = algebra.E.get(q)
    if emap is None:
        return Element.zero(sp)
    return emap.value((a,) + bs)


def _e_value_lin(algebra: AlgebraPresentation, q: int, a_el: Element,
                 bs_els: tuple[Element, ...]) -> Element:
    """Multilinear extension of E_{1,q} in every slot."""
    acc = Element.zero(algebra.space1)
    for (a,) in a_el.terms:
        for combo in itertools.product(*[e.terms for e in bs_els]):
            acc = acc + _e_value(algebra, q, a, tuple(c[0] for c in combo))
    return acc


def hga_relations_check(algebra: AlgebraPresentation, window: int) -> Report:
    """Check the three structure relations of the E family on basis tuples.

    Relation one ties d and E_{1,q} to E_{1,q-1} (at q = 1 it says the
    cup-one-style operation cobounds the commutator); relation two says
    E_{1,q} is a derivation of the product on the left slot up to the lower
    E's; relation three composes E's.  Checked for every q with E_{1,q} or
    E_{1,q-1} nonzero, q = 1 always included, on all tuples within window.
    """
    rep = Report(f"HGA relations for {algebra.name or 'algebra'} (window {window})")
    b = algebra.basis
    sp = algebra.space1
    mu, d = algebra.mu, algebra.d
    nonunit = [nm for nm in b.names if nm != algebra.unit]
    qs = sorted({1} | set(algebra.E) | {q + 1 for q in algebra.E})
    d_shift = 0 if algebra.d_is_zero() else 1

    def mu_el(x: Element, y: Element) -> Element:
        acc = Element.zero(sp)
        for (a,) in x.terms:
            for (c,) in y.terms:
                acc = acc + mu.value((a, c))
        return acc

    def single(nm: str) -> Element:
        return Element.make(sp, [(nm,)])

    # relation one
    for q in qs:
        ok, witness = True, ""
        for t in b.tuples_upto(1 + q, window - d_shift):
            if any(x == algebra.unit for x in t):
                continue
            a, bs = t[0], t[1:]
            lhs = d.apply(_e_value(algebra, q, a, bs)) \
                + _e_value_lin(algebra, q, d.value((a,)), tuple(single(x) for x in bs))
            for i in range(q):
                args = tuple(single(x) for x in bs[:i]) + (d.value((bs[i],)),) \
                    + tuple(single(x) for x in bs[i + 1:])
                lhs = lhs + _e_value_lin(algebra, q, single(a), args)
            rhs = mu_el(single(bs[0]), _e_value(algebra, q - 1, a, bs[1:])) \
                + mu_el(_e_value(algebra, q - 1, a, bs[:-1]), single(bs[-1]))
            for i in range(q - 1):
                fused = mu.value((bs[i], bs[i + 1]))
                args = tuple(single(x) for x in bs[:i]) + (fused,) \
                    + tuple(single(x) for x in bs[i + 2:])
                rhs = rhs + _e_value_lin(algebra, q - 1, single(a), args)
            if lhs != rhs:
                ok, witness = False, f"q={q} at ({', '.join(t)})"
                break
        rep.add(f"relation_one_q{q}", ok, witness)

    # relation two
    for q in qs:
        ok, witness = True, ""
        for t in b.tuples_upto(2 + q, window):
            if any(x == algebra.unit for x in t):
                continue
            a1, a2, bs = t[0], t[1], t[2:]
            lhs = _e_value_lin(algebra, q, mu.value((a1, a2)),
                               tuple(single(x) for x in bs))
            rhs = mu_el(single(a1), _e_value(algebra, q, a2, bs)) \
                + mu_el(_e_value(algebra, q, a1, bs), single(a2))
            for p in range(1, q):
                rhs = rhs + mu_el(_e_value(algebra, p, a1, bs[:p]),
                                  _e_value(algebra, q - p, a2, bs[p:]))
            if lhs != rhs:
                ok, witness = False, f"q={q} at ({', '.join(t)})"
                break
        rep.add(f"relation_two_q{q}", ok, witness)

    # relation three, for small inner/outer arities
    max_q = max(algebra.E, default=0)
    mn_range = range(1, max(2, max_q + 1) + 1)
    for m in mn_range:
        for n in mn_range:
            ok, witness = True, ""
            for t in b.tuples_upto(1 + m + n, window):
                if any(x == algebra.unit for x in t):
                    continue
                a, bs, cs = t[0], t[1:1 + m], t[1 + m:]
                lhs = _e_value_lin(algebra, n, _e_value(algebra, m, a, bs),
                                   tuple(single(x) for x in cs))
                rhs = Element.zero(sp)
                for ij in _index_ladders(m, n):
                    args: list[Element] = []
                    pos = 0
                    for s in range(m):
                        i_s, j_s = ij[s]
                        args += [single(x) for x in cs[pos:i_s]]
                        args.append(_e_value(algebra, j_s - i_s, bs[s],
                                             cs[i_s:j_s]))
                        pos = j_s
                    args += [single(x) for x in cs[pos:]]
                    rhs = rhs + _e_value_lin(algebra, len(args), single(a), tuple(args))
                if lhs != rhs:
                    ok, witness = False, f"(m,n)=({m},{n}) at ({', '.join(t)})"
                    break
            rep.add(f"relation_three_m{m}_n{n}", ok, witness)
    return rep


def _index_ladders(m: int, n: int):
    """All 0 <= i_1 <= j_1 <= ... <= i_m <= j_m <= n as ((i_1,j_1),...)."""
    def rec(s: int, lo: int):
        if s == m:
            yield ()
            return
        for i in range(lo, n + 1):
            for j in range(i, n + 1):
                for rest in rec(s + 1, j):
                    yield ((i, j),) + rest
    return rec(0, 0)


# ---------------------------------------------------------------------------
# homology of tensor powers
# ---------------------------------------------------------------------------

class TensorHomology:
    """Homology of (bar)^{ox n} with the componentwise differential, per degree.

    Valid for degrees <= cap - 1 (the outgoing differential at the cap has
    no codomain).  Once a homology basis for the n = 1 case is installed,
    ``install_kunneth`` exposes class coordinates in the basis of tensor
    products of representatives.
    """

    def __init__(self, bc: BarComplex, n: int):
        self.bc = bc
        self.n = n
        self.space = TensorSpace(bc.basis, n)
        self.max_degree = bc.cap - 1
        self._homology: dict[int, gf2.HomologyData] = {}
        self._d_solvers: dict[int, RrefSolver] = {}
        self._kunneth: dict[int, tuple[list[tuple[str, ...]], RrefSolver]] = {}
        self._g: MultiMap | None = None

    def _check_degree(self, degree: int):
        if degree < 0 or degree > self.max_degree:
            raise WindowViolation(
                f"homology of degree {degree} not available at cap {self.bc.cap}")

    def tuples(self, degree: int) -> tuple[tuple[str, ...], ...]:
        return self.bc.basis.tuples(self.n, degree)

    def d_matrix(self, degree: int) -> BitMatrix:
        """Matrix of the componentwise differential from degree to degree+1."""
        src = self.tuples(degree)
        tgt_index = self.bc.basis.tuple_index(self.n, degree + 1)
        cols = []
        for t in src:
            acc = 0
            for slot in range(self.n):
                dv = self.bc.d.value((t[slot],))
                for (w,) in dv.terms:
                    acc ^= 1 << tgt_index[t[:slot] + (w,) + t[slot + 1:]]
            cols.append(acc)
        return BitMatrix(len(tgt_index), len(src), tuple(cols))

    def apply_d(self, e: Element) -> Element:
        acc = Element.zero(self.space)
        for t in e.terms:
            for slot in range(self.n):
                dv = self.bc.d.value((t[slot],))
                for (w,) in dv.terms:
                    acc = acc + Element(self.space,
                                        frozenset({t[:slot] + (w,) + t[slot + 1:]}))
        return acc

    def homology(self, degree: int) -> gf2.HomologyData:
        self._check_degree(degree)
        if degree not in self._homology:
            d_in = self.d_matrix(degree - 1) if degree >= 1 else None
            d_out = self.d_matrix(degree)
            self._homology[degree] = gf2.homology_of_pair(
                d_in, d_out, dim=len(self.tuples(degree)))
        return self._homology[degree]

    def d_solver(self, degree: int) -> RrefSolver:
        """Solver for d u = v with u in the given degree (v one higher)."""
        if degree not in self._d_solvers:
            self._d_solvers[degree] = RrefSolver(self.d_matrix(degree))
        return self._d_solvers[degree]

    def is_cocycle(self, e: Element) -> bool:
        return self.apply_d(e).is_zero()

    def solve_boundary(self, v: Element) -> Element | None:
        """Canonical u with componentwise-d(u) = v, or None if v is not exact."""
        degs = v.term_degrees()
        if not degs:
            return Element.zero(self.space)
        acc = Element.zero(self.space)
        for deg in degs:
            piece = v.graded_piece(deg)
            self._check_degree(deg - 1)
            mask = element_to_mask(piece, deg)
            x = self.d_solver(deg - 1).solve(mask)
            if x is None:
                return None
            acc = acc + mask_to_element(self.space, deg - 1, x)
        return acc

    # Kunneth coordinates ---------------------------------------------------

    def install_g(self, g: MultiMap):
        self._g = g

    def kunneth(self, degree: int, h_basis: GradedBasis) -> tuple[list[tuple[str, ...]], RrefSolver]:
        """Class coordinates of (bar)^n at this degree against products of representatives."""
        self._check_degree(degree)
        if degree not in self._kunneth:
            if self._g is None:
                raise RuntimeError("install_g must be called before class pullback")
            hom = self.homology(degree)
            h_tuples = list(h_basis.tuples(self.n, degree))
            cols = []
            for t in h_tuples:
                e = None
                for nm in t:
                    g_nm = self._g.value((nm,))
                    e = g_nm if e is None else tensor(e, g_nm)
                assert e is not None
                cols.append(hom.class_of(element_to_mask(e, degree)))
            if len(h_tuples) != hom.class_count:
                raise WindowViolation(
                    f"class pullback failed at degree {degree}: "
                    f"{len(h_tuples)} product classes vs {hom.class_count} homology classes")
            mat = BitMatrix(hom.class_count, len(h_tuples), tuple(cols))
            solver = RrefSolver(mat)
            if solver.rank != hom.class_count:
                raise WindowViolation(
                    f"class pullback not an isomorphism at degree {degree}")
            self._kunneth[degree] = (h_tuples, solver)
        return self._kunneth[degree]

    def pullback_class(self, e: Element, h_basis: GradedBasis,
                       h_space: TensorSpace) -> Element:
        """The H^{ox n} element whose representative is cohomologous to e."""
        acc = Element.zero(h_space)
        for deg in e.term_degrees():
            piece = e.graded_piece(deg)
            hom = self.homology(deg)
            coords = hom.class_of(element_to_mask(piece, deg))
            h_tuples, solver = self.kunneth(deg, h_basis)
            x = solver.solve(coords)
            if x is None:
                raise AssertionError("class outside the product-basis span")
            while x:
                i = (x & -x).bit_length() - 1
                acc = acc + Element.make(h_space, [h_tuples[i]])
                x &= x - 1
        return acc


# ---------------------------------------------------------------------------
# homology of the bar complex, with induced Hopf structure
# ---------------------------------------------------------------------------

class InducedStructureError(ValueError):
    """Transporting an operation through class_of hit a non-cocycle value."""


@dataclass
class BarHomology:
    """H(bar) as a zero-differential Hopf presentation, with the connecting maps.

    ``g`` selects the canonical cocycle representative of each class;
    ``class_of`` sends any cocycle of the bar complex back to H.  The
    product and coproduct on H are transported through these maps, not
    assumed: mu_H(x,y) = class(mu(g x, g y)) and likewise for delta via the
    tensor-square class coordinates.
    """

    bar: BarComplex
    presentation: AlgebraPresentation
    g: MultiMap                       # H -> bar, cocycle-selecting
    class_names: list[list[str]]      # per degree, in class order

    @property
    def basis(self) -> GradedBasis:
        return self.presentation.basis

    @property
    def cap(self) -> int:
        return self.presentation.cap

    def class_of(self, e: Element) -> Element:
        """Class of a bar cocycle as an H element (degreewise)."""
        if e.space != self.bar.space1:
            raise SpaceMismatch("class_of takes arity-1 bar elements")
        th = self.bar.tensor_homology(1)
        acc = Element.zero(self.presentation.space1)
        for deg in e.term_degrees():
            piece = e.graded_piece(deg)
            hom = th.homology(deg)
            coords = hom.class_of(element_to_mask(piece, deg))
            i = 0
            while coords:
                if coords & 1:
                    acc = acc + Element.make(self.presentation.space1,
                                             [(self.class_names[deg][i],)])
                coords >>= 1
                i += 1
        return acc

    def class_of_tensor(self, e: Element) -> Element:
        """Class of a cocycle of (bar)^{ox n} in H^{ox n} coordinates (Kunneth)."""
        n = e.space.arity
        th = self.bar.tensor_homology(n)
        th.install_g(self.g)
        return th.pullback_class(e, self.basis, TensorSpace(self.basis, n))


def homology(bc: BarComplex, names: dict[str, Element] | None = None,
             unit_name: str = "1") -> BarHomology:
    """Compute H(bar) with canonical representatives and induced mu, delta.

    ``names`` installs preferred names: each entry maps a name to a bar
    cocycle whose class must be a single canonical basis class.  Unnamed
    classes get ``h<degree>_<index>``.
    """
    th1 = bc.tensor_homology(1)
    hcap = bc.cap - 1
    class_names: list[list[str]] = []
    reps_by_name: dict[str, Element] = {}
    name_of: list[list[str]] = []

    # resolve overrides to (degree, class index)
    override_at: dict[tuple[int, int], str] = {}
    if names:
        for nm, e in names.items():
            deg = e.homogeneous_degree()
            if deg is None:
                raise PresentationError(f"override {nm!r} is not homogeneous")
            if deg > hcap:
                raise WindowViolation(
                    f"override {nm!r} lives in degree {deg}, beyond the usable "
                    f"range {hcap} at cap {bc.cap}")
            hom = th1.homology(deg)
            coords = hom.class_of(element_to_mask(e, deg))
            if coords == 0 or coords & (coords - 1):
                raise PresentationError(
                    f"override {nm!r} is not a single canonical class")
            idx = coords.bit_length() - 1
            if (deg, idx) in override_at:
                raise PresentationError(f"two overrides name the class at degree {deg}")
            override_at[(deg, idx)] = nm

    h_names: list[str] = []
    h_degrees: list[int] = []
    for deg in range(hcap + 1):
        hom = th1.homology(deg)
        row = []
        for i in range(hom.class_count):
            if deg == 0 and i == 0 and (0, 0) not in override_at:
                nm = unit_name
            else:
                nm = override_at.get((deg, i), f"h{deg}_{i}")
            row.append(nm)
            h_names.append(nm)
            h_degrees.append(deg)
            reps_by_name[nm] = mask_to_element(bc.space1, deg, hom.representatives[i])
        class_names.append(row)

    if len(class_names[0]) != 1:
        raise AssertionError("bar complex should have one class in degree zero")
    unit = class_names[0][0]

    h_basis = GradedBasis(tuple(h_names), tuple(h_degrees), hcap)
    h_sp1 = TensorSpace(h_basis, 1)
    h_sp2 = TensorSpace(h_basis, 2)
    g_table = {(nm,): reps_by_name[nm] for nm in h_names}
    g = MultiMap(h_sp1, bc.space1, 0, g_table, window=hcap)

    def class_of_local(e: Element) -> Element:
        acc = Element.zero(h_sp1)
        for deg in e.term_degrees():
            piece = e.graded_piece(deg)
            hom = th1.homology(deg)
            coords = hom.class_of(element_to_mask(piece, deg))
            i = 0
            while coords:
                if coords & 1:
                    acc = acc + Element.make(h_sp1, [(class_names[deg][i],)])
                coords >>= 1
                i += 1
        return acc

    # induced product: class(mu(g x ox g y))
    mu_table: dict[tuple[str, ...], Element] = {}
    for x in h_names:
        for y in h_names:
            tdeg = h_basis.degree_of[x] + h_basis.degree_of[y]
            if tdeg > hcap:
                continue
            prod = bc.mu.apply(tensor(g.value((x,)), g.value((y,))))
            try:
                h_val = class_of_local(prod)
            except gf2.NotACocycleError as exc:
                raise InducedStructureError(
                    f"product not well-defined on classes at ({x}, {y})") from exc
            if not h_val.is_zero():
                mu_table[(x, y)] = h_val

    # induced coproduct via tensor-square class coordinates
    th2 = bc.tensor_homology(2)
    th2.install_g(g)
    delta_table: dict[tuple[str, ...], Element] = {}
    for x in h_names:
        dv = bc.delta.apply(g.value((x,)))
        try:
            cls2 = th2.pullback_class(dv, h_basis, h_sp2)
        except gf2.NotACocycleError as exc:
            raise InducedStructureError(
                f"coproduct not well-defined on classes at {x}") from exc
        if not cls2.is_zero():
            delta_table[(x,)] = cls2

    pres = AlgebraPresentation(
        basis=h_basis,
        unit=unit,
        d=MultiMap(h_sp1, h_sp1, 1, {}, window=None),
        mu=MultiMap(h_sp2, h_sp1, 0, mu_table, window=hcap),
        delta=MultiMap(h_sp1, h_sp2, 0, delta_table, window=hcap),
        E={},
        name=f"H({bc.algebra.name or 'bar'})",
    )
    return BarHomology(bar=bc, presentation=pres, g=g, class_names=class_names)
