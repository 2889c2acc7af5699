"""Transfer of structure from a bar complex to its homology, total arity <= 4.

The homology H of the bar complex B (with zero differential) carries the
induced product and coproduct.  Along the cocycle-selecting map g the
strict structure of B induces order-4 operations on H together with
connecting homotopies:

  order 3:  solve   d g21 = mu_B(g ox g) + g mu_H        (pairs)
            solve   d2 g12 = Delta_B g + (g ox g) Delta_H (singles)

  order 4:  for each target, assemble the boundary expression phi from the
            lower homotopies, check it is a cocycle (z = 0), read off its
            class through the product-of-representatives coordinates, and
            solve d g(m,n) = g-image of the class + phi per input tuple.

Every solve is the canonical one (free variables zero); the only
nondeterminism control is a pin: a user-supplied value for a homotopy at a
named tuple, validated against the same equation before being adopted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bar import BarComplex, BarHomology, parse_word_name, word_name
from .presentation import PresentationError
from .reporting import Report
from .tensor import (
    Element,
    MultiMap,
    TensorSpace,
    WindowViolation,
    sigma_permute,
    tensor,
)


class TransferError(ValueError):
    pass


Pins = dict[tuple[int, int], dict[tuple[str, ...], Element]]


@dataclass
class TransferState:
    """Connecting homotopies and transferred operations, filled in stages."""

    H: BarHomology
    pins: Pins = field(default_factory=dict)
    homotopies: dict[tuple[int, int], dict[tuple[str, ...], Element]] = field(default_factory=dict)
    transferred: dict[tuple[int, int], MultiMap] = field(default_factory=dict)
    window: int = 0

    def __post_init__(self):
        if not self.window:
            self.window = self.H.cap
        if self.H.presentation.d.table:
            raise TransferError("transfer needs a zero differential on homology")

    @property
    def bar(self) -> BarComplex:
        return self.H.bar

    def g(self, nm: str) -> Element:
        return self.H.g.value((nm,))

    def g_el(self, e: Element) -> Element:
        return self.H.g.apply(e)

    def g_tensor(self, e: Element) -> Element:
        """g^{ox n} applied to an H^{ox n} element."""
        out_space = TensorSpace(self.bar.basis, e.space.arity)
        acc = Element.zero(out_space)
        for t in e.terms:
            term = None
            for nm in t:
                piece = self.g(nm)
                term = piece if term is None else tensor(term, piece)
            assert term is not None
            acc = acc + term
        return acc

    def homotopy(self, m: int, n: int, t: tuple[str, ...]) -> Element:
        table = self.homotopies.get((m, n), {})
        got = table.get(t)
        if got is not None:
            return got
        return Element.zero(TensorSpace(self.bar.basis, n))

    def homotopy_lin(self, m: int, n: int, e: Element) -> Element:
        acc = Element.zero(TensorSpace(self.bar.basis, n))
        for t in e.terms:
            acc = acc + self.homotopy(m, n, t)
        return acc

    def homotopy_as_map(self, m: int, n: int) -> MultiMap:
        table = {t: v for t, v in self.homotopies.get((m, n), {}).items()
                 if not v.is_zero()}
        return MultiMap(TensorSpace(self.H.basis, m), TensorSpace(self.bar.basis, n),
                        2 - m - n, table, window=self.window)

    def omega(self, n: int, m: int) -> MultiMap:
        got = self.transferred.get((n, m))
        if got is not None:
            return got
        return MultiMap(TensorSpace(self.H.basis, m), TensorSpace(self.H.basis, n),
                        -1, {}, window=self.window)


def parse_pins(text: str, state_H: BarHomology) -> Pins:
    """Lines `pin g <m> <n> : <H-name> ... -> <bar element>`."""
    pins: Pins = {}
    h_names = set(state_H.basis.names)
    bar_basis = state_H.bar.basis
    bar_names = set(bar_basis.names)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[:2] != ["pin", "g"]:
            raise PresentationError("pin lines start with `pin g <m> <n> :`", lineno)
        try:
            m, n = int(tok[2]), int(tok[3])
        except (ValueError, IndexError):
            raise PresentationError("pin needs integer arities", lineno)
        if tok[4] != ":" or "->" not in tok:
            raise PresentationError("malformed pin line", lineno)
        arrow = tok.index("->")
        in_names = tuple(tok[5:arrow])
        if len(in_names) != m:
            raise PresentationError(f"expected {m} input names", lineno)
        for nm in in_names:
            if nm not in h_names:
                raise PresentationError(f"unknown class name {nm!r}", lineno)
        rhs = " ".join(tok[arrow + 1:])
        if rhs.strip() == "0":
            value = Element.zero(TensorSpace(bar_basis, n))
        else:
            terms = []
            for chunk in rhs.split("+"):
                parts = tuple(s.strip() for s in chunk.strip().split("*"))
                if len(parts) != n:
                    raise PresentationError(f"term arity {len(parts)} != {n}", lineno)
                for w in parts:
                    if w not in bar_names:
                        raise PresentationError(f"unknown bar word {w!r}", lineno)
                terms.append(parts)
            value = Element.make(TensorSpace(bar_basis, n), terms)
        pins.setdefault((m, n), {})[in_names] = value
    return pins


def render_homotopies(state: TransferState) -> str:
    lines = []
    for (m, n) in sorted(state.homotopies):
        table = state.homotopies[(m, n)]
        idx = state.H.basis.index
        for t in sorted(table, key=lambda t: tuple(idx[x] for x in t)):
            if table[t].is_zero():
                continue
            lines.append(f"g {m} {n} : {' '.join(t)} -> "
                         f"{table[t].render().replace(' ', '')}")
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# order 3
# ---------------------------------------------------------------------------

def _solve_homotopy(state: TransferState, m: int, n: int, t: tuple[str, ...],
                    rhs: Element) -> Element:
    """Canonical u with componentwise-d(u) = rhs, honoring a pin at t."""
    th = state.bar.tensor_homology(n)
    pin = state.pins.get((m, n), {}).get(t)
    if pin is not None:
        if th.apply_d(pin) != rhs:
            raise TransferError(
                f"pin g_{m}^{n} at ({', '.join(t)}) does not solve its equation: "
                f"d(pin) = {th.apply_d(pin).render()}, needed {rhs.render()}")
        return pin
    u = th.solve_boundary(rhs)
    if u is None:
        raise TransferError(
            f"right-hand side at ({', '.join(t)}) is not exact; "
            "the induced structure on homology would be contradicted")
    return u


def order3_rhs_mu(state: TransferState, x: str, y: str) -> Element:
    """mu_B(g x ox g y) + g(mu_H(x, y))."""
    prod = state.bar.mu.apply(tensor(state.g(x), state.g(y)))
    return prod + state.g_el(state.H.presentation.mu.value((x, y)))


def order3_rhs_delta(state: TransferState, x: str) -> Element:
    """Delta_B(g x) + (g ox g)(Delta_H x)."""
    dv = state.bar.delta.apply(state.g(x))
    return dv + state.g_tensor(state.H.presentation.delta.value((x,)))


def transfer_order3(state: TransferState) -> TransferState:
    """Solve the arity-3 connecting homotopies g21 and g12 on every tuple in window."""
    H = state.H
    b = H.basis
    g21: dict[tuple[str, ...], Element] = {}
    for t in b.tuples_upto(2, state.window):
        rhs = order3_rhs_mu(state, t[0], t[1])
        if rhs.is_zero() and (state.pins.get((2, 1), {}).get(t) is None):
            continue
        u = _solve_homotopy(state, 2, 1, t, rhs)
        if not u.is_zero():
            g21[t] = u
    state.homotopies[(2, 1)] = g21

    g12: dict[tuple[str, ...], Element] = {}
    for t in b.tuples_upto(1, state.window):
        rhs = order3_rhs_delta(state, t[0])
        if rhs.is_zero() and (state.pins.get((1, 2), {}).get(t) is None):
            continue
        u = _solve_homotopy(state, 1, 2, t, rhs)
        if not u.is_zero():
            g12[t] = u
    state.homotopies[(1, 2)] = g12
    return state


# ---------------------------------------------------------------------------
# order 4: boundary expressions per target
# ---------------------------------------------------------------------------

def phi_31(state: TransferState, t: tuple[str, ...]) -> Element:
    """g21(mu ox 1 + 1 ox mu) + mu_B(g21 ox g + g ox g21) at a 3-tuple."""
    x1, x2, x3 = t
    H = state.H.presentation
    mu_b = state.bar.mu
    acc = state.homotopy_lin(2, 1, _pair_mul(H, x1, x2, x3, left=True))
    acc = acc + state.homotopy_lin(2, 1, _pair_mul(H, x1, x2, x3, left=False))
    acc = acc + mu_b.apply(tensor(state.homotopy(2, 1, (x1, x2)), state.g(x3)))
    acc = acc + mu_b.apply(tensor(state.g(x1), state.homotopy(2, 1, (x2, x3))))
    return acc


def _pair_mul(H, x1, x2, x3, left: bool) -> Element:
    """(mu ox 1)(x1,x2,x3) or (1 ox mu)(x1,x2,x3) as an H^2 element."""
    sp2 = TensorSpace(H.basis, 2)
    acc = Element.zero(sp2)
    if left:
        for (u,) in H.mu.value((x1, x2)).terms:
            acc = acc + Element.make(sp2, [(u, x3)])
    else:
        for (u,) in H.mu.value((x2, x3)).terms:
            acc = acc + Element.make(sp2, [(x1, u)])
    return acc


def phi_22(state: TransferState, t: tuple[str, ...]) -> Element:
    """The arity-(2,2) boundary expression at a pair."""
    x, y = t
    H = state.H.presentation
    bar = state.bar
    sp2b = TensorSpace(bar.basis, 2)

    # Delta_B g21
    acc = bar.delta.apply(state.homotopy(2, 1, (x, y)))

    # (mu_B ox mu_B) sigma (Delta_B g ox g12 + g12 ox (g ox g) Delta_H)
    spread1 = tensor(bar.delta.apply(state.g(x)), state.homotopy(1, 2, (y,)))
    spread1 = spread1 + tensor(state.homotopy(1, 2, (x,)),
                               state.g_tensor(H.delta.value((y,))))
    for term in sigma_permute(2, 2, spread1).terms:
        acc = acc + tensor(bar.mu.apply(Element.make(sp2b, [term[:2]])),
                           bar.mu.apply(Element.make(sp2b, [term[2:]])))

    # (mu_B(g ox g) ox g21 + g21 ox g mu_H) sigma (Delta_H ox Delta_H)
    spread2 = sigma_permute(2, 2, tensor(H.delta.value((x,)), H.delta.value((y,))))
    for (a, b, c, d) in spread2.terms:
        acc = acc + tensor(bar.mu.apply(tensor(state.g(a), state.g(b))),
                           state.homotopy(2, 1, (c, d)))
        acc = acc + tensor(state.homotopy(2, 1, (a, b)),
                           state.g_el(H.mu.value((c, d))))

    # g12 mu_H
    acc = acc + state.homotopy_lin(1, 2, H.mu.value((x, y)))
    return acc


def phi_13(state: TransferState, t: tuple[str, ...]) -> Element:
    """(Delta_B ox 1 + 1 ox Delta_B) g12 + (g12 ox g + g ox g12) Delta_H."""
    (x,) = t
    H = state.H.presentation
    bar = state.bar
    sp3 = TensorSpace(bar.basis, 3)
    acc = Element.zero(sp3)
    for (u, v) in state.homotopy(1, 2, (x,)).terms:
        for (a, b) in bar.delta.value((u,)).terms:
            acc = acc + Element.make(sp3, [(a, b, v)])
        for (a, b) in bar.delta.value((v,)).terms:
            acc = acc + Element.make(sp3, [(u, a, b)])
    for (u, v) in H.delta.value((x,)).terms:
        acc = acc + tensor(state.homotopy(1, 2, (u,)), state.g(v))
        acc = acc + tensor(state.g(u), state.homotopy(1, 2, (v,)))
    return acc


_PHI = {(3, 1): phi_31, (2, 2): phi_22, (1, 3): phi_13}


def transfer_order4(state: TransferState) -> TransferState:
    """Produce the three order-4 operations and their homotopies.

    For each (inputs, outputs) target and each basis tuple: the boundary
    expression phi must be a cocycle (the obstruction z vanishes because H
    has zero differential; asserted, not assumed); its class pulled back
    through the product-representative coordinates is the operation's
    value, and the homotopy solves d(., n) = g-image + phi canonically.
    """
    if (2, 1) not in state.homotopies:
        raise TransferError("run transfer_order3 first")
    H = state.H
    b = H.basis
    h_space = {n: TensorSpace(b, n) for n in (1, 2, 3)}
    for (m, n) in ((3, 1), (2, 2), (1, 3)):
        th = state.bar.tensor_homology(n)
        th.install_g(H.g)
        phi = _PHI[(m, n)]
        om_table: dict[tuple[str, ...], Element] = {}
        g_table: dict[tuple[str, ...], Element] = {}
        for t in b.tuples_upto(m, state.window):
            rhs = phi(state, t)
            if not th.apply_d(rhs).is_zero():
                raise TransferError(
                    f"boundary expression at ({', '.join(t)}) is not a cocycle; "
                    "the obstruction class must vanish when H has zero differential")
            value = th.pullback_class(rhs, b, h_space[n]) if not rhs.is_zero() \
                else Element.zero(h_space[n])
            if not value.is_zero():
                om_table[t] = value
            solve_rhs = state.g_tensor(value) + rhs
            u = _solve_homotopy(state, m, n, t, solve_rhs)
            if not u.is_zero():
                g_table[t] = u
        state.transferred[(n, m)] = MultiMap(
            TensorSpace(b, m), h_space[n], -1, om_table, window=state.window)
        state.homotopies[(m, n)] = g_table
    return state


# ---------------------------------------------------------------------------
# verification of the structure relations after transfer
# ---------------------------------------------------------------------------

def verify_transfer(state: TransferState) -> Report:
    """Exact re-check of every connecting relation on every tuple in window."""
    rep = Report("transfer relations")
    H = state.H
    b = H.basis

    ok, witness = True, ""
    for t in b.tuples_upto(2, state.window):
        th = state.bar.tensor_homology(1)
        lhs = th.apply_d(state.homotopy(2, 1, t))
        if lhs != order3_rhs_mu(state, t[0], t[1]):
            ok, witness = False, f"at ({', '.join(t)})"
            break
    rep.add("g21_relation", ok, witness)

    ok, witness = True, ""
    for t in b.tuples_upto(1, state.window):
        th = state.bar.tensor_homology(2)
        lhs = th.apply_d(state.homotopy(1, 2, t))
        if lhs != order3_rhs_delta(state, t[0]):
            ok, witness = False, f"at ({', '.join(t)})"
            break
    rep.add("g12_relation", ok, witness)

    for (m, n) in ((3, 1), (2, 2), (1, 3)):
        ok, witness = True, ""
        th = state.bar.tensor_homology(n)
        om = state.transferred.get((n, m))
        for t in b.tuples_upto(m, state.window):
            lhs = th.apply_d(state.homotopy(m, n, t))
            rhs = _PHI[(m, n)](state, t)
            if om is not None:
                val = om.table.get(t)
                if val is not None:
                    rhs = rhs + state.g_tensor(val)
            if lhs != rhs:
                ok, witness = False, f"at ({', '.join(t)})"
                break
        rep.add(f"g{m}{n}_relation", ok, witness)
    return rep
