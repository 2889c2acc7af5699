"""The Gerstenhaber-Schack triple complex of a DG Hopf algebra over GF(2).

A cochain part of tridegree (p, m, n) is a degree-p map H^m -> H^n; an
r-cochain collects parts with p + m + n = r + 1.  Three differentials act:

    nabla  from the differential of H        (p, m, n) -> (p+1, m, n)
    partial, Hochschild-type, from mu        (p, m, n) -> (p, m+1, n)
    delta, coHochschild-type, from Delta     (p, m, n) -> (p, m, n+1)

and D = nabla + partial + delta (all signs vanish mod 2).  The diagonal
module and comodule actions entering partial and delta are built from
iterated products and coproducts through the block transpose; they are
cached as tables per host, which keeps exhaustive D^2 = 0 sampling cheap.

The deformation-triviality decision assembles the GF(2) linear system
D(psi) = omega over unknown parts at (-1,2,1) and (-1,1,2).  Equations at
input degree t involve unknowns at degrees <= t (Hochschild-type terms
evaluate the unknown on sub-tuples), so the system is solved degree by
degree with an exact joint fallback; infeasibility of any graded subsystem
is certified by an explicit odd-sum combination of rows and is sound
regardless of the window.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .gf2 import BitMatrix, RrefSolver, solve_rows
from .presentation import AlgebraPresentation, PresentationError
from .reporting import Report
from .tensor import Element, GradedBasis, MultiMap, TensorSpace, WindowViolation


# ---------------------------------------------------------------------------
# evaluation context with cached action tables
# ---------------------------------------------------------------------------

class GSContext:
    """Cached evaluation data for one host Hopf algebra and degree window."""

    def __init__(self, host: AlgebraPresentation, window: int):
        if host.delta is None:
            raise PresentationError("the GS complex needs a coproduct")
        if window > host.cap:
            raise WindowViolation(f"window {window} exceeds host cap {host.cap}")
        self.host = host
        self.window = window
        self.basis = host.basis
        self._module: dict[tuple[str, int], dict] = {}
        self._comodule: dict[tuple[str, int], dict] = {}

    def space(self, arity: int) -> TensorSpace:
        return TensorSpace(self.basis, arity)

    def mu_el(self, x: str, y: str) -> Element:
        return self.host.mu.value((x, y))

    def delta_el(self, x: str) -> Element:
        return self.host.delta.value((x,))

    def _delta_iter_left(self, x: str, k: int) -> Element:
        """(Delta ox 1^{k-2})...(Delta ox 1)Delta, splitting x into k parts."""
        e = Element.make(self.space(1), [(x,)])
        if k == 1:
            return e
        cur = self.delta_el(x)
        for _ in range(k - 2):
            nxt = Element.zero(self.space(cur.space.arity + 1))
            for t in cur.terms:
                for (u, v) in self.delta_el(t[0]).terms:
                    nxt = nxt + Element.make(nxt.space, [(u, v) + t[1:]])
            cur = nxt
        return cur

    def _delta_iter_right(self, x: str, k: int) -> Element:
        cur = Element.make(self.space(1), [(x,)])
        if k == 1:
            return cur
        cur = self.delta_el(x)
        for _ in range(k - 2):
            nxt = Element.zero(self.space(cur.space.arity + 1))
            for t in cur.terms:
                for (u, v) in self.delta_el(t[-1]).terms:
                    nxt = nxt + Element.make(nxt.space, [t[:-1] + (u, v)])
            cur = nxt
        return cur

    def _mu_chain_left(self, names: tuple[str, ...]) -> Element:
        """mu(mu ox 1)...: the left-iterated product of a tuple of names."""
        acc = Element.make(self.space(1), [(names[0],)])
        for nm in names[1:]:
            nxt = Element.zero(self.space(1))
            for (u,) in acc.terms:
                nxt = nxt + self.mu_el(u, nm)
            acc = nxt
        return acc

    def _mu_chain_right(self, names: tuple[str, ...]) -> Element:
        acc = Element.make(self.space(1), [(names[-1],)])
        for nm in reversed(names[:-1]):
            nxt = Element.zero(self.space(1))
            for (u,) in acc.terms:
                nxt = nxt + self.mu_el(nm, u)
            acc = nxt
        return acc

    # -- comodule actions lambda_m, rho_m : H^m -> H^{m+1} -------------------

    def comodule_value(self, side: str, m: int, t: tuple[str, ...]) -> Element:
        key = (side, m)
        cache = self._comodule.setdefault(key, {})
        if t not in cache:
            cache[t] = self._comodule_eval(side, m, t)
        return cache[t]

    def _comodule_eval(self, side: str, m: int, t: tuple[str, ...]) -> Element:
        out = Element.zero(self.space(m + 1))
        if m == 1:
            return self.delta_el(t[0])
        # expand Delta on every slot, transpose, collapse one block with mu
        def rec(i: int, firsts: tuple[str, ...], seconds: tuple[str, ...]):
            nonlocal out
            if i == m:
                if side == "left":
                    for (prod,) in self._mu_chain_left(firsts).terms:
                        out = out + Element.make(out.space, [(prod,) + seconds])
                else:
                    for (prod,) in self._mu_chain_right(seconds).terms:
                        out = out + Element.make(out.space, [firsts + (prod,)])
                return
            for (u, v) in self.delta_el(t[i]).terms:
                rec(i + 1, firsts + (u,), seconds + (v,))
        rec(0, (), ())
        return out

    # -- module actions lambda^n, rho^n : H^{n+1} -> H^n ----------------------

    def module_value(self, side: str, n: int, t: tuple[str, ...]) -> Element:
        key = (side, n)
        cache = self._module.setdefault(key, {})
        if t not in cache:
            cache[t] = self._module_eval(side, n, t)
        return cache[t]

    def _module_eval(self, side: str, n: int, t: tuple[str, ...]) -> Element:
        out = Element.zero(self.space(n))
        if n == 1:
            return self.mu_el(t[0], t[1])
        if side == "left":
            x, rest = t[0], t[1:]
            split = self._delta_iter_left(x, n)
            for parts in split.terms:
                term = None
                for xi, yi in zip(parts, rest):
                    piece = self.mu_el(xi, yi)
                    term = piece if term is None else _tensor_els(term, piece)
                assert term is not None
                out = out + term
        else:
            rest, x = t[:-1], t[-1]
            split = self._delta_iter_right(x, n)
            for parts in split.terms:
                term = None
                for yi, xi in zip(rest, parts):
                    piece = self.mu_el(yi, xi)
                    term = piece if term is None else _tensor_els(term, piece)
                assert term is not None
                out = out + term
        return out


def _tensor_els(a: Element, b: Element) -> Element:
    from .tensor import tensor
    return tensor(a, b)


def comodule_action(ctx: GSContext, side: str, m: int) -> MultiMap:
    """lambda_m or rho_m as an explicit table within the context window."""
    table = {}
    for t in ctx.basis.tuples_upto(m, ctx.window):
        v = ctx.comodule_value(side, m, t)
        if not v.is_zero():
            table[t] = v
    return MultiMap(ctx.space(m), ctx.space(m + 1), 0, table, window=ctx.window)


def module_action(ctx: GSContext, side: str, n: int) -> MultiMap:
    """lambda^n or rho^n as an explicit table within the context window."""
    table = {}
    for t in ctx.basis.tuples_upto(n + 1, ctx.window):
        v = ctx.module_value(side, n, t)
        if not v.is_zero():
            table[t] = v
    return MultiMap(ctx.space(n + 1), ctx.space(n), 0, table, window=ctx.window)


# ---------------------------------------------------------------------------
# cochains and differentials
# ---------------------------------------------------------------------------

def part_shape(f: MultiMap) -> tuple[int, int, int]:
    return (f.p, f.m, f.n)


@dataclass
class GSCochain:
    """A total cochain: parts indexed by tridegree (p, m, n), p+m+n = r+1."""

    host: AlgebraPresentation
    r: int
    parts: dict[tuple[int, int, int], MultiMap] = field(default_factory=dict)

    def __post_init__(self):
        for (p, m, n), f in list(self.parts.items()):
            if (f.p, f.m, f.n) != (p, m, n):
                raise ValueError(f"part at {(p, m, n)} has shape {(f.p, f.m, f.n)}")
            if p + m + n != self.r + 1:
                raise ValueError(
                    f"tridegree {(p, m, n)} does not sum to r+1 = {self.r + 1}")
            if not f.table:
                del self.parts[(p, m, n)]

    def part(self, p: int, m: int, n: int, window: int | None = None) -> MultiMap:
        got = self.parts.get((p, m, n))
        if got is not None:
            return got
        return MultiMap(TensorSpace(self.host.basis, m),
                        TensorSpace(self.host.basis, n), p, {}, window)

    def is_zero_within(self, window: int) -> bool:
        return all(f.is_zero_within(window) for f in self.parts.values())

    def support_degrees(self) -> set[int]:
        b = self.host.basis
        out = set()
        for f in self.parts.values():
            for t in f.table:
                out.add(b.tuple_degree(t))
        return out


def _result_window(ctx: GSContext, f: MultiMap, extra: int = 0) -> int:
    # positive internal degree pushes the action/coproduct queries on the
    # output side up by p, which must stay under the host cap
    w = min(ctx.window, ctx.host.cap - max(f.p, 0)) - extra
    if f.window is not None:
        w = min(w, f.window - extra)
    return w


def nabla(ctx: GSContext, f: MultiMap) -> MultiMap:
    """d_(n) f + f d_(m); zero when the host differential vanishes."""
    host = ctx.host
    out_space = ctx.space(f.n)
    if host.d_is_zero() or not f.table:
        return MultiMap(f.in_space, out_space, f.p + 1, {},
                        window=_result_window(ctx, f, extra=0 if host.d_is_zero() else 1))
    w = _result_window(ctx, f, extra=1)
    table: dict[tuple[str, ...], Element] = {}
    for t in ctx.basis.tuples_upto(f.m, w):
        acc: set[tuple[str, ...]] = set()
        v = f.table.get(t)
        if v is not None:
            for o in v.terms:
                for s in range(f.n):
                    for (u,) in host.d.value((o[s],)).terms:
                        acc ^= {o[:s] + (u,) + o[s + 1:]}
        for s in range(f.m):
            for (u,) in host.d.value((t[s],)).terms:
                fv = f.table.get(t[:s] + (u,) + t[s + 1:])
                if fv is not None:
                    acc ^= fv.terms
        if acc:
            table[t] = Element(out_space, frozenset(acc))
    return MultiMap(f.in_space, out_space, f.p + 1, table, window=w)


def gs_partial(ctx: GSContext, f: MultiMap) -> MultiMap:
    """Hochschild-type differential: lambda^n(1 ox f) + f partial_(m) + rho^n(f ox 1)."""
    m, n = f.m, f.n
    w = _result_window(ctx, f)
    in_space = ctx.space(m + 1)
    out_space = ctx.space(n)
    if not f.table:
        return MultiMap(in_space, out_space, f.p, {}, window=w)
    table: dict[tuple[str, ...], Element] = {}
    ftab = f.table
    for t in ctx.basis.tuples_upto(m + 1, w):
        acc: set[tuple[str, ...]] = set()
        head = ftab.get(t[1:])
        if head is not None:
            for o in head.terms:
                acc ^= ctx.module_value("left", n, (t[0],) + o).terms
        for s in range(m):
            mu_v = ctx.mu_el(t[s], t[s + 1])
            if mu_v.terms:
                pre, post = t[:s], t[s + 2:]
                for (u,) in mu_v.terms:
                    fv = ftab.get(pre + (u,) + post)
                    if fv is not None:
                        acc ^= fv.terms
        tail = ftab.get(t[:-1])
        if tail is not None:
            for o in tail.terms:
                acc ^= ctx.module_value("right", n, o + (t[-1],)).terms
        if acc:
            table[t] = Element(out_space, frozenset(acc))
    return MultiMap(in_space, out_space, f.p, table, window=w)


def gs_delta(ctx: GSContext, f: MultiMap) -> MultiMap:
    """CoHochschild-type differential: (1 ox f) lambda_m + delta_(n) f + (f ox 1) rho_m."""
    m, n = f.m, f.n
    w = _result_window(ctx, f)
    in_space = ctx.space(m)
    out_space = ctx.space(n + 1)
    if not f.table:
        return MultiMap(in_space, out_space, f.p, {}, window=w)
    table: dict[tuple[str, ...], Element] = {}
    ftab = f.table
    for t in ctx.basis.tuples_upto(m, w):
        acc: set[tuple[str, ...]] = set()
        for h in ctx.comodule_value("left", m, t).terms:
            v = ftab.get(h[1:])
            if v is not None:
                h0 = (h[0],)
                for o in v.terms:
                    acc ^= {h0 + o}
        v = ftab.get(t)
        if v is not None:
            for o in v.terms:
                for s in range(n):
                    pre, post = o[:s], o[s + 1:]
                    for (u, vv) in ctx.delta_el(o[s]).terms:
                        acc ^= {pre + (u, vv) + post}
        for h in ctx.comodule_value("right", m, t).terms:
            v = ftab.get(h[:-1])
            if v is not None:
                hl = (h[-1],)
                for o in v.terms:
                    acc ^= {o + hl}
        if acc:
            table[t] = Element(out_space, frozenset(acc))
    return MultiMap(in_space, out_space, f.p, table, window=w)


def total_D(ctx: GSContext, c: GSCochain) -> GSCochain:
    """D = nabla + partial + delta, collected by target tridegree."""
    acc: dict[tuple[int, int, int], MultiMap] = {}

    def put(key, g: MultiMap):
        if key in acc:
            acc[key] = acc[key] + g
        else:
            acc[key] = g

    for (p, m, n), f in c.parts.items():
        put((p + 1, m, n), nabla(ctx, f))
        put((p, m + 1, n), gs_partial(ctx, f))
        put((p, m, n + 1), gs_delta(ctx, f))
    parts = {k: v for k, v in acc.items() if v.table}
    return GSCochain(c.host, c.r + 1, parts)


# ---------------------------------------------------------------------------
# the 2-cocycle test
# ---------------------------------------------------------------------------

def _check_equal(ctx: GSContext, name: str, lhs: MultiMap, rhs: MultiMap,
                 rep: Report, window: int):
    diff = lhs + rhs
    if diff.window is not None and window > diff.window:
        raise WindowViolation(f"{name}: window {window} exceeds {diff.window}")
    b = ctx.basis
    for t in sorted(diff.table, key=lambda t: (b.tuple_degree(t), t)):
        if b.tuple_degree(t) <= window and not diff.table[t].is_zero():
            rep.add(name, False,
                    f"witness ({', '.join(t)}): difference = {diff.table[t].render()}")
            return
    rep.add(name, True)


def make_order4_cochain(host: AlgebraPresentation, w13: MultiMap, w22: MultiMap,
                        w31: MultiMap) -> GSCochain:
    for f, (em, en) in ((w13, (3, 1)), (w22, (2, 2)), (w31, (1, 3))):
        if (f.m, f.n, f.p) != (em, en, -1):
            raise ValueError(
                f"operation has shape ({f.m},{f.n},{f.p}), expected ({em},{en},-1)")
    parts = {}
    for f in (w13, w22, w31):
        if f.table:
            parts[(-1, f.m, f.n)] = f
    return GSCochain(host, 2, parts)


def is_gs_2cocycle(ctx: GSContext, w13: MultiMap, w22: MultiMap,
                   w31: MultiMap, window: int | None = None) -> Report:
    """The four homogeneous components of D(omega) = 0, plus the cross-check.

    Components: partial w13 = 0, partial w22 = delta w13,
    partial w31 = delta w22, delta w31 = 0; with a nonzero host differential
    also nabla of each part.  The single-computation path D(omega) = 0 is
    compared against the componentwise verdicts on every call.
    """
    rep = Report("GS 2-cocycle test")
    c = make_order4_cochain(ctx.host, w13, w22, w31)
    w = ctx.window if window is None else window
    _check_equal(ctx, "partial_w13_zero", gs_partial(ctx, w13),
                 MultiMap(ctx.space(4), ctx.space(1), -1, {}), rep, w)
    _check_equal(ctx, "partial_w22_equals_delta_w13", gs_partial(ctx, w22),
                 gs_delta(ctx, w13), rep, w)
    _check_equal(ctx, "partial_w31_equals_delta_w22", gs_partial(ctx, w31),
                 gs_delta(ctx, w22), rep, w)
    _check_equal(ctx, "delta_w31_zero", gs_delta(ctx, w31),
                 MultiMap(ctx.space(1), ctx.space(4), -1, {}), rep, w)
    if not ctx.host.d_is_zero():
        for f, nm in ((w13, "nabla_w13_zero"), (w22, "nabla_w22_zero"),
                      (w31, "nabla_w31_zero")):
            _check_equal(ctx, nm, nabla(ctx, f),
                         MultiMap(ctx.space(f.m), ctx.space(f.n), f.p + 1, {}),
                         rep, w - 1)
    # cross-check: the single total computation agrees with the components
    components_passed = rep.passed
    total_zero = total_D(ctx, c).is_zero_within(w if ctx.host.d_is_zero() else w - 1)
    rep.add("total_D_cross_check", total_zero == components_passed)
    if not components_passed:
        # keep the overall verdict driven by the component relations
        rep.note("total D cross-check compared against failing components")
    return rep


# ---------------------------------------------------------------------------
# cochain file grammar
# ---------------------------------------------------------------------------

def parse_cochain(text: str, host: AlgebraPresentation) -> GSCochain:
    """Lines `omega <n> <m> : <name>... -> <element>`; omitted entries are zero."""
    names = set(host.basis.names)
    tables: dict[tuple[int, int], dict[tuple[str, ...], Element]] = {}
    p_of: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] != "omega":
            raise PresentationError(f"unknown directive {tok[0]!r}", lineno)
        try:
            n, m = int(tok[1]), int(tok[2])
        except (ValueError, IndexError):
            raise PresentationError("omega line needs output and input arities", lineno)
        if n < 1 or m < 1:
            raise PresentationError("arities must be >= 1", lineno)
        if tok[3] != ":":
            raise PresentationError("expected `:` after arities", lineno)
        if "->" not in tok:
            raise PresentationError("missing `->`", lineno)
        arrow = tok.index("->")
        in_names = tok[4:arrow]
        if len(in_names) != m:
            raise PresentationError(f"expected {m} input names, got {len(in_names)}", lineno)
        for nm in in_names:
            if nm not in names:
                raise PresentationError(f"unknown basis name {nm!r}", lineno)
        rhs_text = " ".join(tok[arrow + 1:])
        if rhs_text.strip() == "0":
            value = Element.zero(TensorSpace(host.basis, n))
        else:
            terms = []
            for chunk in rhs_text.split("+"):
                parts = tuple(s.strip() for s in chunk.strip().split("*"))
                if len(parts) != n:
                    raise PresentationError(
                        f"term {'*'.join(parts)} has arity {len(parts)}, expected {n}", lineno)
                for nm in parts:
                    if nm not in names:
                        raise PresentationError(f"unknown basis name {nm!r}", lineno)
                terms.append(parts)
            value = Element.make(TensorSpace(host.basis, n), terms)
        key = tuple(in_names)
        in_deg = host.basis.tuple_degree(key)
        if not value.is_zero():
            degs = value.term_degrees()
            if len(degs) != 1:
                raise PresentationError("value must be homogeneous", lineno)
            p = degs.pop() - in_deg
            if (n, m) in p_of and p_of[(n, m)] != p:
                raise PresentationError(
                    f"inconsistent internal degree for omega {n} {m}", lineno)
            p_of[(n, m)] = p
        table = tables.setdefault((n, m), {})
        if key in table:
            raise PresentationError(f"duplicate entry for {' '.join(key)}", lineno)
        table[key] = value

    r: int | None = None
    for (n, m), p in p_of.items():
        this_r = p + m + n - 1
        if r is None:
            r = this_r
        elif r != this_r:
            raise PresentationError(
                f"parts of different total degree: {r} vs {this_r}")
    if r is None:
        r = 2  # the zero cochain; degree is conventional
    parts = {}
    for (n, m), table in tables.items():
        p = p_of.get((n, m), r + 1 - m - n)
        mm = MultiMap(TensorSpace(host.basis, m), TensorSpace(host.basis, n),
                      p, table, window=host.cap)
        if mm.table:
            parts[(p, m, n)] = mm
    return GSCochain(host, r, parts)


def render_cochain(c: GSCochain) -> str:
    lines = []
    b = c.host.basis
    for (p, m, n) in sorted(c.parts):
        f = c.parts[(p, m, n)]
        for t in f.support():
            lines.append(f"omega {n} {m} : {' '.join(t)} -> "
                         f"{f.table[t].render().replace(' ', '')}")
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# seeded random cochains (for the D^2 and commutation samples)
# ---------------------------------------------------------------------------

def random_cochain(ctx: GSContext, rng: random.Random, r: int,
                   max_degree: int, entries_per_part: int = 2) -> GSCochain:
    parts = {}
    b = ctx.basis
    for m in range(1, 4):
        for n in range(1, 5 - m):
            p = r + 1 - m - n
            if p > ctx.host.cap - max_degree:
                continue  # D of such a part is not evaluable up to max_degree
            table = {}
            for _ in range(entries_per_part):
                t_deg = rng.randint(0, max_degree)
                in_tuples = b.tuples(m, t_deg)
                out_tuples = b.tuples(n, t_deg + p)
                if not in_tuples or not out_tuples:
                    continue
                key = rng.choice(in_tuples)
                terms = [rng.choice(out_tuples)
                         for _ in range(rng.randint(1, 2))]
                value = Element.make(TensorSpace(b, n), terms)
                if key not in table and not value.is_zero():
                    table[key] = value
            if table:
                parts[(p, m, n)] = MultiMap(ctx.space(m), ctx.space(n), p, table,
                                            window=max_degree)
    return GSCochain(ctx.host, r, parts)


# ---------------------------------------------------------------------------
# the triviality decision
# ---------------------------------------------------------------------------

@dataclass
class CertificateRow:
    degree: int
    target: tuple[int, int]            # (n, m) of the violated equation family
    in_tuple: tuple[str, ...]
    out_tuple: tuple[str, ...]
    rhs: int
    lhs_label: str

    def line(self) -> str:
        return (f"equation {self.degree} : ({self.target[0]},{self.target[1]}) "
                f"{' '.join(self.in_tuple)} : out {'*'.join(self.out_tuple)} : "
                f"lhs {self.lhs_label} : rhs {self.rhs}")


@dataclass
class Certificate:
    degree: int
    rows: list[CertificateRow]
    analysis: list[str] = field(default_factory=list)

    def render(self) -> str:
        lines = ["# gs-triviality certificate", "status nontrivial",
                 f"infeasible-degree {self.degree}", f"rows {len(self.rows)}"]
        lines += [r.line() for r in self.rows]
        lines += [f"# {a}" for a in self.analysis]
        lines.append("# the XOR of the listed equations is 0 = 1")
        return "\n".join(lines) + "\n"


@dataclass
class TrivialityResult:
    status: str                        # "trivial" | "nontrivial" | "inconclusive"
    psi: GSCochain | None = None
    certificate: Certificate | None = None
    message: str = ""


_LHS_LABELS = {(1, 3): "partial(psi21)",
               (2, 2): "partial(psi12) + delta(psi21)",
               (3, 1): "delta(psi12)"}


class _TrivialitySystem:
    """Row/unknown bookkeeping for D(psi21 + psi12) = omega within a window."""

    def __init__(self, ctx: GSContext, omega: GSCochain, window: int):
        self.ctx = ctx
        self.b = ctx.basis
        self.window = window
        self.omega = omega
        self.unknown_index: dict[tuple, int] = {}
        self.unknown_degree: list[int] = []
        self._enumerate_unknowns()
        self.rows_by_degree: dict[int, list[tuple[int, int, CertificateRow]]] = {}
        self._build_rows()

    # unknowns ---------------------------------------------------------------

    def _add_unknown(self, key, degree):
        self.unknown_index[key] = len(self.unknown_degree)
        self.unknown_degree.append(degree)

    def _enumerate_unknowns(self):
        b = self.b
        for t_deg in range(self.window + 1):
            for t in b.tuples(2, t_deg):
                for o in b.tuples(1, t_deg - 1):
                    self._add_unknown(("21", t, o), t_deg)
            for t in b.tuples(1, t_deg):
                for o in b.tuples(2, t_deg - 1):
                    self._add_unknown(("12", t, o), t_deg)

    def u(self, part: str, t, o) -> int:
        return self.unknown_index[(part, t, o)]

    # symbolic rows ----------------------------------------------------------

    def _rows_for(self, target_nm: tuple[int, int], in_tuple: tuple[str, ...]):
        """Linear forms per output coordinate of one vector equation."""
        ctx, b = self.ctx, self.b
        n, m_in = target_nm
        t_deg = b.tuple_degree(in_tuple)
        out_tuples = b.tuples(n, t_deg - 1)
        if not out_tuples:
            return
        coeff: dict[tuple[str, ...], set[int]] = {o: set() for o in out_tuples}

        def hit(o, idx):
            coeff[o].symmetric_difference_update({idx})

        if target_nm == (1, 3):
            # partial(psi21) at a 3-tuple
            x = in_tuple
            rest_deg = b.tuple_degree(x[1:])
            for o in b.tuples(1, rest_deg - 1):
                v = ctx.module_value("left", 1, (x[0],) + o)
                for oo in v.terms:
                    hit(oo, self.u("21", x[1:], o))
            for s in range(2):
                for (u,) in ctx.mu_el(x[s], x[s + 1]).terms:
                    ct = x[:s] + (u,) + x[s + 2:]
                    for o in b.tuples(1, t_deg - 1):
                        hit(o, self.u("21", ct, o))
            head_deg = b.tuple_degree(x[:-1])
            for o in b.tuples(1, head_deg - 1):
                v = ctx.module_value("right", 1, o + (x[-1],))
                for oo in v.terms:
                    hit(oo, self.u("21", x[:-1], o))
        elif target_nm == (2, 2):
            x = in_tuple
            # partial(psi12): lambda^2(1 ox f) + f mu + rho^2(f ox 1)
            for o in b.tuples(2, b.tuple_degree(x[1:]) - 1):
                for oo in ctx.module_value("left", 2, (x[0],) + o).terms:
                    hit(oo, self.u("12", x[1:], o))
            for (u,) in ctx.mu_el(x[0], x[1]).terms:
                for o in b.tuples(2, t_deg - 1):
                    hit(o, self.u("12", (u,), o))
            for o in b.tuples(2, b.tuple_degree(x[:1]) - 1):
                for oo in ctx.module_value("right", 2, o + (x[1],)).terms:
                    hit(oo, self.u("12", x[:1], o))
            # delta(psi21): (1 ox f) lambda_2 + Delta f + (f ox 1) rho_2
            for h in ctx.comodule_value("left", 2, x).terms:
                for o in b.tuples(1, b.tuple_degree(h[1:]) - 1):
                    hit((h[0],) + o, self.u("21", h[1:], o))
            for o in b.tuples(1, t_deg - 1):
                for (u, v) in ctx.delta_el(o[0]).terms:
                    hit((u, v), self.u("21", x, o))
            for h in ctx.comodule_value("right", 2, x).terms:
                for o in b.tuples(1, b.tuple_degree(h[:-1]) - 1):
                    hit(o + (h[-1],), self.u("21", h[:-1], o))
        elif target_nm == (3, 1):
            x = in_tuple
            # delta(psi12)
            for h in ctx.comodule_value("left", 1, x).terms:
                for o in b.tuples(2, b.tuple_degree(h[1:]) - 1):
                    hit((h[0],) + o, self.u("12", h[1:], o))
            for o in b.tuples(2, t_deg - 1):
                for s in range(2):
                    for (u, v) in ctx.delta_el(o[s]).terms:
                        hit(o[:s] + (u, v) + o[s + 1:], self.u("12", x, o))
            for h in ctx.comodule_value("right", 1, x).terms:
                for o in b.tuples(2, b.tuple_degree(h[:-1]) - 1):
                    hit(o + (h[-1],), self.u("12", h[:-1], o))
        else:
            raise AssertionError(target_nm)

        om = self.omega.part(-1, m_in, n, window=self.window)
        rhs_el = om.table.get(in_tuple)
        rhs_terms = rhs_el.terms if rhs_el is not None else frozenset()
        label = _LHS_LABELS[target_nm]
        for o in out_tuples:
            mask = 0
            for idx in coeff[o]:
                mask |= 1 << idx
            rhs = 1 if o in rhs_terms else 0
            if mask == 0 and rhs == 0:
                continue
            meta = CertificateRow(t_deg, target_nm, in_tuple, o, rhs, label)
            yield mask, rhs, meta

    def _build_rows(self):
        b = self.b
        for t_deg in range(self.window + 1):
            rows = []
            for x in b.tuples(3, t_deg):
                rows.extend(self._rows_for((1, 3), x))
            for x in b.tuples(2, t_deg):
                rows.extend(self._rows_for((2, 2), x))
            for x in b.tuples(1, t_deg):
                rows.extend(self._rows_for((3, 1), x))
            self.rows_by_degree[t_deg] = rows


def decide_triviality(ctx: GSContext, omega: GSCochain,
                      window: int) -> TrivialityResult:
    """Decide whether omega = D(psi) is solvable with identity linear part.

    Returns Trivial with the canonical solution, NonTrivial with the
    smallest infeasible graded subsystem (the explicit odd-sum combination
    of contradictory equations), or Inconclusive when the host differential
    couples degrees across the window boundary.
    """
    if omega.r != 2:
        raise ValueError("triviality is decided for 2-cochains")
    for (p, m, n) in omega.parts:
        if (p, m, n) not in {(-1, 3, 1), (-1, 2, 2), (-1, 1, 3)}:
            raise ValueError(f"unexpected omega part at tridegree {(p, m, n)}")
    if max(omega.support_degrees(), default=0) > window:
        raise ValueError("omega has support beyond the window")
    if not ctx.host.d_is_zero():
        return TrivialityResult(
            "inconclusive",
            message="host differential couples degrees across the window boundary")
    if window > ctx.window:
        raise WindowViolation(f"window {window} exceeds context window {ctx.window}")

    cocycle = is_gs_2cocycle(ctx,
                             omega.part(-1, 3, 1, window),
                             omega.part(-1, 2, 2, window),
                             omega.part(-1, 1, 3, window),
                             window=window)
    if not cocycle.passed:
        raise ValueError("omega is not a GS 2-cocycle:\n" + cocycle.render())

    system = _TrivialitySystem(ctx, omega, window)
    values: dict[int, int] = {}

    def substituted(mask: int, rhs: int, upto: int) -> tuple[int, int]:
        """Split a row into (unknowns of degree upto, constant) given fixed values."""
        rest = 0
        while mask:
            i = (mask & -mask).bit_length() - 1
            mask &= mask - 1
            if system.unknown_degree[i] == upto and i not in values:
                rest |= 1 << i
            else:
                rhs ^= values.get(i, 0)
        return rest, rhs

    def joint_solve(max_deg: int):
        """Exact solve of all equations of degree <= max_deg, all unknowns free."""
        rows, metas = [], []
        for d in range(max_deg + 1):
            for mask, rhs, meta in system.rows_by_degree[d]:
                rows.append(mask)
                metas.append((rhs, meta))
        ncols = len(system.unknown_degree)
        bvec = 0
        for i, (rhs, _) in enumerate(metas):
            bvec |= rhs << i
        x = solve_rows(rows, ncols, bvec)
        if x is not None:
            return x, None
        # infeasible: rerun with row-combination bookkeeping for the witness
        solver = RrefSolver(BitMatrix.from_rows(rows, ncols))
        wmask = solver.infeasibility_witness(bvec)
        assert wmask is not None
        chosen = []
        while wmask:
            i = (wmask & -wmask).bit_length() - 1
            chosen.append(metas[i][1])
            wmask &= wmask - 1
        return None, chosen

    for t_deg in range(window + 1):
        rows = system.rows_by_degree[t_deg]
        local_cols: dict[int, int] = {}
        masks, rhss = [], []
        for mask, rhs, _ in rows:
            sub_mask, sub_rhs = substituted(mask, rhs, t_deg)
            cols = 0
            m2 = sub_mask
            while m2:
                i = (m2 & -m2).bit_length() - 1
                m2 &= m2 - 1
                if i not in local_cols:
                    local_cols[i] = len(local_cols)
                cols |= 1 << local_cols[i]
            masks.append(cols)
            rhss.append(sub_rhs)
        bvec = 0
        for i, rhs in enumerate(rhss):
            bvec |= rhs << i
        x = solve_rows(masks, max(1, len(local_cols)), bvec)
        if x is None:
            sol, cert_rows = joint_solve(t_deg)
            if sol is None:
                assert cert_rows is not None
                cert = _certify(cert_rows, t_deg)
                return TrivialityResult("nontrivial", certificate=cert)
            # adopt the joint solution for everything seen so far
            for key, idx in system.unknown_index.items():
                if system.unknown_degree[idx] <= t_deg:
                    values[idx] = (sol >> idx) & 1
        else:
            inv = {v: k for k, v in local_cols.items()}
            for local, global_i in inv.items():
                values[global_i] = (x >> local) & 1
            for key, idx in system.unknown_index.items():
                if system.unknown_degree[idx] == t_deg and idx not in values:
                    values[idx] = 0

    psi = _assemble_psi(ctx, system, values, window)
    check = total_D(ctx, psi)
    for key in set(check.parts) | set(omega.parts):
        lhs = check.part(*key, window=window)
        rhs = omega.part(*key, window=window)
        if not lhs.equal_within(rhs, window):
            raise AssertionError("solver produced an invalid solution")
    return TrivialityResult("trivial", psi=psi)


def _assemble_psi(ctx: GSContext, system: _TrivialitySystem,
                  values: dict[int, int], window: int) -> GSCochain:
    t21: dict[tuple[str, ...], Element] = {}
    t12: dict[tuple[str, ...], Element] = {}
    for (part, t, o), idx in system.unknown_index.items():
        if values.get(idx, 0):
            if part == "21":
                t21[t] = t21.get(t, Element.zero(ctx.space(1))) + \
                    Element.make(ctx.space(1), [o])
            else:
                t12[t] = t12.get(t, Element.zero(ctx.space(2))) + \
                    Element.make(ctx.space(2), [o])
    parts = {}
    m21 = MultiMap(ctx.space(2), ctx.space(1), -1, t21, window=window)
    m12 = MultiMap(ctx.space(1), ctx.space(2), -1, t12, window=window)
    if m21.table:
        parts[(-1, 2, 1)] = m21
    if m12.table:
        parts[(-1, 1, 2)] = m12
    return GSCochain(ctx.host, 1, parts)


def _certify(rows: list[CertificateRow], degree: int) -> Certificate:
    analysis = []
    targets = sorted({r.target for r in rows})
    for tgt in targets:
        ins = sorted({" ".join(r.in_tuple) for r in rows if r.target == tgt})
        analysis.append(
            f"target ({tgt[0]},{tgt[1]}) [{_LHS_LABELS[tgt]}] at inputs: {'; '.join(ins)}")
    rows_sorted = sorted(rows, key=lambda r: (r.degree, r.target, r.in_tuple, r.out_tuple))
    return Certificate(degree, rows_sorted, analysis)
