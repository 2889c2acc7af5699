"""Finitely-presented DG (Hopf) algebras over GF(2): file format and axioms.

The presentation file is line-oriented, whitespace-tokenized, `#` comments:

    field 2
    cap 8
    basis <name> <degree>          # repeated; file order fixes the basis order
    unit <name>
    d <name> = <element>
    mu <name> <name> = <element>
    delta <name> = <element>
    E 1 <q> <name> ; <name> ... <name> = <element>

with `<element> ::= 0 | term (+ term)*` and `term ::= name (* name)*`.
Omitted d/mu/delta/E lines denote zero, except the unit laws, which hold
implicitly.  Products whose degree would exceed the cap are not
representable: the tables simply stop there and the maps carry the cap as
their window, so using them beyond it errors instead of silently
truncating.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .reporting import Report
from .tensor import (
    Element,
    GradedBasis,
    MultiMap,
    TensorSpace,
    WindowViolation,
    compose,
    hom_tensor,
    identity_map,
    sigma_permute,
    tensor,
    zero_map,
)


class PresentationError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


@dataclass
class AlgebraPresentation:
    """Structure constants for d, mu, and optionally delta and the E family."""

    basis: GradedBasis
    unit: str
    d: MultiMap
    mu: MultiMap
    delta: MultiMap | None
    E: dict[int, MultiMap] = field(default_factory=dict)
    name: str = ""

    @property
    def cap(self) -> int:
        return self.basis.cap

    @property
    def space1(self) -> TensorSpace:
        return TensorSpace(self.basis, 1)

    def element(self, *term_strings: str) -> Element:
        """Build an arity-inferred element from `a*b`-style term strings."""
        terms = [tuple(s.split("*")) for s in term_strings]
        arity = len(terms[0]) if terms else 1
        return Element.make(TensorSpace(self.basis, arity), terms)

    def has_coproduct(self) -> bool:
        return self.delta is not None

    def d_is_zero(self) -> bool:
        return not self.d.table

    def counit_coefficient(self, e: Element) -> Element:
        """(eps tensor 1) applied to an arity-2 element: keep terms led by the unit."""
        out = [t[1:] for t in e.terms if t[0] == self.unit]
        return Element.make(TensorSpace(self.basis, e.space.arity - 1), out)

    def counit_coefficient_right(self, e: Element) -> Element:
        out = [t[:-1] for t in e.terms if t[-1] == self.unit]
        return Element.make(TensorSpace(self.basis, e.space.arity - 1), out)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _parse_element_tokens(tokens: list[str], names: set[str], line: int) -> list[tuple[str, ...]]:
    text = " ".join(tokens)
    if text.strip() == "0":
        return []
    terms = []
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise PresentationError("empty term in element", line)
        parts = tuple(p.strip() for p in chunk.split("*"))
        for p in parts:
            if p not in names:
                raise PresentationError(f"unknown basis name {p!r}", line)
        terms.append(parts)
    return terms


def parse_presentation(text: str, name: str = "") -> AlgebraPresentation:
    basis_names: list[str] = []
    basis_degrees: list[int] = []
    cap: int | None = None
    unit: str | None = None
    field_seen = False
    d_lines: list[tuple[int, str, list[str]]] = []
    mu_lines: list[tuple[int, str, str, list[str]]] = []
    delta_lines: list[tuple[int, str, list[str]]] = []
    e_lines: list[tuple[int, int, str, list[str], list[str]]] = []
    any_delta = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        try:
            if kind == "field":
                if tok[1:] != ["2"]:
                    raise PresentationError("only field 2 is supported", lineno)
                field_seen = True
            elif kind == "cap":
                cap = int(tok[1])
            elif kind == "basis":
                if len(tok) != 3:
                    raise PresentationError("basis needs <name> <degree>", lineno)
                if tok[1] == "0":
                    raise PresentationError("basis name '0' is reserved for the zero element", lineno)
                if any(ch in tok[1] for ch in "*+=;#"):
                    raise PresentationError(f"basis name {tok[1]!r} uses a reserved character", lineno)
                basis_names.append(tok[1])
                basis_degrees.append(int(tok[2]))
            elif kind == "unit":
                unit = tok[1]
            elif kind == "d":
                if len(tok) < 4 or tok[2] != "=":
                    raise PresentationError("d line must be `d <name> = <element>`", lineno)
                d_lines.append((lineno, tok[1], tok[3:]))
            elif kind == "mu":
                if len(tok) < 5 or tok[3] != "=":
                    raise PresentationError("mu line must be `mu <name> <name> = <element>`", lineno)
                mu_lines.append((lineno, tok[1], tok[2], tok[4:]))
            elif kind == "delta":
                if len(tok) < 4 or tok[2] != "=":
                    raise PresentationError("delta line must be `delta <name> = <element>`", lineno)
                any_delta = True
                delta_lines.append((lineno, tok[1], tok[3:]))
            elif kind == "E":
                if tok[1] != "1":
                    raise PresentationError("only E 1 q operations are supported", lineno)
                q = int(tok[2])
                if q < 1:
                    raise PresentationError("E arity q must be >= 1", lineno)
                if ";" not in tok:
                    raise PresentationError("E line needs `;` between the two argument groups", lineno)
                semi = tok.index(";")
                eq = tok.index("=")
                a_args = tok[3:semi]
                b_args = tok[semi + 1:eq]
                if len(a_args) != 1 or len(b_args) != q:
                    raise PresentationError(f"E 1 {q} takes 1;{q} argument names", lineno)
                e_lines.append((lineno, q, a_args[0], b_args, tok[eq + 1:]))
            else:
                raise PresentationError(f"unknown directive {kind!r}", lineno)
        except (IndexError, ValueError) as exc:
            if isinstance(exc, PresentationError):
                raise
            raise PresentationError(f"malformed line: {raw.strip()!r}", lineno) from exc

    if not field_seen:
        raise PresentationError("missing `field 2` line")
    if cap is None:
        raise PresentationError("missing `cap` line")
    if not basis_names:
        raise PresentationError("empty basis")
    if unit is None:
        raise PresentationError("missing `unit` line")
    if unit not in basis_names:
        raise PresentationError(f"unit {unit!r} is not a basis element")

    try:
        basis = GradedBasis(tuple(basis_names), tuple(basis_degrees), cap)
    except ValueError as exc:
        raise PresentationError(str(exc)) from exc
    if basis.degree_of[unit] != 0:
        raise PresentationError(f"unit {unit!r} must have degree 0")
    names = set(basis_names)
    sp1 = TensorSpace(basis, 1)
    sp2 = TensorSpace(basis, 2)

    def element(tokens, arity, line):
        terms = _parse_element_tokens(tokens, names, line)
        for t in terms:
            if len(t) != arity:
                raise PresentationError(f"term {'*'.join(t)} has arity {len(t)}, expected {arity}", line)
        return Element.make(TensorSpace(basis, arity), terms)

    def check_degree(in_deg, value, p, line):
        for deg in value.term_degrees():
            if deg != in_deg + p:
                raise PresentationError(
                    f"degree-inhomogeneous entry: output degree {deg}, expected {in_deg + p}", line)
        if in_deg + p > cap and not value.is_zero():
            raise PresentationError("entry output degree exceeds the cap", line)

    d_table: dict[tuple[str, ...], Element] = {}
    for line, nm, rhs in d_lines:
        if nm not in names:
            raise PresentationError(f"unknown basis name {nm!r}", line)
        v = element(rhs, 1, line)
        check_degree(basis.degree_of[nm], v, 1, line)
        if (nm,) in d_table:
            raise PresentationError(f"duplicate d line for {nm}", line)
        d_table[(nm,)] = v

    mu_table: dict[tuple[str, ...], Element] = {}
    for line, x, y, rhs in mu_lines:
        for nm in (x, y):
            if nm not in names:
                raise PresentationError(f"unknown basis name {nm!r}", line)
        in_deg = basis.degree_of[x] + basis.degree_of[y]
        if in_deg > cap:
            raise PresentationError("product of degrees beyond the cap cannot be declared", line)
        v = element(rhs, 1, line)
        check_degree(in_deg, v, 0, line)
        if (x, y) in mu_table:
            raise PresentationError(f"duplicate mu line for {x} {y}", line)
        mu_table[(x, y)] = v

    # implicit unit laws, unless explicitly (consistently) given
    for nm in basis_names:
        for key in ((unit, nm), (nm, unit)):
            want = Element.make(sp1, [(nm,)])
            if key in mu_table:
                if mu_table[key] != want:
                    raise PresentationError(f"mu line for {key} contradicts the unit law")
            else:
                mu_table[key] = want

    delta: MultiMap | None = None
    if any_delta:
        delta_table: dict[tuple[str, ...], Element] = {}
        for line, nm, rhs in delta_lines:
            if nm not in names:
                raise PresentationError(f"unknown basis name {nm!r}", line)
            v = element(rhs, 2, line)
            check_degree(basis.degree_of[nm], v, 0, line)
            if (nm,) in delta_table:
                raise PresentationError(f"duplicate delta line for {nm}", line)
            delta_table[(nm,)] = v
        want_unit = Element.make(sp2, [(unit, unit)])
        if (unit,) in delta_table:
            if delta_table[(unit,)] != want_unit:
                raise PresentationError("delta of the unit must be unit*unit")
        else:
            delta_table[(unit,)] = want_unit
        delta = MultiMap(sp1, sp2, 0, delta_table, window=cap)

    e_maps: dict[int, dict[tuple[str, ...], Element]] = {}
    for line, q, a, bs, rhs in e_lines:
        for nm in [a] + bs:
            if nm not in names:
                raise PresentationError(f"unknown basis name {nm!r}", line)
        key = (a,) + tuple(bs)
        in_deg = basis.tuple_degree(key)
        v = element(rhs, 1, line)
        check_degree(in_deg, v, -q, line)
        table = e_maps.setdefault(q, {})
        if key in table:
            raise PresentationError(f"duplicate E line for {key}", line)
        table[key] = v

    # a zero differential is exactly zero everywhere, not merely unknown above cap
    d_map = MultiMap(sp1, sp1, 1, d_table, window=(cap - 1) if d_table else None)
    mu_map = MultiMap(sp2, sp1, 0, mu_table, window=cap)
    # E_{1,q} lowers degree by q, so entries up to input degree cap + q stay declarable
    E = {q: MultiMap(TensorSpace(basis, 1 + q), sp1, -q, table, window=cap + q)
         for q, table in e_maps.items()}
    return AlgebraPresentation(basis, unit, d_map, mu_map, delta, E, name=name)


def render_presentation(p: AlgebraPresentation) -> str:
    """Emit a presentation back in the input grammar (parse round-trips)."""
    lines = ["field 2", f"cap {p.cap}"]
    for nm, deg in zip(p.basis.names, p.basis.degrees):
        lines.append(f"basis {nm} {deg}")
    lines.append(f"unit {p.unit}")
    for t in p.d.support():
        lines.append(f"d {t[0]} = {p.d.table[t].render().replace(' ', '')}")
    for t in p.mu.support():
        if p.unit in t:
            continue  # unit laws are implicit
        lines.append(f"mu {t[0]} {t[1]} = {p.mu.table[t].render().replace(' ', '')}")
    if p.delta is not None:
        for t in p.delta.support():
            if t == (p.unit,):
                continue
            lines.append(f"delta {t[0]} = {p.delta.table[t].render().replace(' ', '')}")
    for q in sorted(p.E):
        for t in p.E[q].support():
            rhs = p.E[q].table[t].render().replace(" ", "")
            lines.append(f"E 1 {q} {t[0]} ; {' '.join(t[1:])} = {rhs}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# windows and axiom checks
# ---------------------------------------------------------------------------

def safe_window(p: AlgebraPresentation, shift: int) -> int:
    """Largest input degree keeping every composite of output excess `shift` under the cap."""
    return p.cap - shift


def _exhaustive_equal(p: AlgebraPresentation, lhs: MultiMap, rhs: MultiMap,
                      window: int, report: Report, name: str):
    arity = lhs.m
    diff = lhs + rhs
    if diff.window is not None and window > diff.window:
        raise WindowViolation(
            f"{name}: check window {window} exceeds composite window {diff.window}")
    for t in p.basis.tuples_upto(arity, window):
        v = diff.table.get(t)
        if v is not None and not v.is_zero():
            report.add(name, False,
                       f"witness ({', '.join(t)}): lhs+rhs = {v.render()}")
            return
    report.add(name, True)


def validate_dgha(p: AlgebraPresentation) -> Report:
    """Check all order-<=3 axioms exhaustively on basis tuples in safe windows."""
    rep = Report(f"DG{'H' if p.has_coproduct() else ''}A axioms for "
                 f"{p.name or 'presentation'} (cap {p.cap})")
    d, mu, delta = p.d, p.mu, p.delta
    one = identity_map(p.basis)
    d_shift = 0 if p.d_is_zero() else 1

    # d^2 = 0
    _exhaustive_equal(p, compose(d, d), zero_map(p.space1, p.space1, 2),
                      safe_window(p, 2 * d_shift), rep, "d_squared_zero")
    # derivation: d mu = mu (d ox 1 + 1 ox d)
    _exhaustive_equal(p, compose(d, mu),
                      compose(mu, hom_tensor(d, one)) + compose(mu, hom_tensor(one, d)),
                      safe_window(p, d_shift), rep, "d_derivation")
    # associativity
    _exhaustive_equal(p, compose(mu, hom_tensor(mu, one)),
                      compose(mu, hom_tensor(one, mu)),
                      safe_window(p, 0), rep, "mu_associative")
    # unit laws
    unit_ok = True
    witness = ""
    for nm in p.basis.names:
        left = mu.value((p.unit, nm))
        right = mu.value((nm, p.unit))
        want = Element.make(p.space1, [(nm,)])
        if left != want or right != want:
            unit_ok, witness = False, f"witness {nm}"
            break
    rep.add("unit_laws", unit_ok, witness)

    if delta is not None:
        # coderivation: delta d = (d ox 1 + 1 ox d) delta
        _exhaustive_equal(p, compose(delta, d),
                          compose(hom_tensor(d, one), delta) + compose(hom_tensor(one, d), delta),
                          safe_window(p, d_shift), rep, "d_coderivation")
        # coassociativity
        _exhaustive_equal(p, compose(hom_tensor(delta, one), delta),
                          compose(hom_tensor(one, delta), delta),
                          safe_window(p, 0), rep, "delta_coassociative")
        # counit laws
        counit_ok = True
        witness = ""
        for nm in p.basis.names:
            e = delta.value((nm,))
            want = Element.make(p.space1, [(nm,)])
            if p.counit_coefficient(e) != want or p.counit_coefficient_right(e) != want:
                counit_ok, witness = False, f"witness {nm}"
                break
        rep.add("counit_laws", counit_ok, witness)
        # Hopf compatibility: delta mu = (mu ox mu) sigma_{2,2} (delta ox delta)
        lhs = compose(delta, mu)
        sigma_dd = _sigma22_after(hom_tensor(delta, delta))
        rhs = compose(hom_tensor(mu, mu), sigma_dd)
        _exhaustive_equal(p, lhs, rhs, safe_window(p, 0), rep, "hopf_compatibility")
    return rep


def _sigma22_after(f: MultiMap) -> MultiMap:
    """Post-compose an arity-4-output map with the sigma_{2,2} block transpose."""
    table = {t: sigma_permute(2, 2, v) for t, v in f.table.items()}
    return MultiMap(f.in_space, f.out_space, f.p, table, f.window)


def check_kk_order4(p: AlgebraPresentation,
                    w13: MultiMap, w22: MultiMap, w31: MultiMap) -> Report:
    """Order-4 structure relations for homotopies w13 (3->1), w22 (2->2), w31 (1->3).

    With a nonzero differential these say the three maps are an associator,
    a compatibility homotopy, and a coassociator; with d = 0 they reduce to
    the strict order-3 relations plus the vanishing of the nabla of each
    homotopy.
    """
    rep = Report(f"order-4 structure relations (cap {p.cap})")
    if p.delta is None:
        raise PresentationError("order-4 relations need a coproduct")
    d, mu, delta = p.d, p.mu, p.delta
    one = identity_map(p.basis)
    for mm, (em, en) in ((w13, (3, 1)), (w22, (2, 2)), (w31, (1, 3))):
        if (mm.m, mm.n, mm.p) != (em, en, -1):
            raise PresentationError(
                f"homotopy has shape ({mm.m},{mm.n},{mm.p}), expected ({em},{en},-1)")
    d_shift = 0 if p.d_is_zero() else 1

    def nabla(f: MultiMap) -> MultiMap:
        d_n = _tensor_power_map(d, one, f.n)
        d_m = _tensor_power_map(d, one, f.m)
        return compose(d_n, f) + compose(f, d_m)

    # associator: nabla w13 = mu(mu ox 1 + 1 ox mu)
    _exhaustive_equal(p, nabla(w13),
                      compose(mu, hom_tensor(mu, one)) + compose(mu, hom_tensor(one, mu)),
                      safe_window(p, d_shift), rep, "associator")
    # homotopy compatibility: nabla w22 = (mu ox mu) sigma (delta ox delta) + delta mu
    _exhaustive_equal(p, nabla(w22),
                      compose(hom_tensor(mu, mu), _sigma22_after(hom_tensor(delta, delta)))
                      + compose(delta, mu),
                      safe_window(p, d_shift), rep, "homotopy_compatibility")
    # coassociator: nabla w31 = (delta ox 1 + 1 ox delta) delta
    _exhaustive_equal(p, nabla(w31),
                      compose(hom_tensor(delta, one), delta)
                      + compose(hom_tensor(one, delta), delta),
                      safe_window(p, d_shift), rep, "coassociator")
    return rep


def _tensor_power_map(f: MultiMap, one: MultiMap, k: int) -> MultiMap:
    """sum_s 1^s ox f ox 1^(k-s-1) for an arity (1,1) map f."""
    total = None
    for s in range(k):
        factors = [one] * s + [f] + [one] * (k - s - 1)
        term = factors[0]
        for g in factors[1:]:
            term = hom_tensor(term, g)
        total = term if total is None else total + term
    assert total is not None
    return total
