"""Presentation files: parsing, validation, order-4 relation checks."""

from __future__ import annotations

import pytest

from gshopf.presentation import (
    AlgebraPresentation,
    PresentationError,
    check_kk_order4,
    parse_presentation,
    render_presentation,
    safe_window,
    validate_dgha,
)
from gshopf.tensor import Element, MultiMap, TensorSpace, zero_map

TRIVIAL = """\
field 2
cap 0
basis one 0
unit one
mu one one = one
delta one = one*one
"""

EXAMPLE4_DGA = """\
# five-element algebra with a single nonzero product
field 2
cap 10
basis 1 0
basis a2 2
basis a3 3
basis b3 3
basis a2a3 5
unit 1
mu a2 a3 = a2a3
mu a3 a2 = a2a3
"""

CHAIN_HOPF = """\
field 2
cap 5
basis 1 0
basis x 2
basis y 3
basis xy 5
unit 1
d x = y
mu x y = xy
mu y x = xy
delta x = 1*x + x*1
delta y = 1*y + y*1
delta xy = 1*xy + x*y + y*x + xy*1
"""


def test_parse_trivial_hopf():
    p = parse_presentation(TRIVIAL)
    assert p.basis.names == ("one",)
    assert p.has_coproduct()
    assert validate_dgha(p).passed


def test_parse_example4_dga():
    p = parse_presentation(EXAMPLE4_DGA, name="A")
    assert p.basis.names == ("1", "a2", "a3", "b3", "a2a3")
    assert p.d_is_zero()
    assert not p.has_coproduct()
    assert p.mu.value(("a2", "a3")) == p.element("a2a3")
    assert p.mu.value(("a3", "a2")) == p.element("a2a3")
    assert p.mu.value(("a2", "a2")).is_zero()
    # implicit unit law
    assert p.mu.value(("1", "b3")) == p.element("b3")
    assert validate_dgha(p).passed


def test_parse_degree_inhomogeneous_entry():
    bad = EXAMPLE4_DGA.replace("mu a2 a3 = a2a3", "mu a2 a3 = a3")
    with pytest.raises(PresentationError) as exc:
        parse_presentation(bad)
    assert "inhomogeneous" in str(exc.value)


def test_parse_unknown_name_has_line_number():
    bad = TRIVIAL + "mu one two = one\n"
    with pytest.raises(PresentationError) as exc:
        parse_presentation(bad)
    assert "line 7" in str(exc.value)
    assert "two" in str(exc.value)


def test_parse_syntax_error():
    with pytest.raises(PresentationError):
        parse_presentation("field 2\ncap 1\nbasis one 0\nunit one\nmu one = one\n")


def test_parse_requires_field_cap_unit():
    with pytest.raises(PresentationError):
        parse_presentation("cap 1\nbasis one 0\nunit one\n")
    with pytest.raises(PresentationError):
        parse_presentation("field 2\nbasis one 0\nunit one\n")
    with pytest.raises(PresentationError):
        parse_presentation("field 2\ncap 1\nbasis one 0\n")


def test_parse_rejects_field_3():
    with pytest.raises(PresentationError):
        parse_presentation(TRIVIAL.replace("field 2", "field 3"))


def test_chain_hopf_validates():
    p = parse_presentation(CHAIN_HOPF, name="chain")
    assert not p.d_is_zero()
    rep = validate_dgha(p)
    assert rep.passed, rep.render()


def test_validator_reports_witness_on_broken_compatibility():
    # asymmetric product with a symmetric coproduct breaks Hopf compatibility
    text = """\
field 2
cap 10
basis 1 0
basis a2 2
basis a3 3
basis a2a3 5
unit 1
mu a2 a3 = a2a3
delta a2 = 1*a2 + a2*1
delta a3 = 1*a3 + a3*1
delta a2a3 = 1*a2a3 + a2a3*1 + a2*a3 + a3*a2
"""
    p = parse_presentation(text)
    rep = validate_dgha(p)
    failed = {c.name: c for c in rep.checks if not c.passed}
    assert "hopf_compatibility" in failed
    assert "a3, a2" in failed["hopf_compatibility"].witness


def test_e_family_parsing():
    text = EXAMPLE4_DGA.replace("basis b3 3", "basis b3 3") + "E 1 1 b3 ; b3 = a2a3\n"
    p = parse_presentation(text)
    assert 1 in p.E
    assert p.E[1].value(("b3", "b3")) == p.element("a2a3")
    assert p.E[1].p == -1


def test_e_degree_check():
    bad = EXAMPLE4_DGA + "E 1 1 b3 ; b3 = b3\n"
    with pytest.raises(PresentationError):
        parse_presentation(bad)


def test_safe_window():
    p = parse_presentation(EXAMPLE4_DGA)
    assert safe_window(p, 0) == 10
    assert safe_window(p, 1) == 9


def test_render_roundtrip():
    p = parse_presentation(EXAMPLE4_DGA, name="A")
    text = render_presentation(p)
    q = parse_presentation(text, name="A")
    assert q.basis == p.basis
    assert q.mu.table == p.mu.table
    assert q.d.table == p.d.table


def test_kk_order4_strict_case():
    # d = 0, associative, coassociative, compatible, homotopies zero -> pass
    text = """\
field 2
cap 6
basis 1 0
basis x 2
unit 1
delta x = 1*x + x*1
"""
    p = parse_presentation(text)
    sp = lambda k: TensorSpace(p.basis, k)
    rep = check_kk_order4(p,
                          zero_map(sp(3), sp(1), -1),
                          zero_map(sp(2), sp(2), -1),
                          zero_map(sp(1), sp(3), -1))
    assert rep.passed, rep.render()


def test_kk_order4_detects_noncocycle_perturbation():
    text = """\
field 2
cap 6
basis 1 0
basis x 2
basis z 3
unit 1
delta x = 1*x + x*1
delta z = 1*z + z*1
"""
    p = parse_presentation(text)
    sp = lambda k: TensorSpace(p.basis, k)
    w22 = MultiMap(sp(2), sp(2), -1,
                   {("x", "x"): Element.make(sp(2), [("1", "z")])}, window=6)
    rep = check_kk_order4(p, zero_map(sp(3), sp(1), -1), w22,
                          zero_map(sp(1), sp(3), -1))
    assert not rep.passed
    failed = [c for c in rep.checks if not c.passed]
    assert failed and "witness" in failed[0].witness
