"""Acceptance suite: one test per criterion, exact verdicts, timed.

Each test prints a single `criterion N: PASS` line with its measured
runtime so the suite output doubles as the acceptance report.  All
equalities are exact GF(2) identities; there are no tolerances to tune.
"""

from __future__ import annotations

import random
import time

import pytest

from gshopf.bar import (
    bar_basis,
    hga_relations_check,
    homology,
    perturbed_product_by_iteration,
    perturbed_product_letters,
    word_name,
)
from gshopf.demos import build_pipeline, demo_example4, demo_loopspace
from gshopf.gf2 import BitMatrix, homology_of_pair, kernel_basis
from gshopf.gs import (
    GSCochain,
    GSContext,
    decide_triviality,
    gs_delta,
    gs_partial,
    is_gs_2cocycle,
    make_order4_cochain,
    nabla,
    parse_cochain,
    random_cochain,
    total_D,
)
from gshopf.presentation import parse_presentation
from gshopf.tensor import Element, MultiMap, tensor
from gshopf.transfer import TransferState, transfer_order3, transfer_order4
from tests.conftest import load_data

SEED = 20260810


def report(n: int, text: str, seconds: float | None = None):
    t = f" ({seconds:.1f}s)" if seconds is not None else ""
    print(f"\ncriterion {n}: PASS - {text}{t}")


@pytest.fixture(scope="module")
def hosts(example4_H, loopspace_H):
    return {"example4": example4_H.presentation,
            "loopspace": loopspace_H.presentation}


def _sample_cochains(ctx, count, seed):
    rng = random.Random(seed)
    return [random_cochain(ctx, rng, r=rng.choice([1, 2, 3]), max_degree=6)
            for _ in range(count)]


def test_criterion_1_D_squared_zero(hosts):
    t0 = time.time()
    total = 0
    for name, host in hosts.items():
        ctx = GSContext(host, window=6)
        for i, c in enumerate(_sample_cochains(ctx, 50, SEED)):
            dd = total_D(ctx, total_D(ctx, c))
            assert dd.is_zero_within(6), (name, i)
            total += 1
    elapsed = time.time() - t0
    assert total == 100
    assert elapsed < 30.0, f"runtime target exceeded: {elapsed:.1f}s"
    report(1, "D(D(c)) = 0 exactly on 100 seeded cochains over both hosts", elapsed)


def test_criterion_2_strict_commutation(hosts):
    t0 = time.time()
    checked = 0
    for name, host in hosts.items():
        ctx = GSContext(host, window=6)
        for i, c in enumerate(_sample_cochains(ctx, 50, SEED)):
            for f in c.parts.values():
                assert gs_partial(ctx, gs_delta(ctx, f)).equal_within(
                    gs_delta(ctx, gs_partial(ctx, f)), 6), (name, i)
                # the host differentials vanish, so both nabla composites are zero
                assert nabla(ctx, gs_partial(ctx, f)).equal_within(
                    gs_partial(ctx, nabla(ctx, f)), 5), (name, i)
                assert nabla(ctx, gs_delta(ctx, f)).equal_within(
                    gs_delta(ctx, nabla(ctx, f)), 5), (name, i)
                checked += 1
    elapsed = time.time() - t0
    report(2, f"partial-delta, nabla-partial, nabla-delta commute exactly on "
              f"{checked} parts of the same sample set", elapsed)


def test_criterion_3_example4_reproduction():
    t0 = time.time()
    H = build_pipeline("example4", cap=8)
    host = H.presentation
    ctx = GSContext(host, window=host.cap)
    psi21 = parse_cochain("omega 1 2 : beta2 beta2 -> gamma\n",
                          host).parts[(-1, 2, 1)]

    dpsi = gs_delta(ctx, psi21)
    assert dpsi.value(("beta2", "beta2")) == host.element(
        "alpha1*alpha2", "alpha2*alpha1")
    ppsi = gs_partial(ctx, psi21)
    for i in ("alpha1", "alpha2"):
        expected = host.mu.value((i, "gamma"))  # alpha_i | gamma + gamma | alpha_i
        assert ppsi.value((i, "beta2", "beta2")) == expected
        assert ppsi.value(("beta2", "beta2", i)) == expected

    psi = GSCochain(host, 1, {(-1, 2, 1): psi21})
    omega = total_D(ctx, psi)
    cocycle = is_gs_2cocycle(ctx, omega.part(-1, 3, 1, host.cap),
                             omega.part(-1, 2, 2, host.cap),
                             omega.part(-1, 1, 3, host.cap))
    assert cocycle.passed, cocycle.render()

    W = 5
    parts = {}
    for k, f in omega.parts.items():
        table = {t: v for t, v in f.table.items()
                 if host.basis.tuple_degree(t) <= W}
        if table:
            parts[k] = MultiMap(f.in_space, f.out_space, f.p, table, window=W)
    res = decide_triviality(ctx, GSCochain(host, 2, parts), window=W)
    assert res.status == "trivial"

    # the stated psi is itself a valid solution on the full usable range
    recheck = total_D(ctx, psi)
    for k in set(recheck.parts) | set(omega.parts):
        assert recheck.part(*k, window=host.cap).equal_within(
            omega.part(*k, window=host.cap), host.cap)
    elapsed = time.time() - t0
    assert elapsed < 10.0, f"runtime target exceeded: {elapsed:.1f}s"
    report(3, "delta/partial values, cocycle, Trivial verdict, and the stated "
              "1-cochain all verify exactly at cap 8", elapsed)


@pytest.fixture(scope="module")
def timed_loop_transfer():
    t0 = time.time()
    H = build_pipeline("loopspace", cap=8)
    state = TransferState(H, pins={(2, 1): {("beta", "beta"): H.bar.el("[a2|a3]")}})
    transfer_order3(state)
    transfer_order4(state)
    return state, time.time() - t0


def test_criterion_4_loopspace_transfer(timed_loop_transfer):
    state, elapsed = timed_loop_transfer
    H = state.H
    host = H.presentation
    b = host.basis

    assert state.homotopy(2, 1, ("beta", "beta")) == H.bar.el("[a2|a3]")
    assert state.omega(2, 2).value(("beta", "beta")) == host.element("alpha1*alpha2")
    assert state.omega(3, 1).table == {}

    w13 = state.omega(1, 3)
    for t in b.tuples_upto(3, state.window):
        v = w13.value(t)
        front = t[:2] == ("beta", "beta")
        back = t[1:] == ("beta", "beta")
        if not front and not back:
            assert v.is_zero(), t
    for s in b.names:
        if b.tuple_degree(("beta", "beta", s)) > state.window:
            continue
        v = w13.value(("beta", "beta", s))
        assert v == w13.value((s, "beta", "beta"))  # symmetric
        if s in ("1", "beta"):
            assert v.is_zero()
        elif s in ("alpha1", "alpha2", "gamma"):
            # the product with gamma = mu(alpha1, alpha2); zero mod 2 here
            assert v == host.mu.value(("gamma", s))
        elif s == "h2_2":
            # divided-power classes: the product reading fails the (2,3)
            # structure relation, so the canonical value is pinned instead
            assert v.is_zero()
        elif s in ("h3_0", "h3_2"):
            assert v == H.class_of(H.bar.el("[a2|a2|b|a3]"))
    assert elapsed < 60.0, f"runtime target exceeded: {elapsed:.1f}s"
    report(4, "pinned transfer reproduces omega22(beta,beta) = alpha1*alpha2, "
              "omega31 = 0, and the symmetric omega13 support exactly at cap 8",
           elapsed)


def test_criterion_5_nontriviality_certificate(timed_loop_transfer):
    state, _ = timed_loop_transfer
    host = state.H.presentation
    ctx = GSContext(host, window=state.window)
    omega = make_order4_cochain(host, state.omega(1, 3), state.omega(2, 2),
                                state.omega(3, 1))
    t0 = time.time()
    res = decide_triviality(ctx, omega, window=state.window)
    elapsed = time.time() - t0
    assert res.status == "nontrivial"
    cert = res.certificate
    assert cert is not None and cert.degree == 4
    bb_rows = [r for r in cert.rows
               if r.in_tuple == ("beta", "beta") and r.target == (2, 2)]
    assert bb_rows
    for r in bb_rows:
        assert "psi12" in r.lhs_label and "psi21" in r.lhs_label
    assert elapsed < 10.0, f"runtime target exceeded: {elapsed:.1f}s"
    report(5, "NonTrivial with the (beta, beta) subsystem certifying both "
              "impossibility arguments", elapsed)


def test_criterion_6_bar_hopf_invariants(example4_bar, loopspace_bar):
    from gshopf.tensor import sigma_permute
    t0 = time.time()
    for bc in (example4_bar, loopspace_bar):
        th2 = bc.tensor_homology(2)
        for deg in range(bc.cap - 1):
            for w in bc.words[deg]:
                assert bc.d.apply(bc.d.value((word_name(w),))).is_zero()
        for d1 in range(7):
            for d2 in range(7 - d1):
                for w1 in bc.words[d1]:
                    for w2 in bc.words[d2]:
                        k1, k2 = word_name(w1), word_name(w2)
                        e1 = Element.make(bc.space1, [(k1,)])
                        e2 = Element.make(bc.space1, [(k2,)])
                        # coassociativity of the deconcatenation
                        if d2 == 0 and w2 == ():
                            dv = bc.delta.value((k1,))
                            lhs = rhs = None
                            for (u, v) in dv.terms:
                                l1 = tensor(bc.delta.value((u,)),
                                            Element.make(bc.space1, [(v,)]))
                                r1 = tensor(Element.make(bc.space1, [(u,)]),
                                            bc.delta.value((v,)))
                                lhs = l1 if lhs is None else lhs + l1
                                rhs = r1 if rhs is None else rhs + r1
                            assert lhs == rhs
                        # Hopf compatibility of the shuffle
                        lhs = bc.delta.apply(bc.sh.value((k1, k2)))
                        spread = sigma_permute(
                            2, 2, tensor(bc.delta.value((k1,)), bc.delta.value((k2,))))
                        rhs = None
                        for (u1, u2, v1, v2) in spread.terms:
                            piece = tensor(bc.sh.value((u1, u2)), bc.sh.value((v1, v2)))
                            rhs = piece if rhs is None else rhs + piece
                        assert lhs == (rhs if rhs is not None else lhs)
                        # the perturbed product is a chain map
                        lhs = bc.d.apply(bc.mu.value((k1, k2)))
                        rhs = bc.mu.apply(tensor(bc.d.value((k1,)), e2)) \
                            + bc.mu.apply(tensor(e1, bc.d.value((k2,))))
                        assert lhs == rhs, (w1, w2)
    elapsed = time.time() - t0
    report(6, "d^2 = 0, coassociativity, Hopf compatibility of the shuffle, and "
              "the chain-map property of the perturbed product, exhaustively "
              "through bar degree 6 on both hosts", elapsed)


def test_criterion_7_hga_relations(loopspace_algebra):
    t0 = time.time()
    rep = hga_relations_check(loopspace_algebra, window=12)
    assert rep.passed, rep.render()
    # the q = 1 specialization, evaluated directly: the cup-style operation
    # cobounds the commutator (with d = 0 the left side collapses)
    alg = loopspace_algebra
    for x in alg.basis.names:
        for y in alg.basis.names:
            if alg.basis.tuple_degree((x, y)) > 12 or "1" in (x, y):
                continue
            cup = alg.E[1].value((x, y))
            lhs = alg.d.apply(cup)  # + d(x) terms, all zero here
            rhs = alg.mu.value((x, y)) + alg.mu.value((y, x))
            assert lhs == rhs, (x, y)
    elapsed = time.time() - t0
    report(7, "relations one, two, three of the E family hold on every tuple in "
              "window, including the q = 1 commutator identity", elapsed)


def test_criterion_8_spot_check_strings():
    t0 = time.time()
    out4 = demo_example4(cap=8).to_text()
    outl = demo_loopspace(cap=8).to_text()
    for text, where in ((out4, "example4"), (outl, "loopspace")):
        assert "sh([a|b] (x) [c]) = [a|b|c] + [a|c|b] + [c|a|b]" in text, where
        assert "mu_bar([a] (x) [b]) = [ab1] + [a|b] + [b|a]" in text, where
    assert ("sigma22(delta(beta) (x) delta(beta)) = 1*1*beta*beta + "
            "1*beta*beta*1 + beta*1*1*beta + beta*beta*1*1") in outl
    assert ("delta(gamma) = 1*gamma + alpha1*alpha2 + alpha2*alpha1 + gamma*1"
            ) in out4
    elapsed = time.time() - t0
    report(8, "the four verbatim expansions appear in the demo reports", elapsed)


def test_criterion_9_oracle_equivalence(loopspace_bar):
    t0 = time.time()
    # product: grouped interleavings against the iterated-coproduct expansion
    bc = loopspace_bar
    words = [w for deg in range(bc.cap + 1) for w in bc.words[deg] if len(w) <= 3]
    checked = 0
    for w1 in words:
        for w2 in words:
            if bc.word_degree(w1) + bc.word_degree(w2) > bc.cap:
                continue
            got = perturbed_product_letters(bc.algebra, w1, w2, bc.space1)
            expect = perturbed_product_by_iteration(bc.algebra, w1, w2)
            assert got.terms == frozenset((word_name(w),) for w in expect)
            checked += 1
    assert checked > 500

    # homology: canonical quotient data against brute-force enumeration
    rng = random.Random(SEED)
    for trial in range(30):
        dim = rng.randint(1, 6)
        rows = [rng.getrandbits(dim) for _ in range(rng.randint(0, 4))]
        d_out = BitMatrix.from_rows(rows, dim)
        ker = kernel_basis(d_out)
        cols = []
        for _ in range(rng.randint(0, 4)):
            v = 0
            for k in ker:
                if rng.random() < 0.5:
                    v ^= k
            cols.append(v)
        d_in = BitMatrix(dim, len(cols), tuple(cols))
        h = homology_of_pair(d_in, d_out, dim=dim)
        kernel = {x for x in range(1 << dim) if d_out.matvec(x) == 0}
        image = {d_in.matvec(x) for x in range(1 << d_in.cols)}
        assert len(kernel) == 1 << h.kernel_dim
        assert len(image) == 1 << h.image_rank
        seen = {}
        for v in kernel:
            cls = h.class_of(v)
            for b in image:
                assert h.class_of(v ^ b) == cls
            seen.setdefault(cls, set()).add(v)
        assert len(seen) == 1 << h.class_count
        for c in range(1 << h.class_count):
            assert h.class_of(h.representative_of(c)) == c
    elapsed = time.time() - t0
    report(9, f"perturbed product matches the direct expansion on {checked} "
              "pairs; quotient data matches brute force on 30 random complexes",
           elapsed)
