import random

import pytest
from hypothesis import given, settings, strategies as st

from reebcycle.algebra import AbelianGroup, CoefficientModule, QuotientLabelModule
from reebcycle.complex import Cochain, PreconditionError
from reebcycle.cycle import (LabelTable, Labeler, build_cycle, check_cycle, corollary_report,
                             nontriviality, wall_incidence)
from reebcycle.generators import (circle_generator_cocycle, dual_cocycle_torus, octahedron_height,
                                  rp2xS1, sphere3_height, t3, torus, torus_height, two_bump_sphere)
from reebcycle.maps import pullback_cochain, subdivide_map, subdivision_retraction
from reebcycle.reeb import build_reeb

Z, Z2 = CoefficientModule.integers(), CoefficientModule.mod2()


def coboundary(K, seed, A=Z):
    rng = random.Random(seed)
    return Cochain(0, A, {s: A.element(rng.randint(-3, 3)) for s in K[0]}).coboundary(K)


def tube_cocycle():
    return pullback_cochain(torus(3, 6).first, circle_generator_cocycle(3))


def fixture(name):
    if name == "torus-projection":
        f = torus(3, 3).first
        return f, Labeler.from_cocycle(dual_cocycle_torus(3, 3))
    if name == "torus-height":
        return torus_height(), Labeler.from_cocycle(tube_cocycle())
    if name == "octahedron-height":
        f = octahedron_height()
        return f, Labeler.from_cocycle(coboundary(f.source, 5))
    if name == "two-bump-sphere":
        f = two_bump_sphere()
        return f, Labeler.from_cocycle(coboundary(f.source, 6))
    if name == "rp2xS1":
        return rp2xS1(3).second, Labeler.chi2()
    if name == "t3":
        return t3().second, Labeler.chi2()
    if name == "sphere3-height":
        return sphere3_height(), Labeler.chi2()
    raise KeyError(name)


NAMES = ["torus-projection", "torus-height", "octahedron-height", "two-bump-sphere", "rp2xS1",
         "t3", "sphere3-height"]


def test_torus_projection_labels():
    f, L = fixture("torus-projection")
    W = build_reeb(f)
    c = build_cycle(f, W, L)
    assert c.provenance == "cocycle-evaluation"
    assert all(abs(x.coords[0]) == 1 for x in c.coeffs.values())
    assert all(x.coords == (1,) for x in c.normalized.values())


def test_chi2_labels_on_rp2_bundle():
    f, L = fixture("rp2xS1")
    c = build_cycle(f, build_reeb(f), L)
    assert c.module.structure == AbelianGroup(0, (2,))
    assert all(x.coords == (1,) for x in c.coeffs.values())


def test_torus_height_labels_cancel_at_the_saddles():
    f, L = fixture("torus-height")
    W = build_reeb(f)
    c = build_cycle(f, W, L)
    by_target = {}
    for k, x in c.coeffs.items():
        by_target.setdefault(W.cells[k].target, []).append(x.coords[0])
    assert by_target[(0, 1)] == [0] and by_target[(2, 3)] == [0]
    assert sorted(by_target[(1, 2)]) == [-1, 1]


@pytest.mark.parametrize("name", NAMES)
def test_every_fixture_is_a_cycle(name):
    f, L = fixture(name)
    W = build_reeb(f)
    c = build_cycle(f, W, L)
    chk = check_cycle(c, W)
    assert chk.passed and not c.contract_violations


@pytest.mark.parametrize("name", NAMES)
def test_perturbation_hits_exactly_the_cells_walls(name):
    f, L = fixture(name)
    W = build_reeb(f)
    c = build_cycle(f, W, L)
    for cell in W.top_cells:
        chk = check_cycle(c.perturbed(cell), W)
        walls = sorted(w for w in W.poset.below[cell] if W.poset.dims[w] == W.n - 1)
        assert chk.nonzero_walls() == walls
        assert not chk.internal


def test_zero_chain_has_zero_residuals():
    f, L = fixture("torus-projection")
    W = build_reeb(f)
    c = build_cycle(f, W, Labeler.from_cocycle(coboundary(f.source, 0)))
    assert c.is_zero() and check_cycle(c, W).passed


def test_wall_incidence_signs_sum_to_the_residual():
    f, L = fixture("torus-height")
    W = build_reeb(f)
    c = build_cycle(f, W, L)
    pert = c.perturbed(W.top_cells[1])
    chk = check_cycle(pert, W)
    for w in W.walls:
        inc = wall_incidence(W, w)
        total = sum((pert.coeffs[k] * s for k, s in inc.items()), Z.zero())
        assert (chk.residual(w) or Z.zero()) == total


def test_nontriviality_examples():
    f, L = fixture("torus-projection")
    W = build_reeb(f)
    v = nontriviality(build_cycle(f, W, L), W)
    assert v.nontrivial and v.homology == AbelianGroup(1)
    f, L = fixture("rp2xS1")
    W = build_reeb(f)
    v = nontriviality(build_cycle(f, W, L), W)
    assert v.nontrivial and v.homology == AbelianGroup(0, (2,))
    f, L = fixture("octahedron-height")
    W = build_reeb(f)
    v = nontriviality(build_cycle(f, W, L), W)
    assert not v.nontrivial and v.homology == AbelianGroup(0)


def test_nontriviality_rejects_non_cycles():
    f, L = fixture("torus-projection")
    W = build_reeb(f)
    with pytest.raises(PreconditionError):
        nontriviality(build_cycle(f, W, L).perturbed(W.top_cells[0]), W)


def test_precondition_rejections():
    f, L = fixture("torus-projection")
    W = build_reeb(f)
    with pytest.raises(PreconditionError):
        build_cycle(f, W, Labeler.chi2())
    g, _ = fixture("rp2xS1")
    with pytest.raises(PreconditionError):
        build_cycle(g, build_reeb(g), Labeler.chi2(), module=Z)
    with pytest.raises(PreconditionError):
        build_cycle(g, build_reeb(g), Labeler.from_cocycle(dual_cocycle_torus()))
    with pytest.raises(PreconditionError):
        build_cycle(f, W, Labeler.from_cocycle(Cochain(1, Z, {(0, 1): Z.element(1)})))


@settings(max_examples=20)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 1000))
def test_cocycle_labels_are_linear(a, b, seed):
    f = torus(3, 3).first
    W = build_reeb(f)
    z = dual_cocycle_torus(3, 3)
    z1 = z.scaled(a) + coboundary(f.source, seed)
    z2 = z.scaled(b)
    c1 = build_cycle(f, W, Labeler.from_cocycle(z1))
    c2 = build_cycle(f, W, Labeler.from_cocycle(z2))
    c12 = build_cycle(f, W, Labeler.from_cocycle(z1 + z2))
    assert c12.coeffs == (c1 + c2).coeffs


@pytest.mark.parametrize("name", ["torus-projection", "torus-height", "rp2xS1", "octahedron-height"])
def test_verdict_invariant_under_subdivision(name):
    f, L = fixture(name)
    W = build_reeb(f)
    v = nontriviality(build_cycle(f, W, L), W)
    sd = subdivide_map(f)
    if L.kind == "cocycle-evaluation":
        L2 = Labeler.from_cocycle(
            pullback_cochain(subdivision_retraction(sd.source, f.source), L.cocycle))
    else:
        L2 = L
    W2 = build_reeb(sd.map)
    c2 = build_cycle(sd.map, W2, L2)
    v2 = nontriviality(c2, W2)
    assert (v.nontrivial, v.homology) == (v2.nontrivial, v2.homology)


def table(relations=(), default=1, ring="Z"):
    q = QuotientLabelModule(("g",), tuple(relations), ring)
    return LabelTable(q, {}, {"g": default} if default else {})


def test_user_label_table_on_torus():
    f = torus(3, 3).first
    W = build_reeb(f)
    c = build_cycle(f, W, Labeler.from_table(table()))
    assert c.provenance == "user-label"
    v = nontriviality(c, W)
    assert v.nontrivial and v.homology == AbelianGroup(1)
    c0 = build_cycle(f, W, Labeler.from_table(table(relations=((("g", 1),),))))
    v0 = nontriviality(c0, W)
    assert not v0.nontrivial and v0.homology == AbelianGroup(0)


def test_label_table_must_cover_every_cell():
    f = torus(3, 3).first
    W = build_reeb(f)
    q = QuotientLabelModule(("g",))
    partial = LabelTable(q, {((0, 1), 0): {"g": 1}})
    with pytest.raises(PreconditionError):
        build_cycle(f, W, Labeler.from_table(partial))


def test_boundary_contract_violation_is_reported():
    f = octahedron_height()
    W = build_reeb(f)
    c = build_cycle(f, W, Labeler.from_table(table()))
    assert c.contract_violations == tuple(W.top_cells)
    chk = check_cycle(c, W)
    assert not chk.passed
    assert chk.nonzero_walls() == [j for j, cell in enumerate(W.cells) if cell.boundary]


def test_corollary_reports():
    f = octahedron_height()
    r = corollary_report(f, build_reeb(f), "spin")
    assert r.status == "FORCED" and r.homology == AbelianGroup(0)
    f = torus(3, 3).first
    r = corollary_report(f, build_reeb(f), "spin")
    assert r.status == "NOT DETERMINED" and r.homology == AbelianGroup(0, (2,))
    f = sphere3_height()
    r = corollary_report(f, build_reeb(f), "lagrangian")
    assert r.status == "FORCED"
    f = t3().second
    r = corollary_report(f, build_reeb(f), "spin-c")
    assert r.status == "NOT DETERMINED" and r.homology == AbelianGroup(1)
    with pytest.raises(PreconditionError):
        corollary_report(f, build_reeb(f), "spin")
    assert "status FORCED" in corollary_report(
        sphere3_height(), build_reeb(sphere3_height()), "spin-c").text()
