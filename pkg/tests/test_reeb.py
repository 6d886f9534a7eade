import pytest
from hypothesis import given, settings, strategies as st

from oracles import graph_betti
from reebcycle.algebra import AbelianGroup, CoefficientModule
from reebcycle.complex import PreconditionError, build_complex
from reebcycle.generators import (octahedron_height, random_variant, rp2xS1, sphere3_height,
                                  sphere_octahedron, t3, torus, torus_height, two_bump_sphere)
from reebcycle.maps import SimplicialMap, identity_map, subdivide_map
from reebcycle.reeb import build_reeb, compare_with_sweep, reeb_homology, sweep_oracle

Z, Z2 = CoefficientModule.integers(), CoefficientModule.mod2()

ONE_DIM = {
    "octahedron-height": octahedron_height,
    "torus-height": torus_height,
    "two-bump-sphere": two_bump_sphere,
    "torus-projection": lambda: torus(3, 3).first,
    "t3-projection": lambda: t3().second,
    "rp2xS1-projection": lambda: rp2xS1(3).second,
}


def counts(W):
    out = [0] * (W.n + 1)
    for c in W.cells:
        out[c.dim] += 1
    return out


def test_identity_gives_face_poset():
    K = sphere_octahedron()
    W = build_reeb(identity_map(K))
    assert len(W.cells) == len(K.all_simplices())
    assert all(len(c.pieces) == len([s for s in K.all_simplices() if set(c.target) <= set(s)])
               for c in W.cells)
    by_target = {c.target: j for j, c in enumerate(W.cells)}
    faces = {(by_target[a], by_target[b]) for b in K.all_simplices() for a in K.all_simplices()
             if a != b and set(a) <= set(b)}
    assert W.poset.relation == faces
    assert [reeb_homology(W, k) for k in range(3)] == [AbelianGroup(1), AbelianGroup(0), AbelianGroup(1)]


def test_octahedron_height_is_a_path():
    W = build_reeb(octahedron_height())
    assert counts(W) == [3, 2]
    assert reeb_homology(W, 1) == AbelianGroup(0)


def test_torus_projection_is_the_target_circle():
    W = build_reeb(torus(3, 3).first)
    assert counts(W) == [3, 3]
    assert all(c.component == 0 for c in W.cells)
    assert reeb_homology(W, 1) == AbelianGroup(1)


def test_torus_height_has_one_loop():
    W = build_reeb(torus_height())
    assert counts(W) == [4, 4]
    assert reeb_homology(W, 1) == AbelianGroup(1)
    G = sweep_oracle(torus_height())
    assert (len(G.nodes), len(G.arcs), G.betti) == (4, 4, (1, 1))


def test_two_bump_sphere_is_a_y_shaped_tree():
    G = sweep_oracle(two_bump_sphere())
    assert (len(G.nodes), len(G.arcs), G.betti) == (4, 3, (1, 0))
    node_deg = {}
    for _, v in G.incidence:
        node_deg[v] = node_deg.get(v, 0) + 1
    assert sorted(node_deg.values()) == [1, 1, 1, 3]
    assert reeb_homology(build_reeb(two_bump_sphere()), 1) == AbelianGroup(0)


@pytest.mark.parametrize("name", list(ONE_DIM))
def test_build_reeb_matches_sweep(name):
    f = ONE_DIM[name]()
    W = build_reeb(f)
    G = sweep_oracle(f)
    assert compare_with_sweep(W, G)
    arcs = []
    for a in range(len(G.arcs)):
        ends = sorted(v for b, v in G.incidence if b == a)
        arcs.append((ends[0], ends[-1]))
    b0, b1 = graph_betti(len(G.nodes), arcs)
    assert reeb_homology(W, 0) == AbelianGroup(b0)
    assert reeb_homology(W, 1) == AbelianGroup(b1)


@settings(max_examples=12)
@given(st.sampled_from(sorted(ONE_DIM)), st.integers(0, 10 ** 6))
def test_build_reeb_matches_sweep_on_random_variants(name, seed):
    f = random_variant(ONE_DIM[name](), seed, moves=3, barycentric=False).map
    assert compare_with_sweep(build_reeb(f), sweep_oracle(f))


def test_sweep_rejects_other_dimensions():
    with pytest.raises(PreconditionError):
        sweep_oracle(identity_map(sphere_octahedron()))


def test_non_pseudomanifold_source_rejected():
    K = build_complex([(0, 1, 2), (0, 1, 3), (0, 1, 4)])
    f = SimplicialMap(K, K, {v: v for v in K.vertices})
    with pytest.raises(PreconditionError):
        build_reeb(f)


FIXTURES = dict(ONE_DIM, **{"sphere3-height": sphere3_height})


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_structure_invariants(name):
    f = FIXTURES[name]()
    W = build_reeb(f)
    assert W.dim == f.target.dim
    assert not W.warnings
    assert W.poset.is_transitive()
    assert W.order_complex.euler_characteristic() == W.poset.euler_characteristic()
    for c in range(len(W.cells)):
        if W.cells[c].dim < W.n:
            assert W.poset.above[c]


@pytest.mark.parametrize("name", ["octahedron-height", "torus-height", "torus-projection",
                                  "two-bump-sphere", "rp2xS1-projection"])
def test_reeb_homology_invariant_under_subdivision(name):
    f = FIXTURES[name]()
    W, W2 = build_reeb(f), build_reeb(subdivide_map(f).map)
    for A in (Z, Z2):
        assert [reeb_homology(W, k, A) for k in range(2)] == [reeb_homology(W2, k, A) for k in range(2)]


def test_boundary_flags_on_a_target_with_boundary():
    # octahedron height: the extreme arcs end at the poles, which are 0-cells
    # with a single top coface.
    W = build_reeb(octahedron_height())
    flagged = [j for j, c in enumerate(W.cells) if c.boundary]
    assert [W.cells[j].target for j in flagged] == [(0,), (2,)]
