import pytest

from reebcycle.complex import PreconditionError, build_complex, facets
from reebcycle.generators import (circle, octahedron_height, path, rp2xS1, sphere_octahedron,
                                  torus, torus_height)
from reebcycle.maps import (SimplicialMap, compose, identity_map, image_simplex, require_valid,
                            stellar_subdivide_map, subdivide_map, subdivision_retraction,
                            validate_map)


def test_identity_and_constant_maps_validate():
    T = torus(3, 3).complex
    assert validate_map(identity_map(T)).ok
    pt = build_complex([(0,)])
    const = SimplicialMap(T, pt, {v: 0 for v in T.vertices})
    r = validate_map(const)
    assert r.ok and r.degenerate == sum(1 for s in T.all_simplices() if len(s) > 1)


def test_violation_names_the_offending_edge():
    src = build_complex([(0, 1)])
    f = SimplicialMap(src, path(3), {0: 0, 1: 2})
    r = validate_map(f)
    assert not r.ok and r.violations == ((0, 1),)
    with pytest.raises(PreconditionError):
        require_valid(f)


def test_assignment_must_cover_vertices():
    with pytest.raises(PreconditionError):
        SimplicialMap(build_complex([(0, 1)]), path(2), {0: 0})
    with pytest.raises(PreconditionError):
        SimplicialMap(build_complex([(0, 1)]), path(2), {0: 0, 1: 5})


def test_image_simplex_examples():
    prism = torus(3, 3)
    f = prism.first
    tri = next(t for t in prism.complex[2] if sorted({f(v) for v in t}) == [0, 1]
               and [f(v) for v in t].count(0) == 2)
    assert image_simplex(f, tri, (0, 1)) == ((0, 1), True)
    collapsed = SimplicialMap(build_complex([(0, 1, 2)]), path(2), {0: 0, 1: 0, 2: 0})
    assert image_simplex(collapsed, (0, 1, 2), (0, 1)) == ((0,), False)


def test_projection_triangles_surject_onto_one_edge():
    P = torus(3, 3)
    for tri in P.complex[2]:
        img = P.first.image(tri)
        assert len(img) == 2 and img in P.first.target


def test_subdivide_identity_and_constant():
    K = sphere_octahedron()
    g = subdivide_map(identity_map(K)).map
    assert all(g(v) == v for v in g.source.vertices)
    pt = build_complex([(0,)])
    c = subdivide_map(SimplicialMap(K, pt, {v: 0 for v in K.vertices})).map
    assert set(c.assignment.values()) == {0}


@pytest.mark.parametrize("f", [torus(3, 3).first, torus_height(3), octahedron_height(),
                               rp2xS1(3).second])
def test_subdivided_map_valid_and_images_nested(f):
    sd = subdivide_map(f)
    assert validate_map(sd.map).ok
    scar, tcar = sd.source.carriers, sd.target.carriers
    for s in sd.map.source.all_simplices():
        top = max((scar[v] for v in s), key=len)
        for w in sd.map.image(s):
            assert set(tcar[w]) <= set(f.image(top))


@pytest.mark.parametrize("f", [torus(3, 3).first, torus_height(3), rp2xS1(3).second])
def test_degeneracy_is_upward_closed(f):
    for phi in f.source.all_simplices():
        if any(f.is_degenerate(face) for _, face in facets(phi) if face):
            assert f.is_degenerate(phi)


def test_stellar_moves_and_retractions_stay_simplicial():
    f = torus(3, 3).first
    move = stellar_subdivide_map(f, (0, 1, 4), f(4))
    assert validate_map(move.map).ok and validate_map(move.retraction).ok
    assert move.map.source.is_closed_pseudomanifold()
    with pytest.raises(PreconditionError):
        stellar_subdivide_map(f, (0, 1), 2)
    sd = subdivide_map(f)
    back = subdivision_retraction(sd.source, f.source)
    assert validate_map(compose(f, back)).ok


def test_circle_map_text_round_trip():
    f = SimplicialMap(circle(4), circle(4), {0: 1, 1: 2, 2: 3, 3: 0})
    assert f.to_text().splitlines()[0] == "map"
    assert len(f.to_text().splitlines()) == 5
