import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import uct_mod_p
from reebcycle.algebra import AbelianGroup, CoefficientModule, IntMatrix
from reebcycle.complex import (Chain, Cochain, NonOrientable, NotPseudomanifold, Orientation,
                               PreconditionError, barycentric_subdivide, build_complex,
                               chain_boundary, fundamental_chain, homology, orient_coherently,
                               subdivided_orientation)
from reebcycle.generators import circle, klein, rp2_6, sphere3, sphere_octahedron, torus

Z, Z2, Z3 = CoefficientModule.integers(), CoefficientModule.mod2(), CoefficientModule("Z", 1, ((3,),))
G = AbelianGroup


def H(K, A=None):
    return [homology(K, k, A) for k in range(K.dim + 1)]


TETRA_BOUNDARY = build_complex(itertools.combinations(range(4), 3))

FIXTURES = {
    "S2": (sphere_octahedron(), [G(1), G(0), G(1)], [G(0, (2,)), G(0), G(0, (2,))]),
    "T2": (torus(3, 3).complex, [G(1), G(2), G(1)], [G(0, (2,)), G(0, (2, 2)), G(0, (2,))]),
    "RP2": (rp2_6(), [G(1), G(0, (2,)), G(0)], [G(0, (2,)), G(0, (2,)), G(0, (2,))]),
    "Klein": (klein(), [G(1), G(1, (2,)), G(0)], [G(0, (2,)), G(0, (2, 2)), G(0, (2,))]),
}


def test_build_complex_examples():
    assert TETRA_BOUNDARY.counts() == [4, 6, 4]
    assert build_complex([(0, 1)]).counts() == [2, 1]
    assert rp2_6().counts() == [6, 15, 10]
    with pytest.raises(PreconditionError):
        build_complex([])


def test_boundary_matrix_examples():
    K = build_complex([(0, 1)])
    assert K.boundary_matrix(1) == IntMatrix([[-1], [1]])
    with pytest.raises(PreconditionError):
        K.boundary_matrix(2)
    tri = build_complex([(0, 1), (1, 2), (0, 2)])
    assert homology(tri, 1) == G(1)


random_complexes = st.lists(
    st.lists(st.integers(0, 6), min_size=1, max_size=4, unique=True), min_size=1, max_size=12)


@settings(max_examples=100)
@given(random_complexes)
def test_boundary_squares_to_zero(tops):
    K = build_complex(tops)
    for k in range(2, K.dim + 1):
        prod = K.boundary_matrix(k - 1) @ K.boundary_matrix(k)
        assert all(x == 0 for row in prod.data for x in row)


@given(random_complexes)
def test_subdivision_counts_and_euler(tops):
    K = build_complex(tops)
    sd = barycentric_subdivide(K).complex
    assert sd.euler_characteristic() == K.euler_characteristic()
    if K.is_pure():
        assert sd.counts()[K.dim] == K.counts()[K.dim] * math.factorial(K.dim + 1)


def test_subdivision_examples():
    assert barycentric_subdivide(build_complex([(0, 1)])).complex.counts() == [3, 2]
    assert barycentric_subdivide(build_complex([(0, 1, 2)])).complex.counts()[2] == 6


@pytest.mark.parametrize("name", list(FIXTURES))
def test_textbook_homology(name):
    K, hz, h2 = FIXTURES[name]
    assert H(K, Z) == hz
    assert H(K, Z2) == h2


@pytest.mark.parametrize("name", list(FIXTURES))
def test_module_coefficients_agree_with_universal_coefficients(name):
    K, hz, _ = FIXTURES[name]
    for p, A in ((2, Z2), (3, Z3)):
        for k in range(K.dim + 1):
            prev = hz[k - 1] if k else G(0)
            assert homology(K, k, A) == uct_mod_p(hz[k], prev, p)


@pytest.mark.parametrize("name", list(FIXTURES))
def test_homology_invariant_under_subdivision(name):
    K, hz, h2 = FIXTURES[name]
    sd1 = barycentric_subdivide(K).complex
    assert H(sd1, Z) == hz and H(sd1, Z2) == h2
    sd2 = barycentric_subdivide(sd1).complex
    assert H(sd2, Z) == hz and H(sd2, Z2) == h2


def test_three_sphere_homology():
    assert H(sphere3()) == [G(1), G(0), G(0), G(1)]


def test_orientation_verdicts():
    assert isinstance(orient_coherently(sphere_octahedron()), Orientation)
    assert isinstance(orient_coherently(torus(3, 3).complex), Orientation)
    bad = orient_coherently(rp2_6())
    assert isinstance(bad, NonOrientable) and len(bad.cycle) >= 3
    assert isinstance(orient_coherently(klein()), NonOrientable)
    with pytest.raises(NotPseudomanifold):
        orient_coherently(build_complex([(0, 1, 2), (0, 1, 3), (0, 1, 4)]))


@pytest.mark.parametrize("K", [sphere_octahedron(), torus(3, 4).complex, rp2_6(), klein(),
                               sphere3(), build_complex([(0, 1, 2), (1, 2, 3)])])
def test_fundamental_chain_is_cycle_iff_orientable_and_closed(K):
    o = orient_coherently(K)
    if isinstance(o, NonOrientable):
        # no sign choice closes up: check every sign pattern on the smaller cases
        if len(K[K.dim]) <= 12:
            for signs in itertools.product((1, -1), repeat=len(K[K.dim]) - 1):
                ch = dict(zip(K[K.dim], (1,) + signs))
                assert chain_boundary(K, ch)
        return
    closed = K.is_closed_pseudomanifold()
    assert (not chain_boundary(K, fundamental_chain(K, o))) == closed


def test_subdivided_orientation_is_coherent():
    K = torus(3, 3).complex
    sd = barycentric_subdivide(K)
    o = subdivided_orientation(sd, orient_coherently(K))
    assert not chain_boundary(sd.complex, fundamental_chain(sd.complex, o))


@given(st.integers(0, 10 ** 6))
def test_coboundary_of_coboundary_is_zero(seed):
    rng = random.Random(seed)
    K = torus(3, 3).complex if seed % 2 else sphere3()
    for k in range(K.dim - 1):
        z = Cochain(k, Z, {s: Z.element(rng.randint(-3, 3)) for s in K[k]})
        assert not z.coboundary(K).coboundary(K).values


def test_chain_boundary_with_module_coefficients():
    K = sphere_octahedron()
    o = orient_coherently(K)
    ch = Chain(2, Z2, {s: Z2.element(1) for s in K[2]})
    assert ch.boundary().is_zero()
    ch = Chain(2, Z, {s: Z.element(o[s]) for s in K[2]})
    assert ch.boundary().is_zero()


def test_cochain_reorientation_negates():
    z = Cochain(1, Z, {(0, 1): Z.element(2)})
    assert z((1, 0)) == Z.element(-2)
    assert z((0, 1)) == Z.element(2)
    assert z((0, 2)).is_zero()


def test_circle_homology():
    assert H(circle(5)) == [G(1), G(1)]
