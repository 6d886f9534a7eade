from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from reebcycle.algebra import AbelianGroup, CoefficientModule
from reebcycle.complex import Cochain, PreconditionError
from reebcycle.cycle import Labeler, build_cycle, nontriviality
from reebcycle.errors import ParseError
from reebcycle.generators import (dual_cocycle_torus, octahedron_height, rp2xS1, t3, torus)
from reebcycle.pq import (LOCAL_MODELS, PQValidationError, consistent_labelings, load_pq,
                          model_for_arity, pq_verify, reeb_to_pq, round_fold_s2xs2,
                          special_generic_disc)
from reebcycle.reeb import build_reeb

Z, Z2 = CoefficientModule.integers(), CoefficientModule.mod2()

# a closed 2-cell (bigon) over Z: two vertices, two edges, two faces
BIGON_SPHERE = """\
pq dim=2
cell p dim=0
cell q dim=0
cell e1 dim=1
cell e2 dim=1
cell N dim=2
cell S dim=2
face p e1
face q e1
face p e2
face q e2
face e1 N
face e2 N
face e1 S
face e2 S
label N {n}
label S {s}
"""


def sphere(n=1, s=None):
    return load_pq(BIGON_SPHERE.format(n=n, s=n if s is None else s), Z)


def by_name(P, labels):
    return {P.ids[c]: x.coords[0] for c, x in labels.items()}


def test_model_table():
    assert [model_for_arity(k) for k in range(1, 5)] == ["fold-birth", "regular", "fold-merge", "II3"]
    assert {"fold-birth", "regular", "fold-merge", "II3", "junction"} <= set(LOCAL_MODELS)


def test_untagged_walls_are_inferred():
    P = sphere()
    assert {P.ids[w] for w in P.inferred} == {"e1", "e2"}
    assert all(P.models[w] == "regular" for w in P.walls)


def test_bigon_sphere_orientation_convention():
    # the two hemispheres induce opposite orientations on each edge, so with
    # reference orientations chosen independently the balanced labeling is
    # either (g, g) or (g, -g); exactly one of them passes.
    verdicts = {(1, s): pq_verify(sphere(1, s)).passed for s in (1, -1)}
    assert sorted(verdicts.values()) == [False, True]
    good = next(k for k, v in verdicts.items() if v)
    R = pq_verify(sphere(*good))
    assert R.verdict.nontrivial and R.homology == AbelianGroup(1)


@settings(max_examples=20)
@given(st.integers(-5, 5))
def test_wall_rule_is_linear(k):
    base = next((1, s) for s in (1, -1) if pq_verify(sphere(1, s)).passed)
    R = pq_verify(sphere(k * base[0], k * base[1]))
    assert R.passed
    assert R.verdict.nontrivial == (k != 0)


def test_round_fold_model_is_consistent():
    P = round_fold_s2xs2()
    R = pq_verify(P)
    assert R.consistent and R.passed
    assert not R.verdict.nontrivial
    assert {w.name: w.model for w in R.walls} == {
        "oa": "fold-birth", "ob": "fold-birth", "ia": "fold-merge", "ib": "fold-merge",
        "r0": "regular", "r1": "regular"}


def test_round_fold_homology_matches_hand_computation():
    # the annulus Q1+Q2 retracts onto the inner circle; the two discs D1, D2
    # cap that circle from both sides, so the space is a 2-sphere up to homotopy
    P = round_fold_s2xs2()
    assert pq_verify(P).homology == AbelianGroup(0, (2,))
    assert P.poset.order_complex.euler_characteristic() == 2


def test_round_fold_consistent_labelings():
    P = round_fold_s2xs2()
    found = sorted(sorted(by_name(P, L).items()) for L in consistent_labelings(P))
    assert found == [
        [("D1", 0), ("D2", 0), ("Q1", 0), ("Q2", 0)],
        [("D1", 1), ("D2", 1), ("Q1", 0), ("Q2", 0)],
    ]


def test_round_fold_all_ones_fails_on_the_folds():
    P = round_fold_s2xs2()
    ones = P.with_labels({name: Z2.element(1) for name in ("Q1", "Q2", "D1", "D2")})
    R = pq_verify(ones)
    assert not R.consistent
    assert sorted(w.name for w in R.walls if not w.ok) == ["ia", "ib", "oa", "ob"]


def test_special_generic_disc_forces_zero():
    P = special_generic_disc()
    found = consistent_labelings(P)
    assert len(found) == 1 and all(x.is_zero() for x in found[0].values())
    R = pq_verify(P)
    assert R.passed and R.homology == AbelianGroup(0)
    bad = pq_verify(P.with_labels({"T1": Z2.element(1), "T2": Z2.element(1)}))
    assert not bad.passed and bad.contract_violations


def test_text_round_trip():
    for P in (round_fold_s2xs2(), special_generic_disc(), sphere()):
        Q = load_pq(P.to_text(), P.module)
        assert Q == P
        assert Q.to_text() == P.to_text()


def test_format_version_header():
    P = sphere()
    assert P.to_text().splitlines()[0] == "pq dim=2 version=1"
    assert load_pq(BIGON_SPHERE.format(n=1, s=-1).replace("pq dim=2", "pq dim=2 version=1"), Z)
    with pytest.raises(ParseError) as e:
        load_pq(BIGON_SPHERE.format(n=1, s=1).replace("pq dim=2", "pq dim=2 version=9"), Z)
    assert e.value.token == "version=9"


def test_gleams_are_stored_and_validated():
    text = BIGON_SPHERE.format(n=1, s=1) + "gleam N 1/2\ngleam S -3/2\n"
    P = load_pq(text, Z)
    assert {P.ids[c]: g for c, g in P.gleams.items()} == {"N": Fraction(1, 2), "S": Fraction(-3, 2)}
    assert load_pq(P.to_text(), Z) == P
    with pytest.raises(PQValidationError):
        load_pq(BIGON_SPHERE.format(n=1, s=1) + "gleam N 1/3\n", Z)
    with pytest.raises(PQValidationError):
        load_pq(BIGON_SPHERE.format(n=1, s=1) + "gleam e1 1/2\n", Z)


def line_of(text, needle):
    return next(i for i, ln in enumerate(text.splitlines(), 1) if ln.startswith(needle))


def test_arity_mismatch_is_rejected_with_a_line_number():
    text = special_generic_disc().to_text().replace("wall ab model=fold-birth",
                                                    "wall ab model=fold-merge")
    with pytest.raises(PQValidationError) as e:
        load_pq(text)
    assert e.value.line == line_of(text, "wall ab")


def test_missing_label_is_rejected():
    text = "\n".join(ln for ln in BIGON_SPHERE.format(n=1, s=1).splitlines()
                     if not ln.startswith("label S"))
    with pytest.raises(PQValidationError) as e:
        load_pq(text, Z)
    assert "S" in str(e.value)


def test_non_graded_face_is_rejected():
    text = BIGON_SPHERE.format(n=1, s=1) + "face e1 e2\n"
    with pytest.raises(PQValidationError) as e:
        load_pq(text, Z)
    assert e.value.line == len(text.splitlines())


@pytest.mark.parametrize("bad", ["cell x dim=one\n", "nonsense\n", "label N zz\n"])
def test_syntax_errors_are_parse_errors(bad):
    with pytest.raises(ParseError):
        load_pq(BIGON_SPHERE.format(n=1, s=1) + bad, Z)


def test_other_validation_failures():
    base = BIGON_SPHERE.format(n=1, s=1)
    for extra in ("cell p dim=0\n", "face p ghost\n", "label e1 1\n", "wall e1 model=mystery\n"):
        with pytest.raises((PQValidationError, ParseError)):
            load_pq(base + extra, Z)


def zero_cocycle(f):
    return Cochain(1, Z, {})


@pytest.mark.parametrize("make", [
    lambda: (torus(3, 3).first, Labeler.from_cocycle(dual_cocycle_torus(3, 3))),
    lambda: (torus(4, 3).first, Labeler.from_cocycle(dual_cocycle_torus(4, 3))),
    lambda: (rp2xS1(3).second, Labeler.chi2()),
    lambda: (t3().second, Labeler.chi2()),
    lambda: (octahedron_height(), Labeler.from_cocycle(zero_cocycle(octahedron_height()))),
])
def test_export_reproduces_the_verdict(make):
    f, L = make()
    W = build_reeb(f)
    c = build_cycle(f, W, L)
    v = nontriviality(c, W)
    P = reeb_to_pq(W, c)
    R = pq_verify(P)
    assert R.passed
    assert (R.verdict.nontrivial, R.homology) == (v.nontrivial, v.homology)
    R2 = pq_verify(load_pq(P.to_text(), P.module))
    assert (R2.verdict.nontrivial, R2.homology) == (v.nontrivial, v.homology)


def test_enumeration_limits():
    with pytest.raises(PreconditionError):
        consistent_labelings(sphere())
