"""Projection-constant queries: grid certificates, LP exactness, witness audit."""

from fractions import Fraction as F

import pytest

from unclab.constants import (
    GRID_ONLY,
    MODES,
    ConstantQuery,
    ConstantWitness,
    compute_constant,
    verify_witness,
)
from unclab.errors import DomainError, SizeError
from unclab.norms import SparseVector, build_standard


def q(mode, **kw):
    return ConstantQuery(mode=mode, **kw)


ALL_MODE_QUERIES = [
    q("K", delta=F(1, 2)),
    q("Kprime", delta=F(1, 2)),
    q("L", delta=F(1, 2)),
    q("Lprime", delta=F(1, 2)),
    q("A", delta=F(1, 2)),
    q("C_uncond"),
    q("quasi_greedy"),
    q("BOU", D=F(2), d=F(2)),
    q("Kstar", delta=F(1)),
    q("schreier", order=1),
]


def test_query_validation():
    with pytest.raises(DomainError):
        ConstantQuery(mode="bogus")
    with pytest.raises(DomainError):
        ConstantQuery(mode="K")  # delta required
    with pytest.raises(DomainError):
        ConstantQuery(mode="L", delta=F(0))
    with pytest.raises(DomainError):
        ConstantQuery(mode="Kstar", delta=F(3, 2))
    with pytest.raises(DomainError):
        ConstantQuery(mode="BOU", D=F(2))  # d missing
    with pytest.raises(DomainError):
        ConstantQuery(mode="BOU", D=F(1, 2), d=F(1))
    with pytest.raises(DomainError):
        ConstantQuery(mode="schreier", order=3)
    assert len(ALL_MODE_QUERIES) == len(MODES)


def test_l1_reference_all_modes_one():
    # fully unconditional instance: every coordinate projection is norm-1,
    # so all ten constants collapse to exactly 1 and the basis vectors on
    # the half-integer lattice attain it
    inst = build_standard("l1", 3)
    for query in ALL_MODE_QUERIES:
        rep = compute_constant(inst, query, method="grid", step=F(1, 2))
        assert rep.value_lower == 1, query.mode
        assert rep.method == "grid(step=1/2)"
        assert rep.value_upper is None
        assert rep.witness is not None
        assert verify_witness(inst, query, rep.witness) == 1


def test_summing4_lower_bounds():
    # (1,-1,1,-1) restricted to {1,3} doubles: ||(1,0,1,0)|| = 2 against
    # norm 1, which is feasible for every one of these parameter choices
    inst = build_standard("summing", 4)
    cases = [
        q("C_uncond"),
        q("K", delta=F(1)),
        q("A", delta=F(1, 2)),
        q("BOU", D=F(1), d=F(1)),
        q("quasi_greedy"),
        q("schreier", order=1),
    ]
    for query in cases:
        rep = compute_constant(inst, query, method="grid", step=F(1, 2))
        assert rep.value_lower == 2, query.mode
        assert rep.details["lattice_points"] == 5**4 - 1
        assert verify_witness(inst, query, rep.witness) == rep.value_lower
    # mode-specific witness extras survive the round trip
    bou = compute_constant(inst, q("BOU", D=F(1), d=F(1)), step=F(1, 2))
    assert bou.witness.decomposition is not None
    qg = compute_constant(inst, q("quasi_greedy"), step=F(1, 2))
    assert qg.witness.threshold is not None


def test_restricted_variants_never_exceed_free_ones():
    # the all-coordinates-large feasible set sits inside the threshold-set
    # feasible set, so on any common lattice L <= K and Lprime <= Kprime
    inst = build_standard("summing", 3)
    for delta in (F(1, 4), F(1, 2), F(3, 4), F(1)):
        vals = {}
        for mode in ("K", "L", "Kprime", "Lprime"):
            rep = compute_constant(inst, q(mode, delta=delta), step=F(1, 4))
            vals[mode] = rep.value_lower
        assert vals["L"] <= vals["K"]
        assert vals["Lprime"] <= vals["Kprime"]


def test_kstar_denominator_is_full_support_cloud_sup():
    # single-point cloud (1,1): the denominator max f(a) vanishes on the
    # line a1 = -a2, so the lattice optimum divides by 1/2, not by a
    # projected value. a = (-1, 1/2) against the negated point: numerator
    # (-1)(-1) = 1 on E = {1}, denominator max(-1/2, 1/2) = 1/2.
    inst = build_standard("pointcloud", 2, points=[[F(1), F(1)]])
    query = q("Kstar", delta=F(1))
    rep = compute_constant(inst, query, method="grid", step=F(1, 2))
    assert rep.value_lower == 2
    wit = rep.witness
    assert wit.point_index is not None
    assert wit.numerator == 1 and wit.denominator == F(1, 2)
    assert verify_witness(inst, query, wit) == 2
    # the cloud sup is only a seminorm here; the parametric LP detects the
    # degeneracy (the true supremum is infinite) instead of reporting a number
    with pytest.raises(DomainError):
        compute_constant(inst, query, method="fractional_lp")


def test_kstar_lp_beats_half_integer_grid():
    # definite cloud {(1,0), (1/2,1)}: optimum at a = (-2/3, 1) where both
    # cloud values tie at 2/3, ratio 1/(2/3) = 3/2; the step-1/2 lattice
    # only reaches 4/3 at a = (-1/2, 1)
    inst = build_standard("pointcloud", 2, points=[[F(1), F(0)], [F(1, 2), F(1)]])
    query = q("Kstar", delta=F(1, 2))
    grid = compute_constant(inst, query, method="grid", step=F(1, 2))
    lp = compute_constant(inst, query, method="fractional_lp")
    assert grid.value_lower == F(4, 3)
    assert lp.value_lower == lp.value_upper == F(3, 2)
    assert grid.value_lower <= lp.value_lower
    assert lp.method == "fractional_lp"
    assert lp.details["converged"] is True
    assert verify_witness(inst, query, lp.witness) == F(3, 2)


def test_lp_agrees_with_grid_on_summing2():
    inst = build_standard("summing", 2)
    for query in (q("C_uncond"), q("schreier", order=1)):
        grid = compute_constant(inst, query, method="grid", step=F(1, 2))
        lp = compute_constant(inst, query, method="fractional_lp")
        assert lp.value_lower == lp.value_upper == 1
        assert grid.value_lower <= lp.value_lower
        assert verify_witness(inst, query, lp.witness) == lp.value_lower


def test_grid_only_modes_reject_lp():
    inst = build_standard("summing", 2)
    assert set(GRID_ONLY) == {"quasi_greedy", "BOU"}
    for query in (q("quasi_greedy"), q("BOU", D=F(1), d=F(1))):
        with pytest.raises(DomainError):
            compute_constant(inst, query, method="fractional_lp")


def test_method_and_step_validation():
    inst = build_standard("summing", 2)
    with pytest.raises(DomainError):
        compute_constant(inst, q("C_uncond"), method="newton")
    for bad in (F(0), F(2, 3), F(3, 2)):
        with pytest.raises(DomainError):
            compute_constant(inst, q("C_uncond"), method="grid", step=bad)


def test_grid_dim_cap():
    inst = build_standard("linf", 11)  # cap is 10
    with pytest.raises(SizeError):
        compute_constant(inst, q("C_uncond"), method="grid", step=F(1))


def tampered(a_pairs, E, **kw):
    a = SparseVector.from_pairs((i, F(v)) for i, v in a_pairs)
    return ConstantWitness(a=a, E=E, numerator=F(0), denominator=F(1), **kw)


def test_verify_witness_rejects_infeasible():
    s4 = build_standard("summing", 4)
    # E leaves the delta-threshold set
    with pytest.raises(DomainError):
        verify_witness(s4, q("K", delta=F(1)),
                       tampered([(1, 1), (2, F(1, 2))], (2,)))
    # Kprime norm cap violated
    with pytest.raises(DomainError):
        verify_witness(s4, q("Kprime", delta=F(1)),
                       tampered([(1, 1), (2, 1), (3, 1), (4, 1)], (1,)))
    # support dips under delta in L mode
    with pytest.raises(DomainError):
        verify_witness(s4, q("L", delta=F(1)),
                       tampered([(1, 1), (2, F(1, 2))], (1,)))
    # sup bound in K mode
    with pytest.raises(DomainError):
        verify_witness(s4, q("K", delta=F(1)), tampered([(1, 2)], (1,)))
    # quasi_greedy E must be exactly the threshold set
    with pytest.raises(DomainError):
        verify_witness(s4, q("quasi_greedy"),
                       tampered([(1, 1), (3, 1)], (1,), threshold=F(1)))
    # schreier admissibility: |E| > min E
    with pytest.raises(DomainError):
        verify_witness(s4, q("schreier", order=1),
                       tampered([(2, 1), (3, 1), (4, 1)], (2, 3, 4)))
    # A-mode feasibility inequality
    with pytest.raises(DomainError):
        verify_witness(s4, q("A", delta=F(1)),
                       tampered([(1, 1), (2, -1), (3, 1), (4, -1)], (1, 2)))
    # vanishing denominator on the degenerate cloud
    pc = build_standard("pointcloud", 2, points=[[F(1), F(1)]])
    with pytest.raises(DomainError):
        verify_witness(pc, q("Kstar", delta=F(1)),
                       tampered([(1, 1), (2, -1)], (1,), point_index=0))
    # BOU oscillation bound
    with pytest.raises(DomainError):
        verify_witness(s4, q("BOU", D=F(1), d=F(4)),
                       tampered([(1, 1), (2, F(1, 2))], (1, 2)))
