import numpy as np
import pytest

from upb.assembler import (
    assemble_theorem1,
    build_minimal_upb,
    build_theorem1_upb,
    build_theorem2_upb,
    plan_theorem1,
)
from upb.basis import ProductBasis
from upb.bounds import f_N
from upb.errors import DomainError, UnsupportedCaseError
from upb.gadgets import build_U_6_1, build_V, fixture_V_5_3_2
from upb.graphs import graph_C_layer, graph_D, orthogonality_graph_of
from upb.verifier import verify_upb


class TestPlan:
    def test_layers_for_4_6(self):
        plan = plan_theorem1((4, 6))
        assert (plan.b, plan.q) == (1, 5)
        assert plan.shifts == (2,) and plan.regularities == (3,)

    def test_three_parties(self):
        plan = plan_theorem1((2, 3, 3, 8))
        assert plan.b == 1 and plan.q == 7
        assert plan.regularities == (1, 2, 2)
        assert plan.shifts == (2, 3, 5)
        assert plan.shifts[-1] + plan.regularities[-1] == plan.q

    def test_unsupported(self):
        with pytest.raises(UnsupportedCaseError, match="case \\(2\\)"):
            plan_theorem1((3, 3))

    def test_overrun(self):
        with pytest.raises(DomainError):
            plan_theorem1((4, 6), first_shift=3)


class TestTheorem1:
    def test_size_and_verdict(self, upb_4_6):
        assert upb_4_6.n == 10 == f_N((4, 6)) + 1
        assert upb_4_6.construction == "theorem1" and upb_4_6.b == 1

    def test_large_party_graph_is_D(self, upb_4_6):
        g = orthogonality_graph_of(upb_4_6.party_vectors(1))
        assert g == graph_D(6, 1)

    def test_small_party_graph_contains_layer(self, upb_4_6):
        g = orthogonality_graph_of(upb_4_6.party_vectors(0))
        assert graph_C_layer(6, 1, 3, 2).edges <= g.edges

    def test_fixture_gadgets_assemble(self):
        # the integer band fixture has shift 2 = b + 1
        plan = plan_theorem1((4, 6))
        pb = assemble_theorem1(plan, build_U_6_1(), [fixture_V_5_3_2()], construction="fixtures")
        assert verify_upb(pb).passed

    def test_user_order_preserved(self):
        pb = build_theorem1_upb((6, 4), seed=2)
        assert pb.dims == (6, 4)
        assert all(st[0].size == 6 and st[1].size == 4 for st in pb.states)
        assert verify_upb(pb).passed

    def test_seed_reproducible(self):
        a = build_theorem1_upb((2, 2, 2, 4), seed=9, verify=False)
        b = build_theorem1_upb((2, 2, 2, 4), seed=9, verify=False)
        assert a.to_json() == b.to_json()

    def test_band_mismatch(self):
        plan = plan_theorem1((4, 6))
        with pytest.raises(DomainError):
            assemble_theorem1(plan, build_U_6_1(), [build_V(5, 3, 1)])


class TestTheorem2:
    @pytest.mark.parametrize("k", [1, 2])
    def test_exact(self, k):
        pb = build_theorem2_upb(k, seed=0, verify="exact")
        assert pb.n == 4 * k + 4
        assert pb.dims == (2, 2, 4 * k + 1)

    def test_permuted_dims(self):
        pb = build_minimal_upb((5, 2, 2))
        assert pb.dims == (5, 2, 2)
        assert pb.states[0][0].size == 5

    def test_bad_k(self):
        with pytest.raises(DomainError):
            build_theorem2_upb(0)


class TestDispatch:
    @pytest.mark.parametrize("dims", [(2, 2, 7), (3, 4, 4), (2, 2, 2, 2, 2, 2, 2, 2)])
    def test_open_cases(self, dims):
        with pytest.raises(UnsupportedCaseError, match="open case"):
            build_minimal_upb(dims)

    @pytest.mark.parametrize("dims", [(2, 2, 3), (2, 5), (3, 3)])
    def test_known_without_builder(self, dims):
        with pytest.raises(UnsupportedCaseError, match="is known"):
            build_minimal_upb(dims)


class TestRoundTrip:
    def test_json(self, upb_4_6, tmp_path):
        path = tmp_path / "upb.json"
        upb_4_6.save(path)
        again = ProductBasis.load(path)
        assert again.dims == upb_4_6.dims and again.seed == 1
        for s1, s2 in zip(upb_4_6.states, again.states):
            for a, b in zip(s1, s2):
                assert np.array_equal(a, b)
        assert verify_upb(again).verdict == verify_upb(upb_4_6).verdict

    def test_size_field_checked(self, upb_4_6):
        data = upb_4_6.to_dict()
        data["size"] = 3
        with pytest.raises(ValueError):
            ProductBasis.from_dict(data)

    def test_norm_checked(self):
        with pytest.raises(ValueError):
            ProductBasis((2,), [[np.array([1.0, 1.0])]])
