import pytest

from centrallift import engines, metacyclic, oracle
from centrallift.metacyclic import CaseStudyConfig, metacyclic_presentation
from centrallift.words import evaluate, format_word


def test_config_validation():
    with pytest.raises(ValueError, match="odd prime"):
        CaseStudyConfig(2, 4)
    with pytest.raises(ValueError, match="odd prime"):
        CaseStudyConfig(9, 4)
    with pytest.raises(ValueError, match="n must be"):
        CaseStudyConfig(3, 3)
    with pytest.raises(ValueError, match="budget"):
        CaseStudyConfig(3, 5)  # 486 > default budget
    CaseStudyConfig(3, 5, order_budget=500)


@pytest.mark.parametrize(
    "p,n,budget,powers",
    [
        (3, 4, 200, (27, 3, 10)),
        (3, 5, 500, (81, 3, 28)),
        (5, 4, 2500, (125, 5, 26)),
    ],
)
def test_metacyclic_presentation(p, n, budget, powers):
    pres = metacyclic_presentation(CaseStudyConfig(p, n, order_budget=budget))
    xe, ye, ce = powers
    assert pres.relators[0].letters == ((0, xe),)
    assert pres.relators[1].letters == ((1, ye),)
    assert pres.relators[2].letters == ((1, -1), (0, 1), (1, 1), (0, -ce))


def test_group_and_aut_order(case_study):
    assert case_study.g_engine.order() == 81
    assert case_study.a_engine.order() == 162


def test_x3_has_maximal_order(case_study):
    assert engines.element_order(case_study.a_engine, case_study.params.x3) == 18


def test_fitted_parameters(case_study):
    params = case_study.params
    assert params.a_is_proot_mod_pn2 or params.a_is_proot_mod_pn1
    assert (params.a * params.a_inv) % 3 == 1
    assert 0 <= params.j < 3 and 0 <= params.k < 3
    # the fitted relators hold
    for rel in case_study.pres_a.relators:
        assert (
            evaluate(rel, case_study.params.triple(), case_study.a_engine)
            == case_study.a_engine.identity()
        )


def test_center(case_study):
    assert len(case_study.center) == 9
    z = case_study.a_engine.power(case_study.params.x3, 2)
    assert engines.subgroup_closure(case_study.a_engine, (z,)) == case_study.center


def test_quotient_is_order_18_with_trivial_center(case_study):
    assert case_study.quotient_order == 18
    assert case_study.quotient_center_trivial


def test_inner_matches_conjugations(case_study):
    # |Inn(G)| = |G| / |Z(G)|
    g = case_study.g_engine
    z_count = sum(1 for el in g.elements() if engines.is_central(g, el))
    assert len(case_study.inner) * z_count == g.order()
    # conjugation by x is the fitted x1 (the search seeds it first)
    conj_x = metacyclic._conjugation_map(g, g.generator(0))
    assert case_study.a_engine.element_from_perm(conj_x) == case_study.params.x1


def test_conjugation_by_identity_is_identity(case_study):
    g = case_study.g_engine
    conj = metacyclic._conjugation_map(g, g.identity())
    assert case_study.a_engine.element_from_perm(conj) == case_study.a_engine.identity()


def test_commutator_structure(case_study):
    # re-run the K checks explicitly (they also run inside the pipeline)
    metacyclic.verify_commutator_structure(
        case_study.cfg, case_study.a_engine, case_study.params, case_study.center
    )


def test_pi_surjective(case_study):
    s = case_study.surjectivity
    assert s.lifts_per_phi == 3
    assert s.all_automorphic
    assert s.aut_of_a_count == 3 * s.quotient_aut_count


def test_witness(case_study):
    assert case_study.witness.verdict is True
    # phi swaps the generator cosets of the two C_p factors
    params = case_study.params
    words = [format_word(w, case_study.pres_a.names) for w in case_study.witness.phi.rep_words]
    assert words == [f"x2^{params.a_inv}", f"x1^{params.a}", "x3^-1"]


def test_witness_psi_fixes_center_setwise(case_study):
    psi = case_study.witness.psi
    a = case_study.a_engine
    psi_map = engines.map_images(a, psi.images)
    center = set(case_study.center)
    assert {a.element(psi_map[el.index]) for el in center} == center


def test_aut_quotient_lifts_match_oracle(case_study):
    # 3 homomorphic = 3 automorphic lifts per phi, on both solver and oracle
    from centrallift.lifting import LiftProblem
    from centrallift.presentation import CentralSubgroupSpec
    from centrallift.words import FreeWord

    a = case_study.a_engine
    central = CentralSubgroupSpec((FreeWord(((2, case_study.cfg.p - 1),)),))
    specs = oracle.bf_quotient_auts(case_study.pres_a, a, case_study.center)
    assert len(specs) == case_study.surjectivity.quotient_aut_count
    for spec in specs:
        prob = LiftProblem.build(case_study.pres_a, a, central, spec)
        rep = oracle.compare(prob)
        assert rep.solver_hom_count == 3
        assert rep.solver_aut_count == 3


def test_result_dict_roundtrip(case_study):
    payload = case_study.to_dict()
    assert payload["group_order"] == 81
    assert payload["aut_order"] == 162
    assert payload["center_order"] == 9
    assert payload["quotient_order"] == 18
    assert payload["lifts_per_phi"] == 3
    assert payload["inner_not_characteristic"] is True
    assert payload["aut_of_aut_order"] == 3 * payload["quotient_aut_count"]
