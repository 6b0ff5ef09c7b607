import pytest

import corpus
from centrallift import engines, lifting, oracle
from centrallift.lifting import LiftProblem
from centrallift.presentation import QuotientAutSpec, parse_presentation
from centrallift.words import FreeWord


def identity_spec(pres):
    return QuotientAutSpec(tuple(FreeWord(((i, 1),)) for i in range(pres.n)))


def problem(text):
    pres, central, engine, _ = corpus.build(text)
    return LiftProblem.build(pres, engine, central, identity_spec(pres))


def test_bf_hom_lifts_c4():
    prob = problem(corpus.C4)
    lifts = oracle.bf_hom_lifts(prob)
    x = prob.engine.generator(0)
    assert {e.key() for e in lifts} == {
        (x.index,),
        (prob.engine.power(x, 3).index,),
    }


def test_bf_hom_lifts_heisenberg_matches_solver():
    prob = problem(corpus.HEISENBERG)
    assert len(oracle.bf_hom_lifts(prob)) == len(
        lifting.solve_hom_lifts(prob).lifts
    )


def test_bf_aut_lifts_subset():
    for text in (corpus.C4, corpus.C6, corpus.Q8):
        prob = problem(text)
        hom = oracle.bf_hom_lifts(prob)
        aut = oracle.bf_aut_lifts(prob)
        assert set(aut) <= set(hom)


def test_bf_aut_lifts_c6():
    prob = problem(corpus.C6)
    assert len(oracle.bf_hom_lifts(prob)) == 3
    assert len(oracle.bf_aut_lifts(prob)) == 2


def test_budget_exceeded():
    prob = problem(corpus.HEISENBERG)
    with pytest.raises(oracle.BudgetExceeded):
        oracle.bf_hom_lifts(prob, budget=5)


def test_bf_automorphism_group_c4():
    pres, _, engine, _ = corpus.build(corpus.C4)
    table = oracle.bf_automorphism_group(pres, engine)
    assert table.order == 2


def test_bf_automorphism_group_s3():
    pres = parse_presentation(
        "generators: x y\nrelator: x^3\nrelator: y^2\nrelator: x*y*x*y"
    )
    engine = engines.todd_coxeter(pres, 100)
    table = oracle.bf_automorphism_group(pres, engine)
    assert table.order == 6  # Inn(S3) = Aut(S3)


def test_bf_automorphism_group_metacyclic():
    pres, _, engine, _ = corpus.build(corpus.METACYCLIC34)
    table = oracle.bf_automorphism_group(pres, engine)
    assert table.order == 162  # (p-1) * p^n


def test_aut_table_is_a_group():
    pres, _, engine, _ = corpus.build(corpus.Q8)
    table = oracle.bf_automorphism_group(pres, engine)
    assert table.order == 24
    n = table.order
    # identity present
    identity_map = tuple(range(engine.order()))
    idx = table.maps.index(identity_map)
    assert all(table.table[idx][j] == j for j in range(n))
    # closure and inverses
    seen_inverse = set()
    for i in range(n):
        row = set(table.table[i])
        assert row == set(range(n))
        for j in range(n):
            if table.table[i][j] == idx:
                seen_inverse.add(i)
    assert seen_inverse == set(range(n))


def test_bf_quotient_auts_counts():
    pres, _, engine, n_elements = corpus.build(corpus.C4)
    assert len(oracle.bf_quotient_auts(pres, engine, n_elements)) == 1

    pres, _, engine, n_elements = corpus.build(corpus.HEISENBERG)
    specs = oracle.bf_quotient_auts(pres, engine, n_elements)
    assert len(specs) == 48  # |GL_2(F_3)|


def test_bf_quotient_auts_words_represent_automorphisms():
    from centrallift.presentation import validate_quotient_aut

    pres, _, engine, n_elements = corpus.build(corpus.C2C2C4_AC2)
    specs = oracle.bf_quotient_auts(pres, engine, n_elements)
    for spec in specs:
        validate_quotient_aut(spec, pres, engine, n_elements)
    # distinct induced maps
    q = engines.quotient_engine(engine, n_elements)
    gens = [engine.generator(i) for i in range(pres.n)]
    from centrallift.words import evaluate

    seen = set()
    for spec in specs:
        images = tuple(
            q.project(evaluate(w, gens, engine)).index for w in spec.rep_words
        )
        seen.add(images)
    assert len(seen) == len(specs)


@pytest.mark.parametrize("name,text", corpus.CORPUS)
def test_compare_corpus(name, text):
    pres, central, engine, n_elements = corpus.build(text)
    for spec in oracle.bf_quotient_auts(pres, engine, n_elements):
        prob = LiftProblem.build(pres, engine, central, spec)
        report = oracle.compare(prob)
        assert report.match


def test_compare_detects_injected_bug(monkeypatch):
    prob = problem(corpus.C6)
    real = lifting.solve_aut_lifts

    def broken(problem):
        report = real(problem)
        return lifting.LiftReport(
            kind=report.kind,
            matrix=report.matrix,
            extended_matrix=report.extended_matrix,
            moduli=report.moduli,
            residues=report.residues,
            targets=report.targets,
            lifts=report.lifts[1:],  # drop one lift
        )

    monkeypatch.setattr(lifting, "solve_aut_lifts", broken)
    with pytest.raises(oracle.Mismatch) as err:
        oracle.compare(prob)
    assert err.value.report.counterexample["side"] == "oracle_only"
    assert err.value.report.counterexample["kind"] == "automorphic"


def test_aut_group_times_fiber_counts_lifted_endos():
    # every endomorphism of G that lifts some phi is counted once per
    # (phi, solution); on the metacyclic fixture all phi lift
    pres, central, engine, n_elements = corpus.build(corpus.METACYCLIC34)
    specs = oracle.bf_quotient_auts(pres, engine, n_elements)
    all_lifts = set()
    per_phi = []
    for spec in specs:
        prob = LiftProblem.build(pres, engine, central, spec)
        lifts = oracle.bf_hom_lifts(prob)
        per_phi.append(len(lifts))
        all_lifts.update(lifts)
    liftable = [c for c in per_phi if c]
    assert sum(per_phi) == len(all_lifts)
    assert len(set(liftable)) <= 1
