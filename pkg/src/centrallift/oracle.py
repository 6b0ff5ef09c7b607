"""Exhaustive ground truth for the lift solver.

Everything here enumerates candidate image tuples directly and checks
relators by evaluation; no matrix machinery is shared with the solver,
so agreement between the two is meaningful evidence.  Searches prune
early: candidates are filtered by element order where orders must match,
and each relator is checked as soon as all generators in its support are
assigned, cheapest (shortest) relator first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import engines, lifting
from .engines import Element, GroupEngine
from .lifting import Endomorphism, LiftProblem
from .presentation import Presentation, QuotientAutSpec
from .words import evaluate, format_word


class BudgetExceeded(RuntimeError):
    """A brute-force search would exceed its configured candidate budget."""

    def __init__(self, required: int, budget: int, what: str):
        super().__init__(f"{what}: {required} candidates exceed budget {budget}")
        self.required = required
        self.budget = budget


class Mismatch(RuntimeError):
    """Solver and oracle disagree; carries the comparison report."""

    def __init__(self, report: "ComparisonReport"):
        super().__init__(
            f"solver/oracle mismatch: hom {report.solver_hom_count} vs "
            f"{report.oracle_hom_count}, aut {report.solver_aut_count} vs "
            f"{report.oracle_aut_count}"
        )
        self.report = report


DEFAULT_LIFT_BUDGET = 10**6
DEFAULT_AUT_BUDGET = 10**8


def _relators_by_depth(pres: Presentation, depth_order: list[int]) -> list[list]:
    """Relator words grouped by the search depth at which they become checkable."""
    position = {gen: d for d, gen in enumerate(depth_order)}
    groups: list[list] = [[] for _ in depth_order]
    for rel in pres.relators:
        support = {g for g, _ in rel.letters}
        if not support:
            continue
        depth = max(position[g] for g in support)
        groups[depth].append(rel)
    for group in groups:
        group.sort(key=lambda rel: (rel.length(), rel.letters))
    return groups


def _search_image_tuples(pres, engine, candidates, depth_order, check_leaf):
    """DFS over image tuples with per-depth relator rejection."""
    groups = _relators_by_depth(pres, depth_order)
    n = pres.n
    images: list[Element | None] = [None] * n
    identity = engine.identity()
    out = []

    def descend(depth: int) -> None:
        if depth == n:
            fixed = tuple(images)
            if check_leaf(fixed):
                out.append(Endomorphism(fixed))
            return
        gen = depth_order[depth]
        for candidate in candidates[gen]:
            images[gen] = candidate
            if all(
                evaluate(rel, images, engine) == identity for rel in groups[depth]
            ):
                descend(depth + 1)
        images[gen] = None

    descend(0)
    out.sort(key=lambda e: e.key())
    return out


def bf_hom_lifts(problem: LiftProblem, budget: int = DEFAULT_LIFT_BUDGET) -> list[Endomorphism]:
    """All homomorphic lifts of phi by enumerating the cosets xbar_i * N."""
    n = problem.pres.n
    required = len(problem.n_elements) ** n
    if required > budget:
        raise BudgetExceeded(required, budget, "homomorphic lift enumeration")
    engine = problem.engine
    candidates = [
        [engine.multiply(problem.xbar[i], z) for z in problem.n_elements]
        for i in range(n)
    ]
    return _search_image_tuples(
        problem.pres, engine, candidates, list(range(n)), lambda images: True
    )


def bf_aut_lifts(problem: LiftProblem, budget: int = DEFAULT_LIFT_BUDGET) -> list[Endomorphism]:
    """Homomorphic lifts whose images generate G (hence bijective)."""
    engine = problem.engine
    order = engine.order()
    return [
        endo
        for endo in bf_hom_lifts(problem, budget)
        if len(engines.subgroup_closure(engine, endo.images)) == order
    ]


@dataclass(frozen=True)
class AutGroupTable:
    """The automorphism group: endomorphisms plus a composition index table."""

    automorphisms: tuple[Endomorphism, ...]
    table: tuple[tuple[int, ...], ...]  # table[i][j] = index of (apply i, then j)
    maps: tuple[tuple[int, ...], ...] = field(repr=False, default=())

    @property
    def order(self) -> int:
        return len(self.automorphisms)


def _greedy_depth_order(pres: Presentation, candidates) -> list[int]:
    """Assignment order: most newly checkable relators, then fewest candidates."""
    supports = [
        {g for g, _ in rel.letters} for rel in pres.relators if rel.letters
    ]
    remaining = list(range(pres.n))
    chosen: set[int] = set()
    order: list[int] = []
    while remaining:
        def gain(g: int) -> int:
            with_g = chosen | {g}
            return sum(1 for s in supports if s <= with_g and not s <= chosen)

        best = min(remaining, key=lambda g: (-gain(g), len(candidates[g]), g))
        remaining.remove(best)
        chosen.add(best)
        order.append(best)
    return order


def bf_automorphism_group(
    pres: Presentation, engine: GroupEngine, budget: int = DEFAULT_AUT_BUDGET
) -> AutGroupTable:
    """All automorphisms of the engine's group, by image-tuple search.

    Candidate images are restricted to elements of the same order as the
    generator (automorphisms preserve order); relators are applied as
    soon as their support is assigned; finally the images must generate.
    """
    n = pres.n
    order = engine.order()
    required = order**n
    if required > budget:
        raise BudgetExceeded(required, budget, "automorphism group enumeration")
    elements = engine.elements()
    orders = [engines.element_order(engine, el) for el in elements]
    candidates = []
    for i in range(n):
        target = orders[engine.generator(i).index]
        candidates.append([el for el in elements if orders[el.index] == target])
    depth_order = _greedy_depth_order(pres, candidates)

    def generates(images) -> bool:
        return len(engines.subgroup_closure(engine, images)) == order

    auts = _search_image_tuples(pres, engine, candidates, depth_order, generates)

    maps = [engines.map_images(engine, endo.images) for endo in auts]
    index = {m: i for i, m in enumerate(maps)}
    if len(index) != len(maps):
        raise AssertionError("distinct automorphisms with identical maps")
    table = tuple(
        tuple(index[tuple(mb[x] for x in ma)] for mb in maps) for ma in maps
    )
    return AutGroupTable(tuple(auts), table, tuple(maps))


def bf_quotient_auts(
    pres: Presentation,
    engine: GroupEngine,
    n_elements,
    budget: int = DEFAULT_AUT_BUDGET,
) -> list[QuotientAutSpec]:
    """One representative-word spec per element of Aut(G/N).

    The quotient is presented by the relators of G plus words for the
    generators of N; its automorphisms are enumerated brute force and
    re-expressed as shortest representative words, reusable as G-words.
    """
    quotient = engines.quotient_engine(engine, n_elements)
    extra = engines.subgroup_generator_words(engine, n_elements)
    qpres = Presentation(pres.names, pres.relators + tuple(extra))
    table = bf_automorphism_group(qpres, quotient, budget)
    specs = []
    for endo in table.automorphisms:
        words = tuple(engines.word_for_element(quotient, im) for im in endo.images)
        specs.append(QuotientAutSpec(words))
    return specs


@dataclass(frozen=True)
class ComparisonReport:
    solver_hom_count: int
    oracle_hom_count: int
    solver_aut_count: int
    oracle_aut_count: int
    match: bool
    counterexample: dict | None

    def to_dict(self) -> dict:
        return {
            "solver_hom_count": self.solver_hom_count,
            "oracle_hom_count": self.oracle_hom_count,
            "solver_aut_count": self.solver_aut_count,
            "oracle_aut_count": self.oracle_aut_count,
            "match": self.match,
            "counterexample": self.counterexample,
        }


def compare(problem: LiftProblem, budget: int = DEFAULT_LIFT_BUDGET) -> ComparisonReport:
    """Solver vs oracle on one problem; raises Mismatch on any disagreement."""
    solver_hom = {lift.endo for lift in lifting.solve_hom_lifts(problem).lifts}
    solver_aut = {lift.endo for lift in lifting.solve_aut_lifts(problem).lifts}
    oracle_hom = set(bf_hom_lifts(problem, budget))
    oracle_aut = set(bf_aut_lifts(problem, budget))

    counterexample = None
    for kind, mine, theirs in (
        ("homomorphic", solver_hom, oracle_hom),
        ("automorphic", solver_aut, oracle_aut),
    ):
        diff = mine.symmetric_difference(theirs)
        if diff:
            endo = min(diff, key=lambda e: e.key())
            names = problem.pres.names
            counterexample = {
                "kind": kind,
                "side": "solver_only" if endo in mine else "oracle_only",
                "images": [
                    format_word(
                        engines.word_for_element(problem.engine, im), names
                    )
                    for im in endo.images
                ],
            }
            break
    report = ComparisonReport(
        solver_hom_count=len(solver_hom),
        oracle_hom_count=len(oracle_hom),
        solver_aut_count=len(solver_aut),
        oracle_aut_count=len(oracle_aut),
        match=counterexample is None,
        counterexample=counterexample,
    )
    if not report.match:
        raise Mismatch(report)
    return report
