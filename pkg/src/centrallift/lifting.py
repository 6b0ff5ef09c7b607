"""Deciding and enumerating lifts of quotient automorphisms.

Setting: G finitely presented, N a finite central subgroup generated by
the values of the declared z-words, and phi an automorphism of G/N given
by representative words.  Lifting phi through the quotient reduces to
exact linear systems: row i of the exponent matrix M abelianizes relator
r_i, the residue w encodes r_i at the chosen representatives, and the
homomorphic lifts of phi correspond one-to-one to solutions of
M*v = w modulo the order of each central generator (one block per
generator when N is not cyclic).  Automorphic lifts add one row per
z-word and one target per admissible image of the z-generators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd

from . import engines, modlinalg
from .engines import Element, GroupEngine
from .modlinalg import IntMatrix, LinearSystem, SolutionSet
from .presentation import (
    CentralSubgroupSpec,
    Presentation,
    QuotientAutSpec,
    check_quotient_aut_on,
    validate_central,
)
from .words import FreeWord, evaluate, exponent_vector, format_word


class ResidueOutsideN(ValueError):
    """A relator at the representatives landed outside N (invalid phi)."""

    def __init__(self, relator_index: int):
        super().__init__(f"relator {relator_index} does not evaluate into N")
        self.relator_index = relator_index


class NotASolution(RuntimeError):
    """A claimed solution vector fails a relator; indicates a solver bug."""


class CriterionMismatch(RuntimeError):
    """The two automorphy criteria disagreed; internal consistency failure."""


class NotSquarefree(ValueError):
    """#N is not squarefree, so the existence shortcut does not apply."""


class DependentCentralGenerators(ValueError):
    """The z-words are not independent, so block systems would miscount."""


class SolverConsistencyError(RuntimeError):
    """An internal cross-check between two solver routes failed."""


@dataclass(frozen=True)
class Endomorphism:
    """An endomorphism of the engine's group, given by generator images."""

    images: tuple[Element, ...]

    def key(self) -> tuple[int, ...]:
        return tuple(el.index for el in self.images)


class LiftProblem:
    """Validated lift instance: presentation, engine, central data and phi.

    Use LiftProblem.build; it checks centrality, independence of the
    z-generators (|N| equals the product of their orders, which makes the
    per-block correspondence one-to-one) and that phi is an automorphism
    of G/N.
    """

    def __init__(
        self,
        pres: Presentation,
        engine: GroupEngine,
        central: CentralSubgroupSpec,
        phi: QuotientAutSpec,
        z_elements: tuple[Element, ...],
        z_orders: tuple[int, ...],
        n_elements: tuple[Element, ...],
        xbar: tuple[Element, ...],
        quotient: engines.QuotientEngine,
    ):
        self.pres = pres
        self.engine = engine
        self.central = central
        self.phi = phi
        self.z_elements = z_elements
        self.z_orders = z_orders
        self.n_elements = n_elements
        self.n_order = len(n_elements)
        self.xbar = xbar
        self.quotient = quotient

    @classmethod
    def build(
        cls,
        pres: Presentation,
        engine: GroupEngine,
        central: CentralSubgroupSpec,
        phi: QuotientAutSpec,
    ) -> "LiftProblem":
        validate_central(central, pres, engine)
        gens = [engine.generator(i) for i in range(pres.n)]
        z_elements = tuple(evaluate(w, gens, engine) for w in central.z_words)
        z_orders = tuple(engines.element_order(engine, z) for z in z_elements)
        n_elements = engines.subgroup_closure(engine, z_elements)
        product = 1
        for o in z_orders:
            product *= o
        if product != len(n_elements):
            raise DependentCentralGenerators(
                f"z-generators have order product {product} but generate a subgroup "
                f"of order {len(n_elements)}; supply independent generators"
            )
        if engine.order() % len(n_elements):
            raise AssertionError("#N does not divide the group order")
        quotient = engines.quotient_engine(engine, n_elements)
        xbar = tuple(check_quotient_aut_on(phi, pres, engine, quotient, n_elements))
        return cls(
            pres, engine, central, phi, z_elements, z_orders, n_elements, xbar, quotient
        )


@dataclass(frozen=True)
class LiftTarget:
    """One right-hand side of the lift system, with its per-block solutions."""

    label: str
    rhs_blocks: tuple[tuple[int, ...], ...]
    solution_sets: tuple[SolutionSet, ...]
    count: int


@dataclass(frozen=True)
class Lift:
    """A materialized lift: per-block exponent vectors plus the endomorphism."""

    v_blocks: tuple[tuple[int, ...], ...]
    endo: Endomorphism
    automorphic: bool


@dataclass(frozen=True)
class LiftReport:
    kind: str  # "homomorphic" | "automorphic"
    matrix: IntMatrix
    extended_matrix: IntMatrix | None
    moduli: tuple[int, ...]
    residues: tuple[tuple[int, ...], ...]
    targets: tuple[LiftTarget, ...]
    lifts: tuple[Lift, ...]


def build_exponent_matrix(pres: Presentation) -> IntMatrix:
    """m x n matrix whose row i abelianizes relator i."""
    rows = [list(exponent_vector(rel, pres.n)) for rel in pres.relators]
    if not rows:
        return IntMatrix(0, pres.n, ())
    return IntMatrix.from_rows(rows)


def build_residue_vector(problem: LiftProblem) -> list[tuple[int, ...]]:
    """Per-z-generator residues: r_k(xbar) = prod_j z_j^(-w[j][k])."""
    log_table = engines.central_log_table(problem.engine, problem.z_elements)
    t = len(problem.z_elements)
    per_block: list[list[int]] = [[] for _ in range(t)]
    for k, rel in enumerate(problem.pres.relators):
        value = evaluate(rel, problem.xbar, problem.engine)
        exps = log_table.get(value.index)
        if exps is None:
            raise ResidueOutsideN(k)
        for j in range(t):
            per_block[j].append((-exps[j]) % problem.z_orders[j])
    return [tuple(block) for block in per_block]


def materialize(problem: LiftProblem, v_blocks) -> Endomorphism:
    """Images g_i = xbar_i * prod_j z_j^(v[j][i]); relators are re-verified."""
    engine = problem.engine
    images = []
    for i in range(problem.pres.n):
        g = problem.xbar[i]
        for j, z in enumerate(problem.z_elements):
            g = engine.multiply(g, engine.power(z, v_blocks[j][i]))
        images.append(g)
    endo = Endomorphism(tuple(images))
    for k, rel in enumerate(problem.pres.relators):
        if evaluate(rel, endo.images, engine) != engine.identity():
            raise NotASolution(f"relator {k} fails at the materialized images")
    return endo


def is_automorphism(problem: LiftProblem, psi: Endomorphism) -> bool:
    """psi(N) = N, cross-checked against surjectivity of psi.

    For a homomorphic lift the two are equivalent; disagreement is a
    fatal internal error.
    """
    engine = problem.engine
    z_images = [evaluate(w, psi.images, engine) for w in problem.central.z_words]
    preserves_n = engines.subgroup_closure(engine, z_images) == problem.n_elements
    image = engines.subgroup_closure(engine, psi.images)
    surjective = len(image) == engine.order()
    if preserves_n != surjective:
        raise CriterionMismatch(
            f"psi(N)=N is {preserves_n} but surjectivity is {surjective}"
        )
    return preserves_n


def _enumerate_block_solutions(sets: tuple[SolutionSet, ...]):
    per_block = [modlinalg.enumerate_solutions(s) for s in sets]
    return itertools.product(*per_block)


def _solve_blocks(matrix: IntMatrix, rhs_blocks, moduli) -> tuple[SolutionSet, ...]:
    return tuple(
        modlinalg.solve(LinearSystem(matrix, tuple(rhs), modulus))
        for rhs, modulus in zip(rhs_blocks, moduli)
    )


def solve_hom_lifts(problem: LiftProblem) -> LiftReport:
    """All homomorphic lifts of phi, via one block system per z-generator."""
    matrix = build_exponent_matrix(problem.pres)
    residues = tuple(build_residue_vector(problem))
    sets = _solve_blocks(matrix, residues, problem.z_orders)
    count = 1
    for s in sets:
        count *= s.count
    count = int(count) if count else 0
    target = LiftTarget("hom", residues, sets, count)
    lifts: list[Lift] = []
    if all(s.solvable for s in sets):
        for combo in _enumerate_block_solutions(sets):
            endo = materialize(problem, combo)
            lifts.append(Lift(tuple(combo), endo, is_automorphism(problem, endo)))
    if len({lift.endo for lift in lifts}) != len(lifts) or len(lifts) != count:
        raise SolverConsistencyError("block solutions did not map to distinct lifts")
    return LiftReport(
        kind="homomorphic",
        matrix=matrix,
        extended_matrix=None,
        moduli=problem.z_orders,
        residues=residues,
        targets=(target,),
        lifts=tuple(lifts),
    )


def _smallest_prime_factor(n: int) -> int:
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n


def _is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    p = _smallest_prime_factor(n)
    while n % p == 0:
        n //= p
    return n == 1


def is_squarefree(n: int) -> bool:
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        if n % d == 0:
            n //= d
        d += 1
    return True


def _units(m: int) -> list[int]:
    return [c for c in range(m) if gcd(c, m) == 1]


def _residue_of_word(problem: LiftProblem, log_table, word: FreeWord, at) -> tuple[int, ...]:
    value = evaluate(word, at, problem.engine)
    exps = log_table.get(value.index)
    if exps is None:
        raise ResidueOutsideN(-1)
    return tuple((-e) % o for e, o in zip(exps, problem.z_orders))


def solve_aut_lifts(problem: LiftProblem) -> LiftReport:
    """All automorphic lifts of phi.

    Cyclic N of prime-power order #N = p^e: append the z-word's exponent
    row scaled by #N/p and solve for the p-1 targets that force the image
    of z to keep order #N.  Other cyclic N: one unscaled target per unit
    residue (each admissible image of z).  Non-cyclic N: one target per
    tuple of images of the z-generators that has matching orders and
    generates N, with one appended row per z-word.

    The union over targets is cross-checked against the homomorphic
    lifts filtered by the psi(N)=N criterion.
    """
    hom = solve_hom_lifts(problem)
    truth = {lift.endo for lift in hom.lifts if lift.automorphic}

    matrix = hom.matrix
    residues = hom.residues
    orders = problem.z_orders
    t = len(problem.z_elements)
    log_table = engines.central_log_table(problem.engine, problem.z_elements)
    f_rows = [
        list(exponent_vector(w, problem.pres.n)) for w in problem.central.z_words
    ]
    # f_i at the representatives: f_i(xbar) = prod_j z_j^(-u[i][j])
    u = [
        _residue_of_word(problem, log_table, w, problem.xbar)
        for w in problem.central.z_words
    ]

    targets: list[LiftTarget] = []
    lifts: list[Lift] = []
    seen: dict[Endomorphism, str] = {}

    def run_target(label: str, extended: IntMatrix, rhs_blocks) -> None:
        sets = _solve_blocks(extended, rhs_blocks, orders)
        count = 1
        for s in sets:
            count *= s.count
        count = int(count) if count else 0
        targets.append(LiftTarget(label, tuple(tuple(r) for r in rhs_blocks), sets, count))
        if not all(s.solvable for s in sets):
            return
        for combo in _enumerate_block_solutions(sets):
            endo = materialize(problem, combo)
            if endo in seen:
                raise SolverConsistencyError(
                    f"lift produced by targets {seen[endo]} and {label}"
                )
            seen[endo] = label
            if not is_automorphism(problem, endo):
                raise SolverConsistencyError(
                    f"target {label} produced a non-automorphic lift"
                )
            lifts.append(Lift(tuple(combo), endo, True))

    if t == 1:
        order = orders[0]
        w0 = residues[0]
        wf = u[0][0]
        if _is_prime_power(order):
            p = _smallest_prime_factor(order)
            s = order // p
            extended = matrix.stack_rows([[s * x for x in f_rows[0]]])
            for k in range(1, p):
                rhs = w0 + ((s * wf + k * s) % order,)
                run_target(f"k={k}", extended, (rhs,))
        else:
            # composite non-prime-power (or trivial) order: enumerate the
            # admissible images of z directly; the smallest-prime trick
            # only rules out one prime divisor.
            extended = matrix.stack_rows([f_rows[0]])
            for c in _units(order):
                rhs = w0 + ((wf + c) % order,)
                run_target(f"z->z^{c}", extended, (rhs,))
    else:
        extended = matrix.stack_rows(f_rows)
        n_list = list(problem.n_elements)
        candidates = []
        for tup in itertools.product(n_list, repeat=t):
            if any(
                engines.element_order(problem.engine, el) != o
                for el, o in zip(tup, orders)
            ):
                continue
            if engines.subgroup_closure(problem.engine, tup) != problem.n_elements:
                continue
            candidates.append(tup)
        for tup in candidates:
            logs = [log_table[el.index] for el in tup]
            rhs_blocks = []
            for j in range(t):
                rhs = list(residues[j])
                for i in range(t):
                    rhs.append((u[i][j] + logs[i][j]) % orders[j])
                rhs_blocks.append(tuple(rhs))
            label = "images=" + ",".join(
                format_word(engines.word_for_element(problem.engine, el), problem.pres.names)
                for el in tup
            )
            run_target(label, extended, tuple(rhs_blocks))

    if set(seen) != truth:
        raise SolverConsistencyError(
            f"target construction found {len(seen)} automorphic lifts, "
            f"filtering homomorphic lifts found {len(truth)}"
        )
    return LiftReport(
        kind="automorphic",
        matrix=matrix,
        extended_matrix=extended,
        moduli=orders,
        residues=residues,
        targets=tuple(targets),
        lifts=tuple(lifts),
    )


def squarefree_existence(problem: LiftProblem) -> bool:
    """For squarefree #N: a homomorphic lift exists iff an automorphic one does.

    Only solvability of the block systems is checked; nothing is
    materialized.
    """
    if not is_squarefree(problem.n_order):
        raise NotSquarefree(f"#N = {problem.n_order} is not squarefree")
    matrix = build_exponent_matrix(problem.pres)
    residues = build_residue_vector(problem)
    sets = _solve_blocks(matrix, residues, problem.z_orders)
    return all(s.solvable for s in sets)


def infinite_cyclic_aut_targets(
    matrix: IntMatrix, f_row, w, w_f: int
) -> list[LinearSystem]:
    """The two integer systems whose solutions are automorphic lifts when
    N is infinite cyclic: the image of z must be z or z^-1."""
    extended = matrix.stack_rows([list(f_row)])
    return [
        LinearSystem(extended, tuple(w) + (w_f + 1,), 0),
        LinearSystem(extended, tuple(w) + (w_f - 1,), 0),
    ]


def report_to_dict(problem: LiftProblem, report: LiftReport) -> dict:
    """JSON-ready form of a lift report (deterministic for fixed inputs)."""
    names = problem.pres.names

    def endo_words(endo: Endomorphism) -> list[str]:
        return [
            format_word(engines.word_for_element(problem.engine, im), names)
            for im in endo.images
        ]

    def solset(s: SolutionSet) -> dict:
        return {
            "solvable": s.solvable,
            "count": "INFINITE" if s.count == modlinalg.INFINITE else str(int(s.count)),
            "particular": modlinalg.vector_to_strings(s.particular),
            "kernel": [
                {"vector": modlinalg.vector_to_strings(v), "period": str(p)}
                for v, p in s.kernel_basis
            ],
        }

    return {
        "kind": report.kind,
        "generators": list(names),
        "matrix": modlinalg.matrix_to_strings(report.matrix),
        "extended_matrix": (
            modlinalg.matrix_to_strings(report.extended_matrix)
            if report.extended_matrix is not None
            else None
        ),
        "moduli": [str(o) for o in report.moduli],
        "residues": [modlinalg.vector_to_strings(r) for r in report.residues],
        "targets": [
            {
                "label": tg.label,
                "rhs": [modlinalg.vector_to_strings(r) for r in tg.rhs_blocks],
                "solvable": all(s.solvable for s in tg.solution_sets),
                "count": str(tg.count),
                "solution_sets": [solset(s) for s in tg.solution_sets],
            }
            for tg in report.targets
        ],
        "lift_count": len(report.lifts),
        "lifts": [
            {
                "v": [modlinalg.vector_to_strings(b) for b in lift.v_blocks],
                "images": endo_words(lift.endo),
                "automorphic": lift.automorphic,
            }
            for lift in report.lifts
        ],
    }
