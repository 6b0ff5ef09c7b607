"""Concrete finite groups behind a shared engine contract.

Engines hold an explicit, deterministically ordered element list and hand
out opaque Element handles (engine + index).  A PermutationEngine stores
each element as a permutation tuple; it backs three constructions:

  * todd_coxeter: regular action of a finitely presented group,
  * quotient_engine: regular action of G/N on cosets of a central N,
  * automorphism groups: automorphisms as permutations of the base
    group's element indices (composition engines).

Multiplication rows of the Cayley table are materialized lazily, so hot
loops (oracle searches) run on table lookups instead of tuple
composition.  Engines are immutable after construction; lazy caches only
ever add rows, so concurrent readers are safe.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence, TYPE_CHECKING

from .words import FreeWord, reduce as reduce_word

if TYPE_CHECKING:  # pragma: no cover
    from .presentation import Presentation


class EngineMismatch(TypeError):
    """Elements of two different engines were mixed."""


class CosetLimitExceeded(RuntimeError):
    """Coset enumeration outgrew its limit (infinite group or limit too small)."""


class NotInSubgroup(ValueError):
    """Element is not a product of the given central generators."""


class NotSubgroup(ValueError):
    """Element set is not closed under multiplication."""


class NotNormal(ValueError):
    """Element set is not invariant under conjugation."""


class Element:
    """Opaque group element: equality, hashing and a total order per engine."""

    __slots__ = ("engine", "index")

    def __init__(self, engine: "GroupEngine", index: int):
        self.engine = engine
        self.index = index

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and other.engine is self.engine
            and other.index == self.index
        )

    def __hash__(self):
        return hash((id(self.engine), self.index))

    def __lt__(self, other):
        if not isinstance(other, Element) or other.engine is not self.engine:
            raise EngineMismatch("cannot order elements of different engines")
        return self.index < other.index

    def __repr__(self):
        return f"Element({self.index})"


class GroupEngine:
    """Shared index-based implementation of the group-engine contract.

    Subclasses fill _gen_indices and implement _mult_index/_inv_index.
    """

    _order: int
    _gen_indices: list[int]

    def check(self, el: Element) -> int:
        if not isinstance(el, Element) or el.engine is not self:
            raise EngineMismatch("element belongs to a different engine")
        return el.index

    def element(self, index: int) -> Element:
        if not 0 <= index < self._order:
            raise IndexError(f"element index {index} out of range")
        return Element(self, index)

    def identity(self) -> Element:
        return Element(self, 0)

    def multiply(self, a: Element, b: Element) -> Element:
        return Element(self, self._mult_index(self.check(a), self.check(b)))

    def inverse(self, a: Element) -> Element:
        return Element(self, self._inv_index(self.check(a)))

    def generator(self, i: int) -> Element:
        return Element(self, self._gen_indices[i])

    @property
    def ngens(self) -> int:
        return len(self._gen_indices)

    def order(self) -> int:
        return self._order

    def elements(self) -> list[Element]:
        return [Element(self, i) for i in range(self._order)]

    def power(self, a: Element, k: int) -> Element:
        """a**k by square-and-multiply; negative k goes through the inverse."""
        idx = self.check(a)
        if k < 0:
            idx = self._inv_index(idx)
            k = -k
        acc = 0  # identity index
        while k:
            if k & 1:
                acc = self._mult_index(acc, idx)
            idx = self._mult_index(idx, idx)
            k >>= 1
        return Element(self, acc)

    def _mult_index(self, i: int, j: int) -> int:
        raise NotImplementedError

    def _inv_index(self, i: int) -> int:
        raise NotImplementedError


def _compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    # right action: apply a, then b
    return tuple(b[x] for x in a)


class PermutationEngine(GroupEngine):
    """Finite group of permutations of {0..degree-1}.

    Elements are enumerated at construction (BFS closure of the
    generators unless an explicit element order is supplied).  Index 0 is
    always the identity.
    """

    def __init__(
        self,
        generator_perms: Sequence[tuple[int, ...]],
        element_perms: Sequence[tuple[int, ...]] | None = None,
    ):
        if not generator_perms and element_perms is None:
            raise ValueError("need at least one generator permutation")
        degree = len(generator_perms[0]) if generator_perms else len(element_perms[0])
        for p in generator_perms:
            if len(p) != degree or sorted(p) != list(range(degree)):
                raise ValueError("generator is not a permutation of the right degree")
        self.degree = degree
        self._gen_perms = [tuple(p) for p in generator_perms]

        identity = tuple(range(degree))
        closure = self._closure(identity)
        if element_perms is None:
            perms = closure
        else:
            perms = [tuple(p) for p in element_perms]
            if set(perms) != set(closure):
                raise ValueError("given elements do not match the generator closure")
            if perms[0] != identity:
                raise ValueError("element order must start at the identity")
        self._perms = perms
        self._index = {p: i for i, p in enumerate(perms)}
        if len(self._index) != len(perms):
            raise ValueError("duplicate element permutations")
        self._order = len(perms)
        self._gen_indices = [self._index[p] for p in self._gen_perms]
        self._table: list[list[int] | None] = [None] * self._order
        self._inv: list[int | None] = [None] * self._order
        self._tree: tuple[list[int], list[tuple[int, int]], list[int]] | None = None

    def _closure(self, identity: tuple[int, ...]) -> list[tuple[int, ...]]:
        elems = [identity]
        seen = {identity}
        pos = 0
        while pos < len(elems):
            cur = elems[pos]
            for g in self._gen_perms:
                nxt = _compose(cur, g)
                if nxt not in seen:
                    seen.add(nxt)
                    elems.append(nxt)
            pos += 1
        return elems

    def perm(self, el: Element) -> tuple[int, ...]:
        return self._perms[self.check(el)]

    def element_from_perm(self, perm: tuple[int, ...]) -> Element:
        try:
            return Element(self, self._index[tuple(perm)])
        except KeyError:
            raise NotInSubgroup("permutation is not an element of this engine") from None

    def _mult_index(self, i: int, j: int) -> int:
        row = self._table[i]
        if row is None:
            pi = self._perms[i]
            index = self._index
            perms = self._perms
            row = [index[_compose(pi, perms[k])] for k in range(self._order)]
            self._table[i] = row
        return row[j]

    def _inv_index(self, i: int) -> int:
        inv = self._inv[i]
        if inv is None:
            p = self._perms[i]
            q = [0] * self.degree
            for a, b in enumerate(p):
                q[b] = a
            inv = self._index[tuple(q)]
            self._inv[i] = inv
        return inv

    def dump(self) -> dict:
        """JSON-friendly snapshot: degree plus generator permutations."""
        return {
            "degree": self.degree,
            "generators": [list(p) for p in self._gen_perms],
        }

    # Cayley-graph BFS tree rooted at the identity; edge alphabet is
    # (gen 0, +1), (gen 0, -1), (gen 1, +1), ... which also fixes the
    # lexicographic order used for shortest words.
    def _word_tree(self):
        if self._tree is None:
            steps = []
            for g in range(self.ngens):
                gi = self._gen_indices[g]
                steps.append((g, 1, gi))
                steps.append((g, -1, self._inv_index(gi)))
            parent = [-1] * self._order
            letter: list[tuple[int, int]] = [(-1, 0)] * self._order
            order = [0]
            seen = [False] * self._order
            seen[0] = True
            pos = 0
            while pos < len(order):
                cur = order[pos]
                for g, sign, step in steps:
                    nxt = self._mult_index(cur, step)
                    if not seen[nxt]:
                        seen[nxt] = True
                        parent[nxt] = cur
                        letter[nxt] = (g, sign)
                        order.append(nxt)
                pos += 1
            if len(order) != self._order:
                raise AssertionError("generators do not generate the engine")
            self._tree = (parent, letter, order)
        return self._tree


def todd_coxeter(presentation: "Presentation", max_cosets: int = 50000) -> PermutationEngine:
    """Enumerate cosets of the trivial subgroup of a finitely presented group.

    Scans every relator (plus the generator/inverse cancellation pairs)
    at every live coset, filling the first undefined entry of each gap
    and applying deductions and coincidences immediately; passes repeat
    until the table is stable.  Returns the regular permutation engine,
    so the engine order is the group order.

    Raises CosetLimitExceeded when the number of live cosets passes
    max_cosets: the group may be infinite, or the limit too small.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be >= 1")
    ngens = len(presentation.names)
    nsyms = 2 * ngens

    def inv_sym(d: int) -> int:
        return d ^ 1

    seqs: list[list[int]] = []
    for rel in presentation.relators:
        seq: list[int] = []
        for gen, exp in rel.letters:
            sym = 2 * gen if exp > 0 else 2 * gen + 1
            seq.extend([sym] * abs(exp))
        if seq:
            seqs.append(seq)
    for g in range(ngens):
        seqs.append([2 * g, 2 * g + 1])
        seqs.append([2 * g + 1, 2 * g])

    table: list[list[int]] = [[-1] * nsyms]
    parent = [0]
    live = 1
    mods = 0  # bumped on every define/deduction/merge; passes repeat until stable

    def find(c: int) -> int:
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def set_edge(x: int, d: int, y: int) -> None:
        table[x][d] = y
        table[y][inv_sym(d)] = x

    def define(x: int, d: int) -> int:
        nonlocal live, mods
        live += 1
        mods += 1
        if live > max_cosets:
            raise CosetLimitExceeded(
                f"more than {max_cosets} live cosets; group may be infinite"
            )
        y = len(table)
        table.append([-1] * nsyms)
        parent.append(y)
        set_edge(x, d, y)
        return y

    def coincidence(a: int, b: int) -> None:
        nonlocal live, mods
        stack = [(a, b)]
        while stack:
            a, b = stack.pop()
            a, b = find(a), find(b)
            if a == b:
                continue
            if a > b:
                a, b = b, a
            parent[b] = a
            live -= 1
            mods += 1
            rowa, rowb = table[a], table[b]
            for d in range(nsyms):
                nb = rowb[d]
                if nb == -1:
                    continue
                if rowa[d] == -1:
                    rowa[d] = nb
                else:
                    stack.append((rowa[d], nb))

    def scan_and_fill(start: int, seq: list[int]) -> None:
        nonlocal mods
        f = find(start)
        b = f
        i, j = 0, len(seq) - 1
        while True:
            while i <= j:
                nxt = table[f][seq[i]]
                if nxt == -1:
                    break
                f = find(nxt)
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i:
                nxt = table[b][inv_sym(seq[j])]
                if nxt == -1:
                    break
                b = find(nxt)
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if j == i:
                set_edge(f, seq[i], b)
                mods += 1
                return
            f = define(f, seq[i])
            i += 1

    while True:
        before = mods
        c = 0
        while c < len(table):
            if find(c) == c:
                for seq in seqs:
                    scan_and_fill(c, seq)
                    if find(c) != c:
                        break
            c += 1
        if mods == before:
            break

    live_list = [c for c in range(len(table)) if find(c) == c]
    renumber = {c: i for i, c in enumerate(live_list)}
    perms = []
    for g in range(ngens):
        images = []
        for c in live_list:
            v = table[c][2 * g]
            if v == -1:
                raise AssertionError("incomplete coset table after stabilization")
            images.append(renumber[find(v)])
        perms.append(tuple(images))
    engine = PermutationEngine(perms)
    if engine.order() != len(live_list):
        raise AssertionError("regular action order does not match coset count")
    return engine


def subgroup_closure(engine: GroupEngine, seeds: Iterable[Element]) -> tuple[Element, ...]:
    """Smallest subgroup containing the seeds, sorted by element index."""
    seed_indices = sorted({engine.check(s) for s in seeds})
    seen = {0}
    frontier = [0]
    for s in seed_indices:
        if s not in seen:
            seen.add(s)
            frontier.append(s)
    pos = 0
    while pos < len(frontier):
        cur = frontier[pos]
        for s in seed_indices:
            nxt = engine._mult_index(cur, s)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
        pos += 1
    return tuple(Element(engine, i) for i in sorted(seen))


def element_order(engine: GroupEngine, h: Element) -> int:
    """Least k >= 1 with h^k = identity."""
    idx = engine.check(h)
    k = 1
    cur = idx
    while cur != 0:
        cur = engine._mult_index(cur, idx)
        k += 1
    return k


def is_central(engine: GroupEngine, h: Element) -> bool:
    """True iff h commutes with every generator."""
    hi = engine.check(h)
    for g in range(engine.ngens):
        gi = engine._gen_indices[g]
        if engine._mult_index(hi, gi) != engine._mult_index(gi, hi):
            return False
    return True


def central_log(
    engine: GroupEngine, h: Element, z_gens: Sequence[Element]
) -> tuple[int, ...]:
    """Exponents of h over the central generators.

    Returns the lexicographically least tuple (a_1..a_t) with
    0 <= a_j < order(z_j) and z_1^a_1 * ... * z_t^a_t = h.
    """
    table = central_log_table(engine, z_gens)
    hi = engine.check(h)
    try:
        return table[hi]
    except KeyError:
        raise NotInSubgroup(
            "element is not a product of the given central generators"
        ) from None


def central_log_table(
    engine: GroupEngine, z_gens: Sequence[Element]
) -> dict[int, tuple[int, ...]]:
    """Element index -> least exponent tuple, for every product of z-powers."""
    orders = [element_order(engine, z) for z in z_gens]
    power_lists = []
    for z, o in zip(z_gens, orders):
        zi = engine.check(z)
        powers = [0]
        for _ in range(o - 1):
            powers.append(engine._mult_index(powers[-1], zi))
        power_lists.append(powers)
    table: dict[int, tuple[int, ...]] = {}
    for exps in itertools.product(*(range(o) for o in orders)):
        idx = 0
        for powers, e in zip(power_lists, exps):
            idx = engine._mult_index(idx, powers[e])
        if idx not in table:
            table[idx] = exps
    return table


class QuotientEngine(PermutationEngine):
    """Regular action of G/N for a central (hence normal) subgroup N."""

    def __init__(self, parent_engine: GroupEngine, generator_perms, coset_of):
        super().__init__(generator_perms)
        self.parent = parent_engine
        self._coset_of = coset_of  # parent element index -> coset point
        point_to_element = [-1] * self.degree
        for i, p in enumerate(self._perms):
            point_to_element[p[0]] = i
        self._point_to_element = point_to_element

    def project(self, el: Element) -> Element:
        idx = self.parent.check(el)
        return Element(self, self._point_to_element[self._coset_of[idx]])


def quotient_engine(engine: GroupEngine, n_elements: Iterable[Element]) -> QuotientEngine:
    """Engine for G/N with its projection map; N must be a normal subgroup."""
    n_idx = sorted({engine.check(el) for el in n_elements})
    n_set = set(n_idx)
    if 0 not in n_set:
        raise NotSubgroup("subgroup must contain the identity")
    for a in n_idx:
        for b in n_idx:
            if engine._mult_index(a, b) not in n_set:
                raise NotSubgroup("element set is not closed under multiplication")
    for g in range(engine.ngens):
        gi = engine._gen_indices[g]
        ginv = engine._inv_index(gi)
        for a in n_idx:
            conj = engine._mult_index(engine._mult_index(ginv, a), gi)
            if conj not in n_set:
                raise NotNormal("subgroup is not normalized by the generators")

    order = engine.order()
    if order % len(n_idx):
        raise NotSubgroup("subgroup size does not divide the group order")
    coset_of = [-1] * order
    reps = []
    for i in range(order):
        if coset_of[i] != -1:
            continue
        point = len(reps)
        reps.append(i)
        for a in n_idx:
            coset_of[engine._mult_index(i, a)] = point
    gen_perms = []
    for g in range(engine.ngens):
        gi = engine._gen_indices[g]
        gen_perms.append(
            tuple(coset_of[engine._mult_index(rep, gi)] for rep in reps)
        )
    q = QuotientEngine(engine, gen_perms, coset_of)
    if q.order() != order // len(n_idx):
        raise AssertionError("quotient order mismatch")
    return q


def word_for_element(engine: GroupEngine, h: Element) -> FreeWord:
    """Shortest word in the generators evaluating to h.

    Breadth-first search over the Cayley graph with inverse edges; ties
    are broken lexicographically with x_i before x_i^-1 before x_(i+1).
    """
    idx = engine.check(h)
    parent, letter, _ = engine._word_tree()
    raw: list[tuple[int, int]] = []
    while idx != 0:
        g, sign = letter[idx]
        raw.append((g, sign))
        idx = parent[idx]
    raw.reverse()
    return reduce_word(raw)


def map_images(engine: GroupEngine, images: Sequence[Element]) -> tuple[int, ...]:
    """Extend generator images to the whole engine along its BFS tree.

    Returns, for every element index of `engine`, the index of its image
    in the images' engine.  The generator images must define a
    homomorphism for the result to be meaningful.
    """
    target = images[0].engine
    img_idx = [target.check(im) for im in images]
    img_inv = [target._inv_index(i) for i in img_idx]
    parent, letter, order = engine._word_tree()
    out = [0] * engine.order()
    for idx in order[1:]:
        g, sign = letter[idx]
        step = img_idx[g] if sign > 0 else img_inv[g]
        out[idx] = target._mult_index(out[parent[idx]], step)
    return tuple(out)


def subgroup_generator_words(
    engine: GroupEngine, n_elements: Iterable[Element]
) -> list[FreeWord]:
    """Words for a small generating set of the given subgroup.

    Greedy: walk the subgroup in element order, keeping each element not
    yet generated.  Deterministic; the result generates exactly the
    subgroup (checked).
    """
    n_sorted = sorted({engine.check(el) for el in n_elements})
    chosen: list[Element] = []
    have = {0}
    for idx in n_sorted:
        if idx in have:
            continue
        chosen.append(Element(engine, idx))
        have = {el.index for el in subgroup_closure(engine, chosen)}
    if have != set(n_sorted) | {0}:
        raise NotSubgroup("element set is not a subgroup")
    return [word_for_element(engine, el) for el in chosen]
