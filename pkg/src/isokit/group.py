"""Finite groups presented by multiplication tables.

Element 0 is always the identity.  Subgroups are frozensets of element
indices; conjugacy classes of subgroups are keyed by the class member
that is smallest under (order, sorted elements).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import GroupTooLarge, NonIntegral, NotStrictChain

Subgroup = FrozenSet[int]
Perm = Tuple[int, ...]

DEFAULT_MAX_ORDER = 48


def max_group_order() -> int:
    """Order cap for group construction; override with ISOKIT_MAX_GROUP_ORDER."""
    raw = os.environ.get("ISOKIT_MAX_GROUP_ORDER", "")
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_MAX_ORDER


def _skey(sub: Iterable[int]) -> Tuple[int, Tuple[int, ...]]:
    elems = tuple(sorted(sub))
    return (len(elems), elems)


class FiniteGroup:
    """A finite group on elements 0..n-1 with a full multiplication table."""

    def __init__(self, table: Sequence[Sequence[int]], validate: bool = True):
        self.table: Tuple[Perm, ...] = tuple(tuple(int(v) for v in row) for row in table)
        self.order = len(self.table)
        if self.order == 0:
            raise ValueError("empty multiplication table")
        if self.order > max_group_order():
            raise GroupTooLarge(
                f"group order {self.order} exceeds cap {max_group_order()}"
            )
        if validate:
            self._validate()
        self._inverse = tuple(self.table[a].index(0) for a in range(self.order))
        self._subgroups: Optional[Tuple[Subgroup, ...]] = None
        self._classes: Optional[Tuple[Tuple[Subgroup, ...], ...]] = None

    def _validate(self) -> None:
        n = self.order
        ident = list(range(n))
        for row in self.table:
            if len(row) != n or sorted(row) != ident:
                raise ValueError("each table row must be a permutation of 0..n-1")
        for col in zip(*self.table):
            if sorted(col) != ident:
                raise ValueError("each table column must be a permutation of 0..n-1")
        if any(self.table[0][a] != a or self.table[a][0] != a for a in range(n)):
            raise ValueError("element 0 must be the identity")
        for a in range(n):
            for b in range(n):
                ab = self.table[a][b]
                for c in range(n):
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise ValueError("multiplication table is not associative")

    # -- basic arithmetic -------------------------------------------------

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inverse[a]

    def conjugate(self, x: int, g: int) -> int:
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def is_abelian(self) -> bool:
        return all(
            self.mul(a, b) == self.mul(b, a)
            for a in range(self.order)
            for b in range(a)
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_generators(cls, degree: int, generators: Sequence[Sequence[int]]) -> "FiniteGroup":
        """Close permutation generators and build the multiplication table.

        Elements are the sorted permutation tuples, which puts the identity
        at index 0.
        """
        ident = tuple(range(degree))
        gens = []
        for p in generators:
            pt = tuple(int(v) for v in p)
            if sorted(pt) != list(range(degree)):
                raise ValueError(f"not a permutation of 0..{degree - 1}: {p}")
            gens.append(pt)
        closure = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for p in frontier:
                for q in gens:
                    comp = tuple(p[q[i]] for i in range(degree))
                    if comp not in closure:
                        closure.add(comp)
                        nxt.append(comp)
                    comp2 = tuple(q[p[i]] for i in range(degree))
                    if comp2 not in closure:
                        closure.add(comp2)
                        nxt.append(comp2)
            frontier = nxt
            if len(closure) > max_group_order():
                raise GroupTooLarge(
                    f"generated group exceeds cap {max_group_order()}"
                )
        perms = sorted(closure)
        index = {p: i for i, p in enumerate(perms)}
        table = [
            [index[tuple(p[q[i]] for i in range(degree))] for q in perms]
            for p in perms
        ]
        return cls(table, validate=False)

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        if n < 1:
            raise ValueError("cyclic group needs n >= 1")
        return cls([[(i + j) % n for j in range(n)] for i in range(n)], validate=False)

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroup":
        if n < 1:
            raise ValueError("symmetric group needs n >= 1")
        if n == 1:
            return cls.cyclic(1)
        swap = [1, 0] + list(range(2, n))
        cycle = list(range(1, n)) + [0]
        return cls.from_generators(n, [swap, cycle])

    @classmethod
    def dihedral(cls, n: int) -> "FiniteGroup":
        """Symmetries of the regular n-gon, order 2n."""
        if n < 2:
            raise ValueError("dihedral group needs n >= 2")
        rot = [(i + 1) % n for i in range(n)]
        ref = [(n - i) % n for i in range(n)]
        return cls.from_generators(n, [rot, ref])

    @classmethod
    def direct_product(cls, a: "FiniteGroup", b: "FiniteGroup") -> "FiniteGroup":
        n, m = a.order, b.order
        table = [
            [a.mul(i // m, k // m) * m + b.mul(i % m, k % m) for k in range(n * m)]
            for i in range(n * m)
        ]
        return cls(table, validate=False)


# -- subgroups --------------------------------------------------------------


def subgroup_closure(g: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing the given elements."""
    closure = {0}
    frontier = [0]
    gen_list = [x for x in gens]
    for x in gen_list:
        if x not in closure:
            closure.add(x)
            frontier.append(x)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(closure):
                for c in (g.mul(a, b), g.mul(b, a)):
                    if c not in closure:
                        closure.add(c)
                        nxt.append(c)
            ai = g.inv(a)
            if ai not in closure:
                closure.add(ai)
                nxt.append(ai)
        frontier = nxt
    return frozenset(closure)


def is_subgroup(g: FiniteGroup, elems: Iterable[int]) -> bool:
    s = frozenset(elems)
    if 0 not in s:
        return False
    return all(g.mul(a, b) in s for a in s for b in s)


def enumerate_subgroups(g: FiniteGroup) -> Tuple[Subgroup, ...]:
    """All subgroups, by closing the cyclic subgroups under pairwise joins."""
    if g._subgroups is not None:
        return g._subgroups
    found = {subgroup_closure(g, (x,)) for x in g.elements}
    found.add(frozenset({0}))
    while True:
        new = set()
        pool = sorted(found, key=_skey)
        for a, b in combinations(pool, 2):
            if a <= b or b <= a:
                continue
            j = subgroup_closure(g, a | b)
            if j not in found:
                new.add(j)
        if not new:
            break
        found |= new
    result = tuple(sorted(found, key=_skey))
    g._subgroups = result
    return result


def conjugate_subgroup(g: FiniteGroup, sub: Iterable[int], x: int) -> Subgroup:
    return frozenset(g.conjugate(s, x) for s in sub)


def is_normal(g: FiniteGroup, sub: Subgroup) -> bool:
    return all(conjugate_subgroup(g, sub, x) == sub for x in g.elements)


def subgroup_conjugacy_classes(g: FiniteGroup) -> Tuple[Tuple[Subgroup, ...], ...]:
    """Conjugacy classes of subgroups, each sorted, classes sorted by representative."""
    if g._classes is not None:
        return g._classes
    subs = set(enumerate_subgroups(g))
    classes = []
    while subs:
        rep = min(subs, key=_skey)
        orbit = {conjugate_subgroup(g, rep, x) for x in g.elements}
        classes.append(tuple(sorted(orbit, key=_skey)))
        subs -= orbit
    result = tuple(sorted(classes, key=lambda c: _skey(c[0])))
    g._classes = result
    return result


def class_rep_of(g: FiniteGroup, sub: Iterable[int]) -> Subgroup:
    """Canonical representative of the conjugacy class of a subgroup."""
    return min((conjugate_subgroup(g, sub, x) for x in g.elements), key=_skey)


def is_subconjugate(g: FiniteGroup, h: Subgroup, k: Subgroup) -> bool:
    """True iff some conjugate of h lies inside k."""
    return any(conjugate_subgroup(g, h, x) <= k for x in g.elements)


def is_cyclic_subgroup(g: FiniteGroup, sub: Subgroup) -> bool:
    return any(g.element_order(x) == len(sub) for x in sub)


def class_names(g: FiniteGroup) -> Dict[Subgroup, str]:
    """Deterministic display names for subgroup classes, keyed by representative.

    Trivial class is "e", cyclic classes are "C<order>", the rest "G<order>";
    same-named classes get "#1", "#2", ... suffixes in representative order.
    """
    classes = subgroup_conjugacy_classes(g)
    base: List[Tuple[Subgroup, str]] = []
    for cls in classes:
        rep = cls[0]
        if len(rep) == 1:
            base.append((rep, "e"))
        elif is_cyclic_subgroup(g, rep):
            base.append((rep, f"C{len(rep)}"))
        else:
            base.append((rep, f"G{len(rep)}"))
    counts: Dict[str, int] = {}
    for _, name in base:
        counts[name] = counts.get(name, 0) + 1
    seen: Dict[str, int] = {}
    names: Dict[Subgroup, str] = {}
    for rep, name in base:
        if counts[name] == 1:
            names[rep] = name
        else:
            seen[name] = seen.get(name, 0) + 1
            names[rep] = f"{name}#{seen[name]}"
    return names


def parse_subgroup_token(g: FiniteGroup, token: str) -> Subgroup:
    """Resolve a subgroup named in CLI input.

    Accepts "e", "G" (the full group), a class name from class_names, or an
    explicit element list like "{0,3}".
    """
    tok = token.strip()
    if tok == "e":
        return frozenset({0})
    if tok == "G":
        return frozenset(g.elements)
    if tok.startswith("{") and tok.endswith("}"):
        elems = frozenset(int(v) for v in tok[1:-1].split(",") if v.strip())
        if not is_subgroup(g, elems):
            raise ValueError(f"{token} is not a subgroup")
        return elems
    for rep, name in class_names(g).items():
        if name == tok:
            return rep
    raise ValueError(f"unknown subgroup name: {token!r}")


def subconjugacy_total_order(
    g: FiniteGroup, reps: Optional[Sequence[Subgroup]] = None
) -> List[Subgroup]:
    """Class representatives ordered so larger classes come first.

    Proper subconjugacy strictly drops the order, so sorting by descending
    order (ties by representative) is a linear extension of the poset.
    """
    if reps is None:
        reps = [cls[0] for cls in subgroup_conjugacy_classes(g)]
    return sorted(reps, key=lambda r: (-len(r), tuple(sorted(r))))


# -- chains -----------------------------------------------------------------


def validate_chain(g: FiniteGroup, chain: Sequence[Iterable[int]]) -> Tuple[Subgroup, ...]:
    """Check a strictly increasing subgroup chain H_0 < H_1 < ... < H_n."""
    subs = tuple(frozenset(h) for h in chain)
    if not subs:
        raise NotStrictChain("empty chain")
    for h in subs:
        if not is_subgroup(g, h):
            raise NotStrictChain(f"not a subgroup: {sorted(h)}")
    for lo, hi in zip(subs, subs[1:]):
        if not (lo < hi):
            raise NotStrictChain(
                f"chain not strictly increasing: {sorted(lo)} then {sorted(hi)}"
            )
    return subs


def enumerate_chains(g: FiniteGroup, max_len: int) -> List[Tuple[Subgroup, ...]]:
    """All strict subgroup chains with at most max_len inclusions."""
    subs = enumerate_subgroups(g)
    chains: List[Tuple[Subgroup, ...]] = []

    def grow(chain: Tuple[Subgroup, ...]) -> None:
        chains.append(chain)
        if len(chain) - 1 >= max_len:
            return
        for s in subs:
            if chain[-1] < s:
                grow(chain + (s,))

    for s in subs:
        grow((s,))
    chains.sort(key=lambda ch: (len(ch), [_skey(h) for h in ch]))
    return chains


def chain_name(g: FiniteGroup, chain: Sequence[Subgroup]) -> str:
    names = class_names(g)
    return "<".join(names[class_rep_of(g, h)] for h in chain)


# -- table of marks ----------------------------------------------------------


def _coset_reps(g: FiniteGroup, sub: Subgroup) -> List[int]:
    seen = set()
    reps = []
    for x in g.elements:
        coset = frozenset(g.mul(x, s) for s in sub)
        if coset not in seen:
            seen.add(coset)
            reps.append(x)
    return reps


def count_fixed_cosets(g: FiniteGroup, h: Subgroup, k: Subgroup) -> int:
    """|(G/h)^k|: cosets xh with x^-1 k x inside h."""
    count = 0
    for x in _coset_reps(g, h):
        xi = g.inv(x)
        if all(g.mul(g.mul(xi, s), x) in h for s in k):
            count += 1
    return count


@dataclass(frozen=True)
class MarksTable:
    """Table of marks: matrix[i][j] = |(G/reps[i])^{reps[j]}|.

    Representatives are in ascending subconjugacy-compatible order, which
    makes the matrix lower triangular with positive diagonal.
    """

    reps: Tuple[Tuple[int, ...], ...]
    names: Tuple[str, ...]
    matrix: Tuple[Tuple[int, ...], ...]

    def index_of(self, name: str) -> int:
        return self.names.index(name)

    def solve_marks(self, marks: Sequence[int]) -> Tuple[Fraction, ...]:
        """Solve transpose(matrix) @ c = marks exactly by back substitution."""
        n = len(self.reps)
        if len(marks) != n:
            raise ValueError(f"marks vector needs {n} entries, got {len(marks)}")
        c: List[Fraction] = [Fraction(0)] * n
        # row r of the transpose reads sum_{j >= r} matrix[j][r] * c[j]
        for r in range(n - 1, -1, -1):
            acc = Fraction(marks[r])
            for j in range(r + 1, n):
                acc -= self.matrix[j][r] * c[j]
            c[r] = acc / self.matrix[r][r]
        return tuple(c)

    def marks_of(self, coeffs: Sequence) -> Tuple:
        """Marks vector of sum_i coeffs[i] * [G/reps[i]]."""
        n = len(self.reps)
        return tuple(
            sum(coeffs[i] * self.matrix[i][j] for i in range(n)) for j in range(n)
        )

    def integral_solution(self, marks: Sequence[int]) -> Tuple[int, ...]:
        """Like solve_marks but demands integers; NonIntegral carries the witness."""
        c = self.solve_marks(marks)
        if any(v.denominator != 1 for v in c):
            raise NonIntegral(
                "marks vector is not in the image of the Burnside ring: "
                + ", ".join(f"{n}={v}" for n, v in zip(self.names, c)),
                witness=c,
            )
        return tuple(int(v) for v in c)


def table_of_marks(g: FiniteGroup) -> MarksTable:
    classes = subgroup_conjugacy_classes(g)
    reps = [cls[0] for cls in classes]
    names = class_names(g)
    matrix = tuple(
        tuple(count_fixed_cosets(g, hi, hj) for hj in reps) for hi in reps
    )
    return MarksTable(
        reps=tuple(tuple(sorted(r)) for r in reps),
        names=tuple(names[r] for r in reps),
        matrix=matrix,
    )
