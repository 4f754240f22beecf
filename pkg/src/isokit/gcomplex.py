"""Finite simplicial complexes carrying a simplicial group action.

Simplices are sorted tuples of vertex indices.  A complex is "regular"
when every group element that maps a simplex to itself fixes it
vertexwise; one barycentric subdivision always repairs a failure, and
the constructions that need regularity check it instead of assuming it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import MissingStratum, NotRegular
from .group import (
    FiniteGroup,
    Subgroup,
    class_names,
    class_rep_of,
    is_subconjugate,
    subconjugacy_total_order,
)

Simplex = Tuple[int, ...]
SimplexSet = FrozenSet[Simplex]


def _normalize_facets(facets: Iterable[Iterable[int]]) -> Tuple[Simplex, ...]:
    cleaned = {tuple(sorted(set(f))) for f in facets}
    cleaned.discard(())
    maximal = [
        f for f in cleaned
        if not any(f != g and set(f) < set(g) for g in cleaned)
    ]
    return tuple(sorted(maximal, key=lambda f: (len(f), f)))


def complete_action(
    group: FiniteGroup, n_vertices: int, partial: Dict[int, Sequence[int]]
) -> Dict[int, Tuple[int, ...]]:
    """Fill in an action given on a generating set of group elements."""
    known: Dict[int, Tuple[int, ...]] = {0: tuple(range(n_vertices))}
    for g, perm in partial.items():
        if not 0 <= g < group.order:
            raise ValueError(f"action names element {g}, outside the group")
        p = tuple(int(v) for v in perm)
        if sorted(p) != list(range(n_vertices)):
            raise ValueError(f"action of element {g} is not a vertex permutation")
        if g in known and known[g] != p:
            raise ValueError(f"conflicting permutations for element {g}")
        known[g] = p
    changed = True
    while changed and len(known) < group.order:
        changed = False
        for a in list(known):
            for b in list(known):
                ab = group.mul(a, b)
                if ab not in known:
                    pa, pb = known[a], known[b]
                    known[ab] = tuple(pa[pb[v]] for v in range(n_vertices))
                    changed = True
    if len(known) < group.order:
        raise ValueError("action values do not generate the whole group")
    return known


class GComplex:
    """An abstract simplicial complex with a vertex action of a finite group."""

    def __init__(
        self,
        n_vertices: int,
        facets: Iterable[Iterable[int]],
        action: Dict[int, Sequence[int]],
        group: FiniteGroup,
        names: Optional[Sequence[str]] = None,
        validate: bool = True,
    ):
        self.n_vertices = int(n_vertices)
        self.facets = _normalize_facets(facets)
        self.group = group
        if set(action) != set(group.elements):
            action = complete_action(group, self.n_vertices, dict(action))
        self.action: Tuple[Tuple[int, ...], ...] = tuple(
            tuple(action[g]) for g in group.elements
        )
        self.names: Tuple[str, ...] = (
            tuple(names) if names is not None
            else tuple(str(v) for v in range(self.n_vertices))
        )
        if validate:
            self._validate()
        self._simplices: Optional[Tuple[Simplex, ...]] = None
        self._stabs: Dict[Simplex, Subgroup] = {}
        self._regular: Optional[bool] = None

    def _validate(self) -> None:
        n = self.n_vertices
        if len(self.names) != n:
            raise ValueError("names length must match vertex count")
        for f in self.facets:
            if any(v < 0 or v >= n for v in f):
                raise ValueError(f"facet {f} has a vertex out of range")
        ident = list(range(n))
        for g, perm in enumerate(self.action):
            if sorted(perm) != ident:
                raise ValueError(f"action of element {g} is not a permutation")
        if self.action[0] != tuple(range(n)):
            raise ValueError("identity must act trivially")
        for a in self.group.elements:
            for b in self.group.elements:
                ab = self.group.mul(a, b)
                pa, pb = self.action[a], self.action[b]
                if any(self.action[ab][v] != pa[pb[v]] for v in range(n)):
                    raise ValueError("action is not a group homomorphism")
        simplex_set = set(self.facets)
        for g in self.group.elements:
            for f in self.facets:
                if self.act_simplex(g, f) not in simplex_set:
                    raise ValueError(
                        f"action of element {g} does not preserve facet {f}"
                    )

    # -- basics ------------------------------------------------------------

    def simplices(self) -> Tuple[Simplex, ...]:
        """All simplices (nonempty faces of facets), sorted by dimension."""
        if self._simplices is None:
            seen: Set[Simplex] = set()
            for f in self.facets:
                m = len(f)
                for mask in range(1, 1 << m):
                    face = tuple(f[i] for i in range(m) if mask >> i & 1)
                    seen.add(face)
            self._simplices = tuple(sorted(seen, key=lambda s: (len(s), s)))
        return self._simplices

    @property
    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def euler_characteristic(self) -> int:
        return sum((-1) ** (len(s) - 1) for s in self.simplices())

    def act_vertex(self, g: int, v: int) -> int:
        return self.action[g][v]

    def act_simplex(self, g: int, s: Sequence[int]) -> Simplex:
        return tuple(sorted(self.action[g][v] for v in s))

    def orbit_of_simplex(self, s: Sequence[int]) -> SimplexSet:
        return frozenset(self.act_simplex(g, s) for g in self.group.elements)

    def vertex_stabilizer(self, v: int) -> Subgroup:
        return frozenset(g for g in self.group.elements if self.action[g][v] == v)

    def pointwise_stabilizer(self, s: Sequence[int]) -> Subgroup:
        key = tuple(sorted(s))
        if key not in self._stabs:
            self._stabs[key] = frozenset(
                g for g in self.group.elements
                if all(self.action[g][v] == v for v in key)
            )
        return self._stabs[key]

    def setwise_stabilizer(self, s: Sequence[int]) -> Subgroup:
        key = tuple(sorted(s))
        return frozenset(
            g for g in self.group.elements if self.act_simplex(g, key) == key
        )

    def is_regular(self) -> bool:
        if self._regular is None:
            self._regular = all(
                self.setwise_stabilizer(s) == self.pointwise_stabilizer(s)
                for s in self.simplices()
            )
        return self._regular

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GComplex)
            and self.n_vertices == other.n_vertices
            and self.facets == other.facets
            and self.action == other.action
            and self.group == other.group
        )

    def __hash__(self) -> int:
        return hash((self.n_vertices, self.facets, self.action, self.group.table))

    def __repr__(self) -> str:
        return (
            f"GComplex(vertices={self.n_vertices}, facets={len(self.facets)}, "
            f"|G|={self.group.order})"
        )


# -- subdivision --------------------------------------------------------------


@dataclass(frozen=True)
class Subdivision:
    """Barycentric subdivision with the simplex <-> new-vertex dictionary."""

    complex: GComplex
    simplex_to_vertex: Dict[Simplex, int]
    vertex_to_simplex: Tuple[Simplex, ...]


def barycentric_subdivision(x: GComplex) -> Subdivision:
    """One barycentric subdivision; new vertices are the old simplices."""
    old = x.simplices()
    index = {s: i for i, s in enumerate(old)}
    facets: List[Tuple[int, ...]] = []
    for f in x.facets:
        # flags of f: one chain of faces per ordering of its vertices
        for perm in permutations(f):
            chain = [tuple(sorted(perm[: k + 1])) for k in range(len(perm))]
            facets.append(tuple(sorted(index[c] for c in chain)))
    action = {
        g: tuple(index[x.act_simplex(g, s)] for s in old)
        for g in x.group.elements
    }
    names = tuple("{" + ",".join(x.names[v] for v in s) + "}" for s in old)
    sd = GComplex(len(old), facets, action, x.group, names=names, validate=False)
    return Subdivision(complex=sd, simplex_to_vertex=index, vertex_to_simplex=old)


def make_regular(x: GComplex) -> GComplex:
    """Subdivide until regular; zero, one, or two rounds, then verified.

    One round already suffices: a setwise-fixed flag of faces of strictly
    increasing dimensions must be fixed levelwise.  The second round is a
    safety net kept for the verification loop.
    """
    current = x
    for _ in range(2):
        if current.is_regular():
            return current
        current = barycentric_subdivision(current).complex
    if not current.is_regular():
        raise NotRegular("two subdivisions did not make the action regular")
    return current


# -- strata -------------------------------------------------------------------


@dataclass(frozen=True)
class Stratum:
    """Simplices whose pointwise stabilizer lies in one conjugacy class."""

    class_rep: Tuple[int, ...]
    name: str
    simplices: SimplexSet


def fixed_subcomplex(x: GComplex, h: Iterable[int]) -> SimplexSet:
    """Simplices fixed vertexwise by every element of h; a closed set."""
    hs = frozenset(h)
    return frozenset(
        s for s in x.simplices() if hs <= x.pointwise_stabilizer(s)
    )


def exact_stratum(x: GComplex, h: Iterable[int]) -> Stratum:
    """Simplices with pointwise stabilizer exactly a conjugate of h."""
    rep = class_rep_of(x.group, frozenset(h))
    name = class_names(x.group)[rep]
    members = frozenset(
        s for s in x.simplices()
        if class_rep_of(x.group, x.pointwise_stabilizer(s)) == rep
    )
    return Stratum(class_rep=tuple(sorted(rep)), name=name, simplices=members)


def stratum_closure(x: GComplex, s: Stratum) -> SimplexSet:
    return close_simplices(s.simplices)


def close_simplices(simplices: Iterable[Simplex]) -> SimplexSet:
    """Face closure of a set of simplices."""
    out: Set[Simplex] = set()
    for s in simplices:
        m = len(s)
        for mask in range(1, 1 << m):
            out.add(tuple(s[i] for i in range(m) if mask >> i & 1))
    return frozenset(out)


def present_classes(x: GComplex) -> List[Subgroup]:
    """Conjugacy-class representatives that occur as isotropy in x, ascending."""
    reps = {
        class_rep_of(x.group, x.pointwise_stabilizer(s)) for s in x.simplices()
    }
    return sorted(reps, key=lambda r: (len(r), tuple(sorted(r))))


def class_fixed_union(x: GComplex, h: Iterable[int]) -> SimplexSet:
    """Union of the fixed subcomplexes of all conjugates of h."""
    out: Set[Simplex] = set()
    rep = frozenset(h)
    seen: Set[Subgroup] = set()
    for g in x.group.elements:
        conj = frozenset(x.group.conjugate(s, g) for s in rep)
        if conj in seen:
            continue
        seen.add(conj)
        out |= fixed_subcomplex(x, conj)
    return frozenset(out)


@dataclass(frozen=True)
class Filtration:
    """Nested closed invariant levels M_1 <= ... <= M_n over isotropy classes."""

    order: Tuple[Tuple[int, ...], ...]
    names: Tuple[str, ...]
    levels: Tuple[SimplexSet, ...]


def filtration(x: GComplex) -> Filtration:
    """Cumulative unions of class fixed sets, largest isotropy first."""
    if not x.is_regular():
        raise NotRegular("filtration needs a regular action")
    reps = present_classes(x)
    order = subconjugacy_total_order(x.group, reps)
    names = class_names(x.group)
    levels: List[SimplexSet] = []
    acc: Set[Simplex] = set()
    for rep in order:
        acc |= class_fixed_union(x, rep)
        levels.append(frozenset(acc))
    return Filtration(
        order=tuple(tuple(sorted(r)) for r in order),
        names=tuple(names[r] for r in order),
        levels=tuple(levels),
    )


# -- hypothesis checks ---------------------------------------------------------


@dataclass(frozen=True)
class HypothesisReport:
    dims_used: Dict[str, int]
    dim_ok: bool
    dim_failures: Tuple[Tuple[str, int], ...]
    gap_ok: bool
    gap_failures: Tuple[Tuple[str, str, int], ...]

    @property
    def ok(self) -> bool:
        return self.dim_ok and self.gap_ok

    def as_dict(self) -> Dict:
        return {
            "dims": dict(sorted(self.dims_used.items())),
            "dim_ok": self.dim_ok,
            "dim_failures": [list(f) for f in self.dim_failures],
            "gap_ok": self.gap_ok,
            "gap_failures": [list(f) for f in self.gap_failures],
            "ok": self.ok,
        }


def check_hypotheses(x: GComplex, dims: Optional[Dict[str, int]] = None) -> HypothesisReport:
    """Check the two removability hypotheses on fixed-set dimensions.

    dims maps class names to claimed manifold dimensions; the simplicial
    dimension of the fixed subcomplex is the fallback.  Every fixed-set
    dimension must be at least 3, and each properly nested pair of
    isotropy classes must have a dimension gap of at least 2.
    """
    dims = dict(dims or {})
    reps = present_classes(x)
    names = class_names(x.group)
    present = {names[r]: r for r in reps}
    for key in dims:
        if key not in present:
            raise MissingStratum(f"no stratum with isotropy class {key!r}")
    used: Dict[str, int] = {}
    for name, rep in present.items():
        if name in dims:
            used[name] = int(dims[name])
        else:
            fixed = fixed_subcomplex(x, rep)
            used[name] = max((len(s) for s in fixed), default=0) - 1
    dim_failures = tuple(
        (name, d) for name, d in sorted(used.items()) if d < 3
    )
    gap_failures: List[Tuple[str, str, int]] = []
    for small_name, small in sorted(present.items()):
        for big_name, big in sorted(present.items()):
            if small_name == big_name:
                continue
            if len(small) < len(big) and is_subconjugate(x.group, small, big):
                gap = used[small_name] - used[big_name]
                if gap < 2:
                    gap_failures.append((small_name, big_name, gap))
    return HypothesisReport(
        dims_used=used,
        dim_ok=not dim_failures,
        dim_failures=dim_failures,
        gap_ok=not gap_failures,
        gap_failures=tuple(gap_failures),
    )


def is_treelike(x: GComplex) -> bool:
    """Normal isotropy subgroups whose down-sets are linearly ordered."""
    if not x.is_regular():
        raise NotRegular("treelike test needs a regular action")
    iso: Set[Subgroup] = {x.pointwise_stabilizer(s) for s in x.simplices()}
    g = x.group
    for h in iso:
        if any(frozenset(g.conjugate(s, a) for s in h) != h for a in g.elements):
            return False
    for h in iso:
        below = [k for k in iso if k <= h]
        for a in below:
            for b in below:
                if not (a <= b or b <= a):
                    return False
    return True


# -- quotients and subcomplexes -------------------------------------------------


@dataclass(frozen=True)
class OrbitComplex:
    """Quotient complex on vertex orbits plus the per-vertex quotient map."""

    complex: GComplex
    vertex_orbit: Tuple[int, ...]
    orbit_members: Tuple[Tuple[int, ...], ...]

    def image_of(self, s: Sequence[int]) -> Simplex:
        return tuple(sorted({self.vertex_orbit[v] for v in s}))


def orbit_complex(x: GComplex) -> OrbitComplex:
    if not x.is_regular():
        raise NotRegular(
            "orbit complex of an irregular action is not simplicial; "
            "apply make_regular first"
        )
    orbit_of: Dict[int, int] = {}
    members: List[Tuple[int, ...]] = []
    for v in range(x.n_vertices):
        if v in orbit_of:
            continue
        orbit = sorted({x.action[g][v] for g in x.group.elements})
        idx = len(members)
        members.append(tuple(orbit))
        for w in orbit:
            orbit_of[w] = idx
    vertex_orbit = tuple(orbit_of[v] for v in range(x.n_vertices))
    facets = {
        tuple(sorted({vertex_orbit[v] for v in f})) for f in x.facets
    }
    trivial = FiniteGroup.cyclic(1)
    names = tuple(
        "{" + ",".join(x.names[v] for v in orb) + "}" for orb in members
    )
    q = GComplex(
        len(members),
        facets,
        {0: tuple(range(len(members)))},
        trivial,
        names=names,
        validate=False,
    )
    return OrbitComplex(complex=q, vertex_orbit=vertex_orbit, orbit_members=tuple(members))


def induced_subcomplex(
    x: GComplex, simplices: Iterable[Simplex]
) -> Tuple[GComplex, Tuple[int, ...]]:
    """G-invariant face-closed simplex set as a complex of its own.

    Returns the complex and the tuple sending its vertices back into x.
    """
    closed = close_simplices(simplices)
    for s in closed:
        for g in x.group.elements:
            if x.act_simplex(g, s) not in closed:
                raise ValueError("simplex set is not invariant under the action")
    vertices = sorted({v for s in closed for v in s})
    back = {v: i for i, v in enumerate(vertices)}
    maximal = [
        s for s in closed
        if not any(s != t and set(s) < set(t) for t in closed)
    ]
    facets = [tuple(back[v] for v in s) for s in maximal]
    action = {
        g: tuple(back[x.action[g][v]] for v in vertices)
        for g in x.group.elements
    }
    names = tuple(x.names[v] for v in vertices)
    sub = GComplex(
        len(vertices), facets, action, x.group, names=names, validate=False
    )
    return sub, tuple(vertices)


# -- DOT export -----------------------------------------------------------------


def stratification_dot(x: GComplex) -> str:
    """Hasse diagram of the isotropy classes present, as Graphviz DOT."""
    if not x.is_regular():
        raise NotRegular("stratification export needs a regular action")
    reps = present_classes(x)
    names = class_names(x.group)
    sizes = {names[r]: len(exact_stratum(x, r).simplices) for r in reps}
    lines = ["digraph strata {"]
    ordered = sorted(reps, key=lambda r: (len(r), names[r]))
    for r in ordered:
        n = names[r]
        lines.append(f'  "{n}" [label="{n}\\n{sizes[n]} simplices"];')
    for a in ordered:
        for b in ordered:
            if len(a) >= len(b) or not is_subconjugate(x.group, a, b):
                continue
            covered = any(
                len(a) < len(c) < len(b)
                and is_subconjugate(x.group, a, c)
                and is_subconjugate(x.group, c, b)
                for c in ordered
            )
            if not covered:
                lines.append(f'  "{names[a]}" -> "{names[b]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
