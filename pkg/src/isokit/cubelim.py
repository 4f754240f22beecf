"""Cubical diagrams of finite sets and the surjectivity lemma for limits.

A cube of dimension n assigns a finite set to every subset of {0..n-1}
and a map to every inclusion, generated by the single-index covers.  The
distinguished class here is surjections: if every subcube corner map of
a map of cubes is surjective, so is the induced map on limits, and
factorize_limit exhibits the chain of surjections that proves it.

Limits are computed as compatible tuples.  Elements of a limit are
stored as full coordinate vectors over the sub-poset, determined by
their values on minimal vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from random import Random
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

Subset = FrozenSet[int]


def _skey(s: Subset) -> Tuple[int, Tuple[int, ...]]:
    return (len(s), tuple(sorted(s)))


def _subsets(indices: Sequence[int]) -> List[Subset]:
    out = [frozenset()]
    for i in indices:
        out += [s | {i} for s in out]
    return sorted(out, key=_skey)


class Cube:
    """Finite-set cube: sizes per subset, one index map per cover S -> S+{j}."""

    def __init__(
        self,
        n: int,
        sizes: Dict[Subset, int],
        covers: Dict[Tuple[Subset, int], Tuple[int, ...]],
        validate: bool = True,
    ):
        self.n = n
        self.sizes = {frozenset(k): int(v) for k, v in sizes.items()}
        self.covers = {
            (frozenset(s), int(j)): tuple(m) for (s, j), m in covers.items()
        }
        if validate:
            self._validate()

    def _validate(self) -> None:
        wanted = _subsets(range(self.n))
        if set(self.sizes) != set(wanted):
            raise ValueError(f"cube must assign a set to every subset of 0..{self.n - 1}")
        for s, size in self.sizes.items():
            if size < 0:
                raise ValueError("vertex sizes must be nonnegative")
        for s in wanted:
            for j in range(self.n):
                if j in s:
                    continue
                key = (s, j)
                if key not in self.covers:
                    raise ValueError(f"missing cover map {sorted(s)} + {j}")
                m = self.covers[key]
                if len(m) != self.sizes[s]:
                    raise ValueError(f"cover map {sorted(s)} + {j} has wrong length")
                t = s | {j}
                if any(v < 0 or v >= self.sizes[t] for v in m):
                    raise ValueError(f"cover map {sorted(s)} + {j} is out of range")
        # functoriality: both orders around every square agree
        for s in wanted:
            for i, j in combinations([k for k in range(self.n) if k not in s], 2):
                via_i = [
                    self.covers[(s | {i}, j)][v] for v in self.covers[(s, i)]
                ]
                via_j = [
                    self.covers[(s | {j}, i)][v] for v in self.covers[(s, j)]
                ]
                if via_i != via_j:
                    raise ValueError(
                        f"cube squares do not commute at {sorted(s)} + {{{i},{j}}}"
                    )

    def vertices(self) -> List[Subset]:
        return _subsets(range(self.n))

    def size(self, s: Iterable[int]) -> int:
        return self.sizes[frozenset(s)]

    def map_between(self, s: Iterable[int], t: Iterable[int]) -> Tuple[int, ...]:
        """Composite map X(S) -> X(T) along any chain of covers."""
        s, t = frozenset(s), frozenset(t)
        if not s <= t:
            raise ValueError("map_between needs nested subsets")
        current = list(range(self.sizes[s]))
        here = s
        for j in sorted(t - s):
            step = self.covers[(here, j)]
            current = [step[v] for v in current]
            here = here | {j}
        return tuple(current)


@dataclass(frozen=True)
class SetFunction:
    """Function between index sets, stored as the image list."""

    mapping: Tuple[int, ...]
    codomain_size: int

    @property
    def domain_size(self) -> int:
        return len(self.mapping)

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    @property
    def is_surjective(self) -> bool:
        return set(self.mapping) == set(range(self.codomain_size))

    @property
    def is_bijective(self) -> bool:
        return self.is_surjective and len(set(self.mapping)) == len(self.mapping)


def compose(later: SetFunction, earlier: SetFunction) -> SetFunction:
    if earlier.codomain_size != later.domain_size:
        raise ValueError("composition mismatch")
    return SetFunction(
        mapping=tuple(later.mapping[v] for v in earlier.mapping),
        codomain_size=later.codomain_size,
    )


@dataclass(frozen=True)
class LimitSet:
    """Limit of a cube over a sub-poset, as full compatible tuples."""

    vertices: Tuple[Subset, ...]
    elements: Tuple[Tuple[int, ...], ...]
    _index: Dict[Tuple[int, ...], int] = field(compare=False, repr=False, default=None)

    def __len__(self) -> int:
        return len(self.elements)

    def index_of(self, element: Tuple[int, ...]) -> int:
        return self._index[element]

    def coordinate(self, vertex: Iterable[int]) -> int:
        return self.vertices.index(frozenset(vertex))

    def restriction_map(self, smaller: "LimitSet") -> SetFunction:
        """Forget the coordinates absent from the smaller limit."""
        cols = [self.vertices.index(v) for v in smaller.vertices]
        return SetFunction(
            mapping=tuple(
                smaller.index_of(tuple(e[c] for c in cols)) for e in self.elements
            ),
            codomain_size=len(smaller),
        )


def limit(cube: Cube, poset: Optional[Iterable[Iterable[int]]] = None) -> LimitSet:
    """Compatible tuples over the given vertices (default: the whole cube).

    The vertex family must contain the union of any two members that have
    a common upper bound in it; up-closed families and intervals do.
    """
    if poset is None:
        verts = cube.vertices()
    else:
        verts = sorted({frozenset(v) for v in poset}, key=_skey)
    vset = set(verts)
    for a, b in combinations(verts, 2):
        u = a | b
        if u not in vset and any(u <= w for w in verts):
            raise ValueError("vertex family is not closed under bounded unions")
    minimals = [v for v in verts if not any(u < v for u in verts)]
    push = {
        m: {w: cube.map_between(m, w) for w in verts if m <= w} for m in minimals
    }
    owner = []  # first minimal below each vertex
    for w in verts:
        owner.append(next(i for i, m in enumerate(minimals) if m <= w))
    elements: List[Tuple[int, ...]] = []
    chosen: List[int] = []

    def extend(k: int) -> None:
        if k == len(minimals):
            elements.append(
                tuple(
                    push[minimals[owner[i]]][w][chosen[owner[i]]]
                    for i, w in enumerate(verts)
                )
            )
            return
        m = minimals[k]
        for x in range(cube.sizes[m]):
            ok = True
            for i in range(k):
                j = minimals[i]
                join = j | m
                if join in vset and push[j][join][chosen[i]] != push[m][join][x]:
                    ok = False
                    break
            if ok:
                chosen.append(x)
                extend(k + 1)
                chosen.pop()

    extend(0)
    out = tuple(elements)
    return LimitSet(
        vertices=tuple(verts),
        elements=out,
        _index={e: i for i, e in enumerate(out)},
    )


@dataclass(frozen=True)
class Corner:
    """A vertex set mapping into the limit of a sub-poset above it."""

    vertex: Subset
    function: SetFunction
    limit: LimitSet


def corner_map(x: Cube, u: Iterable[int]) -> Corner:
    """The restriction X(U) -> lim over the strict supersets of U."""
    u = frozenset(u)
    above = [t for t in x.vertices() if u < t]
    lim = limit(x, above)
    mapping = []
    for a in range(x.sizes[u]):
        element = tuple(x.map_between(u, t)[a] for t in lim.vertices)
        mapping.append(lim.index_of(element))
    return Corner(
        vertex=u,
        function=SetFunction(mapping=tuple(mapping), codomain_size=len(lim)),
        limit=lim,
    )


class CubeMap:
    """Natural transformation between cubes of the same dimension."""

    def __init__(
        self,
        source: Cube,
        target: Cube,
        components: Dict[Subset, Tuple[int, ...]],
        validate: bool = True,
    ):
        if source.n != target.n:
            raise ValueError("source and target cubes must have equal dimension")
        self.source = source
        self.target = target
        self.components = {frozenset(k): tuple(v) for k, v in components.items()}
        if validate:
            self._validate()

    def _validate(self) -> None:
        for s in self.source.vertices():
            if s not in self.components:
                raise ValueError(f"missing component at {sorted(s)}")
            comp = self.components[s]
            if len(comp) != self.source.sizes[s]:
                raise ValueError(f"component at {sorted(s)} has wrong length")
            if any(v < 0 or v >= self.target.sizes[s] for v in comp):
                raise ValueError(f"component at {sorted(s)} is out of range")
        for s in self.source.vertices():
            for j in range(self.source.n):
                if j in s:
                    continue
                lhs = [
                    self.components[s | {j}][v]
                    for v in self.source.covers[(s, j)]
                ]
                rhs = [
                    self.target.covers[(s, j)][v] for v in self.components[s]
                ]
                if lhs != rhs:
                    raise ValueError(f"naturality fails at {sorted(s)} + {j}")

    @property
    def n(self) -> int:
        return self.source.n

    def as_cube(self) -> Cube:
        """View as an (n+1)-cube: the new index n points from source to target."""
        n = self.n
        sizes: Dict[Subset, int] = {}
        covers: Dict[Tuple[Subset, int], Tuple[int, ...]] = {}
        for s in self.source.vertices():
            sizes[s] = self.source.sizes[s]
            sizes[s | {n}] = self.target.sizes[s]
            covers[(s, n)] = self.components[s]
            for j in range(n):
                if j in s:
                    continue
                covers[(s, j)] = self.source.covers[(s, j)]
                covers[(s | {n}, j)] = self.target.covers[(s, j)]
        return Cube(n + 1, sizes, covers, validate=False)


def cube_map_corner(m: CubeMap, sub: Tuple[Iterable[int], Iterable[int]]) -> Corner:
    """Corner of the subcube map spanned by U <= T: the map from X(U) to
    the limit over everything strictly above U inside T plus the target
    side of the same span.  For U = T this is just the component at U."""
    u, t = frozenset(sub[0]), frozenset(sub[1])
    n = m.n
    if not (u <= t and t <= frozenset(range(n))):
        raise ValueError("sub must be a nested pair of index subsets")
    z = m.as_cube()
    span = [v | extra for v in _subsets(sorted(t - u)) for extra in (u, u | {n})]
    above = sorted({v for v in span if u < v}, key=_skey)
    lim = limit(z, above)
    mapping = []
    for a in range(z.sizes[u]):
        element = tuple(z.map_between(u, w)[a] for w in lim.vertices)
        mapping.append(lim.index_of(element))
    return Corner(
        vertex=u,
        function=SetFunction(mapping=tuple(mapping), codomain_size=len(lim)),
        limit=lim,
    )


@dataclass(frozen=True)
class HypothesisCheck:
    ok: bool
    checked: int
    failures: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]


def check_hypothesis(m: CubeMap) -> HypothesisCheck:
    """Surjectivity of all 3^n subcube corner maps."""
    failures = []
    checked = 0
    indices = list(range(m.n))
    for t in _subsets(indices):
        for u in _subsets(sorted(t)):
            checked += 1
            if not cube_map_corner(m, (u, t)).function.is_surjective:
                failures.append((tuple(sorted(u)), tuple(sorted(t))))
    return HypothesisCheck(ok=not failures, checked=checked, failures=tuple(failures))


def limit_map(m: CubeMap) -> Tuple[SetFunction, LimitSet]:
    """The induced map lim X -> lim Y.

    The full cube has an initial vertex, so lim X is X at the empty set;
    lim Y is realized as compatible tuples over the target side.
    """
    z = m.as_cube()
    n = m.n
    yposet = [s | {n} for s in m.source.vertices()]
    lim_y = limit(z, yposet)
    empty: Subset = frozenset()
    mapping = []
    for a in range(m.source.sizes[empty]):
        element = tuple(z.map_between(empty, w)[a] for w in lim_y.vertices)
        mapping.append(lim_y.index_of(element))
    return (
        SetFunction(mapping=tuple(mapping), codomain_size=len(lim_y)),
        lim_y,
    )


@dataclass(frozen=True)
class Factorization:
    """Chain lim X = L_last -> ... -> L_0 -> lim Y through partial limits.

    Stage i adjoins the i-th source vertex, taken in order of decreasing
    distance from the initial vertex (decreasing subset size, ties by
    lexicographic order); L_i is the limit over the adjoined source
    vertices together with the whole target side.
    """

    added_order: Tuple[Subset, ...]
    stages: Tuple[LimitSet, ...]
    links: Tuple[SetFunction, ...]
    lim_y: LimitSet
    embedding: SetFunction
    composed: SetFunction
    direct: SetFunction

    @property
    def all_links_surjective(self) -> bool:
        return all(f.is_surjective for f in self.links)


def factorize_limit(m: CubeMap) -> Factorization:
    z = m.as_cube()
    n = m.n
    yposet = [s | {n} for s in m.source.vertices()]
    lim_y = limit(z, yposet)
    xorder = sorted(m.source.vertices(), key=lambda s: (-len(s), tuple(sorted(s))))
    stages: List[LimitSet] = []
    for i in range(len(xorder)):
        stages.append(limit(z, yposet + xorder[: i + 1]))
    links: List[SetFunction] = []
    for i in range(len(stages) - 1, 0, -1):
        links.append(stages[i].restriction_map(stages[i - 1]))
    links.append(stages[0].restriction_map(lim_y))
    top = stages[-1]
    empty: Subset = frozenset()
    embedding = SetFunction(
        mapping=tuple(
            top.index_of(tuple(z.map_between(empty, w)[a] for w in top.vertices))
            for a in range(m.source.sizes[empty])
        ),
        codomain_size=len(top),
    )
    composed = embedding
    for f in links:
        composed = compose(f, composed)
    direct, lim_y_again = limit_map(m)
    # same enumeration order, so the realizations agree on the nose
    assert lim_y_again.elements == lim_y.elements
    assert composed.mapping == direct.mapping
    return Factorization(
        added_order=tuple(xorder),
        stages=tuple(reversed(stages)),
        links=tuple(links),
        lim_y=lim_y,
        embedding=embedding,
        composed=composed,
        direct=direct,
    )


def complete_punctured(x: Cube) -> Cube:
    """Replace the initial vertex by the limit of the punctured cube.

    Afterwards the corner map at the empty set is a bijection.
    """
    empty: Subset = frozenset()
    punctured = [s for s in x.vertices() if s]
    lim = limit(x, punctured)
    sizes = dict(x.sizes)
    sizes[empty] = len(lim)
    covers = dict(x.covers)
    for j in range(x.n):
        col = lim.vertices.index(frozenset({j}))
        covers[(empty, j)] = tuple(e[col] for e in lim.elements)
    return Cube(x.n, sizes, covers)


# -- randomized instances --------------------------------------------------------


def random_cube_map(n: int, seed: int = 0, max_size: int = 5) -> CubeMap:
    """Random map of n-cubes satisfying the corner hypothesis.

    Built as one (n+1)-cube, top vertex first, each lower vertex a
    section of the limit of everything strictly above it, optionally
    padded with one duplicate element.  Sections make every subcube
    corner surjective; the duplicates keep the maps from being bijective
    without breaking that.
    """
    rng = Random(seed)
    for _ in range(10000):
        built = _try_random_cube(n, rng, max_size)
        if built is not None:
            return built
    raise RuntimeError("random cube generation failed to converge")


def _try_random_cube(n: int, rng: Random, max_size: int) -> Optional[CubeMap]:
    indices = list(range(n + 1))
    all_subsets = sorted(_subsets(indices), key=lambda s: (-len(s), tuple(sorted(s))))
    sizes: Dict[Subset, int] = {}
    covers: Dict[Tuple[Subset, int], Tuple[int, ...]] = {}
    top = frozenset(indices)
    sizes[top] = rng.randint(1, 2)
    stub = Cube(n + 1, {}, {}, validate=False)
    for s in all_subsets:
        if s == top:
            continue
        stub.sizes = sizes
        stub.covers = covers
        above = [t for t in all_subsets if s < t]
        lim = limit(stub, above)
        if not 0 < len(lim) <= max_size:
            return None
        elements = list(lim.elements)
        if len(elements) < max_size and rng.random() < 0.35:
            elements.append(rng.choice(elements))
        sizes[s] = len(elements)
        for j in indices:
            if j in s:
                continue
            col = lim.vertices.index(s | {j})
            covers[(s, j)] = tuple(e[col] for e in elements)
    x_sizes, y_sizes = {}, {}
    x_covers, y_covers = {}, {}
    components = {}
    for s in _subsets(list(range(n))):
        x_sizes[s] = sizes[s]
        y_sizes[s] = sizes[s | {n}]
        components[s] = covers[(s, n)]
        for j in range(n):
            if j in s:
                continue
            x_covers[(s, j)] = covers[(s, j)]
            y_covers[(s, j)] = covers[(s | {n}, j)]
    return CubeMap(
        Cube(n, x_sizes, x_covers), Cube(n, y_sizes, y_covers), components
    )
