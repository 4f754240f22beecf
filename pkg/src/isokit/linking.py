"""Coset-complex models of chain simplices and isovariant cell structures.

For a list of subgroups (H_0, ..., H_n) the slot complex has one vertex
per pair (slot i, coset gH_i) and one facet {(i, gH_i) : i} per group
element.  With a strictly increasing chain this is the linking simplex;
with a weakly decreasing list it is the equivariant simplex whose orbit
space is a single n-simplex.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import NotEquivariantTriangulation, NotWeaklyDecreasing, ZeroChain
from .gcomplex import GComplex, OrbitComplex, Simplex, close_simplices, orbit_complex
from .group import (
    FiniteGroup,
    Subgroup,
    chain_name,
    class_names,
    class_rep_of,
    is_subgroup,
    validate_chain,
)

SlotVertex = Tuple[int, FrozenSet[int]]


def _cosets(g: FiniteGroup, h: Subgroup) -> List[FrozenSet[int]]:
    seen: Set[FrozenSet[int]] = set()
    out: List[FrozenSet[int]] = []
    for x in g.elements:
        c = frozenset(g.mul(x, s) for s in h)
        if c not in seen:
            seen.add(c)
            out.append(c)
    out.sort(key=lambda c: tuple(sorted(c)))
    return out


def slot_coset_complex(
    g: FiniteGroup, groups: Sequence[Subgroup]
) -> Tuple[GComplex, Tuple[SlotVertex, ...]]:
    """Complex with vertices (slot, coset) and one facet per group element."""
    verts: List[SlotVertex] = []
    index: Dict[SlotVertex, int] = {}
    for i, h in enumerate(groups):
        for c in _cosets(g, h):
            index[(i, c)] = len(verts)
            verts.append((i, c))
    facets = []
    for x in g.elements:
        facets.append(
            tuple(
                sorted(
                    index[(i, frozenset(g.mul(x, s) for s in h))]
                    for i, h in enumerate(groups)
                )
            )
        )
    action = {
        a: tuple(
            index[(i, frozenset(g.mul(a, c) for c in coset))] for i, coset in verts
        )
        for a in g.elements
    }
    names = tuple(
        f"{i}:{{{','.join(str(v) for v in sorted(c))}}}" for i, c in verts
    )
    cx = GComplex(len(verts), facets, action, g, names=names, validate=False)
    return cx, tuple(verts)


@dataclass(frozen=True)
class LinkingSimplex:
    """The coset complex of a strictly increasing subgroup chain."""

    group: FiniteGroup
    chain: Tuple[Subgroup, ...]
    complex: GComplex
    vertices: Tuple[SlotVertex, ...]

    @property
    def n(self) -> int:
        return len(self.chain) - 1

    def vertex_index(self, slot: int, coset: FrozenSet[int]) -> int:
        return self.vertices.index((slot, coset))

    def name(self) -> str:
        return chain_name(self.group, self.chain)


def build_linking(g: FiniteGroup, chain: Sequence[Iterable[int]]) -> LinkingSimplex:
    subs = validate_chain(g, chain)
    cx, verts = slot_coset_complex(g, subs)
    return LinkingSimplex(group=g, chain=subs, complex=cx, vertices=verts)


# -- boundary ------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryPiece:
    """Embedded image of the linking simplex of one proper subchain."""

    slots: Tuple[int, ...]
    subchain: Tuple[Subgroup, ...]
    simplices: FrozenSet[Simplex]
    model: LinkingSimplex
    vertex_embedding: Dict[int, int]  # model vertex -> ambient vertex


@dataclass(frozen=True)
class BoundaryDecomposition:
    simplices: FrozenSet[Simplex]
    pieces: Tuple[BoundaryPiece, ...]


def boundary(l: LinkingSimplex) -> BoundaryDecomposition:
    """Boundary subcomplex split into images of proper subchain simplices."""
    if l.n == 0:
        raise ZeroChain("a single-subgroup simplex has empty boundary")
    facets = set(l.complex.facets)
    bnd = frozenset(s for s in l.complex.simplices() if s not in facets)
    pieces: List[BoundaryPiece] = []
    for r in range(1, len(l.chain)):
        for slots in combinations(range(len(l.chain)), r):
            subchain = tuple(l.chain[i] for i in slots)
            model = build_linking(l.group, subchain)
            embed = {
                mv: l.vertex_index(slots[i], coset)
                for mv, (i, coset) in enumerate(model.vertices)
            }
            image = frozenset(
                tuple(sorted(embed[v] for v in s))
                for s in model.complex.simplices()
            )
            assert image <= bnd
            pieces.append(
                BoundaryPiece(
                    slots=slots,
                    subchain=subchain,
                    simplices=image,
                    model=model,
                    vertex_embedding=embed,
                )
            )
    union = frozenset().union(*(p.simplices for p in pieces))
    assert union == bnd, "subchain images must exhaust the boundary"
    return BoundaryDecomposition(simplices=bnd, pieces=tuple(pieces))


# -- fundamental domain ---------------------------------------------------------


@dataclass(frozen=True)
class FundamentalDomain:
    facet: Simplex
    translates: Dict[int, Simplex]


def fundamental_domain(l: LinkingSimplex) -> FundamentalDomain:
    """The identity-coset facet; its translates cover the whole complex."""
    translates: Dict[int, Simplex] = {}
    for g in l.group.elements:
        translates[g] = tuple(
            sorted(
                l.vertex_index(i, frozenset(l.group.mul(g, s) for s in h))
                for i, h in enumerate(l.chain)
            )
        )
    assert set(translates.values()) == set(l.complex.facets)
    return FundamentalDomain(facet=translates[0], translates=translates)


# -- weakly decreasing lists -----------------------------------------------------


def _check_weakly_decreasing(
    g: FiniteGroup, groups: Sequence[Iterable[int]]
) -> Tuple[Subgroup, ...]:
    subs = tuple(frozenset(h) for h in groups)
    if not subs:
        raise NotWeaklyDecreasing("empty subgroup list")
    for h in subs:
        if not is_subgroup(g, h):
            raise NotWeaklyDecreasing(f"not a subgroup: {sorted(h)}")
    for hi, lo in zip(subs, subs[1:]):
        if not (lo <= hi):
            raise NotWeaklyDecreasing(
                f"list not weakly decreasing: {sorted(hi)} then {sorted(lo)}"
            )
    return subs


def collapse_map(
    g: FiniteGroup, groups: Sequence[Iterable[int]]
) -> Tuple[Tuple[Subgroup, ...], Tuple[int, ...]]:
    """Strict chain of the distinct groups plus the ordered surjection onto it."""
    subs = _check_weakly_decreasing(g, groups)
    chain: List[Subgroup] = []
    p: List[int] = []
    for h in subs:
        if not chain or chain[-1] != h:
            chain.append(h)
        p.append(len(chain) - 1)
    return tuple(chain), tuple(p)


@dataclass(frozen=True)
class IllmanSimplex:
    """Equivariant simplex of a weakly decreasing subgroup list.

    Vertex w_i of the fundamental facet has stabilizer exactly groups[i];
    the orbit space is a single n-simplex even when groups repeat.
    """

    group: FiniteGroup
    groups: Tuple[Subgroup, ...]
    complex: GComplex
    vertices: Tuple[SlotVertex, ...]
    chain: Tuple[Subgroup, ...]
    surjection: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.groups) - 1

    def vertex_index(self, slot: int, coset: FrozenSet[int]) -> int:
        return self.vertices.index((slot, coset))

    def fd_vertex(self, slot: int) -> int:
        return self.vertex_index(slot, frozenset(self.groups[slot]))


def illman_complex(g: FiniteGroup, groups: Sequence[Iterable[int]]) -> IllmanSimplex:
    subs = _check_weakly_decreasing(g, groups)
    chain, p = collapse_map(g, subs)
    cx, verts = slot_coset_complex(g, subs)
    return IllmanSimplex(
        group=g, groups=subs, complex=cx, vertices=verts, chain=chain, surjection=p
    )


# -- the characteristic vertex map ------------------------------------------------


@dataclass(frozen=True)
class PhiMap:
    """Vertex assignment from (disk factors) x (chain simplex) onto an
    equivariant simplex.

    A domain vertex is a pair (l, u): l[j] picks a vertex of the j-th disk
    factor (a simplex of dimension disk_dims[j]) and u is a vertex of the
    collapsed-chain complex.  Images are vertices of the equivariant
    simplex of the original weakly decreasing list.
    """

    group: FiniteGroup
    groups: Tuple[Subgroup, ...]
    chain: Tuple[Subgroup, ...]
    surjection: Tuple[int, ...]
    disk_dims: Tuple[int, ...]
    illman: IllmanSimplex
    linking: GComplex
    linking_vertices: Tuple[SlotVertex, ...]
    assignment: Dict[Tuple[Tuple[int, ...], int], int]

    def disk_vertices(self) -> List[Tuple[int, ...]]:
        return [tuple(t) for t in product(*(range(d + 1) for d in self.disk_dims))]

    def apply(self, l: Sequence[int], u: int) -> int:
        return self.assignment[(tuple(l), u)]


def phi_vertex_map(g: FiniteGroup, groups: Sequence[Iterable[int]]) -> PhiMap:
    """The collapse assignment (l, (slot j, gK_j)) -> (min fiber(j) + l[j], same coset)."""
    subs = _check_weakly_decreasing(g, groups)
    chain, p = collapse_map(g, subs)
    fibers: List[List[int]] = [[] for _ in chain]
    for slot, j in enumerate(p):
        fibers[j].append(slot)
    disk_dims = tuple(len(f) - 1 for f in fibers)
    illman = illman_complex(g, subs)
    link_cx, link_verts = slot_coset_complex(g, chain)
    assignment: Dict[Tuple[Tuple[int, ...], int], int] = {}
    for l in product(*(range(d + 1) for d in disk_dims)):
        for u, (j, coset) in enumerate(link_verts):
            # the slot groups agree along a fiber, so the coset transfers
            assignment[(l, u)] = illman.vertex_index(fibers[j][0] + l[j], coset)
    return PhiMap(
        group=g,
        groups=subs,
        chain=chain,
        surjection=p,
        disk_dims=disk_dims,
        illman=illman,
        linking=link_cx,
        linking_vertices=link_verts,
        assignment=assignment,
    )


# -- decomposition of an equivariant triangulation ---------------------------------


@dataclass(frozen=True)
class Cell:
    """One cell D^m x (chain simplex) of an isovariant cell structure.

    phi sends domain vertices into the ambient complex; its restriction to
    the domain boundary is the attaching data and lands in the skeleton
    below the cell.
    """

    orbit_simplex: Simplex
    base_simplex: Simplex
    groups: Tuple[Tuple[int, ...], ...]
    chain: Tuple[Tuple[int, ...], ...]
    surjection: Tuple[int, ...]
    disk_dims: Tuple[int, ...]
    disk_dim: int
    phi: Tuple[Tuple[Tuple[Tuple[int, ...], int], int], ...]
    phi_map: PhiMap

    def label(self) -> str:
        names = class_names(self.phi_map.group)
        shown = "<".join(
            names[class_rep_of(self.phi_map.group, frozenset(k))]
            for k in reversed(self.chain)
        )
        return f"D^{self.disk_dim} x Delta^{{{shown}}}"

    def phi_dict(self) -> Dict[Tuple[Tuple[int, ...], int], int]:
        return dict(self.phi)


@dataclass(frozen=True)
class IsovariantCellStructure:
    complex: GComplex
    orbit: OrbitComplex
    cells: Tuple[Cell, ...]
    skeleta: Tuple[FrozenSet[Simplex], ...]

    def cells_of_label(self, label: str) -> List[Cell]:
        return [c for c in self.cells if c.label() == label]


def _fibers_over_orbit(x: GComplex, orb: OrbitComplex) -> Dict[Simplex, List[Simplex]]:
    buckets: Dict[Simplex, List[Simplex]] = {}
    for t in x.simplices():
        buckets.setdefault(orb.image_of(t), []).append(t)
    return buckets


def decompose(x: GComplex) -> IsovariantCellStructure:
    """Split a regular equivariant triangulation into chain-simplex cells.

    Every orbit of closed simplices must look like an equivariant simplex:
    full-dimensional over its orbit-space image, a single group orbit, and
    with linearly ordered vertex stabilizers.  Violations raise
    NotEquivariantTriangulation naming the offending orbit simplex.
    """
    if not x.is_regular():
        raise NotEquivariantTriangulation(
            "action is not regular, so simplex orbits are not equivariant "
            "simplices; apply make_regular first"
        )
    orb = orbit_complex(x)
    g = x.group
    buckets = _fibers_over_orbit(x, orb)
    cells: List[Cell] = []
    by_dim: Dict[int, Set[Simplex]] = {}
    for s in orb.complex.simplices():
        over = buckets.get(s, [])
        if not over:
            raise NotEquivariantTriangulation(
                f"orbit simplex {s} has no simplex above it", orbit_simplex=s
            )
        for t in over:
            if len(t) != len(s):
                raise NotEquivariantTriangulation(
                    f"simplex {t} collapses onto orbit simplex {s}; "
                    "two of its vertices share an orbit",
                    orbit_simplex=s,
                )
        base = min(over)
        if {x.act_simplex(a, base) for a in g.elements} != set(over):
            raise NotEquivariantTriangulation(
                f"simplices over orbit simplex {s} form more than one orbit",
                orbit_simplex=s,
            )
        stabs = [x.pointwise_stabilizer((v,)) for v in base]
        order = sorted(range(len(base)), key=lambda i: (-len(stabs[i]), base[i]))
        sorted_base = tuple(base[i] for i in order)
        sorted_stabs = [stabs[i] for i in order]
        for hi, lo in zip(sorted_stabs, sorted_stabs[1:]):
            if not (lo <= hi):
                raise NotEquivariantTriangulation(
                    f"vertex stabilizers over orbit simplex {s} are not nested",
                    orbit_simplex=s,
                )
        pm = phi_vertex_map(g, sorted_stabs)
        # compose the abstract assignment with the identification that the
        # slot-i vertex with coset a*H_i is the ambient vertex a * base[i]
        phi_x: Dict[Tuple[Tuple[int, ...], int], int] = {}
        for (l, u), iv in pm.assignment.items():
            slot, coset = pm.illman.vertices[iv]
            phi_x[(l, u)] = x.act_vertex(min(coset), sorted_base[slot])
        cells.append(
            Cell(
                orbit_simplex=s,
                base_simplex=sorted_base,
                groups=tuple(tuple(sorted(h)) for h in pm.groups),
                chain=tuple(tuple(sorted(k)) for k in pm.chain),
                surjection=pm.surjection,
                disk_dims=pm.disk_dims,
                disk_dim=sum(pm.disk_dims),
                phi=tuple(sorted(phi_x.items())),
                phi_map=pm,
            )
        )
        by_dim.setdefault(len(s) - 1, set()).update(over)
    skeleta: List[FrozenSet[Simplex]] = []
    acc: Set[Simplex] = set()
    for d in range(orb.complex.dim + 1):
        acc |= by_dim.get(d, set())
        skeleta.append(frozenset(acc))
    cells.sort(key=lambda c: (len(c.orbit_simplex), c.orbit_simplex))
    return IsovariantCellStructure(
        complex=x, orbit=orb, cells=tuple(cells), skeleta=tuple(skeleta)
    )


# -- validation --------------------------------------------------------------------


@dataclass(frozen=True)
class CellCheck:
    cell_index: int
    check: str
    detail: str


@dataclass(frozen=True)
class CellReport:
    ok: bool
    failures: Tuple[CellCheck, ...]
    cell_count: int
    simplex_tally: int
    simplex_count: int

    @property
    def first_failure(self) -> Optional[CellCheck]:
        return self.failures[0] if self.failures else None


def validate_cells(c: IsovariantCellStructure, x: GComplex) -> CellReport:
    """Check every cell of a decomposition against the ambient complex.

    Per cell: vertexwise isotropy preservation, vertex surjectivity onto
    the closed cell, facet correspondence with the simplex orbit, the
    collision pattern of phi, and containment of the boundary in the
    previous skeleton.  Finally the facet tally must count every simplex
    of x exactly once.
    """
    failures: List[CellCheck] = []
    g = x.group
    buckets = _fibers_over_orbit(x, c.orbit)

    def fail(i: int, check: str, detail: str) -> None:
        failures.append(CellCheck(cell_index=i, check=check, detail=detail))

    tally = 0
    for i, cell in enumerate(c.cells):
        pm = cell.phi_map
        phi = cell.phi_dict()
        dim = len(cell.orbit_simplex) - 1
        over = set(buckets.get(cell.orbit_simplex, []))
        closure = close_simplices(over)
        for (l, u), w in phi.items():
            slot, coset = pm.linking_vertices[u]
            a = min(coset)
            expected = frozenset(g.conjugate(s, a) for s in pm.chain[slot])
            if x.pointwise_stabilizer((w,)) != expected:
                fail(i, "isotropy", f"image vertex {w} of {(l, u)} has wrong stabilizer")
                break
        cell_vertices = {v for t in closure for v in t}
        if set(phi.values()) != cell_vertices:
            fail(i, "surjectivity", "phi image misses vertices of the closed cell")
        facet_images = set()
        for facet in pm.linking.facets:
            facet_images.add(
                tuple(sorted({phi[(l, u)] for u in facet for l in pm.disk_vertices()}))
            )
        if facet_images != over:
            fail(i, "facets", "translate facets do not match the simplex orbit")
        by_key: Dict[Tuple[int, int, FrozenSet[int]], int] = {}
        collision_ok = True
        for (l, u), w in sorted(phi.items()):
            slot, coset = pm.linking_vertices[u]
            key = (l[slot], slot, coset)
            if by_key.setdefault(key, w) != w:
                fail(i, "identifications", f"one coset vertex hits both {by_key[key]} and {w}")
                collision_ok = False
                break
        if collision_ok and len(set(by_key.values())) != len(by_key):
            fail(i, "identifications", "distinct coset vertices share an image")
        if dim > 0:
            lower = c.skeleta[dim - 1]
            for t in sorted(closure - over):
                if t not in lower:
                    fail(i, "attachment", f"boundary simplex {t} missing from skeleton")
                    break
        tally += len(pm.linking.facets)
    total = len(x.simplices())
    if tally != total:
        failures.append(
            CellCheck(
                cell_index=-1,
                check="tally",
                detail=f"cells account for {tally} simplices, complex has {total}",
            )
        )
    return CellReport(
        ok=not failures,
        failures=tuple(failures),
        cell_count=len(c.cells),
        simplex_tally=tally,
        simplex_count=total,
    )
