"""Marked floor diagrams: validation, twin-tree partition, quadratic multiplicity."""

from __future__ import annotations

from dataclasses import dataclass

from ..tring import TPoly
from ._engine import class_budgets


class InternalConsistencyError(AssertionError):
    """An internal identity failed (e.g. a multiplicity halving); abort."""


def normalize_class(dbar) -> tuple[int, int, int, int]:
    """Sort the blown-up multiplicities and check the floor-diagram domain."""
    dbar = tuple(int(v) for v in dbar)
    if len(dbar) != 4:
        raise ValueError("a class has four entries (d0, d1, d2, d3)")
    if any(v < 0 for v in dbar):
        raise ValueError(f"class entries must be nonnegative: {dbar}")
    d0 = dbar[0]
    d1, d2, d3 = sorted(dbar[1:], reverse=True)
    if d0 <= d1 or d0 - d1 - d2 < 0:
        raise ValueError(
            f"class {dbar} outside floor-diagram domain "
            f"(need d0 > d1 and d0 - d1 - d2 >= 0 after sorting)"
        )
    return (d0, d1, d2, d3)


@dataclass(frozen=True)
class MarkedDiagram:
    """A canonical-form s-marked floor diagram.

    vertices: tuple of (label, theta); bounded edges: (label, origin, target,
    weight); sources and sinks: (label, vertex).  Vertex ids refer to
    positions in the vertex tuple.
    """

    klass: tuple[int, int, int, int]
    s: int
    vertices: tuple[tuple[int, int], ...]
    edges: tuple[tuple[int, int, int, int], ...]
    sources: tuple[tuple[int, int], ...]
    sinks: tuple[tuple[int, int], ...]

    @classmethod
    def from_encoding(cls, klass, s, enc) -> MarkedDiagram:
        ve, ed, src, snk = enc
        return cls(tuple(klass), s, tuple(ve), tuple(ed), tuple(src), tuple(snk))

    @property
    def num_elements(self) -> int:
        return len(self.vertices) + len(self.edges) + len(self.sources) + len(self.sinks)

    def elements(self):
        """All elements as ('v'|'e'|'src'|'snk', index) with their labels."""
        out = []
        for i, (ph, _) in enumerate(self.vertices):
            out.append((("v", i), ph))
        for i, (ph, _, _, _) in enumerate(self.edges):
            out.append((("e", i), ph))
        for i, (ph, _) in enumerate(self.sources):
            out.append((("src", i), ph))
        for i, (ph, _) in enumerate(self.sinks):
            out.append((("snk", i), ph))
        return out

    def fibers(self) -> dict[int, list]:
        out: dict[int, list] = {}
        for elem, ph in self.elements():
            out.setdefault(ph, []).append(elem)
        return out

    def divergence(self, v: int) -> int:
        d = 0
        for _, u, t, w in self.edges:
            if t == v:
                d += w
            if u == v:
                d -= w
        d += sum(1 for _, u in self.sources if u == v)
        d -= sum(1 for _, u in self.sinks if u == v)
        return d

    def validate(self) -> None:
        """Assert every defining condition of the diagram and its marking."""
        d0, d1, d2, d3 = self.klass
        nv, ne, nsrc, nsnk, theta_counts, rs_counts, n = class_budgets(self.klass)
        if len(self.vertices) != nv:
            raise InternalConsistencyError(f"expected {nv} vertices")
        if len(self.edges) != ne:
            raise InternalConsistencyError(f"expected {ne} bounded edges")
        if len(self.sources) != nsrc or len(self.sinks) != nsnk:
            raise InternalConsistencyError("wrong number of infinite edges")
        thetas = [th for _, th in self.vertices]
        if (thetas.count(0), thetas.count(1)) != theta_counts:
            raise InternalConsistencyError("theta counts violated")
        rs = [th + self.divergence(v) for v, (_, th) in enumerate(self.vertices)]
        if any(x not in (0, 1) for x in rs):
            raise InternalConsistencyError("theta + div outside {0, 1}")
        if (rs.count(0), rs.count(1)) != rs_counts:
            raise InternalConsistencyError("theta + div counts violated")
        # connected tree on the vertex set
        if nv:
            seen = {0}
            frontier = [0]
            adj: dict[int, list[int]] = {v: [] for v in range(nv)}
            for _, u, t, w in self.edges:
                adj[u].append(t)
                adj[t].append(u)
            while frontier:
                x = frontier.pop()
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        frontier.append(y)
            if len(seen) != nv:
                raise InternalConsistencyError("graph is not connected")
        if any(w > d0 for _, _, _, w in self.edges):
            raise InternalConsistencyError("edge weight exceeds d0")
        # marking: fiber sizes and monotonicity
        fibers = self.fibers()
        r = n - 2 * self.s
        if sorted(fibers) != list(range(1, self.s + r + 1)):
            raise InternalConsistencyError("marking labels are not 1..s+r")
        for ph, elems in fibers.items():
            want = 2 if ph <= self.s else 1
            if len(elems) != want:
                raise InternalConsistencyError(f"fiber {ph} has size {len(elems)}")
        below = self._below_map()
        label = dict(self.elements())
        for elem, elems_below in below.items():
            for b in elems_below:
                if label[b] > label[elem]:
                    raise InternalConsistencyError("marking is not monotone")

    def _below_map(self) -> dict:
        """elem -> set of elements strictly below it in the diagram order."""
        children: dict = {}

        def at_vertex(v):
            return ("v", v)

        preds: dict = {e: set() for e, _ in self.elements()}
        for i, (_, u, t, w) in enumerate(self.edges):
            preds[("e", i)].add(at_vertex(u))
            preds[at_vertex(t)].add(("e", i))
        for i, (_, u) in enumerate(self.sources):
            preds[at_vertex(u)].add(("src", i))
        for i, (_, u) in enumerate(self.sinks):
            preds[("snk", i)].add(at_vertex(u))
        out: dict = {}

        def walk(e):
            if e in out:
                return out[e]
            acc = set()
            for p in preds[e]:
                acc.add(p)
                acc |= walk(p)
            out[e] = acc
            return acc

        for e in preds:
            walk(e)
        return out

    def comparable(self, a, b) -> bool:
        below = self._below_map()
        return a in below[b] or b in below[a]

    # -- twin trees ---------------------------------------------------------

    def _incidence(self):
        """Adjacency over all elements, for branch computations."""
        adj: dict = {e: [] for e, _ in self.elements()}

        def link(a, b):
            adj[a].append(b)
            adj[b].append(a)

        for i, (_, u, t, w) in enumerate(self.edges):
            link(("e", i), ("v", u))
            link(("e", i), ("v", t))
        for i, (_, u) in enumerate(self.sources):
            link(("src", i), ("v", u))
        for i, (_, u) in enumerate(self.sinks):
            link(("snk", i), ("v", u))
        return adj

    def _branch(self, anchor, start) -> set:
        """Connected elements containing start after removing the anchor vertex."""
        adj = self._incidence()
        seen = {start}
        frontier = [start]
        while frontier:
            x = frontier.pop()
            for y in adj[x]:
                if y == anchor or y in seen:
                    continue
                seen.add(y)
                frontier.append(y)
        return seen

    def partition_marking(self) -> "MarkingPartition":
        """Split the pair labels into vertex-edge pairs, twins, and the rest."""
        fibers = self.fibers()
        label = dict(self.elements())
        vpairs: list[int] = []
        twins: list[TwinTree] = []
        claimed: set[int] = set()
        # comparable {vertex, edge} pairs
        for ph in range(1, self.s + 1):
            a, b = fibers[ph]
            if {a[0], b[0]} == {"v", "e"} or {a[0], b[0]} == {"v", "src"} or {a[0], b[0]} == {"v", "snk"}:
                if self.comparable(a, b):
                    vpairs.append(ph)
                    continue
            if a[0] == b[0] and self.comparable(a, b):
                raise InternalConsistencyError("comparable same-type pair")
        # twin roots
        for ph in range(1, self.s + 1):
            if ph in vpairs or ph in claimed:
                continue
            a, b = fibers[ph]
            if a[0] != b[0]:
                continue
            tree = self._try_twin(ph, a, b, label)
            if tree is not None:
                twins.append(tree)
                claimed |= tree.labels
        for t in twins:
            for other in twins:
                if t is not other and t.labels & other.labels:
                    raise InternalConsistencyError("twin trees overlap")
        ccol = [
            ph
            for ph in range(1, self.s + 1)
            if ph not in vpairs and ph not in claimed
        ]
        return MarkingPartition(
            diagram=self,
            vertex_edge=tuple(sorted(vpairs)),
            free=tuple(sorted(ccol)),
            twins=tuple(twins),
        )

    def _try_twin(self, ph, a, b, label):
        kind = a[0]
        if kind == "src":
            va, vb = self.sources[a[1]][1], self.sources[b[1]][1]
            if va == vb:
                return TwinTree(frozenset({ph}), ph, 1, 0, 1, ())
            return None
        if kind == "snk":
            va, vb = self.sinks[a[1]][1], self.sinks[b[1]][1]
            if va == vb:
                return TwinTree(frozenset({ph}), ph, 1, 1, 0, ())
            return None
        if kind != "e":
            return None
        _, ua, ta, wa = self.edges[a[1]]
        _, ub, tb, wb = self.edges[b[1]]
        if wa != wb:
            return None
        if ua == ub:
            anchor = ("v", ua)
        elif ta == tb:
            anchor = ("v", ta)
        else:
            return None
        branch_a = self._branch(anchor, a)
        branch_b = self._branch(anchor, b)
        if branch_a & branch_b:
            return None
        # the only candidate isomorphism maps each element to its fiber mate
        fibers = self.fibers()
        mate = {}
        for x in branch_a:
            pair = fibers[label[x]]
            if len(pair) != 2:
                return None
            other = pair[0] if pair[1] == x else pair[1]
            if other not in branch_b:
                return None
            mate[x] = other
        if len(branch_a) != len(branch_b):
            return None

        def vmate(v):
            m = mate.get(("v", v))
            if m is None:
                return v if ("v", v) == anchor else None
            return m[1]

        for x in branch_a:
            y = mate[x]
            if x[0] != y[0]:
                return None
            if x[0] == "v":
                if self.vertices[x[1]][1] != self.vertices[y[1]][1]:
                    return None
            elif x[0] == "e":
                _, ux, tx, wx = self.edges[x[1]]
                _, uy, ty, wy = self.edges[y[1]]
                if wx != wy or vmate(ux) != uy or vmate(tx) != ty:
                    return None
            else:
                vx = (self.sources if x[0] == "src" else self.sinks)[x[1]][1]
                vy = (self.sources if y[0] == "src" else self.sinks)[y[1]][1]
                if vmate(vx) != vy:
                    return None
        labels = frozenset(label[x] for x in branch_a)
        if label[anchor] in labels:
            return None
        n_src = sum(1 for x in branch_a if x[0] == "src")
        n_snk = sum(1 for x in branch_a if x[0] == "snk")
        edge_fibers = tuple(
            sorted(
                (label[x], self.edges[x[1]][3]) for x in branch_a if x[0] == "e"
            )
        )
        return TwinTree(labels, ph, wa, n_snk, n_src, edge_fibers)

    def is_essential(self) -> bool:
        """Even bounded-edge weights may only occur inside twin trees."""
        twin_labels: set[int] = set()
        for t in self.partition_marking().twins:
            twin_labels |= t.labels
        for ph, _, _, w in self.edges:
            if w % 2 == 0 and ph not in twin_labels:
                return False
        return True

    def multiplicity(self) -> TPoly:
        """Quadratic multiplicity in Z[t_1..t_s]/(t^2 = 2t); marking must be essential."""
        part = self.partition_marking()
        twin_labels: set[int] = set()
        for t in part.twins:
            twin_labels |= t.labels
        mu = TPoly.one(self.s)
        for j in part.free:
            mu = mu * TPoly.var(j, self.s)
        for ph, _, _, w in self.edges:
            if ph > self.s:
                continue
            if w % 2 == 0 and ph not in twin_labels:
                raise ValueError("multiplicity of a non-essential marking")
            mu = mu * TPoly.bracket(w, ph, self.s)
        for t in part.twins:
            mu = mu * t.tree_factor(self.s)
        return mu

    def to_json(self):
        """Wire format: structure columns plus one phi list over all elements
        in order (vertices, bounded edges, sources, sinks)."""
        phi = (
            [ph for ph, _ in self.vertices]
            + [ph for ph, _, _, _ in self.edges]
            + [ph for ph, _ in self.sources]
            + [ph for ph, _ in self.sinks]
        )
        return {
            "ve": [th for _, th in self.vertices],
            "ed": [[u, v, w] for _, u, v, w in self.edges],
            "src": [v for _, v in self.sources],
            "snk": [v for _, v in self.sinks],
            "phi": phi,
        }

    @classmethod
    def from_json(cls, klass, s, data) -> MarkedDiagram:
        phi = list(data["phi"])
        nv, ne = len(data["ve"]), len(data["ed"])
        nsrc = len(data["src"])
        phi_v = phi[:nv]
        phi_e = phi[nv : nv + ne]
        phi_src = phi[nv + ne : nv + ne + nsrc]
        phi_snk = phi[nv + ne + nsrc :]
        return cls(
            tuple(klass),
            s,
            tuple(zip(phi_v, data["ve"])),
            tuple((ph, u, v, w) for ph, (u, v, w) in zip(phi_e, data["ed"])),
            tuple(zip(phi_src, data["src"])),
            tuple(zip(phi_snk, data["snk"])),
        )

    def encoding(self):
        return (self.vertices, self.edges, self.sources, self.sinks)


@dataclass(frozen=True)
class TwinTree:
    """A minimal marking automorphism: two swapped isomorphic subtrees.

    omega_infinity = root weight + twin sinks + twin sources; a root made of
    two infinite edges counts on both terms.
    """

    labels: frozenset[int]
    root: int
    root_weight: int
    n_sinks: int
    n_sources: int
    edge_fibers: tuple[tuple[int, int], ...]  # (label, weight) of twin bounded edges

    @property
    def omega_infinity(self) -> int:
        return self.root_weight + self.n_sinks + self.n_sources

    def tree_factor(self, s: int) -> TPoly:
        """(t_T + (-1)^omega u_T) / 2, the halving being exact."""
        t = TPoly.one(s)
        u = TPoly.one(s)
        for j in sorted(self.labels):
            t = t * TPoly.var(j, s)
            u = u * TPoly.uvar(j, s)
        sign = -1 if self.omega_infinity % 2 else 1
        return (t + u.scale(sign)).halve()


@dataclass(frozen=True)
class MarkingPartition:
    diagram: MarkedDiagram
    vertex_edge: tuple[int, ...]  # labels paired as {vertex, adjacent edge}
    free: tuple[int, ...]  # incomparable pairs outside any twin (the t_C factor)
    twins: tuple[TwinTree, ...]

    @property
    def automorphism_order(self) -> int:
        return 2 ** len(self.twins)
