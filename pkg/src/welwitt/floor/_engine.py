"""Backtracking enumerator for marked floor diagrams.

Markings are generated slot by slot in label order, so monotonicity is free:
an element is placed no earlier than everything below it.  The search state
keeps the multiset of open edge stubs (bounded edges and sources waiting for
their upper vertex) and the per-vertex ledger of remaining outgoing weight.
Equivalence classes are deduplicated by a canonical encoding minimised over
the swaps of paired vertices.

This module is kept free of package imports so that it can also be compiled
as a C extension; `welwitt.floor.engine` picks the compiled build when one
is available.

Conventions for a class (d0, d1, d2, d3), sorted with d0 > d1 >= d2 >= d3 and
d0 - d1 - d2 >= 0:

* vertices:       d0 - d1,   bounded edges: d0 - d1 - 1,
* sources:        d0 - d2 - d3,   sinks: d1,
* theta is 1 on exactly d3 vertices,
* theta + div is 1 on exactly d0 - d1 - d2 vertices and 0 on the other d2,
  where div(v) counts incoming minus outgoing weight, infinite edges included.
"""

from itertools import product

GEN_VERSION = "fd-engine-1"


def class_budgets(klass):
    d0, d1, d2, d3 = klass
    nv = d0 - d1
    ne = nv - 1
    nsrc = d0 - d2 - d3
    nsnk = d1
    theta = (nv - d3, d3)
    rsplit = (d2, d0 - d1 - d2)
    n = nv + ne + nsrc + nsnk
    return nv, ne, nsrc, nsnk, theta, rsplit, n


def _consumption_choices(groups):
    """Sub-multisets of the open stubs, one canonical pick per key multiset.

    groups: sorted list of (key, [stub ids]).  Yields (ids tuple, weight sum).
    """
    per_group = []
    for key, ids in groups:
        w = key[2]
        options = [(tuple(ids[:k]), k * w) for k in range(len(ids) + 1)]
        per_group.append(options)
    for combo in product(*per_group):
        ids = tuple(i for opt in combo for i in opt[0])
        yield ids, sum(opt[1] for opt in combo)


class _Search:
    def __init__(self, klass, s):
        self.klass = tuple(klass)
        nv, ne, nsrc, nsnk, theta, rsplit, n = class_budgets(klass)
        if not 0 <= 2 * s <= n:
            raise ValueError(f"need 0 <= 2s <= {n}, got s = {s}")
        self.s = s
        self.r = n - 2 * s
        self.n = n
        self.v_left = nv
        self.e_left = ne
        self.src_left = nsrc
        self.snk_left = nsnk
        self.th_left = list(theta)
        self.rs_left = list(rsplit)
        # per vertex
        self.theta = []
        self.out_rem = []
        self.phi_v = []
        # bounded edges: [origin, weight, target(-1 open), phi]
        self.edges = []
        # sources: [vertex(-1 open), phi];  sinks: [vertex, phi]
        self.srcs = []
        self.snks = []
        self.results = set()

    # -- stub bookkeeping ---------------------------------------------------
    # stub ids: bounded edge index i >= 0, open source index i as -(i+1)

    def _consume(self, ids, v):
        for i in ids:
            if i < 0:
                self.srcs[-i - 1][0] = v
            else:
                self.edges[i][2] = v

    def _unconsume(self, ids):
        for i in ids:
            if i < 0:
                self.srcs[-i - 1][0] = -1
            else:
                self.edges[i][2] = -1

    def _stubs_tagged(self):
        """Open stubs grouped by interchangeability key (kind, origin, weight, label)."""
        groups = {}
        for i, (origin, w, target, ph) in enumerate(self.edges):
            if target == -1:
                groups.setdefault(("e", origin, w, ph), []).append(i)
        for i, (vertex, ph) in enumerate(self.srcs):
            if vertex == -1:
                groups.setdefault(("s", -1, 1, ph), []).append(-i - 1)
        return sorted(groups.items())

    # -- pruning ------------------------------------------------------------

    def _prune(self, placed_all):
        if self.v_left == 0:
            if self.src_left or self.e_left:
                return True
            if any(t == -1 for _, _, t, _ in self.edges):
                return True
            if any(v == -1 for v, _ in self.srcs):
                return True
            if sum(self.out_rem) != self.snk_left:
                return True
        # dead-component prune: a connected part with no open stubs and no
        # remaining outgoing capacity can never be joined to the rest
        nv = len(self.theta)
        if nv:
            parent = list(range(nv))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for origin, w, target, ph in self.edges:
                if target != -1:
                    ra, rb = find(origin), find(target)
                    if ra != rb:
                        parent[ra] = rb
            active = set()
            for v in range(nv):
                if self.out_rem[v] > 0:
                    active.add(find(v))
            for origin, w, target, ph in self.edges:
                if target == -1:
                    active.add(find(origin))
            roots = {find(v) for v in range(nv)}
            if placed_all:
                if len(roots) > 1:
                    return True
            else:
                for root in roots:
                    if root not in active:
                        return True
        return False

    # -- moves ----------------------------------------------------------------

    def _vertex_options(self, groups, extra_in=0):
        """(consumed ids, theta, rs, out_req) choices for one new vertex.

        extra_in is incoming weight attached in the same step (a paired source
        or a paired bounded edge pointing into the vertex).
        """
        out = []
        for ids, in_w in _consumption_choices(groups):
            for th in (0, 1):
                if self.th_left[th] <= 0:
                    continue
                for rs in (0, 1):
                    if self.rs_left[rs] <= 0:
                        continue
                    out_req = in_w + extra_in + th - rs
                    if out_req < 0:
                        continue
                    out.append((ids, th, rs, out_req))
        return out

    def _place_vertex(self, ids, th, rs, out_req, phi):
        v = len(self.theta)
        self._consume(ids, v)
        self.theta.append(th)
        self.out_rem.append(out_req)
        self.phi_v.append(phi)
        self.v_left -= 1
        self.th_left[th] -= 1
        self.rs_left[rs] -= 1
        return v

    def _remove_vertex(self, ids, th, rs):
        self._unconsume(ids)
        self.theta.pop()
        self.out_rem.pop()
        self.phi_v.pop()
        self.v_left += 1
        self.th_left[th] += 1
        self.rs_left[rs] += 1

    # -- search -------------------------------------------------------------

    def run(self, first_move=None):
        self._step(1, first_move)
        return sorted(self.results)

    def _single_moves(self):
        moves = []
        if self.src_left:
            moves.append(("src",))
        if self.snk_left:
            for u in range(len(self.theta)):
                if self.out_rem[u] >= 1:
                    moves.append(("snk", u))
        if self.e_left:
            for u in range(len(self.theta)):
                for w in range(1, self.out_rem[u] + 1):
                    moves.append(("edge", u, w))
        if self.v_left:
            groups = self._stubs_tagged()
            for ids, th, rs, out_req in self._vertex_options(groups):
                moves.append(("vert", ids, th, rs, out_req))
        return moves

    def _apply_single(self, move, phi):
        kind = move[0]
        if kind == "src":
            self.srcs.append([-1, phi])
            self.src_left -= 1
            return move
        if kind == "snk":
            u = move[1]
            self.snks.append([u, phi])
            self.out_rem[u] -= 1
            self.snk_left -= 1
            return move
        if kind == "edge":
            u, w = move[1], move[2]
            self.edges.append([u, w, -1, phi])
            self.out_rem[u] -= w
            self.e_left -= 1
            return move
        ids, th, rs, out_req = move[1], move[2], move[3], move[4]
        self._place_vertex(ids, th, rs, out_req, phi)
        return move

    def _undo_single(self, move):
        kind = move[0]
        if kind == "src":
            self.srcs.pop()
            self.src_left += 1
        elif kind == "snk":
            self.snks.pop()
            self.out_rem[move[1]] += 1
            self.snk_left += 1
        elif kind == "edge":
            self.edges.pop()
            self.out_rem[move[1]] += move[2]
            self.e_left += 1
        else:
            self._remove_vertex(move[1], move[2], move[3])

    def _pair_moves(self):
        moves = []
        n_th = len(self.theta)
        # both elements passive (no new vertex)
        if self.src_left >= 2:
            moves.append(("src2",))
        if self.src_left and self.snk_left:
            for u in range(n_th):
                if self.out_rem[u] >= 1:
                    moves.append(("src_snk", u))
        if self.src_left and self.e_left:
            for u in range(n_th):
                for w in range(1, self.out_rem[u] + 1):
                    moves.append(("src_edge", u, w))
        if self.snk_left >= 2:
            for u1 in range(n_th):
                for u2 in range(u1, n_th):
                    if u1 == u2:
                        if self.out_rem[u1] >= 2:
                            moves.append(("snk2", u1, u2))
                    elif self.out_rem[u1] >= 1 and self.out_rem[u2] >= 1:
                        moves.append(("snk2", u1, u2))
        if self.snk_left and self.e_left:
            for u1 in range(n_th):
                if self.out_rem[u1] < 1:
                    continue
                for u2 in range(n_th):
                    cap = self.out_rem[u2] - (1 if u1 == u2 else 0)
                    for w in range(1, cap + 1):
                        moves.append(("snk_edge", u1, u2, w))
        if self.e_left >= 2:
            seen = set()
            for u1 in range(n_th):
                for u2 in range(u1, n_th):
                    if u1 == u2:
                        cap = self.out_rem[u1]
                        for w1 in range(1, cap + 1):
                            for w2 in range(w1, cap - w1 + 1):
                                key = (u1, w1, u2, w2)
                                if key not in seen:
                                    seen.add(key)
                                    moves.append(("edge2", u1, w1, u2, w2))
                    else:
                        for w1 in range(1, self.out_rem[u1] + 1):
                            for w2 in range(1, self.out_rem[u2] + 1):
                                moves.append(("edge2", u1, w1, u2, w2))
        # one new vertex plus a partner element
        if self.v_left:
            groups = self._stubs_tagged()
            base = self._vertex_options(groups)
            if self.src_left:
                for ids, th, rs, out_req in self._vertex_options(groups, extra_in=1):
                    # the paired source is consumed by the new vertex
                    moves.append(("vert_src_in", ids, th, rs, out_req))
                for ids, th, rs, out_req in base:
                    # or left floating
                    moves.append(("vert_src_free", ids, th, rs, out_req))
            if self.e_left:
                for ids, th, rs, out_req in base:
                    for w in range(1, out_req + 1):
                        moves.append(("vert_edge_out", ids, th, rs, out_req, w))
                for u in range(n_th):
                    for w in range(1, self.out_rem[u] + 1):
                        # a fresh stub from u, consumed by the new vertex or floating
                        for ids, th, rs, out_req in self._vertex_options(groups, extra_in=w):
                            moves.append(("vert_edge_in", ids, th, rs, out_req, u, w))
                        for ids, th, rs, out_req in base:
                            moves.append(("vert_edge_free", ids, th, rs, out_req, u, w))
            if self.snk_left:
                for ids, th, rs, out_req in base:
                    if out_req >= 1:
                        moves.append(("vert_snk_at", ids, th, rs, out_req))
                for u in range(n_th):
                    if self.out_rem[u] >= 1:
                        for ids, th, rs, out_req in base:
                            moves.append(("vert_snk_free", ids, th, rs, out_req, u))
        # two new vertices
        if self.v_left >= 2:
            groups = self._stubs_tagged()
            seen = set()
            for ids1, in1 in _consumption_choices(groups):
                taken = set(ids1)
                rest = [
                    (key, [i for i in ids if i not in taken]) for key, ids in groups
                ]
                rest = [(key, ids) for key, ids in rest if ids]
                for ids2, in2 in _consumption_choices(rest):
                    for th1 in (0, 1):
                        for th2 in (0, 1):
                            need_th = [0, 0]
                            need_th[th1] += 1
                            need_th[th2] += 1
                            if need_th[0] > self.th_left[0] or need_th[1] > self.th_left[1]:
                                continue
                            for rs1 in (0, 1):
                                for rs2 in (0, 1):
                                    need_rs = [0, 0]
                                    need_rs[rs1] += 1
                                    need_rs[rs2] += 1
                                    if (
                                        need_rs[0] > self.rs_left[0]
                                        or need_rs[1] > self.rs_left[1]
                                    ):
                                        continue
                                    o1 = in1 + th1 - rs1
                                    o2 = in2 + th2 - rs2
                                    if o1 < 0 or o2 < 0:
                                        continue
                                    a = (ids1, th1, rs1, o1)
                                    b = (ids2, th2, rs2, o2)
                                    key = tuple(sorted((a, b)))
                                    if key not in seen:
                                        seen.add(key)
                                        moves.append(("vert2",) + key)
        return moves

    def _apply_pair(self, move, phi):
        kind = move[0]
        undo = [kind]
        if kind == "src2":
            self.srcs.append([-1, phi])
            self.srcs.append([-1, phi])
            self.src_left -= 2
        elif kind == "src_snk":
            u = move[1]
            self.srcs.append([-1, phi])
            self.src_left -= 1
            self.snks.append([u, phi])
            self.out_rem[u] -= 1
            self.snk_left -= 1
            undo.append(u)
        elif kind == "src_edge":
            u, w = move[1], move[2]
            self.srcs.append([-1, phi])
            self.src_left -= 1
            self.edges.append([u, w, -1, phi])
            self.out_rem[u] -= w
            self.e_left -= 1
            undo += [u, w]
        elif kind == "snk2":
            u1, u2 = move[1], move[2]
            self.snks.append([u1, phi])
            self.snks.append([u2, phi])
            self.out_rem[u1] -= 1
            self.out_rem[u2] -= 1
            self.snk_left -= 2
            undo += [u1, u2]
        elif kind == "snk_edge":
            u1, u2, w = move[1], move[2], move[3]
            self.snks.append([u1, phi])
            self.out_rem[u1] -= 1
            self.snk_left -= 1
            self.edges.append([u2, w, -1, phi])
            self.out_rem[u2] -= w
            self.e_left -= 1
            undo += [u1, u2, w]
        elif kind == "edge2":
            u1, w1, u2, w2 = move[1], move[2], move[3], move[4]
            self.edges.append([u1, w1, -1, phi])
            self.edges.append([u2, w2, -1, phi])
            self.out_rem[u1] -= w1
            self.out_rem[u2] -= w2
            self.e_left -= 2
            undo += [u1, w1, u2, w2]
        elif kind == "vert_src_in":
            ids, th, rs, out_req = move[1], move[2], move[3], move[4]
            self.srcs.append([-1, phi])
            self.src_left -= 1
            v = self._place_vertex(ids, th, rs, out_req, phi)
            self.srcs[-1][0] = v
            undo += [ids, th, rs]
        elif kind == "vert_src_free":
            ids, th, rs, out_req = move[1], move[2], move[3], move[4]
            self.srcs.append([-1, phi])
            self.src_left -= 1
            self._place_vertex(ids, th, rs, out_req, phi)
            undo += [ids, th, rs]
        elif kind == "vert_edge_out":
            ids, th, rs, out_req, w = move[1], move[2], move[3], move[4], move[5]
            v = self._place_vertex(ids, th, rs, out_req, phi)
            self.edges.append([v, w, -1, phi])
            self.out_rem[v] -= w
            self.e_left -= 1
            undo += [ids, th, rs]
        elif kind == "vert_edge_in":
            ids, th, rs, out_req, u, w = (
                move[1], move[2], move[3], move[4], move[5], move[6],
            )
            self.edges.append([u, w, -1, phi])
            self.out_rem[u] -= w
            self.e_left -= 1
            v = self._place_vertex(ids, th, rs, out_req, phi)
            self.edges[-1][2] = v
            undo += [ids, th, rs, u, w]
        elif kind == "vert_edge_free":
            ids, th, rs, out_req, u, w = (
                move[1], move[2], move[3], move[4], move[5], move[6],
            )
            self.edges.append([u, w, -1, phi])
            self.out_rem[u] -= w
            self.e_left -= 1
            self._place_vertex(ids, th, rs, out_req, phi)
            undo += [ids, th, rs, u, w]
        elif kind == "vert_snk_at":
            ids, th, rs, out_req = move[1], move[2], move[3], move[4]
            v = self._place_vertex(ids, th, rs, out_req, phi)
            self.snks.append([v, phi])
            self.out_rem[v] -= 1
            self.snk_left -= 1
            undo += [ids, th, rs]
        elif kind == "vert_snk_free":
            ids, th, rs, out_req, u = move[1], move[2], move[3], move[4], move[5]
            self.snks.append([u, phi])
            self.out_rem[u] -= 1
            self.snk_left -= 1
            self._place_vertex(ids, th, rs, out_req, phi)
            undo += [ids, th, rs, u]
        elif kind == "vert2":
            (ids1, th1, rs1, o1) = move[1]
            (ids2, th2, rs2, o2) = move[2]
            self._place_vertex(ids1, th1, rs1, o1, phi)
            self._place_vertex(ids2, th2, rs2, o2, phi)
            undo += [ids1, th1, rs1, ids2, th2, rs2]
        else:
            raise AssertionError(kind)
        return tuple(undo)

    def _undo_pair(self, undo):
        kind = undo[0]
        if kind == "src2":
            self.srcs.pop()
            self.srcs.pop()
            self.src_left += 2
        elif kind == "src_snk":
            self.snks.pop()
            self.out_rem[undo[1]] += 1
            self.snk_left += 1
            self.srcs.pop()
            self.src_left += 1
        elif kind == "src_edge":
            self.edges.pop()
            self.out_rem[undo[1]] += undo[2]
            self.e_left += 1
            self.srcs.pop()
            self.src_left += 1
        elif kind == "snk2":
            self.snks.pop()
            self.snks.pop()
            self.out_rem[undo[1]] += 1
            self.out_rem[undo[2]] += 1
            self.snk_left += 2
        elif kind == "snk_edge":
            self.edges.pop()
            self.out_rem[undo[2]] += undo[3]
            self.e_left += 1
            self.snks.pop()
            self.out_rem[undo[1]] += 1
            self.snk_left += 1
        elif kind == "edge2":
            self.edges.pop()
            self.edges.pop()
            self.out_rem[undo[1]] += undo[2]
            self.out_rem[undo[3]] += undo[4]
            self.e_left += 2
        elif kind == "vert_src_in":
            self._remove_vertex(undo[1], undo[2], undo[3])
            self.srcs.pop()
            self.src_left += 1
        elif kind == "vert_src_free":
            self._remove_vertex(undo[1], undo[2], undo[3])
            self.srcs.pop()
            self.src_left += 1
        elif kind == "vert_edge_out":
            self.edges.pop()
            self.e_left += 1
            self._remove_vertex(undo[1], undo[2], undo[3])
        elif kind == "vert_edge_in":
            self._remove_vertex(undo[1], undo[2], undo[3])
            self.edges.pop()
            self.out_rem[undo[4]] += undo[5]
            self.e_left += 1
        elif kind == "vert_edge_free":
            self._remove_vertex(undo[1], undo[2], undo[3])
            self.edges.pop()
            self.out_rem[undo[4]] += undo[5]
            self.e_left += 1
        elif kind == "vert_snk_at":
            self.snks.pop()
            self.snk_left += 1
            self._remove_vertex(undo[1], undo[2], undo[3])
        elif kind == "vert_snk_free":
            self._remove_vertex(undo[1], undo[2], undo[3])
            self.snks.pop()
            self.out_rem[undo[4]] += 1
            self.snk_left += 1
        elif kind == "vert2":
            self._remove_vertex(undo[4], undo[5], undo[6])
            self._remove_vertex(undo[1], undo[2], undo[3])
        else:
            raise AssertionError(kind)

    def _step(self, phi, first_move=None):
        total_steps = self.s + self.r
        if phi > total_steps:
            self._emit()
            return
        is_pair = phi <= self.s
        moves = self._pair_moves() if is_pair else self._single_moves()
        if first_move is not None:
            moves = [moves[first_move]] if first_move < len(moves) else []
        for move in moves:
            if is_pair:
                undo = self._apply_pair(move, phi)
            else:
                self._apply_single(move, phi)
            if not self._prune(phi == total_steps):
                self._step(phi + 1)
            if is_pair:
                self._undo_pair(undo)
            else:
                self._undo_single(move)

    def first_move_count(self):
        return len(self._pair_moves() if self.s else self._single_moves())

    def _emit(self):
        if self.v_left or self.e_left or self.src_left or self.snk_left:
            return
        if any(self.out_rem):
            return
        if any(t == -1 for _, _, t, _ in self.edges):
            return
        if any(v == -1 for v, _ in self.srcs):
            return
        key = canonical_form(
            self.theta,
            [(o, w, t) for o, w, t, _ in self.edges],
            [v for v, _ in self.srcs],
            [v for v, _ in self.snks],
            self.phi_v,
            [ph for _, _, _, ph in self.edges],
            [ph for _, ph in self.srcs],
            [ph for _, ph in self.snks],
        )
        self.results.add(key)


def canonical_form(theta, edges, srcs, snks, phi_v, phi_e, phi_s, phi_k):
    """Canonical encoding of a marked diagram, minimal over fiber swaps.

    Only swaps of two vertices sharing a marking label can change the
    encoding (all other elements are emitted as sorted multisets), so the
    minimum runs over those flips alone.
    """
    nv = len(theta)
    by_phi = {}
    for i in range(nv):
        by_phi.setdefault(phi_v[i], []).append(i)
    vpairs = [ids for ids in by_phi.values() if len(ids) == 2]
    best = None
    for flips in product((0, 1), repeat=len(vpairs)):
        tie = [0] * nv
        for ids, f in zip(vpairs, flips):
            tie[ids[0]], tie[ids[1]] = f, 1 - f
        order = sorted(range(nv), key=lambda i: (phi_v[i], tie[i]))
        newid = [0] * nv
        for k, old in enumerate(order):
            newid[old] = k
        enc = (
            tuple((phi_v[old], theta[old]) for old in order),
            tuple(sorted((phi_e[t], newid[u], newid[v], w) for t, (u, w, v) in enumerate(edges))),
            tuple(sorted((phi_s[t], newid[v]) for t, v in enumerate(srcs))),
            tuple(sorted((phi_k[t], newid[v]) for t, v in enumerate(snks))),
        )
        if best is None or enc < best:
            best = enc
    return best


def enumerate_marked_raw(klass, s, first_move=None):
    """All equivalence classes of s-marked floor diagrams, canonical encodings.

    Essential and non-essential diagrams alike; sorted; deterministic.
    """
    return _Search(klass, s).run(first_move)


def first_move_count(klass, s):
    return _Search(klass, s).first_move_count()
