"""Finite weighted multigraphs with an explicit edge-reversal pairing.

Edges are directed and come in partner pairs (e, partner(e)) with
source(e) == target(partner(e)), weight(partner(e)) == conj(weight(e)) and
partner(partner(e)) == e, partner(e) != e.  A self-loop is an ordinary pair
whose two members both start and end at the same vertex, so its diagonal
operator contribution is a + conj(a).  Potentials are real rationals.

The text format, one declaration per line, '#' starts a comment:

    vertex <name> [potential <p/q>]
    edge <u> <v> weight <x/y>[+<x/y>i]

Vertices get dense ids in declaration order.
"""

import math
from fractions import Fraction

from .errors import GraphParseError, MultigraphError
from .exactnum import (
    GaussianRational,
    format_rational,
    format_weight,
    parse_rational,
    parse_weight,
)

INFINITE_GIRTH = math.inf


class Multigraph:
    """Immutable vertex and paired-edge data with structural queries."""

    __slots__ = (
        "_names",
        "_potentials",
        "_src",
        "_dst",
        "_partner",
        "_weights",
        "_name_to_id",
        "_in_edges",
        "_adjacency",
    )

    def __init__(self, names, potentials, src, dst, partner, weights):
        names = tuple(names)
        potentials = tuple(Fraction(p) for p in potentials)
        src = tuple(src)
        dst = tuple(dst)
        partner = tuple(partner)
        weights = tuple(weights)
        object.__setattr__(self, "_names", names)
        object.__setattr__(self, "_potentials", potentials)
        object.__setattr__(self, "_src", src)
        object.__setattr__(self, "_dst", dst)
        object.__setattr__(self, "_partner", partner)
        object.__setattr__(self, "_weights", weights)
        object.__setattr__(self, "_name_to_id", {n: i for i, n in enumerate(names)})
        object.__setattr__(self, "_in_edges", None)
        object.__setattr__(self, "_adjacency", None)
        self.validate()

    def __setattr__(self, name, value):
        raise AttributeError("Multigraph is immutable")

    @classmethod
    def build(cls, vertices, edge_pairs) -> "Multigraph":
        """vertices: names or (name, potential) pairs; edge_pairs: (u, v, weight)
        triples with vertex names or ids and plain Gaussian rational weights.
        Each triple creates the directed edge u->v and its partner."""
        names, potentials = [], []
        for v in vertices:
            if isinstance(v, tuple):
                name, pot = v
            else:
                name, pot = v, 0
            names.append(str(name))
            potentials.append(Fraction(pot))
        lookup = {n: i for i, n in enumerate(names)}
        if len(lookup) != len(names):
            raise MultigraphError("duplicate vertex names")

        def vid(x):
            if isinstance(x, str):
                if x not in lookup:
                    raise MultigraphError(f"unknown vertex {x!r}")
                return lookup[x]
            return int(x)

        src, dst, partner, weights = [], [], [], []
        for u, v, w in edge_pairs:
            if not isinstance(w, GaussianRational):
                w = GaussianRational(w)
            e = len(src)
            src.extend((vid(u), vid(v)))
            dst.extend((vid(v), vid(u)))
            partner.extend((e + 1, e))
            weights.extend((w, w.conjugate()))
        return cls(names, potentials, src, dst, partner, weights)

    # ---- accessors ----

    @property
    def vertex_count(self) -> int:
        return len(self._names)

    @property
    def edge_count(self) -> int:
        """Directed edge count; always even."""
        return len(self._src)

    @property
    def pair_count(self) -> int:
        return len(self._src) // 2

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    def name(self, v: int) -> str:
        return self._names[v]

    def id_of(self, name: str) -> int:
        try:
            return self._name_to_id[name]
        except KeyError:
            raise MultigraphError(f"unknown vertex {name!r}") from None

    def potential(self, v: int) -> Fraction:
        return self._potentials[v]

    @property
    def potentials(self) -> tuple[Fraction, ...]:
        return self._potentials

    def src(self, e: int) -> int:
        return self._src[e]

    def dst(self, e: int) -> int:
        return self._dst[e]

    def partner(self, e: int) -> int:
        return self._partner[e]

    def weight(self, e: int) -> GaussianRational:
        return self._weights[e]

    def edges(self) -> range:
        return range(len(self._src))

    def pair_representatives(self) -> list[int]:
        """One directed edge per pair, in id order."""
        return [e for e in self.edges() if e < self._partner[e]]

    def in_edges(self, v: int) -> tuple[int, ...]:
        cache = self._in_edges
        if cache is None:
            cache = [[] for _ in self._names]
            for e, d in enumerate(self._dst):
                cache[d].append(e)
            cache = tuple(tuple(es) for es in cache)
            object.__setattr__(self, "_in_edges", cache)
        return cache[v]

    def adjacency(self, v: int) -> tuple[int, ...]:
        """Distinct neighboring vertices, loops excluded."""
        cache = self._adjacency
        if cache is None:
            sets = [set() for _ in self._names]
            for e in self.edges():
                a, b = self._src[e], self._dst[e]
                if a != b:
                    sets[a].add(b)
            cache = tuple(tuple(sorted(s)) for s in sets)
            object.__setattr__(self, "_adjacency", cache)
        return cache[v]

    def __eq__(self, other):
        if not isinstance(other, Multigraph):
            return NotImplemented
        return (
            self._names == other._names
            and self._potentials == other._potentials
            and self._src == other._src
            and self._dst == other._dst
            and self._partner == other._partner
            and self._weights == other._weights
        )

    def __hash__(self):
        return hash((self._names, self._potentials, self._src, self._dst))

    def __repr__(self):
        return (
            f"Multigraph(|V|={self.vertex_count}, pairs={self.pair_count})"
        )

    # ---- structural validation ----

    def validate(self) -> None:
        n = self.vertex_count
        m = len(self._src)
        if len(self._dst) != m or len(self._partner) != m or len(self._weights) != m:
            raise MultigraphError("edge array lengths disagree")
        if m % 2:
            raise MultigraphError("directed edge count must be even")
        if len(self._potentials) != n:
            raise MultigraphError("potential count must match vertex count")
        if len(self._name_to_id) != n:
            raise MultigraphError("duplicate vertex names")
        for name in self._names:
            if not name or "#" in name or any(c.isspace() for c in name):
                raise MultigraphError(f"invalid vertex name {name!r}")
        for e in range(m):
            if not (0 <= self._src[e] < n and 0 <= self._dst[e] < n):
                raise MultigraphError(f"edge {e} endpoint out of range")
            p = self._partner[e]
            if not 0 <= p < m:
                raise MultigraphError(f"edge {e} partner out of range")
            if p == e:
                raise MultigraphError(f"edge {e} is its own partner")
            if self._partner[p] != e:
                raise MultigraphError(f"partner map is not an involution at {e}")
            if self._src[e] != self._dst[p] or self._dst[e] != self._src[p]:
                raise MultigraphError(f"edge {e} and partner disagree on endpoints")
            if self._weights[p] != self._weights[e].conjugate():
                raise MultigraphError(f"edge {e} weight is not conjugate-paired")

    # ---- subgraphs and components ----

    def induced(self, vertex_set) -> "Multigraph":
        """Subgraph on the given vertices, edges with both endpoints inside.
        Vertices keep their names and relative order."""
        keep = sorted(set(int(v) for v in vertex_set))
        for v in keep:
            if not 0 <= v < self.vertex_count:
                raise MultigraphError(f"vertex {v} out of range")
        remap = {v: i for i, v in enumerate(keep)}
        names = [self._names[v] for v in keep]
        pots = [self._potentials[v] for v in keep]
        src, dst, partner, weights = [], [], [], []
        edge_remap = {}
        for e in self.edges():
            if self._src[e] in remap and self._dst[e] in remap:
                edge_remap[e] = len(src)
                src.append(remap[self._src[e]])
                dst.append(remap[self._dst[e]])
                weights.append(self._weights[e])
                partner.append(-1)
        for old, new in edge_remap.items():
            partner[new] = edge_remap[self._partner[old]]
        return Multigraph(names, pots, src, dst, partner, weights)

    def components(self, within=None) -> list[frozenset[int]]:
        """Connected components as original-id vertex sets, ordered by their
        smallest member.  `within` restricts to an induced vertex set."""
        verts = sorted(set(within)) if within is not None else list(range(self.vertex_count))
        vset = set(verts)
        seen = set()
        out = []
        for start in verts:
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            seen.add(start)
            while stack:
                x = stack.pop()
                for y in self.adjacency(x):
                    if y in vset and y not in seen:
                        seen.add(y)
                        comp.add(y)
                        stack.append(y)
            out.append(frozenset(comp))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def boundary(self, vertex_set) -> frozenset[int]:
        """Vertices outside the set adjacent to it by at least one edge."""
        inside = set(int(v) for v in vertex_set)
        out = set()
        for e in self.edges():
            a, b = self._src[e], self._dst[e]
            if a in inside and b not in inside:
                out.add(b)
        return frozenset(out)

    # ---- cycles ----

    def has_loop(self) -> bool:
        return any(self._src[e] == self._dst[e] for e in self.edges())

    def has_parallel_pair(self) -> bool:
        seen = set()
        for e in self.pair_representatives():
            a, b = self._src[e], self._dst[e]
            if a == b:
                continue
            key = (a, b) if a < b else (b, a)
            if key in seen:
                return True
            seen.add(key)
        return False

    def is_acyclic(self) -> bool:
        """No closed non-backtracking walk: no loop, no parallel pair, and the
        simple skeleton is a forest."""
        if self.has_loop() or self.has_parallel_pair():
            return False
        parent = list(range(self.vertex_count))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.pair_representatives():
            a, b = find(self._src[e]), find(self._dst[e])
            if a == b:
                return False
            parent[a] = b
        return True

    def girth(self):
        """Length of the shortest closed non-backtracking walk; a loop counts
        1, a parallel pair 2, otherwise the shortest simple-skeleton cycle.
        math.inf when acyclic."""
        if self.has_loop():
            return 1
        if self.has_parallel_pair():
            return 2
        # simple skeleton BFS girth, one search per vertex, depth-capped
        adj = [self.adjacency(v) for v in range(self.vertex_count)]
        best = INFINITE_GIRTH
        n = self.vertex_count
        for s in range(n):
            if best == 3:
                break
            depth = [-1] * n
            par = [-1] * n
            depth[s] = 0
            frontier = [s]
            while frontier:
                if best != INFINITE_GIRTH and depth[frontier[0]] + 1 >= best / 2 + 1:
                    break
                nxt = []
                for x in frontier:
                    for y in adj[x]:
                        if y == par[x]:
                            continue
                        if depth[y] == -1:
                            depth[y] = depth[x] + 1
                            par[y] = x
                            nxt.append(y)
                        else:
                            cand = depth[x] + depth[y] + 1
                            if cand < best:
                                best = cand
                frontier = nxt
        return best

    # ---- text format ----

    def to_text(self) -> str:
        lines = []
        for v in range(self.vertex_count):
            p = self._potentials[v]
            if p:
                lines.append(f"vertex {self._names[v]} potential {format_rational(p)}")
            else:
                lines.append(f"vertex {self._names[v]}")
        for e in self.pair_representatives():
            lines.append(
                f"edge {self._names[self._src[e]]} {self._names[self._dst[e]]} "
                f"weight {format_weight(self._weights[e])}"
            )
        return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Multigraph:
    """Parse the line-oriented graph format; raises GraphParseError with the
    offending line number."""
    vertices: list[tuple[str, Fraction]] = []
    seen_names = set()
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0]
        try:
            if kind == "vertex":
                if len(tokens) == 2:
                    name, pot = tokens[1], Fraction(0)
                elif len(tokens) == 4 and tokens[2] == "potential":
                    name, pot = tokens[1], parse_rational(tokens[3])
                else:
                    raise ValueError("expected: vertex <name> [potential <p/q>]")
                if name in seen_names:
                    raise ValueError(f"duplicate vertex {name!r}")
                seen_names.add(name)
                vertices.append((name, pot))
            elif kind == "edge":
                if len(tokens) != 5 or tokens[3] != "weight":
                    raise ValueError("expected: edge <u> <v> weight <w>")
                u, v, w = tokens[1], tokens[2], parse_weight(tokens[4])
                if u not in seen_names:
                    raise ValueError(f"unknown vertex {u!r}")
                if v not in seen_names:
                    raise ValueError(f"unknown vertex {v!r}")
                edges.append((u, v, w))
            else:
                raise ValueError(f"unknown declaration {kind!r}")
        except ValueError as exc:
            raise GraphParseError(str(exc), lineno) from None
    return Multigraph.build(vertices, edges)


def format_graph(g: Multigraph) -> str:
    return g.to_text()
