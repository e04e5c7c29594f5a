"""Permutation lifts, girth-increasing covers, truncated universal-cover
balls, exact walk moments, and the quotient operator of a lift.

A degree-n lift assigns a permutation of {0..n-1} to every edge pair; the
reversed edge gets the inverse permutation.  Lifted vertices are named
"<base>@<copy>" and numbered base_id * n + copy, so each fiber occupies a
contiguous id block.
"""

import math
import random
import warnings
from fractions import Fraction

import numpy as np

from .errors import BudgetError, GraphParseError, LiftError, MultigraphError
from .exactnum import GR_ONE, GaussianRational
from .multigraph import Multigraph

DEFAULT_VERTEX_BUDGET = 1_000_000


def _is_permutation(perm, n: int) -> bool:
    return len(perm) == n and sorted(perm) == list(range(n))


def _inverse(perm):
    out = [0] * len(perm)
    for i, j in enumerate(perm):
        out[j] = i
    return tuple(out)


class LiftSpec:
    """Degree plus one permutation per edge pair, indexed by the pair's
    position among the graph's pair representatives."""

    __slots__ = ("degree", "perms")

    def __init__(self, degree: int, perms):
        perms = tuple(tuple(p) for p in perms)
        if degree < 1:
            raise LiftError("lift degree must be positive")
        for k, p in enumerate(perms):
            if not _is_permutation(p, degree):
                raise LiftError(f"pair {k}: not a permutation of 0..{degree - 1}")
        self.degree = degree
        self.perms = perms

    def __setattr__(self, name, value):
        if name in ("degree", "perms") and hasattr(self, "perms"):
            raise AttributeError("LiftSpec is immutable")
        object.__setattr__(self, name, value)

    def __eq__(self, other):
        if isinstance(other, LiftSpec):
            return self.degree == other.degree and self.perms == other.perms
        return NotImplemented

    def __repr__(self):
        return f"LiftSpec(degree={self.degree}, pairs={len(self.perms)})"

    def edge_perms(self, g: Multigraph) -> list[tuple[int, ...]]:
        """Per directed edge: the pair's permutation, inverted on partners."""
        if len(self.perms) != g.pair_count:
            raise LiftError(
                f"spec covers {len(self.perms)} pairs, graph has {g.pair_count}"
            )
        reps = g.pair_representatives()
        out: list = [None] * g.edge_count
        for k, e in enumerate(reps):
            out[e] = self.perms[k]
            out[g.partner(e)] = _inverse(self.perms[k])
        return out

    def to_text(self) -> str:
        lines = [f"degree {self.degree}"]
        for k, p in enumerate(self.perms):
            lines.append(f"perm {k} " + " ".join(str(j) for j in p))
        return "\n".join(lines) + "\n"


def parse_lift_spec(text: str) -> LiftSpec:
    degree = None
    perms: dict[int, tuple[int, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            if tokens[0] == "degree" and len(tokens) == 2:
                degree = int(tokens[1])
            elif tokens[0] == "perm" and len(tokens) >= 3:
                idx = int(tokens[1])
                if idx in perms:
                    raise ValueError(f"duplicate perm index {idx}")
                perms[idx] = tuple(int(t) for t in tokens[2:])
            else:
                raise ValueError(f"unknown declaration {tokens[0]!r}")
        except ValueError as exc:
            raise GraphParseError(str(exc), lineno) from None
    if degree is None:
        raise GraphParseError("missing degree declaration")
    if sorted(perms) != list(range(len(perms))):
        raise GraphParseError("perm indices must cover 0..P-1")
    try:
        return LiftSpec(degree, [perms[k] for k in range(len(perms))])
    except LiftError as exc:
        raise GraphParseError(str(exc)) from None


def format_lift_spec(spec: LiftSpec) -> str:
    return spec.to_text()


def lift(g: Multigraph, spec: LiftSpec) -> Multigraph:
    """The degree-n permutation lift: vertex (v,i) -> id v*n+i, edge copy i of
    e runs from (src(e),i) to (dst(e),perm_e(i))."""
    n = spec.degree
    eperm = spec.edge_perms(g)
    names = []
    pots = []
    for v in range(g.vertex_count):
        base = g.name(v)
        for i in range(n):
            names.append(f"{base}@{i}")
            pots.append(g.potential(v))
    src, dst, partner, weights = [], [], [], []
    for e in g.edges():
        pe, se, de, we = eperm[e], g.src(e), g.dst(e), g.weight(e)
        pt = g.partner(e)
        for i in range(n):
            src.append(se * n + i)
            dst.append(de * n + pe[i])
            partner.append(pt * n + pe[i])
            weights.append(we)
    return Multigraph(names, pots, src, dst, partner, weights)


def random_lift_spec(g: Multigraph, n: int, seed: int) -> LiftSpec:
    """Independent uniform permutations, one per edge pair."""
    rng = random.Random(seed)
    perms = []
    for _ in range(g.pair_count):
        p = list(range(n))
        rng.shuffle(p)
        perms.append(tuple(p))
    return LiftSpec(n, perms)


def random_lift(g: Multigraph, n: int, seed: int) -> Multigraph:
    return lift(g, random_lift_spec(g, n, seed))


def girth_doubling_lift(
    h: Multigraph, max_vertices: int = DEFAULT_VERTEX_BUDGET
) -> Multigraph:
    """The 2^(m+1)-lift (m edge pairs) whose k-th pair shifts copies
    cyclically by 2^(k+1); its girth strictly exceeds the input's.

    Acyclic input is returned unchanged with a warning, since it already
    equals its own universal cover.
    """
    if h.is_acyclic():
        warnings.warn(
            "girth_doubling_lift: acyclic input is its own universal cover",
            stacklevel=2,
        )
        return h
    m = h.pair_count
    n = 2 ** (m + 1)
    if n * h.vertex_count > max_vertices:
        raise BudgetError(
            f"doubling lift needs {n * h.vertex_count} vertices, "
            f"budget is {max_vertices}"
        )
    perms = [
        tuple((j + (1 << (k + 1))) % n for j in range(n)) for k in range(m)
    ]
    return lift(h, LiftSpec(n, perms))


def shortest_cycle_signatures(h: Multigraph) -> list[tuple[tuple[int, int], ...]]:
    """Signed edge-pair incidence vectors of every closed non-backtracking
    walk of minimal length, deduplicated up to rotation and reversal.

    A minimal closed walk traverses distinct pairs, so entries are +-1.
    """
    p = h.girth()
    if p == math.inf:
        return []
    reps = h.pair_representatives()
    pair_index = {}
    for k, e in enumerate(reps):
        pair_index[e] = (k, 1)
        pair_index[h.partner(e)] = (k, -1)
    out_edges = [[] for _ in range(h.vertex_count)]
    for e in h.edges():
        out_edges[h.src(e)].append(e)

    found: set[tuple[tuple[int, int], ...]] = set()

    def canonical(walk):
        sig = {}
        for e in walk:
            k, s = pair_index[e]
            sig[k] = sig.get(k, 0) + s
        items = tuple(sorted((k, s) for k, s in sig.items() if s))
        if items and items[0][1] < 0:
            items = tuple((k, -s) for k, s in items)
        return items

    def extend(walk, last):
        if len(walk) == p:
            if h.dst(last) == h.src(walk[0]):
                found.add(canonical(walk))
            return
        for e in out_edges[h.dst(last)]:
            if e != h.partner(last):
                walk.append(e)
                extend(walk, e)
                walk.pop()

    for e0 in h.edges():
        extend([e0], e0)
    return sorted(found)


def girth_increasing_lift(
    h: Multigraph,
    seed: int = 0,
    max_vertices: int = DEFAULT_VERTEX_BUDGET,
    max_modulus: int = 64,
) -> Multigraph:
    """A small cyclic-shift lift whose girth strictly exceeds the input's.

    Picks the least modulus N and shifts c_k with every shortest-cycle
    signed sum nonzero mod N; any shorter closed walk upstairs would project
    to a shorter one downstairs, and length-girth walks fail to close.
    Falls back to the power-of-two shifts when the search stalls.
    """
    if h.is_acyclic():
        raise MultigraphError("girth increase requires a cycle")
    sigs = shortest_cycle_signatures(h)
    rng = random.Random(seed)
    m = h.pair_count
    for n in range(2, max_modulus + 1):
        if n * h.vertex_count > max_vertices:
            raise BudgetError(
                f"girth-increasing lift exceeds vertex budget {max_vertices}"
            )
        for _ in range(40):
            shifts = [rng.randrange(n) for _ in range(m)]
            if all(
                sum(s * shifts[k] for k, s in sig) % n for sig in sigs
            ):
                perms = [
                    tuple((j + c) % n for j in range(n)) for c in shifts
                ]
                return lift(h, LiftSpec(n, perms))
    return girth_doubling_lift(h, max_vertices=max_vertices)


def girth_sequence(
    g: Multigraph,
    k: int,
    seed: int = 0,
    max_vertices: int = DEFAULT_VERTEX_BUDGET,
) -> list[Multigraph]:
    """k successive girth-increasing lifts of g, each covering g, with
    strictly growing girth.  Truncates with a warning if the vertex budget
    runs out."""
    if k > 0 and g.is_acyclic():
        raise MultigraphError("girth sequence requires a cycle")
    out: list[Multigraph] = []
    cur = g
    for step in range(k):
        try:
            cur = girth_increasing_lift(
                cur, seed=seed + step, max_vertices=max_vertices
            )
        except BudgetError:
            warnings.warn(
                f"girth_sequence truncated at {len(out)} of {k} lifts "
                f"(vertex budget {max_vertices})",
                stacklevel=2,
            )
            break
        out.append(cur)
    return out


def lift_with_girth_above(
    g: Multigraph,
    target: int,
    seed: int = 0,
    max_vertices: int = DEFAULT_VERTEX_BUDGET,
) -> Multigraph:
    """Smallest iterated lift found whose girth exceeds the target."""
    cur = g
    step = 0
    while cur.girth() <= target:
        cur = girth_increasing_lift(cur, seed=seed + step, max_vertices=max_vertices)
        step += 1
    return cur


# ---- truncated universal cover ----

class CoverBall:
    """Rooted tree of non-backtracking walks of bounded length.

    Node 0 is the root.  Every other node stores the directed base edge that
    its walk appended last; that edge points from the parent's base vertex to
    the node's own.
    """

    __slots__ = ("graph", "root", "radius", "base", "parent", "parent_edge", "depth", "children")

    def __init__(self, graph, root, radius, base, parent, parent_edge, depth):
        self.graph = graph
        self.root = root
        self.radius = radius
        self.base = base
        self.parent = parent
        self.parent_edge = parent_edge
        self.depth = depth
        kids = [[] for _ in base]
        for x in range(1, len(base)):
            kids[parent[x]].append(x)
        self.children = tuple(tuple(c) for c in kids)

    @property
    def node_count(self) -> int:
        return len(self.base)


def cover_ball(
    g: Multigraph, u: int, r: int, max_vertices: int = DEFAULT_VERTEX_BUDGET
) -> CoverBall:
    """Ball of radius r around the lift of u in the universal covering tree."""
    if not 0 <= u < g.vertex_count:
        raise MultigraphError(f"vertex {u} out of range")
    out_edges = [[] for _ in range(g.vertex_count)]
    for e in g.edges():
        out_edges[g.src(e)].append(e)
    base = [u]
    parent = [-1]
    parent_edge = [-1]
    depth = [0]
    frontier = [0]
    for d in range(1, r + 1):
        nxt = []
        for x in frontier:
            forbidden = -1 if x == 0 else g.partner(parent_edge[x])
            for e in out_edges[base[x]]:
                if e == forbidden:
                    continue
                if len(base) >= max_vertices:
                    raise BudgetError(
                        f"cover ball exceeds vertex budget {max_vertices}"
                    )
                nxt.append(len(base))
                base.append(g.dst(e))
                parent.append(x)
                parent_edge.append(e)
                depth.append(d)
        frontier = nxt
    return CoverBall(g, u, r, tuple(base), tuple(parent), tuple(parent_edge), tuple(depth))


def cover_moment(
    g: Multigraph,
    u: int,
    k: int,
    method: str = "auto",
    max_vertices: int = DEFAULT_VERTEX_BUDGET,
) -> Fraction:
    """Exact k-th moment <delta_u, A^k delta_u> of the universal-cover
    operator, computed on a ball of radius ceil(k/2).

    method "direct" does k-fold sparse application in Gaussian-rational
    arithmetic.  method "balanced" exploits that closed tree walks cross
    each edge equally often both ways: it replaces the weight pair toward
    and away from the root by (|a|^2, 1), staying in plain rationals, which
    also covers radical (gauge-normalized) weights.  "auto" picks "direct"
    for plain weights, "balanced" otherwise.
    """
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    if k == 0:
        return Fraction(1)
    if method == "auto":
        plain = all(g.weight(e).is_plain for e in g.edges())
        method = "direct" if plain else "balanced"
    ball = cover_ball(g, u, (k + 1) // 2, max_vertices=max_vertices)
    if method == "direct":
        return _moment_direct(ball, k)
    if method == "balanced":
        return _moment_balanced(ball, k)
    raise ValueError(f"unknown moment method {method!r}")


def _moment_direct(ball: CoverBall, k: int) -> Fraction:
    g = ball.graph
    pots = [GaussianRational(g.potential(v)) for v in range(g.vertex_count)]
    down = [None] * ball.node_count
    up = [None] * ball.node_count
    for x in range(1, ball.node_count):
        e = ball.parent_edge[x]
        down[x] = g.weight(e)
        up[x] = g.weight(g.partner(e))
    vec = [None] * ball.node_count
    vec[0] = GR_ONE
    nonzero = {0}
    for _ in range(k):
        new = [None] * ball.node_count
        touched = set()
        for x in nonzero:
            vx = vec[x]
            b = pots[ball.base[x]]
            if not b.is_zero:
                _acc(new, touched, x, b * vx)
            if x != 0:
                _acc(new, touched, ball.parent[x], up[x] * vx)
            for c in ball.children[x]:
                _acc(new, touched, c, down[c] * vx)
        vec = new
        nonzero = {x for x in touched if vec[x] is not None and not vec[x].is_zero}
    result = vec[0]
    if result is None:
        return Fraction(0)
    value = result.as_fraction()
    return value


def _acc(arr, touched, idx, val):
    if arr[idx] is None:
        arr[idx] = val
    else:
        arr[idx] = arr[idx] + val
    touched.add(idx)


def _moment_balanced(ball: CoverBall, k: int) -> Fraction:
    g = ball.graph
    m2 = [None] * ball.node_count
    for x in range(1, ball.node_count):
        m2[x] = g.weight(ball.parent_edge[x]).modulus_squared
    vec = [Fraction(0)] * ball.node_count
    vec[0] = Fraction(1)
    for _ in range(k):
        new = [Fraction(0)] * ball.node_count
        for x in range(ball.node_count):
            vx = vec[x]
            if not vx:
                continue
            b = g.potential(ball.base[x])
            if b:
                new[x] += b * vx
            if x != 0:
                new[ball.parent[x]] += vx
            for c in ball.children[x]:
                new[c] += m2[c] * vx
        vec = new
    return vec[0]


# ---- quotient operator of a lift ----

def regular_rep_operator(
    g: Multigraph, spec: LiftSpec, orthonormal: bool = False
) -> np.ndarray:
    """Matrix of the lift operator's new part on the (n-1)-dimensional
    complement of constant fibers, one block per base vertex.

    The default basis v_i = e_i - e_{n-1} gives a matrix similar (not
    unitarily) to the Hermitian restriction; orthonormal=True conjugates by
    an orthonormal complement basis instead, giving a Hermitian matrix for
    residual work.
    """
    n = spec.degree
    if n < 2:
        raise LiftError("quotient operator needs lift degree at least 2")
    eperm = spec.edge_perms(g)
    nv = g.vertex_count
    d = n - 1
    if orthonormal:
        ones = np.full((n, 1), 1.0 / math.sqrt(n))
        q, _ = np.linalg.qr(np.hstack([ones, np.eye(n)[:, :d]]))
        basis = q[:, 1:]

        def rho(perm):
            p_mat = np.zeros((n, n))
            for i, j in enumerate(perm):
                p_mat[j, i] = 1.0
            return basis.T @ p_mat @ basis

    else:

        def rho(perm):
            mat = np.zeros((d, d))
            top = perm[n - 1]
            for i in range(d):
                j = perm[i]
                if j != n - 1:
                    mat[j, i] += 1.0
                if top != n - 1:
                    mat[top, i] -= 1.0
            return mat

    out = np.zeros((d * nv, d * nv), dtype=complex)
    for v in range(nv):
        out[v * d : (v + 1) * d, v * d : (v + 1) * d] += float(
            g.potential(v)
        ) * np.eye(d)
    for e in g.edges():
        u, v = g.dst(e), g.src(e)
        out[u * d : (u + 1) * d, v * d : (v + 1) * d] += complex(
            g.weight(e)
        ) * rho(eperm[e])
    return out
