"""Point spectrum of the universal-cover operator via candidate vertex sets.

A candidate is a vertex set inducing an acyclic subgraph whose component
count exceeds its boundary size.  Whenever all component trees share an
eigenvalue lambda, that lambda is an atom of the cover's density of states
with mass at least index/|V|; maximizing the index over candidates gives the
mass exactly, and the maximizing set is the certificate witness.
"""

import functools
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetError, KernelSearchError, MultigraphError, VerificationFailure
from .exactnum import GaussianRational
from .multigraph import Multigraph
from .polynomials import AlgebraicReal, RationalPolynomial, isolate_real_roots, poly_gcd
from .spectral import forest_spectrum, tree_char_poly


@dataclass(frozen=True)
class CandidateSet:
    """Acyclic-inducing vertex set with positive index."""

    vertices: frozenset
    trees: tuple
    boundary: frozenset
    index: int


@dataclass(frozen=True)
class PointSpectrumCertificate:
    lam: AlgebraicReal
    mass: Fraction
    witness: CandidateSet
    per_tree_charpolys: tuple


@dataclass(frozen=True)
class PointSpectrumResult:
    """Certificates, or the exact finite spectrum when the graph is its own
    universal cover (acyclic input)."""

    certificates: tuple
    finite_cover: bool = False
    finite_spectrum: tuple | None = None

    @property
    def is_empty(self) -> bool:
        return not self.finite_cover and not self.certificates


def index(g: Multigraph, vertices) -> int:
    """Component count of the induced subgraph minus boundary size."""
    vs = frozenset(vertices)
    if not vs:
        return 0
    if not all(0 <= v < g.vertex_count for v in vs):
        raise MultigraphError("vertex set out of range")
    return len(g.components(within=vs)) - len(g.boundary(vs))


def candidate_sets(g: Multigraph, max_steps: int = 2_000_000) -> list[CandidateSet]:
    """All vertex sets inducing an acyclic subgraph with positive index.

    Depth-first over vertices in ascending id order, skipping loop vertices
    outright, refusing both ends of a parallel pair, maintaining incremental
    acyclicity through union-find, and cutting branches whose best reachable
    index is nonpositive.  Emission follows exploration order.

    Large sparse graphs can hold astronomically many positive-index sets
    (a biregular lift already does), so the search counts its branch
    extensions and raises BudgetError past max_steps rather than running
    open-ended.
    """
    nv = g.vertex_count
    loop_at = [False] * nv
    pair_count: dict[tuple, int] = {}
    for e in g.pair_representatives():
        u, v = g.src(e), g.dst(e)
        if u == v:
            loop_at[u] = True
        else:
            key = (min(u, v), max(u, v))
            pair_count[key] = pair_count.get(key, 0) + 1
    par: dict[int, set] = {}
    for (u, v), cnt in pair_count.items():
        if cnt > 1:
            par.setdefault(u, set()).add(v)
            par.setdefault(v, set()).add(u)
    allowed = [v for v in range(nv) if not loop_at[v]]
    # 0 undecided, 1 chosen, 2 excluded; loop vertices start excluded
    status = [2 if loop_at[v] else 0 for v in range(nv)]
    boundary: set = set()
    chosen: list[int] = []
    out: list[CandidateSet] = []
    steps = 0

    def find(parent, x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def rec(i, parent, cc):
        nonlocal steps
        steps += 1
        if steps > max_steps:
            raise BudgetError(
                f"candidate enumeration exceeded {max_steps} steps; "
                "the graph has too many positive-index acyclic sets"
            )
        if cc + (len(allowed) - i) - len(boundary) <= 0:
            return
        if i == len(allowed):
            idx = cc - len(boundary)
            if chosen and idx > 0:
                groups: dict[int, list] = {}
                for v in chosen:
                    groups.setdefault(find(parent, v), []).append(v)
                trees = tuple(
                    sorted((frozenset(t) for t in groups.values()), key=min)
                )
                out.append(
                    CandidateSet(
                        frozenset(chosen), trees, frozenset(boundary), idx
                    )
                )
            return
        v = allowed[i]
        nbrs = g.adjacency(v)
        legal = not any(status[u] == 1 for u in par.get(v, ()))
        if legal:
            roots = {find(parent, u) for u in nbrs if status[u] == 1}
            legal = len(roots) == sum(1 for u in nbrs if status[u] == 1)
        if legal:
            p2 = dict(parent)
            p2[v] = v
            for r in roots:
                p2[r] = v
            added = [u for u in nbrs if status[u] == 2 and u not in boundary]
            boundary.update(added)
            status[v] = 1
            chosen.append(v)
            rec(i + 1, p2, cc + 1 - len(roots))
            chosen.pop()
            status[v] = 0
            boundary.difference_update(added)
        status[v] = 2
        grew = any(status[u] == 1 for u in nbrs) and v not in boundary
        if grew:
            boundary.add(v)
        rec(i + 1, parent, cc)
        if grew:
            boundary.discard(v)
        status[v] = 0

    rec(0, {}, 0)
    return out


def candidate_sets_exhaustive(g: Multigraph, max_vertices: int = 22) -> list[CandidateSet]:
    """Unpruned reference enumeration over all vertex subsets."""
    nv = g.vertex_count
    if nv > max_vertices:
        raise MultigraphError(
            f"exhaustive enumeration capped at {max_vertices} vertices"
        )
    out = []
    for mask in range(1, 1 << nv):
        vs = frozenset(v for v in range(nv) if mask >> v & 1)
        if not g.induced(vs).is_acyclic():
            continue
        comps = g.components(within=vs)
        idx = len(comps) - len(g.boundary(vs))
        if idx > 0:
            out.append(
                CandidateSet(vs, tuple(sorted(comps, key=min)), g.boundary(vs), idx)
            )
    return out


def zero_potential_prune(g: Multigraph):
    """Predicate keeping only independent candidate sets.

    With zero potential, an atom at zero lives on trees that are isolated
    vertices, so the mass at zero is already attained among independent
    sets.  Valid only as a zero-eigenvalue filter.
    """
    if any(g.potential(v) != 0 for v in range(g.vertex_count)):
        raise MultigraphError("prune requires identically zero potential")

    def keep(c: CandidateSet) -> bool:
        return all(len(t) == 1 for t in c.trees)

    return keep


def point_spectrum(
    g: Multigraph,
    method: str = "pruned",
    candidate_filter=None,
    max_steps: int = 2_000_000,
) -> PointSpectrumResult:
    """Exact point spectrum of the universal-cover operator with masses.

    Per candidate, the gcd of the component-tree characteristic polynomials
    collects the shared eigenvalues; aggregation keeps the maximal index per
    eigenvalue (smallest witness wins ties) and mass = index / |V|.  Acyclic
    input is its own cover, so the full finite spectrum is returned instead.
    Raises BudgetError when pruned enumeration exceeds max_steps.
    """
    if g.vertex_count == 0:
        raise MultigraphError("empty graph")
    if not g.is_connected():
        raise MultigraphError("point spectrum requires a connected graph")
    if g.is_acyclic():
        return PointSpectrumResult(
            certificates=(),
            finite_cover=True,
            finite_spectrum=tuple(forest_spectrum(g)),
        )
    if method == "pruned":
        cands = candidate_sets(g, max_steps=max_steps)
    elif method == "exhaustive":
        cands = candidate_sets_exhaustive(g)
    else:
        raise ValueError(f"unknown method {method!r}")
    if candidate_filter is not None:
        cands = [c for c in cands if candidate_filter(c)]

    agg: list[dict] = []
    for cand in cands:
        polys = tuple(tree_char_poly(g.induced(t)) for t in cand.trees)
        common = functools.reduce(poly_gcd, polys)
        if common.degree < 1:
            continue
        for root, _ in isolate_real_roots(common):
            for entry in agg:
                if entry["lam"].same_root(root):
                    # ties go to the smaller witness: its trees are more
                    # likely to carry nowhere-zero kernel vectors, which
                    # the contraction in aux_graph needs
                    if cand.index > entry["index"] or (
                        cand.index == entry["index"]
                        and len(cand.vertices) < len(entry["witness"].vertices)
                    ):
                        entry.update(index=cand.index, witness=cand, polys=polys)
                    break
            else:
                agg.append(
                    {"lam": root, "index": cand.index, "witness": cand, "polys": polys}
                )
    agg.sort(key=functools.cmp_to_key(lambda s, t: s["lam"].compare(t["lam"])))
    certs = tuple(
        PointSpectrumCertificate(
            lam=entry["lam"],
            mass=Fraction(entry["index"], g.vertex_count),
            witness=entry["witness"],
            per_tree_charpolys=entry["polys"],
        )
        for entry in agg
    )
    return PointSpectrumResult(certificates=certs)


@dataclass(frozen=True)
class AuxGraph:
    """Bipartite contraction of a certificate witness: one vertex per tree,
    boundary kept, zero potential, edges reweighted by the tree kernel
    vector at their tree endpoint."""

    graph: Multigraph
    tree_names: tuple
    boundary_names: tuple
    exact: bool


def aux_graph(g: Multigraph, cert: PointSpectrumCertificate) -> AuxGraph:
    from .eigvec import tree_kernel

    witness = cert.witness
    for vs, stored in zip(witness.trees, cert.per_tree_charpolys):
        if tree_char_poly(g.induced(vs)) != stored:
            raise VerificationFailure("certificate does not match this graph")
    boundary = sorted(witness.boundary)
    boundary_names = tuple(g.name(v) for v in boundary)
    used = set(boundary_names)
    tree_names = []
    for i in range(len(witness.trees)):
        name = f"tree{i}"
        while name in used:
            name = "_" + name
        used.add(name)
        tree_names.append(name)

    tree_of = {}
    local_of = {}
    zetas = []
    exact = True
    for i, vs in enumerate(witness.trees):
        keep = sorted(vs)
        for j, v in enumerate(keep):
            tree_of[v] = i
            local_of[v] = j
        basis = tree_kernel(g.induced(vs), cert.lam)
        vec = basis.nowhere_zero
        if vec is None:
            raise KernelSearchError(
                f"tree {i}: no nowhere-zero kernel vector found"
            )
        if basis.exact_vectors is not None:
            norm2 = Fraction(0)
            for x in vec:
                norm2 += x.modulus_squared
            scale = GaussianRational(1, 0, Fraction(1, norm2))
            zetas.append([x * scale for x in vec])
        else:
            exact = False
            norm = sum(abs(complex(x)) ** 2 for x in vec) ** 0.5
            zetas.append(
                [
                    GaussianRational(
                        Fraction(complex(x).real / norm),
                        Fraction(complex(x).imag / norm),
                    )
                    for x in vec
                ]
            )

    pairs = []
    for e in g.edges():
        s, d = g.src(e), g.dst(e)
        if s in tree_of and d not in tree_of:
            i = tree_of[s]
            w = g.weight(e) * zetas[i][local_of[s]]
            pairs.append((tree_names[i], g.name(d), w))
    vertices = list(tree_names) + list(boundary_names)
    return AuxGraph(
        graph=Multigraph.build(vertices, pairs),
        tree_names=tuple(tree_names),
        boundary_names=boundary_names,
        exact=exact,
    )
