"""Empirical verification lab.

Density-of-states histograms from finite lifts, atom mass estimation through
eigenvector fiber weights, exact moment cross-checks on girth-diverging
lifts, the certified minimum-gap radius controlling parameter perturbations,
and the random perturbation probe.
"""

import functools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .aomoto import PointSpectrumCertificate, candidate_sets, point_spectrum
from .covers import cover_moment, lift_with_girth_above
from .errors import BudgetError, MultigraphError, VerificationFailure
from .exactnum import GR_ONE, GR_ZERO, GaussianRational
from .multigraph import Multigraph
from .polynomials import isolate_real_roots
from .spectral import eig_hermitian, gauge_normalize, jacobi_matrix, tree_char_poly

ATOM_WINDOW = 1e-6


def fiber_partition(g: Multigraph, h: Multigraph) -> list[list[int]]:
    """Vertices of the lift h grouped over each base vertex of g.

    Lifted names carry "@copy" suffixes; the longest prefix naming a base
    vertex wins, so iterated lifts resolve too.
    """
    base_names = set(g.names)
    fibers: list[list[int]] = [[] for _ in range(g.vertex_count)]
    for x in range(h.vertex_count):
        name = h.name(x)
        while name not in base_names:
            if "@" not in name:
                raise MultigraphError(
                    f"lift vertex {h.name(x)!r} has no base vertex"
                )
            name = name.rsplit("@", 1)[0]
        fibers[g.id_of(name)].append(x)
    sizes = {len(f) for f in fibers}
    if len(sizes) != 1:
        raise MultigraphError("fibers have unequal sizes; not a lift of g")
    return fibers


@dataclass(frozen=True)
class SpectralMeasureEstimate:
    bin_edges: tuple
    masses: tuple
    atoms: tuple
    dimension: int
    girth: float
    lift_degree: int | None = None


def empirical_measure(
    h: Multigraph,
    bins: int = 101,
    max_dimension: int = 6000,
    atom_window: float = ATOM_WINDOW,
    min_cluster: int | None = None,
    lift_degree: int | None = None,
) -> SpectralMeasureEstimate:
    """Eigenvalue histogram of the graph operator with atom detection.

    An atom is a run of eigenvalues with consecutive gaps below the window
    and at least max(3, 0.5% of dimension) members.
    """
    dim = h.vertex_count
    if dim > max_dimension:
        raise BudgetError(f"dimension {dim} exceeds budget {max_dimension}")
    w, _ = eig_hermitian(jacobi_matrix(h).as_numpy())
    counts, edges = np.histogram(w, bins=bins)
    if min_cluster is None:
        min_cluster = max(3, math.ceil(0.005 * dim))
    atoms = []
    start = 0
    for i in range(1, dim + 1):
        if i == dim or w[i] - w[i - 1] > atom_window:
            if i - start >= min_cluster:
                atoms.append((float(np.mean(w[start:i])), (i - start) / dim))
            start = i
    return SpectralMeasureEstimate(
        bin_edges=tuple(float(x) for x in edges),
        masses=tuple(float(c) / dim for c in counts),
        atoms=tuple(atoms),
        dimension=dim,
        girth=h.girth(),
        lift_degree=lift_degree,
    )


def atom_mass_estimate(
    g: Multigraph,
    lam: float,
    lifted: Multigraph,
    window: float = ATOM_WINDOW,
) -> tuple[float, tuple]:
    """Estimated atom mass of the cover operator at lam, globally and per
    base vertex, from a finite lift's eigenvectors.

    Per base vertex: the squared eigenvector weight near lam, summed over
    the eigenvalue window and averaged over the fiber.  Global: the vertex
    average, matching the density of states.
    """
    fibers = fiber_partition(g, lifted)
    w, v = eig_hermitian(jacobi_matrix(lifted).as_numpy())
    sel = np.abs(w - lam) <= window
    per = []
    if not np.any(sel):
        per = [0.0] * g.vertex_count
    else:
        weights = np.abs(v[:, sel]) ** 2
        for f in fibers:
            per.append(float(weights[f, :].sum()) / len(f))
    return sum(per) / g.vertex_count, tuple(per)


@dataclass(frozen=True)
class AomotoSetEstimate:
    """Numerically estimated atom support; always approximate."""

    vertices: frozenset
    per_vertex: tuple
    threshold: float
    inconclusive: bool
    approximate: bool = True


def aomoto_set_estimate(
    g: Multigraph,
    cert: PointSpectrumCertificate | None,
    lifted: Multigraph,
    window: float = ATOM_WINDOW,
    ratio: float = 10.0,
) -> AomotoSetEstimate:
    """Base vertices whose estimated per-vertex mass clears ten times the
    noise floor; flagged inconclusive when the mass profile has no clean
    gap."""
    if cert is None:
        return AomotoSetEstimate(frozenset(), (), 0.0, False)
    _, per = atom_mass_estimate(g, cert.lam.float_hint, lifted, window)
    mx = max(per, default=0.0)
    if mx < 1e-9:
        return AomotoSetEstimate(frozenset(), per, 0.0, False)
    vals = sorted(per, reverse=True)
    best_i, best_ratio = 0, 0.0
    for i in range(len(vals) - 1):
        r = vals[i] / vals[i + 1] if vals[i + 1] > 0 else math.inf
        if r > best_ratio:
            best_i, best_ratio = i, r
    floor = vals[best_i + 1] if best_i + 1 < len(vals) else 0.0
    threshold = max(ratio * floor, 1e-9)
    members = frozenset(v for v in range(g.vertex_count) if per[v] > threshold)
    return AomotoSetEstimate(
        vertices=members,
        per_vertex=per,
        threshold=threshold,
        inconclusive=bool(best_ratio < ratio),
    )


def graph_moment(h: Multigraph, u: int, k: int) -> Fraction:
    """Exact <delta_u, A^k delta_u> on a finite graph with plain weights.

    Restricted to the distance-floor(k/2) ball around u, outside which no
    length-k closed walk can travel.
    """
    if k == 0:
        return Fraction(1)
    if not all(h.weight(e).is_plain for e in h.edges()):
        raise MultigraphError("exact graph moments require plain weights")
    allowed = {u}
    frontier = [u]
    for _ in range(k // 2):
        nxt = []
        for v in frontier:
            for x in h.adjacency(v):
                if x not in allowed:
                    allowed.add(x)
                    nxt.append(x)
        frontier = nxt
    outs: dict[int, list] = {v: [] for v in allowed}
    for e in h.edges():
        if h.src(e) in allowed and h.dst(e) in allowed:
            outs[h.src(e)].append(e)
    vec = {u: GR_ONE}
    for _ in range(k):
        new: dict[int, GaussianRational] = {}
        for v, x in vec.items():
            b = h.potential(v)
            if b:
                new[v] = new.get(v, GR_ZERO) + GaussianRational(b) * x
            for e in outs[v]:
                d = h.dst(e)
                new[d] = new.get(d, GR_ZERO) + h.weight(e) * x
        vec = {v: x for v, x in new.items() if not x.is_zero}
    return vec.get(u, GR_ZERO).as_fraction()


@dataclass(frozen=True)
class MomentReport:
    rows: tuple
    lift_vertices: int
    lift_girth: float
    ok: bool


def moment_convergence_check(
    g: Multigraph,
    k_max: int,
    seed: int = 0,
    max_vertices: int = 200_000,
) -> MomentReport:
    """Exact equality of cover moments and lift trace moments.

    Builds one lift of girth above k_max; for every k up to k_max the
    vertex-averaged cover moment must equal the exact normalized trace of
    the lift operator's k-th power, rational against rational.
    """
    if g.is_acyclic():
        raise MultigraphError("moment check requires a cycle")
    nv = g.vertex_count
    lifted = lift_with_girth_above(g, k_max, seed=seed, max_vertices=max_vertices)
    rows = []
    for k in range(k_max + 1):
        lhs = sum(cover_moment(g, u, k) for u in range(nv)) / nv
        rhs = sum(
            graph_moment(lifted, x, k) for x in range(lifted.vertex_count)
        ) / lifted.vertex_count
        if lhs != rhs:
            raise VerificationFailure(
                f"moment mismatch at k={k}: cover {lhs} vs lift trace {rhs}"
            )
        rows.append((k, lhs, rhs))
    return MomentReport(
        rows=tuple(rows),
        lift_vertices=lifted.vertex_count,
        lift_girth=lifted.girth(),
        ok=True,
    )


@dataclass(frozen=True)
class GaugeReport:
    k_max: int
    comparisons: int
    ok: bool


def gauge_invariance_check(g: Multigraph, k_max: int) -> GaugeReport:
    """Cover moments agree exactly with those of the gauge-normalized graph.

    The two sides run different arithmetic routes: complex weights apply
    directly, moduli weights go through the balanced rational recursion.
    """
    gn = gauge_normalize(g).graph
    done = 0
    for u in range(g.vertex_count):
        for k in range(k_max + 1):
            a = cover_moment(g, u, k)
            b = cover_moment(gn, u, k)
            if a != b:
                raise VerificationFailure(
                    f"gauge moment mismatch at vertex {u}, k={k}: {a} vs {b}"
                )
            done += 1
    return GaugeReport(k_max=k_max, comparisons=done, ok=True)


@dataclass(frozen=True)
class DeltaRadius:
    """Bracket for the minimum gap among candidate-tree eigenvalues."""

    infinite: bool
    lower: Fraction | None = None
    upper: Fraction | None = None
    points: int = 0


def delta_radius(g: Multigraph, max_vertices: int = 18) -> DeltaRadius:
    """Certified bracket of the smallest gap between distinct eigenvalues
    over all induced trees of the graph.

    Infinite when no candidate set exists (no perturbation can create point
    spectrum) or when fewer than two distinct eigenvalues arise.  Any
    parameter perturbation of 2-norm below half the lower bound keeps a
    point-spectrum-free instance point-spectrum-free.
    """
    if g.vertex_count > max_vertices:
        raise BudgetError(
            f"delta radius enumeration capped at {max_vertices} vertices"
        )
    if not candidate_sets(g):
        return DeltaRadius(infinite=True)
    nv = g.vertex_count
    roots = []
    for mask in range(1, 1 << nv):
        vs = frozenset(v for v in range(nv) if mask >> v & 1)
        induced = g.induced(vs)
        if not induced.is_acyclic() or not induced.is_connected():
            continue
        for root, _ in isolate_real_roots(tree_char_poly(induced)):
            if not any(root.same_root(r) for r in roots):
                roots.append(root)
    if len(roots) < 2:
        return DeltaRadius(infinite=True, points=len(roots))
    roots.sort(key=functools.cmp_to_key(lambda s, t: s.compare(t)))
    width = Fraction(1, 1 << 24)
    lower = upper = None
    for a, b in zip(roots, roots[1:]):
        a.refine_below(width)
        b.refine_below(width)
        while b.lo - a.hi <= 0:
            a.refine_once()
            b.refine_once()
        lb = b.lo - a.hi
        ub = b.hi - a.lo
        lower = lb if lower is None else min(lower, lb)
        upper = ub if upper is None else min(upper, ub)
    return DeltaRadius(infinite=False, lower=lower, upper=upper, points=len(roots))


PERTURBATION_DENOMINATOR = 1 << 20


def random_perturbation(g: Multigraph, epsilon: Fraction, rng: random.Random) -> Multigraph:
    """One sample: every potential and both weight components of every edge
    pair shifted by independent uniform draws from the rational grid of
    denominator 2^20 inside [-epsilon, epsilon]."""
    if any(not g.weight(e).is_plain for e in g.edges()):
        raise MultigraphError("perturbation requires plain weights")
    den = PERTURBATION_DENOMINATOR
    top = int(Fraction(epsilon) * den)

    def draw():
        return Fraction(rng.randint(-top, top), den)

    vertices = [(g.name(v), g.potential(v) + draw()) for v in range(g.vertex_count)]
    pairs = []
    for e in g.pair_representatives():
        w = g.weight(e)
        pairs.append(
            (
                g.name(g.src(e)),
                g.name(g.dst(e)),
                GaussianRational(w.re + draw(), w.im + draw()),
            )
        )
    return Multigraph.build(vertices, pairs)


@dataclass(frozen=True)
class PerturbationReport:
    samples: int
    epsilon: Fraction
    seed: int
    count_with_point_spectrum: int
    hit_indices: tuple
    delta: DeltaRadius | None = None


def sample_rng(seed: int, index: int) -> random.Random:
    """Generator for one probe sample, independent of evaluation order."""
    return random.Random(f"{seed}:{index}")


def _probe_one(text: str, eps: Fraction, index: int, seed: int, method: str) -> bool:
    from .multigraph import parse_graph

    g = parse_graph(text)
    perturbed = random_perturbation(g, eps, sample_rng(seed, index))
    return not point_spectrum(perturbed, method=method).is_empty


def perturbation_probe(
    g: Multigraph,
    epsilon,
    samples: int,
    seed: int,
    method: str = "pruned",
    compute_delta: bool = True,
    jobs: int = 1,
) -> PerturbationReport:
    """Count how many random grid perturbations create point spectrum.

    Hits are recorded, not asserted away: parameters with point spectrum
    form a measure-zero set, so hits deserve inspection rather than being
    impossible.  Each sample draws from its own generator keyed by (seed,
    index), so the report does not depend on the worker count.
    """
    epsilon = Fraction(epsilon)
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    hits = []
    if jobs > 1 and samples > 1:
        import concurrent.futures

        text = g.to_text()
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            flags = pool.map(
                _probe_one,
                [text] * samples,
                [epsilon] * samples,
                range(samples),
                [seed] * samples,
                [method] * samples,
            )
            hits = [i for i, hit in enumerate(flags) if hit]
    else:
        for i in range(samples):
            perturbed = random_perturbation(g, epsilon, sample_rng(seed, i))
            if not point_spectrum(perturbed, method=method).is_empty:
                hits.append(i)
    delta = delta_radius(g) if compute_delta else None
    return PerturbationReport(
        samples=samples,
        epsilon=epsilon,
        seed=seed,
        count_with_point_spectrum=len(hits),
        hit_indices=tuple(hits),
        delta=delta,
    )
