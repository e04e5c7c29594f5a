"""Explicit eigenvector construction.

Three layers: exact or numeric kernels of tree operators, propagation of a
scalar tree kernel through unitary edge weights, and assembly of cover-style
eigenvectors on the whole graph by intersecting with the boundary map's
kernel.  The last step certifies a multiplicity lower bound of
n * (cc(X) - |boundary(X)|) for every candidate set X.
"""

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .aomoto import CandidateSet, PointSpectrumCertificate
from .covers import LiftSpec, regular_rep_operator
from .errors import KernelSearchError, MultigraphError, VerificationFailure
from .exactnum import GR_ONE, GR_ZERO, GaussianRational
from .multigraph import Multigraph
from .polynomials import AlgebraicReal
from .spectral import eig_hermitian, jacobi_matrix

KERNEL_SVD_TOL = 1e-8
NOWHERE_ZERO_DRAWS = 20


def _lam_float(lam) -> float:
    if isinstance(lam, AlgebraicReal):
        return lam.float_hint
    return float(lam)


def _lam_rational(lam):
    if isinstance(lam, AlgebraicReal):
        return lam.as_rational() if lam.is_rational else None
    if isinstance(lam, (int, Fraction)):
        return Fraction(lam)
    return None


def _exact_nullspace(rows):
    """Basis of the nullspace of a matrix of plain Gaussian rationals."""
    m = len(rows)
    ncols = len(rows[0]) if m else 0
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, m) if not mat[i][c].is_zero), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = mat[r][c].inverse()
        mat[r] = [x * inv for x in mat[r]]
        for i in range(m):
            if i != r and not mat[i][c].is_zero:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    pivot_set = set(pivots)
    basis = []
    for fc in (c for c in range(ncols) if c not in pivot_set):
        vec = [GR_ZERO] * ncols
        vec[fc] = GR_ONE
        for rr, pc in enumerate(pivots):
            vec[pc] = -mat[rr][fc]
        basis.append(tuple(vec))
    return basis


@dataclass(frozen=True, eq=False)
class TreeKernelBasis:
    """Kernel of (lam - A) on an acyclic graph, with an optional exact basis
    and a nowhere-zero representative when one exists."""

    tree: Multigraph
    lam: object
    vectors: np.ndarray
    exact_vectors: tuple | None
    nowhere_zero: object | None

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    @property
    def nowhere_zero_flag(self) -> bool:
        return self.nowhere_zero is not None


def tree_kernel(t: Multigraph, lam, seed: int = 0) -> TreeKernelBasis:
    """Kernel basis of lam - A on an acyclic graph.

    Runs exact Gaussian elimination when lam is rational and all weights are
    plain Gaussian rationals, and an SVD nullspace otherwise.  The
    nowhere-zero representative is hunted by seeded small-integer
    combinations of the basis; a vertex outside the union support rules one
    out immediately.
    """
    if not t.is_acyclic():
        raise MultigraphError("tree kernel requires an acyclic graph")
    nv = t.vertex_count
    if nv == 0:
        raise MultigraphError("empty graph")
    matrix = jacobi_matrix(t)
    lam_q = _lam_rational(lam)
    plain = all(t.weight(e).is_plain for e in t.edges())
    rng = random.Random(seed)

    if lam_q is not None and plain:
        rows = []
        for u in range(nv):
            row = list(matrix.entries[u])
            row[u] = row[u] - GaussianRational(lam_q)
            rows.append(row)
        exact = _exact_nullspace(rows)
        if not exact:
            raise KernelSearchError("lambda is not an eigenvalue of the tree")
        raw = np.array(
            [[complex(x) for x in vec] for vec in exact], dtype=complex
        ).T
        q, _ = np.linalg.qr(raw)
        vectors = q[:, : len(exact)]
        nz = _nowhere_zero_exact(exact, rng)
        return TreeKernelBasis(t, lam, vectors, tuple(exact), nz)

    lam_f = _lam_float(lam)
    a = matrix.as_numpy() - lam_f * np.eye(nv)
    _, s, vh = np.linalg.svd(a)
    scale = max(1.0, s[0] if len(s) else 0.0)
    dim = int(np.sum(s <= KERNEL_SVD_TOL * scale))
    if dim == 0:
        raise KernelSearchError("lambda is not an eigenvalue of the tree")
    vectors = vh[nv - dim :].conj().T
    resid = np.abs(a @ vectors).max()
    if resid > 1e-10 * scale:
        raise VerificationFailure(
            f"kernel residual {resid:.2e} exceeds 1e-10 * {scale:.2e}"
        )
    nz = _nowhere_zero_numeric(vectors, rng)
    return TreeKernelBasis(t, lam, vectors, None, nz)


def _nowhere_zero_exact(basis, rng):
    nv = len(basis[0])
    for v in range(nv):
        if all(vec[v].is_zero for vec in basis):
            return None
    if len(basis) == 1:
        vec = basis[0]
        return vec if all(not x.is_zero for x in vec) else None
    for _ in range(NOWHERE_ZERO_DRAWS):
        coeffs = [rng.randint(-9, 9) for _ in basis]
        if all(c == 0 for c in coeffs):
            continue
        combo = [GR_ZERO] * nv
        for c, vec in zip(coeffs, basis):
            if c:
                cg = GaussianRational(c)
                combo = [acc + cg * x for acc, x in zip(combo, vec)]
        if all(not x.is_zero for x in combo):
            return tuple(combo)
    return None


def _nowhere_zero_numeric(vectors, rng, rel_tol: float = 1e-8):
    nv, d = vectors.shape
    support = np.abs(vectors).max(axis=1)
    if np.any(support <= rel_tol * support.max()):
        return None
    if d == 1:
        vec = vectors[:, 0]
        return vec if np.abs(vec).min() > rel_tol * np.abs(vec).max() else None
    for _ in range(NOWHERE_ZERO_DRAWS):
        coeffs = np.array([rng.randint(-9, 9) for _ in range(d)], dtype=float)
        if not coeffs.any():
            continue
        combo = vectors @ coeffs
        if np.abs(combo).min() > rel_tol * np.abs(combo).max():
            return combo
    return None


class UnitaryWeighting:
    """One unitary matrix per directed edge, with partners adjoint-paired."""

    __slots__ = ("graph", "n", "mats")

    def __init__(self, graph: Multigraph, n: int, mats, tol: float = 1e-12):
        mats = tuple(np.asarray(m, dtype=complex) for m in mats)
        if len(mats) != graph.edge_count:
            raise MultigraphError(
                f"{len(mats)} matrices for {graph.edge_count} edges"
            )
        eye = np.eye(n)
        for e, m in enumerate(mats):
            if m.shape != (n, n):
                raise MultigraphError(f"edge {e}: matrix shape {m.shape}")
            if np.abs(m @ m.conj().T - eye).max() > tol:
                raise MultigraphError(f"edge {e}: matrix is not unitary")
            if np.abs(mats[graph.partner(e)] - m.conj().T).max() > tol:
                raise MultigraphError(f"edge {e}: partner is not the adjoint")
        self.graph = graph
        self.n = n
        self.mats = mats

    def mat(self, e: int) -> np.ndarray:
        return self.mats[e]

    @classmethod
    def trivial(cls, g: Multigraph, n: int = 1) -> "UnitaryWeighting":
        eye = np.eye(n, dtype=complex)
        return cls(g, n, [eye] * g.edge_count)

    @classmethod
    def phase(cls, g: Multigraph) -> "UnitaryWeighting":
        """1x1 phases of g's weights; pairs the gauge-normalized graph so
        that the weighted operator reproduces the original one."""
        mats = []
        for e in g.edges():
            w = complex(g.weight(e))
            mats.append(
                np.array([[w / abs(w) if w else 1.0]], dtype=complex)
            )
        return cls(g, 1, mats)

    @classmethod
    def from_lift_spec(cls, g: Multigraph, spec: LiftSpec) -> "UnitaryWeighting":
        """The lift's action on the orthogonal complement of constant
        fibers: (n-1)-dimensional, one orthogonal matrix per edge."""
        n = spec.degree
        if n < 2:
            raise MultigraphError("lift degree must be at least 2")
        ones = np.full((n, 1), 1.0 / math.sqrt(n))
        q, _ = np.linalg.qr(np.hstack([ones, np.eye(n)[:, : n - 1]]))
        basis = q[:, 1:]
        eperm = spec.edge_perms(g)
        mats = []
        for e in g.edges():
            p_mat = np.zeros((n, n))
            for i, j in enumerate(eperm[e]):
                p_mat[j, i] = 1.0
            mats.append(basis.T @ p_mat @ basis)
        return cls(g, n - 1, mats)

    @classmethod
    def random_signs(cls, g: Multigraph, n: int, seed: int) -> "UnitaryWeighting":
        """Random diagonal +-1 matrices, equal on both edges of a pair."""
        rng = random.Random(seed)
        mats: list = [None] * g.edge_count
        for e in g.pair_representatives():
            m = np.diag([float(rng.choice((-1, 1))) for _ in range(n)])
            mats[e] = m
            mats[g.partner(e)] = m
        return cls(g, n, mats)

    @classmethod
    def random_unitary(cls, g: Multigraph, n: int, seed: int) -> "UnitaryWeighting":
        rng = np.random.default_rng(seed)
        mats: list = [None] * g.edge_count
        for e in g.pair_representatives():
            z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            q, r = np.linalg.qr(z)
            q = q * (np.diag(r) / np.abs(np.diag(r)))
            mats[e] = q
            mats[g.partner(e)] = q.conj().T
        return cls(g, n, mats)

    def restrict(self, sub: Multigraph, edge_map) -> "UnitaryWeighting":
        return UnitaryWeighting(sub, self.n, [self.mats[e] for e in edge_map])


def induced_edge_map(g: Multigraph, keep_sorted, sub: Multigraph):
    """For each edge of the induced subgraph, the matching edge id of g.

    Valid when the induced subgraph has no parallel pairs, so that the
    directed endpoints identify the edge uniquely.
    """
    by_ends: dict[tuple, int] = {}
    keep = set(keep_sorted)
    for e in g.edges():
        if g.src(e) in keep and g.dst(e) in keep:
            key = (g.src(e), g.dst(e))
            if key in by_ends:
                raise MultigraphError("parallel pair inside induced subgraph")
            by_ends[key] = e
    return [
        by_ends[(keep_sorted[sub.src(j)], keep_sorted[sub.dst(j)])]
        for j in sub.edges()
    ]


def unitary_jacobi_matrix(g: Multigraph, w: UnitaryWeighting) -> np.ndarray:
    """Dense matrix of the unitary-weighted operator on blocks of size n."""
    n = w.n
    big = np.zeros((g.vertex_count * n, g.vertex_count * n), dtype=complex)
    for v in range(g.vertex_count):
        big[v * n : (v + 1) * n, v * n : (v + 1) * n] += float(
            g.potential(v)
        ) * np.eye(n)
    for e in g.edges():
        u, s = g.dst(e), g.src(e)
        big[u * n : (u + 1) * n, s * n : (s + 1) * n] += complex(
            g.weight(e)
        ) * w.mat(e)
    return big


def unitary_tree_kernel(
    t: Multigraph,
    lam,
    weighting: UnitaryWeighting,
    seed_vec,
    eta=None,
    residual_tol: float = 1e-10,
) -> np.ndarray:
    """Kernel vector of (lam - A_{t,U}) built by path propagation.

    Starting from a scalar kernel vector eta, each vertex carries
    eta(v) times the product of the adjoints of the unitaries along its path
    to the root, applied to the seed.  The result is exact in structure and
    verified against the assembled operator.
    """
    if not t.is_acyclic() or not t.is_connected():
        raise MultigraphError("propagation requires a connected acyclic graph")
    if weighting.graph is not t:
        raise MultigraphError("weighting is bound to a different graph")
    n = weighting.n
    seed_vec = np.asarray(seed_vec, dtype=complex)
    if seed_vec.shape != (n,) or not np.abs(seed_vec).max() > 0:
        raise MultigraphError("seed must be a nonzero length-n vector")
    if eta is None:
        eta = tree_kernel(t, lam).vectors[:, 0]
    eta = np.asarray(eta, dtype=complex)

    nv = t.vertex_count
    out_edges = [[] for _ in range(nv)]
    for e in t.edges():
        out_edges[t.src(e)].append(e)
    carried = [None] * nv
    carried[0] = seed_vec
    stack = [0]
    seen = [False] * nv
    seen[0] = True
    while stack:
        v = stack.pop()
        for e in out_edges[v]:
            w_vertex = t.dst(e)
            if not seen[w_vertex]:
                seen[w_vertex] = True
                carried[w_vertex] = weighting.mat(e) @ carried[v]
                stack.append(w_vertex)
    zeta = np.zeros(nv * n, dtype=complex)
    for v in range(nv):
        zeta[v * n : (v + 1) * n] = eta[v] * carried[v]

    a = unitary_jacobi_matrix(t, weighting)
    lam_f = _lam_float(lam)
    resid = np.linalg.norm(a @ zeta - lam_f * zeta)
    bound = residual_tol * max(1.0, np.linalg.norm(a, 2)) * max(
        1.0, np.linalg.norm(zeta)
    )
    if resid > bound:
        raise VerificationFailure(
            f"propagated vector residual {resid:.2e} exceeds {bound:.2e}"
        )
    return zeta


def phi_kernel(
    g: Multigraph,
    cand: CandidateSet,
    lam,
    weighting: UnitaryWeighting | None = None,
    svd_tol: float = KERNEL_SVD_TOL,
    residual_tol: float = 1e-9,
) -> np.ndarray:
    """Orthonormal eigenvectors of the unitary-weighted operator at lam,
    supported on the candidate set.

    Builds the direct sum of propagated tree kernels, intersects with the
    kernel of the boundary map phi, and verifies both the dimension bound
    count >= n * index and the eigenequation residual.
    """
    if weighting is None:
        weighting = UnitaryWeighting.trivial(g, 1)
    if weighting.graph is not g:
        raise MultigraphError("weighting is bound to a different graph")
    n = weighting.n
    big_n = g.vertex_count * n
    in_x = set(cand.vertices)
    blocks = []
    for vs in cand.trees:
        keep = sorted(vs)
        sub = g.induced(vs)
        w_sub = weighting.restrict(sub, induced_edge_map(g, keep, sub))
        kb = tree_kernel(sub, lam)
        cols = []
        for j in range(kb.dimension):
            for k in range(n):
                seed = np.zeros(n, dtype=complex)
                seed[k] = 1.0
                zeta = unitary_tree_kernel(
                    sub, lam, w_sub, seed, eta=kb.vectors[:, j]
                )
                col = np.zeros(big_n, dtype=complex)
                for local, gv in enumerate(keep):
                    col[gv * n : (gv + 1) * n] = zeta[local * n : (local + 1) * n]
                cols.append(col)
        block = np.column_stack(cols)
        u, s, _ = np.linalg.svd(block, full_matrices=False)
        blocks.append(u[:, s > svd_tol * s[0]])
    domain = np.hstack(blocks)

    boundary = sorted(cand.boundary)
    row_of = {u: i for i, u in enumerate(boundary)}
    phi = np.zeros((len(boundary) * n, domain.shape[1]), dtype=complex)
    for e in g.edges():
        s_v, d_v = g.src(e), g.dst(e)
        if s_v in in_x and d_v in row_of:
            r = row_of[d_v]
            phi[r * n : (r + 1) * n, :] += complex(g.weight(e)) * (
                weighting.mat(e) @ domain[s_v * n : (s_v + 1) * n, :]
            )
    if phi.shape[0] == 0:
        vectors = domain
    else:
        _, s, vh = np.linalg.svd(phi)
        scale = max(1.0, s[0] if len(s) else 0.0)
        rank = int(np.sum(s > svd_tol * scale))
        coeff = vh[rank:].conj().T
        vectors = domain @ coeff

    required = n * cand.index
    if vectors.shape[1] < required:
        raise VerificationFailure(
            f"kernel dimension {vectors.shape[1]} below bound {required}"
        )
    a = unitary_jacobi_matrix(g, weighting)
    lam_f = _lam_float(lam)
    resid = np.abs(a @ vectors - lam_f * vectors).max() if vectors.size else 0.0
    bound = residual_tol * max(1.0, np.linalg.norm(a, 2))
    if resid > bound:
        raise VerificationFailure(
            f"eigenvector residual {resid:.2e} exceeds {bound:.2e}"
        )
    return vectors


@dataclass(frozen=True)
class MultiplicityReport:
    vacuous: bool
    lam_float: float | None = None
    index: int | None = None
    degree: int | None = None
    count_base: int | None = None
    count_quotient: int | None = None
    required_base: int | None = None
    required_quotient: int | None = None
    collision: bool = False
    ok: bool = True


def multiplicity_check(
    g: Multigraph,
    spec: LiftSpec,
    cert: PointSpectrumCertificate | None,
    tol: float = 1e-8,
) -> MultiplicityReport:
    """Count eigenvalues near a certified lambda in the base operator and in
    the lift's quotient operator, and check the index lower bounds.

    When an unrelated eigenvalue sits within twice the tolerance the counts
    are reported with a collision flag instead of being enforced.
    """
    if cert is None:
        return MultiplicityReport(vacuous=True)
    lam_f = cert.lam.float_hint
    idx = cert.witness.index
    n = spec.degree
    w_base, _ = eig_hermitian(jacobi_matrix(g).as_numpy())
    w_quot, _ = eig_hermitian(regular_rep_operator(g, spec, orthonormal=True))
    count_base = int(np.sum(np.abs(w_base - lam_f) <= tol))
    count_quot = int(np.sum(np.abs(w_quot - lam_f) <= tol))
    near = lambda w: np.any((np.abs(w - lam_f) > tol) & (np.abs(w - lam_f) <= 2 * tol))
    collision = bool(near(w_base) or near(w_quot))
    report = MultiplicityReport(
        vacuous=False,
        lam_float=lam_f,
        index=idx,
        degree=n,
        count_base=count_base,
        count_quotient=count_quot,
        required_base=idx,
        required_quotient=(n - 1) * idx,
        collision=collision,
        ok=count_base >= idx and count_quot >= (n - 1) * idx,
    )
    if not collision and not report.ok:
        raise VerificationFailure(
            f"multiplicity bound failed: base {count_base} < {idx} or "
            f"quotient {count_quot} < {(n - 1) * idx} at lambda {lam_f:.6g}"
        )
    return report
