"""Jacobi matrices, gauge normalization, exact tree characteristic
polynomials, and the dense Hermitian eigensolver wrapper.

Exactness boundary: base graphs get exact rational treatment; anything
derived from lifts runs in floating point behind eig_hermitian.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import MultigraphError
from .exactnum import GR_ZERO, GaussianRational
from .multigraph import Multigraph
from .polynomials import (
    POLY_ONE,
    AlgebraicReal,
    RationalPolynomial,
    isolate_real_roots,
)


class JacobiMatrix:
    """Dense exact operator matrix of a weighted multigraph.

    Row u, column v holds the sum of weights of directed edges from v to u;
    the diagonal adds the potential, so a loop pair contributes a + conj(a).
    """

    __slots__ = ("entries", "graph")

    def __init__(self, graph: Multigraph):
        n = graph.vertex_count
        rows = [[GR_ZERO] * n for _ in range(n)]
        for v in range(n):
            rows[v][v] = GaussianRational(graph.potential(v))
        for e in graph.edges():
            u, v = graph.dst(e), graph.src(e)
            rows[u][v] = rows[u][v] + graph.weight(e)
        self.entries = tuple(tuple(r) for r in rows)
        self.graph = graph

    @property
    def dimension(self) -> int:
        return len(self.entries)

    def __getitem__(self, uv):
        return self.entries[uv[0]][uv[1]]

    def is_hermitian(self) -> bool:
        n = self.dimension
        return all(
            self.entries[i][j] == self.entries[j][i].conjugate()
            for i in range(n)
            for j in range(i, n)
        )

    def as_numpy(self) -> np.ndarray:
        n = self.dimension
        out = np.zeros((n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                out[i, j] = complex(self.entries[i][j])
        return out


def jacobi_matrix(g: Multigraph) -> JacobiMatrix:
    return JacobiMatrix(g)


@dataclass(frozen=True)
class GaugeNormalization:
    graph: Multigraph
    phases: tuple[GaussianRational, ...] | None


def gauge_normalize(g: Multigraph) -> GaugeNormalization:
    """Replace every weight by its modulus |a|, exactly.

    For acyclic input also returns the diagonal unitary phases U with
    conj(U_u) * |a| * U_v = a along every edge, built from products of
    weight phases along root paths; None otherwise.
    """
    new_weights = []
    for e in g.edges():
        w = g.weight(e)
        if w.is_zero:
            new_weights.append(GR_ZERO)
        else:
            new_weights.append(GaussianRational(1, 0, w.modulus_squared))
    normalized = Multigraph(
        g.names,
        g.potentials,
        [g.src(e) for e in g.edges()],
        [g.dst(e) for e in g.edges()],
        [g.partner(e) for e in g.edges()],
        new_weights,
    )
    if not g.is_acyclic():
        return GaugeNormalization(normalized, None)

    phases = [None] * g.vertex_count
    out_edges = [[] for _ in range(g.vertex_count)]
    for e in g.edges():
        out_edges[g.src(e)].append(e)
    for comp in g.components():
        root = min(comp)
        phases[root] = GaussianRational(1)
        stack = [root]
        while stack:
            u = stack.pop()
            for e in out_edges[u]:
                v = g.dst(e)
                if phases[v] is not None:
                    continue
                a = g.weight(e)
                if a.is_zero:
                    phases[v] = phases[u]
                else:
                    unit_inv = a.conjugate() * GaussianRational(
                        1, 0, 1 / a.modulus_squared
                    )
                    phases[v] = unit_inv * phases[u]
                stack.append(v)
    return GaugeNormalization(normalized, tuple(phases))


def tree_char_poly(t: Multigraph) -> RationalPolynomial:
    """Characteristic polynomial det(z - A_t) of an acyclic multigraph,
    exactly, multiplying over components.

    Uses the rooted two-polynomial recursion; only squared moduli |a|^2
    enter, so the result is rational even for radical edge weights.
    """
    if not t.is_acyclic():
        raise MultigraphError("characteristic recursion requires acyclic input")
    result = POLY_ONE
    for comp in t.components():
        result = result * _component_char_poly(t, comp)
    return result


def _component_char_poly(t: Multigraph, comp) -> RationalPolynomial:
    root = min(comp)
    m2 = {}
    for e in t.edges():
        a, b = t.src(e), t.dst(e)
        if a in comp:
            m2[(a, b)] = t.weight(e).modulus_squared
    order = []
    parent = {root: None}
    stack = [root]
    while stack:
        u = stack.pop()
        order.append(u)
        for v in t.adjacency(u):
            if v not in parent:
                parent[v] = u
                stack.append(v)
    children = {u: [] for u in order}
    for u in order[1:]:
        children[parent[u]].append(u)

    p_of = {}
    q_of = {}
    for u in reversed(order):
        z_minus_b = RationalPolynomial([-t.potential(u), 1])
        kids = children[u]
        if not kids:
            p_of[u] = z_minus_b
            q_of[u] = POLY_ONE
            continue
        k = len(kids)
        pref = [POLY_ONE] * (k + 1)
        for i, c in enumerate(kids):
            pref[i + 1] = pref[i] * p_of[c]
        suff = [POLY_ONE] * (k + 1)
        for i in range(k - 1, -1, -1):
            suff[i] = suff[i + 1] * p_of[kids[i]]
        total = pref[k]
        acc = z_minus_b * total
        for i, c in enumerate(kids):
            others = pref[i] * suff[i + 1]
            acc = acc - m2[(u, c)] * (q_of[c] * others)
        p_of[u] = acc
        q_of[u] = total
    return p_of[root]


def forest_spectrum(t: Multigraph) -> list[tuple[AlgebraicReal, int]]:
    """Exact eigenvalues with multiplicities of an acyclic multigraph."""
    return isolate_real_roots(tree_char_poly(t))


def eig_hermitian(
    matrix: np.ndarray, hermitian_tol: float = 1e-12
) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvector columns.

    Rejects input whose deviation from Hermitian symmetry exceeds the
    tolerance; the residual norm(M v - w v) stays below 1e-9 * norm(M).
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("square matrix required")
    dev = np.abs(matrix - matrix.conj().T).max() if matrix.size else 0.0
    scale = max(1.0, float(np.abs(matrix).max()) if matrix.size else 0.0)
    if dev > hermitian_tol * scale:
        raise ValueError(f"matrix is not Hermitian within {hermitian_tol}")
    w, v = np.linalg.eigh(matrix)
    return w, v
