"""Command line interface.

Subcommands cover the full pipeline: exact point spectrum certificates,
lift construction, density-of-states experiments with rendered histograms,
explicit eigenvector export, perturbation probes, moment cross-checks, and
an invariant verification suite with CI-friendly exit codes.
"""

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .aomoto import aux_graph, point_spectrum
from .covers import (
    girth_doubling_lift,
    lift,
    lift_with_girth_above,
    random_lift_spec,
)
from .doslab import (
    delta_radius,
    empirical_measure,
    gauge_invariance_check,
    moment_convergence_check,
    perturbation_probe,
)
from .eigvec import (
    UnitaryWeighting,
    multiplicity_check,
    phi_kernel,
    tree_kernel,
    unitary_jacobi_matrix,
)
from .errors import (
    BudgetError,
    GraphParseError,
    KernelSearchError,
    LiftError,
    MultigraphError,
    VerificationFailure,
)
from .exactnum import format_rational, parse_rational
from .multigraph import Multigraph, parse_graph
from .polynomials import format_polynomial
from .spectral import jacobi_matrix

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_VERIFY = 4


def _load(path: str) -> Multigraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GraphParseError(f"cannot read {path}: {exc}", 0) from None
    return parse_graph(text)


def _header(args, name: str) -> list[str]:
    return [
        f"# treespectra {name}",
        f"# input: {args.graph}",
        f"# seed: {args.seed}",
        f"# mode: {args.mode}",
    ]


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _out_dir(args) -> Path:
    if not args.out:
        raise ValueError("this subcommand requires --out DIRECTORY")
    d = Path(args.out)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _root_record(root) -> dict:
    return {
        "minpoly": format_polynomial(root.minpoly),
        "interval": [format_rational(root.lo), format_rational(root.hi)],
        "float": root.float_hint,
    }


def _certificate_lines(g: Multigraph, res) -> list[str]:
    if res.finite_cover:
        lines = ["finite cover: the graph is acyclic and equals its universal cover"]
        for root, mult in res.finite_spectrum:
            rec = _root_record(root)
            rec["multiplicity"] = mult
            lines.append(json.dumps(rec))
        return lines
    if not res.certificates:
        return ["point spectrum: empty"]
    lines = []
    for cert in res.certificates:
        lines.append(
            json.dumps(
                {
                    "lambda": _root_record(cert.lam),
                    "mass": format_rational(cert.mass),
                    "witness": [g.name(v) for v in sorted(cert.witness.vertices)],
                    "index": cert.witness.index,
                }
            )
        )
    return lines


def _diff_results(a, b) -> int:
    """Certificates of two point spectrum runs must agree as (root, mass,
    index) lists; witnesses may legitimately differ."""
    if a.finite_cover != b.finite_cover:
        raise VerificationFailure("finite-cover flag differs between methods")
    ca, cb = a.certificates, b.certificates
    if len(ca) != len(cb):
        raise VerificationFailure(
            f"certificate counts differ: {len(ca)} vs {len(cb)}"
        )
    for x, y in zip(ca, cb):
        if not x.lam.same_root(y.lam):
            raise VerificationFailure(
                f"eigenvalues differ: {x.lam.float_hint} vs {y.lam.float_hint}"
            )
        if x.mass != y.mass or x.witness.index != y.witness.index:
            raise VerificationFailure(
                f"mass or index differs at {x.lam.float_hint}"
            )
    return len(ca)


def cmd_pointspec(args) -> int:
    g = _load(args.graph)
    res = point_spectrum(g, method=args.method)
    lines = _header(args, "pointspec")
    if args.oracle:
        other = "exhaustive" if args.method == "pruned" else "pruned"
        n = _diff_results(res, point_spectrum(g, method=other))
        lines.append(f"# oracle: {other} path agrees on {n} certificates")
    lines += _certificate_lines(g, res)
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_lift(args) -> int:
    g = _load(args.graph)
    if args.degree is not None:
        if args.degree < 1:
            raise ValueError("--degree must be positive")
        spec = random_lift_spec(g, args.degree, args.seed)
        lifted = lift(g, spec)
        how = f"random degree {args.degree}"
    elif args.girth_above is not None:
        lifted = lift_with_girth_above(
            g, args.girth_above, seed=args.seed, max_vertices=args.max_vertices
        )
        how = f"girth above {args.girth_above}"
    else:
        lifted = girth_doubling_lift(g, max_vertices=args.max_vertices)
        how = "girth doubling"
    header = _header(args, "lift")
    header.append(f"# construction: {how}")
    header.append(f"# vertices: {lifted.vertex_count}, girth: {lifted.girth()}")
    _emit(args, "\n".join(header) + "\n" + lifted.to_text())
    return EXIT_OK


def cmd_dos(args) -> int:
    g = _load(args.graph)
    out = _out_dir(args)
    spec = random_lift_spec(g, args.lift_degree, args.seed)
    lifted = lift(g, spec)
    est = empirical_measure(
        lifted,
        bins=args.bins,
        max_dimension=args.max_dimension,
        atom_window=args.atom_window,
        lift_degree=args.lift_degree,
    )
    rows = ["bin_lo,bin_hi,mass"]
    for lo, hi, m in zip(est.bin_edges, est.bin_edges[1:], est.masses):
        rows.append(f"{lo!r},{hi!r},{m!r}")
    (out / "histogram.csv").write_text("\n".join(rows) + "\n")
    rows = ["location,mass"]
    for loc, m in est.atoms:
        rows.append(f"{loc!r},{m!r}")
    (out / "atoms.csv").write_text("\n".join(rows) + "\n")
    from .plotting import render_measure

    render_measure(est, str(out / "dos.png"), title=Path(args.graph).stem)
    lines = _header(args, "dos")
    lines.append(f"lift degree: {args.lift_degree}")
    lines.append(f"dimension: {est.dimension}")
    lines.append(f"lift girth: {est.girth}")
    lines.append(f"bins: {args.bins}")
    lines.append(f"atoms: {len(est.atoms)}")
    for loc, m in est.atoms:
        lines.append(f"atom location={loc!r} mass={m!r}")
    (out / "report.txt").write_text("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_eigvec(args) -> int:
    g = _load(args.graph)
    out = _out_dir(args)
    res = point_spectrum(g)
    lines = _header(args, "eigvec")
    if res.finite_cover or not res.certificates:
        lines.append("point spectrum: empty; no eigenvectors to construct")
        (out / "report.txt").write_text("\n".join(lines) + "\n")
        return EXIT_OK
    if not 0 <= args.cert_index < len(res.certificates):
        raise ValueError(
            f"--cert-index {args.cert_index} out of range "
            f"(have {len(res.certificates)} certificates)"
        )
    cert = res.certificates[args.cert_index]
    if args.weighting == "trivial":
        weighting = UnitaryWeighting.trivial(g, 1)
    else:
        spec = random_lift_spec(g, args.lift_degree, args.seed)
        weighting = UnitaryWeighting.from_lift_spec(g, spec)
    svd_tol = args.tol if args.mode == "numeric" else 1e-8
    vectors = phi_kernel(
        g, cert.witness, cert.lam, weighting=weighting, svd_tol=svd_tol
    )
    n = weighting.n
    a = unitary_jacobi_matrix(g, weighting)
    lam_f = cert.lam.float_hint
    residuals = []
    for j in range(vectors.shape[1]):
        v = vectors[:, j]
        residuals.append(float(np.abs(a @ v - lam_f * v).max()))
        rows = ["vertex,coordinate,re,im"]
        for idx in range(v.shape[0]):
            rows.append(
                f"{g.name(idx // n)},{idx % n},"
                f"{float(v[idx].real)!r},{float(v[idx].imag)!r}"
            )
        (out / f"eigvec_{j:03d}.csv").write_text("\n".join(rows) + "\n")
    lines.append(f"lambda: {format_polynomial(cert.lam.minpoly)} = 0")
    lines.append(f"lambda float: {lam_f!r}")
    lines.append(f"mass: {format_rational(cert.mass)}")
    lines.append(f"index: {cert.witness.index}")
    lines.append(f"weighting: {args.weighting} (dimension {n})")
    lines.append(f"vectors: {vectors.shape[1]}")
    for j, r in enumerate(residuals):
        lines.append(f"residual[{j}]: {r:.3e}")
    (out / "report.txt").write_text("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_perturb(args) -> int:
    g = _load(args.graph)
    rep = perturbation_probe(
        g,
        parse_rational(args.epsilon),
        args.samples,
        args.seed,
        compute_delta=not args.no_delta,
        jobs=args.jobs,
    )
    lines = _header(args, "perturb")
    lines.append(f"epsilon: {format_rational(rep.epsilon)}")
    lines.append(f"samples: {rep.samples}")
    lines.append(f"instances with point spectrum: {rep.count_with_point_spectrum}")
    lines.append(
        "hit indices: "
        + (", ".join(str(i) for i in rep.hit_indices) if rep.hit_indices else "-")
    )
    if rep.delta is not None:
        if rep.delta.infinite:
            lines.append("delta radius: infinite (no candidate sets)")
        else:
            lines.append(
                "delta radius: "
                f"lower {format_rational(rep.delta.lower)}"
                f" (~{float(rep.delta.lower):.6f}),"
                f" upper {format_rational(rep.delta.upper)}"
                f" (~{float(rep.delta.upper):.6f})"
            )
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_moment(args) -> int:
    g = _load(args.graph)
    lines = _header(args, "moment")
    if g.is_acyclic():
        lines.append("input is acyclic: cover equals the graph, lift check skipped")
    else:
        rep = moment_convergence_check(
            g, args.k_max, seed=args.seed, max_vertices=args.max_vertices
        )
        lines.append(
            f"lift: {rep.lift_vertices} vertices, girth {rep.lift_girth}"
        )
        lines.append("k,cover_moment,lift_trace_moment")
        for k, lhs, rhs in rep.rows:
            lines.append(f"{k},{format_rational(lhs)},{format_rational(rhs)}")
    grep = gauge_invariance_check(g, args.k_max)
    lines.append(f"gauge invariance: {grep.comparisons} comparisons, ok")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _load(args.graph)
    lines = _header(args, "verify")
    current = "parse round-trip"

    def ok(msg: str) -> None:
        lines.append(f"ok: {msg}")

    def skip(msg: str, why: str) -> None:
        lines.append(f"skip: {msg} ({why})")

    try:
        reparsed = parse_graph(g.to_text())
        if (
            reparsed.names != g.names
            or reparsed.potentials != g.potentials
            or any(reparsed.weight(e) != g.weight(e) for e in g.edges())
        ):
            raise VerificationFailure("text round-trip changed the graph")
        ok(current)

        current = "hermitian operator"
        m = jacobi_matrix(g).as_numpy()
        if np.abs(m - m.conj().T).max() > 1e-12:
            raise VerificationFailure("operator is not Hermitian")
        ok(current)

        current = "point spectrum"
        res = point_spectrum(g, method="pruned")
        if g.vertex_count <= 14:
            n = _diff_results(res, point_spectrum(g, method="exhaustive"))
            ok(f"{current} (pruned vs exhaustive, {n} certificates)")
        else:
            ok(f"{current} (pruned only)")
            skip("exhaustive diff", "graph too large")

        plain = all(g.weight(e).is_plain for e in g.edges())
        for i, cert in enumerate(res.certificates[: args.max_certs]):
            current = f"tree kernels (certificate {i})"
            for vs in cert.witness.trees:
                kb = tree_kernel(g.induced(vs), cert.lam)
                if kb.nowhere_zero is not None and kb.dimension != 1:
                    raise VerificationFailure(
                        "nowhere-zero kernel with dimension above one"
                    )
            ok(current)

            current = f"phi kernel (certificate {i})"
            phi_kernel(g, cert.witness, cert.lam)
            ok(current)

            current = f"lift multiplicity (certificate {i})"
            spec = random_lift_spec(g, args.max_lift, args.seed + i)
            multiplicity_check(g, spec, cert)
            ok(f"{current}, degree {args.max_lift}")

            current = f"auxiliary graph (certificate {i})"
            try:
                aux = aux_graph(g, cert)
                if aux.graph.vertex_count < 1:
                    raise VerificationFailure("auxiliary graph is empty")
                ok(current)
            except KernelSearchError:
                skip(current, "no nowhere-zero tree kernel vector")

        current = "moment convergence"
        if g.is_acyclic():
            skip(current, "acyclic input")
        elif not plain:
            skip(current, "weights are not plain rationals")
        elif g.vertex_count > 12:
            skip(current, "graph too large")
        else:
            rep = moment_convergence_check(g, args.k_max, seed=args.seed)
            ok(f"{current} (k <= {args.k_max}, lift {rep.lift_vertices} vertices)")

        current = "gauge invariance"
        if g.vertex_count > 12:
            skip(current, "graph too large")
        else:
            grep = gauge_invariance_check(g, args.k_max)
            ok(f"{current} ({grep.comparisons} comparisons)")

        current = "delta radius"
        if not plain or g.vertex_count > 12 or g.is_acyclic():
            skip(current, "needs a small cyclic plain-weight graph")
        else:
            dr = delta_radius(g)
            if dr.infinite:
                ok(f"{current} (infinite)")
            else:
                ok(f"{current} (lower {float(dr.lower):.6f})")
    except (VerificationFailure, KernelSearchError) as exc:
        lines.append(f"FAIL: {current}: {exc}")
        _emit(args, "\n".join(lines) + "\n")
        return EXIT_VERIFY
    lines.append("all checks passed")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treespectra",
        description=(
            "Exact point spectrum, atom masses, eigenvectors, and lift "
            "experiments for Jacobi operators on universal covering trees."
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("graph", help="graph file")
        mode = p.add_mutually_exclusive_group()
        mode.add_argument(
            "--exact", dest="mode", action="store_const", const="exact"
        )
        mode.add_argument(
            "--numeric", dest="mode", action="store_const", const="numeric"
        )
        p.set_defaults(mode="exact")
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--out", default=None)
        p.add_argument("--max-vertices", type=int, default=1_000_000)

    p = sub.add_parser("pointspec", help="exact point spectrum certificates")
    common(p)
    p.add_argument("--method", choices=("pruned", "exhaustive"), default="pruned")
    p.add_argument(
        "--oracle",
        action="store_true",
        help="also run the other enumeration path and diff",
    )
    p.set_defaults(func=cmd_pointspec)

    p = sub.add_parser("lift", help="write a lift of the input graph")
    common(p)
    way = p.add_mutually_exclusive_group(required=True)
    way.add_argument("--degree", type=int, default=None)
    way.add_argument("--girth-doubling", action="store_true")
    way.add_argument("--girth-above", type=int, default=None)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("dos", help="density of states experiment on a random lift")
    common(p)
    p.add_argument("--lift-degree", type=int, default=100)
    p.add_argument("--bins", type=int, default=101)
    p.add_argument("--atom-window", type=float, default=1e-6)
    p.add_argument("--max-dimension", type=int, default=6000)
    p.set_defaults(func=cmd_dos)

    p = sub.add_parser("eigvec", help="export explicit eigenvectors")
    common(p)
    p.add_argument("--cert-index", type=int, default=0)
    p.add_argument(
        "--weighting", choices=("trivial", "regular"), default="trivial"
    )
    p.add_argument(
        "--lift-degree",
        type=int,
        default=3,
        help="degree for the regular-representation weighting",
    )
    p.set_defaults(func=cmd_eigvec)

    p = sub.add_parser("perturb", help="random perturbation probe")
    common(p)
    p.add_argument("--epsilon", required=True, help="grid half-width, e.g. 1/10")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--no-delta", action="store_true")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("moment", help="exact moment cross-checks")
    common(p)
    p.add_argument("--k-max", type=int, default=8)
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("verify", help="run the invariant suite on one input")
    common(p)
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--max-lift", type=int, default=4)
    p.add_argument("--max-certs", type=int, default=3)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol <= 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_PARSE
    if args.jobs < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except GraphParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (MultigraphError, LiftError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (VerificationFailure, KernelSearchError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
