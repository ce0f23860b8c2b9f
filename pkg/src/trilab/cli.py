"""Command-line surface: deterministic, scriptable access to the library.

Exit codes: 0 success / feasible / true; 1 infeasible / false / not
found; 2 usage or I/O error; 3 numerical non-convergence.  With
``--format machine`` the output is one ``key=value`` pair per line and is
byte-identical across runs for a fixed seed (wall time is only shown in
text mode).
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from fractions import Fraction

import numpy as np

from . import gadgets, hyperdet, rank
from .gadgets import (
    EDGE_FORM_AGGREGATED,
    EDGE_FORM_MINORS,
    QuadraticSystem,
    feasibility_search,
    load_graph,
)
from .hypermatrix import (
    FLOAT,
    RATIONAL,
    Tensor3,
    TensorFormatError,
    frobenius_norm,
    is_symmetric,
    load_tensor,
    mlmul,
    save_tensor,
)
from .spectral import SearchConfig, best_rank1, find_eigenpairs_small, spectral_norm

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_NOCONV = 3


class CliError(Exception):
    """Usage or I/O problem; maps to exit code 2."""


def _fmt(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, np.ndarray):
        return "[" + ",".join(_fmt(float(v)) for v in value) + "]"
    return str(value)


class Report:
    """Ordered key=value run report; machine mode omits wall time."""

    def __init__(self, command: str, seed: int | None):
        self.pairs: list[tuple[str, str]] = [("command", command)]
        if seed is not None:
            self.pairs.append(("seed", str(seed)))
        self.start = time.perf_counter()

    def add(self, key: str, value):
        self.pairs.append((key, _fmt(value)))

    def add_input(self, label: str, path: str):
        with open(path, "rb") as fh:
            digest = hashlib.sha256(fh.read()).hexdigest()[:16]
        self.pairs.append((f"input_{label}", f"{path}:{digest}"))

    def render(self, fmt: str) -> str:
        lines = [f"{k}={v}" for k, v in self.pairs]
        if fmt == "text":
            lines.append(f"wall_time_s={time.perf_counter() - self.start:.3f}")
        return "\n".join(lines) + "\n"


def _read_tensor(report: Report, path: str) -> Tensor3:
    try:
        report.add_input("tensor", path)
        return load_tensor(path)
    except FileNotFoundError as e:
        raise CliError(f"cannot read {path}: {e.strerror}") from e
    except TensorFormatError as e:
        raise CliError(f"{path}: {e}") from e


def _read_graph(report: Report, path: str):
    try:
        report.add_input("graph", path)
        return load_graph(path)
    except FileNotFoundError as e:
        raise CliError(f"cannot read {path}: {e.strerror}") from e
    except gadgets.GraphFormatError as e:
        raise CliError(f"{path}: {e}") from e


def _read_matrix(path: str, rows: int, kind: str):
    import json

    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except FileNotFoundError as e:
        raise CliError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise CliError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}") from e
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise CliError(f"{path}: matrix file must be a JSON array of rows")
    if len(obj) != rows:
        raise CliError(f"{path}: expected {rows} rows, got {len(obj)}")
    if kind == FLOAT:
        return [[float(e) for e in row] for row in obj]
    return [[Fraction(e) if isinstance(e, str) else Fraction(int(e)) for e in row] for row in obj]


def _cfg(args) -> SearchConfig:
    return SearchConfig(
        seed=args.seed,
        restarts=args.restarts,
        max_iters=args.max_iters,
        tol=args.tol,
    )


def _emit(args, report: Report) -> None:
    out = report.render(args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


# -- tensor ---------------------------------------------------------------------


def cmd_tensor_info(args) -> int:
    rep = Report("tensor info", None)
    T = _read_tensor(rep, args.tensor)
    rep.add("dims", "x".join(str(d) for d in T.dims))
    rep.add("scalar_kind", T.kind)
    rep.add("frobenius_norm", frobenius_norm(T))
    l, m, n = T.dims
    if l == m == n:
        rep.add("symmetric", str(is_symmetric(T)).lower())
    _emit(args, rep)
    return EXIT_OK


def cmd_tensor_norm(args) -> int:
    rep = Report("tensor norm", None)
    T = _read_tensor(rep, args.tensor)
    rep.add("frobenius_norm", frobenius_norm(T))
    _emit(args, rep)
    return EXIT_OK


def cmd_tensor_mlmul(args) -> int:
    rep = Report("tensor mlmul", None)
    T = _read_tensor(rep, args.tensor)
    l, m, n = T.dims
    eye = lambda k: [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    X = _read_matrix(args.x, l, T.kind) if args.x else eye(l)
    Y = _read_matrix(args.y, m, T.kind) if args.y else eye(m)
    Z = _read_matrix(args.z, n, T.kind) if args.z else eye(n)
    result = mlmul(T, X, Y, Z)
    rep.add("dims", "x".join(str(d) for d in result.dims))
    if args.result:
        save_tensor(result, args.result)
        rep.add("result_path", args.result)
    else:
        rep.add("entries", ",".join(_fmt(e) for e in result.flat_entries()))
    _emit(args, rep)
    return EXIT_OK


# -- spectral -------------------------------------------------------------------


def cmd_spectral_norm(args) -> int:
    rep = Report("spectral norm", args.seed)
    T = _read_tensor(rep, args.tensor).to_float()
    cert = spectral_norm(T, _cfg(args))
    rep.add("sigma", cert.sigma)
    rep.add("residual", cert.residual)
    rep.add("restarts_used", cert.restarts_used)
    rep.add("u", cert.triple.u)
    rep.add("v", cert.triple.v)
    rep.add("w", cert.triple.w)
    _emit(args, rep)
    return EXIT_OK if cert.residual < args.tol else EXIT_NOCONV


def cmd_spectral_rank1(args) -> int:
    rep = Report("spectral rank1", args.seed)
    T = _read_tensor(rep, args.tensor).to_float()
    fit = best_rank1(T, _cfg(args))
    rep.add("sigma", fit.sigma)
    rep.add("approx_error", fit.approx_error)
    rep.add("residual", fit.certificate.residual)
    rep.add("u", fit.u)
    rep.add("v", fit.v)
    rep.add("w", fit.w)
    _emit(args, rep)
    return EXIT_OK if fit.certificate.residual < args.tol else EXIT_NOCONV


def cmd_spectral_eig(args) -> int:
    rep = Report("spectral eig", args.seed)
    T = _read_tensor(rep, args.tensor).to_float()
    pairs = find_eigenpairs_small(T, args.variant, _cfg(args))
    rep.add("variant", args.variant)
    rep.add("count", len(pairs))
    for idx, p in enumerate(pairs):
        rep.add(f"lambda_{idx}", p.lam)
        rep.add(f"x_{idx}", p.x)
    _emit(args, rep)
    return EXIT_OK


# -- graph ----------------------------------------------------------------------


def cmd_graph_omega(args) -> int:
    rep = Report("graph omega", None)
    g = _read_graph(rep, args.graph)
    rep.add("omega", gadgets.clique_number(g))
    _emit(args, rep)
    return EXIT_OK


def cmd_graph_motzkin(args) -> int:
    rep = Report("graph motzkin", None)
    g = _read_graph(rep, args.graph)
    omega = gadgets.clique_number(g)
    value = gadgets.motzkin_straus_value(g)
    rep.add("motzkin_straus_value", value)
    rep.add("omega", omega)
    rep.add("identity_check", str(2 * value == 1 - Fraction(1, omega)).lower())
    _emit(args, rep)
    return EXIT_OK


# -- gadget ---------------------------------------------------------------------


def cmd_gadget_color_encode(args) -> int:
    rep = Report("gadget color-encode", None)
    g = _read_graph(rep, args.graph)
    qs = gadgets.color_encode(g, args.edge_form)
    rep.add("equations", qs.num_equations)
    rep.add("variables", qs.dim)
    if args.result:
        save_tensor(qs.to_tensor(), args.result)
        rep.add("result_path", args.result)
    _emit(args, rep)
    return EXIT_OK


def cmd_gadget_pipeline(args) -> int:
    rep = Report("gadget pipeline", args.seed)
    g = _read_graph(rep, args.graph)
    qs = gadgets.threecolor_qf_pipeline(g)
    rep.add("equations", qs.num_equations)
    rep.add("variables", qs.dim)
    hit = feasibility_search(qs, _cfg(args))
    rep.add("feasible", str(hit is not None).lower())
    if hit is not None:
        rep.add("residual", hit.residual)
        rep.add("restart", hit.restart)
    if args.result:
        save_tensor(qs.to_tensor(), args.result)
        rep.add("result_path", args.result)
    _emit(args, rep)
    return EXIT_OK if hit is not None else EXIT_NEGATIVE


def cmd_gadget_clique_tensor(args) -> int:
    rep = Report("gadget clique-tensor", None)
    g = _read_graph(rep, args.graph)
    T = gadgets.clique_tensor(g, args.ell)
    rep.add("ell", args.ell)
    rep.add("dims", "x".join(str(d) for d in T.dims))
    if args.result:
        save_tensor(T, args.result)
        rep.add("result_path", args.result)
    _emit(args, rep)
    return EXIT_OK


def cmd_gadget_tqf(args) -> int:
    rep = Report("gadget tqf", None)
    g = _read_graph(rep, args.graph)
    T = gadgets.tqf_tensor(g)
    if args.complexify:
        T = gadgets.tensor_complexify(T)
    rep.add("dims", "x".join(str(d) for d in T.dims))
    if args.result:
        save_tensor(T, args.result)
        rep.add("result_path", args.result)
    _emit(args, rep)
    return EXIT_OK


def cmd_gadget_3qf_run(args) -> int:
    rep = Report("gadget 3qf-run", args.seed)
    T = _read_tensor(rep, args.system)
    try:
        qs = QuadraticSystem.from_tensor(T)
    except (TypeError, ValueError) as e:
        raise CliError(f"{args.system}: {e}") from e
    if qs.num_equations != qs.dim:
        raise CliError(
            f"{args.system}: square system required, got {qs.num_equations} "
            f"equations in {qs.dim} variables"
        )
    cfg = _cfg(args)

    def oracle(ts) -> bool:
        return feasibility_search(ts, cfg) is not None

    verdict = gadgets.qf_via_3qf(qs, oracle)
    rep.add("feasible", str(verdict.feasible).lower())
    rep.add("oracle_queries", verdict.queries)
    rep.add("query_budget", qs.dim + 2)
    _emit(args, rep)
    return EXIT_OK if verdict.feasible else EXIT_NEGATIVE


# -- hyperdet -------------------------------------------------------------------


def cmd_hyperdet_det(args) -> int:
    rep = Report("hyperdet det", None)
    T = _read_tensor(rep, args.tensor)
    try:
        value = hyperdet.det222(T)
    except ValueError as e:
        raise CliError(str(e)) from e
    rep.add("det222", value)
    _emit(args, rep)
    return EXIT_OK


def cmd_hyperdet_solve(args) -> int:
    rep = Report("hyperdet solve", None)
    T = _read_tensor(rep, args.tensor)
    try:
        wit = hyperdet.bilinear_solve_222(T)
    except ValueError as e:
        raise CliError(str(e)) from e
    rep.add("solvable", str(wit is not None).lower())
    if wit is not None:
        rep.add("residual", wit.residual)
        for name, vec in (("x", wit.x), ("y", wit.y), ("z", wit.z)):
            rep.add(f"{name}_re", vec.real)
            rep.add(f"{name}_im", vec.imag)
    _emit(args, rep)
    return EXIT_OK if wit is not None else EXIT_NEGATIVE


# -- rank -----------------------------------------------------------------------


def cmd_rank_bounds(args) -> int:
    rep = Report("rank bounds", args.seed)
    T = _read_tensor(rep, args.tensor)
    if T.kind != RATIONAL:
        raise CliError("rank bounds need a rational tensor (exact flattenings)")
    bounds = rank.rank_bounds(T, _cfg(args), r_max=args.rmax)
    rep.add("lower", bounds.lower)
    rep.add("upper", "none" if bounds.upper is None else bounds.upper)
    rep.add("certified", str(bounds.certified).lower())
    _emit(args, rep)
    return EXIT_OK


def cmd_rank_border_demo(args) -> int:
    rep = Report("rank border-demo", args.seed)
    inst = rank.border_rank_family(args.n)
    gap = rank.frobenius_norm_sq(inst.A_n - inst.A)
    rep.add("n", args.n)
    rep.add("gap_norm_sq", gap)
    rep.add("gap_identity", str(gap * args.n * args.n == 1).lower())
    rep.add("flattening_ranks", ",".join(str(r) for r in rank.flattening_ranks(inst.A)))
    cfg = _cfg(args)
    res2 = rank.als_fit(inst.A, 2, cfg, factor_cap=args.cap)
    res3 = rank.als_fit(inst.A, 3, cfg, factor_cap=args.cap)
    rep.add("als_r2_residual", res2)
    rep.add("als_r3_residual", res3)
    _emit(args, rep)
    return EXIT_OK


def cmd_rank_rational_demo(args) -> int:
    rep = Report("rank rational-demo", args.seed)
    report = rank.rational_rank_demo(seed=args.seed, runs=args.runs, grid_height=args.grid_height)
    rep.add("identity_residual", report.identity_residual)
    rep.add("solver_runs", report.runs)
    rep.add("solutions_found", report.solutions_found)
    rep.add("max_cert_residual_1", report.max_cert1)
    rep.add("max_cert_residual_2", report.max_cert2)
    rep.add("all_certified", str(report.all_certified).lower())
    rep.add("flattening_lower", report.flattening_lower)
    rep.add("grid_directions_tried", report.grid_tried)
    rep.add("grid_rational_rank2_found", str(report.grid_found).lower())
    _emit(args, rep)
    ok = report.all_certified and not report.grid_found and report.identity_residual < 1e-12
    return EXIT_OK if ok else EXIT_NEGATIVE


# -- parser ---------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--max-iters", type=int, default=500, dest="max_iters")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--format", choices=["text", "machine"], default="text")
    p.add_argument("--out", default=None, help="write the report to this file")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="trilab", description=__doc__)
    groups = top.add_subparsers(dest="group", required=True)

    tensor = groups.add_parser("tensor").add_subparsers(dest="sub", required=True)
    p = tensor.add_parser("info")
    p.add_argument("tensor")
    _add_common(p)
    p.set_defaults(fn=cmd_tensor_info)
    p = tensor.add_parser("norm")
    p.add_argument("tensor")
    _add_common(p)
    p.set_defaults(fn=cmd_tensor_norm)
    p = tensor.add_parser("mlmul")
    p.add_argument("tensor")
    p.add_argument("--x", default=None, help="matrix file (JSON rows), default identity")
    p.add_argument("--y", default=None)
    p.add_argument("--z", default=None)
    p.add_argument("--result", default=None, help="write the product tensor here")
    _add_common(p)
    p.set_defaults(fn=cmd_tensor_mlmul)

    spectral = groups.add_parser("spectral").add_subparsers(dest="sub", required=True)
    p = spectral.add_parser("norm")
    p.add_argument("tensor")
    _add_common(p)
    p.set_defaults(fn=cmd_spectral_norm)
    p = spectral.add_parser("rank1")
    p.add_argument("tensor")
    _add_common(p)
    p.set_defaults(fn=cmd_spectral_rank1)
    p = spectral.add_parser("eig")
    p.add_argument("tensor")
    p.add_argument("--variant", choices=["l2", "l3"], default="l2")
    _add_common(p)
    p.set_defaults(fn=cmd_spectral_eig)

    graph = groups.add_parser("graph").add_subparsers(dest="sub", required=True)
    p = graph.add_parser("omega")
    p.add_argument("graph")
    _add_common(p)
    p.set_defaults(fn=cmd_graph_omega)
    p = graph.add_parser("motzkin")
    p.add_argument("graph")
    _add_common(p)
    p.set_defaults(fn=cmd_graph_motzkin)

    gadget = groups.add_parser("gadget").add_subparsers(dest="sub", required=True)
    p = gadget.add_parser("color-encode")
    p.add_argument("graph")
    p.add_argument("--edge-form", choices=[EDGE_FORM_MINORS, EDGE_FORM_AGGREGATED],
                   default=EDGE_FORM_MINORS, dest="edge_form")
    p.add_argument("--result", default=None, help="write the stacked system tensor here")
    _add_common(p)
    p.set_defaults(fn=cmd_gadget_color_encode)
    p = gadget.add_parser("pipeline")
    p.add_argument("graph")
    p.add_argument("--result", default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_gadget_pipeline)
    p = gadget.add_parser("clique-tensor")
    p.add_argument("graph")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--result", default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_gadget_clique_tensor)
    p = gadget.add_parser("tqf")
    p.add_argument("graph")
    p.add_argument("--complexify", action="store_true")
    p.add_argument("--result", default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_gadget_tqf)
    p = gadget.add_parser("3qf-run")
    p.add_argument("system", help="square quadratic system as a stacked tensor file")
    _add_common(p)
    p.set_defaults(fn=cmd_gadget_3qf_run)

    hd = groups.add_parser("hyperdet").add_subparsers(dest="sub", required=True)
    p = hd.add_parser("det")
    p.add_argument("tensor")
    _add_common(p)
    p.set_defaults(fn=cmd_hyperdet_det)
    p = hd.add_parser("solve")
    p.add_argument("tensor")
    _add_common(p)
    p.set_defaults(fn=cmd_hyperdet_solve)

    rk = groups.add_parser("rank").add_subparsers(dest="sub", required=True)
    p = rk.add_parser("bounds")
    p.add_argument("tensor")
    p.add_argument("--rmax", type=int, default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_rank_bounds)
    p = rk.add_parser("border-demo")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--cap", type=float, default=1e3)
    _add_common(p)
    p.set_defaults(fn=cmd_rank_border_demo)
    p = rk.add_parser("rational-demo")
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--grid-height", type=int, default=2, dest="grid_height")
    _add_common(p)
    p.set_defaults(fn=cmd_rank_rational_demo)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
