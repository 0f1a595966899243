"""Command-line front end: reproducible JSON reports over the library.

Subcommands: isoperimetry, kkl, friedgut, sdp-lift, examples.  Reports
embed the resolved configuration, package version and every tolerance
used, and are byte-identical for identical configuration and seed.
Exit codes: 0 all checks passed, 2 some check failed, 1 usage or I/O
error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .functions import (dictator, from_values, function_from_dict,
                        function_to_dict, parity, random_boolean)
from .gadgets import named_graph
from .graphs import (DenseCapError, cartesian_power, graph_from_dict,
                     graph_to_dict, load_graph)
from .influence import corollary_check, friedgut_extract, is_junta_on, kkl_report
from .isoperimetry import (chain_check, conductance_bruteforce,
                           log_sobolev_estimate, product_scaling_report)
from .sdp import (basic_sdp_opt, check_triangle, lasserre_from_dict,
                  lasserre_from_distribution, lasserre_to_dict,
                  lift_lasserre, lift_sherali_adams, lift_vectors,
                  sa_from_dict, sa_from_distribution, sa_to_dict,
                  sdp_from_dict, sdp_to_dict, uniform_cut_distribution,
                  vectors_from_distribution, vectors_from_local_tables)
from .spectral import eigendecompose

TOLERANCES = {
    "ratio_abs": 1e-9,
    "check_abs": 1e-9,
    "alpha_chain_rel": 0.02,
    "alpha_ratio_rel": 0.05,
}

T_SWEEP = (math.exp(-2.0), 0.05, 0.01)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="analyze", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("isoperimetry", "kkl", "friedgut", "sdp-lift", "examples"):
        cmd = sub.add_parser(name)
        cmd.add_argument("--graph", help="graph JSON file")
        cmd.add_argument("--builtin", help="builtin graph: k2|kq:q|cycle:n|path:n|necklace:R")
        cmd.add_argument("--k", type=int, default=2, help="Cartesian power")
        cmd.add_argument("--epsilon", type=float, default=0.1)
        cmd.add_argument("--t-level", type=int, default=2, dest="t_level")
        cmd.add_argument("--samples", type=int, default=100_000)
        cmd.add_argument("--seed", type=int, default=0)
        cmd.add_argument("--out", help="write the report here instead of stdout")
        cmd.add_argument("--max-dense", type=int, default=1 << 22, dest="max_dense")
        if name in ("kkl", "friedgut"):
            cmd.add_argument("--function", help="function JSON file")
            cmd.add_argument("--fn", default="random",
                             help="builtin function: dictator|parity|random")
        if name == "sdp-lift":
            cmd.add_argument("--sdp-file", dest="sdp_file")
            cmd.add_argument("--sa-file", dest="sa_file")
            cmd.add_argument("--lasserre-file", dest="lasserre_file")
    return parser


def _resolve_graph(args):
    if args.graph and args.builtin:
        raise UsageError("give either --graph or --builtin, not both")
    if args.graph:
        return load_graph(args.graph)
    name = args.builtin or "k2"
    return named_graph(name)


def _resolve_function(args, product):
    if getattr(args, "function", None):
        with open(args.function) as fh:
            return function_from_dict(json.load(fh), product)
    kind = getattr(args, "fn", "random")
    if kind == "dictator":
        return dictator(product, 0)
    if kind == "parity":
        return parity(product)
    if kind == "random":
        return random_boolean(product, np.random.default_rng(args.seed))
    raise UsageError(f"unknown builtin function {kind!r}")


def _config_dict(args) -> dict:
    # --out is where the report goes, not what it computes; leaving it out
    # keeps reports byte-identical across destinations
    keys = ("command", "graph", "builtin", "k", "epsilon", "t_level", "samples",
            "seed", "max_dense", "function", "fn", "sdp_file", "sa_file",
            "lasserre_file")
    return {key: getattr(args, key, None) for key in keys}


def _certified_alpha(graph):
    """Exact constant for the single-edge base; otherwise an estimate."""
    if graph.n == 2 and graph.num_edges == 1:
        return 2.0, "certified"
    return None, "estimated"


def _check(name, passed, detail):
    return {"name": name, "passed": bool(passed), "detail": detail}


def cmd_isoperimetry(args) -> dict:
    base = _resolve_graph(args)
    rep = product_scaling_report(base, args.k, seed=args.seed)
    checks = []
    if rep.phi_ratio is not None:
        checks.append(_check(
            "phi_ratio_is_1_over_k",
            abs(rep.phi_ratio - 1.0 / args.k) <= TOLERANCES["ratio_abs"],
            {"phi_ratio": rep.phi_ratio, "expected": 1.0 / args.k}))
    checks.append(_check(
        "lambda1_ratio_is_1_over_k",
        abs(rep.lambda1_ratio - 1.0 / args.k) <= TOLERANCES["ratio_abs"],
        {"lambda1_ratio": rep.lambda1_ratio}))
    if rep.alpha_ratio is not None:
        checks.append(_check(
            "alpha_ratio_near_1_over_k",
            abs(rep.alpha_ratio * args.k - 1.0) <= TOLERANCES["alpha_ratio_rel"],
            {"alpha_ratio": rep.alpha_ratio}))
    if base.n <= 25:
        chain = chain_check(base, seed=args.seed)
        checks.append(_check("chain_base", chain.chain_ok, {
            "alpha_hat": chain.alpha_hat, "lambda1": chain.lambda1,
            "phi": chain.phi}))
    if base.n ** args.k <= 25:
        chain_p = chain_check(cartesian_power(base, args.k), seed=args.seed)
        checks.append(_check("chain_product", chain_p.chain_ok, {
            "alpha_hat": chain_p.alpha_hat, "lambda1": chain_p.lambda1,
            "phi": chain_p.phi}))
    results = {
        "phi_base": rep.phi_base,
        "phi_product": rep.phi_product,
        "lambda1_base": rep.lambda1_base,
        "lambda1_product": rep.lambda1_product,
        "alpha_base": rep.alpha_base,
        "alpha_product": rep.alpha_product,
        "partial": rep.partial,
    }
    return {"results": results, "checks": checks}


def cmd_kkl(args) -> dict:
    base = _resolve_graph(args)
    product = cartesian_power(base, args.k, dense_cap=args.max_dense)
    f = _resolve_function(args, product)
    alpha, label = _certified_alpha(base)
    if alpha is None:
        alpha = log_sobolev_estimate(base, seed=args.seed).alpha_hat
    try:
        rep = kkl_report(f, alpha)
    except ValueError as exc:
        return {"results": {"status": "error", "error": str(exc)},
                "checks": [_check("influence_report", False, str(exc))]}
    basis = eigendecompose(base)
    sweep = []
    all_ok = True
    for t in T_SWEEP:
        rows = corollary_check(f, t, alpha, basis=basis)
        ok = all(r.ok for r in rows)
        all_ok &= ok
        sweep.append({"t": t, "ok": ok,
                      "rows": [{"j": r.j, "lhs": r.lhs, "rhs": r.rhs} for r in rows]})
    checks = [
        _check("max_influence_ge_mean",
               rep.max_influence >= rep.mean_influence - TOLERANCES["check_abs"],
               {"max": rep.max_influence, "mean": rep.mean_influence}),
        _check("corollary_sweep", all_ok, {"t_values": list(T_SWEEP)}),
    ]
    results = {
        "alpha": alpha,
        "alpha_label": label,
        "influences": [float(x) for x in rep.influences],
        "max_influence": rep.max_influence,
        "mean_influence": rep.mean_influence,
        "variance": rep.variance,
        "bound_expr": rep.bound_expr,
        "ratio": rep.ratio,
        "corollary": sweep,
    }
    return {"results": results, "checks": checks}


def cmd_friedgut(args) -> dict:
    base = _resolve_graph(args)
    product = cartesian_power(base, args.k, dense_cap=args.max_dense)
    f = _resolve_function(args, product)
    alpha, label = _certified_alpha(base)
    if alpha is None:
        alpha = log_sobolev_estimate(base, seed=args.seed).alpha_hat
    phi, _ = conductance_bruteforce(base)
    res = friedgut_extract(f, args.epsilon, alpha, phi)
    checks = [
        _check("distance_le_epsilon",
               res.distance <= args.epsilon + TOLERANCES["check_abs"],
               {"distance": res.distance, "epsilon": args.epsilon}),
        _check("junta_size_bound",
               (len(res.junta) == 0
                or math.log(len(res.junta)) <= res.size_bound_log
                + TOLERANCES["check_abs"]),
               {"size": len(res.junta), "bound_log": res.size_bound_log}),
        _check("depends_only_on_junta", is_junta_on(res.g_tilde, res.junta),
               {"junta": list(res.junta)}),
    ]
    results = {
        "alpha": alpha,
        "alpha_label": label,
        "phi": phi,
        "junta": list(res.junta),
        "distance": res.distance,
        "threshold": res.threshold,
        "size_bound_log": res.size_bound_log,
        "dirichlet": res.dirichlet,
        "coordinate_variances": [float(x) for x in res.coordinate_variances],
    }
    return {"results": results, "checks": checks}


def cmd_sdp_lift(args) -> dict:
    base = _resolve_graph(args)
    product = cartesian_power(base, args.k, dense_cap=args.max_dense)
    dense = product.to_weighted_graph()
    checks = []
    results = {}

    if args.sdp_file:
        sol = sdp_from_dict(_load_json(args.sdp_file))
    else:
        _, sol = basic_sdp_opt(base)
    base_obj = sol.objective(base)
    lifted = lift_vectors(sol, product)
    lifted_obj = lifted.objective(dense)
    results["objective_base"] = base_obj
    results["objective_lifted"] = lifted_obj
    results["spread_lifted"] = lifted.spread(dense)
    checks.append(_check(
        "lifted_objective_is_base_over_k",
        abs(lifted_obj - base_obj / args.k) <= TOLERANCES["check_abs"],
        {"lifted": lifted_obj, "base_over_k": base_obj / args.k}))
    tri_base = check_triangle(sol, seed=args.seed)
    tri = check_triangle(lifted, seed=args.seed)
    results["triangle_violations_base"] = tri_base.count
    results["triangle_violations_lifted"] = tri.count
    checks.append(_check(
        "triangle_preserved",
        tri.count == 0 or tri_base.count > 0,
        {"base": tri_base.count, "lifted": tri.count, "partial": tri.partial}))

    phi, witness = conductance_bruteforce(base)
    cut_dist = uniform_cut_distribution(base.n, witness)
    if args.sa_file:
        ld = sa_from_dict(_load_json(args.sa_file))
        # pair the tables with vectors factored from their own moments so
        # the SA file is self-contained
        sa_vecs = vectors_from_local_tables(ld, base.n)
    else:
        ld = sa_from_distribution(cut_dist, base.n, args.t_level)
        sa_vecs = vectors_from_distribution(cut_dist)
    _, _, marginal_gap, vector_gap = lift_sherali_adams(ld, sa_vecs, product)
    results["sa_marginal_gap"] = marginal_gap
    results["sa_vector_gap"] = vector_gap
    checks.append(_check("sa_consistency",
                         marginal_gap <= TOLERANCES["check_abs"]
                         and vector_gap <= TOLERANCES["check_abs"],
                         {"marginal_gap": marginal_gap, "vector_gap": vector_gap}))

    if args.lasserre_file:
        ls = lasserre_from_dict(_load_json(args.lasserre_file))
    else:
        ls = lasserre_from_distribution(cut_dist, base.n, args.t_level)
    lifted_ls = lift_lasserre(ls, product, min(args.t_level, ls.level))
    delta_gap = lifted_ls.check_delta_consistency()
    results["lasserre_delta_gap"] = delta_gap
    checks.append(_check("lasserre_delta_consistency",
                         delta_gap <= TOLERANCES["check_abs"],
                         {"delta_gap": delta_gap}))
    return {"results": results, "checks": checks}


def cmd_examples(args) -> dict:
    out_dir = args.out or "."
    os.makedirs(out_dir, exist_ok=True)
    from .graphs import complete_graph, path_graph

    written = []

    def emit(name, data):
        path = os.path.join(out_dir, name)
        with open(path, "w") as fh:
            json.dump(data, fh, sort_keys=True, indent=2)
            fh.write("\n")
        written.append(name)

    k2 = complete_graph(2)
    emit("k2.graph.json", graph_to_dict(k2))
    emit("p3.graph.json", graph_to_dict(path_graph(3)))
    product = cartesian_power(k2, args.k)
    emit(f"dictator.k{args.k}.function.json",
         function_to_dict(dictator(product, 0)))
    _, sol = basic_sdp_opt(k2)
    emit("k2.sdp.json", sdp_to_dict(sol))
    dist = uniform_cut_distribution(2, (0,))
    emit("k2.sa.json", sa_to_dict(sa_from_distribution(dist, 2, args.t_level)))
    emit("k2.lasserre.json",
         lasserre_to_dict(lasserre_from_distribution(dist, 2, args.t_level)))
    return {"results": {"written": written, "directory": out_dir}, "checks": []}


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


_COMMANDS = {
    "isoperimetry": cmd_isoperimetry,
    "kkl": cmd_kkl,
    "friedgut": cmd_friedgut,
    "sdp-lift": cmd_sdp_lift,
    "examples": cmd_examples,
}


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        body = _COMMANDS[args.command](args)
    except (UsageError, OSError, json.JSONDecodeError, ValueError,
            DenseCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    passed = all(check["passed"] for check in body["checks"])
    if "status" in body.get("results", {}):
        passed = passed and body["results"]["status"] != "error"
    report = {
        "command": args.command,
        "config": _config_dict(args),
        "version": __version__,
        "tolerances": TOLERANCES,
        "results": body["results"],
        "checks": body["checks"],
        "passed": passed,
    }
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.command == "examples" and args.out:
        # example files already live in --out; report goes to stdout
        sys.stdout.write(text)
    elif args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if passed else 2


def main():  # pragma: no cover - console entry point
    raise SystemExit(run())
