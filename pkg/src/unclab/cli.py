"""Command line front end. Every verb prints canonical JSON on stdout.

Reports carry the verb, the echoed inputs, exact-rational values with their
witnesses, the method used, and the package version. Wall-clock time is
opt-in through --timing because reports must be byte-stable across runs.

Exit codes: 0 success, 1 domain/size errors, 2 missing inputs (shared with
the argument parser's own usage failures), 3 malformed rationals, 4 schema
errors in input documents.
"""

from __future__ import annotations

import functools
import random
import sys
import time

import click

from . import __version__
from . import serialize as ser
from .constants import ConstantQuery, compute_constant
from .elton import EltonParams, k_lower_certificate, quasi_certificate
from .errors import DomainError, MissingInputError, UnclabError
from .mrdemo import mr_demo
from .norms import dual_certificate, eval_norm
from .ramsey import remark_family, search_matching, weakly_hereditary
from .rationals import parse_rational
from .resolutions import (build_rademacher, bracket, choose_multiplicities,
                          longest_chain, mutual_bracket, rademacher_bound,
                          ris_condition)

_SHORT_CLASS = {"initial_segments": "initial", "intervals": "interval",
                "all_subsets": "all"}


def _echo_json(data) -> None:
    click.echo(ser.dump_json(data), nl=False)


def _finish(verb: str, inputs: dict, out: dict, timing: bool, t0: float) -> None:
    report = {"verb": verb, "version": __version__, "inputs": inputs, **out}
    if timing:
        report["wall_ms"] = int((time.monotonic() - t0) * 1000)
    _echo_json(report)


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except UnclabError as e:
            click.echo(ser.dump_json({"error": str(e),
                                      "kind": type(e).__name__}),
                       nl=False, err=True)
            sys.exit(e.exit_code)
    return wrapper


def _align_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip()]
    lines.append("  ".join("─" * w for w in widths))
    for row in rows:
        lines.append("  ".join(
            cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines)


@click.group()
def main():
    """Exact-rational workbench for sequence-space combinatorics."""


@main.command("bracket")
@click.argument("left_path", metavar="LEFT", type=click.Path())
@click.argument("right_path", metavar="RIGHT", type=click.Path())
@click.option("--method", type=click.Choice(["dp", "brute"]), default="dp")
@click.option("--mutual", is_flag=True, help="symmetrized value")
@click.option("--timing", is_flag=True)
@handle_errors
def bracket_cmd(left_path, right_path, method, mutual, timing):
    """Weighted matching value of two resolutions."""
    t0 = time.monotonic()
    r = ser.load_resolution(ser.read_json_file(left_path), "left")
    s = ser.load_resolution(ser.read_json_file(right_path), "right")
    inputs = {"left": left_path, "right": right_path, "mutual": mutual}
    if mutual:
        lr, lr_wit = bracket(r, s, method)
        rl, rl_wit = bracket(s, r, method)
        out = {"value": max(lr, rl), "left_right": lr, "right_left": rl,
               "witness_direction": "left_right" if lr >= rl else "right_left",
               "witness": [list(p) for p in (lr_wit if lr >= rl else rl_wit)]}
    else:
        value, wit = bracket(r, s, method)
        out = {"value": value, "witness": [list(p) for p in wit]}
    out["method"] = method
    _finish("bracket", inputs, out, timing, t0)


@main.command()
@click.option("--k0", type=int, required=True)
@click.option("--m", type=int, required=True, help="number of levels")
@click.option("--n", type=int, required=True, help="base multiplicity")
@click.option("--ns", "ns_text", default=None,
              help="comma separated multiplicities, e.g. 1,17")
@click.option("--auto-ns", is_flag=True,
              help="greedy minimal multiplicities for this k0")
@click.option("--table", "as_table", is_flag=True)
@click.option("--timing", is_flag=True)
@handle_errors
def rademacher(k0, m, n, ns_text, auto_ns, as_table, timing):
    """Pairwise interaction table for a Rademacher-class family."""
    t0 = time.monotonic()
    if (ns_text is None) == (not auto_ns):
        raise DomainError("give exactly one of --ns or --auto-ns")
    if auto_ns:
        ns = choose_multiplicities(k0)
    else:
        try:
            ns = tuple(int(x) for x in ns_text.split(","))
        except ValueError:
            raise DomainError(f"--ns must be comma separated integers, got {ns_text!r}")
    if m < 1:
        raise DomainError("need m >= 1 levels")
    mults = [n * k0 ** (m - l) for l in range(1, m + 1)]
    family = [build_rademacher(k0, ns, mults[l - 1], l) for l in range(1, m + 1)]
    labels = [f"R(n={mults[l - 1]},l={l})" for l in range(1, m + 1)]
    matrix = [[mutual_bracket(a, b) for b in family] for a in family]
    off_diag = [matrix[i][j] for i in range(m) for j in range(m) if i != j]
    out = {
        "ris_condition": ris_condition(k0, ns),
        "labels": labels,
        "lengths": [len(r) for r in family],
        "pairwise": matrix,
        "max_diagonal": max(matrix[i][i] for i in range(m)),
        "max_off_diagonal": max(off_diag) if off_diag else None,
        "bound_same_level": rademacher_bound(k0, ns, 1, 1),
        "bound_cross_levels": rademacher_bound(k0, ns, 1, 2) if m > 1 else None,
    }
    if as_table:
        headers = [""] + labels
        rows = [[labels[i]] + [str(v) for v in matrix[i]] for i in range(m)]
        click.echo(_align_table(headers, rows))
        click.echo(f"same-level bound   {out['bound_same_level']}")
        if out["bound_cross_levels"] is not None:
            click.echo(f"cross-level bound  {out['bound_cross_levels']}")
        if timing:
            click.echo(f"wall_ms            {int((time.monotonic() - t0) * 1000)}")
        return
    _finish("rademacher", {"k0": k0, "m": m, "n": n, "ns": list(ns)},
            out, timing, t0)


@main.command()
@click.option("--patterns", "patterns_path", required=True, type=click.Path())
@click.option("--k", type=int, required=True)
@click.option("--timing", is_flag=True)
@handle_errors
def chain(patterns_path, k, timing):
    """Longest embedding chain among colour patterns."""
    t0 = time.monotonic()
    data = ser.read_json_file(patterns_path)
    if not isinstance(data, list):
        raise ser.SchemaError("patterns: expected a list of colour lists")
    patterns = [tuple(ser._as_int_list(p, f"patterns[{i}]"))
                for i, p in enumerate(data)]
    indices = longest_chain(patterns, k)
    out = {"count": len(patterns), "length": len(indices),
           "chain": indices,
           "chain_patterns": [list(patterns[i]) for i in indices]}
    _finish("chain", {"patterns": patterns_path, "k": k}, out, timing, t0)


@main.command()
@click.option("--instance", "instance_path", required=True, type=click.Path())
@click.option("--vector", "vector_path", required=True, type=click.Path())
@click.option("--timing", is_flag=True)
@handle_errors
def norm(instance_path, vector_path, timing):
    """Evaluate an instance norm on a vector, with the attaining functional."""
    t0 = time.monotonic()
    inst = ser.load_norm_instance(ser.read_json_file(instance_path))
    v = ser.load_sparse_vector(ser.read_json_file(vector_path))
    value = eval_norm(inst, v)
    out = {"value": value, "dim": inst.dim,
           "projection_class": _SHORT_CLASS[inst.projection_class],
           "certificate": dual_certificate(inst, v)}
    _finish("norm", {"instance": instance_path, "vector": vector_path},
            out, timing, t0)


@main.command()
@click.option("--instance", "instance_path", required=True, type=click.Path())
@click.option("--mode", required=True)
@click.option("--delta", "delta_text", default=None)
@click.option("--D", "big_d_text", default=None)
@click.option("--d", "small_d_text", default=None)
@click.option("--order", type=int, default=None)
@click.option("--method", type=click.Choice(["grid", "lp"]), default="grid")
@click.option("--step", "step_text", default="1/8")
@click.option("--timing", is_flag=True)
@handle_errors
def constant(instance_path, mode, delta_text, big_d_text, small_d_text,
             order, method, step_text, timing):
    """Extremal constant of an instance norm in the given mode."""
    t0 = time.monotonic()
    inst = ser.load_norm_instance(ser.read_json_file(instance_path))
    query = ConstantQuery(
        mode=mode,
        delta=parse_rational(delta_text) if delta_text is not None else None,
        D=parse_rational(big_d_text) if big_d_text is not None else None,
        d=parse_rational(small_d_text) if small_d_text is not None else None,
        order=order,
    )
    method_name = "fractional_lp" if method == "lp" else method
    report = compute_constant(inst, query, method=method_name,
                              step=parse_rational(step_text))
    inputs = {"instance": instance_path, "mode": mode, "method": method_name,
              "step": parse_rational(step_text)}
    _finish("constant", inputs, dict(ser.to_jsonable(report)), timing, t0)


@main.command()
@click.option("--n1", type=int, required=True)
@click.option("--n2", type=int, required=True)
@click.option("--K", "big_k", type=int, required=True)
@click.option("--eps", "eps_text", required=True)
@click.option("--m1", type=int, default=1)
@click.option("--m2", type=int, default=2)
@click.option("--timing", is_flag=True)
@handle_errors
def elton(n1, n2, big_k, eps_text, m1, m2, timing):
    """Certified norm-ratio lower bound for a two-scale layout."""
    t0 = time.monotonic()
    eps = parse_rational(eps_text)
    p = EltonParams(n1, n2, big_k, eps, m1, m2)
    cert = k_lower_certificate(p)
    out = dict(cert)
    out["ratio"] = cert["ratio_case"]
    _finish("elton", {"n1": n1, "n2": n2, "K": big_k, "eps": eps,
                      "m1": m1, "m2": m2}, out, timing, t0)


@main.command()
@click.option("--n1", type=int, required=True)
@click.option("--n2", type=int, required=True)
@click.option("--K", "big_k", type=int, required=True)
@click.option("--eps", "eps_text", required=True)
@click.option("--alpha", "alpha_text", required=True)
@click.option("--m1", type=int, default=1)
@click.option("--m2", type=int, default=2)
@click.option("--timing", is_flag=True)
@handle_errors
def quasi(n1, n2, big_k, eps_text, alpha_text, m1, m2, timing):
    """Quasi-variant certificate with the threshold-projection diagnosis."""
    t0 = time.monotonic()
    eps = parse_rational(eps_text)
    alpha = parse_rational(alpha_text)
    p = EltonParams(n1, n2, big_k, eps, m1, m2)
    cert = quasi_certificate(p, alpha)
    out = dict(cert)
    out["ratio"] = cert["ratio_lower"]
    _finish("quasi", {"n1": n1, "n2": n2, "K": big_k, "eps": eps,
                      "alpha": alpha, "m1": m1, "m2": m2}, out, timing, t0)


@main.command("mr-demo")
@click.option("--family", "family_path", required=True, type=click.Path())
@click.option("--k", type=int, required=True)
@click.option("--seed", type=int, required=True)
@click.option("--timing", is_flag=True)
@handle_errors
def mr_demo_cmd(family_path, k, seed, timing):
    """Exploratory alternating-sum demo over a placed special sequence."""
    t0 = time.monotonic()
    family = ser.load_resolution_list(ser.read_json_file(family_path))
    _finish("mr-demo", {"family": family_path, "k": k, "seed": seed},
            mr_demo(family, k, seed), timing, t0)


@main.command()
@click.option("--maps", "maps_path", required=True, type=click.Path(),
              help="prefix-determined map document")
@click.option("--universe", type=int, required=True)
@click.option("--horizon", type=int, default=None,
              help="minimum size of both sets (default: map depth)")
@click.option("--strategy", type=click.Choice(["exhaustive", "random"]),
              default="exhaustive")
@click.option("--seed", type=int, default=None)
@click.option("--budget", type=int, default=200_000)
@click.option("--timing", is_flag=True)
@handle_errors
def match(maps_path, universe, horizon, strategy, seed, budget, timing):
    """Search a universe for a matched pair under a prefix-determined map."""
    t0 = time.monotonic()
    if strategy == "random" and seed is None:
        raise MissingInputError("--seed is required for the random strategy")
    pmap = ser.load_prefix_map(ser.read_json_file(maps_path))
    result = search_matching(pmap, universe, horizon=horizon,
                             strategy=strategy, seed=seed, budget=budget)
    inputs = {"maps": maps_path, "universe": universe, "strategy": strategy}
    if seed is not None:
        inputs["seed"] = seed
    _finish("match", inputs, result, timing, t0)


@main.command()
@click.option("--universe", type=int, required=True)
@click.option("--m1", type=int, default=1)
@click.option("--m2", type=int, default=2)
@click.option("--mode", type=click.Choice(["hereditary", "weakly"]),
              default="hereditary")
@click.option("--restrict", "restrict_text", default=None,
              help="comma separated restriction set, e.g. 1,2,4,7")
@click.option("--samples", type=int, default=None,
              help="check this many random restriction sets")
@click.option("--min-size", type=int, default=8,
              help="minimum size of sampled restriction sets")
@click.option("--seed", type=int, default=None)
@click.option("--timing", is_flag=True)
@handle_errors
def hereditary(universe, m1, m2, mode, restrict_text, samples, min_size,
               seed, timing):
    """Hereditariness of colour-pattern family restrictions."""
    t0 = time.monotonic()
    family = remark_family(universe, m1, m2)
    inputs = {"universe": universe, "m1": m1, "m2": m2, "mode": mode}
    out = {"family_size": len(family.members)}
    if restrict_text is not None:
        try:
            M = sorted(int(x) for x in restrict_text.split(","))
        except ValueError:
            raise DomainError(
                f"--restrict must be comma separated integers, got {restrict_text!r}")
        inputs["restrict"] = M
        out.update(weakly_hereditary(family, M, mode=mode))
    elif samples is not None:
        if seed is None:
            raise MissingInputError("--seed is required with --samples")
        inputs["samples"] = samples
        inputs["seed"] = seed
        rng = random.Random(seed)
        floor = min(min_size, universe)
        runs = []
        for _ in range(samples):
            size = rng.randint(floor, universe)
            M = sorted(rng.sample(range(1, universe + 1), size))
            runs.append({"M": M, **weakly_hereditary(family, M, mode=mode)})
        out["runs"] = runs
        out["all_fail"] = all(r["hereditary"] is False for r in runs)
    else:
        out.update(weakly_hereditary(family, None, mode=mode))
    _finish("hereditary", inputs, out, timing, t0)


if __name__ == "__main__":
    main()
