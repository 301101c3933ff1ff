"""Command-line front door: every library operation as a subcommand.

Results print as human-readable lines on stdout and can additionally be
emitted as --json / --csv files (written atomically, JSON carries a
top-level schema version).  Exit codes: 0 success, 1 usage error,
2 infeasible size, 3 witness-revalidation failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import SCHEMA_VERSION, __version__, _kernels
from .decay import (
    ID_TAU,
    MonomialSeq,
    Tau,
    TauFamily,
    decay_diagnostic,
    le_family,
    rho_symbolic,
    transitivity_check,
)
from .extremal import (
    RATIO_CSV_HEADER,
    FranklParams,
    ak_max,
    conjectured_m0,
    frankl_family,
    frankl_size,
    mt_cross_max,
    ratio_table_m0,
    ratio_table_n1,
)
from .oracle import (
    CONJECTURE_CSV_HEADER,
    InfeasibleSizeError,
    OracleCache,
    OracleLimits,
    WitnessValidationError,
    conjecture_cell_csv_row,
    conjecture_check_m0,
    oracle_cross,
    oracle_m0,
    oracle_max_intersecting,
    oracle_n0,
    oracle_n1,
)
from .pipeline import (
    CLAIM_C5_CSV_HEADER,
    PIPELINE_CSV_HEADER,
    build_pipeline,
    claim_c5_bound_check,
)
from .serialize import write_csv, write_json
from .setfam import (
    Family,
    is_cross_t_intersecting,
    is_t_intersecting,
    m_shade,
    mask_of,
    shade,
)
from .trees import (
    BranchingSpec,
    FiniteTree,
    canonical_colouring,
    density,
    full_tree,
    lemma5_check,
    measure_estimate,
    random_pruned_tree,
    single_branch,
    split_witness,
    splitting_trace,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_WITNESS = 3

DEFAULT_CACHE = Path(os.environ.get("SHADELAB_CACHE",
                                    Path.home() / ".cache" / "shadelab" / "oracle.jsonl"))


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


# ---------------------------------------------------------------- parsing


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    return [int(p) for p in text.split(",")]


def _span(text: str) -> list[int]:
    """'3' -> [3]; '2:6' -> [2..6] inclusive."""
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def _parse_family(text: str, n: int, k: int) -> Family:
    text = text.strip()
    if not text:
        return Family.empty(n, k)
    return Family.from_sets(n, k, (_int_list(part) for part in text.split(";")))


def _spec_from(args) -> BranchingSpec:
    factors = _int_list(args.f)
    depth = getattr(args, "depth", None)
    if len(factors) == 1 and depth is not None:
        return BranchingSpec.constant(factors[0], depth)
    if depth is not None and len(factors) != depth:
        raise ValueError(f"--f lists {len(factors)} factors but --depth is {depth}")
    return BranchingSpec(tuple(factors))


def _tree_from(args, spec: BranchingSpec) -> FiniteTree:
    sources = [bool(args.tree), args.full, args.branch is not None, args.random]
    if sum(sources) != 1:
        raise ValueError("pick exactly one tree source: --tree/--full/--branch/--random")
    if args.tree:
        return FiniteTree.from_json(json.loads(Path(args.tree).read_text()))
    if args.full:
        return full_tree(spec)
    if args.branch is not None:
        return single_branch(spec, _int_list(args.branch))
    if args.seed is None:
        raise ValueError("--random requires an explicit --seed")
    return random_pruned_tree(spec, spec.depth, args.retain, args.seed)


def _limits_from(args) -> OracleLimits:
    base = OracleLimits()
    return OracleLimits(
        clique_universe_cap=getattr(args, "clique_cap", None) or base.clique_universe_cap,
        closure_universe_cap=getattr(args, "closure_cap", None) or base.closure_universe_cap,
        clique_node_budget=base.clique_node_budget,
        bk_node_budget=getattr(args, "bk_budget", None) or base.bk_node_budget,
        closure_op_budget=getattr(args, "closure_budget", None) or base.closure_op_budget,
    )


def _cache_from(args) -> OracleCache | None:
    if getattr(args, "no_cache", False):
        return None
    path = getattr(args, "cache", None)
    return OracleCache(path if path else DEFAULT_CACHE)


def _emit(args, payload: dict, csv_header=None, csv_rows=None) -> None:
    if getattr(args, "json", None):
        write_json(args.json, payload)
    if getattr(args, "csv", None):
        if csv_header is None:
            raise ValueError("this command has no CSV form")
        write_csv(args.csv, csv_header, csv_rows)


def _family_str(fam: Family) -> str:
    if not len(fam):
        return "{}"
    return "{" + ", ".join("{" + ",".join(map(str, s)) + "}" for s in fam.sets()) + "}"


# ---------------------------------------------------------------- commands


def cmd_shade(args) -> int:
    x = mask_of(_int_list(args.set), args.n)
    fam = shade(x, args.n)
    print(f"shade of {{{args.set}}} in [{args.n}]: {_family_str(fam)} (size {len(fam)})")
    _emit(args, {"family": fam.to_json()})
    return EXIT_OK


def cmd_mshade(args) -> int:
    fam = _parse_family(args.family, args.n, args.k)
    out = m_shade(fam, args.m)
    print(f"{args.m}-shade: {_family_str(out)} (size {len(out)})")
    _emit(args, {"family": out.to_json()})
    return EXIT_OK


def cmd_check_intersecting(args) -> int:
    fam = _parse_family(args.family, args.n, args.k)
    if args.family_b is not None:
        other = _parse_family(args.family_b, args.n, args.k_b if args.k_b else args.k)
        verdict = is_cross_t_intersecting(fam, other, args.t)
        label = f"cross-{args.t}-intersecting"
    else:
        verdict = is_t_intersecting(fam, args.t)
        label = f"{args.t}-intersecting"
    print(f"{label}: {'true' if verdict else 'false'}")
    _emit(args, {"result": verdict})
    return EXIT_OK


def cmd_frankl(args) -> int:
    p = FranklParams(args.n, args.k, args.t, args.i)
    fam = frankl_family(p)
    print(f"F_{args.i}({args.n},{args.k},{args.t}): size {frankl_size(p)}")
    if not args.size_only:
        print(_family_str(fam))
    _emit(args, {"size": frankl_size(p), "family": fam.to_json()})
    return EXIT_OK


def cmd_ak_max(args) -> int:
    value = ak_max(args.n, args.k, args.t)
    print(value)
    _emit(args, {"value": value, "params": {"n": args.n, "k": args.k, "t": args.t}})
    return EXIT_OK


def cmd_mt_cross(args) -> int:
    value = mt_cross_max(args.n, args.k, args.l)
    print(value)
    _emit(args, {"value": value, "params": {"n": args.n, "k": args.k, "l": args.l}})
    return EXIT_OK


def cmd_conj_m0(args) -> int:
    value = conjectured_m0(args.n, args.m, args.k, args.t)
    print(value)
    _emit(args, {"value": value,
                 "params": {"n": args.n, "m": args.m, "k": args.k, "t": args.t}})
    return EXIT_OK


_ORACLE_ARITY = {"m": 3, "m0": 4, "cross": 4, "n0": 6, "n1": 4}


def cmd_oracle(args) -> int:
    which = args.which
    params = args.params
    if len(params) != _ORACLE_ARITY[which]:
        raise ValueError(f"oracle {which} takes {_ORACLE_ARITY[which]} integers, got {len(params)}")
    limits, cache = _limits_from(args), _cache_from(args)
    fn = {
        "m": oracle_max_intersecting,
        "m0": oracle_m0,
        "cross": oracle_cross,
        "n0": oracle_n0,
        "n1": oracle_n1,
    }[which]
    res = fn(*params, limits=limits, cache=cache)
    print(f"{res.cache_key}  value={res.value}")
    if isinstance(res.witness, Family):
        print(f"witness: {_family_str(res.witness)}")
    else:
        print(f"witness A: {_family_str(res.witness[0])}")
        print(f"witness B: {_family_str(res.witness[1])}")
    print(f"explored={res.explored} elapsed={res.elapsed:.3f}s backend={_kernels.BACKEND}")
    _emit(args, {"key": res.cache_key, "value": res.value, "witness": res.witness_json(),
                 "explored": res.explored})
    return EXIT_OK


def cmd_ratio(args) -> int:
    k_fn = MonomialSeq(args.k_coeff, args.k_exp)
    t_fn = MonomialSeq(args.t_coeff, args.t_exp)
    limits, cache = _limits_from(args), _cache_from(args)
    if args.which == "m0":
        rows = ratio_table_m0(k_fn, t_fn, args.m, source=args.source, limits=limits, cache=cache)
    else:
        rows = ratio_table_n1(k_fn, t_fn, args.m, limits=limits, cache=cache)
    print(f"# {args.which} ratio table, k={k_fn.label()}, t={t_fn.label()}")
    for row in rows:
        if row.skipped:
            print(f"m={row.m}: skipped ({row.skipped})")
        else:
            print(f"m={row.m} n={row.n} k={row.k} t={row.t} value={row.value} "
                  f"ratio={row.ratio_decimal}")
    _emit(args, {"rows": [r.to_json() for r in rows]},
          RATIO_CSV_HEADER, [r.csv_row() for r in rows])
    return EXIT_OK


def cmd_tree(args) -> int:
    if args.which == "trace":
        if args.branch is None:
            raise ValueError("tree trace needs --branch")
        branch = _int_list(args.branch)
        if args.depth is None and "," not in args.f:
            args.depth = len(branch)  # constant factor: depth implied by the branch
        spec = _spec_from(args)
        colouring = canonical_colouring(spec)
        upto = args.n if args.n is not None else len(branch)
        trace = splitting_trace(colouring, branch, upto + 1)
        print(sorted(trace))
        _emit(args, {"trace": sorted(trace), "branch": branch, "upto": upto})
        return EXIT_OK
    spec = _spec_from(args)
    colouring = canonical_colouring(spec)
    if args.which == "colour":
        depth = args.level if args.level is not None else min(spec.depth, 4)
        shown = full_tree(spec, depth)
        rows = [
            [list(node), colouring.colour(node)]
            for tree_level in range(depth + 1)
            for node in shown.level(tree_level)
        ]
        for node, colour in rows:
            print(f"{tuple(node)}: {colour}")
        _emit(args, {"colouring": colouring.to_json(), "nodes": rows})
        return EXIT_OK

    tree = _tree_from(args, spec)
    if args.which == "density":
        level = args.level if args.level is not None else tree.depth
        value = density(tree, level)
        print(f"density at level {level}: {value} ({float(value):.6g})")
        _emit(args, {"level": level, "density": [value.numerator, value.denominator]})
    elif args.which == "measure":
        value = measure_estimate(tree)
        print(f"measure estimate: {value} ({float(value):.6g})")
        _emit(args, {"measure": [value.numerator, value.denominator]})
    elif args.which == "lemma5":
        rep = lemma5_check(tree, colouring)
        if rep.vacuous:
            print(f"homogeneous levels {list(rep.homogeneous_levels)}: bound vacuous")
        else:
            print(f"homogeneous levels {list(rep.homogeneous_levels)}, "
                  f"density({rep.eval_level}) = {rep.density_at_eval} "
                  f"<= {rep.halving_bound} <= {rep.two_thirds_bound}: "
                  f"{'holds' if rep.holds else 'VIOLATED'}")
        _emit(args, {"report": rep.to_json()})
    elif args.which == "splitwitness":
        levels = _int_list(args.levels) if args.levels else list(range(tree.depth + 1))
        got = split_witness(tree, colouring, levels)
        if got is None:
            print("failure: every listed level is homogeneous")
            _emit(args, {"witness": None})
        else:
            n, t0, t1 = got
            print(f"level {n}: colour0 node {t0}, colour1 node {t1}")
            _emit(args, {"witness": {"level": n, "node0": list(t0), "node1": list(t1)}})
    return EXIT_OK


def cmd_decay(args) -> int:
    if args.which in ("rho", "le"):
        g = MonomialSeq(args.g_coeff, args.g_exp)
        h = MonomialSeq(args.h_coeff, args.h_exp)
        if args.family:
            fam = TauFamily.ID if args.family == "id" else TauFamily.POWERS_BELOW_ONE
            verdict = le_family(g, h, fam)
            print(f"{g.label()} <=_{args.family} {h.label()}: {'true' if verdict else 'false'}")
            _emit(args, {"relation": verdict})
        else:
            tau = Tau(args.alpha) if args.alpha is not None else ID_TAU
            rho = rho_symbolic(g, h, tau)
            if args.which == "rho":
                shown = {"zero": "0", "infinite": "inf"}.get(rho.kind, str(rho.value))
                print(f"rho_{tau.alpha}({g.label()}, {h.label()}) = {shown}")
                _emit(args, {"kind": rho.kind,
                             "value": None if rho.value is None else str(rho.value),
                             "exact": rho.exact})
            else:
                verdict = rho.positive
                print(f"{g.label()} <=_tau {h.label()} (alpha={tau.alpha}): "
                      f"{'true' if verdict else 'false'}")
                _emit(args, {"relation": verdict})
        return EXIT_OK

    # diagnostic
    spec = _spec_from(args)
    if args.full or not (args.tree or args.branch or args.random):
        tree = full_tree(spec)
    else:
        tree = _tree_from(args, spec)
    subtrees = []
    for path in args.subtree or []:
        subtrees.append(FiniteTree.from_json(json.loads(Path(path).read_text())))
    if args.random_subtrees:
        if args.seed is None:
            raise ValueError("--random-subtrees requires an explicit --seed")
        subtrees.extend(
            random_pruned_tree(spec, spec.depth, args.retain, args.seed + i)
            for i in range(args.random_subtrees)
        )
    alphas = [Fraction(a) for a in args.alphas.split(",")] if args.alphas else [Fraction(1, 2)]
    rows = decay_diagnostic(tree, subtrees, alphas, args.threshold)
    for row in rows:
        print(f"subtree {row.subtree_index} alpha={row.alpha}: min ratio "
              f"{float(row.min_ratio):.6g} at level {row.at_level}"
              f"{' FLAGGED' if row.flagged else ''}")
    _emit(args, {"rows": [r.to_json() for r in rows]},
          ["subtree", "alpha", "min_ratio", "at_level", "flagged"],
          [[r.subtree_index, str(r.alpha), f"{float(r.min_ratio):.6g}", r.at_level,
            int(r.flagged)] for r in rows])
    return EXIT_OK


def cmd_pipeline(args) -> int:
    spec = _spec_from(args)
    if args.k_seq:
        k_seq = _int_list(args.k_seq)
    else:
        k_seq = [args.k] * (args.n_max + 1)
    rows = build_pipeline(spec, k_seq, args.beta, args.n_max,
                          limits=_limits_from(args), cache=_cache_from(args))
    for row in rows:
        if row.skipped:
            print(f"n={row.n} m={row.m} |F|={row.colouring_count}: skipped ({row.skipped})")
        else:
            print(f"n={row.n} m={row.m} |F|={row.colouring_count} k={row.k} t={row.t} "
                  f"N1={row.n1} g={row.g} ratio={row.ratio} ({float(row.ratio):.6g})")
    _emit(args, {"rows": [r.to_json() for r in rows]},
          PIPELINE_CSV_HEADER, [r.csv_row() for r in rows])
    return EXIT_OK


def cmd_claim_c5(args) -> int:
    pairs = []
    for chunk in args.pairs.split(";"):
        b, s = chunk.split(",")
        pairs.append((int(b), int(s)))
    rows = claim_c5_bound_check(pairs, args.n, args.m, args.k, args.t,
                                limits=_limits_from(args), cache=_cache_from(args))
    for row in rows:
        print(f"B={row.candidate_count} s={row.shade_size}: {row.status}")
    _emit(args, {"rows": [r.to_json() for r in rows]},
          CLAIM_C5_CSV_HEADER,
          [[r.candidate_count, r.shade_size, r.status] for r in rows])
    return EXIT_OK


def cmd_cache(args) -> int:
    cache = OracleCache(args.cache if args.cache else DEFAULT_CACHE)
    if args.which == "clear":
        cache.clear()
        print(f"cleared {cache.path}")
        return EXIT_OK
    failures = cache.verify()
    print(f"{len(cache)} entries, {len(failures)} failures")
    for key, why in failures:
        print(f"  {key}: {why}")
    _emit(args, {"entries": len(cache), "failures": [list(f) for f in failures]})
    return EXIT_WITNESS if failures else EXIT_OK


# ---------------------------------------------------------------- scan

SCAN_COMMON_KEYS = {"target", "csv", "json", "jobs", "clique_cap", "closure_cap",
                    "bk_budget", "closure_budget", "no_cache", "cache"}

SCAN_TARGET_KEYS = {
    "m": {"n", "k", "t"},
    "m0": {"n", "m", "k", "t"},
    "cross": {"n", "k", "l", "t"},
    "n0": {"n", "mk", "ml", "k", "l", "t"},
    "n1": {"n", "m", "k", "t"},
    "conjecture_m0": {"n", "m", "k", "t"},
    "ratio_m0": {"k_coeff", "k_exp", "t_coeff", "t_exp", "m", "source"},
    "ratio_n1": {"k_coeff", "k_exp", "t_coeff", "t_exp", "m"},
    "pipeline": {"f", "depth", "k_const", "k_seq", "beta", "n_max"},
    "trees": {"f", "depth", "retain", "seed", "count"},
    "decay": {"seed", "count"},
}


def _cfg_range(value) -> list[int]:
    if isinstance(value, int):
        return [value]
    if (isinstance(value, list) and len(value) == 2
            and all(isinstance(v, int) for v in value)):
        return list(range(value[0], value[1] + 1))
    raise ValueError(f"expected an int or [lo, hi] pair, got {value!r}")


def load_scan_config(path: str | Path) -> dict:
    cfg = json.loads(Path(path).read_text())
    if not isinstance(cfg, dict):
        raise ValueError("scan config must be a JSON object")
    target = cfg.get("target")
    if target not in SCAN_TARGET_KEYS:
        raise ValueError(f"unknown scan target {target!r}; "
                         f"expected one of {sorted(SCAN_TARGET_KEYS)}")
    allowed = SCAN_COMMON_KEYS | SCAN_TARGET_KEYS[target]
    unknown = set(cfg) - allowed
    if unknown:
        raise ValueError(f"unknown config keys {sorted(unknown)}; allowed: {sorted(allowed)}")
    return cfg


def _oracle_cell(target: str, params: tuple[int, ...], limits: OracleLimits, cache) -> list:
    fn = {"m": oracle_max_intersecting, "m0": oracle_m0, "cross": oracle_cross,
          "n0": oracle_n0, "n1": oracle_n1}[target]
    try:
        res = fn(*params, limits=limits, cache=cache)
        return [*params, res.value, ""]
    except InfeasibleSizeError as exc:
        return [*params, "", str(exc)]


def _oracle_cell_nocache(packed):
    target, params, limits = packed
    return _oracle_cell(target, params, limits, None)


def _valid_cells(target: str, cfg: dict) -> list[tuple[int, ...]]:
    names = {
        "m": ("n", "k", "t"),
        "m0": ("n", "m", "k", "t"),
        "cross": ("n", "k", "l", "t"),
        "n0": ("n", "mk", "ml", "k", "l", "t"),
        "n1": ("n", "m", "k", "t"),
        "conjecture_m0": ("n", "m", "k", "t"),
    }[target]
    spans = []
    for name in names:
        if name not in cfg:
            raise ValueError(f"scan target {target!r} needs the key {name!r}")
        spans.append(_cfg_range(cfg[name]))
    cells = []

    def ok(cell: dict) -> bool:
        if target in ("m", "m0", "n1", "conjecture_m0"):
            kk, tt, nn = cell["k"], cell["t"], cell["n"]
            if not 1 <= tt <= kk <= nn:
                return False
            if target != "m" and not kk <= cell["m"] <= nn:
                return False
            return True
        if target == "cross":
            return 1 <= cell["t"] <= min(cell["k"], cell["l"]) and max(cell["k"], cell["l"]) <= cell["n"]
        return (1 <= cell["t"] <= min(cell["k"], cell["l"])
                and cell["k"] <= cell["mk"] <= cell["n"]
                and cell["l"] <= cell["ml"] <= cell["n"])

    import itertools

    for combo in itertools.product(*spans):
        cell = dict(zip(names, combo))
        if ok(cell):
            cells.append(combo)
    return cells


def cmd_scan(args) -> int:
    cfg = load_scan_config(args.config)
    target = cfg["target"]
    jobs = args.jobs or cfg.get("jobs", 1)
    ns = argparse.Namespace(
        clique_cap=cfg.get("clique_cap"), closure_cap=cfg.get("closure_cap"),
        bk_budget=cfg.get("bk_budget"), closure_budget=cfg.get("closure_budget"),
        no_cache=cfg.get("no_cache", False), cache=cfg.get("cache"),
        json=cfg.get("json"), csv=cfg.get("csv"),
    )
    limits = _limits_from(ns)

    if target in ("m", "m0", "cross", "n0", "n1"):
        cells = _valid_cells(target, cfg)
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                rows = list(pool.map(_oracle_cell_nocache,
                                     [(target, c, limits) for c in cells]))
        else:
            cache = _cache_from(ns)
            rows = [_oracle_cell(target, c, limits, cache) for c in cells]
        names = {"m": ["n", "k", "t"], "m0": ["n", "m", "k", "t"],
                 "cross": ["n", "k", "l", "t"], "n0": ["n", "mk", "ml", "k", "l", "t"],
                 "n1": ["n", "m", "k", "t"]}[target]
        header = names + ["value", "skipped"]
        for row in rows:
            print(" ".join(str(v) for v in row))
        _emit(ns, {"target": target, "rows": rows}, header, rows)
        return EXIT_OK

    if target == "conjecture_m0":
        cells = conjecture_check_m0(_valid_cells(target, cfg), limits=limits,
                                    cache=_cache_from(ns))
        bad = [c for c in cells if c.verdict == "conjecture_not_tight"]
        low = [c for c in cells if c.verdict == "conjecture_low"]
        for cell in cells:
            print(f"n={cell.n} m={cell.m} k={cell.k} t={cell.t}: {cell.verdict}"
                  + (f" ({cell.reason})" if cell.reason else ""))
        print(f"# {len(cells)} cells, {len(low)} counterexample(s), "
              f"{len(bad)} not-tight cell(s)")
        _emit(ns, {"target": target, "cells": [c.to_json() for c in cells]},
              CONJECTURE_CSV_HEADER, [conjecture_cell_csv_row(c) for c in cells])
        return EXIT_OK

    if target in ("ratio_m0", "ratio_n1"):
        k_fn = MonomialSeq(Fraction(str(cfg["k_coeff"])), Fraction(str(cfg["k_exp"])))
        t_fn = MonomialSeq(Fraction(str(cfg["t_coeff"])), Fraction(str(cfg["t_exp"])))
        m_values = _cfg_range(cfg["m"])
        if target == "ratio_m0":
            rows = ratio_table_m0(k_fn, t_fn, m_values,
                                  source=cfg.get("source", "conjectured"),
                                  limits=limits, cache=_cache_from(ns))
        else:
            rows = ratio_table_n1(k_fn, t_fn, m_values, limits=limits, cache=_cache_from(ns))
        for row in rows:
            print(f"m={row.m}: " + (f"skipped ({row.skipped})" if row.skipped
                                    else f"value={row.value} ratio={row.ratio_decimal}"))
        _emit(ns, {"target": target, "rows": [r.to_json() for r in rows]},
              RATIO_CSV_HEADER, [r.csv_row() for r in rows])
        return EXIT_OK

    if target == "pipeline":
        spec = (BranchingSpec.constant(cfg["f"], cfg["depth"]) if isinstance(cfg["f"], int)
                else BranchingSpec(tuple(cfg["f"])))
        n_max = cfg["n_max"]
        k_seq = cfg.get("k_seq") or [cfg["k_const"]] * (n_max + 1)
        rows = build_pipeline(spec, k_seq, Fraction(str(cfg["beta"])), n_max,
                              limits=limits, cache=_cache_from(ns))
        for row in rows:
            print(f"n={row.n} m={row.m}: " + (row.skipped or f"N1={row.n1} ratio={row.ratio}"))
        _emit(ns, {"target": target, "rows": [r.to_json() for r in rows]},
              PIPELINE_CSV_HEADER, [r.csv_row() for r in rows])
        return EXIT_OK

    if target == "trees":
        if "seed" not in cfg:
            raise ValueError("trees scan requires an explicit seed")
        spec = (BranchingSpec.constant(cfg["f"], cfg["depth"]) if isinstance(cfg["f"], int)
                else BranchingSpec(tuple(cfg["f"])))
        count = cfg.get("count", 100)
        retain = float(cfg.get("retain", 0.7))
        colouring = canonical_colouring(spec)
        rows = []
        for i in range(count):
            tree = random_pruned_tree(spec, spec.depth, retain, cfg["seed"] + i)
            rep = lemma5_check(tree, colouring)
            rows.append([cfg["seed"] + i, len(rep.bound_levels),
                         "vacuous" if rep.vacuous else ("holds" if rep.holds else "VIOLATED")])
        violations = sum(1 for r in rows if r[2] == "VIOLATED")
        print(f"# {count} trees, {violations} violation(s)")
        _emit(ns, {"target": target, "rows": rows},
              ["seed", "bound_levels", "verdict"], rows)
        return EXIT_OK

    # decay sweep
    if "seed" not in cfg:
        raise ValueError("decay scan requires an explicit seed")
    import random as _random

    rng = _random.Random(cfg["seed"])
    count = cfg.get("count", 10_000)
    failures = 0
    for _ in range(count):
        g0, g1, g2 = (
            MonomialSeq(Fraction(rng.randint(1, 16), rng.randint(1, 16)),
                        Fraction(rng.randint(0, 24), rng.randint(1, 8)))
            for _ in range(3)
        )
        if not transitivity_check(g0, g1, g2, TauFamily.POWERS_BELOW_ONE):
            failures += 1
    print(f"# {count} transitivity triples, {failures} failure(s)")
    _emit(ns, {"target": "decay", "count": count, "failures": failures})
    return EXIT_OK


# ---------------------------------------------------------------- wiring


def _add_output_flags(p) -> None:
    p.add_argument("--json", metavar="FILE", help="also write a JSON report")
    p.add_argument("--csv", metavar="FILE", help="also write a CSV report")


def _add_oracle_flags(p) -> None:
    p.add_argument("--cache", metavar="FILE", help=f"cache file (default {DEFAULT_CACHE})")
    p.add_argument("--no-cache", action="store_true", help="disable the result cache")
    p.add_argument("--clique-cap", type=int, help="universe cap for the clique route")
    p.add_argument("--closure-cap", type=int, help="universe cap for the closure route")
    p.add_argument("--bk-budget", type=int, help="maximal-clique enumeration node budget")
    p.add_argument("--closure-budget", type=int, help="closure evaluation budget")


def _add_tree_source_flags(p) -> None:
    p.add_argument("--f", required=True, help="branching factors: '2' (with --depth) or '2,3,2'")
    p.add_argument("--depth", type=int, help="depth for a constant branching factor")
    p.add_argument("--tree", metavar="FILE", help="tree JSON file")
    p.add_argument("--full", action="store_true", help="the full tree of the spec")
    p.add_argument("--branch", help="single branch, e.g. '0,1,1'")
    p.add_argument("--random", action="store_true", help="seeded random pruned tree")
    p.add_argument("--retain", type=float, default=0.7, help="child retention probability")
    p.add_argument("--seed", type=int, help="seed (required for --random)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="shadelab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"shadelab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("shade", help="one-point supersets of a set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--set", required=True, help="elements, e.g. '1,2'")
    _add_output_flags(p)
    p.set_defaults(func=cmd_shade)

    p = sub.add_parser("mshade", help="m-shade of a family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True, help="member size")
    p.add_argument("--m", type=int, required=True, help="target level")
    p.add_argument("--family", required=True, help="members, e.g. '1,2;1,3' ('' for empty)")
    _add_output_flags(p)
    p.set_defaults(func=cmd_mshade)

    p = sub.add_parser("check-intersecting", help="t-intersecting / cross-t-intersecting test")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--family-b", help="second family: test the cross condition")
    p.add_argument("--k-b", type=int, help="member size of the second family")
    _add_output_flags(p)
    p.set_defaults(func=cmd_check_intersecting)

    p = sub.add_parser("frankl", help="candidate extremal family F_i(n, k, t)")
    for name in ("n", "k", "t", "i"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--size-only", action="store_true")
    _add_output_flags(p)
    p.set_defaults(func=cmd_frankl)

    p = sub.add_parser("ak-max", help="exact maximum size of a t-intersecting family")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("t", type=int)
    _add_output_flags(p)
    p.set_defaults(func=cmd_ak_max)

    p = sub.add_parser("mt-cross", help="cross-1-intersecting product maximum (2k, 2l <= n)")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("l", type=int)
    _add_output_flags(p)
    p.set_defaults(func=cmd_mt_cross)

    p = sub.add_parser("conj-m0", help="conjectured m-shade maximum")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("k", type=int)
    p.add_argument("t", type=int)
    _add_output_flags(p)
    p.set_defaults(func=cmd_conj_m0)

    p = sub.add_parser("oracle", help="exact brute-force maxima with witnesses")
    p.add_argument("which", choices=sorted(_ORACLE_ARITY))
    p.add_argument("params", type=int, nargs="+",
                   help="m: n k t | m0: n m k t | cross: n k l t | n0: n mk ml k l t | n1: n m k t")
    _add_oracle_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("scan", help="run a grid scan from a JSON config")
    p.add_argument("config")
    p.add_argument("--jobs", type=int, help="parallel workers (cells are uncached when > 1)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("ratio", help="asymptotic ratio tables")
    p.add_argument("which", choices=["m0", "n1"])
    p.add_argument("--k-coeff", type=_fraction, default=Fraction(1))
    p.add_argument("--k-exp", type=_fraction, required=True)
    p.add_argument("--t-coeff", type=_fraction, default=Fraction(1))
    p.add_argument("--t-exp", type=_fraction, required=True)
    p.add_argument("--m", type=_span, required=True, help="row indices, e.g. '2:8'")
    p.add_argument("--source", choices=["conjectured", "oracle"], default="conjectured")
    _add_oracle_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("tree", help="finite tree operations")
    p.add_argument("which", choices=["density", "measure", "colour", "lemma5",
                                     "trace", "splitwitness"])
    _add_tree_source_flags(p)
    p.add_argument("--level", type=int, help="level for density/colour")
    p.add_argument("--n", "--N", type=int, dest="n",
                   help="trace: number of branch coordinates to use")
    p.add_argument("--levels", help="splitwitness: candidate levels, e.g. '1,3,5'")
    _add_output_flags(p)
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("decay", help="decay comparisons and diagnostics")
    p.add_argument("which", choices=["rho", "le", "diagnostic"])
    p.add_argument("--g-coeff", type=_fraction, default=Fraction(1))
    p.add_argument("--g-exp", type=_fraction, default=Fraction(1))
    p.add_argument("--h-coeff", type=_fraction, default=Fraction(1))
    p.add_argument("--h-exp", type=_fraction, default=Fraction(1))
    p.add_argument("--alpha", type=_fraction, help="power transform exponent")
    p.add_argument("--family", choices=["id", "powers"], help="decide for a whole family")
    p.add_argument("--f", default="2", help="diagnostic: branching factors")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--tree", metavar="FILE", help="diagnostic: ambient tree JSON")
    p.add_argument("--full", action="store_true", default=False)
    p.add_argument("--branch")
    p.add_argument("--random", action="store_true")
    p.add_argument("--subtree", action="append", metavar="FILE")
    p.add_argument("--random-subtrees", type=int, default=0)
    p.add_argument("--retain", type=float, default=0.7)
    p.add_argument("--seed", type=int)
    p.add_argument("--alphas", help="diagnostic exponents, e.g. '1/2,3/4'")
    p.add_argument("--threshold", type=_fraction, default=Fraction(1, 100))
    _add_output_flags(p)
    p.set_defaults(func=cmd_decay)

    p = sub.add_parser("pipeline", help="finite parameter chain rows")
    p.add_argument("--f", default="2")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--k", type=int, help="constant level-size sequence")
    p.add_argument("--k-seq", help="explicit level sizes, e.g. '1,2,2,2'")
    p.add_argument("--beta", type=_fraction, required=True)
    p.add_argument("--n-max", type=int, required=True)
    _add_oracle_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("claim-c5", help="counting-step arithmetic check")
    p.add_argument("--pairs", required=True, help="'B,s;B,s;...'")
    for name in ("n", "m", "k", "t"):
        p.add_argument(f"--{name}", type=int, required=True)
    _add_oracle_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_claim_c5)

    p = sub.add_parser("cache", help="verify or clear the oracle result cache")
    p.add_argument("which", choices=["verify", "clear"])
    p.add_argument("--cache", metavar="FILE")
    _add_output_flags(p)
    p.set_defaults(func=cmd_cache)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleSizeError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except WitnessValidationError as exc:
        print(f"witness validation failed: {exc}", file=sys.stderr)
        return EXIT_WITNESS
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
