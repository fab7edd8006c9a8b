"""Command-line front end: ``hardytree <command> [flags]``.

Tree files are UTF-8 text. The first non-comment line is a header
``p=<r> q=<r>`` and each further line is a vertex record ``id parent u w``
with parent ``-`` for the root; ``#`` starts a comment. Exponents accept
decimals, rationals such as ``3/2`` and ``inf``.

``--json`` prints a versioned report (``"schema": "hardytree/1"``); non-finite
numbers are encoded as the strings ``"inf"``, ``"-inf"`` and ``"nan"``.
Exit codes: 0 success, 2 input error, 3 size or convergence failure.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .bounds import (beta_oracle, beta_recursive, bound_report, check_theorem1_hypotheses,
                     residual_weight_norm, tree_digest)
from .errors import (ConvergenceError, HardyTreeError, ParseError, RegimeError, SizeLimitError,
                     TreeError)
from .exponents import Exponents, parse_exponent
from .hardy1d import Sequences, bennett_constant, hardy_norm_oracle, regime, truncation_diagnostic
from .oracle import DEFAULT_MAX_VERTICES, forest_norm, tree_norm
from .reductions import (DEFAULT_REGULAR_CAP, DEFAULT_TAIL_CAP, Example2Params, LevelGrouping,
                         LevelWeights, PsiProfile, SplitSpec, chain_count, chain_weights,
                         check_slowly_varying, example1_bound, example2_bound, hat_weights,
                         reduce_levels, regular_weighted_tree, split_vertex)
from .tree_core import RootedTree, WeightedTree, build_tree, enumerate_cuts

SCHEMA = "hardytree/1"
COMMANDS = ("norm", "bounds", "cuts", "check-t1", "reduce", "split", "chainify",
            "regular-gen", "hardy1d", "example1", "example2")

EXIT_OK, EXIT_INPUT, EXIT_FAILURE = 0, 2, 3


# ------------------------------------------------------------ tree files --


def format_exponent(x) -> str:
    x = parse_exponent(x)
    if x == math.inf:
        return "inf"
    return str(x) if x.denominator != 1 else str(x.numerator)


def _tokens(line: str):
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _parse_header(tokens, lineno: int) -> dict:
    found = {}
    for tok, col in tokens:
        key, sep, val = tok.partition("=")
        if not sep or key not in ("p", "q"):
            raise ParseError(f"expected header 'p=<r> q=<r>', found {tok!r}", lineno, col)
        if key in found:
            raise ParseError(f"duplicate header field {key!r}", lineno, col)
        try:
            found[key] = parse_exponent(val)
        except RegimeError as exc:
            raise ParseError(str(exc), lineno, col + 2) from exc
    for key in ("p", "q"):
        if key not in found:
            raise ParseError(f"header is missing '{key}='", lineno, 1)
    return found


def parse_tree_file(text: str) -> tuple[WeightedTree, Exponents]:
    """Parse a tree file into a weighted tree and its exponents.

    Raises
    ------
    ParseError
        With the 1-based line and column of the offending token.
    """
    header = None
    records: dict[int, tuple] = {}
    lines: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = _tokens(body)
        if not toks:
            continue
        if header is None:
            if "=" not in toks[0][0]:
                raise ParseError("missing header 'p=<r> q=<r>' before vertex records", lineno, 1)
            header = _parse_header(toks, lineno)
            continue
        if len(toks) != 4:
            raise ParseError(f"expected 'id parent u w', found {len(toks)} fields", lineno,
                             toks[min(len(toks), 4) - 1][1] if len(toks) > 4 else 1)
        (sid, cid), (spar, cpar), (su, cu), (sw, cw) = toks
        vid = _parse_int(sid, lineno, cid, "vertex id")
        if vid in records:
            raise ParseError(f"duplicate vertex id {vid} (first on line {lines[vid]})", lineno, cid)
        parent = None if spar == "-" else _parse_int(spar, lineno, cpar, "parent id")
        u = _parse_weight(su, lineno, cu, "u")
        w = _parse_weight(sw, lineno, cw, "w")
        records[vid] = (parent, u, w, cpar)
        lines[vid] = lineno
    if header is None:
        raise ParseError("empty tree file: missing header", 1, 1)
    if not records:
        raise ParseError("tree file has no vertex records", 0)
    n = len(records)
    missing = sorted(set(range(n)) - set(records))
    if missing:
        bad = max(records)
        raise ParseError(f"vertex ids must be 0..{n - 1}; id {missing[0]} is missing", lines[bad], 1)
    roots = [v for v, r in records.items() if r[0] is None]
    if len(roots) != 1:
        where = lines[roots[1]] if len(roots) > 1 else lines[max(records)]
        raise ParseError(f"expected exactly one root ('-' parent), found {len(roots)}", where, 1)
    for v, (parent, _, _, col) in records.items():
        if parent is not None and parent not in records:
            raise ParseError(f"orphan vertex {v}: parent {parent} is not defined", lines[v], col)
        if parent == v:
            raise ParseError(f"vertex {v} is its own parent", lines[v], col)
    edges = [(r[0], v) for v, r in sorted(records.items()) if r[0] is not None]
    try:
        tree = build_tree(edges, roots[0], n)
    except TreeError as exc:
        raise ParseError(str(exc), 0) from exc
    u = [records[v][1] for v in range(n)]
    w = [records[v][2] for v in range(n)]
    return WeightedTree(tree, u, w), Exponents(_literal(header["p"]), _literal(header["q"]))


def _literal(x):
    return "inf" if x == math.inf else x


def _parse_int(tok: str, line: int, col: int, what: str) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise ParseError(f"{what} must be a non-negative integer, found {tok!r}", line, col) from None
    if v < 0:
        raise ParseError(f"{what} must be non-negative, found {v}", line, col)
    return v


def _parse_weight(tok: str, line: int, col: int, what: str) -> float:
    try:
        v = float(Fraction(tok)) if "/" in tok else float(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"weight {what} is not a number: {tok!r}", line, col) from None
    if not math.isfinite(v) or v <= 0:
        raise ParseError(f"weight {what} must be positive and finite, found {tok}", line, col)
    return v


def format_tree_file(wt: WeightedTree, e, comment: str | None = None) -> str:
    """Serialise ``wt`` and exponents ``e`` in the tree-file format."""
    e = e if isinstance(e, Exponents) else Exponents(*e)
    out = []
    if comment:
        out.extend(f"# {c}" for c in comment.splitlines())
    out.append(f"p={format_exponent(_literal(e.p_exact))} q={format_exponent(_literal(e.q_exact))}")
    t = wt.tree
    for v in range(t.n):
        par = "-" if t.parent[v] < 0 else str(t.parent[v])
        out.append(f"{v} {par} {float(wt.u[v])!r} {float(wt.w[v])!r}")
    return "\n".join(out) + "\n"


# -------------------------------------------------------------- reports --


def _jsonable(obj):
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return format_exponent(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (frozenset, set)):
        return [_jsonable(v) for v in sorted(obj)]
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    return obj


class Report:
    """Structured command output; every quantity carries its method."""

    def __init__(self, command: str, args: argparse.Namespace):
        self.command = command
        self.inputs: dict = {}
        self.quantities: dict = {}
        self.witnesses: dict = {}
        self.data: dict = {}
        self.warnings: list[str] = []
        self.seeds = {"seed": args.seed}
        self.tolerances = {"tol": args.tol, "starts": args.starts}
        self.exit_code = EXIT_OK

    def add(self, name: str, value, method: str, witness=None) -> None:
        self.quantities[name] = {"value": value, "method": method}
        if witness is not None:
            self.witnesses[name] = witness

    def to_dict(self) -> dict:
        return _jsonable({"schema": SCHEMA, "command": self.command, "inputs": self.inputs,
                          "quantities": self.quantities, "witnesses": self.witnesses,
                          "data": self.data, "seeds": self.seeds,
                          "tolerances": self.tolerances, "warnings": self.warnings})

    def to_text(self) -> str:
        lines = [f"command: {self.command}"]
        for k, v in self.inputs.items():
            lines.append(f"  {k}: {_short(v)}")
        if self.quantities:
            width = max(len(k) for k in self.quantities)
            lines.append("quantities:")
            for k, q in self.quantities.items():
                lines.append(f"  {k:<{width}}  {_num(q['value']):>16}  [{q['method']}]")
        for k, v in self.data.items():
            lines.append(f"{k}: {_short(v)}")
        for w in self.warnings:
            lines.append(f"warning: {w}")
        return "\n".join(lines)


def _num(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.10g}"


def _short(v) -> str:
    if isinstance(v, str):
        return v if "\n" not in v else "\n" + v.rstrip()
    return json.dumps(_jsonable(v))


# ---------------------------------------------------------- utilities --


def _floats(text: str) -> list[float]:
    try:
        return [float(Fraction(x)) if "/" in x else float(x) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"expected a comma-separated list of integers, got {text!r}") from None


HANDLES: dict[str, Callable[[float], float]] = {
    "one": lambda y: 1.0,
    "inv-log2": lambda y: 1.0 / math.log2(y),
    "log2-2y": lambda y: math.log2(2.0 * y),
    "inv-log2-2y": lambda y: 1.0 / math.log2(2.0 * y),
    "log2-log2-4y": lambda y: math.log2(math.log2(4.0 * y)),
}


def handle(name: str) -> Callable[[float], float]:
    """Named weight functions; ``pow:A`` gives ``y**A``."""
    if name in HANDLES:
        return HANDLES[name]
    if name.startswith("pow:"):
        a = float(name[4:])
        return lambda y: y ** a
    raise ParseError(f"unknown function {name!r}; choose from {sorted(HANDLES)} or pow:A")


def _exponents(args, header: Exponents | None = None) -> Exponents:
    p = args.p if args.p is not None else (_literal(header.p_exact) if header else "2")
    q = args.q if args.q is not None else (_literal(header.q_exact) if header else "2")
    return Exponents(p, q)


def _load(args, rep: Report) -> tuple[WeightedTree, Exponents]:
    if not args.input:
        raise ParseError("this command needs --input PATH (use '-' for stdin)")
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    wt, header = parse_tree_file(text)
    e = _exponents(args, header)
    rep.inputs.update({"file": args.input, "digest": tree_digest(wt), "n": wt.n,
                       "p": format_exponent(_literal(e.p_exact)),
                       "q": format_exponent(_literal(e.q_exact))})
    return wt, e


def _max_vertices(args, default: int) -> int:
    return default if args.max_vertices is None else args.max_vertices


def _norm(wt: WeightedTree, e: Exponents, args, rep: Report, name: str = "norm"):
    est = tree_norm(wt, e, seed=args.seed, tol=min(args.tol, 1e-10), starts=args.starts,
                    max_vertices=_max_vertices(args, DEFAULT_MAX_VERTICES))
    rep.add(name, est.value, est.method)
    if not est.converged:
        rep.warnings.append(f"{name}: ascent did not converge for every start")
        rep.exit_code = EXIT_FAILURE
    return est


def _tree_summary(wt: WeightedTree) -> list[dict]:
    t = wt.tree
    return [{"id": v, "parent": None if t.parent[v] < 0 else t.parent[v],
             "u": float(wt.u[v]), "w": float(wt.w[v]),
             **({"origin": wt.origin[v]} if wt.origin else {})} for v in range(t.n)]


# ------------------------------------------------------------ commands --


def cmd_norm(args, rep):
    wt, e = _load(args, rep)
    est = _norm(wt, e, args, rep)
    rep.witnesses["norm"] = est.witness_by_vertex()
    rep.data.update({"converged": est.converged, "iterations": est.iterations})


def cmd_bounds(args, rep):
    wt, e = _load(args, rep)
    br = bound_report(wt, e, seed=args.seed, tol=min(args.tol, 1e-10), starts=args.starts,
                      l0=args.l0)
    for name, qv in br.quantities.items():
        rep.add(name, qv.value, qv.method, qv.witness)
    rep.warnings.extend(br.metadata.get("warnings", []))
    rep.data["regime"] = br.metadata["regime"]


def cmd_cuts(args, rep):
    wt, e = _load(args, rep)
    xi = wt.tree.root if args.xi is None else args.xi
    cuts = enumerate_cuts(wt.tree, xi)
    rows, best = [], None
    for c in cuts:
        b = beta_recursive(wt, e.p, c)
        r = residual_weight_norm(wt, e.q, c)
        row = {"D": sorted(c.d_vertices), "Gamma": sorted(c.gamma), "beta": b,
               "residual": r, "ratio": r / b}
        if args.oracle_beta:
            row["beta_oracle"] = beta_oracle(wt, e.p, c, tol=args.tol)
        rows.append(row)
        if best is None or row["ratio"] > best["ratio"]:
            best = row
    rep.add("count", len(cuts), "enumeration")
    if e.regime == "p>q":
        rep.warnings.append("cut_sup not reported: the cut characterisation needs p <= q")
    else:
        rep.add("cut_sup", best["ratio"], "cut-enumeration",
                {"D": best["D"], "Gamma": best["Gamma"]})
    rep.data.update({"base": xi, "cuts": rows})


def cmd_check_t1(args, rep):
    wt, e = _load(args, rep)
    h = check_theorem1_hypotheses(wt, e.q, args.l0)
    rep.add("K", h.K, "exact")
    rep.add("lambda", h.lam, "exact")
    rep.add("l0", h.l0, "input")
    rep.add("max_branching", h.max_branching, "exact")
    rep.add("max_u_ratio", h.max_u_ratio, "exact")
    rep.data["satisfied"] = h.satisfied


def cmd_reduce(args, rep):
    wt, e = _load(args, rep)
    if not args.levels:
        raise ParseError("reduce needs --levels j0,j1,...")
    xi = wt.tree.root if args.xi is None else args.xi
    red = reduce_levels(wt, LevelGrouping(xi, tuple(_ints(args.levels))), e)
    before = _norm(wt, e, args, rep, "norm")
    after = _norm(red, e, args, rep, "norm_reduced")
    if after.value < before.value * (1 - 1e-6):
        rep.warnings.append("reduced norm is below the original norm")
    rep.data.update({"tree": _tree_summary(red), "tree_file": format_tree_file(red, e)})


def _parse_partition(text: str | None, tree: RootedTree, xi: int) -> SplitSpec:
    if not text:
        return SplitSpec(xi, tuple(frozenset([c]) for c in tree.children[xi]))
    blocks = [frozenset(_ints(b)) for b in text.split("|")]
    return SplitSpec(xi, tuple(blocks))


def cmd_split(args, rep):
    wt, e = _load(args, rep)
    if args.xi is None:
        raise ParseError("split needs --xi VERTEX")
    spec = _parse_partition(args.partition, wt.tree, args.xi)
    res = split_vertex(wt, spec, e)
    _norm(wt, e, args, rep, "norm")
    fn = forest_norm(res.components, e, seed=args.seed, tol=min(args.tol, 1e-10),
                     starts=args.starts)
    rep.add("norm_split", fn.value, f"forest-{fn.combine}")
    if not all(c.converged for c in fn.components):
        rep.warnings.append("norm_split: ascent did not converge for every start")
        rep.exit_code = EXIT_FAILURE
    rep.data.update({"components": [_tree_summary(c) for c in res.components],
                     "tree_files": [format_tree_file(c, e) for c in res.components],
                     "copies": res.copies})


def _level_weights(args, depth: int) -> LevelWeights:
    u = _floats(args.u_levels) if args.u_levels else [1.0] * (depth + 1)
    w = _floats(args.w_levels) if args.w_levels else [1.0] * (depth + 1)
    if len(u) != depth + 1 or len(w) != depth + 1:
        raise ParseError(f"level weights need {depth + 1} entries (depth {depth})")
    return LevelWeights(u, w)


def _profile(args) -> PsiProfile:
    if args.branching is None:
        raise ParseError("this command needs --branching b0,b1,...")
    return PsiProfile(tuple(_ints(args.branching)))


def cmd_chainify(args, rep):
    prof = _profile(args)
    lw = _level_weights(args, prof.depth)
    e = _exponents(args)
    rep.inputs.update({"branching": prof.branching, "p": format_exponent(_literal(e.p_exact)),
                       "q": format_exponent(_literal(e.q_exact))})
    uh, wh = hat_weights(lw, prof, e)
    ut, wt_ = chain_weights(lw, prof, e)
    seq = Sequences(uh, wh)
    est = hardy_norm_oracle(seq, e, seed=args.seed, tol=min(args.tol, 1e-10), starts=args.starts)
    rep.add("hat_norm", est.value, est.method)
    rep.add("chain_count", chain_count(prof), "exact")
    if e.regime == "p<q":
        rep.warnings.append("the tree norm equals the hat-weight norm only for p >= q")
    total = sum(prof.level_sizes())
    cap = _max_vertices(args, DEFAULT_MAX_VERTICES)
    if total <= cap:
        wtree = regular_weighted_tree(prof, lw)
        _norm(wtree, e, args, rep, "tree_norm")
    else:
        rep.warnings.append(f"tree_norm skipped: {total} vertices exceed --max-vertices {cap}")
    rep.data.update({"psi": prof.psi_values(), "u_hat": uh, "w_hat": wh,
                     "u_chain": ut, "w_chain": wt_})


def cmd_regular_gen(args, rep):
    prof = _profile(args)
    lw = _level_weights(args, prof.depth)
    e = _exponents(args)
    wt = regular_weighted_tree(prof, lw, _max_vertices(args, DEFAULT_REGULAR_CAP))
    text = format_tree_file(wt, e, comment=f"regular tree, branching {','.join(map(str, prof.branching))}")
    rep.inputs["branching"] = prof.branching
    rep.add("vertices", wt.n, "exact")
    rep.data["level_sizes"] = prof.level_sizes()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        rep.data["output"] = args.output
    else:
        rep.data["tree_file"] = text


def cmd_hardy1d(args, rep):
    if not args.u or not args.w:
        raise ParseError("hardy1d needs --u and --w comma-separated sequences")
    s = Sequences(_floats(args.u), _floats(args.w))
    e = _exponents(args)
    rep.inputs.update({"length": len(s), "p": format_exponent(_literal(e.p_exact)),
                       "q": format_exponent(_literal(e.q_exact))})
    reg = regime(e)
    m = bennett_constant(s, e)
    rep.add("M", m, f"finite-sum-regime-{reg}")
    est = hardy_norm_oracle(s, e, seed=args.seed, tol=min(args.tol, 1e-10), starts=args.starts)
    rep.add("norm", est.value, est.method)
    rep.add("norm/M", est.value / m if m > 0 else math.inf, "ratio")
    rep.add("last_term_share", truncation_diagnostic(s, e), "truncation-diagnostic")
    if not est.converged:
        rep.warnings.append("norm: ascent did not converge for every start")
        rep.exit_code = EXIT_FAILURE


def _tail_report(tb, rep):
    rep.add("M", tb.value, "truncated-sum")
    rep.add("M_upper", tb.upper, "truncated-sum+remainder-estimate")
    rep.add("remainder", tb.remainder, "power-law-integral")
    rep.data.update({"diverged": tb.diverged, "witness_level": tb.witness,
                     "truncation_level": tb.truncation, "decay_exponent": tb.decay})
    if tb.diverged:
        rep.warnings.append("tail series diverges: M is infinite")
    elif math.isinf(tb.upper) or math.isnan(tb.upper):
        rep.warnings.append("supremum not resolved within the truncation window")


def cmd_example1(args, rep):
    e = _exponents(args)
    rep.inputs.update({"j0": args.j0, "s": args.s, "q": format_exponent(_literal(e.q_exact)),
                       "psi_u": args.psi_u, "psi_w": args.psi_w,
                       "lambda_star": args.lambda_star, "tail_cap": args.tail_cap})
    tb = example1_bound(args.j0, _literal(e.q_exact), handle(args.psi_u), handle(args.psi_w),
                        handle(args.lambda_star), args.s, args.tail_cap)
    _tail_report(tb, rep)
    if args.slow_eps is not None:
        sv = check_slowly_varying(handle(args.lambda_star), args.slow_eps)
        rep.add("slow_upper_constant", sv.upper_constant, "grid-2^0..2^20")
        rep.add("slow_lower_constant", sv.lower_constant, "grid-2^0..2^20")
        rep.data["slow_variation_passed"] = sv.passed
        if not sv.passed:
            rep.warnings.append("lambda_star fails the slow-variation grid check")


def cmd_example2(args, rep):
    e = _exponents(args)
    if args.case is None:
        raise ParseError("example2 needs --case 1 or --case 2")
    params = Example2Params(args.gamma_star, args.alpha_u, args.alpha_w, handle(args.rho_u),
                            handle(args.rho_w), handle(args.tau_star), args.k0, args.j0)
    rep.inputs.update({"case": args.case, "gamma_star": args.gamma_star,
                       "alpha_u": args.alpha_u, "alpha_w": args.alpha_w, "k0": args.k0,
                       "j0": params.start, "rho_u": args.rho_u, "rho_w": args.rho_w,
                       "tau_star": args.tau_star, "tail_cap": args.tail_cap,
                       "p": format_exponent(_literal(e.p_exact)),
                       "q": format_exponent(_literal(e.q_exact))})
    _tail_report(example2_bound(args.case, params, e, args.tail_cap), rep)


HANDLERS = {"norm": cmd_norm, "bounds": cmd_bounds, "cuts": cmd_cuts, "check-t1": cmd_check_t1,
            "reduce": cmd_reduce, "split": cmd_split, "chainify": cmd_chainify,
            "regular-gen": cmd_regular_gen, "hardy1d": cmd_hardy1d, "example1": cmd_example1,
            "example2": cmd_example2}


# -------------------------------------------------------------- parser --


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="PATH", help="tree file ('-' for stdin)")
    common.add_argument("--p", metavar="R", help="source exponent (overrides the header)")
    common.add_argument("--q", metavar="R", help="target exponent (overrides the header)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--starts", type=int, default=32)
    common.add_argument("--max-vertices", type=int, default=None)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--tail-cap", type=int, default=DEFAULT_TAIL_CAP)

    parser = argparse.ArgumentParser(prog="hardytree", description=(
        "Norms, bounds and reductions for weighted summation operators on trees."))
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    add("norm", "operator norm of the tree file")
    add("bounds", "norm, sup-product, path and cut bounds, ratios").add_argument(
        "--l0", type=int, default=1)
    p = add("cuts", "enumerate cuts with beta and residual weights")
    p.add_argument("--xi", type=int)
    p.add_argument("--oracle-beta", action="store_true", help="also solve beta numerically")
    add("check-t1", "branching and decay constants K, lambda").add_argument(
        "--l0", type=int, default=1)
    p = add("reduce", "collapse level bands")
    p.add_argument("--levels", metavar="J", help="comma-separated cut levels j0,j1,...")
    p.add_argument("--xi", type=int)
    p = add("split", "split a vertex along a partition of its children")
    p.add_argument("--xi", type=int)
    p.add_argument("--partition", metavar="B", help="blocks like '1,2|3' (default singletons)")
    for name, help_ in (("chainify", "one-dimensional problem of a regular tree"),
                        ("regular-gen", "write a regular tree file")):
        p = add(name, help_)
        p.add_argument("--branching", metavar="B", help="comma-separated b_0,...,b_{N-1}")
        p.add_argument("--u-levels", metavar="U")
        p.add_argument("--w-levels", metavar="W")
        if name == "regular-gen":
            p.add_argument("--output", metavar="PATH")
    p = add("hardy1d", "one-dimensional constant M and norm")
    p.add_argument("--u", metavar="U")
    p.add_argument("--w", metavar="W")
    p = add("example1", "tail supremum for dyadic level weights")
    p.add_argument("--j0", type=int, default=1)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--psi-u", default="one")
    p.add_argument("--psi-w", default="one")
    p.add_argument("--lambda-star", default="one")
    p.add_argument("--slow-eps", type=float, default=None)
    p = add("example2", "bounds for polynomial level weights")
    p.add_argument("--case", type=int, choices=(1, 2))
    p.add_argument("--gamma-star", type=float, default=1.0)
    p.add_argument("--alpha-u", type=float, default=0.0)
    p.add_argument("--alpha-w", type=float, default=0.0)
    p.add_argument("--rho-u", default="one")
    p.add_argument("--rho-w", default="one")
    p.add_argument("--tau-star", default="one")
    p.add_argument("--k0", type=int, default=0)
    p.add_argument("--j0", type=int, default=None)
    return parser


def run_command(command: str, args: argparse.Namespace) -> Report:
    """Execute ``command`` and return its report (exceptions propagate)."""
    if command not in HANDLERS:
        raise ParseError(f"unknown command {command!r}")
    rep = Report(command, args)
    HANDLERS[command](args, rep)
    return rep


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep = run_command(args.command, args)
    except (SizeLimitError, ConvergenceError) as exc:
        return _fail(args, exc, EXIT_FAILURE)
    except (HardyTreeError, ValueError, OSError) as exc:
        return _fail(args, exc, EXIT_INPUT)
    if args.json:
        print(json.dumps(rep.to_dict(), indent=2))
    elif args.command == "regular-gen" and "tree_file" in rep.data:
        sys.stdout.write(rep.data["tree_file"])
    else:
        print(rep.to_text())
    return rep.exit_code


def _fail(args, exc: Exception, code: int) -> int:
    msg = f"{type(exc).__name__}: {exc}"
    if args.json:
        print(json.dumps({"schema": SCHEMA, "command": args.command, "error": msg,
                          "exit_code": code}, indent=2))
    print(f"hardytree: error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
