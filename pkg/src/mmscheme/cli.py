"""Command line workbench.

Exit codes: 0 success, 1 negative decision (not correct / not equivalent /
unliftable / nothing to merge), 2 usage or format error, 3 budget
exhausted.  An optional JSON config file supplies default seeds, budgets,
the external solver template, and the catalog root; the MMSCHEME_CATALOG
environment variable also names the catalog root.
"""

from __future__ import annotations

import argparse
import json
import shlex
import subprocess
import sys
from pathlib import Path

from . import __version__
from .catalog import CATALOG_ENV_VAR, Catalog, dedup_catalog, weight_histogram
from .core import Ring, verify, weight
from .families import (
    SWEEP_ORDERS,
    RoundRejected,
    dump_family,
    family_from_scheme,
    introduce_parameters,
    introduce_parameters_sweep,
    load_family,
    merge_reduction,
    substitute_family,
    verify_family_exact,
    write_family,
)
from .io import (
    FormatError,
    dump_scheme,
    group_element_to_obj,
    load_scheme,
    transpose_gamma,
    write_scheme,
)
from .satbridge import (
    StreamlinePlan,
    VarMap,
    apply_streamline,
    brent_equation_count,
    check_assignment,
    decode_model,
    encode_brent,
    parse_model_text,
    random_diag_distribution,
    write_dimacs,
)
from .signlift import DEFAULT_NODE_BUDGET, lift
from .symmetry import equivalent, invariant_key, simplify_weight

OK, NEGATIVE, USAGE, BUDGET = 0, 1, 2, 3


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return USAGE


def _load_config(args) -> dict:
    path = getattr(args, "config", None)
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        config = json.load(fh)
    if not isinstance(config, dict):
        raise FormatError("config file must hold a JSON object")
    return config


def _setting(args, config, name, default):
    value = getattr(args, name, None)
    if value is not None:
        return value
    return config.get(name, default)


def _read_scheme_file(path, convention="transposed"):
    with open(path, encoding="utf-8") as fh:
        s = load_scheme(fh.read())
    if convention == "c-ab":
        s = transpose_gamma(s)
    return s


def _emit_scheme(s, out) -> None:
    if out:
        write_scheme(out, s)
    else:
        print(dump_scheme(s))


def _emit_family(f, out) -> None:
    if out:
        write_family(out, f)
    else:
        print(dump_family(f))


def _catalog(args, config) -> Catalog:
    root = getattr(args, "catalog", None) or config.get("catalog")
    return Catalog.open(root)


# -- subcommand handlers ------------------------------------------------------


def cmd_verify(args, config) -> int:
    s = _read_scheme_file(args.scheme, args.convention)
    report = verify(s)
    if report.correct:
        print(f"correct: all {brent_equation_count(s.n)} Brent equations hold")
        return OK
    print(f"INCORRECT: {len(report.violations)} violated equations")
    for idx in report.violations[:10]:
        print(f"  {tuple(idx)}")
    return NEGATIVE


def cmd_weight(args, config) -> int:
    s = _read_scheme_file(args.scheme, args.convention)
    print(weight(s))
    return OK


def cmd_invariants(args, config) -> int:
    key = invariant_key(_read_scheme_file(args.scheme, args.convention))
    print(f"rank-counts:   {key.canonical_string().split(' | ')[0]}")
    print(f"triple-sums:   {key.canonical_string().split(' | ')[1]}")
    print(f"column-sums:   {key.canonical_string().split(' | ')[2]}")
    return OK


def cmd_equivalent(args, config) -> int:
    s1 = _read_scheme_file(args.scheme1, args.convention)
    s2 = _read_scheme_file(args.scheme2, args.convention)
    witness = equivalent(s1, s2)
    if witness is None:
        print("not equivalent")
        return NEGATIVE
    text = json.dumps(group_element_to_obj(witness), indent=1, sort_keys=True)
    if args.witness:
        Path(args.witness).write_text(text + "\n", encoding="utf-8")
        print(f"equivalent; witness written to {args.witness}")
    else:
        print(text)
    return OK


def cmd_simplify(args, config) -> int:
    s = _read_scheme_file(args.scheme, args.convention)
    iterations = int(_setting(args, config, "iterations", 10_000))
    seed = int(_setting(args, config, "seed", 0))
    out = simplify_weight(s, iterations, seed)
    print(f"weight {weight(s)} -> {weight(out)} ({iterations} iterations, seed {seed})")
    _emit_scheme(out, args.output)
    return OK


def cmd_encode(args, config) -> int:
    seed = int(_setting(args, config, "seed", 0))
    fix_scheme = None
    if args.fix_scheme:
        fix_scheme = _read_scheme_file(args.fix_scheme)
        if fix_scheme.ring is not Ring.Z2:
            return _fail("--fix-scheme needs a Z2 scheme")
    diag = None
    if args.diag:
        diag = random_diag_distribution(args.n, args.m, seed)
    plan = StreamlinePlan(
        mode=args.mode,
        fix_scheme=fix_scheme,
        fix_fraction=args.fix_fraction,
        offdiag_zero_fraction=args.offdiag_fraction,
        diag_distribution=diag,
        seed=seed,
    )
    formula, varmap = encode_brent(args.n, args.m, plan)
    units = apply_streamline(plan, varmap)
    cnf_path = Path(f"{args.output}.cnf")
    write_dimacs(cnf_path, formula, units)
    varmap_path = Path(f"{args.output}.varmap.json")
    with open(varmap_path, "w", encoding="utf-8") as fh:
        json.dump(varmap.to_obj(), fh)
        fh.write("\n")
    print(
        f"base variables: {varmap.base_count}  equations: {brent_equation_count(args.n)}"
    )
    print(
        f"total variables: {formula.num_vars}  clauses: {len(formula.clauses) + len(units)}"
        f"  (streamline units: {len(units)})"
    )
    print(f"wrote {cnf_path} and {varmap_path}")
    return OK


def _read_varmap(path) -> VarMap:
    with open(path, encoding="utf-8") as fh:
        return VarMap.from_obj(json.load(fh))


def _run_solver(template: str, cnf: str, model: str, timeout) -> None:
    cmd = [
        token.replace("{cnf}", str(cnf)).replace("{model}", str(model))
        for token in shlex.split(template)
    ]
    # only the exit status and the model file are part of the contract,
    # and several solvers signal satisfiability through nonzero exits
    subprocess.run(cmd, timeout=timeout, check=False)


def cmd_decode(args, config) -> int:
    varmap = _read_varmap(args.varmap)
    model_path = args.model
    if model_path is None:
        solver = _setting(args, config, "solver", None)
        if not (solver and args.cnf):
            return _fail("need --model, or --cnf together with --solver")
        model_path = str(Path(args.cnf).with_suffix(".model"))
        _run_solver(solver, args.cnf, model_path, args.timeout)
        if not Path(model_path).exists():
            print("solver produced no model file", file=sys.stderr)
            return NEGATIVE
    literals = parse_model_text(Path(model_path).read_text("utf-8"))
    if not literals:
        print("no model literals found", file=sys.stderr)
        return NEGATIVE
    s = decode_model(literals, varmap)
    report = verify(s)
    print(f"decoded scheme verifies: {report.correct}")
    _emit_scheme(s, args.output)
    return OK if report.correct else NEGATIVE


def cmd_check_model(args, config) -> int:
    from .satbridge import CnfFormula

    text = Path(args.cnf).read_text("utf-8")
    clauses = []
    num_vars = 0
    for line in text.splitlines():
        line = line.strip()
        if not line or line[0] in "c%":
            continue
        if line[0] == "p":
            num_vars = int(line.split()[2])
            continue
        lits = [int(t) for t in line.split()]
        if lits and lits[-1] == 0:
            lits.pop()
        if lits:
            clauses.append(tuple(lits))
    formula = CnfFormula(num_vars, tuple(clauses))
    literals = parse_model_text(Path(args.model).read_text("utf-8"))
    values = {abs(l): l > 0 for l in literals}
    try:
        ok = check_assignment(formula, values)
    except ValueError as exc:
        return _fail(str(exc))
    print("model satisfies the formula" if ok else "model does NOT satisfy the formula")
    return OK if ok else NEGATIVE


def cmd_lift(args, config) -> int:
    s = _read_scheme_file(args.scheme, args.convention)
    budget = int(_setting(args, config, "budget", DEFAULT_NODE_BUDGET))

    def progress(nodes):
        print(f"... {nodes} search nodes", file=sys.stderr)

    outcome = lift(s, budget, progress=progress)
    if outcome.status == "lifted":
        print(f"LIFTED nodes={outcome.nodes}")
        _emit_scheme(outcome.scheme, args.output)
        return OK
    if outcome.status == "unliftable":
        print(f"UNLIFTABLE nodes={outcome.nodes}")
        return NEGATIVE
    print(f"INCONCLUSIVE nodes={outcome.nodes} budget={budget}")
    return BUDGET


def cmd_family_verify(args, config) -> int:
    with open(args.family, encoding="utf-8") as fh:
        f = load_family(fh.read())
    report = verify_family_exact(f)
    if report.correct:
        print(
            f"correct: all {brent_equation_count(f.n)} residuals vanish identically "
            f"({f.params} parameters)"
        )
        return OK
    print(f"INCORRECT: residual at {tuple(report.violation)} is nonzero")
    return NEGATIVE


def cmd_family_eval(args, config) -> int:
    with open(args.family, encoding="utf-8") as fh:
        f = load_family(fh.read())
    try:
        point = [int(v) for v in args.point.split(",")] if args.point else []
    except ValueError:
        return _fail("--point must be a comma-separated integer list")
    s = substitute_family(f, point)
    print(f"scheme at point verifies: {verify(s).correct}")
    _emit_scheme(s, args.output)
    return OK


def _read_scheme_or_family(path):
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    if isinstance(obj, dict) and obj.get("format") == "mmfamily-v1":
        return load_family(obj)
    s = _read_scheme_file(path)
    return family_from_scheme(s)


def cmd_introduce_params(args, config) -> int:
    f = _read_scheme_or_family(args.input)
    if args.sweep:
        out = introduce_parameters_sweep(f, order=args.order)
    else:
        if args.summand is None or not args.free or not args.known:
            return _fail("need --summand/--free/--known, or --sweep")
        try:
            out = introduce_parameters(f, args.summand, args.free, args.known)
        except RoundRejected as exc:
            print(f"round rejected: {exc}", file=sys.stderr)
            return NEGATIVE
    print(f"parameters: {f.params} -> {out.params}")
    _emit_family(out, args.output)
    return OK


def cmd_merge_check(args, config) -> int:
    s = _read_scheme_file(args.scheme, args.convention)
    reduced = merge_reduction(s)
    if reduced is None:
        print("no merge reduction")
        return NEGATIVE
    print(f"reduced {s.m} -> {reduced.m} summands")
    _emit_scheme(reduced, args.output)
    return OK


def cmd_catalog_add(args, config) -> int:
    catalog = _catalog(args, config)
    s = _read_scheme_file(args.scheme, args.convention)
    try:
        record, created = catalog.add(s)
    except ValueError as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return NEGATIVE
    print(f"{record.id}  ({'added' if created else 'already present'})")
    return OK


def cmd_catalog_dedup(args, config) -> int:
    catalog = _catalog(args, config)
    records = catalog.records()
    schemes = [catalog.load(r) for r in records]
    result = dedup_catalog(schemes)
    print(f"{len(schemes)} schemes in {len(result.classes)} equivalence classes")
    for cls in result.classes:
        print("  " + " ".join(records[i].id[:12] for i in cls))
    print("classes per invariant:")
    for key, count in result.invariant_class_counts:
        print(f"  {count:6d}  {key}")
    return OK


def cmd_histogram(args, config) -> int:
    catalog = _catalog(args, config)
    weights = []
    for record in catalog.records():
        s = catalog.load(record)
        if not verify(s).correct:
            print(f"warning: {record.path} does not verify; skipped", file=sys.stderr)
            continue
        weights.append(weight(s))
    rows = weight_histogram(weights)
    lines = ["weight,count"] + [f"{w},{c}" for w, c in rows]
    text = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output} ({len(rows)} rows)")
    else:
        sys.stdout.write(text)
    return OK


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmscheme",
        description="workbench for fast matrix multiplication schemes",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file with defaults")

    conv = argparse.ArgumentParser(add_help=False)
    conv.add_argument(
        "--convention",
        choices=["transposed", "c-ab"],
        default="transposed",
        help="input convention; c-ab transposes the gamma factors on import",
    )

    p = sub.add_parser("verify", parents=[common, conv], help="check the Brent equations")
    p.add_argument("scheme")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("weight", parents=[common, conv], help="count nonzero triples")
    p.add_argument("scheme")
    p.set_defaults(func=cmd_weight)

    p = sub.add_parser(
        "invariants", parents=[common, conv], help="print the rank-derived invariants"
    )
    p.add_argument("scheme")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser(
        "equivalent", parents=[common, conv], help="decide symmetry-group equivalence"
    )
    p.add_argument("scheme1")
    p.add_argument("scheme2")
    p.add_argument("--witness", help="write the witness group element here")
    p.set_defaults(func=cmd_equivalent)

    p = sub.add_parser(
        "simplify", parents=[common, conv], help="hill-climb to a lower weight"
    )
    p.add_argument("scheme")
    p.add_argument("--iterations", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_simplify)

    p = sub.add_parser("encode", parents=[common], help="emit DIMACS CNF + varmap")
    p.add_argument("--n", type=int, required=True, choices=[2, 3])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--mode", choices=["parity", "zero-or-two"], default="parity")
    p.add_argument("--fix-scheme", help="pin variables to a known Z2 scheme")
    p.add_argument("--fix-fraction", type=float, default=0.5)
    p.add_argument("--offdiag-fraction", type=float)
    p.add_argument(
        "--diag", action="store_true", help="streamline the diagonal terms (19/4 shape)"
    )
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output", required=True, help="output stem")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", parents=[common], help="model -> Z2 scheme")
    p.add_argument("--varmap", required=True)
    p.add_argument("--model")
    p.add_argument("--cnf", help="CNF to hand to --solver when no model is given")
    p.add_argument("--solver", help="command template with {cnf} and {model}")
    p.add_argument("--timeout", type=float)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("check-model", parents=[common], help="evaluate a model on a CNF")
    p.add_argument("--cnf", required=True)
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_check_model)

    p = sub.add_parser(
        "lift", parents=[common, conv], help="find +-1 signs or prove none exist"
    )
    p.add_argument("scheme")
    p.add_argument("--budget", type=int, help="search node budget")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser(
        "family-verify", parents=[common], help="verify a family as a polynomial identity"
    )
    p.add_argument("family")
    p.set_defaults(func=cmd_family_verify)

    p = sub.add_parser(
        "family-eval", parents=[common], help="substitute integers for the parameters"
    )
    p.add_argument("family")
    p.add_argument("--point", help="comma-separated integers, one per parameter")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_family_eval)

    p = sub.add_parser(
        "introduce-params",
        parents=[common],
        help="free factors, solve, and parameterize the nullspace",
    )
    p.add_argument("input", help="mmscheme-v1 (int/rat) or mmfamily-v1 file")
    p.add_argument("--summand", type=int, help="0-based summand index")
    p.add_argument("--free", choices=["alpha", "beta", "gamma"])
    p.add_argument("--known", choices=["alpha", "beta", "gamma"])
    p.add_argument("--sweep", action="store_true")
    p.add_argument("--order", choices=list(SWEEP_ORDERS), default="forward")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_introduce_params)

    p = sub.add_parser(
        "merge-check", parents=[common, conv], help="try to fold away a summand"
    )
    p.add_argument("scheme")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_merge_check)

    catalog_flag = dict(help=f"catalog root (default: ${CATALOG_ENV_VAR})")

    p = sub.add_parser(
        "catalog-add", parents=[common, conv], help="store a verifying scheme"
    )
    p.add_argument("scheme")
    p.add_argument("--catalog", **catalog_flag)
    p.set_defaults(func=cmd_catalog_add)

    p = sub.add_parser(
        "catalog-dedup", parents=[common], help="equivalence classes of the catalog"
    )
    p.add_argument("--catalog", **catalog_flag)
    p.set_defaults(func=cmd_catalog_dedup)

    p = sub.add_parser(
        "histogram", parents=[common], help="weight,count CSV over the catalog"
    )
    p.add_argument("--catalog", **catalog_flag)
    p.add_argument("-o", "--output", help="CSV file (default: stdout)")
    p.set_defaults(func=cmd_histogram)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args)
        return args.func(args, config)
    except FormatError as exc:
        return _fail(str(exc))
    except (FileNotFoundError, IsADirectoryError) as exc:
        return _fail(f"{exc.filename}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        return _fail(f"invalid JSON: {exc}")
    except subprocess.TimeoutExpired:
        print("solver timed out", file=sys.stderr)
        return BUDGET
    except ValueError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
