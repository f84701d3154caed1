"""Command-line front end.

Subcommands mirror the library pipelines: validate an instance's trees,
embed a zero-dimensional catalog space, run witness maps, re-metrize, encode
metric codes, and run the verification suite.  Reports are deterministic
given (instance, flags, seed): numeric output is exact-rational text, check
lines are canonically ordered, and reruns are byte-identical.

Exit codes: 0 success, 1 verification or validation failure, 2 usage or
parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .baire import eventually_periodic
from .codes import encode_metric, render_code_file, validate_metric_table
from .dsl import ParseError
from .instances import (UnknownCatalogName, build_instance, builtin_instance,
                        parse_instance)
from .luzin import LuzinScheme, cantor_presentation, discrete_presentation
from .remetrize import epsilon_code
from .trees import TreeError
from .verify import (CheckResult, certified_ball_list, check_extension_certificates,
                     interleaved_table, run_instance_suite)
from .witness import MATRIX_CATALOG, WitnessClosure

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _load_instance(args) -> "InstanceFile":
    if args.instance is None:
        raise UnknownCatalogName("<missing --instance>")
    path = Path(args.instance)
    if path.exists():
        inst = parse_instance(path.read_text(encoding="utf-8"))
    else:
        inst = builtin_instance(args.instance)
    # explicit flags override the instance's own bounds
    for flag, key in (("depth", "depth"), ("budget", "budget"),
                      ("witness_bound", "witness_bound")):
        value = getattr(args, flag, None)
        if value is not None:
            inst.bounds[key] = value
    return inst


def _emit(args, lines: list[str]):
    body = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(body, encoding="utf-8")
    else:
        sys.stdout.write(body)


def _report(args, results: list[CheckResult], header: list[str]) -> int:
    failures = [r for r in results if not r.passed]
    if args.format == "full-report":
        doc = {
            "report": "clopen/1",
            "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail}
                       for r in results],
            "failures": [r.name for r in failures],
        }
        _emit(args, [json.dumps(doc, sort_keys=True, indent=2)])
    else:
        lines = list(header) + [r.line() for r in results]
        if failures:
            lines.append("failures " + json.dumps([r.name for r in failures]))
        _emit(args, lines)
    return EXIT_FAILURE if failures else EXIT_OK


def _build_or_report(args, inst):
    """Build an instance; on a tree contract violation emit a failing report."""
    try:
        return build_instance(inst), None
    except TreeError as exc:
        failure = CheckResult("tree-valid", False, f"{type(exc).__name__}: {exc}")
        return None, _report(args, [failure], [f"instance {inst.id}"])


def cmd_validate(args) -> int:
    inst = _load_instance(args)
    built, failed = _build_or_report(args, inst)
    if built is None:
        return failed
    depth = inst.bounds["depth"]
    lines = [f"instance {inst.id}", f"depth {depth}"]
    results: list[CheckResult] = []
    if built.sum_space is None:
        lines.append(f"degenerate {built.degenerate}")
    else:
        from .verify import check_tree_valid
        results.append(check_tree_valid(built.sum_space.part_a.tree, depth,
                                        name="tree-valid:a"))
        results.append(check_tree_valid(built.sum_space.part_c.tree, depth,
                                        name="tree-valid:c"))
    return _report(args, results, lines)


def cmd_embed(args) -> int:
    depth = args.depth if args.depth is not None else 4
    bound = args.witness_bound if args.witness_bound is not None else 64
    if args.space == "cantor":
        pres = cantor_presentation(witness_bound=bound)
    elif args.space.startswith("discrete:"):
        pres = discrete_presentation(int(args.space.split(":", 1)[1]))
    elif args.space == "baire-closed":
        from .luzin import baire_closed_presentation
        built = build_instance(_load_instance(args))
        pres = baire_closed_presentation(built.ambient_fam, witness_bound=bound)
    else:
        raise UnknownCatalogName(args.space, kind="embedding space")
    scheme = LuzinScheme(pres, max_depth=max(depth, 4))
    lines = [f"space {pres.name}", f"depth {depth}"]
    for i in range(args.count):
        image = scheme.embed(pres.dense_point(i))
        prefix = " ".join(str(image(n)) for n in range(depth))
        lines.append(f"embed {i} -> {prefix}")
    _emit(args, lines)
    return EXIT_OK


def cmd_witness(args) -> int:
    factory = MATRIX_CATALOG.get(args.matrix)
    if factory is None:
        raise UnknownCatalogName(args.matrix, kind="matrix")
    closure = WitnessClosure(factory())
    if args.point:
        from .instances import point_from_descriptor
        point = point_from_descriptor(json.loads(args.point))
    else:
        point = eventually_periodic(args.preperiod, args.period or [0])
    depth = args.depth if args.depth is not None else 4
    beta = closure.witness_point(point)
    values = " ".join(str(beta(n)) for n in range(depth))
    lines = [
        f"matrix {args.matrix}",
        f"witness {values}",
        f"modulus {closure.continuity_modulus(point, depth)}",
    ]
    _emit(args, lines)
    return EXIT_OK


def cmd_remetrize(args) -> int:
    inst = _load_instance(args)
    built = build_instance(inst)
    lines = ["format remetrize/1", f"instance {inst.id}"]
    if built.sum_space is None:
        lines.append(f"degenerate {built.degenerate}")
        lines.append("presentation ambient (unchanged)")
        _emit(args, lines)
        return EXIT_OK
    pres = built.presentation()
    k = min(inst.bounds["table_size"], 24)
    lines.append(f"K {k}")
    for i in range(k):
        for j in range(i, k):
            d = pres.dist(i, j)
            lines.append(f"{i} {j} {d.numerator}/{d.denominator}")
    eps = epsilon_code(built.sum_space)
    bits = "".join(str(eps(t)) for t in range(args.epsilon_prefix))
    lines.append(f"epsilon {bits}")
    if all(rep.kind == "identity" and rep.tree.hint is not None
           for rep in (built.sum_space.part_a, built.sum_space.part_c)):
        certified = certified_ball_list(built.sum_space, per_side=3)
        result = check_extension_certificates(built.sum_space, certified)
        lines.append(f"certificates {len(certified)} {'ok' if result.passed else 'FAIL'}")
        if not result.passed:
            lines.append(f"certificate-failure {result.detail}")
            _emit(args, lines)
            return EXIT_FAILURE
    _emit(args, lines)
    return EXIT_OK


def cmd_encode(args) -> int:
    inst = _load_instance(args)
    built = build_instance(inst)
    if built.sum_space is None:
        _emit(args, [f"instance {inst.id}", f"degenerate {built.degenerate}"])
        return EXIT_OK
    table = interleaved_table(built)
    validate_metric_table(table)
    code = encode_metric(table)
    body = render_code_file(code, inst.id)
    if args.out:
        Path(args.out).write_text(body, encoding="utf-8")
    else:
        sys.stdout.write(body)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _load_instance(args)
    built, failed = _build_or_report(args, inst)
    if built is None:
        return failed
    results = run_instance_suite(built, axiom_count=args.axiom_count,
                                 clopen_count=args.axiom_count, seed=args.seed)
    return _report(args, results, [f"instance {inst.id}", f"seed {args.seed}"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clopen",
        description="finite-scale re-metrization: trees, embeddings, witnesses, codes")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--instance", help="instance file path or catalog name")
        p.add_argument("--depth", type=int, default=None,
                       help="validation depth (default 4 or the instance's)")
        p.add_argument("--budget", type=int, default=None,
                       help="scan budget (default 256 or the instance's)")
        p.add_argument("--witness-bound", dest="witness_bound", type=int, default=None,
                       help="dense-witness scan ceiling (default 64 or the instance's)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="write the report to a file instead of stdout")
        p.add_argument("--format", choices=("table", "full-report"), default="table")

    p_validate = sub.add_parser("validate", help="validate an instance's trees")
    common(p_validate)
    p_validate.set_defaults(fn=cmd_validate)

    p_embed = sub.add_parser("embed", help="embed a zero-dimensional catalog space")
    common(p_embed)
    p_embed.add_argument("--space", default="cantor",
                         help="cantor, discrete:<n>, or baire-closed "
                              "(over --instance's ambient tree)")
    p_embed.add_argument("--count", type=int, default=8,
                         help="how many dense points to embed")
    p_embed.set_defaults(fn=cmd_embed)

    p_witness = sub.add_parser("witness", help="run a least-witness map")
    common(p_witness)
    p_witness.add_argument("--matrix", default="diagonal")
    p_witness.add_argument("--preperiod", type=int, nargs="*", default=[])
    p_witness.add_argument("--period", type=int, nargs="*", default=[0])
    p_witness.add_argument("--point", help="JSON point descriptor: "
                           '{"pre": [...], "period": [...]} or {"rule": "expr in n"}')
    p_witness.set_defaults(fn=cmd_witness)

    p_remetrize = sub.add_parser("remetrize", help="build the summed presentation")
    common(p_remetrize)
    p_remetrize.add_argument("--epsilon-prefix", dest="epsilon_prefix",
                             type=int, default=64)
    p_remetrize.set_defaults(fn=cmd_remetrize)

    p_encode = sub.add_parser("encode", help="emit the instance's metric code file")
    common(p_encode)
    p_encode.set_defaults(fn=cmd_encode)

    p_verify = sub.add_parser("verify", help="run the instance verification suite")
    common(p_verify)
    p_verify.add_argument("--axiom-count", dest="axiom_count", type=int, default=60)
    p_verify.set_defaults(fn=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except (ParseError, UnknownCatalogName) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TreeError as exc:
        print(f"validation failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
