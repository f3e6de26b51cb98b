"""Command-line front end.

Exit codes: 0 ok, 2 invalid input, 3 regime violation, 4 resource budget,
5 check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis, gram, groups, partitions, qmoments
from .errors import FreeMomentsError, InvalidInputError
from .formats import dump_moments, dumps, load_moments, norm_table_csv

EXIT_OK = 0
EXIT_CHECK_FAILED = 5


def _config(args) -> dict:
    skip = {"func", "out", "table_out"}
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    return json.loads(json.dumps(cfg, default=str))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _report(args, report: dict, passed: bool | None = None) -> int:
    payload = {"config": _config(args), "report": report}
    if passed is not None:
        payload["passed"] = passed
    _emit(dumps(payload), args.out)
    return EXIT_OK if passed in (None, True) else EXIT_CHECK_FAILED


def cmd_moments_quantum(args) -> int:
    model = qmoments.QuantumModel(args.family, args.n)
    seq = qmoments.moment_sequence(model, args.max_k, args.method)
    _emit(dump_moments(seq, args.format, _config(args)), args.out)
    return EXIT_OK


def cmd_moments_group(args) -> int:
    if args.table:
        G = groups.parse_preset("table:" + args.table)
    else:
        G = groups.parse_preset(args.preset)
    seq = groups.group_moment_sequence(G, args.max_k, budget=args.memory_budget,
                                       lump=not args.no_lump)
    _emit(dump_moments(seq, args.format, _config(args)), args.out)
    return EXIT_OK


def cmd_check_convolution(args) -> int:
    A = analysis.to_A_sequence(load_moments(args.input))
    rep = analysis.check_convolution(A)
    passed = rep.passed and (rep.holds_c or not args.require_c)
    return _report(args, {"a_sequence": A.to_json(), "convolution": rep.to_json()}, passed)


def cmd_check_monotone(args) -> int:
    if args.hom:
        try:
            data = json.loads(Path(args.hom).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInputError(f"cannot read homomorphism {args.hom}: {exc}")
        phi = groups.load_homomorphism(data)
        rep = groups.push_forward_check(phi, args.max_k, budget=args.memory_budget)
    else:
        if not (args.source and args.target):
            raise InvalidInputError("check monotone needs --hom or both --source and --target")
        rep = groups.compare_sequences(load_moments(args.source), load_moments(args.target))
    return _report(args, rep.to_json(), rep.holds)


def cmd_check_hankel(args) -> int:
    rep = analysis.check_hankel(load_moments(args.input))
    return _report(args, rep.to_json(), rep.passed)


def cmd_norm(args) -> int:
    seq = load_moments(args.input)
    est = analysis.estimate_norm(seq, digits=args.digits)
    report = {"model_tag": seq.model_tag, "norm": est.to_json()}
    passed = None
    if args.certify:
        cert = analysis.minorant_certificate(analysis.to_A_sequence(seq), args.horizon, args.digits)
        report["certificate"] = cert.to_json()
        passed = cert.certified
    table_out = args.table_out
    if table_out is None and args.out:
        table_out = str(Path(args.out).with_suffix(".table.csv"))
    if table_out:
        Path(table_out).write_text(norm_table_csv(est))
    return _report(args, report, passed)


def cmd_dims(args) -> int:
    eps = partitions.color_word(args.word)
    value = gram.dim_fixed_space(eps, args.cls, args.n, args.method)
    report = {"word": eps, "class": args.cls, "n": args.n, "method": args.method,
              "dimension": str(value)}
    if args.gram:
        report["gram"] = gram.gram_matrix(eps, args.cls, args.n).to_json()
    return _report(args, report)


def cmd_verify_lemma(args) -> int:
    if args.word is not None:
        words = [partitions.color_word(args.word)]
    else:
        words = [w for L in range(2, args.max_length + 1, 2) for w in partitions.all_words(L)]
    reports = [partitions.verify_block_inequality(w, args.cls) for w in words]
    passed = all(r.holds for r in reports)
    body = {
        "words_checked": len(reports),
        "failures": [r.to_json() for r in reports if not r.holds],
    }
    if len(reports) <= 64:
        body["results"] = [r.to_json() for r in reports]
    return _report(args, body, passed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freemoments",
        description="Exact moment sequences for free quantum groups and discrete groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=False):
        p.add_argument("--out", help="output file (default: stdout)")
        if fmt:
            p.add_argument("--format", choices=["json", "csv"], default="json")

    moments = sub.add_parser("moments", help="compute a moment sequence")
    msub = moments.add_subparsers(dest="kind", required=True)
    q = msub.add_parser("quantum", help="FU_n, FO_n or FS_n (FU also covers FU(Q))")
    q.add_argument("--family", required=True, type=str.lower, choices=["fu", "fo", "fs"])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--max-k", type=int, default=16)
    q.add_argument("--method", default="partition_count",
                   choices=["count", "rank", "closed", *qmoments.METHODS])
    common(q, fmt=True)
    q.set_defaults(func=cmd_moments_quantum)

    g = msub.add_parser("group", help="finitely generated group by word counting")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", help="free:N, abelian:D, cyclic:M, trivial:N, freeprod:..., prod(A,B)")
    src.add_argument("--table", help="finite_table JSON file")
    g.add_argument("--max-k", type=int, default=16)
    g.add_argument("--memory-budget", type=int, default=None,
                   help=f"bytes; overrides ${groups.MEMORY_BUDGET_ENV}")
    g.add_argument("--no-lump", action="store_true", help="disable orbit lumping")
    common(g, fmt=True)
    g.set_defaults(func=cmd_moments_group)

    check = sub.add_parser("check", help="run checks on moment sequences")
    csub = check.add_subparsers(dest="check", required=True)
    conv = csub.add_parser("convolution", help="A_k dominance checks (a), (b), (c)")
    conv.add_argument("--in", dest="input", required=True)
    conv.add_argument("--require-c", action="store_true", help="also fail when (c) does not hold")
    common(conv)
    conv.set_defaults(func=cmd_check_convolution)

    mono = csub.add_parser("monotone", help="m_k(source) <= m_k(target) for a quotient map")
    mono.add_argument("--source")
    mono.add_argument("--target")
    mono.add_argument("--hom", help="homomorphism JSON {source, target, images}")
    mono.add_argument("--max-k", type=int, default=12)
    mono.add_argument("--memory-budget", type=int, default=None)
    common(mono)
    mono.set_defaults(func=cmd_check_monotone)

    hank = csub.add_parser("hankel", help="Hankel PSD and even log-convexity")
    hank.add_argument("--in", dest="input", required=True)
    common(hank)
    hank.set_defaults(func=cmd_check_hankel)

    norm = sub.add_parser("norm", help="estimate the operator norm lim m_2k^(1/2k)")
    norm.add_argument("--in", dest="input", required=True)
    norm.add_argument("--certify", action="store_true", help="run the minorant certificate")
    norm.add_argument("--horizon", type=int, default=analysis.DEFAULT_HORIZON)
    norm.add_argument("--digits", type=int, default=analysis.DEFAULT_DIGITS)
    norm.add_argument("--table-out", help="CSV (k, root, ratio, fit) for plotting")
    common(norm)
    norm.set_defaults(func=cmd_norm)

    dims = sub.add_parser("dims", help="dimension of the fixed space for one color word")
    dims.add_argument("--word", required=True, help="color word over {1,c}, e.g. 1c1c")
    dims.add_argument("--class", dest="cls", required=True, type=str.lower,
                      choices=[c.value for c in partitions.PartitionClass])
    dims.add_argument("--n", type=int, required=True)
    dims.add_argument("--method", choices=["count", "rank"], default="rank")
    dims.add_argument("--gram", action="store_true", help="include the Gram matrix")
    common(dims)
    dims.set_defaults(func=cmd_dims)

    lemma = sub.add_parser("verify-lemma", help="block decomposition inequality and nesting injectivity")
    which = lemma.add_mutually_exclusive_group(required=True)
    which.add_argument("--word")
    which.add_argument("--max-length", type=int, help="all even-length words up to this length")
    lemma.add_argument("--class", dest="cls", default="nc", type=str.lower,
                       choices=[c.value for c in partitions.PartitionClass])
    common(lemma)
    lemma.set_defaults(func=cmd_verify_lemma)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FreeMomentsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
