"""Command-line front end. Every command writes JSON to standard output.

Exit status: 0 on success, 1 on a domain error (reported as a JSON object
with ``error`` and ``type``), 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from contextlib import nullcontext
from fractions import Fraction
from importlib import resources
from typing import Any, Callable, Iterable, TextIO

from . import monolith, zpmodule
from .classify import RationalsSum, characteristically_simple, dual_canonical
from .duality import dual
from .errors import LCAError
from .laurent import LaurentElt
from .padic import PAdic
from .predicates import predicate_vector
from .terms import parse_expr, render, to_json, validate

__all__ = ["main", "build_parser", "classify_line", "load_corpus", "replay_corpus"]

CORPUS_RESOURCE = "golden_corpus.txt"

# errors reported as domain failures rather than crashes
_DOMAIN_ERRORS = (LCAError, ValueError, ArithmeticError)


class _UsageError(Exception):
    pass


def _error_record(exc: BaseException) -> dict[str, Any]:
    return {"error": str(exc), "type": type(exc).__name__}


def _emit(doc: Any, out: TextIO) -> None:
    out.write(json.dumps(doc, sort_keys=False) + "\n")


def _verdict_json(text: str) -> dict[str, Any]:
    verdict = characteristically_simple(parse_expr(text))
    doc = verdict.to_json()
    return {k: v for k, v in doc.items() if v is not None}


def classify_line(line: str) -> dict[str, Any]:
    """Classification record for one batch line; errors become records."""
    try:
        return _verdict_json(line)
    except _DOMAIN_ERRORS as exc:
        return {"input": line, **_error_record(exc)}


# -- term commands ------------------------------------------------------------


def _cmd_parse(args, out):
    expr = parse_expr(args.term)
    _emit({"term": render(expr), "ast": to_json(expr)}, out)
    return 0


def _cmd_validate(args, out):
    report = validate(parse_expr(args.term))
    _emit(report.to_json(), out)
    return 0 if report.valid else 1


def _cmd_dual(args, out):
    _emit({"result": render(dual(parse_expr(args.term)))}, out)
    return 0


def _cmd_predicates(args, out):
    _emit(predicate_vector(parse_expr(args.term)).to_json(), out)
    return 0


def _batch_lines(args) -> Iterable[str]:
    ctx = nullcontext(sys.stdin) if args.file == "-" else open(args.file, encoding="utf-8")
    with ctx as fh:
        for raw in fh:
            yield raw.rstrip("\n")


def _cmd_classify(args, out):
    if args.file is None:
        if args.term is None:
            raise _UsageError("classify needs a term or --file")
        _emit(_verdict_json(args.term), out)
        return 0
    status = 0
    for line in _batch_lines(args):
        rec = classify_line(line)
        if "error" in rec:
            status = 1
        _emit(rec, out)
    return status


# -- zp -----------------------------------------------------------------------


def _vectors_arg(text: str) -> list[list[int]]:
    doc = json.loads(text)
    if not isinstance(doc, list) or not all(isinstance(v, list) for v in doc):
        raise ValueError("expected a JSON array of vectors")
    return [[Fraction(str(x)) for x in v] for v in doc]


def _vector_arg(text: str) -> list[Fraction]:
    doc = json.loads(text)
    if not isinstance(doc, list):
        raise ValueError("expected a JSON array")
    return [Fraction(str(x)) for x in doc]


def _cmd_zp(args, out):
    p, M = args.p, args.precision or zpmodule.DEFAULT_PRECISION
    vecs = _vectors_arg(args.vectors)
    ambient = args.ambient if args.ambient is not None else (len(vecs[0]) if vecs else 0)
    if args.op == "triangularize":
        _emit(zpmodule.triangular_basis(vecs, ambient, p, M).to_json(), out)
    elif args.op == "pure":
        _emit({"pure": zpmodule.is_pure(vecs, ambient, p, M)}, out)
    elif args.op == "complete":
        _emit(zpmodule.complete_to_summand(vecs, ambient, p, M).to_json(), out)
    else:
        if args.v is None or args.n is None:
            raise _UsageError("zp root needs --v and --n")
        w = zpmodule.has_root(_vector_arg(args.v), args.n, vecs, p, M)
        _emit({"root": None if w is None else [str(x) for x in w]}, out)
    return 0


# -- verify -------------------------------------------------------------------


def _scenario_wreath(args):
    q = args.q or 4
    k = args.k or 3
    return monolith.wreath_monolith_window(monolith.FiniteGroupSpec(q), k,
                                           args.trials or 100, args.seed)


def _scenario_laurent(args):
    g = LaurentElt.parse(args.g) if args.g else None
    return monolith.laurent_ideal_density(args.p or 2, args.window or 16,
                                          args.trials or 1, args.seed, g)


def _scenario_qp(args):
    p = args.p or 2
    M = args.precision or 64
    a = PAdic.parse(args.a) if args.a and "mod" in args.a else Fraction(args.a or "1")
    return monolith.qp_semidirect_monolith(p, args.K if args.K is not None else 3, a, M)


def _scenario_hall(args):
    primes = json.loads(args.primes) if args.primes else [2, 3, 5]
    v = _vector_arg(args.v) if args.v else [1] + [0] * (len(primes) - 1)
    return monolith.hall_window_minimality(len(primes), primes, v,
                                           require_distinct=not args.allow_repeats)


def _scenario_no_go(args):
    mats = json.loads(args.matrices) if args.matrices else [[["2/3"]]]
    mats = [[[Fraction(str(x)) for x in row] for row in m] for m in mats]
    cert = monolith.rational_no_go(mats)
    ok, word = monolith.check_no_go_words(cert, args.trials or 1000, 6, args.seed)
    n = len(mats[0])
    rationals, dual_form = _dual_statement(n)
    doc = cert.to_json()
    doc["words_checked"] = args.trials or 1000
    doc["words_ok"] = ok
    if word is not None:
        doc["bad_word"] = word
    doc["dual_statement"] = (
        f"{rationals} is not realizable as a minimal closed normal subgroup of a "
        f"compactly generated group; neither is its dual {dual_form}")
    return doc


def _dual_statement(n: int) -> tuple[str, str]:
    c = RationalsSum(n)
    return str(c), str(dual_canonical(c))


def _scenario_diagonals(args):
    p = args.p or 2
    M = args.precision or 16
    lams = json.loads(args.lambdas) if args.lambdas else list(range(1, 11))
    lams = [Fraction(str(x)) for x in lams]
    return monolith.diagonal_minimals(p, lams, args.K if args.K is not None else 3, M)


_SCENARIOS: dict[str, Callable] = {
    "wreath": _scenario_wreath,
    "laurent": _scenario_laurent,
    "qp-semidirect": _scenario_qp,
    "hall": _scenario_hall,
    "no-go": _scenario_no_go,
    "diagonals": _scenario_diagonals,
}


def _cmd_verify(args, out):
    result = _SCENARIOS[args.scenario](args)
    doc = result if isinstance(result, dict) else result.to_json()
    _emit({"scenario": args.scenario, **doc}, out)
    ok = doc.get("target_contained", doc.get("words_ok", True))
    return 0 if ok else 1


# -- corpus -------------------------------------------------------------------


def load_corpus(text: str | None = None) -> list[tuple[str, str, str]]:
    """(kind, term, expected) triples from the corpus text, skipping comments."""
    if text is None:
        text = resources.files("lcagroups.data").joinpath(CORPUS_RESOURCE).read_text("utf-8")
    entries = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        kind, _, rest = line.partition(" ")
        term, sep, expected = rest.partition("|")
        if kind not in ("classify", "dual") or not sep:
            raise ValueError(f"corpus line {n} is malformed: {raw!r}")
        entries.append((kind, term.strip(), expected.strip()))
    return entries


def replay_corpus(entries) -> list[dict[str, str]]:
    """Mismatches between recorded and recomputed results."""
    bad = []
    for kind, term, expected in entries:
        try:
            expr = parse_expr(term)
            got = str(characteristically_simple(expr)) if kind == "classify" else render(dual(expr))
        except _DOMAIN_ERRORS as exc:
            got = f"error {type(exc).__name__}"
        if got != expected:
            bad.append({"kind": kind, "term": term, "expected": expected, "got": got})
    return bad


def _cmd_corpus(args, out):
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            entries = load_corpus(fh.read())
    else:
        entries = load_corpus()
    bad = replay_corpus(entries)
    _emit({"entries": len(entries), "mismatches": bad}, out)
    return 1 if bad else 0


# -- parser -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(json.dumps({"error": message, "type": "UsageError"}) + "\n")
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="emit JSON (the only output format; accepted for uniformity)")
    common.add_argument("--precision", type=int, help="p-adic precision M")
    common.add_argument("--window", type=int, help="truncation window N")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int)

    parser = _Parser(prog="lcagroups", description="Abelian locally compact group toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, helptext in (("parse", "parse and print a term"),
                           ("validate", "check local-compactness side conditions"),
                           ("dual", "Pontryagin dual of a term"),
                           ("predicates", "structural predicate vector")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("term")

    sp = sub.add_parser("classify", parents=[common], help="characteristic simplicity verdict")
    sp.add_argument("term", nargs="?")
    sp.add_argument("--file", help="batch input, one term per line ('-' for stdin)")

    sp = sub.add_parser("zp", parents=[common], help="Z_p-module linear algebra")
    sp.add_argument("op", choices=["triangularize", "pure", "complete", "root"])
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--vectors", required=True, help="JSON array of integer vectors")
    sp.add_argument("--ambient", type=int)
    sp.add_argument("--v", help="JSON vector (root)")
    sp.add_argument("--n", type=int, help="root order (root)")

    sp = sub.add_parser("verify", parents=[common], help="run a monolith scenario")
    sp.add_argument("scenario", choices=sorted(_SCENARIOS))
    sp.add_argument("--q", type=int, help="field size for AGL1(q)")
    sp.add_argument("--k", type=int, help="cyclic window size")
    sp.add_argument("--p", type=int)
    sp.add_argument("--K", type=int, help="shift range")
    sp.add_argument("--a", help="p-adic literal or rational")
    sp.add_argument("--g", help="Laurent series, e.g. '1 + t (p=3)'")
    sp.add_argument("--primes", help="JSON list of primes")
    sp.add_argument("--allow-repeats", action="store_true")
    sp.add_argument("--v", help="JSON rational vector")
    sp.add_argument("--matrices", help="JSON list of rational matrices")
    sp.add_argument("--lambdas", help="JSON list of rationals")

    sp = sub.add_parser("corpus", parents=[common], help="replay the golden corpus")
    sp.add_argument("--file", help="corpus file (defaults to the bundled one)")
    return parser


_COMMANDS = {
    "parse": _cmd_parse, "validate": _cmd_validate, "dual": _cmd_dual,
    "predicates": _cmd_predicates, "classify": _cmd_classify, "zp": _cmd_zp,
    "verify": _cmd_verify, "corpus": _cmd_corpus,
}


def main(argv: list[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args, out)
    except _UsageError as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "type": "UsageError"}) + "\n")
        return 2
    except (json.JSONDecodeError, OSError) as exc:
        _emit(_error_record(exc), out)
        return 1
    except _DOMAIN_ERRORS as exc:
        _emit(_error_record(exc), out)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
