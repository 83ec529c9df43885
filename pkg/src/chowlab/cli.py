"""Command-line interface: ``chowlab <subcommand> [flags]``.

Exit status 0 on success, 1 on mathematical degeneracy (or a failed
verification suite), 2 on malformed input.  Errors are written to stderr
as one JSON object.
"""

import argparse
import csv
import io
import json
import sys

from .char_classes import compute_u_prime
from .cobordism import (ChowElement, FormalVariety, chern_monomials, chern_number_matrix, chern_numbers,
                        cobordism_basis, monomial_label)
from .errors import (ChowlabError, DegeneracyError, InvariantViolation, MissingQueries,
                     OracleNotStandard, StructuralError)
from .graded_ring import Alphabet, format_rational
from .suites import SUITES, run_suite
from .universal_cycles import StandardCycle, TableOracle, decode, decode_suite, evaluate

__all__ = ["main", "run", "build_parser"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _dump(doc):
    return json.dumps(doc, ensure_ascii=False) + "\n"


def _csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise StructuralError("cannot read %s: %s" % (path, exc.strerror)) from exc
    except json.JSONDecodeError as exc:
        raise StructuralError("%s is not valid JSON: %s" % (path, exc)) from exc


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer, got %r" % text) from None
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer, got %d" % value)
    return value


def cmd_chern_numbers(args):
    basis = cobordism_basis(args.dim)
    cols = chern_monomials(args.dim, args.dim)
    if args.format == "csv":
        rows = [["variety"] + [monomial_label(J) for J in cols]]
        for X in basis:
            nums = chern_numbers(X)
            rows.append([X.spec] + [format_rational(nums[J]) for J in cols])
        return _csv(rows)
    doc = {}
    for X in basis:
        nums = chern_numbers(X)
        doc[X.spec] = {monomial_label(J): format_rational(nums[J]) for J in cols}
    return _dump(doc)


def cmd_cobordism_matrix(args):
    M = chern_number_matrix(args.dim)
    if args.format == "csv":
        # row labels are the "rows" field of the JSON form
        rows = [[monomial_label(J) for J in M.cols]]
        rows.extend([format_rational(x) for x in row] for row in M.entries)
        return _csv(rows)
    return _dump(M.to_dict())


def cmd_u_prime(args):
    return _dump(compute_u_prime(args.dim, args.ambient, args.degree).to_dict())


def cmd_evaluate(args):
    Z = StandardCycle.from_dict(_read_json(args.cycle))
    X = FormalVariety.parse(args.variety)
    return _dump(evaluate(Z, X).to_dict())


def load_oracle(path):
    """Oracle file: ``{"coefficient_alphabet", "coefficient_bound", "entries": [{variety, cycle}]}``."""
    data = _read_json(path)
    try:
        coefficients = Alphabet.from_list(data.get("coefficient_alphabet", []))
        bound = int(data.get("coefficient_bound", 0))
        entries = {e["variety"]: ChowElement.from_dict(e["cycle"]) for e in data["entries"]}
    except StructuralError:
        raise
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise StructuralError("malformed oracle file") from exc
    return TableOracle(entries), coefficients, bound


def oracle_document(Z, varieties=None):
    """Oracle file contents listing ``Z`` evaluated on the decoding suite."""
    varieties = decode_suite(Z.d, Z.k) if varieties is None else varieties
    return {"coefficient_alphabet": Z.coefficients.to_list(),
            "coefficient_bound": Z.coefficient_bound,
            "entries": [{"variety": X.spec, "cycle": evaluate(Z, X).to_dict()} for X in varieties]}


def cmd_decode(args):
    oracle, coefficients, bound = load_oracle(args.oracle)
    missing = oracle.missing(decode_suite(args.dim, args.power))
    if missing:
        raise MissingQueries(missing)
    Z = decode(oracle, args.dim, args.power, coefficients, bound)
    return _dump(Z.to_dict())


def cmd_verify(args):
    results = run_suite(args.suite)
    doc = {"suite": args.suite,
           "results": [{"check": name, "passed": bool(ok), "detail": detail}
                       for name, ok, detail in results],
           "passed": all(ok for _, ok, _ in results)}
    return _dump(doc), 0 if doc["passed"] else 1


def build_parser():
    parser = _Parser(prog="chowlab", description="Exact Chern-class and universal-cycle calculus.")
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("chern-numbers", help="Chern numbers of the cobordism basis")
    p.add_argument("--dim", type=_positive, required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_chern_numbers)

    p = sub.add_parser("cobordism-matrix", help="Chern-number matrix with rank certificate")
    p.add_argument("--dim", type=_positive, required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_cobordism_matrix)

    p = sub.add_parser("u-prime", help="the polynomials U'_j and their leading coefficients")
    p.add_argument("--dim", type=_positive, required=True)
    p.add_argument("--ambient", type=_positive, required=True)
    p.add_argument("--degree", type=_positive, required=True)
    p.set_defaults(func=cmd_u_prime)

    p = sub.add_parser("evaluate", help="evaluate a standard cycle on a formal variety")
    p.add_argument("--cycle", required=True)
    p.add_argument("--variety", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("decode", help="decode a standard cycle from an oracle table")
    p.add_argument("--oracle", required=True)
    p.add_argument("--dim", type=_positive, required=True)
    p.add_argument("--power", type=_positive, required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("verify", help="run a named invariant suite")
    p.add_argument("--suite", choices=sorted(SUITES) + ["all"], required=True)
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv):
    """Run one invocation; returns ``(exit status, stdout text, stderr text)``."""
    try:
        args = build_parser().parse_args(argv)
        out = args.func(args)
    except _UsageError as exc:
        return 2, "", _dump({"kind": "usage", "message": str(exc)})
    except (DegeneracyError, OracleNotStandard, InvariantViolation) as exc:
        return 1, "", _dump(exc.payload())
    except ChowlabError as exc:
        return 2, "", _dump(exc.payload())
    if isinstance(out, tuple):
        out, status = out
        return status, out, ""
    return 0, out, ""


def _emit(stream, text):
    # bytes, so output is UTF-8 with LF endings whatever the platform
    if not text:
        return
    buf = getattr(stream, "buffer", None)
    if buf is None:
        stream.write(text)
    else:
        stream.flush()
        buf.write(text.encode("utf-8"))
        buf.flush()


def main(argv=None):
    status, out, err = run(sys.argv[1:] if argv is None else argv)
    _emit(sys.stdout, out)
    _emit(sys.stderr, err)
    return status


if __name__ == "__main__":
    sys.exit(main())
