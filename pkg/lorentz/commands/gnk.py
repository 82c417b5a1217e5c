import argparse

from ..errors import InvalidInputError
from ..lps import (
    gnk_nested_check,
    gnk_nested_values,
    gnk_normalized,
    gnk_per_closed_form,
    nls_positivity_predicate,
)
from ..schemas import GnkOut, NestedValueOut
from . import emit


def handle(args: argparse.Namespace) -> int:
    out = GnkOut(n=args.n, k=args.k)
    if args.k is None and not args.nested:
        raise InvalidInputError("--k is required unless --nested is given")
    if args.k is not None:
        if args.normalized:
            normalized = gnk_normalized(args.n, args.k)
            out.per = str(normalized.per)
            out.matrix = [[str(v) for v in row] for row in normalized.matrix.rows]
        else:
            out.per = str(gnk_per_closed_form(args.n, args.k))
        if args.check_sign:
            verdict = nls_positivity_predicate(args.n, args.k)
            out.guaranteed_positive = verdict.guaranteed_positive
            out.reason = verdict.reason
    if args.nested:
        values = gnk_nested_values(args.n)
        out.nested = [NestedValueOut(k=k, per=str(value)) for k, value in values]
        out.nested_holds = gnk_nested_check(args.n)
    emit(out)
    return 0


def register(subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]") -> None:
    parser = subparsers.add_parser(
        "gnk", help="exact permanents of the locally singular matrices G(n, k)"
    )
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--k", type=int)
    parser.add_argument(
        "--normalized", action="store_true", help="report G(n, k)/n and its permanent"
    )
    parser.add_argument(
        "--check-sign",
        action="store_true",
        help="apply the sufficient condition for a positive permanent",
    )
    parser.add_argument(
        "--nested",
        action="store_true",
        help="compare per(G(n, k)) across every k above sqrt(2(n - 1))",
    )
    parser.set_defaults(handler=handle)
