import argparse
from typing import Optional

from ..hyperbolic import cone_membership, is_hyperbolic
from ..schemas import HyperbolicOut, PolynomialIn
from . import emit, parse_vector, read_payload


def handle(args: argparse.Namespace) -> int:
    f = PolynomialIn.model_validate(read_payload(args)).to_poly(args.exact)
    e = parse_vector(args.direction, args.exact, "direction")
    verdict = is_hyperbolic(f, e, args.samples, args.seed)
    in_cone: Optional[bool] = None
    if args.point is not None:
        in_cone = cone_membership(f, e, parse_vector(args.point, args.exact, "point"))
    emit(HyperbolicOut.build(verdict, in_cone))
    return 0


def register(subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]") -> None:
    parser = subparsers.add_parser(
        "hyperbolic", help="sampled hyperbolicity test and cone membership"
    )
    parser.add_argument("--direction", required=True)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--point", help="also test membership in the open cone")
    parser.set_defaults(handler=handle)
