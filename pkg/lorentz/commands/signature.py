import argparse

from ..errors import InvalidInputError
from ..numeric import SymMatrix
from ..poly import hessian_at
from ..schemas import MatrixIn, PolynomialIn, SignatureOut
from ..spectra import eigen_signature
from . import emit, parse_vector, read_payload


def handle(args: argparse.Namespace) -> int:
    payload = read_payload(args)
    if isinstance(payload, dict) and "rows" in payload:
        Q = SymMatrix(MatrixIn.model_validate(payload).to_rows(args.exact))
    else:
        f = PolynomialIn.model_validate(payload).to_poly(args.exact)
        if args.point is None:
            raise InvalidInputError("polynomial input needs --point")
        Q = hessian_at(f, parse_vector(args.point, args.exact, "point"))
    emit(SignatureOut.build(eigen_signature(Q, args.tol)))
    return 0


def register(subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]") -> None:
    parser = subparsers.add_parser(
        "signature",
        help="Hessian inertia of a polynomial at a point, or of a symmetric matrix",
    )
    parser.add_argument("--point", help="comma-separated evaluation point")
    parser.add_argument("--tol", type=float, help="zero band for eigenvalues")
    parser.set_defaults(handler=handle)
