import argparse
import logging
from typing import Any, Optional, Tuple

from ..capacity import CapacityConfig, capacity_estimate, permanent_capacity
from ..errors import InfeasibleError, InvalidInputError
from ..hyperbolic import hyperbolicity_cone, orthant
from ..models import CapacityResult, ConeSpec, ConeVariant
from ..permanent import generating_polynomial
from ..poly import MultiPoly
from ..schemas import CapacityIn, CapacityOut, MatrixIn, PolynomialIn
from . import emit, parse_vector, read_payload

logger = logging.getLogger(__name__)


def _load(
    payload: Any, exact: bool, seed: Optional[int]
) -> Tuple[MultiPoly, Optional[ConeSpec], Optional[MatrixIn]]:
    if isinstance(payload, dict) and "rows" in payload:
        matrix = MatrixIn.model_validate(payload)
        return generating_polynomial(matrix.to_rows(exact)), None, matrix
    if isinstance(payload, dict) and "polynomial" in payload:
        wrapped = CapacityIn.model_validate(payload)
        cone = wrapped.cone.to_cone(exact, seed) if wrapped.cone else None
        return wrapped.polynomial.to_poly(exact), cone, None
    return PolynomialIn.model_validate(payload).to_poly(exact), None, None


def handle(args: argparse.Namespace) -> int:
    cfg = CapacityConfig(starts=args.starts, max_iter=args.max_iter, seed=args.seed)
    f, cone, matrix = _load(read_payload(args), args.exact, args.seed)
    if args.alpha is None:
        alpha = [1] * f.nvars
    else:
        alpha = parse_vector(args.alpha, args.exact, "alpha")
    result: CapacityResult
    if cone is None and args.cone == ConeVariant.HYPERBOLICITY.value:
        if args.direction is None:
            if matrix is None:
                raise InvalidInputError("--cone hyperbolicity needs --direction")
            if args.alpha is not None:
                raise InvalidInputError(
                    "matrix input picks its own direction only for alpha = 1"
                )
            result = permanent_capacity(matrix.to_rows(args.exact), cfg)
            emit(CapacityOut.build(result))
            return 0 if result.feasible else InfeasibleError.exit_code
        direction = parse_vector(args.direction, args.exact, "direction")
        cone = hyperbolicity_cone(f, direction, seed=args.seed)
    if cone is None:
        cone = orthant(f.nvars, args.seed)
    logger.debug("capacity over a %s cone, alpha=%s", cone.variant.value, alpha)
    result = capacity_estimate(f, alpha, cone, cfg)
    emit(CapacityOut.build(result))
    return 0 if result.feasible else InfeasibleError.exit_code


def register(subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]") -> None:
    parser = subparsers.add_parser(
        "capacity",
        help="capacity of a polynomial, or of the generating polynomial of a matrix",
    )
    parser.add_argument("--alpha", help="comma-separated exponent weights")
    parser.add_argument(
        "--cone",
        choices=[ConeVariant.ORTHANT.value, ConeVariant.HYPERBOLICITY.value],
        default=ConeVariant.ORTHANT.value,
    )
    parser.add_argument("--direction", help="comma-separated hyperbolic direction")
    parser.add_argument("--starts", type=int, default=16)
    parser.add_argument("--max-iter", type=int, default=500)
    parser.set_defaults(handler=handle)
