import argparse
import logging

from ..capacity import CapacityConfig, permanent_capacity
from ..errors import InfeasibleError
from ..models import PermanentMethod
from ..numeric import format_scalar
from ..permanent import permanent
from ..schemas import MatrixIn, PermanentOut
from . import emit, read_payload

logger = logging.getLogger(__name__)


def handle(args: argparse.Namespace) -> int:
    matrix = MatrixIn.model_validate(read_payload(args))
    method = PermanentMethod(args.method)
    if method is PermanentMethod.CAPACITY:
        rows = matrix.to_rows(False)
        result = permanent_capacity(rows, CapacityConfig(seed=args.seed))
        emit(
            PermanentOut(
                value=result.value,
                method=method.value,
                diagnostics={
                    "upper_bound": result.upper_bound,
                    "converged": result.converged,
                    "starts": result.starts,
                    "feasible": result.feasible,
                },
            )
        )
        return 0 if result.feasible else InfeasibleError.exit_code
    value = permanent(matrix.to_rows(args.exact), method)
    logger.info("permanent via %s: %s", method.value, value)
    emit(
        PermanentOut(
            value=format_scalar(value),
            method=method.value,
            diagnostics={"n": len(matrix.rows), "exact": args.exact},
        )
    )
    return 0


def register(subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]") -> None:
    parser = subparsers.add_parser("permanent", help="permanent of a square matrix")
    parser.add_argument(
        "--method",
        choices=[m.value for m in PermanentMethod],
        default=PermanentMethod.RYSER.value,
    )
    parser.set_defaults(handler=handle)
