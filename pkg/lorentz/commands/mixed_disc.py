import argparse
from typing import Any

from ..mixeddisc import md_via_coefficients, mixed_discriminant
from ..numeric import close, format_scalar
from ..schemas import MixedDiscIn, MixedDiscOut
from . import emit, read_payload


def handle(args: argparse.Namespace) -> int:
    payload: Any = read_payload(args)
    if isinstance(payload, list):
        payload = {"matrices": payload}
    request = MixedDiscIn.model_validate(payload)
    matrices = request.to_matrices(args.exact)
    value = mixed_discriminant(matrices, request.multiplicities)
    out = MixedDiscOut(value=format_scalar(value))
    if args.check:
        other = md_via_coefficients(matrices, request.multiplicities)
        out = MixedDiscOut(
            value=out.value,
            via_coefficients=format_scalar(other),
            agree=close(value, other),
        )
    emit(out)
    return 0


def register(subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]") -> None:
    parser = subparsers.add_parser(
        "mixed-disc", help="mixed discriminant of matrices with multiplicities"
    )
    parser.add_argument(
        "--check",
        action="store_true",
        help="cross-check against the determinantal coefficient",
    )
    parser.set_defaults(handler=handle)
