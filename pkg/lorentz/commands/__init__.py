"""One module per CLI subcommand, each exposing ``register(subparsers)``."""

import argparse
import json
import sys
from typing import Any, List, Optional

from pydantic import BaseModel

from ..errors import InvalidInputError
from ..numeric import Scalar, to_vector


def read_payload(args: argparse.Namespace) -> Any:
    if args.input in (None, "-"):
        text = sys.stdin.read()
    else:
        try:
            with open(args.input, encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise InvalidInputError(f"cannot read {args.input}: {exc.strerror}")
    if not text.strip():
        raise InvalidInputError("empty input")
    return json.loads(text)


def parse_vector(text: Optional[str], exact: bool, what: str) -> List[Scalar]:
    if text is None:
        raise InvalidInputError(f"--{what} is required")
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise InvalidInputError(f"--{what} is empty")
    return to_vector(parts, exact)


def emit(model: BaseModel) -> None:
    sys.stdout.write(model.model_dump_json(by_alias=True, exclude_none=True) + "\n")
