"""Boundary points of a hyperbolicity cone, as CSV for plotting.

Rays leave e in random directions; each is doubled until it exits the cone
and then bisected down to the boundary. A ray that never exits is reported
at its last point with ``on_boundary`` set to 0.
"""

import argparse
import csv
import logging
import sys
from typing import Any, List, Optional, Sequence, TextIO

import numpy as np

from .. import config
from ..errors import InvalidInputError
from ..hyperbolic import cone_membership, is_hyperbolic
from ..poly import MultiPoly, evaluate
from ..schemas import PolynomialIn
from . import parse_vector, read_payload

logger = logging.getLogger(__name__)

BISECTIONS = 60
MAX_DOUBLINGS = 20


def cone_sample(
    f: MultiPoly,
    e: Sequence[Any],
    n_points: int,
    seed: Optional[int] = None,
) -> List[List[float]]:
    """Rows ``[x1, …, xn, on_boundary]`` for ``n_points`` random rays from e."""
    if n_points < 0:
        raise InvalidInputError(f"point count must be non-negative, got {n_points}")
    if evaluate(f, e) < 0:
        f = -f
    if not is_hyperbolic(f, e, seed=seed):
        raise InvalidInputError("polynomial is not hyperbolic in the given direction")
    fast = f.to_float()
    base = np.asarray([float(v) for v in e], dtype=np.float64)
    direction = list(base)
    scale = float(np.linalg.norm(base))
    rng = np.random.default_rng(config.resolve_seed(seed))
    rays = rng.standard_normal((n_points, f.nvars))

    def inside(t: float, ray: np.ndarray) -> bool:
        return cone_membership(fast, direction, list(base + t * ray))

    rows: List[List[float]] = []
    for ray in rays:
        ray = scale * ray / np.linalg.norm(ray)
        lo, hi = 0.0, 1.0
        for _ in range(MAX_DOUBLINGS):
            if not inside(hi, ray):
                break
            lo, hi = hi, 2 * hi
        else:
            rows.append([float(v) for v in base + lo * ray] + [0.0])
            continue
        for _ in range(BISECTIONS):
            mid = (lo + hi) / 2
            if inside(mid, ray):
                lo = mid
            else:
                hi = mid
        rows.append([float(v) for v in base + lo * ray] + [1.0])
    logger.info("sampled %d cone boundary rays", n_points)
    return rows


def write_csv(rows: List[List[float]], nvars: int, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow([f"x{i + 1}" for i in range(nvars)] + ["on_boundary"])
    for row in rows:
        writer.writerow([repr(v) for v in row[:-1]] + [int(row[-1])])


def handle(args: argparse.Namespace) -> int:
    f = PolynomialIn.model_validate(read_payload(args)).to_poly(args.exact)
    e = parse_vector(args.direction, args.exact, "direction")
    rows = cone_sample(f, e, args.points, args.seed)
    write_csv(rows, f.nvars, sys.stdout)
    return 0


def register(subparsers: "argparse._SubParsersAction[argparse.ArgumentParser]") -> None:
    parser = subparsers.add_parser(
        "cone-sample", help="CSV of hyperbolicity cone boundary points"
    )
    parser.add_argument("--direction", required=True)
    parser.add_argument("--points", type=int, default=64)
    parser.set_defaults(handler=handle)
