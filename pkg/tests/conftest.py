"""
Pytest configuration and shared fixtures.
Provides the polynomials and matrices the suites keep coming back to.
"""

import json
from pathlib import Path
from typing import Any, Callable, Tuple

import pytest

from lorentz import cli
from lorentz.lps import gnk
from lorentz.numeric import Rows
from lorentz.permanent import generating_polynomial
from lorentz.poly import MultiPoly

CliRunner = Callable[..., Tuple[int, str, str]]


@pytest.fixture
def g42() -> Rows:
    """G(4,2): ones on the diagonal, -1 elsewhere."""
    return gnk(4, 2).rows


@pytest.fixture
def quartic(g42: Rows) -> MultiPoly:
    """
    Generating polynomial of G(4,2), prod_j (2 x_j - sum x).
    Its Hessian at the all-ones point is 16 (J - I).
    """
    return generating_polynomial(g42)


@pytest.fixture
def quadric() -> MultiPoly:
    """x1^2 - x2^2 - x3^2, hyperbolic in direction e1."""
    return MultiPoly(3, {(2, 0, 0): 1, (0, 2, 0): -1, (0, 0, 2): -1})


@pytest.fixture
def e2() -> MultiPoly:
    """Second elementary symmetric polynomial in three variables."""
    return MultiPoly(3, {(1, 1, 0): 1, (1, 0, 1): 1, (0, 1, 1): 1})


@pytest.fixture
def write_json(tmp_path: Path) -> Callable[[Any], str]:
    """Write a payload to a temporary JSON file and return its path."""

    def write(payload: Any) -> str:
        path = tmp_path / "input.json"
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture
def run_cli(capsys: pytest.CaptureFixture[str]) -> CliRunner:
    """Run the CLI in-process and return (exit code, stdout, stderr)."""

    def run(*argv: str) -> Tuple[int, str, str]:
        code = cli.run(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run


@pytest.fixture
def remark_cubic() -> MultiPoly:
    """-2 x1^3 + 12 x1^2 x2 + 18 x1 x2^2 - 8 x2^3."""
    return MultiPoly(2, {(3, 0): -2, (2, 1): 12, (1, 2): 18, (0, 3): -8})
