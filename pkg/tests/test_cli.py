"""
Integration tests for the lorentz command line.
Each test runs the CLI in-process and parses what it writes to stdout.
"""

import io
import json
from fractions import Fraction
from typing import Any, Callable, Dict, List, Tuple, Type

import pytest
from pydantic import BaseModel

from lorentz.poly import MultiPoly
from lorentz.schemas import (
    CapacityOut,
    GnkOut,
    HyperbolicOut,
    MixedDiscOut,
    PermanentOut,
    PolynomialIn,
    SignatureOut,
)

CliRunner = Callable[..., Tuple[int, str, str]]
WriteJson = Callable[[Any], str]

G42_ROWS = [[1 if i == j else -1 for j in range(4)] for i in range(4)]
QUADRIC = {
    "nvars": 3,
    "terms": [
        {"exp": [2, 0, 0], "coef": 1},
        {"exp": [0, 2, 0], "coef": -1},
        {"exp": [0, 0, 2], "coef": -1},
    ],
}


def polynomial_payload(f: MultiPoly) -> Dict[str, Any]:
    return PolynomialIn.from_poly(f).model_dump()


@pytest.mark.integration
class TestPermanentCommand:
    """Tests for `lorentz permanent`."""

    def test_exact_g42(self, run_cli: CliRunner, write_json: WriteJson) -> None:
        """per G(4,2) is printed as an exact string."""
        path = write_json({"rows": G42_ROWS})

        code, out, _ = run_cli("--exact", "--input", path, "permanent")

        assert code == 0
        body = json.loads(out)
        assert body["value"] == "8"
        assert body["method"] == "ryser"

    def test_float_mode(self, run_cli: CliRunner, write_json: WriteJson) -> None:
        """Without --exact the value is a JSON number."""
        path = write_json({"rows": [[1, 2], [3, 4]]})

        code, out, _ = run_cli("--input", path, "permanent", "--method", "naive")

        assert code == 0
        assert abs(json.loads(out)["value"] - 10.0) < 1e-12

    def test_rational_entries(self, run_cli: CliRunner, write_json: WriteJson) -> None:
        """Rational strings stay exact."""
        path = write_json({"rows": [["1/2", "1/3"], [1, 1]]})

        code, out, _ = run_cli("--exact", "--input", path, "permanent")

        assert code == 0
        assert json.loads(out)["value"] == "5/6"

    def test_capacity_method(self, run_cli: CliRunner, write_json: WriteJson) -> None:
        """The capacity method reports an upper bound with diagnostics."""
        path = write_json({"rows": [[1, 1, 1], [1, 1, 1], [1, 1, 1]]})

        code, out, _ = run_cli("--input", path, "permanent", "--method", "capacity")

        body = json.loads(out)
        assert code == 0
        assert body["diagnostics"]["upper_bound"] is True
        assert body["value"] >= 6.0 - 1e-9

    def test_reads_stdin(
        self, run_cli: CliRunner, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        """The default input is stdin."""
        monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps({"rows": [[2]]})))

        code, out, _ = run_cli("--exact", "permanent")

        assert code == 0
        assert json.loads(out)["value"] == "2"


@pytest.mark.integration
class TestSignatureCommand:
    """Tests for `lorentz signature`."""

    def test_quartic_hessian(
        self, run_cli: CliRunner, write_json: WriteJson, quartic: MultiPoly
    ) -> None:
        """The generating polynomial of G(4,2) is strictly Lorentzian at 1."""
        path = write_json(polynomial_payload(quartic))

        code, out, _ = run_cli("--input", path, "signature", "--point", "1,1,1,1")

        body = json.loads(out)
        assert code == 0
        assert body["class"] == "LORENTZIAN_STRICT"
        assert body["inertia"] == [1, 0, 3]

    def test_matrix_input(self, run_cli: CliRunner, write_json: WriteJson) -> None:
        """A symmetric matrix is classified directly."""
        path = write_json({"rows": [[1, 0], [0, 1]]})

        code, out, _ = run_cli("--input", path, "signature")

        assert code == 0
        assert json.loads(out)["class"] == "NOT_LORENTZIAN"

    def test_polynomial_needs_point(
        self, run_cli: CliRunner, write_json: WriteJson
    ) -> None:
        """A polynomial without --point is a usage error."""
        path = write_json(QUADRIC)

        code, _, err = run_cli("--input", path, "signature")

        assert code == 2
        assert "--point" in err


@pytest.mark.integration
class TestHyperbolicCommand:
    """Tests for `lorentz hyperbolic`."""

    def test_quadric(self, run_cli: CliRunner, write_json: WriteJson) -> None:
        """Hyperbolic in e1 with (2, 1, 1) inside the cone."""
        path = write_json(QUADRIC)

        code, out, _ = run_cli(
            "--seed",
            "7",
            "--input",
            path,
            "hyperbolic",
            "--direction",
            "1,0,0",
            "--samples",
            "16",
            "--point",
            "2,1,1",
        )

        body = json.loads(out)
        assert code == 0
        assert body["holds"] is True
        assert body["n_samples"] == 16
        assert body["seed"] == 7
        assert body["in_cone"] is True

    def test_vanishing_direction(
        self, run_cli: CliRunner, write_json: WriteJson
    ) -> None:
        """f(e) = 0 exits with the invalid-input code."""
        path = write_json(QUADRIC)

        code, _, _ = run_cli("--input", path, "hyperbolic", "--direction", "1,1,0")

        assert code == 2


@pytest.mark.integration
class TestCapacityCommand:
    """Tests for `lorentz capacity`."""

    def test_square_of_sum(self, run_cli: CliRunner, write_json: WriteJson) -> None:
        """Cap of (x1 + x2)^2 is 4."""
        path = write_json(
            {
                "nvars": 2,
                "terms": [
                    {"exp": [2, 0], "coef": 1},
                    {"exp": [1, 1], "coef": 2},
                    {"exp": [0, 2], "coef": 1},
                ],
            }
        )

        code, out, _ = run_cli("--input", path, "capacity", "--starts", "4")

        body = json.loads(out)
        assert code == 0
        assert body["feasible"] is True
        assert abs(body["value"] - 4.0) < 1e-9

    def test_infeasible_exit_code(
        self, run_cli: CliRunner, write_json: WriteJson
    ) -> None:
        """-x1 x2 has no feasible point on the orthant."""
        path = write_json({"nvars": 2, "terms": [{"exp": [1, 1], "coef": -1}]})

        code, out, _ = run_cli("--input", path, "capacity")

        body = json.loads(out)
        assert code == 4
        assert body["feasible"] is False
        assert "value" not in body

    def test_matrix_over_hyperbolicity_cone(
        self, run_cli: CliRunner, write_json: WriteJson
    ) -> None:
        """A doubly stochastic matrix has permanent capacity 1."""
        third = "1/3"
        path = write_json({"rows": [[third] * 3 for _ in range(3)]})

        code, out, _ = run_cli(
            "--input", path, "capacity", "--cone", "hyperbolicity", "--starts", "4"
        )

        assert code == 0
        assert abs(json.loads(out)["value"] - 1.0) < 1e-9

    def test_wrapped_cone(self, run_cli: CliRunner, write_json: WriteJson) -> None:
        """A cone given in the payload is used instead of the orthant."""
        path = write_json(
            {
                "polynomial": {
                    "nvars": 2,
                    "terms": [
                        {"exp": [2, 0], "coef": 1},
                        {"exp": [1, 1], "coef": 2},
                        {"exp": [0, 2], "coef": 1},
                    ],
                },
                "cone": {"variant": "generators", "generators": [[1, 0], [1, 1]]},
            }
        )

        code, out, _ = run_cli("--input", path, "capacity", "--starts", "4")

        assert code == 0
        assert json.loads(out)["value"] >= 4.0 - 1e-9


@pytest.mark.integration
class TestMixedDiscCommand:
    """Tests for `lorentz mixed-disc`."""

    def test_checked_value(self, run_cli: CliRunner, write_json: WriteJson) -> None:
        """D(I, diag(2, 3)) = 5 by both methods."""
        path = write_json([{"rows": [[1, 0], [0, 1]]}, {"rows": [[2, 0], [0, 3]]}])

        code, out, _ = run_cli("--exact", "--input", path, "mixed-disc", "--check")

        assert code == 0
        assert json.loads(out) == {"value": "5", "via_coefficients": "5", "agree": True}

    def test_multiplicities(self, run_cli: CliRunner, write_json: WriteJson) -> None:
        """D(A, A) = det A."""
        path = write_json(
            {"matrices": [{"rows": [[2, 1], [1, 3]], "multiplicity": 2}]}
        )

        code, out, _ = run_cli("--exact", "--input", path, "mixed-disc")

        assert code == 0
        assert json.loads(out)["value"] == "5"


@pytest.mark.integration
class TestGnkCommand:
    """Tests for `lorentz gnk`."""

    def test_negative_permanent(self, run_cli: CliRunner) -> None:
        """per G(9,3) < 0 and the sufficient condition does not apply."""
        code, out, _ = run_cli("gnk", "--n", "9", "--k", "3", "--check-sign")

        body = json.loads(out)
        assert code == 0
        assert Fraction(body["per"]) < 0
        assert body["guaranteed_positive"] is False

    def test_normalized(self, run_cli: CliRunner) -> None:
        """G(4,2)/4 has permanent 1/32."""
        code, out, _ = run_cli("gnk", "--n", "4", "--k", "2", "--normalized")

        body = json.loads(out)
        assert code == 0
        assert body["per"] == "1/32"
        assert body["matrix"][0][:2] == ["1/4", "-1/4"]

    def test_nested(self, run_cli: CliRunner) -> None:
        """For n = 9 the admissible k are 5 through 8."""
        code, out, _ = run_cli("gnk", "--n", "9", "--nested")

        body = json.loads(out)
        assert code == 0
        assert [entry["k"] for entry in body["nested"]] == [5, 6, 7, 8]
        assert body["nested_holds"] is True

    def test_k_required(self, run_cli: CliRunner) -> None:
        """--k may only be left out with --nested."""
        code, _, _ = run_cli("gnk", "--n", "9")

        assert code == 2


@pytest.mark.integration
class TestConeSampleCommand:
    """Tests for `lorentz cone-sample`."""

    def test_header_only(self, run_cli: CliRunner, write_json: WriteJson) -> None:
        """Zero points print the header line only."""
        path = write_json(QUADRIC)

        code, out, _ = run_cli(
            "--input", path, "cone-sample", "--direction", "1,0,0", "--points", "0"
        )

        assert code == 0
        assert out == "x1,x2,x3,on_boundary\n"

    def test_boundary_points(self, run_cli: CliRunner, write_json: WriteJson) -> None:
        """Rows flagged as boundary points lie on x1^2 = x2^2 + x3^2."""
        path = write_json(QUADRIC)

        code, out, _ = run_cli(
            "--input", path, "cone-sample", "--direction", "1,0,0", "--points", "5"
        )

        lines = out.strip().splitlines()
        assert code == 0
        assert len(lines) == 6
        for line in lines[1:]:
            *xs, flag = line.split(",")
            x1, x2, x3 = (float(v) for v in xs)
            assert flag in ("0", "1")
            if flag == "0":
                continue
            scale = x1 * x1 + x2 * x2 + x3 * x3
            assert abs(x1 * x1 - x2 * x2 - x3 * x3) <= 1e-6 * scale

    def test_deterministic(self, run_cli: CliRunner, write_json: WriteJson) -> None:
        """The same seed gives byte-identical CSV."""
        path = write_json(QUADRIC)
        argv = ("--seed", "3", "--input", path, "cone-sample", "--direction", "1,0,0")

        first = run_cli(*argv, "--points", "4")
        second = run_cli(*argv, "--points", "4")

        assert first == second


@pytest.mark.integration
class TestErrors:
    """Tests for exit codes on bad input."""

    def test_malformed_json(self, run_cli: CliRunner, tmp_path: Any) -> None:
        """Unparseable JSON is an invalid-input error."""
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")

        code, out, err = run_cli("--input", str(path), "permanent")

        assert code == 2
        assert out == ""
        assert err.startswith("error:")

    def test_schema_violation(self, run_cli: CliRunner, write_json: WriteJson) -> None:
        """A payload of the wrong shape is rejected."""
        path = write_json({"rows": "not a matrix"})

        code, _, _ = run_cli("--input", path, "permanent")

        assert code == 2

    def test_missing_file(self, run_cli: CliRunner, tmp_path: Any) -> None:
        """An unreadable input file is an invalid-input error."""
        code, _, err = run_cli("--input", str(tmp_path / "missing.json"), "permanent")

        assert code == 2
        assert "cannot read" in err

    def test_non_square_matrix(self, run_cli: CliRunner, write_json: WriteJson) -> None:
        """Shape errors from the library map to exit code 2."""
        path = write_json({"rows": [[1, 2, 3], [4, 5, 6]]})

        code, _, _ = run_cli("--input", path, "permanent")

        assert code == 2

    def test_version(self, run_cli: CliRunner) -> None:
        """--version exits cleanly."""
        with pytest.raises(SystemExit) as exc_info:
            run_cli("--version")

        assert exc_info.value.code == 0

    def test_unexpected_failure(
        self, run_cli: CliRunner, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        """An error outside the library hierarchy maps to exit code 3."""

        def broken(n: int, k: int) -> Fraction:
            raise RuntimeError("closed form unavailable")

        monkeypatch.setattr("lorentz.commands.gnk.gnk_per_closed_form", broken)

        code, out, err = run_cli("gnk", "--n", "4", "--k", "2")

        assert code == 3
        assert out == ""
        assert "error: internal failure: closed form unavailable" in err


SQUARE_OF_SUM = {
    "nvars": 2,
    "terms": [
        {"exp": [2, 0], "coef": 1},
        {"exp": [1, 1], "coef": 2},
        {"exp": [0, 2], "coef": 1},
    ],
}
ROUND_TRIPS = [
    ({"rows": G42_ROWS}, ["--exact"], ["permanent"], PermanentOut),
    (
        {"rows": [[1, 1], [1, 1]]},
        [],
        ["permanent", "--method", "capacity"],
        PermanentOut,
    ),
    (QUADRIC, [], ["signature", "--point", "1,0,0"], SignatureOut),
    (
        QUADRIC,
        ["--seed", "3"],
        ["hyperbolic", "--direction", "1,0,0", "--samples", "8", "--point", "2,1,1"],
        HyperbolicOut,
    ),
    (SQUARE_OF_SUM, [], ["capacity", "--starts", "2"], CapacityOut),
    (
        [{"rows": [[1, 0], [0, 1]]}, {"rows": [[2, 0], [0, 3]]}],
        ["--exact"],
        ["mixed-disc", "--check"],
        MixedDiscOut,
    ),
    (
        None,
        [],
        ["gnk", "--n", "9", "--k", "3", "--normalized", "--check-sign", "--nested"],
        GnkOut,
    ),
]


@pytest.mark.integration
class TestOutputRoundTrip:
    """Every response re-parses into its schema and dumps back unchanged."""

    @pytest.mark.parametrize("payload, options, command, model", ROUND_TRIPS)
    def test_round_trip(
        self,
        run_cli: CliRunner,
        write_json: WriteJson,
        payload: Any,
        options: List[str],
        command: List[str],
        model: Type[BaseModel],
    ) -> None:
        """Parsing stdout and dumping it again gives the same JSON."""
        source = [] if payload is None else ["--input", write_json(payload)]

        code, out, _ = run_cli(*options, *source, *command)

        parsed = model.model_validate_json(out)
        again = parsed.model_dump_json(by_alias=True, exclude_none=True)
        assert code == 0
        assert json.loads(again) == json.loads(out)
