"""
Contract tests for the command line: output schemas and exit codes.
"""
import io
import os

import pandas as pd
import pytest

from app.cli.main import main
from app.config.constants import CHECK_COLUMNS, EIG_COLUMNS, RUN_COLUMNS

CUBIC_CONFIG = """
grid.n = 99
f = "powersum: 1*u^3"
u0 = "sine: c={c}"
condition.mode = manual
condition.tag = A
condition.alpha = 4
solver.T_max = 1
solver.reaction_fraction = 0.1
"""


def stdout_frame(capsys):
    return pd.read_csv(io.StringIO(capsys.readouterr().out))


@pytest.fixture
def config_path(tmp_path):
    def write(c=6):
        path = tmp_path / f"c{c}.cfg"
        path.write_text(CUBIC_CONFIG.format(c=c))
        return str(path)
    return write


class TestEig:
    """eig prints one CSV row."""

    def test_unit_interval(self, capsys):
        """Test the eig CSV header and value."""
        assert main(["eig", "--dim", "1", "--L", "1", "--n", "999", "--p", "2"]) == 0
        df = stdout_frame(capsys)
        assert list(df.columns) == EIG_COLUMNS
        assert df.loc[0, "lambda"] == pytest.approx(9.8696, rel=1e-3)

    def test_writes_eigenfunction(self, tmp_path, capsys):
        """Test --phi output."""
        path = tmp_path / "phi.csv"
        assert main(["eig", "--n", "49", "--phi", str(path)]) == 0
        assert path.read_text().startswith("# grid dim=1 L=1 n=49\n")

    def test_bad_grid_is_config_error(self, capsys):
        """Test exit 2 on a bad grid."""
        assert main(["eig", "--n", "2"]) == 2
        assert "error" in capsys.readouterr().err


class TestCheck:
    """check exits 0 / 1 / 2 by verdict and 2 on bad parameters."""

    def test_auto_square_source(self, capsys):
        """Test an automatic C check with an eigensolve."""
        code = main(["check", "--f", "powersum: 1*u^2", "--p", "2", "--cond", "C", "--auto", "--domain", "1:1:999"])
        assert code == 0
        df = stdout_frame(capsys)
        assert list(df.columns) == CHECK_COLUMNS
        assert df.loc[0, "satisfied"] == "yes"

    def test_not_satisfied(self, capsys):
        """Test exit 1 when the condition fails."""
        assert main(["check", "--f", "powersum: 1*u", "--cond", "A", "--alpha", "3"]) == 1

    def test_beta_above_bound(self, capsys):
        """Test exit 2 when beta exceeds its bound."""
        code = main(["check", "--f", "powersum: 1*u^3", "--cond", "C", "--alpha", "3", "--beta", "100",
                     "--lambda", "9.8696"])
        assert code == 2
        assert "beta" in capsys.readouterr().err

    def test_c_needs_eigenvalue(self, capsys):
        """C without --lambda or --domain is a config error."""
        assert main(["check", "--f", "powersum: 1*u^3", "--cond", "C", "--alpha", "3"]) == 2
        assert main(["check", "--f", "powersum: 1*u^3", "--cond", "C", "--auto"]) == 2

    @pytest.mark.parametrize("cond", ["A", "B"])
    def test_auto_search_without_eigenvalue(self, cond, capsys):
        """The A and B searches run without an eigenvalue."""
        assert main(["check", "--f", "powersum: 1*u^3", "--cond", cond, "--auto"]) == 0
        df = stdout_frame(capsys)
        assert df.loc[0, "condition"] == cond
        assert df.loc[0, "satisfied"] == "yes"

    def test_table_source_grid_only(self, tmp_path, capsys):
        """Test a table source check."""
        path = tmp_path / "f.csv"
        pd.DataFrame({"u": [0.0, 1.0, 2.0, 10.0], "f": [0.0, 1.0, 8.0, 1000.0]}).to_csv(path, index=False)
        code = main(["check", "--f", f"table: {path}", "--cond", "A", "--alpha", "2.5",
                     "--u-min", "0.5", "--u-max", "5", "--samples", "1000"])
        assert code in (1, 2)


class TestOtherCommands:
    """hierarchy, osgood, bound, simulate and report."""

    def test_hierarchy(self, capsys):
        """Test the hierarchy rows and chain flag."""
        assert main(["hierarchy", "--f", "powersum: 1*u^3", "--lambda", "9.8696"]) == 0
        df = stdout_frame(capsys)
        assert df["condition"].tolist() == ["A", "B", "C"]
        assert df["chain_ok"].all()

    def test_osgood(self, capsys):
        """Test the Osgood integral for u^2."""
        assert main(["osgood", "--f", "powersum: 1*u^2", "--m", "1"]) == 0
        df = stdout_frame(capsys)
        assert not df.loc[0, "divergent"]
        assert df.loc[0, "estimate"] == pytest.approx(1.0, abs=1e-6)

    def test_bound(self, config_path, capsys):
        """Test the bound row for 6 sin(pi x)."""
        assert main(["bound", "--config", config_path(6)]) == 0
        df = stdout_frame(capsys)
        assert df.loc[0, "Tstar_upper"] == pytest.approx(0.803, rel=5e-3)

    def test_bound_without_positive_energy(self, config_path, capsys):
        """Test exit 3 when J(0) <= 0."""
        assert main(["bound", "--config", config_path(4)]) == 3
        assert "J(0)" in capsys.readouterr().err

    def test_missing_config(self, tmp_path):
        """Test exit 2 on a missing config."""
        assert main(["simulate", "--config", str(tmp_path / "missing.cfg")]) == 2

    def test_invalid_config(self, tmp_path):
        """Test exit 2 on an invalid config."""
        path = tmp_path / "bad.cfg"
        path.write_text("solver.safety = 3\n")
        assert main(["simulate", "--config", str(path)]) == 2

    @pytest.mark.slow
    def test_simulate_then_report(self, tmp_path, config_path, capsys):
        """Test that report reproduces run.csv."""
        out = tmp_path / "run"
        assert main(["simulate", "--config", config_path(6), "--out", str(out)]) == 0
        summary = stdout_frame(capsys)
        assert summary.loc[0, "outcome"] == "BlownUp"
        run_csv = out / "run.csv"
        assert run_csv.read_text().splitlines()[0] == ",".join(RUN_COLUMNS)
        before = run_csv.read_bytes()
        assert main(["report", "--run", str(out)]) == 0
        assert run_csv.read_bytes() == before
        assert capsys.readouterr().out.encode() == before

    def test_report_without_run(self, tmp_path):
        """Test exit 2 without a stored run."""
        assert main(["report", "--run", str(tmp_path)]) == 2
