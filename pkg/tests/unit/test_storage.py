"""
Unit tests for config files, field CSVs and trajectory persistence.
"""
import numpy as np
import pytest

from app.domain.errors import ConfigError
from app.domain.models import Trajectory
from app.domain.schemas import SolverConfig
from app.infrastructure.storage import (
    config_hash,
    emit_config,
    load_config,
    load_trajectory,
    normalize_config_text,
    parse_config,
    read_field_csv,
    save_trajectory,
    write_field_csv,
)
from app.infrastructure.storage.config_files import parse_pairs
from app.numerics.grid import build_grid, field_from_function
from app.numerics.solver import run
from app.sources import NoReaction

CONFIG_TEXT = """
# blow-up run
grid.n = 199
p = 2
f = "powersum: 1*u^3"   # cubic
u0 = sine: c=6
condition.mode = manual
condition.alpha = 4
solver.T_max = 0.5
solver.reaction_fraction = 0.1
"""


class TestConfigFiles:
    """Test parsing, emission and hashing of experiment configs."""

    def test_parse(self):
        """Test parsing a full config."""
        config = parse_config(CONFIG_TEXT)
        assert config.grid.n == 199
        assert config.f == "powersum: 1*u^3"
        assert config.u0 == "sine: c=6"
        assert config.condition.alpha == 4.0
        assert config.solver.reaction_fraction == 0.1
        assert config.solver.U_blow == 1e6

    def test_round_trip(self):
        """Test that emit and parse round-trip."""
        normalized = normalize_config_text(CONFIG_TEXT)
        assert emit_config(parse_config(normalized)) == normalized

    def test_floats_keep_17_digits(self):
        """Test 17 significant digits on output."""
        text = emit_config(parse_config("solver.T_max = 0.1"))
        assert "solver.T_max = 0.10000000000000001\n" in text

    def test_unknown_key(self):
        """Test that unknown keys are named in the error."""
        with pytest.raises(ConfigError, match="solver.dtmin"):
            parse_config("solver.dtmin = 1")

    def test_duplicate_key(self):
        """Test rejection of duplicate keys."""
        with pytest.raises(ConfigError, match="duplicate"):
            parse_pairs("p = 2\np = 3\n")

    def test_missing_equals(self):
        """Test rejection of lines without "="."""
        with pytest.raises(ConfigError):
            parse_pairs("p 2\n")

    def test_invalid_value(self):
        """Test that schema errors become config errors."""
        with pytest.raises(ConfigError):
            parse_config("solver.safety = 2")

    def test_manual_needs_alpha(self):
        """Test that manual mode requires alpha."""
        with pytest.raises(ConfigError):
            parse_config("condition.mode = manual")

    def test_missing_file(self, tmp_path):
        """Test a missing config file."""
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "missing.cfg"))

    def test_hash_ignores_output_and_formatting(self):
        """Test that the hash skips the output path and layout."""
        a = parse_config(CONFIG_TEXT)
        b = parse_config(normalize_config_text(CONFIG_TEXT) + 'output = "/tmp/elsewhere"\n')
        assert config_hash(a) == config_hash(b)
        assert len(config_hash(a)) == 12

    def test_hash_changes_with_content(self):
        """Test that the hash tracks content."""
        assert config_hash(parse_config("p = 2")) != config_hash(parse_config("p = 3"))

    def test_two_dimensional_lengths(self):
        """Test 2D length lists and broadcasting."""
        config = parse_config("grid.dim = 2\ngrid.L = 1,2\n")
        assert config.grid.L == [1.0, 2.0]
        config = parse_config("grid.dim = 2\ngrid.L = 1\n")
        assert config.grid.L == [1.0, 1.0]


class TestFieldCsv:
    """Test field files."""

    @pytest.mark.parametrize("dim", [1, 2])
    def test_write_then_read(self, tmp_path, dim):
        """Test writing and reading a field."""
        grid = build_grid(dim, 1.0, 9)
        field = field_from_function(grid, lambda *xs: np.prod([np.sin(np.pi * x) for x in xs], axis=0))
        path = write_field_csv(field, str(tmp_path / "u.csv"))
        back = read_field_csv(path)
        assert back.grid.shape == grid.shape
        np.testing.assert_array_equal(back.values, field.values)

    def test_header_line(self, tmp_path):
        """Test the grid header line."""
        grid = build_grid(1, 2.0, 5)
        path = write_field_csv(field_from_function(grid, np.sin), str(tmp_path / "u.csv"))
        with open(path) as fh:
            assert fh.readline() == "# grid dim=1 L=2 n=5\n"
            assert fh.readline() == "x,u\n"

    def test_missing_header(self, tmp_path):
        """Test rejection of a file without a grid header."""
        path = tmp_path / "u.csv"
        path.write_text("x,u\n0.5,1\n")
        with pytest.raises(ConfigError):
            read_field_csv(str(path))

    def test_row_count_mismatch(self, tmp_path):
        """Test rejection of a row count that does not match n."""
        path = tmp_path / "u.csv"
        path.write_text("# grid dim=1 L=1 n=3\nx,u\n0.25,1\n0.5,1\n")
        with pytest.raises(ConfigError):
            read_field_csv(str(path))


class TestTrajectories:
    """Test trajectory persistence."""

    def test_save_and_load(self, tmp_path, unit_grid):
        """Test a joblib round trip of a finished run."""
        u0 = field_from_function(unit_grid, lambda x: np.sin(np.pi * x))
        traj = run(unit_grid, NoReaction(), 2.0, u0, SolverConfig(T_max=0.05))
        save_trajectory(traj, str(tmp_path))
        back = load_trajectory(str(tmp_path))
        assert back.outcome == traj.outcome
        np.testing.assert_array_equal(back.times, traj.times)
        np.testing.assert_array_equal(back.snapshots[-1].field.values, traj.snapshots[-1].field.values)

    def test_running_trajectory_not_saved(self, tmp_path):
        """Test that unfinished runs are not saved."""
        with pytest.raises(ValueError):
            save_trajectory(Trajectory(p=2.0), str(tmp_path))

    def test_missing_trajectory(self, tmp_path):
        """Test loading from an empty directory."""
        with pytest.raises(ConfigError):
            load_trajectory(str(tmp_path))
