"""
Field CSV: a `# grid dim=<d> L=<L1[,L2]> n=<n>` header line, then columns
x[,y],u over the interior nodes in row-major order.
"""
import io
import os
import re

import numpy as np
import pandas as pd

from app.config.constants import FLOAT_FORMAT
from app.domain.errors import ConfigError
from app.domain.models import Field
from app.numerics.grid import build_grid

HEADER_PATTERN = re.compile(r"^#\s*grid\s+dim=(\d)\s+L=([^\s]+)\s+n=(\d+)\s*$")


def _header(field: Field) -> str:
    grid = field.grid
    lengths = ",".join(FLOAT_FORMAT % L for L in grid.lengths)
    return f"# grid dim={grid.dim} L={lengths} n={grid.n}\n"


def field_to_frame(field: Field) -> pd.DataFrame:
    coords = field.grid.interior_coords()
    names = ["x", "y"][: field.grid.dim]
    data = {name: np.ravel(c) for name, c in zip(names, coords)}
    data["u"] = np.ravel(field.values)
    return pd.DataFrame(data)


def field_to_csv(field: Field) -> str:
    buf = io.StringIO()
    buf.write(_header(field))
    field_to_frame(field).to_csv(buf, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return buf.getvalue()


def write_field_csv(field: Field, path: str) -> str:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(field_to_csv(field))
    return path


def read_field_csv(path: str) -> Field:
    if not os.path.exists(path):
        raise ConfigError(f"Field file not found: {path}")
    with open(path) as fh:
        first = fh.readline().strip()
    m = HEADER_PATTERN.match(first)
    if not m:
        raise ConfigError(f"{path}: first line must be '# grid dim=<d> L=<L> n=<n>'")
    dim, n = int(m.group(1)), int(m.group(3))
    lengths = [float(v) for v in m.group(2).split(",")]
    grid = build_grid(dim, lengths if len(lengths) > 1 else lengths[0], n)

    df = pd.read_csv(path, comment="#")
    if "u" not in df.columns or len(df) != n ** dim:
        raise ConfigError(f"{path}: expected {n ** dim} rows with a 'u' column")
    values = df["u"].to_numpy(dtype=float).reshape(grid.shape)
    if not np.all(np.isfinite(values)):
        raise ConfigError(f"{path}: field values must be finite")
    return Field(grid, values)
