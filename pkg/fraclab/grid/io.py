"""CSV serialization of grid functions.

Layout::

    # config: {...}          optional, written by the CLI
    # grid: {"R": 4.0, "h": 0.001953125, "exterior": {"tag": "zero"}}
    x,value
    -4,0
    ...

Values are written with 17 significant digits so reading them back is exact.
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from ..errors import UsageError
from .grid import ExteriorExtension, Grid, GridFunction

FLOAT_FORMAT = "%.17g"


def comment_line(label: str, payload: Dict[str, Any]) -> str:
    return f"# {label}: {json.dumps(payload, sort_keys=True)}\n"


def write_frame(frame: pd.DataFrame, path: str, comments: Optional[Dict[str, Dict[str, Any]]] = None) -> None:
    """Write a DataFrame as CSV preceded by JSON comment lines."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", newline="") as f:
        for label, payload in (comments or {}).items():
            f.write(comment_line(label, payload))
        frame.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_grid_function(u: GridFunction, path: str, config: Optional[Dict[str, Any]] = None) -> None:
    comments: Dict[str, Dict[str, Any]] = {}
    if config is not None:
        comments["config"] = config
    sidecar = u.grid.describe()
    sidecar["exterior"] = u.exterior.to_dict()
    comments["grid"] = sidecar
    frame = pd.DataFrame({"x": u.nodes, "value": u.values})
    write_frame(frame, path, comments)


def read_comments(path: str) -> Dict[str, Dict[str, Any]]:
    comments = {}
    with open(path) as f:
        for line in f:
            if not line.startswith("#"):
                break
            label, _, payload = line[1:].strip().partition(":")
            comments[label.strip()] = json.loads(payload)
    return comments


def read_grid_function(path: str) -> GridFunction:
    comments = read_comments(path)
    if "grid" not in comments:
        raise UsageError(f"{path}: missing '# grid:' sidecar line")
    sidecar = comments["grid"]
    grid = Grid(float(sidecar["R"]), float(sidecar["h"]))
    exterior = ExteriorExtension.from_dict(sidecar.get("exterior", {"tag": "zero"}))
    frame = pd.read_csv(path, comment="#", float_precision="round_trip")
    if list(frame.columns) != ["x", "value"]:
        raise UsageError(f"{path}: expected header 'x,value', got {list(frame.columns)}")
    if len(frame) != grid.size or not np.allclose(frame["x"].to_numpy(), grid.nodes, rtol=0, atol=1e-12):
        raise UsageError(f"{path}: nodes do not match the sidecar grid")
    return GridFunction(grid, frame["value"].to_numpy(dtype=float), exterior)

