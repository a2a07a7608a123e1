import json
from pathlib import Path
import subprocess
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import joblib
import numpy as np
import pandas as pd
import yaml

from fraccomp.util.config import FCConfig
from fraccomp.util.constants import *
from fraccomp.util.enums import OutputFormat
from fraccomp.util.errors import InvalidSpec


def load_job_file(path: Path) -> Tuple[Dict[str, Any], yaml.Node]:
    """
    Loads a YAML job spec together with its node tree, so validation errors can be
    reported with line numbers.

    :param path: Path to the spec file.
    :return: Parsed data and the root node.
    """
    p = Path(path)
    if not p.is_file():
        raise InvalidSpec(f"Spec file '{p}' not found.")

    text = p.read_text(encoding="utf-8")
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as e:
        line = e.problem_mark.line + 1 if e.problem_mark is not None else None
        raise InvalidSpec(f"malformed YAML: {e.problem}", line)

    if not isinstance(data, dict):
        raise InvalidSpec("spec must be a mapping with keys command, params, output, precision", 1)

    return data, node


def line_of(node: Optional[yaml.Node], path: Sequence[Any]) -> Optional[int]:
    """
    Finds the (1-based) line of the deepest node reachable along the given key path.

    :param node: Root node from `yaml.compose`.
    :param path: Keys (mapping keys or sequence indices).
    :return: Line number or None.
    """
    if node is None:
        return None

    line = node.start_mark.line + 1
    for key in path:
        if isinstance(node, yaml.MappingNode):
            for k, v in node.value:
                if k.value == str(key):
                    # Point at the key itself, the value may be a nested block
                    line = k.start_mark.line + 1
                    node = v
                    break
            else:
                return line
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            node = node.value[key]
            line = node.start_mark.line + 1
        else:
            return line

    return line


def git_describe() -> str:
    """
    Describes the build for output headers.

    :return: Output of `git describe --always --dirty`, or "unknown" outside of a repository.
    """
    try:
        out = subprocess.run(["git", "describe", "--always", "--dirty", "--tags"],
                             cwd=Path(__file__).resolve().parent, capture_output=True, text=True, timeout=5)
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    if out.returncode != 0 or not out.stdout.strip():
        return "unknown"

    return out.stdout.strip()


def to_header_value(value: Any) -> str:
    """
    Formats header value on a single line. Non-strings are JSON encoded so they can be restored.

    """
    if isinstance(value, str):
        return value
    if isinstance(value, np.ndarray):
        value = value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        value = value.item()

    return json.dumps(value, sort_keys=True, default=str)


def from_header_value(value: str) -> Any:
    try:
        return json.loads(value)
    except json.JSONDecodeError:
        return value


def write_result(df: pd.DataFrame, meta: Dict[str, Any], path: Path, fmt: str = OutputFormat.CSV.value) -> Path:
    """
    Writes result grid with metadata header.
    CSV: `# key: value` lines followed by the rows; floats in shortest exact form so the file
    re-parses to the same values. JSON mirrors the same structure.

    :param df: Result rows.
    :param meta: Header metadata.
    :param path: Target path (suffix added if missing).
    :param fmt: Output format.
    :return: Path written.
    """
    p = Path(path)
    if p.suffix == "":
        p = p.with_suffix(f".{fmt}")
    p.parent.mkdir(parents=True, exist_ok=True)

    if fmt == OutputFormat.CSV.value:
        with open(str(p), "w", encoding="utf-8", newline="") as fh:
            for key, value in meta.items():
                fh.write(f"# {key}: {to_header_value(value)}\n")
            df.to_csv(fh, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    elif fmt == OutputFormat.JSON.value:
        payload = {
            "header": {k: from_header_value(to_header_value(v)) for k, v in meta.items()},
            "columns": list(df.columns),
            "data": {c: df[c].tolist() for c in df.columns},
        }
        with open(str(p), "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1, sort_keys=False)
            fh.write("\n")
    else:
        raise ValueError(f"Unknown output format '{fmt}'.")

    return p


def read_result(path: Path) -> Tuple[Dict[str, Any], pd.DataFrame]:
    """
    Reads a result file written by `write_result`.

    :param path: Path to CSV or JSON result.
    :return: Header metadata and rows.
    """
    p = Path(path)
    if p.suffix == f".{OutputFormat.JSON.value}":
        with open(str(p), "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        return payload["header"], pd.DataFrame(payload["data"], columns=payload["columns"])

    meta = {}
    with open(str(p), "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].strip().partition(": ")
            meta[key] = from_header_value(value)
    df = pd.read_csv(str(p), comment="#", float_precision="round_trip")

    return meta, df


def parallel_map(func: Callable[[Any], Any], items: Iterable[Any]) -> List[Any]:
    """
    Maps func over independent items with the configured number of threads.
    Results keep the order of items, so they do not depend on the thread count.

    """
    items = list(items)
    threads = FCConfig().threads
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    return joblib.Parallel(n_jobs=threads, prefer="threads")(joblib.delayed(func)(item) for item in items)
