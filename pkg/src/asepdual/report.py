"""Text and JSON rendering of check results."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from importlib import resources
from typing import Any, Dict, Iterable, List, Optional, TextIO

from . import __version__
from .operators import Operator
from .results import CheckResult
from .scalar_ring import LaurentScalar, is_exact


def jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (LaurentScalar, Fraction)):
        return str(x)
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        return x if math.isfinite(x) else str(x)
    if hasattr(x, "item") and callable(x.item):  # numpy scalars
        return jsonable(x.item())
    if isinstance(x, Operator):
        return [[jsonable(v) for v in row] for row in x.to_dense()]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, range)):
        return [jsonable(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def residual_json(r: Any):
    """Exact residuals become Laurent-polynomial strings, numeric ones floats."""
    if is_exact(r):
        return str(r)
    return jsonable(float(r))


def result_dict(r: CheckResult) -> Dict[str, Any]:
    return {
        "name": r.name,
        "params": jsonable(r.params),
        "passed": bool(r.passed),
        "residual": residual_json(r.residual),
        "derived": jsonable(r.derived),
    }


def overall_mode(results: Iterable[CheckResult], default: str = "exact") -> str:
    modes = {r.params.get("mode") for r in results} - {None}
    if not modes:
        return default
    return modes.pop() if len(modes) == 1 else "mixed"


def build_document(results: List[CheckResult], mode: Optional[str] = None,
                   grid: Optional[Dict[str, Any]] = None, timestamp: Optional[str] = None) -> Dict[str, Any]:
    return {
        "version": __version__,
        "mode": mode or overall_mode(results),
        "timestamp": timestamp,
        "grid": jsonable(grid or {}),
        "checks": [result_dict(r) for r in results],
        "status": "pass" if all(r.passed for r in results) else "fail",
    }


def render_text(results: List[CheckResult]) -> str:
    lines = [r.summary() for r in results]
    n_pass = sum(r.passed for r in results)
    status = "PASS" if n_pass == len(results) else "FAIL"
    lines.append(f"{status}: {n_pass}/{len(results)} checks passed")
    return "\n".join(lines)


def emit_report(results: List[CheckResult], fmt: str = "text", path: Optional[str] = None,
                stream: Optional[TextIO] = None, **doc_fields) -> None:
    """Write the report; ``path=None`` writes to ``stream`` (stdout by default).

    Raises ``OSError`` when ``path`` cannot be written.
    """
    import sys

    if fmt == "json":
        text = json.dumps(build_document(results, **doc_fields), indent=2) + "\n"
    elif fmt == "text":
        text = render_text(results) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is None:
        (stream or sys.stdout).write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def load_schema() -> Dict[str, Any]:
    return json.loads(resources.files("asepdual").joinpath("report_schema.json").read_text(encoding="utf-8"))
