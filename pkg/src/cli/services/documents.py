"""文档读写：字段文档、SymmetrySpec 文档、路径参数与 JSON 输出。"""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO, Tuple

from src.config import Tolerances
from src.errors import EssFieldError, ParseError
from src.field_model import VectorField, parse_field, parse_tolerances
from src.field_model.loader import parse_complex

logger = logging.getLogger(__name__)


class UsageError(Exception):
    """命令行用法错误（退出码 2）。"""


def read_document(source: str) -> Any:
    """读取 JSON 文档；'-' 表示标准输入。"""
    if source == '-':
        text = sys.stdin.read()
    else:
        path = Path(source)
        if not path.is_file():
            raise UsageError(f"document not found: {source}")
        try:
            text = path.read_text(encoding='utf-8')
        except OSError as e:
            raise UsageError(f"cannot read {source}: {e}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", f"line {e.lineno} column {e.colno}") from e


def load_field(source: str) -> Tuple[VectorField, Tolerances]:
    doc = read_document(source)
    tol = parse_tolerances(doc)
    X = parse_field(doc, tol)
    logger.info(f"loaded {X.describe()} from {source}")
    return X, tol


def parse_path_argument(text: str) -> List[complex]:
    """--path '[[0,0],[1,0],[1,1]]'。"""
    try:
        items = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"path is not valid JSON: {e.msg}", '--path') from e
    if not isinstance(items, list):
        raise ParseError("path must be a list of [re, im] vertices", '--path')
    return [parse_complex(v, f"--path[{i}]") for i, v in enumerate(items)]


def parse_complex_argument(text: str, name: str) -> complex:
    """'re,im' 或单个实数。"""
    parts = [p.strip() for p in text.split(',')]
    try:
        values = [float(p) for p in parts]
    except ValueError as e:
        raise UsageError(f"{name} expects 're,im', got {text!r}") from e
    if len(values) == 1:
        return complex(values[0], 0.0)
    if len(values) == 2:
        return complex(values[0], values[1])
    raise UsageError(f"{name} expects 're,im', got {text!r}")


def error_payload(e: EssFieldError) -> Dict[str, Any]:
    return {'success': False, 'error': e.to_dict()}


def write_json(payload: Dict[str, Any], stream: Optional[TextIO] = None) -> None:
    stream = stream or sys.stdout
    stream.write(json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=False))
    stream.write('\n')
