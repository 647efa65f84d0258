"""
Chain spec files: finite matrices or truncated families
"""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from src.chain_core.chain import MarkovChain, validate_chain
from src.chain_core.families import CountableChainSpec
from src.chain_core.truncation import BoundaryPolicy, truncate
from src.config.settings import get_settings
from src.utils.exceptions import ParseError


def family_from_spec(document: Dict[str, Any]) -> CountableChainSpec:
    """
    The countable family of a {"kind": "family", ...} document; "N" is not required

    Raises:
        ParseError: If the document is not a family spec
    """
    if not isinstance(document, dict) or document.get("kind") != "family":
        raise ParseError("Expected a family chain spec", field="kind")
    if "family" not in document:
        raise ParseError("Family chain spec is missing 'family'", field="family")
    params = document.get("params", {})
    if not isinstance(params, dict):
        raise ParseError("'params' must be an object", field="params")
    try:
        values = {str(k): float(v) for k, v in params.items()}
    except (TypeError, ValueError) as e:
        raise ParseError("Family parameters must be numbers", field="params") from e
    return CountableChainSpec(family_name=str(document["family"]), params=values)


def boundary_from_spec(document: Dict[str, Any]) -> Optional[BoundaryPolicy]:
    raw = document.get("boundary")
    if raw is None:
        return None
    try:
        return BoundaryPolicy(raw)
    except ValueError as e:
        known = [policy.value for policy in BoundaryPolicy]
        raise ParseError(f"Unknown boundary policy {raw!r}", field="boundary", known=known) from e


def chain_from_spec(document: Dict[str, Any]) -> MarkovChain:
    """
    Build a chain from a parsed spec document

    Accepted shapes:
        {"kind": "finite", "labels": [...], "P": [[...]]}
        {"kind": "family", "family": "birth_death", "params": {...}, "N": 50,
         "boundary": "reflect_to_last"}
    """
    if not isinstance(document, dict):
        raise ParseError("Chain spec must be a JSON object", field="<root>")
    tol = float(document.get("tol", get_settings().stochastic_tol))
    kind = document.get("kind")

    if kind == "finite":
        if "P" not in document:
            raise ParseError("Finite chain spec is missing 'P'", field="P")
        matrix = document["P"]
        if not isinstance(matrix, list) or not all(isinstance(row, list) for row in matrix):
            raise ParseError("'P' must be a list of rows", field="P")
        return validate_chain(matrix, labels=document.get("labels"), tol=tol)

    if kind == "family":
        if "N" not in document:
            raise ParseError("Family chain spec is missing 'N'", field="N")
        spec = family_from_spec(document)
        return truncate(spec, int(document["N"]), boundary=boundary_from_spec(document), tol=tol)

    raise ParseError(f"Unknown chain spec kind: {kind!r}", field="kind")


def read_spec_document(path: Path) -> Tuple[Dict[str, Any], str]:
    """
    Read a spec file as JSON

    Returns:
        The raw document and the file's content digest

    Raises:
        ParseError: On unreadable or malformed JSON, with line and column
    """
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise ParseError(f"Cannot read chain spec {path}: {e}", field="input") from e
    try:
        document = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as e:
        raise ParseError(f"Chain spec {path} is not UTF-8", field="input") from e
    except json.JSONDecodeError as e:
        raise ParseError(
            f"Malformed JSON in {path}: {e.msg}", line=e.lineno, column=e.colno
        ) from e
    return document, hashlib.sha256(raw).hexdigest()


def load_chain_spec(path: Path) -> Tuple[MarkovChain, Dict[str, Any], str]:
    """Read, parse and validate a chain spec file"""
    document, digest = read_spec_document(path)
    return chain_from_spec(document), document, digest
