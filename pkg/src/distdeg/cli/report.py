"""Versioned, byte-deterministic report documents."""

from __future__ import annotations

import hashlib
import json

from .. import __version__

SCHEMA_VERSION = "1"


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def envelope(command, source, seed, budgets, result, passed=True):
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "distdeg",
        "version": __version__,
        "command": command,
        "input_digest": digest(source),
        "seed": seed,
        "budgets": budgets,
        "passed": passed,
        "result": result,
    }


def error_document(command, source, exc, code):
    err = {"type": type(exc).__name__, "message": str(exc), "exit_code": code}
    cert = getattr(exc, "certificate", None)
    if cert is not None:
        err["certificate"] = str(cert)
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "distdeg",
        "version": __version__,
        "command": command,
        "input_digest": digest(source) if source is not None else None,
        "error": err,
    }


def _flatten(prefix, value, out):
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else str(k), value[k], out)
    elif isinstance(value, list):
        if not value:
            out.append(f"{prefix}: []")
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        if value is None:
            value = "null"
        elif isinstance(value, bool):
            value = "true" if value else "false"
        out.append(f"{prefix}: {value}")


def dumps(doc, fmt="json"):
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    out = []
    _flatten("", doc, out)
    return "\n".join(out) + "\n"
