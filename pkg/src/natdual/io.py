"""JSON formats for algebras, terms, duplicators, structures and reference resolution.

Algebra: ``{"signature": [{"name": "meet", "arity": 2}, ...], "size": 4,
"tables": {"meet": [[...], ...], "bot": 0}, "labels": [...]}``; tables are
nested lists indexed by argument order, nullary operations a bare element.

Structure / ego: ``{"size": 2, "relations": {"leq": {"arity": 2, "tuples":
[[0, 0], [0, 1], [1, 1]]}}, "operations": {}, "over": "bounded_dl_2"}``;
an operation is ``{"arity": n, "table": nested list or bare element}``.

Multisorted structure: ``{"sorts": [structure, structure]}``.
"""

from __future__ import annotations

import hashlib
import json
import os

import numpy as np

from .algebra import FiniteAlgebra, Signature
from .duality import AlterEgo, FiniteStructure
from .duplication import Duplicator
from .errors import CompatibilityError, NatDualError, SignatureError
from .terms import Term, check_node, node_from_json, variables


class FormatError(NatDualError):
    """Malformed input; ``path`` locates the first violation."""

    def __init__(self, path, message):
        super().__init__(f"{path or '<root>'}: {message}")
        self.path = path


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def _need(d, key, path, kind=None):
    if not isinstance(d, dict) or key not in d:
        raise FormatError(path, f"missing key {key!r}")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise FormatError(f"{path}.{key}".lstrip("."), f"expected {kind.__name__}")
    return v


def _check_table(t, size, arity, path):
    """Walk a nested table, reporting the first bad entry by index path."""
    if arity == 0:
        if not _is_int(t):
            raise FormatError(path, "nullary operation must be a bare element")
        if not 0 <= t < size:
            raise FormatError(path, f"entry {t} outside [0, {size})")
        return
    if not isinstance(t, list) or len(t) != size:
        raise FormatError(path, f"expected a list of length {size}")
    for i, sub in enumerate(t):
        _check_table(sub, size, arity - 1, f"{path}[{i}]")


def signature_from_json(d, path="signature") -> Signature:
    if not isinstance(d, list):
        raise FormatError(path, "expected a list of operations")
    ops = []
    for i, o in enumerate(d):
        name = _need(o, "name", f"{path}[{i}]", str)
        arity = _need(o, "arity", f"{path}[{i}]")
        if not _is_int(arity) or arity < 0:
            raise FormatError(f"{path}[{i}].arity", "arity must be a non-negative integer")
        ops.append((name, arity))
    try:
        return Signature(ops)
    except SignatureError as e:
        raise FormatError(path, str(e)) from None


def algebra_from_json(d, name=None) -> FiniteAlgebra:
    sig = signature_from_json(_need(d, "signature", ""))
    size = _need(d, "size", "")
    if not _is_int(size) or size < 1:
        raise FormatError("size", "size must be a positive integer")
    tables = _need(d, "tables", "", dict)
    for op, arity in sig:
        if op not in tables:
            raise FormatError("tables", f"missing table for {op!r}")
        _check_table(tables[op], size, arity, f"tables.{op}")
    for op in tables:
        if op not in sig:
            raise FormatError(f"tables.{op}", "operation not in signature")
    labels = d.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != size):
        raise FormatError("labels", f"expected {size} labels")
    return FiniteAlgebra(sig, size, tables, labels, name or d.get("name"))


def algebra_to_json(A: FiniteAlgebra) -> dict:
    d = {"signature": A.signature.to_json(), "size": A.size,
         "tables": {op: (A.table(op) if a == 0 else A.table(op).tolist()) for op, a in A.signature}}
    if A.labels:
        d["labels"] = list(A.labels)
    if A.name:
        d["name"] = A.name
    return d


def term_from_json_checked(d, signature=None) -> Term:
    try:
        node = node_from_json(d)
    except SignatureError as e:
        raise FormatError("", str(e)) from None
    arity = d.get("arity") if isinstance(d, dict) else None
    if arity is None:
        raise FormatError("arity", "term needs a top-level 'arity'")
    if not _is_int(arity) or arity < 0:
        raise FormatError("arity", "arity must be a non-negative integer")
    bad = [v for v in variables(node) if v >= arity]
    if bad:
        raise FormatError("var", f"variable x{bad[0]} out of range for arity {arity}")
    if signature is not None:
        try:
            check_node(node, signature)
        except SignatureError as e:
            raise FormatError("op", str(e)) from None
    return Term(node, arity)


def structure_from_json(d) -> FiniteStructure:
    size = _need(d, "size", "")
    if not _is_int(size) or size < 0:
        raise FormatError("size", "size must be a non-negative integer")
    rels = {}
    for rname, r in (d.get("relations") or {}).items():
        path = f"relations.{rname}"
        arity = _need(r, "arity", path)
        tuples = _need(r, "tuples", path, list)
        for i, t in enumerate(tuples):
            if not isinstance(t, list) or len(t) != arity:
                raise FormatError(f"{path}.tuples[{i}]", f"expected a tuple of length {arity}")
            for j, x in enumerate(t):
                if not _is_int(x) or not 0 <= x < size:
                    raise FormatError(f"{path}.tuples[{i}][{j}]", f"entry outside [0, {size})")
        rels[rname] = (arity, tuples)
    ops = {}
    for oname, o in (d.get("operations") or {}).items():
        path = f"operations.{oname}"
        arity = _need(o, "arity", path)
        table = _need(o, "table", path)
        if size:
            _check_table(table, size, arity, f"{path}.table")
        ops[oname] = (arity, table)
    return FiniteStructure(size, rels, ops)


def duplicator_from_json(d) -> Duplicator:
    signature_from_json(_need(d, "base_signature", ""), "base_signature")
    pairs = _need(d, "pairs", "", list)
    for i, p in enumerate(pairs):
        path = f"pairs[{i}]"
        _need(p, "name", path, str)
        n = _need(p, "half_arity", path)
        if not _is_int(n) or n < 0:
            raise FormatError(f"{path}.half_arity", "must be a non-negative integer")
        for k in ("t1", "t2"):
            try:
                node = node_from_json(_need(p, k, path))
            except SignatureError as e:
                raise FormatError(f"{path}.{k}", str(e)) from None
            bad = [v for v in variables(node) if v >= 2 * n]
            if bad:
                raise FormatError(f"{path}.{k}", f"variable x{bad[0]} out of range for arity {2 * n}")
    try:
        return Duplicator.from_json(d)
    except (SignatureError, KeyError, TypeError, ValueError) as e:
        raise FormatError("", f"malformed duplicator: {e}") from None


def kind_of(d) -> str:
    if not isinstance(d, dict):
        raise FormatError("", "top level must be an object")
    if "pairs" in d:
        return "duplicator"
    if "sorts" in d:
        return "multisorted"
    if "signature" in d:
        return "algebra"
    if "var" in d or "op" in d:
        return "term"
    if "size" in d:
        return "structure"
    raise FormatError("", "cannot tell what kind of object this is")


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise FormatError("", f"invalid JSON at line {e.lineno}: {e.msg}") from None


def digest(path) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()[:16]


# -- reference resolution -----------------------------------------------------


def resolve_algebra(ref: str) -> FiniteAlgebra:
    """A file path, or a catalog key."""
    if os.path.exists(ref):
        return algebra_from_json(load_json(ref), name=os.path.basename(ref))
    from .catalog import catalog_get

    return catalog_get(ref).algebra


def resolve_duplicator(ref: str) -> Duplicator:
    if os.path.exists(ref):
        return duplicator_from_json(load_json(ref))
    from .catalog import duplicator

    stem = os.path.basename(ref)
    return duplicator(stem[:-5] if stem.endswith(".json") else stem)


def resolve_ego(ref: str, over: FiniteAlgebra | None = None) -> AlterEgo:
    """A catalog key with an ego, or a structure file carrying ``over``."""
    if os.path.exists(ref):
        d = load_json(ref)
        S = structure_from_json(d)
        M = over if over is not None else resolve_algebra(_need(d, "over", ""))
        return AlterEgo(M, S, name=os.path.basename(ref))
    from .catalog import catalog_get

    e = catalog_get(ref)
    if e.ego is None:
        raise FormatError("", f"catalog entry {ref!r} has no alter ego")
    return e.ego


def validate(path) -> dict:
    """Schema and semantic checks; raises FormatError or CompatibilityError."""
    d = load_json(path)
    kind = kind_of(d)
    if kind == "algebra":
        A = algebra_from_json(d)
        return {"kind": kind, "size": A.size, "signature": A.signature.to_json()}
    if kind == "term":
        t = term_from_json_checked(d)
        return {"kind": kind, "arity": t.arity, "term": str(t)}
    if kind == "duplicator":
        G = duplicator_from_json(d)
        return {"kind": kind, "pairs": [p.name for p in G.pairs]}
    if kind == "structure":
        S = structure_from_json(d)
        out = {"kind": kind, "size": S.size}
        if "over" in d:
            try:
                AlterEgo(resolve_algebra(d["over"]), S)
            except CompatibilityError as e:
                raise CompatibilityError(f"compatibility violation: {e}") from None
            out["compatible_with"] = d["over"]
        return out
    sorts = _need(d, "sorts", "", list)
    for i, s in enumerate(sorts):
        try:
            structure_from_json(s)
        except FormatError as e:
            raise FormatError(f"sorts[{i}].{e.path}", str(e).split(": ", 1)[-1]) from None
    return {"kind": kind, "sizes": [s["size"] for s in sorts]}


def to_plain(x):
    """numpy-free copy of nested data, for JSON output."""
    if isinstance(x, dict):
        return {str(k): to_plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return to_plain(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x
