"""Terms over a finite signature and their evaluation.

A term body is a tree of ``Var`` and ``App`` nodes; a ``Term`` wraps a body
with the number of variables it may use.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import SignatureError


@dataclass(frozen=True)
class Var:
    index: int

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class App:
    op: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.op
        return f"{self.op}({', '.join(str(a) for a in self.args)})"


Node = Union[Var, App]


def app(op: str, *args: Node) -> App:
    return App(op, tuple(args))


@dataclass(frozen=True)
class Term:
    body: Node
    arity: int

    def __post_init__(self):
        if self.arity < 0:
            raise SignatureError("term arity must be >= 0")
        for v in variables(self.body):
            if v >= self.arity:
                raise SignatureError(
                    f"variable x{v} out of range for declared arity {self.arity}")

    def __str__(self):
        return str(self.body)

    def check(self, signature) -> None:
        check_node(self.body, signature)


def variables(node: Node) -> set:
    if isinstance(node, Var):
        return {node.index}
    out = set()
    for a in node.args:
        out |= variables(a)
    return out


def depth(node: Node) -> int:
    if isinstance(node, Var):
        return 0
    return 1 + max((depth(a) for a in node.args), default=0)


def check_node(node: Node, signature) -> None:
    if isinstance(node, Var):
        if node.index < 0:
            raise SignatureError("negative variable index")
        return
    if node.op not in signature:
        raise SignatureError(f"unknown operation {node.op!r}")
    if signature.arity(node.op) != len(node.args):
        raise SignatureError(
            f"{node.op!r} has arity {signature.arity(node.op)}, "
            f"applied to {len(node.args)} arguments")
    for a in node.args:
        check_node(a, signature)


def substitute(node: Node, mapping) -> Node:
    """Replace ``Var(i)`` by ``mapping[i]`` throughout."""
    if isinstance(node, Var):
        return mapping[node.index]
    return App(node.op, tuple(substitute(a, mapping) for a in node.args))


def rename_ops(node: Node, names: dict) -> Node:
    if isinstance(node, Var):
        return node
    return App(names.get(node.op, node.op),
               tuple(rename_ops(a, names) for a in node.args))


def eval_node(alg, node: Node, args) -> int:
    if isinstance(node, Var):
        return args[node.index]
    vals = [eval_node(alg, a, args) for a in node.args]
    return int(alg.table(node.op)[tuple(vals)]) if vals else int(alg.table(node.op))


def eval_term(alg, t, args) -> int:
    """Value of the term function ``t^alg`` at ``args``."""
    if isinstance(t, Term):
        node, arity = t.body, t.arity
    else:
        node, arity = t, len(args)
    if len(args) != arity:
        raise SignatureError(f"term of arity {arity} given {len(args)} arguments")
    for a in args:
        if not 0 <= int(a) < alg.size:
            raise ValueError(f"element {a} out of range for algebra of size {alg.size}")
    check_node(node, alg.signature)
    return eval_node(alg, node, [int(a) for a in args])


def term_table(alg, t, arity: int | None = None) -> np.ndarray:
    """The whole term function as a dense array of shape ``(size,)*arity``."""
    if isinstance(t, Term):
        node, arity = t.body, t.arity
    else:
        node = t
        if arity is None:
            arity = max(variables(node), default=-1) + 1
    check_node(node, alg.signature)
    shape = (alg.size,) * arity
    grids = np.indices(shape, dtype=np.int64) if arity else np.zeros((0,), dtype=np.int64)

    def go(n):
        if isinstance(n, Var):
            return grids[n.index]
        table = alg.table(n.op)
        if not n.args:
            return np.full(shape, int(table), dtype=np.int64)
        return table[tuple(go(a) for a in n.args)]

    return np.asarray(go(node), dtype=np.int64).reshape(shape)


def term_to_json(t) -> dict:
    def enc(n):
        if isinstance(n, Var):
            return {"var": n.index}
        return {"op": n.op, "args": [enc(a) for a in n.args]}

    if isinstance(t, Term):
        d = enc(t.body)
        d["arity"] = t.arity
        return d
    return enc(t)


def node_from_json(d) -> Node:
    if not isinstance(d, dict):
        raise SignatureError(f"term node must be an object, got {type(d).__name__}")
    if "var" in d:
        v = d["var"]
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise SignatureError(f"bad variable index {v!r}")
        return Var(v)
    if "op" in d:
        args = d.get("args", [])
        if not isinstance(args, list):
            raise SignatureError("term 'args' must be a list")
        return App(str(d["op"]), tuple(node_from_json(a) for a in args))
    raise SignatureError("term node needs 'var' or 'op'")


def term_from_json(d, arity: int | None = None) -> Term:
    node = node_from_json(d)
    if arity is None:
        arity = d.get("arity") if isinstance(d, dict) else None
    if arity is None:
        arity = max(variables(node), default=-1) + 1
    return Term(node, int(arity))
