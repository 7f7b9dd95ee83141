"""Finite algebras and the exhaustive-search primitives built on them.

The universe of a ``FiniteAlgebra`` is always ``0..size-1``; labels are for
display only. Operation tables are numpy arrays of shape ``(size,)*arity``
(a nullary operation is a plain int).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import ResourceLimitError, SignatureError, VerificationError

DEFAULT_MAX_HOMS = 1_000_000
DEFAULT_MAX_NODES = 1_000_000


class Signature:
    """Ordered list of ``(name, arity)`` pairs with unique names."""

    def __init__(self, ops: Iterable):
        ops = tuple((str(n), int(a)) for n, a in ops)
        names = [n for n, _ in ops]
        if len(set(names)) != len(names):
            raise SignatureError(f"duplicate operation names in {names}")
        if any(a < 0 for _, a in ops):
            raise SignatureError("arities must be >= 0")
        self.ops = ops
        self._arity = dict(ops)

    def arity(self, name: str) -> int:
        try:
            return self._arity[name]
        except KeyError:
            raise SignatureError(f"unknown operation {name!r}") from None

    @property
    def names(self) -> list:
        return [n for n, _ in self.ops]

    def restrict(self, names) -> "Signature":
        names = set(names)
        return Signature([(n, a) for n, a in self.ops if n in names])

    def __contains__(self, name):
        return name in self._arity

    def __iter__(self):
        return iter(self.ops)

    def __len__(self):
        return len(self.ops)

    def __eq__(self, other):
        return isinstance(other, Signature) and self.ops == other.ops

    def __hash__(self):
        return hash(self.ops)

    def __repr__(self):
        return "Signature(" + ", ".join(f"{n}/{a}" for n, a in self.ops) + ")"

    def to_json(self):
        return [{"name": n, "arity": a} for n, a in self.ops]


class FiniteAlgebra:
    def __init__(self, signature: Signature, size: int, tables: dict,
                 labels: Sequence[str] | None = None, name: str | None = None):
        if not isinstance(signature, Signature):
            signature = Signature(signature)
        size = int(size)
        if size < 1:
            raise ValueError("algebras must be non-empty")
        missing = [n for n in signature.names if n not in tables]
        extra = [n for n in tables if n not in signature]
        if missing or extra:
            raise SignatureError(f"tables do not match signature (missing {missing}, extra {extra})")
        self.signature = signature
        self.size = size
        self.name = name
        self._tables = {}
        for op, arity in signature:
            t = np.asarray(tables[op], dtype=np.int64)
            if t.shape != (size,) * arity:
                raise ValueError(
                    f"table of {op!r} has shape {t.shape}, expected {(size,) * arity}")
            if t.size and (t.min() < 0 or t.max() >= size):
                raise ValueError(f"table of {op!r} has entries outside [0, {size})")
            t = t.copy()
            t.setflags(write=False)
            self._tables[op] = t
        if labels is not None:
            labels = [str(x) for x in labels]
            if len(labels) != size:
                raise ValueError("need exactly one label per element")
        self.labels = labels

    def table(self, op: str):
        t = self._tables[op]
        return int(t) if t.ndim == 0 else t

    def flat(self, op: str) -> np.ndarray:
        return self._tables[op].ravel()

    @property
    def tables(self) -> dict:
        return dict(self._tables)

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    def reduct(self, names, rename: dict | None = None) -> "FiniteAlgebra":
        """Keep only the operations in ``names``, optionally renaming them."""
        rename = rename or {}
        sig = self.signature.restrict(names)
        new_sig = Signature([(rename.get(n, n), a) for n, a in sig])
        return FiniteAlgebra(new_sig, self.size,
                             {rename.get(n, n): self._tables[n] for n in sig.names},
                             self.labels, self.name)

    def with_name(self, name):
        return FiniteAlgebra(self.signature, self.size, self._tables, self.labels, name)

    def same_tables(self, other) -> bool:
        return (self.signature == other.signature and self.size == other.size and all(
            np.array_equal(self._tables[n], other._tables[n]) for n in self.signature.names))

    def __repr__(self):
        nm = f"{self.name!r}, " if self.name else ""
        return f"FiniteAlgebra({nm}size={self.size}, {self.signature!r})"


def trivial_algebra(signature: Signature, name="T") -> FiniteAlgebra:
    return FiniteAlgebra(signature, 1,
                         {n: np.zeros((1,) * a, dtype=np.int64) for n, a in signature},
                         name=name)


def algebra_from_orders(signature_map: dict, size, **kw) -> FiniteAlgebra:
    """Convenience: build an algebra from ``{name: (arity, callable)}``."""
    sig = Signature([(n, a) for n, (a, _) in signature_map.items()])
    tables = {}
    for n, (a, fn) in signature_map.items():
        if a == 0:
            tables[n] = np.int64(fn())
        else:
            t = np.zeros((size,) * a, dtype=np.int64)
            for args in iproduct(range(size), repeat=a):
                t[args] = fn(*args)
            tables[n] = t
    return FiniteAlgebra(sig, size, tables, **kw)


@dataclass(frozen=True, eq=False)
class Homomorphism:
    dom: FiniteAlgebra
    cod: FiniteAlgebra
    map: tuple

    def __call__(self, x):
        return self.map[x]

    def __eq__(self, other):
        return (isinstance(other, Homomorphism) and self.dom is other.dom
                and self.cod is other.cod and self.map == other.map)

    def __hash__(self):
        return hash(self.map)

    def compose(self, inner: "Homomorphism") -> "Homomorphism":
        """``self o inner``."""
        return Homomorphism(inner.dom, self.cod, tuple(self.map[x] for x in inner.map))

    def is_homomorphism(self) -> bool:
        return is_homomorphism(self.dom, self.cod, self.map)


def is_homomorphism(A: FiniteAlgebra, B: FiniteAlgebra, mapping) -> bool:
    if A.signature != B.signature:
        return False
    h = np.asarray(mapping, dtype=np.int64)
    if h.shape != (A.size,) or (h.size and (h.min() < 0 or h.max() >= B.size)):
        return False
    for op, arity in A.signature:
        ta, tb = A._tables[op], B._tables[op]
        if arity == 0:
            if h[int(ta)] != int(tb):
                return False
            continue
        grids = np.indices((A.size,) * arity)
        if not np.array_equal(h[ta], tb[tuple(h[g] for g in grids)]):
            return False
    return True


def _check_same_signature(A, B):
    if A.signature != B.signature:
        raise SignatureError(f"signature mismatch: {A.signature!r} vs {B.signature!r}")


def hom_problem(A: FiniteAlgebra, B: FiniteAlgebra) -> kernels.CSP:
    """Homomorphism search A -> B as a constraint problem (uncompiled)."""
    _check_same_signature(A, B)
    csp = kernels.CSP(A.size, B.size)
    for op, arity in A.signature:
        off = csp.add_table(B.flat(op))
        if arity == 0:
            csp.add_functions(off, np.zeros((1, 0), dtype=np.int64), [int(A.table(op))])
            continue
        args = np.indices((A.size,) * arity).reshape(arity, -1).T
        csp.add_functions(off, args, A.flat(op))
    return csp


def _run(csp, limit, max_nodes, what):
    sols, status, nodes = kernels.csp_search(csp.compile(), limit, max_nodes)
    if status == kernels.STATUS_RESULT_CAP:
        raise ResourceLimitError(f"{what}: result cap reached", partial=len(sols))
    if status == kernels.STATUS_NODE_CAP:
        raise ResourceLimitError(f"{what}: node cap reached after {nodes} nodes", partial=len(sols))
    return sols


def enumerate_homs(A: FiniteAlgebra, B: FiniteAlgebra, limit: int | None = None,
                   max_nodes: int = 50 * DEFAULT_MAX_NODES, fixed: dict | None = None) -> list:
    """All homomorphisms A -> B, in lexicographic order of their map arrays.

    ``fixed`` pins chosen elements of A to chosen images.
    """
    csp = hom_problem(A, B)
    for x, y in (fixed or {}).items():
        csp.restrict(x, [y])
    sols = _run(csp, DEFAULT_MAX_HOMS if limit is None else limit, max_nodes, "homomorphisms")
    return [Homomorphism(A, B, tuple(int(v) for v in row)) for row in sols]


def hom_maps(A, B, limit=None, max_nodes=50 * DEFAULT_MAX_NODES) -> np.ndarray:
    """Like ``enumerate_homs`` but returns the raw ``(count, |A|)`` array."""
    csp = hom_problem(A, B)
    return _run(csp, DEFAULT_MAX_HOMS if limit is None else limit, max_nodes, "homomorphisms")


def _flat_ops(A: FiniteAlgebra):
    arities = np.array([a for _, a in A.signature], dtype=np.int64)
    flats = [A.flat(n) for n in A.signature.names]
    offsets = np.zeros(len(flats), dtype=np.int64)
    if flats:
        offsets[1:] = np.cumsum([f.size for f in flats])[:-1]
        tables = np.concatenate(flats)
    else:
        tables = np.zeros(1, dtype=np.int64)
    return tables, arities, offsets


def subalgebra_generate(A: FiniteAlgebra, seed: Iterable[int]) -> frozenset:
    """Least subuniverse of A containing ``seed`` (and every constant)."""
    member = np.zeros(A.size, dtype=np.bool_)
    for x in seed:
        x = int(x)
        if not 0 <= x < A.size:
            raise ValueError(f"element {x} out of range")
        member[x] = True
    tables, arities, offsets = _flat_ops(A)
    closed = kernels.close_subset(member, tables, arities, offsets, A.size)
    return frozenset(int(x) for x in np.nonzero(closed)[0])


def is_subuniverse(A: FiniteAlgebra, subset) -> bool:
    s = frozenset(int(x) for x in subset)
    return subalgebra_generate(A, s) == s


def enumerate_subuniverses(A: FiniteAlgebra, cap: int = 100_000) -> list:
    """Every subuniverse of A, sorted by size and then lexicographically.

    The empty set appears only when A has no constants.
    """
    tables, arities, offsets = _flat_ops(A)

    def close(mask):
        return kernels.close_subset(mask, tables, arities, offsets, A.size)

    start = close(np.zeros(A.size, dtype=np.bool_))
    seen = {start.tobytes(): start}
    queue = [start]
    while queue:
        cur = queue.pop()
        for a in np.nonzero(~cur)[0]:
            m = cur.copy()
            m[a] = True
            m = close(m)
            key = m.tobytes()
            if key not in seen:
                seen[key] = m
                if len(seen) > cap:
                    raise ResourceLimitError(f"more than {cap} subuniverses", partial=len(seen))
                queue.append(m)
    subs = [tuple(int(x) for x in np.nonzero(m)[0]) for m in seen.values()]
    subs.sort(key=lambda s: (len(s), s))
    return [frozenset(s) for s in subs]


def subalgebra(A: FiniteAlgebra, subset, name=None):
    """The subalgebra on ``subset`` (relabelled 0..k-1 in increasing order),
    with its inclusion homomorphism into A."""
    elems = sorted(int(x) for x in subset)
    if not elems:
        raise ValueError("empty subuniverse does not form an algebra")
    index = np.full(A.size, -1, dtype=np.int64)
    index[elems] = np.arange(len(elems))
    arr = np.array(elems, dtype=np.int64)
    tables = {}
    for op, arity in A.signature:
        t = A._tables[op]
        if arity == 0:
            v = index[int(t)]
            if v < 0:
                raise ValueError(f"subset misses the constant {op!r}")
            tables[op] = v
            continue
        sub = t[np.ix_(*([arr] * arity))]
        mapped = index[sub]
        if (mapped < 0).any():
            raise ValueError(f"subset not closed under {op!r}")
        tables[op] = mapped
    labels = [A.label(x) for x in elems] if A.labels else None
    B = FiniteAlgebra(A.signature, len(elems), tables, labels, name)
    return B, Homomorphism(B, A, tuple(elems))


def subalgebras(A: FiniteAlgebra, cap: int = 100_000) -> list:
    """All (non-empty) subalgebras as algebras, in ``enumerate_subuniverses`` order."""
    return [subalgebra(A, s)[0] for s in enumerate_subuniverses(A, cap) if s]


def direct_product(algs: Sequence[FiniteAlgebra], signature: Signature | None = None,
                   max_size: int = 1 << 20, name=None) -> FiniteAlgebra:
    """Componentwise product.

    Element ``(x_1, ..., x_k)`` is encoded mixed-radix with the first factor
    most significant: ``x_1*|A_2|*...*|A_k| + ... + x_k``. The empty product
    is the trivial algebra (pass ``signature`` in that case).
    """
    algs = list(algs)
    if not algs:
        if signature is None:
            raise ValueError("empty product needs an explicit signature")
        return trivial_algebra(signature)
    sig = algs[0].signature
    for B in algs[1:]:
        _check_same_signature(algs[0], B)
    sizes = [B.size for B in algs]
    total = int(np.prod(sizes, dtype=object))
    if total > max_size:
        raise ResourceLimitError(f"product of size {total} exceeds cap {max_size}", partial=0)
    strides = [int(np.prod(sizes[i + 1:], dtype=np.int64)) for i in range(len(sizes))]
    elems = np.arange(total, dtype=np.int64)
    comps = [(elems // s) % n for s, n in zip(strides, sizes)]
    tables = {}
    for op, arity in sig:
        if arity == 0:
            tables[op] = sum(int(B.table(op)) * s for B, s in zip(algs, strides))
            continue
        if total ** arity > 1 << 26:
            raise ResourceLimitError(f"table for {op!r} too large", partial=0)
        grids = np.indices((total,) * arity)
        acc = np.zeros((total,) * arity, dtype=np.int64)
        for B, c, s in zip(algs, comps, strides):
            acc += B._tables[op][tuple(c[g] for g in grids)] * s
        tables[op] = acc
    labels = None
    if all(B.labels for B in algs):
        labels = ["(" + ",".join(B.label(int(c[e])) for B, c in zip(algs, comps)) + ")"
                  for e in range(total)]
    return FiniteAlgebra(sig, total, tables, labels, name)


def power(A: FiniteAlgebra, n: int, **kw) -> FiniteAlgebra:
    return direct_product([A] * n, signature=A.signature, **kw)


def product_components(sizes: Sequence[int], x: int) -> tuple:
    out = []
    for n in reversed(sizes):
        out.append(x % n)
        x //= n
    return tuple(reversed(out))


def projection(prod_alg: FiniteAlgebra, factors: Sequence[FiniteAlgebra], i: int) -> Homomorphism:
    sizes = [B.size for B in factors]
    stride = int(np.prod(sizes[i + 1:], dtype=np.int64))
    m = tuple(int((x // stride) % sizes[i]) for x in range(prod_alg.size))
    return Homomorphism(prod_alg, factors[i], m)


def _element_invariants(A: FiniteAlgebra) -> np.ndarray:
    """Per-element isomorphism invariants (idempotence, fixed points, constants)."""
    cols = []
    for op, arity in A.signature:
        t = A._tables[op]
        if arity == 0:
            col = np.zeros(A.size, dtype=np.int64)
            col[int(t)] = 1
            cols.append(col)
            continue
        diag = t[tuple([np.arange(A.size)] * arity)]
        cols.append((diag == np.arange(A.size)).astype(np.int64))
        if arity == 1:
            # size of the preimage of each element
            cols.append(np.bincount(t, minlength=A.size))
        else:
            cols.append(np.bincount(t.ravel(), minlength=A.size))
    if not cols:
        return np.zeros((A.size, 0), dtype=np.int64)
    return np.stack(cols, axis=1)


def find_isomorphism(A: FiniteAlgebra, B: FiniteAlgebra, max_nodes=10 * DEFAULT_MAX_NODES):
    """A bijective homomorphism A -> B whose inverse is a homomorphism, or None."""
    if A.signature != B.signature or A.size != B.size:
        return None
    ia, ib = _element_invariants(A), _element_invariants(B)
    if sorted(map(tuple, ia)) != sorted(map(tuple, ib)):
        return None
    csp = hom_problem(A, B)
    csp.injective = True
    bkeys = [tuple(r) for r in ib]
    for x in range(A.size):
        key = tuple(ia[x])
        csp.restrict(x, [y for y in range(B.size) if bkeys[y] == key])
    sols, status, _ = kernels.csp_search(csp.compile(), 1, max_nodes)
    if len(sols) == 0:
        if status == kernels.STATUS_NODE_CAP:
            raise ResourceLimitError("isomorphism search exceeded node cap", partial=0)
        return None
    m = tuple(int(v) for v in sols[0])
    inv = [0] * B.size
    for x, y in enumerate(m):
        inv[y] = x
    if not is_homomorphism(B, A, inv):
        raise VerificationError("inverse of a bijective homomorphism failed to be one")
    return Homomorphism(A, B, m)


def is_isomorphic(A, B) -> bool:
    return find_isomorphism(A, B) is not None


# -- closure of tuples under coordinatewise operations ------------------------


@dataclass
class RowClosure:
    rows: np.ndarray
    provenance: list = field(default_factory=list)
    found: int | None = None
    complete: bool = True


def _dtype_for(n):
    return np.uint8 if n <= 256 else (np.uint16 if n <= 65536 else np.int64)


def close_rows(ops, size: int, seeds, max_rows: int = 1_000_000, target=None,
               max_depth: int | None = None, chunk: int = 1 << 22) -> RowClosure:
    """Semi-naive closure of ``seeds`` under coordinatewise operations.

    ``ops`` is a list of ``(name, arity, flat_table)`` on a universe of size
    ``size``; each row of ``seeds`` is a function on some fixed finite domain.
    Nullary operations contribute constant rows. ``provenance[i]`` is
    ``("seed", j)`` or ``(op, child_indices)``, so every row carries a term.
    With ``target`` (a predicate on a batch of rows returning a mask) the
    search stops at the first matching row, recorded in ``found``.
    ``complete`` is False when ``max_rows`` or ``max_depth`` cut it short.
    """
    seeds = np.asarray(seeds)
    width = seeds.shape[1] if seeds.ndim == 2 else 0
    dt = _dtype_for(size)
    rows = []
    prov = []
    index = {}
    res = RowClosure(np.zeros((0, width), dtype=dt))

    def add(batch, provs):
        """Insert new rows; return indices of those that were new."""
        new = []
        if len(batch) == 0:
            return new
        uniq, first = np.unique(batch, axis=0, return_index=True)
        order = np.argsort(first)
        for j in order:
            r = uniq[j]
            key = r.tobytes()
            if key in index:
                continue
            index[key] = len(rows)
            rows.append(r)
            prov.append(provs(int(first[j])))
            new.append(len(rows) - 1)
        return new

    def hit(new_idx):
        if target is None or not new_idx:
            return None
        mask = np.asarray(target(np.stack([rows[i] for i in new_idx])))
        where = np.nonzero(mask)[0]
        return new_idx[int(where[0])] if where.size else None

    def finish(found, complete):
        res.rows = np.stack(rows) if rows else np.zeros((0, width), dtype=dt)
        res.provenance = prov
        res.found = found
        res.complete = complete
        return res

    level0 = add(seeds.astype(dt), lambda j: ("seed", j))
    consts = [(n, t) for n, a, t in ops if a == 0]
    for n, t in consts:
        crow = np.full((1, width), int(t[0]), dtype=dt)
        level0 += add(crow, lambda j, n=n: (n, ()))
    f = hit(level0)
    if f is not None:
        return finish(f, False)
    frontier = level0
    depth = 0
    body = [(n, a, np.asarray(t, dtype=np.int64)) for n, a, t in ops if a > 0]
    while frontier:
        if max_depth is not None and depth >= max_depth:
            return finish(None, False)
        depth += 1
        n_old = len(rows) - len(frontier)
        all_idx = np.arange(len(rows))
        old_idx = np.arange(n_old)
        front_idx = np.array(frontier)
        new_level = []
        table_rows = np.stack(rows).astype(np.int64)
        for name, arity, table in body:
            # each tuple with at least one frontier argument exactly once:
            # positions before the first frontier one come from old rows
            for j in range(arity):
                pools = [old_idx] * j + [front_idx] + [all_idx] * (arity - j - 1)
                if any(p.size == 0 for p in pools):
                    continue
                shape = [p.size for p in pools]
                total = int(np.prod(shape))
                per = max(1, chunk // max(width, 1))
                for start in range(0, total, per):
                    flat_ids = np.arange(start, min(total, start + per))
                    combo = np.unravel_index(flat_ids, shape)
                    acc = np.zeros((flat_ids.size, width), dtype=np.int64)
                    for pos in range(arity):
                        acc = acc * size + table_rows[pools[pos][combo[pos]]]
                    vals = table[acc].astype(dt)
                    children = [pools[pos][combo[pos]] for pos in range(arity)]
                    got = add(vals, lambda q, name=name, ch=children:
                              (name, tuple(int(c[q]) for c in ch)))
                    new_level += got
                    f = hit(got)
                    if f is not None:
                        return finish(f, False)
                    if len(rows) > max_rows:
                        return finish(None, False)
        frontier = new_level
    return finish(None, True)


def row_term(closure: RowClosure, i: int, seed_terms):
    """Rebuild the term recorded for row ``i`` of a ``close_rows`` result."""
    from .terms import App

    memo = {}

    def go(k):
        if k in memo:
            return memo[k]
        p = closure.provenance[k]
        if p[0] == "seed":
            t = seed_terms[p[1]]
        else:
            t = App(p[0], tuple(go(c) for c in p[1]))
        memo[k] = t
        return t

    return go(i)


def algebra_on_rows(base: FiniteAlgebra, rows: np.ndarray, name=None) -> FiniteAlgebra:
    """Subalgebra of a power of ``base`` whose elements are the given rows.

    Rows are functions into ``base`` on a common domain; they must be closed
    under the coordinatewise operations.
    """
    rows = np.asarray(rows, dtype=np.int64)
    key = {r.tobytes(): i for i, r in enumerate(rows)}
    k, width = rows.shape
    tables = {}
    for op, arity in base.signature:
        t = base._tables[op]
        if arity == 0:
            r = np.full(width, int(t), dtype=np.int64)
            if r.tobytes() not in key:
                raise VerificationError(f"rows miss the constant {op!r}")
            tables[op] = key[r.tobytes()]
            continue
        combos = np.indices((k,) * arity).reshape(arity, -1)
        acc = np.zeros((combos.shape[1], width), dtype=np.int64)
        for j in range(arity):
            acc = acc * base.size + rows[combos[j]]
        vals = t.ravel()[acc]
        out = np.empty(combos.shape[1], dtype=np.int64)
        for q in range(combos.shape[1]):
            try:
                out[q] = key[vals[q].tobytes()]
            except KeyError:
                raise VerificationError(f"rows not closed under {op!r}") from None
        tables[op] = out.reshape((k,) * arity)
    return FiniteAlgebra(base.signature, k, tables, name=name)


def free_algebra_oracle(M: FiniteAlgebra, n: int, cap: int = 100_000):
    """Free algebra on ``n`` generators in ISP(M), as a subalgebra of M^(M^n).

    Returns ``(F, generators)`` where ``generators[i]`` is the element of F
    given by the i-th projection M^n -> M. Elements are sorted
    lexicographically as functions on M^n.
    """
    if n < 1:
        raise ValueError("need at least one generator")
    if M.size ** n > cap:
        raise ResourceLimitError(f"|M|^n = {M.size ** n} exceeds cap {cap}", partial=0)
    grids = np.indices((M.size,) * n).reshape(n, -1)
    ops = [(op, a, M.flat(op)) for op, a in M.signature]
    cl = close_rows(ops, M.size, grids, max_rows=cap)
    if not cl.complete:
        raise ResourceLimitError(f"free algebra exceeds {cap} elements", partial=len(cl.rows))
    rows = cl.rows.astype(np.int64)
    order = np.lexsort(rows.T[::-1])
    rows = rows[order]
    F = algebra_on_rows(M, rows, name=f"F({n})")
    where = {r.tobytes(): i for i, r in enumerate(rows)}
    gens = [where[g.astype(np.int64).tobytes()] for g in grids]
    return F, gens
