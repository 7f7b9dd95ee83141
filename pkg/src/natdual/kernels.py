"""Hot inner loops: backtracking map search and subset closure.

Both kernels work on flat integer tables. An operation of arity k on a
universe of size n is a table of n**k entries indexed row-major, so the
argument tuple (x_1, ..., x_k) sits at x_1*n**(k-1) + ... + x_k.

Each kernel exists twice: a numba-compiled version and an interpreted one
(plain Python for the backtracking search, vectorised numpy for the
closure). The public wrappers pick one according to ``_accel.USE_NUMBA``
unless a backend is passed explicitly.
"""

from contextlib import contextmanager

import numpy as np

from . import _accel

FUNC = 0
REL = 1

STATUS_DONE = 0
STATUS_RESULT_CAP = 1
STATUS_NODE_CAP = 2


def _csp_impl(n_dom, n_cod, allowed, injective, level_ptr, c_kind, c_arity,
              c_args, c_res, c_off, force, tables, max_results, max_nodes):
    # Depth-first search over variables 0..n_dom-1 in order, values tried in
    # increasing order, so solutions come out lexicographically sorted.
    cap = 64
    out = np.empty((cap, max(n_dom, 1)), dtype=np.int64)
    count = 0
    status = 0
    nodes = 0
    h = np.zeros(max(n_dom, 1), dtype=np.int64)
    nxt = np.zeros(max(n_dom, 1), dtype=np.int64)
    used = np.zeros(max(n_cod, 1), dtype=np.int64)
    level = 0
    nxt[0] = 0
    while level >= 0:
        if level == n_dom:
            if count == max_results:
                status = 1
                break
            if count == cap:
                bigger = np.empty((cap * 2, n_dom), dtype=np.int64)
                bigger[:cap] = out[:cap]
                out = bigger
                cap *= 2
            for i in range(n_dom):
                out[count, i] = h[i]
            count += 1
            level -= 1
            if injective and level >= 0:
                used[h[level]] -= 1
            continue
        # pick the next candidate value for this level
        v = -1
        fc = force[level]
        if fc >= 0:
            if nxt[level] == 0:
                idx = 0
                for j in range(c_arity[fc]):
                    idx = idx * n_cod + h[c_args[fc, j]]
                cand = tables[c_off[fc] + idx]
                nxt[level] = 1
                if allowed[level, cand] != 0:
                    v = cand
        else:
            w = nxt[level]
            while w < n_cod and allowed[level, w] == 0:
                w += 1
            if w < n_cod:
                v = w
                nxt[level] = w + 1
            else:
                nxt[level] = n_cod
        if v >= 0 and injective and used[v] > 0:
            # forced values are not retried; free values move on
            if fc >= 0:
                v = -1
            else:
                continue
        if v < 0:
            level -= 1
            if injective and level >= 0:
                used[h[level]] -= 1
            continue
        nodes += 1
        if nodes > max_nodes:
            status = 2
            break
        h[level] = v
        ok = True
        for c in range(level_ptr[level], level_ptr[level + 1]):
            idx = 0
            for j in range(c_arity[c]):
                idx = idx * n_cod + h[c_args[c, j]]
            val = tables[c_off[c] + idx]
            if c_kind[c] == 0:
                if val != h[c_res[c]]:
                    ok = False
                    break
            else:
                if val == 0:
                    ok = False
                    break
        if ok:
            if injective:
                used[v] += 1
            level += 1
            if level < n_dom:
                nxt[level] = 0
    return out[:count], count, status, nodes


_csp_nb = _accel.njit(_csp_impl)


def _close_impl(member, tables, arities, offsets, size):
    changed = True
    idx = np.zeros(16, dtype=np.int64)
    while changed:
        changed = False
        elems = np.nonzero(member)[0]
        m = elems.shape[0]
        for op in range(arities.shape[0]):
            k = arities[op]
            if k == 0:
                v = tables[offsets[op]]
                if not member[v]:
                    member[v] = True
                    changed = True
                continue
            if m == 0:
                continue
            for j in range(k):
                idx[j] = 0
            while True:
                flat = 0
                for j in range(k):
                    flat = flat * size + elems[idx[j]]
                v = tables[offsets[op] + flat]
                if not member[v]:
                    member[v] = True
                    changed = True
                j = k - 1
                while j >= 0:
                    idx[j] += 1
                    if idx[j] < m:
                        break
                    idx[j] = 0
                    j -= 1
                if j < 0:
                    break
    return member


_close_nb = _accel.njit(_close_impl)


def _close_np(member, tables, arities, offsets, size):
    member = member.copy()
    while True:
        elems = np.nonzero(member)[0]
        before = int(member.sum())
        for op in range(arities.shape[0]):
            k = int(arities[op])
            off = int(offsets[op])
            if k == 0:
                member[tables[off]] = True
                continue
            if elems.size == 0:
                continue
            grids = np.ix_(*([elems] * k))
            flat = np.zeros([elems.size] * k, dtype=np.int64)
            for g in grids:
                flat = flat * size + g
            member[tables[off + flat.ravel()]] = True
        if int(member.sum()) == before:
            return member


def _pick(backend):
    if backend is None:
        return "numba" if _accel.USE_NUMBA else "python"
    if backend not in ("numba", "python"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not _accel.HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    return backend


_CAPS = {"results": None, "nodes": None}


@contextmanager
def caps(max_results=None, max_nodes=None):
    """Ceiling on every search run inside the block (per search, not cumulative)."""
    old = dict(_CAPS)
    _CAPS.update(results=max_results, nodes=max_nodes)
    try:
        yield
    finally:
        _CAPS.update(old)


def csp_search(problem, max_results, max_nodes, backend=None):
    """Run the backtracking kernel on a compiled problem.

    Returns ``(solutions, status, nodes)`` where ``solutions`` is an
    ``(count, n_dom)`` int64 array in lexicographic order.
    """
    if problem.n_dom == 0:
        return np.zeros((1, 0), dtype=np.int64), STATUS_DONE, 0
    if _CAPS["results"] is not None:
        max_results = min(max_results, _CAPS["results"])
    if _CAPS["nodes"] is not None:
        max_nodes = min(max_nodes, _CAPS["nodes"])
    fn = _csp_nb if _pick(backend) == "numba" else _csp_impl
    out, count, status, nodes = fn(
        problem.n_dom, problem.n_cod, problem.allowed, problem.injective,
        problem.level_ptr, problem.c_kind, problem.c_arity, problem.c_args,
        problem.c_res, problem.c_off, problem.force, problem.tables,
        np.int64(max_results), np.int64(max_nodes))
    return np.array(out[:count]), int(status), int(nodes)


def close_subset(member, tables, arities, offsets, size, backend=None):
    """Least superset of the boolean ``member`` vector closed under the ops."""
    member = np.ascontiguousarray(member, dtype=np.bool_)
    if _pick(backend) == "numba":
        if arities.size and int(arities.max()) > 16:
            raise ValueError("operations of arity > 16 are not supported")
        return _close_nb(member.copy(), tables, arities, offsets, np.int64(size))
    return _close_np(member, tables, arities, offsets, size)


class CSP:
    """Constraint problem: find maps dom -> cod satisfying table constraints.

    Function constraint: ``table[h(args)] == h(res)``.
    Relation constraint: ``table[h(args)] != 0``.
    Every constraint is filed under the largest variable it mentions; a
    function constraint whose result variable is strictly the largest
    forces the value at that level.
    """

    def __init__(self, n_dom, n_cod):
        self.n_dom = int(n_dom)
        self.n_cod = int(n_cod)
        self.allowed = np.ones((max(self.n_dom, 1), max(self.n_cod, 1)), dtype=np.uint8)
        if self.n_cod == 0:
            self.allowed[:] = 0
        self.injective = False
        self._tables = []
        self._table_len = 0
        self._blocks = []

    def add_table(self, flat):
        flat = np.asarray(flat, dtype=np.int64).ravel()
        off = self._table_len
        self._tables.append(flat)
        self._table_len += flat.size
        return off

    def table_at(self, off):
        pos = 0
        for t in self._tables:
            if pos == off:
                return t
            pos += t.size
        raise KeyError(off)

    def add_functions(self, off, args, res):
        """Bulk function constraints; ``args`` is ``(m, k)``, ``res`` is ``(m,)``."""
        args = np.asarray(args, dtype=np.int64)
        res = np.asarray(res, dtype=np.int64).ravel()
        args = args.reshape(res.size, -1)
        self._blocks.append((FUNC, off, args, res))

    def add_relations(self, off, args):
        args = np.asarray(args, dtype=np.int64)
        if args.ndim == 1:
            args = args.reshape(1, -1)
        self._blocks.append((REL, off, args, np.full(args.shape[0], -1, dtype=np.int64)))

    def restrict(self, var, values):
        row = np.zeros(max(self.n_cod, 1), dtype=np.uint8)
        row[list(values)] = 1
        self.allowed[var] &= row

    def compile(self):
        n = max(self.n_dom, 1)
        maxk = max([b[2].shape[1] for b in self._blocks] + [1])
        kinds, arities, argss, ress, offs = [], [], [], [], []
        for kind, off, args, res in self._blocks:
            m, k = args.shape
            if m == 0:
                continue
            pad = np.zeros((m, maxk), dtype=np.int64)
            pad[:, :k] = args
            kinds.append(np.full(m, kind, dtype=np.int64))
            arities.append(np.full(m, k, dtype=np.int64))
            argss.append(pad)
            ress.append(res)
            offs.append(np.full(m, off, dtype=np.int64))
        if kinds:
            kind = np.concatenate(kinds)
            arity = np.concatenate(arities)
            args = np.concatenate(argss)
            res = np.concatenate(ress)
            off = np.concatenate(offs)
        else:
            kind = arity = res = off = np.zeros(0, dtype=np.int64)
            args = np.zeros((0, maxk), dtype=np.int64)
        cols = np.arange(maxk)[None, :] < arity[:, None]
        argmax = np.where(cols, args, -1).max(axis=1, initial=-1) if args.size else np.full(kind.size, -1)
        level = np.maximum(argmax, res)
        keep = level >= 0
        kind, arity, args, res, off, level, argmax = (
            x[keep] for x in (kind, arity, args, res, off, level, argmax))
        order = np.argsort(level, kind="stable")
        kind, arity, args, res, off, level, argmax = (
            x[order] for x in (kind, arity, args, res, off, level, argmax))
        self.level_ptr = np.searchsorted(level, np.arange(n + 1), side="left").astype(np.int64)
        forcing = (kind == FUNC) & (res == level) & (argmax < level)
        self.force = np.full(n, -1, dtype=np.int64)
        idx = np.nonzero(forcing)[0]
        # first forcing constraint per level
        lv, first = np.unique(level[idx], return_index=True)
        self.force[lv] = idx[first]
        self.c_kind = np.ascontiguousarray(kind)
        self.c_arity = np.ascontiguousarray(arity)
        self.c_args = np.ascontiguousarray(args if args.shape[0] else np.zeros((1, maxk), dtype=np.int64))
        self.c_res = np.ascontiguousarray(res)
        self.c_off = np.ascontiguousarray(off)
        self.tables = np.concatenate(self._tables) if self._tables else np.zeros(1, dtype=np.int64)
        self.allowed = np.ascontiguousarray(self.allowed)
        return self
