"""Two-sorted duals for two-factor products.

The generators are ``M1 = N (.) T`` and ``M2 = T (.) N``; both have the
universe of N, and each carries a copy of N's alter ego. Relations and
operations live inside one sort; a morphism maps sort i to sort i.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .algebra import FiniteAlgebra, Homomorphism, hom_maps, is_homomorphism
from .duality import (AlterEgo, DualityReport, FiniteStructure, _image_structure_iso,
                      dualize, morphism_problem)
from .duplication import decompose_pair, generator_pair
from .errors import ResourceLimitError, SignatureError, VerificationError


@dataclass
class MultisortedStructure:
    sorts: list

    def __post_init__(self):
        if len(self.sorts) != 2:
            raise ValueError("exactly two sorts are supported")

    @property
    def sizes(self):
        return tuple(S.size for S in self.sorts)

    def to_json(self):
        return {"sorts": [S.to_json() for S in self.sorts]}

    @classmethod
    def from_json(cls, d):
        return cls([FiniteStructure.from_json(s) for s in d["sorts"]])


@dataclass
class MultisortedEgo:
    egos: list

    def __post_init__(self):
        if len(self.egos) != 2:
            raise ValueError("exactly two sorts are supported")
        if self.egos[0].structure.type != self.egos[1].structure.type:
            raise SignatureError("sorts of a multisorted ego must share a type")
        if self.egos[0].over.signature != self.egos[1].over.signature:
            raise SignatureError("generators must share a signature")

    @property
    def algebras(self):
        return [e.over for e in self.egos]

    @property
    def structure(self):
        return MultisortedStructure([e.structure for e in self.egos])


def uplus(e1: AlterEgo, e2: AlterEgo) -> MultisortedEgo:
    return MultisortedEgo([e1, e2])


def ego_pair(G, N, egoN: AlterEgo, Ms=None) -> MultisortedEgo:
    """N's ego placed on each of ``N (.) T`` and ``T (.) N``."""
    M1, M2 = Ms if Ms is not None else generator_pair(G, N)
    S = egoN.structure
    return uplus(AlterEgo(M1, S, "sort1"), AlterEgo(M2, S, "sort2"))


@dataclass
class MsDual:
    structure: MultisortedStructure
    homs: list


def ms_dualize(ego: MultisortedEgo, A: FiniteAlgebra) -> MsDual:
    duals = [dualize(e.over, e, A) for e in ego.egos]
    return MsDual(MultisortedStructure([d.structure for d in duals]), [d.homs for d in duals])


def ms_morphisms(X: MultisortedStructure, Y: MultisortedStructure,
                 limit=1_000_000, max_nodes=50_000_000) -> np.ndarray:
    """Sort-preserving morphisms as rows over the disjoint union of X's sorts.

    Values are local to the target sort (0..|Y_i|-1 on sort i's points).
    """
    n1, n2 = X.sizes
    c1, c2 = Y.sizes
    # union domain, union codomain with sort 2 shifted by c1
    csp = kernels.CSP(n1 + n2, c1 + c2)
    for i, (Xi, Yi, doff, coff) in enumerate(((X.sorts[0], Y.sorts[0], 0, 0),
                                              (X.sorts[1], Y.sorts[1], n1, c1))):
        allowed = range(coff, coff + Yi.size)
        for v in range(doff, doff + Xi.size):
            csp.restrict(v, allowed)
        sub = morphism_problem(Xi, Yi)
        for kind, off, args, res in sub._blocks:
            table = sub.table_at(off)
            # re-encode the target table on the union codomain
            k = args.shape[1]
            big = _embed_table(table, Yi.size, c1 + c2, coff, k, kind == kernels.FUNC)
            new_off = csp.add_table(big)
            if kind == kernels.FUNC:
                csp.add_functions(new_off, args + doff, res + doff)
            else:
                csp.add_relations(new_off, args + doff)
    sols, status, _ = kernels.csp_search(csp.compile(), limit, max_nodes)
    if status != kernels.STATUS_DONE:
        raise ResourceLimitError("multisorted morphism search hit a cap", partial=len(sols))
    if len(sols):
        sols = sols.copy()
        sols[:, n1:] -= c1
    return sols


def _embed_table(table, size, big, off, k, is_func):
    """A flat table over ``size**k`` tuples lifted to ``big**k`` on the shifted block."""
    if k == 0:
        return np.asarray(table, dtype=np.int64) + (off if is_func else 0)
    out = np.zeros(big ** k, dtype=np.int64)
    grids = np.indices((size,) * k).reshape(k, -1)
    flat_big = np.zeros(grids.shape[1], dtype=np.int64)
    for j in range(k):
        flat_big = flat_big * big + grids[j] + off
    out[flat_big] = np.asarray(table) + (off if is_func else 0)
    return out


def _mixed_algebra(Ms, rows, split):
    """Algebra on rows whose first ``split`` entries live in Ms[0], the rest in Ms[1]."""
    rows = np.asarray(rows, dtype=np.int64)
    k = rows.shape[0]
    key = {r.tobytes(): i for i, r in enumerate(rows)}
    sig = Ms[0].signature
    tables = {}
    for op, arity in sig:
        if arity == 0:
            r = np.concatenate([np.full(split, int(Ms[0].table(op))),
                                np.full(rows.shape[1] - split, int(Ms[1].table(op)))]).astype(np.int64)
            if r.tobytes() not in key:
                raise VerificationError(f"rows miss the constant {op!r}")
            tables[op] = key[r.tobytes()]
            continue
        combos = np.indices((k,) * arity).reshape(arity, -1)
        parts = []
        for M, sl in ((Ms[0], slice(0, split)), (Ms[1], slice(split, None))):
            acc = np.zeros((combos.shape[1], rows[:, sl].shape[1]), dtype=np.int64)
            for j in range(arity):
                acc = acc * M.size + rows[combos[j]][:, sl]
            parts.append(M.flat(op)[acc])
        vals = np.concatenate(parts, axis=1)
        out = np.empty(combos.shape[1], dtype=np.int64)
        for q in range(combos.shape[1]):
            kk = vals[q].tobytes()
            if kk not in key:
                raise VerificationError(f"rows not closed under {op!r}")
            out[q] = key[kk]
        tables[op] = out.reshape((k,) * arity)
    return FiniteAlgebra(sig, k, tables, name="E(X)")


@dataclass
class MsCodual:
    algebra: FiniteAlgebra
    morphisms: np.ndarray
    split: int


def ms_edualize(ego: MultisortedEgo, X: MultisortedStructure) -> MsCodual:
    R = ms_morphisms(X, ego.structure)
    return MsCodual(_mixed_algebra(ego.algebras, R, X.sizes[0]), R, X.sizes[0])


def ms_check_duality_at(ego: MultisortedEgo, A: FiniteAlgebra) -> DualityReport:
    d = ms_dualize(ego, A)
    e = ms_edualize(ego, d.structure)
    idx = {r.tobytes(): i for i, r in enumerate(e.morphisms)}
    emap = []
    for a in range(A.size):
        row = np.concatenate([d.homs[0][:, a], d.homs[1][:, a]]).astype(np.int64)
        if row.tobytes() not in idx:
            raise VerificationError(f"evaluation at {a} is not a morphism")
        emap.append(idx[row.tobytes()])
    if not is_homomorphism(A, e.algebra, emap):
        raise VerificationError("e_A is not a homomorphism")
    collision = None
    seen = {}
    for a, i in enumerate(emap):
        if i in seen and collision is None:
            collision = (seen[i], a)
        seen.setdefault(i, a)
    missing = None
    hit = set(emap)
    for i in range(e.algebra.size):
        if i not in hit:
            missing = tuple(int(x) for x in e.morphisms[i])
            break
    sizes = {"A": A.size, "sorts": list(d.structure.sizes), "E(D(A))": e.algebra.size}
    return DualityReport(collision is None, missing is None, tuple(emap), sizes, missing, collision)


def sortwise_identification(G, N, egoN: AlterEgo, P: FiniteAlgebra, Q: FiniteAlgebra,
                            ego: MultisortedEgo | None = None) -> dict:
    """Check that sort 1 of D(P (.) Q) is D(P) via ``h -> h (.) f*_Q``, and
    sort 2 is D(Q) via ``k -> f*_P (.) k``, as structures."""
    from .duplication import odot

    ego = ego or ego_pair(G, N, egoN)
    A = odot(G, P, Q)
    d = ms_dualize(ego, A)
    out = {}
    for sort, (F, other, first) in enumerate(((P, Q, True), (Q, P, False))):
        base = dualize(N, egoN, F)
        target = d.homs[sort]
        idx = {r.tobytes(): i for i, r in enumerate(target)}
        elems = np.arange(A.size)
        coord = elems // Q.size if first else elems % Q.size
        m = []
        ok = True
        for h in base.homs:
            row = np.asarray(h)[coord].astype(target.dtype)
            if row.tobytes() not in idx:
                ok = False
                break
            m.append(idx[row.tobytes()])
        ok = ok and _image_structure_iso(base.structure, d.structure.sorts[sort], m)
        out[f"sort{sort + 1}"] = ok
    return out


@dataclass
class Separation:
    sort: int
    hom: Homomorphism


def separating_pair_hom(G, N, A: FiniteAlgebra, a: int, b: int, decomposition=None) -> Separation:
    """A homomorphism from A into ``N (.) T`` or ``T (.) N`` with different
    values at a and b, built from a coordinate projection of one factor."""
    if a == b:
        raise ValueError("need two distinct elements")
    M1, M2 = generator_pair(G, N)
    P, Q, iso = decomposition or decompose_pair(G, N, A, Ms=(M1, M2))
    pa, qa = divmod(iso.map[a], Q.size)
    pb, qb = divmod(iso.map[b], Q.size)
    # P and Q are subalgebras of powers of N; their rows are recovered from homs
    rows_P = _factor_rows(A, M1, iso, Q.size, P.size, first=True)
    rows_Q = _factor_rows(A, M2, iso, Q.size, Q.size, first=False)
    if pa != pb:
        j = int(np.nonzero(rows_P[pa] != rows_P[pb])[0][0])
        m = [int(rows_P[iso.map[x] // Q.size][j]) for x in range(A.size)]
        sort, cod = 1, M1
    else:
        j = int(np.nonzero(rows_Q[qa] != rows_Q[qb])[0][0])
        m = [int(rows_Q[iso.map[x] % Q.size][j]) for x in range(A.size)]
        sort, cod = 2, M2
    if not is_homomorphism(A, cod, m) or m[a] == m[b]:
        raise VerificationError("separating map failed verification")
    return Separation(sort, Homomorphism(A, cod, tuple(m)))


def _factor_rows(A, M, iso, qsize, n, first):
    """Element index of the factor -> its row of hom values (the embedding into N^S)."""
    S = hom_maps(A, M)
    rows = np.zeros((n, len(S)), dtype=np.int64)
    for x in range(A.size):
        c = iso.map[x] // qsize if first else iso.map[x] % qsize
        rows[c] = S[:, x]
    return rows
