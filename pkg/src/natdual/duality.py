"""Alter egos and the hom-functors between algebras and structures.

Everything here is finite, so the topology on a structure is discrete and
carried only as a marker. ``D(A)`` is the set of homomorphisms A -> M with
the ego's relations and operations lifted pointwise; ``E(X)`` is the set of
structure morphisms X -> ego with M's operations lifted pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import kernels
from .algebra import (FiniteAlgebra, algebra_on_rows, hom_maps,
                      is_homomorphism, is_subuniverse, power, product_components,
                      subalgebra_generate)
from .errors import CompatibilityError, ResourceLimitError, SignatureError, VerificationError

DEFAULT_MAX_MORPHISMS = 1_000_000
DEFAULT_MAX_NODES = 50_000_000


def _as_tuples(tuples, arity, size):
    arr = np.asarray(sorted({tuple(int(x) for x in t) for t in tuples}), dtype=np.int64)
    arr = arr.reshape(-1, arity)
    if arr.size and (arr.min() < 0 or arr.max() >= size):
        raise ValueError("relation tuple entries out of range")
    return arr


class FiniteStructure:
    """Finite relational-operational structure (discrete topology).

    ``relations`` maps name -> (arity, tuples); ``operations`` maps
    name -> (arity, table). A nullary operation on the empty structure is
    stored as None.
    """

    topology = "discrete"

    def __init__(self, size: int, relations: dict | None = None,
                 operations: dict | None = None, points=None, name=None):
        self.size = int(size)
        if self.size < 0:
            raise ValueError("size must be >= 0")
        self.relations = {}
        for rname, (arity, tuples) in (relations or {}).items():
            self.relations[rname] = (int(arity), _as_tuples(tuples, int(arity), self.size))
        self.operations = {}
        for oname, (arity, table) in (operations or {}).items():
            arity = int(arity)
            if arity == 0:
                if self.size == 0:
                    table = None
                else:
                    table = int(table)
                    if not 0 <= table < self.size:
                        raise ValueError(f"constant {oname!r} out of range")
            else:
                table = np.asarray(table, dtype=np.int64).reshape((self.size,) * arity)
                if table.size and (table.min() < 0 or table.max() >= self.size):
                    raise ValueError(f"table of {oname!r} out of range")
            self.operations[oname] = (arity, table)
        self.points = points
        self.name = name

    @property
    def type(self):
        return (tuple(sorted((n, a) for n, (a, _) in self.relations.items())),
                tuple(sorted((n, a) for n, (a, _) in self.operations.items())))

    def rel_table(self, name) -> np.ndarray:
        """Flat 0/1 membership table of a relation over ``size**arity`` tuples."""
        arity, tuples = self.relations[name]
        out = np.zeros(self.size ** arity, dtype=np.int64)
        if len(tuples):
            flat = np.zeros(len(tuples), dtype=np.int64)
            for j in range(arity):
                flat = flat * self.size + tuples[:, j]
            out[flat] = 1
        return out

    def tuple_set(self, name) -> frozenset:
        return frozenset(map(tuple, self.relations[name][1].tolist()))

    def __repr__(self):
        return (f"FiniteStructure(size={self.size}, relations={sorted(self.relations)}, "
                f"operations={sorted(self.operations)})")

    def to_json(self, over=None) -> dict:
        d = {"size": self.size,
             "relations": {n: {"arity": a, "tuples": t.tolist()}
                           for n, (a, t) in self.relations.items()},
             "operations": {n: {"arity": a, "table": (t.tolist() if isinstance(t, np.ndarray) else t)}
                            for n, (a, t) in self.operations.items()}}
        if over:
            d["over"] = over
        return d

    @classmethod
    def from_json(cls, d) -> "FiniteStructure":
        rels = {n: (v["arity"], v["tuples"]) for n, v in d.get("relations", {}).items()}
        ops = {n: (v["arity"], v["table"]) for n, v in d.get("operations", {}).items()}
        return cls(d["size"], rels, ops)


def same_structure(X: FiniteStructure, Y: FiniteStructure) -> bool:
    if X.size != Y.size or X.type != Y.type:
        return False
    if any(X.tuple_set(n) != Y.tuple_set(n) for n in X.relations):
        return False
    for n, (a, t) in X.operations.items():
        u = Y.operations[n][1]
        if a == 0 and t != u:
            return False
        if a and not np.array_equal(t, u):
            return False
    return True


class AlterEgo:
    """A compatible structure on the universe of ``over``.

    Relations must be subuniverses of powers of ``over``; operations must be
    homomorphisms from powers of ``over``. Checked on construction.
    """

    def __init__(self, over: FiniteAlgebra, structure: FiniteStructure, name=None):
        if structure.size != over.size:
            raise CompatibilityError("ego universe differs from the algebra's")
        self.over = over
        self.structure = structure
        self.name = name
        self._check()

    def _check(self):
        M = self.over
        for rname, (arity, tuples) in self.structure.relations.items():
            if len(tuples) == 0:
                raise CompatibilityError(f"relation {rname!r} is empty")
            Mn = power(M, arity)
            flat = np.zeros(len(tuples), dtype=np.int64)
            for j in range(arity):
                flat = flat * M.size + tuples[:, j]
            if not is_subuniverse(Mn, flat.tolist()):
                extra = min(subalgebra_generate(Mn, flat.tolist()) - set(flat.tolist()))
                t = product_components([M.size] * arity, extra)
                raise CompatibilityError(
                    f"relation {rname!r} is not a subuniverse of M^{arity}: "
                    f"its closure adds the tuple {list(t)}")
        for oname, (arity, table) in self.structure.operations.items():
            if arity == 0:
                c = int(table)
                for f, k in M.signature:
                    if k == 0:
                        if int(M.table(f)) != c:
                            raise CompatibilityError(
                                f"constant {oname!r} differs from the algebra constant {f!r}")
                    elif int(M.table(f)[(c,) * k]) != c:
                        raise CompatibilityError(f"constant {oname!r} is not fixed by {f!r}")
                continue
            if not is_homomorphism(power(M, arity), M, table.ravel()):
                raise CompatibilityError(f"operation {oname!r} is not a homomorphism M^{arity} -> M")

    def __repr__(self):
        return f"AlterEgo({self.name or ''} over {self.over!r}, {self.structure!r})"


def ego_from_json(d, over: FiniteAlgebra, name=None) -> AlterEgo:
    return AlterEgo(over, FiniteStructure.from_json(d), name or d.get("name"))


def _check_type(X: FiniteStructure, ego: FiniteStructure):
    if X.type != ego.type:
        raise SignatureError(f"structure type {X.type} does not match ego type {ego.type}")


def morphism_problem(X: FiniteStructure, Y: FiniteStructure) -> kernels.CSP:
    _check_type(X, Y)
    csp = kernels.CSP(X.size, Y.size)
    for rname, (arity, tuples) in X.relations.items():
        if len(tuples) == 0:
            continue
        off = csp.add_table(Y.rel_table(rname))
        csp.add_relations(off, tuples)
    for oname, (arity, table) in X.operations.items():
        if arity == 0:
            if X.size == 0 or Y.size == 0:
                continue
            off = csp.add_table(np.array([Y.operations[oname][1]]))
            csp.add_functions(off, np.zeros((1, 0), dtype=np.int64), [table])
            continue
        if X.size == 0:
            continue
        off = csp.add_table(Y.operations[oname][1].ravel())
        args = np.indices((X.size,) * arity).reshape(arity, -1).T
        csp.add_functions(off, args, table.ravel())
    return csp


def structure_morphisms(X: FiniteStructure, Y: FiniteStructure,
                        limit=DEFAULT_MAX_MORPHISMS, max_nodes=DEFAULT_MAX_NODES) -> np.ndarray:
    """All morphisms X -> Y as a ``(count, |X|)`` array, lexicographically sorted."""
    csp = morphism_problem(X, Y)
    sols, status, _ = kernels.csp_search(csp.compile(), limit, max_nodes)
    if status == kernels.STATUS_RESULT_CAP:
        raise ResourceLimitError(f"more than {limit} structure morphisms", partial=len(sols))
    if status == kernels.STATUS_NODE_CAP:
        raise ResourceLimitError("morphism search exceeded node cap", partial=len(sols))
    return sols


def is_structure_morphism(X: FiniteStructure, Y: FiniteStructure, m) -> bool:
    _check_type(X, Y)
    m = np.asarray(m, dtype=np.int64)
    if m.shape != (X.size,):
        return False
    for rname, (arity, tuples) in X.relations.items():
        if len(tuples) and not Y.rel_table(rname)[_flat(m[tuples], Y.size)].all():
            return False
    for oname, (arity, t) in X.operations.items():
        u = Y.operations[oname][1]
        if arity == 0:
            if X.size and m[t] != u:
                return False
            continue
        if X.size == 0:
            continue
        grids = np.indices((X.size,) * arity)
        if not np.array_equal(m[t], u[tuple(m[g] for g in grids)]):
            return False
    return True


def _flat(tuples, size):
    flat = np.zeros(tuples.shape[0], dtype=np.int64)
    for j in range(tuples.shape[1]):
        flat = flat * size + tuples[:, j]
    return flat


# -- the functors -------------------------------------------------------------


def _lift(ego: FiniteStructure, rows: np.ndarray):
    """Pointwise lifting of the ego over a set of functions given as rows.

    Row i is a function from some index set into the ego universe; the lifted
    relation holds of (i_1,...,i_n) when it holds at every index. Lifted
    operations must land back among the rows.
    """
    k = rows.shape[0]
    width = rows.shape[1] if rows.ndim == 2 else 0
    index = {r.tobytes(): i for i, r in enumerate(rows)}
    rels = {}
    for rname, (arity, _) in ego.relations.items():
        mem = ego.rel_table(rname)
        if k ** arity > 1 << 24:
            raise ResourceLimitError(f"lifting {rname!r} needs {k ** arity} candidate tuples", 0)
        combos = np.indices((k,) * arity).reshape(arity, -1)
        if width == 0:
            rels[rname] = (arity, combos.T)
            continue
        flat = np.zeros((combos.shape[1], width), dtype=np.int64)
        for j in range(arity):
            flat = flat * ego.size + rows[combos[j]]
        keep = mem[flat].all(axis=1)
        rels[rname] = (arity, combos[:, keep].T)
    ops = {}
    for oname, (arity, table) in ego.operations.items():
        if arity == 0:
            r = np.full(width, table if table is not None else 0, dtype=rows.dtype)
            if k == 0:
                ops[oname] = (0, None)
                continue
            if r.tobytes() not in index:
                raise VerificationError(f"lifted constant {oname!r} is not a point")
            ops[oname] = (0, index[r.tobytes()])
            continue
        if k == 0:
            ops[oname] = (arity, np.zeros((0,) * arity, dtype=np.int64))
            continue
        combos = np.indices((k,) * arity).reshape(arity, -1)
        flat = np.zeros((combos.shape[1], width), dtype=np.int64)
        for j in range(arity):
            flat = flat * ego.size + rows[combos[j]]
        vals = table.ravel()[flat].astype(rows.dtype)
        out = np.empty(combos.shape[1], dtype=np.int64)
        for q in range(combos.shape[1]):
            key = vals[q].tobytes()
            if key not in index:
                raise VerificationError(f"lifted operation {oname!r} leaves the point set")
            out[q] = index[key]
        ops[oname] = (arity, out.reshape((k,) * arity))
    return rels, ops


@dataclass
class Dual:
    """D(A): the structure with its points (the homomorphisms, as rows)."""
    structure: FiniteStructure
    homs: np.ndarray


def dualize(M: FiniteAlgebra, ego: AlterEgo, A: FiniteAlgebra,
            limit=DEFAULT_MAX_MORPHISMS) -> Dual:
    if ego.over is not M and not ego.over.same_tables(M):
        raise CompatibilityError("ego is not over M")
    S = hom_maps(A, M, limit=limit)
    rels, ops = _lift(ego.structure, S)
    X = FiniteStructure(len(S), rels, ops, points=[tuple(r) for r in S.tolist()])
    return Dual(X, S)


@dataclass
class Codual:
    """E(X): the algebra with its elements (the morphisms, as rows)."""
    algebra: FiniteAlgebra
    morphisms: np.ndarray


def edualize(M: FiniteAlgebra, ego: AlterEgo, X: FiniteStructure,
             limit=DEFAULT_MAX_MORPHISMS) -> Codual:
    R = structure_morphisms(X, ego.structure, limit=limit)
    return Codual(algebra_on_rows(M, R, name="E(X)"), R)


@dataclass
class DualityReport:
    injective: bool
    surjective: bool
    e_map: tuple
    sizes: dict
    missing: tuple | None = None
    collision: tuple | None = None
    notes: list = field(default_factory=list)

    @property
    def bijective(self):
        return self.injective and self.surjective

    def to_json(self):
        return {"injective": self.injective, "surjective": self.surjective,
                "bijective": self.bijective, "e_map": list(self.e_map), "sizes": self.sizes,
                "missing": list(self.missing) if self.missing is not None else None,
                "collision": list(self.collision) if self.collision is not None else None,
                "notes": self.notes}


def _evaluation(A_size, point_rows, target: Codual):
    """Map element a to the index of row ``point_rows[:, a]`` among ``target``'s elements."""
    idx = {r.tobytes(): i for i, r in enumerate(target.morphisms)}
    out = []
    for a in range(A_size):
        key = np.ascontiguousarray(point_rows[:, a]).astype(target.morphisms.dtype).tobytes()
        if key not in idx:
            raise VerificationError(f"evaluation at {a} is not a morphism")
        out.append(idx[key])
    return out


def check_duality_at(M: FiniteAlgebra, ego: AlterEgo, A: FiniteAlgebra,
                     limit=DEFAULT_MAX_MORPHISMS) -> DualityReport:
    """Is ``e_A: a -> (h -> h(a))`` a bijection A -> E(D(A))?"""
    d = dualize(M, ego, A, limit)
    e = edualize(M, ego, d.structure, limit)
    S = d.homs.astype(e.morphisms.dtype if e.morphisms.size else np.int64)
    emap = _evaluation(A.size, S, e)
    notes = []
    seen = {}
    collision = None
    for a, i in enumerate(emap):
        if i in seen and collision is None:
            collision = (seen[i], a)
        seen.setdefault(i, a)
    injective = collision is None
    if not is_homomorphism(A, e.algebra, emap):
        raise VerificationError("e_A is not a homomorphism")
    hit = set(emap)
    missing = None
    for i in range(e.algebra.size):
        if i not in hit:
            missing = tuple(int(x) for x in e.morphisms[i])
            break
    return DualityReport(injective, missing is None, tuple(emap),
                         {"A": A.size, "D(A)": d.structure.size, "E(D(A))": e.algebra.size},
                         missing, collision, notes)


@dataclass
class FullnessReport:
    bijective: bool
    isomorphism: bool
    eps_map: tuple
    sizes: dict
    notes: list = field(default_factory=list)

    def to_json(self):
        return {"bijective": self.bijective, "isomorphism": self.isomorphism,
                "eps_map": list(self.eps_map), "sizes": self.sizes, "notes": self.notes}


def _image_structure_iso(X: FiniteStructure, Y: FiniteStructure, m) -> bool:
    """Is the bijection ``m`` an isomorphism X -> Y (preserving and reflecting)?"""
    m = np.asarray(m, dtype=np.int64)
    if sorted(m.tolist()) != list(range(Y.size)):
        return False
    for rname, (arity, tuples) in X.relations.items():
        img = {tuple(int(v) for v in m[t]) for t in tuples}
        if img != Y.tuple_set(rname):
            return False
    return is_structure_morphism(X, Y, m)


def check_fullness_at(M: FiniteAlgebra, ego: AlterEgo, X: FiniteStructure,
                      limit=DEFAULT_MAX_MORPHISMS) -> FullnessReport:
    """Is ``eps_X: x -> (alpha -> alpha(x))`` an isomorphism X -> D(E(X))?"""
    _check_type(X, ego.structure)
    e = edualize(M, ego, X, limit)
    d = dualize(M, ego, e.algebra, limit)
    idx = {r.tobytes(): i for i, r in enumerate(d.homs)}
    eps = []
    notes = []
    for x in range(X.size):
        key = np.ascontiguousarray(e.morphisms[:, x]).astype(d.homs.dtype).tobytes()
        if key not in idx:
            raise VerificationError(f"evaluation at point {x} is not a homomorphism")
        eps.append(idx[key])
    bij = sorted(eps) == list(range(d.structure.size))
    iso = bij and _image_structure_iso(X, d.structure, eps)
    if bij and not iso:
        notes.append("eps_X is bijective but does not reflect the structure")
    return FullnessReport(bij, iso, tuple(eps),
                          {"X": X.size, "E(X)": e.algebra.size, "D(E(X))": d.structure.size}, notes)


# -- transfer to duplicates ---------------------------------------------------


def square_structure(S: FiniteStructure) -> FiniteStructure:
    """``r x r`` for every relation and ``g x g`` for every operation, on pairs ``a*n + b``."""
    n = S.size
    rels = {}
    for rname, (arity, tuples) in S.relations.items():
        i, j = np.meshgrid(np.arange(len(tuples)), np.arange(len(tuples)), indexing="ij")
        rels[rname] = (arity, tuples[i.ravel()] * n + tuples[j.ravel()])
    ops = {}
    for oname, (arity, table) in S.operations.items():
        if arity == 0:
            ops[oname] = (0, None if table is None else table * n + table)
            continue
        g = np.indices((n * n,) * arity)
        ops[oname] = (arity, table[tuple(x // n for x in g)] * n + table[tuple(x % n for x in g)])
    return FiniteStructure(n * n, rels, ops)


def transfer_ego(egoN: AlterEgo, G, PN: FiniteAlgebra | None = None, check=False) -> AlterEgo:
    """The ego on the duplicated generator, re-verified for compatibility.

    With ``check`` the conditions (L), (M), (P) are verified first.
    """
    from .duplication import apply_P_Gamma, check_duplicator

    N = egoN.over
    if check:
        rep = check_duplicator(N, G, ("L", "M", "P"))
        if not rep.all_hold:
            raise CompatibilityError(f"duplicator conditions do not all hold: {rep.to_json()}")
    PN = PN if PN is not None else apply_P_Gamma(G, N)
    try:
        return AlterEgo(PN, square_structure(egoN.structure),
                        name=(egoN.name + "^2") if egoN.name else None)
    except CompatibilityError as e:
        raise CompatibilityError(f"transferred ego not compatible: {e}") from None


@dataclass
class EtaReport:
    ok: bool
    eta_map: tuple
    sizes: dict
    failure: str | None = None

    def to_json(self):
        return {"ok": self.ok, "eta_map": list(self.eta_map), "sizes": self.sizes,
                "failure": self.failure}


def eta_check(B: FiniteAlgebra, G, egoN: AlterEgo, egoPN: AlterEgo | None = None) -> EtaReport:
    """Check that ``y -> y x y`` is an isomorphism ``D(B) -> D(P_G(B))``."""
    from .duplication import apply_P_Gamma

    N = egoN.over
    egoPN = egoPN or transfer_ego(egoN, G)
    PN = egoPN.over
    PB = apply_P_Gamma(G, B)
    dB = dualize(N, egoN, B)
    dA = dualize(PN, egoPN, PB)
    s, b = N.size, B.size
    p = np.arange(b * b)
    idx = {r.tobytes(): i for i, r in enumerate(dA.homs)}
    eta = []
    for y in dB.homs:
        yy = (y[p // b] * s + y[p % b]).astype(dA.homs.dtype)
        if yy.tobytes() not in idx:
            return EtaReport(False, tuple(eta), {"D(B)": len(dB.homs), "D(P(B))": len(dA.homs)},
                             f"y x y is not a homomorphism for y = {tuple(y.tolist())}")
        eta.append(idx[yy.tobytes()])
    sizes = {"D(B)": len(dB.homs), "D(P(B))": len(dA.homs)}
    if sorted(eta) != list(range(len(dA.homs))):
        return EtaReport(False, tuple(eta), sizes, "eta is not bijective")
    if not _image_structure_iso(dB.structure, dA.structure, eta):
        return EtaReport(False, tuple(eta), sizes, "eta does not preserve and reflect structure")
    return EtaReport(True, tuple(eta), sizes)


# -- powers, free algebras, injectivity ---------------------------------------


def structure_power(S: FiniteStructure, n: int, max_size=1 << 16) -> FiniteStructure:
    """``S^n`` on mixed-radix tuples (first coordinate most significant)."""
    size = S.size ** n
    if size > max_size:
        raise ResourceLimitError(f"power of size {size} exceeds cap {max_size}", 0)
    elems = np.arange(size)
    comps = np.stack([(elems // S.size ** (n - 1 - i)) % S.size for i in range(n)])
    rows = comps.T.copy()  # element -> its coordinate tuple
    rels, ops = _lift(S, rows) if size else ({}, {})
    return FiniteStructure(size, rels, ops)


def free_via_duality(M: FiniteAlgebra, ego: AlterEgo, n: int, cap=100_000):
    """E(ego^n) with the coordinate projections as free generators."""
    if M.size ** n > cap:
        raise ResourceLimitError(f"|M|^n = {M.size ** n} exceeds cap {cap}", 0)
    X = structure_power(ego.structure, n, max_size=cap)
    e = edualize(M, ego, X)
    R = e.morphisms
    idx = {r.tobytes(): i for i, r in enumerate(R)}
    elems = np.arange(X.size)
    gens = []
    for i in range(n):
        proj = ((elems // M.size ** (n - 1 - i)) % M.size).astype(R.dtype)
        if proj.tobytes() not in idx:
            raise VerificationError(f"projection {i} is not a morphism")
        gens.append(idx[proj.tobytes()])
    if len(subalgebra_generate(e.algebra, gens)) != e.algebra.size:
        raise VerificationError("projections do not generate E(ego^n)")
    return e.algebra, gens


def induced_substructure(S: FiniteStructure, elems) -> FiniteStructure:
    elems = sorted(int(x) for x in elems)
    index = np.full(S.size, -1, dtype=np.int64)
    index[elems] = np.arange(len(elems))
    rels = {}
    for rname, (arity, tuples) in S.relations.items():
        keep = (index[tuples] >= 0).all(axis=1) if len(tuples) else np.zeros(0, bool)
        rels[rname] = (arity, index[tuples[keep]])
    ops = {}
    arr = np.array(elems, dtype=np.int64)
    for oname, (arity, table) in S.operations.items():
        if arity == 0:
            v = index[table] if table is not None else -1
            if elems and v < 0:
                raise ValueError(f"subset misses the constant {oname!r}")
            ops[oname] = (0, int(v) if elems else None)
            continue
        sub = index[table[np.ix_(*([arr] * arity))]] if elems else np.zeros((0,) * arity, np.int64)
        if (sub < 0).any():
            raise ValueError(f"subset not closed under {oname!r}")
        ops[oname] = (arity, sub)
    return FiniteStructure(len(elems), rels, ops, points=elems)


def _closed(S: FiniteStructure, subset) -> bool:
    sub = set(subset)
    arr = np.array(sorted(sub), dtype=np.int64)
    for oname, (arity, table) in S.operations.items():
        if arity == 0:
            if table not in sub:
                return False
            continue
        vals = table[np.ix_(*([arr] * arity))].ravel()
        if not set(vals.tolist()) <= sub:
            return False
    return True


def _all_morphisms(X: FiniteStructure, Y: FiniteStructure):
    """Morphisms X -> Y, brute force over all maps when that is small."""
    if Y.size ** X.size <= 1 << 16:
        maps = np.indices((Y.size,) * X.size).reshape(X.size, -1).T if X.size else np.zeros((1, 0), np.int64)
        keep = np.ones(len(maps), dtype=bool)
        for rname, (arity, tuples) in X.relations.items():
            if len(tuples) == 0:
                continue
            mem = Y.rel_table(rname)
            for t in tuples:
                flat = np.zeros(len(maps), dtype=np.int64)
                for j in range(arity):
                    flat = flat * Y.size + maps[:, t[j]]
                keep &= mem[flat].astype(bool)
        for oname, (arity, table) in X.operations.items():
            u = Y.operations[oname][1]
            if arity == 0:
                if X.size:
                    keep &= maps[:, table] == u
                continue
            for args in np.indices((X.size,) * arity).reshape(arity, -1).T:
                lhs = maps[:, table[tuple(args)]]
                rhs = u[tuple(maps[:, a] for a in args)]
                keep &= lhs == rhs
        return maps[keep]
    return structure_morphisms(X, Y)


@dataclass
class ProbeReport:
    verdict: str
    bounds: dict
    checked: int
    counterexample: dict | None = None

    def to_json(self):
        return {"verdict": self.verdict, "bounds": self.bounds, "checked": self.checked,
                "counterexample": self.counterexample}


NO_COUNTEREXAMPLE = "NO_COUNTEREXAMPLE_UP_TO_BOUNDS"
COUNTEREXAMPLE = "COUNTEREXAMPLE"


def injectivity_probe(ego: AlterEgo | FiniteStructure, max_power: int = 2, max_sub: int = 4,
                      cap: int = 1 << 12) -> ProbeReport:
    """Look for X <= Y <= ego^p and a morphism X -> ego with no extension to Y.

    Ranges over every p <= ``max_power``, every (operation-closed) subset Y
    of ego^p with ``|Y| <= max_sub`` and every non-empty closed X inside Y.
    """
    E = ego.structure if isinstance(ego, AlterEgo) else ego
    checked = 0
    bounds = {"max_power": max_power, "max_sub": max_sub}
    for p in range(1, max_power + 1):
        if E.size ** p > cap:
            raise ResourceLimitError(f"|ego|^{p} exceeds cap {cap}", 0)
        P = structure_power(E, p)
        for ysize in range(1, min(max_sub, P.size) + 1):
            for Yset in combinations(range(P.size), ysize):
                if not _closed(P, Yset):
                    continue
                Y = induced_substructure(P, Yset)
                ext = _all_morphisms(Y, E)
                for xsize in range(1, ysize + 1):
                    for Xloc in combinations(range(ysize), xsize):
                        if not _closed(Y, Xloc):
                            continue
                        X = induced_substructure(Y, Xloc)
                        checked += 1
                        restr = {tuple(r) for r in ext[:, list(Xloc)].tolist()}
                        for f in _all_morphisms(X, E).tolist():
                            if tuple(f) not in restr:
                                return ProbeReport(COUNTEREXAMPLE, bounds, checked, {
                                    "power": p, "Y": [int(Yset[i]) for i in range(ysize)],
                                    "X": [int(Yset[i]) for i in Xloc], "morphism": f})
    return ProbeReport(NO_COUNTEREXAMPLE, bounds, checked)


def brute_force_ego(N: FiniteAlgebra, cap: int = 10_000) -> AlterEgo:
    """N with every non-empty subuniverse of N^2 as a binary relation.

    Relations are named ``s0, s1, ...`` in the order of
    ``enumerate_subuniverses`` (by size, then lexicographically).
    """
    from .algebra import enumerate_subuniverses

    rels = {}
    for i, sub in enumerate(s for s in enumerate_subuniverses(power(N, 2), cap) if s):
        rels[f"s{i}"] = (2, [(x // N.size, x % N.size) for x in sorted(sub)])
    return AlterEgo(N, FiniteStructure(N.size, rels), "brute")
