"""Duplicators and product representations.

A duplicator is a list of named pairs ``[t1, t2]`` of base terms of even
arity 2n. Applied to an algebra B it gives an algebra on B x B whose
operation ``[t1, t2]`` sends ``((a1,b1), ..., (an,bn))`` to
``(t1(a1,b1,...,an,bn), t2(a1,b1,...,an,bn))``. Pairs are encoded as
``a*|B| + b``.

The conditions checked here:

L  every base operation f and coordinate i has an n-ary duplicate term t
   with ``pi_i(t((a1,a1),...,(an,an))) = f(a1,...,an)``;
M  a binary duplicate term v with ``v((a,b),(c,d)) = (a,d)``;
P  a unary duplicate term s with ``s((a,b)) = (b,a)``;
D  t1 only reads the first coordinates and t2 only the second ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (FiniteAlgebra, Homomorphism, Signature, algebra_on_rows,
                      close_rows, hom_maps, is_homomorphism, row_term, trivial_algebra)
from .errors import (ConditionError, DecompositionError, ResourceLimitError, SignatureError,
                     VerificationError)
from .terms import Term, Var, substitute, term_from_json, term_table, term_to_json

HOLDS, FAILS, UNKNOWN = "HOLDS", "FAILS", "UNKNOWN"
CONDITIONS = ("L", "M", "P", "D")


@dataclass(frozen=True)
class TermPair:
    name: str
    half_arity: int
    t1: Term
    t2: Term

    def __post_init__(self):
        n2 = 2 * self.half_arity
        if self.t1.arity != n2 or self.t2.arity != n2:
            raise SignatureError(f"pair {self.name!r}: terms must have arity {n2}")


@dataclass
class Duplicator:
    base_signature: Signature
    pairs: list
    witnesses: dict = field(default_factory=dict)
    name: str | None = None

    def __post_init__(self):
        names = [p.name for p in self.pairs]
        if len(set(names)) != len(names):
            raise SignatureError(f"duplicate pair names in {names}")
        for p in self.pairs:
            p.t1.check(self.base_signature)
            p.t2.check(self.base_signature)
        self.signature = Signature([(p.name, p.half_arity) for p in self.pairs])
        w = self.witnesses
        for key, t in w.get("L", {}).items():
            op, _, i = key.partition(":")
            if op not in self.base_signature or i not in ("1", "2"):
                raise SignatureError(f"bad L witness key {key!r}")
            if t.arity != self.base_signature.arity(op):
                raise SignatureError(f"L witness {key!r} must have arity {self.base_signature.arity(op)}")
            t.check(self.signature)
        for cond, ar in (("M", 2), ("P", 1)):
            if cond in w:
                if w[cond].arity != ar:
                    raise SignatureError(f"{cond} witness must have arity {ar}")
                w[cond].check(self.signature)
        for pname, (r1, r2) in w.get("D", {}).items():
            if pname not in self.signature:
                raise SignatureError(f"D witness for unknown pair {pname!r}")
            n = self.signature.arity(pname)
            for r in (r1, r2):
                if r.arity != n:
                    raise SignatureError(f"D witness for {pname!r} must have arity {n}")
                r.check(self.base_signature)

    def pair(self, name) -> TermPair:
        for p in self.pairs:
            if p.name == name:
                return p
        raise KeyError(name)

    def to_json(self) -> dict:
        d = {"base_signature": self.base_signature.to_json(),
             "pairs": [{"name": p.name, "half_arity": p.half_arity,
                        "t1": term_to_json(p.t1.body), "t2": term_to_json(p.t2.body)}
                       for p in self.pairs]}
        if self.name:
            d["name"] = self.name
        w = {}
        if self.witnesses.get("L"):
            w["L"] = {k: term_to_json(t) for k, t in self.witnesses["L"].items()}
        for c in ("M", "P"):
            if c in self.witnesses:
                w[c] = term_to_json(self.witnesses[c])
        if self.witnesses.get("D"):
            w["D"] = {k: {"r1": term_to_json(a), "r2": term_to_json(b)}
                      for k, (a, b) in self.witnesses["D"].items()}
        if w:
            d["witnesses"] = w
        return d

    @classmethod
    def from_json(cls, d) -> "Duplicator":
        sig = Signature([(o["name"], o["arity"]) for o in d["base_signature"]])
        pairs = []
        for p in d["pairs"]:
            n = int(p["half_arity"])
            pairs.append(TermPair(p["name"], n, term_from_json(p["t1"], 2 * n),
                                  term_from_json(p["t2"], 2 * n)))
        gsig = Signature([(p.name, p.half_arity) for p in pairs])
        w = {}
        wd = d.get("witnesses", {})
        if "L" in wd:
            w["L"] = {k: term_from_json(t, sig.arity(k.partition(":")[0]) if k.partition(":")[0] in sig else None)
                      for k, t in wd["L"].items()}
        if "M" in wd:
            w["M"] = term_from_json(wd["M"], 2)
        if "P" in wd:
            w["P"] = term_from_json(wd["P"], 1)
        if "D" in wd:
            w["D"] = {k: (term_from_json(v["r1"], gsig.arity(k) if k in gsig else None),
                          term_from_json(v["r2"], gsig.arity(k) if k in gsig else None))
                      for k, v in wd["D"].items()}
        return cls(sig, pairs, w, d.get("name"))

    def extend(self, pairs, base_signature=None, name=None, witnesses=None) -> "Duplicator":
        """A larger duplicator: this one plus ``pairs`` over a (larger) base."""
        sig = base_signature or self.base_signature
        w = {k: (dict(v) if isinstance(v, dict) else v) for k, v in self.witnesses.items()}
        for k, v in (witnesses or {}).items():
            if isinstance(v, dict):
                w.setdefault(k, {}).update(v)
            else:
                w[k] = v
        return Duplicator(sig, list(self.pairs) + list(pairs), w, name)


def _pair_labels(B):
    if not B.labels:
        return None
    return [f"({B.label(a)},{B.label(b)})" for a in range(B.size) for b in range(B.size)]


def apply_P_Gamma(G: Duplicator, B: FiniteAlgebra, max_entries: int = 1 << 26,
                  name=None) -> FiniteAlgebra:
    if B.signature != G.base_signature:
        raise SignatureError(f"algebra signature {B.signature!r} is not the duplicator base")
    s = B.size
    tables = {}
    for p in G.pairs:
        n = p.half_arity
        if (s * s) ** n > max_entries:
            raise ResourceLimitError(f"table for {p.name!r} too large", partial=0)
        a = term_table(B, p.t1)
        b = term_table(B, p.t2)
        # (a1,b1,...,an,bn) in base s is the same flat index as (p1,...,pn) in base s^2
        tables[p.name] = (a * s + b).reshape((s * s,) * n) if n else int(a) * s + int(b)
    return FiniteAlgebra(G.signature, s * s, tables, _pair_labels(B), name)


def apply_P_Gamma_morphism(G: Duplicator, h: Homomorphism, dom=None, cod=None) -> Homomorphism:
    """``h x h`` between the duplicated algebras (built unless supplied)."""
    dom = dom if dom is not None else apply_P_Gamma(G, h.dom)
    cod = cod if cod is not None else apply_P_Gamma(G, h.cod)
    hm = np.asarray(h.map, dtype=np.int64)
    s, t = h.dom.size, h.cod.size
    p = np.arange(s * s)
    m = hm[p // s] * t + hm[p % s]
    if not is_homomorphism(dom, cod, m):
        raise VerificationError("h x h is not a homomorphism; the duplicator is broken")
    return Homomorphism(dom, cod, tuple(int(x) for x in m))


# -- condition checks ---------------------------------------------------------


@dataclass
class ConditionResult:
    condition: str
    status: str
    witnesses: dict = field(default_factory=dict)
    source: dict = field(default_factory=dict)
    counterexample: dict = field(default_factory=dict)
    clone_sizes: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_json(self):
        d = {"condition": self.condition, "status": self.status,
             "witnesses": {k: (str(v) if not isinstance(v, tuple) else [str(x) for x in v])
                           for k, v in self.witnesses.items()},
             "source": dict(self.source)}
        if self.counterexample:
            d["counterexample"] = self.counterexample
        if self.clone_sizes:
            d["clone_sizes"] = dict(self.clone_sizes)
        if self.notes:
            d["notes"] = list(self.notes)
        return d


@dataclass
class DuplicatorReport:
    results: dict

    @property
    def all_hold(self) -> bool:
        return all(r.status == HOLDS for r in self.results.values())

    def status(self, cond) -> str:
        return self.results[cond].status

    def to_json(self):
        return {c: r.to_json() for c, r in self.results.items()}


def _gamma_ops(PN):
    return [(op, a, PN.flat(op)) for op, a in PN.signature]


def _combine(statuses):
    if any(s == FAILS for s in statuses):
        return FAILS
    if any(s == UNKNOWN for s in statuses):
        return UNKNOWN
    return HOLDS


def _search(PN, seeds, pred, max_rows):
    """Closure search over the clone of ``PN``; returns (status, term row info)."""
    cl = close_rows(_gamma_ops(PN), PN.size, seeds, max_rows=max_rows, target=pred)
    if cl.found is not None:
        return HOLDS, cl
    return (FAILS if cl.complete else UNKNOWN), cl


def _diag_points(s, n):
    grids = np.indices((s,) * n).reshape(n, -1) if n else np.zeros((0, 1), dtype=np.int64)
    return grids


def _verify_L(N, PN, op, i, t):
    s = N.size
    n = N.signature.arity(op)
    tab = term_table(PN, t)
    if n == 0:
        vals = np.int64(tab)
    else:
        g = np.indices((s,) * n)
        vals = tab[tuple(x * s + x for x in g)]
    got = vals // s if i == 1 else vals % s
    return bool(np.array_equal(np.asarray(got), np.asarray(N.table(op))))


def _verify_M(N, PN, v):
    s = N.size
    p = np.arange(PN.size)
    exp = (p[:, None] // s) * s + (p[None, :] % s)
    return bool(np.array_equal(term_table(PN, v), exp))


def _verify_P(N, PN, t):
    s = N.size
    p = np.arange(PN.size)
    return bool(np.array_equal(term_table(PN, t), (p % s) * s + p // s))


def check_L(N, G, PN, supplied, max_rows):
    res = ConditionResult("L", HOLDS)
    s = N.size
    statuses = []
    for op, n in N.signature:
        pts = _diag_points(s, n)
        seeds = pts * s + pts if n else np.zeros((0, 1), dtype=np.int64)
        target_vals = np.asarray(N.table(op)).reshape(-1)
        for i in (1, 2):
            key = f"{op}:{i}"
            t = supplied.get(key)
            if t is not None:
                if _verify_L(N, PN, op, i, t):
                    res.witnesses[key] = t
                    res.source[key] = "supplied"
                    statuses.append(HOLDS)
                    continue
                res.notes.append(f"supplied witness for {key} rejected")

            def pred(rows, i=i):
                got = rows.astype(np.int64) // s if i == 1 else rows.astype(np.int64) % s
                return np.all(got == target_vals[None, :], axis=1)

            st, cl = _search(PN, seeds, pred, max_rows)
            statuses.append(st)
            res.clone_sizes[key] = len(cl.rows)
            if st == HOLDS:
                body = row_term(cl, cl.found, [Var(j) for j in range(n)])
                res.witnesses[key] = Term(body, n)
                res.source[key] = "search"
            else:
                res.source[key] = "search"
                if st == FAILS:
                    res.counterexample[key] = f"none of the {len(cl.rows)} {n}-ary term functions match"
    res.status = _combine(statuses)
    return res


def _projection_seeds(size, arity):
    return np.indices((size,) * arity).reshape(arity, -1)


def check_M(N, G, PN, supplied, max_rows):
    res = ConditionResult("M", HOLDS)
    s = N.size
    if supplied is not None:
        if _verify_M(N, PN, supplied):
            res.witnesses["v"] = supplied
            res.source["v"] = "supplied"
            return res
        res.notes.append("supplied M witness rejected")
    seeds = _projection_seeds(PN.size, 2)
    target = ((seeds[0] // s) * s + seeds[1] % s).astype(np.int64)
    st, cl = _search(PN, seeds, lambda r: np.all(r.astype(np.int64) == target[None, :], axis=1),
                     max_rows)
    res.status = st
    res.source["v"] = "search"
    res.clone_sizes["v"] = len(cl.rows)
    if st == HOLDS:
        res.witnesses["v"] = Term(row_term(cl, cl.found, [Var(0), Var(1)]), 2)
    elif st == FAILS:
        res.counterexample["v"] = f"none of the {len(cl.rows)} binary term functions match"
    return res


def check_P(N, G, PN, supplied, max_rows):
    res = ConditionResult("P", HOLDS)
    s = N.size
    if supplied is not None:
        if _verify_P(N, PN, supplied):
            res.witnesses["s"] = supplied
            res.source["s"] = "supplied"
            return res
        res.notes.append("supplied P witness rejected")
    seeds = _projection_seeds(PN.size, 1)
    target = ((seeds[0] % s) * s + seeds[0] // s).astype(np.int64)
    st, cl = _search(PN, seeds, lambda r: np.all(r.astype(np.int64) == target[None, :], axis=1),
                     max_rows)
    res.status = st
    res.source["s"] = "search"
    res.clone_sizes["s"] = len(cl.rows)
    if st == HOLDS:
        res.witnesses["s"] = Term(row_term(cl, cl.found, [Var(0)]), 1)
    elif st == FAILS:
        res.counterexample["s"] = f"none of the {len(cl.rows)} unary term functions swap coordinates"
    return res


def _dependence(tab, axis):
    """First pair of argument tuples differing only at ``axis`` with different values."""
    ref = np.take(tab, [0], axis=axis)
    bad = np.argwhere(tab != ref)
    if bad.size == 0:
        return None
    other = tuple(int(x) for x in bad[0])
    base = list(other)
    base[axis] = 0
    return [base, list(other)]


def derived_D_terms(p: TermPair):
    """``r1 = t1(x0,x0,x1,x1,...)``, ``r2`` likewise; valid when (D) holds semantically."""
    n = p.half_arity
    dup = [Var(i // 2) for i in range(2 * n)]
    return Term(substitute(p.t1.body, dup), n), Term(substitute(p.t2.body, dup), n)


def check_D(N, G, supplied):
    res = ConditionResult("D", HOLDS)
    statuses = []
    for p in G.pairs:
        n = p.half_arity
        t1 = term_table(N, p.t1)
        t2 = term_table(N, p.t2)
        bad = None
        for k in range(2 * n):
            # t1 must ignore odd positions, t2 even ones
            which, tab = ("t1", t1) if k % 2 else ("t2", t2)
            dep = _dependence(tab, k)
            if dep:
                bad = (which, k, dep)
                break
        if bad:
            statuses.append(FAILS)
            which, k, tuples = bad
            res.counterexample[p.name] = {"term": which, "position": k, "tuples": tuples}
            continue
        r = supplied.get(p.name)
        derived = derived_D_terms(p)
        if r is not None:
            ok = True
            for rr, dd in zip(r, derived):
                if not np.array_equal(term_table(N, rr), term_table(N, dd)):
                    ok = False
            if ok:
                res.witnesses[p.name] = tuple(r)
                res.source[p.name] = "supplied"
                statuses.append(HOLDS)
                continue
            res.notes.append(f"supplied D witness for {p.name!r} rejected")
        res.witnesses[p.name] = derived
        res.source[p.name] = "semantic"
        statuses.append(HOLDS)
    res.status = _combine(statuses)
    return res


def check_duplicator(N: FiniteAlgebra, G: Duplicator, conditions=("L", "M", "P"),
                     witness: dict | None = None, max_rows: int = 20_000) -> DuplicatorReport:
    """Check the chosen conditions of ``G`` over ``N``.

    Supplied witnesses (argument or ``G.witnesses``) are verified; missing
    ones are searched for by closing the term functions of the duplicated
    algebra. A FAILS verdict means that closure finished without a match.
    ``max_rows`` caps each closure; hitting it gives UNKNOWN.
    """
    if N.signature != G.base_signature:
        raise SignatureError("algebra is not over the duplicator base signature")
    for c in conditions:
        if c not in CONDITIONS:
            raise ValueError(f"unknown condition {c!r}")
    w = dict(G.witnesses)
    if witness:
        for k, v in witness.items():
            w[k] = {**w.get(k, {}), **v} if isinstance(v, dict) else v
    PN = apply_P_Gamma(G, N) if set(conditions) & {"L", "M", "P"} else None
    out = {}
    for c in conditions:
        if c == "L":
            out[c] = check_L(N, G, PN, w.get("L", {}), max_rows)
        elif c == "M":
            out[c] = check_M(N, G, PN, w.get("M"), max_rows)
        elif c == "P":
            out[c] = check_P(N, G, PN, w.get("P"), max_rows)
        else:
            out[c] = check_D(N, G, w.get("D", {}))
    return DuplicatorReport(out)


# -- two-factor products ------------------------------------------------------


def _split_tables(G, P, Q):
    """Tables of r1 on P and r2 on Q per pair, checking (D) on both factors."""
    out = {}
    for p in G.pairs:
        n = p.half_arity
        r1, r2 = G.witnesses.get("D", {}).get(p.name) or derived_D_terms(p)
        for alg, which, t, odd in ((P, "t1", p.t1, 1), (Q, "t2", p.t2, 0)):
            tab = term_table(alg, t)
            for k in range(odd, 2 * n, 2):
                bad = _dependence(tab, k)
                if bad:
                    raise ConditionError(
                        f"(D) fails for {p.name!r}: {which} depends on argument {k} ({bad})")
        out[p.name] = (term_table(P, r1), term_table(Q, r2))
    return out


def odot(G: Duplicator, P: FiniteAlgebra, Q: FiniteAlgebra, name=None) -> FiniteAlgebra:
    """``P (.) Q`` on P x Q, encoded ``p*|Q| + q``."""
    for X in (P, Q):
        if X.signature != G.base_signature:
            raise SignatureError("factor is not over the duplicator base signature")
    m = Q.size
    tables = {}
    for pname, (a, b) in _split_tables(G, P, Q).items():
        n = G.signature.arity(pname)
        if n == 0:
            tables[pname] = int(a) * m + int(b)
            continue
        size = P.size * m
        g = np.indices((size,) * n)
        tables[pname] = a[tuple(x // m for x in g)] * m + b[tuple(x % m for x in g)]
    labels = None
    if P.labels and Q.labels:
        labels = [f"({P.label(x)},{Q.label(y)})" for x in range(P.size) for y in range(m)]
    return FiniteAlgebra(G.signature, P.size * m, tables, labels, name)


# -- decomposition ------------------------------------------------------------


def _rows_algebra(N, rows, name=None):
    """Distinct rows (sorted) as a subalgebra of a power of N, plus index lookup."""
    rows = np.asarray(rows, dtype=np.int64)
    uniq = {}
    for r in rows:
        uniq.setdefault(r.tobytes(), r)
    keys = sorted(uniq, key=lambda k: tuple(uniq[k]))
    arr = np.stack([uniq[k] for k in keys]) if keys else np.zeros((0, rows.shape[1]), np.int64)
    try:
        B = algebra_on_rows(N, arr, name=name)
    except VerificationError as e:
        raise DecompositionError("NOT_DECOMPOSABLE", str(e)) from None
    return B, {k: i for i, k in enumerate(keys)}


def _separate(A, xs, ys):
    seen = {}
    for a in range(A.size):
        key = xs[a].tobytes() + b"|" + ys[a].tobytes()
        if key in seen:
            raise DecompositionError(
                "NOT_SEPARATED", f"elements {seen[key]} and {a} are not separated",
                witness=(seen[key], a))
        seen[key] = a
    return seen


def decompose(G: Duplicator, N: FiniteAlgebra, A: FiniteAlgebra, PN=None, max_homs=None):
    """Write A as ``P_G(B)`` for a subalgebra B of a power of N.

    Returns ``(B, iso)`` with ``iso: A -> P_G(B)`` (``iso.cod`` is P_G(B)).
    """
    if A.signature != G.signature:
        raise SignatureError("algebra is not over the duplicated signature")
    PN = PN if PN is not None else apply_P_Gamma(G, N)
    S = hom_maps(A, PN, limit=max_homs)
    s = N.size
    xs = (S // s).T.copy()
    ys = (S % s).T.copy()
    _separate(A, xs, ys)
    X = {r.tobytes() for r in xs}
    Y = {r.tobytes() for r in ys}
    if X != Y:
        extra = sorted(X ^ Y)[0]
        a = next(i for i in range(A.size) if xs[i].tobytes() == extra or ys[i].tobytes() == extra)
        raise DecompositionError("NOT_RECTANGULAR",
                                 "first and second coordinate images differ", witness=(a,))
    pairs = {xs[a].tobytes() + b"|" + ys[a].tobytes() for a in range(A.size)}
    for xa in range(A.size):
        for ya in range(A.size):
            if xs[xa].tobytes() + b"|" + ys[ya].tobytes() not in pairs:
                raise DecompositionError(
                    "NOT_RECTANGULAR",
                    f"(x_{xa}, y_{ya}) is not in the image", witness=(xa, ya))
    B, idx = _rows_algebra(N, xs)
    PB = apply_P_Gamma(G, B)
    m = [idx[xs[a].tobytes()] * B.size + idx[ys[a].tobytes()] for a in range(A.size)]
    if not is_homomorphism(A, PB, m):
        raise VerificationError("decomposition map is not a homomorphism")
    return B, Homomorphism(A, PB, tuple(m))


def generator_pair(G: Duplicator, N: FiniteAlgebra):
    T = trivial_algebra(G.base_signature)
    return odot(G, N, T, name="M1"), odot(G, T, N, name="M2")


def decompose_pair(G: Duplicator, N: FiniteAlgebra, A: FiniteAlgebra, Ms=None, max_homs=None):
    """Write A as ``P (.) Q`` using homomorphisms into ``N (.) T`` and ``T (.) N``.

    Returns ``(P, Q, iso)`` with ``iso: A -> P (.) Q``.
    """
    if A.signature != G.signature:
        raise SignatureError("algebra is not over the duplicated signature")
    M1, M2 = Ms if Ms is not None else generator_pair(G, N)
    xs = hom_maps(A, M1, limit=max_homs).T.copy()
    ys = hom_maps(A, M2, limit=max_homs).T.copy()
    _separate(A, xs, ys)
    pairs = {xs[a].tobytes() + b"|" + ys[a].tobytes() for a in range(A.size)}
    for xa in range(A.size):
        for ya in range(A.size):
            if xs[xa].tobytes() + b"|" + ys[ya].tobytes() not in pairs:
                raise DecompositionError(
                    "NOT_RECTANGULAR", f"(x_{xa}, y_{ya}) is not in the image", witness=(xa, ya))
    P, ip = _rows_algebra(N, xs, name="P")
    Q, iq = _rows_algebra(N, ys, name="Q")
    PQ = odot(G, P, Q)
    m = [ip[xs[a].tobytes()] * Q.size + iq[ys[a].tobytes()] for a in range(A.size)]
    if not is_homomorphism(A, PQ, m):
        raise VerificationError("decomposition map is not a homomorphism")
    return P, Q, Homomorphism(A, PQ, tuple(m))


# -- conflation ---------------------------------------------------------------


def _is_dual_endo(L, f):
    f = np.asarray(f)
    j, mt = L.table("join"), L.table("meet")
    return (np.array_equal(f[j], mt[f[:, None], f[None, :]])
            and np.array_equal(f[mt], j[f[:, None], f[None, :]])
            and f[L.table("bot")] == L.table("top") and f[L.table("top")] == L.table("bot"))


def conflation_split(A: FiniteAlgebra, G_db: Duplicator | None = None,
                     G_dbm: Duplicator | None = None, two: FiniteAlgebra | None = None,
                     conf="conf"):
    """Recover the double Ockham algebra behind an algebra in the DB- signature.

    ``G_db`` duplicates bounded lattices over ``two``; ``G_dbm`` is ``G_db``
    plus the pair ``conf = (f(x1), g(x0))`` over the double Ockham signature.
    Returns ``(B, iso)`` with ``iso: A -> P_{G_dbm}(B)``. The defaults are
    the shipped ``gamma_db``, ``gamma_dbminus`` and the two-element lattice.
    """
    if G_db is None or G_dbm is None or two is None:
        from . import catalog

        G_db = G_db or catalog.duplicator("gamma_db")
        G_dbm = G_dbm or catalog.duplicator("gamma_dbminus")
        two = two if two is not None else catalog.two()
    if A.signature != G_dbm.signature:
        raise SignatureError("algebra is not over the DB- signature")
    red = A.reduct(G_db.signature.names)
    try:
        L, iso = decompose(G_db, two, red)
    except DecompositionError as e:
        raise DecompositionError(e.code, "DB-reduct not decomposable: " + str(e), e.witness) from None
    m = L.size
    inv = np.empty(A.size, dtype=np.int64)
    inv[list(iso.map)] = np.arange(A.size)
    fwd = np.asarray(iso.map)
    # conflation transported to L x L
    minus = fwd[np.asarray(A.table(conf))[inv]]
    zero = int(L.table("bot"))
    f = minus[zero * m + np.arange(m)] // m
    g = minus[np.arange(m) * m + zero] % m
    for nm, e in (("f", f), ("g", g)):
        if not _is_dual_endo(L, e):
            raise DecompositionError("NOT_DUAL_ENDOMORPHISM",
                                     f"extracted {nm} is not a dual endomorphism",
                                     witness=tuple(int(x) for x in e))
    p = np.arange(m * m)
    expect = f[p % m] * m + g[p // m]
    if not np.array_equal(minus, expect):
        bad = int(np.nonzero(minus != expect)[0][0])
        raise DecompositionError("NOT_CONFLATION", "conflation is not (f(b), g(a))",
                                 witness=(int(inv[bad]),))
    tables = {n: L.table(n) for n in L.signature.names}
    tables["f"], tables["g"] = f, g
    B = FiniteAlgebra(G_dbm.base_signature, m,
                      {n: tables[n] for n in G_dbm.base_signature.names}, L.labels)
    PB = apply_P_Gamma(G_dbm, B)
    if not is_homomorphism(A, PB, fwd):
        raise VerificationError("split does not reassemble to the input")
    return B, Homomorphism(A, PB, tuple(int(x) for x in fwd))
