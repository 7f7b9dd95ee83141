"""Shipped algebras, alter egos and duplicators.

Element encodings:

* ``{0,1}^n`` products use mixed radix with the first coordinate most
  significant, so in DM4 the element (x, y) is ``2x + y``;
* DB4 is 0 = bottom, 1 = false, 2 = true, 3 = top, which agrees with the
  pair encoding ``a*2 + b`` of the duplicated two-element lattice.

The double Ockham samples are a repository choice: a few small lattices
with assorted pairs of dual endomorphisms, each checked against an
exhaustive search of the dual endomorphisms of its lattice.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from .algebra import (FiniteAlgebra, Signature, direct_product, enumerate_homs,
                      find_isomorphism)
from .duality import AlterEgo, FiniteStructure, brute_force_ego, transfer_ego
from .duplication import Duplicator, apply_P_Gamma, odot
from .errors import NatDualError, VerificationError

SIG_D = Signature([("join", 2), ("meet", 2), ("bot", 0), ("top", 0)])
SIG_DU = Signature([("join", 2), ("meet", 2)])
SIG_DM = Signature([("join", 2), ("meet", 2), ("bot", 0), ("top", 0), ("dneg", 1)])
SIG_DMU = Signature([("join", 2), ("meet", 2), ("dneg", 1)])
SIG_DO = Signature([("join", 2), ("meet", 2), ("f", 1), ("g", 1), ("bot", 0), ("top", 0)])
DUPLICATORS = ("gamma_db", "gamma_dbc", "gamma_dbminus", "gamma_pdb", "gamma_tl_t", "gamma_db_u")


class UnknownKey(NatDualError, KeyError):
    pass


@lru_cache(maxsize=None)
def duplicator(name: str) -> Duplicator:
    """Load a shipped duplicator by file stem."""
    if name not in DUPLICATORS:
        raise UnknownKey(f"no shipped duplicator {name!r}")
    return Duplicator.from_json(json.loads(_dup_file(name).read_text()))


def _dup_file(name):
    return resources.files("natdual").joinpath("data").joinpath("duplicators").joinpath(name + ".json")


def duplicator_path(name: str) -> str:
    return str(_dup_file(name))


# -- lattices -----------------------------------------------------------------


def chain(n: int, sig=SIG_D, name=None) -> FiniteAlgebra:
    a = np.arange(n)
    tables = {"join": np.maximum.outer(a, a), "meet": np.minimum.outer(a, a),
              "bot": 0, "top": n - 1}
    return FiniteAlgebra(sig, n, {k: tables[k] for k in sig.names},
                         [str(i) for i in range(n)], name)


def two(sig=SIG_D) -> FiniteAlgebra:
    return chain(2, sig, name="2")


def boolean_power(n: int, sig=SIG_D) -> FiniteAlgebra:
    """The lattice 2^n, labelled by bit strings."""
    B = direct_product([two(sig)] * n, signature=sig)
    labels = [format(x, f"0{n}b") for x in range(B.size)]
    return FiniteAlgebra(sig, B.size, B.tables, labels, f"2^{n}")


def order_dual(L: FiniteAlgebra) -> FiniteAlgebra:
    swap = {"join": "meet", "meet": "join", "bot": "top", "top": "bot"}
    return FiniteAlgebra(L.signature, L.size,
                         {n: L.table(swap.get(n, n)) for n in L.signature.names}, L.labels)


def dual_endomorphisms(L: FiniteAlgebra) -> list:
    """Every bounded-lattice homomorphism from L to its order dual, as tuples."""
    return [h.map for h in enumerate_homs(L, order_dual(L))]


def extend_do(L: FiniteAlgebra, f, g, name=None) -> FiniteAlgebra:
    f, g = tuple(int(x) for x in f), tuple(int(x) for x in g)
    ends = set(dual_endomorphisms(L))
    for nm, e in (("f", f), ("g", g)):
        if e not in ends:
            raise VerificationError(f"{nm} is not a dual endomorphism of the lattice")
    tables = {n: L.table(n) for n in L.signature.names}
    tables["f"], tables["g"] = np.array(f), np.array(g)
    return FiniteAlgebra(SIG_DO, L.size, {n: tables[n] for n in SIG_DO.names}, L.labels, name)


def _bits(n, x):
    return [(x >> (n - 1 - i)) & 1 for i in range(n)]


def _from_bits(bits):
    v = 0
    for b in bits:
        v = v * 2 + b
    return v


def _pointwise(n, fn):
    return [_from_bits(fn(_bits(n, x))) for x in range(2 ** n)]


def do_samples() -> dict:
    """Finite double Ockham algebras used throughout the tests."""
    L1, L2, L3 = boolean_power(1), boolean_power(2), boolean_power(3)
    C4 = chain(4)
    comp1 = _pointwise(1, lambda b: [1 - b[0]])
    comp2 = _pointwise(2, lambda b: [1 - b[0], 1 - b[1]])
    dm2 = _pointwise(2, lambda b: [1 - b[1], 1 - b[0]])
    proj2 = _pointwise(2, lambda b: [1 - b[0], 1 - b[0]])
    comp3 = _pointwise(3, lambda b: [1 - v for v in b])
    rot3 = _pointwise(3, lambda b: [1 - b[1], 1 - b[2], 1 - b[0]])
    low3 = _pointwise(3, lambda b: [1 - b[0], 1 - b[0], 1 - b[1]])
    rev4 = [3, 2, 1, 0]
    collapse4 = [3, 0, 0, 0]
    return {
        "do2": extend_do(L1, comp1, comp1, "do2"),
        "do4_bool": extend_do(L2, comp2, comp2, "do4_bool"),
        "do4_dm_bool": extend_do(L2, dm2, comp2, "do4_dm_bool"),
        "do4_dm_dm": extend_do(L2, dm2, dm2, "do4_dm_dm"),
        "do4_proj": extend_do(L2, proj2, comp2, "do4_proj"),
        "do4_chain": extend_do(C4, rev4, rev4, "do4_chain"),
        "do4_chain_mixed": extend_do(C4, rev4, collapse4, "do4_chain_mixed"),
        "do8_bool": extend_do(L3, comp3, comp3, "do8_bool"),
        "do8_mixed": extend_do(L3, rot3, low3, "do8_mixed"),
    }


# -- named generators ---------------------------------------------------------


def demorgan4(sig=SIG_DM) -> FiniteAlgebra:
    L = boolean_power(2, SIG_D)
    neg = _pointwise(2, lambda b: [1 - b[1], 1 - b[0]])
    tables = {n: L.table(n) for n in L.signature.names}
    tables["dneg"] = np.array(neg)
    A = FiniteAlgebra(sig, 4, {n: tables[n] for n in sig.names},
                      ["(0,0)", "(0,1)", "(1,0)", "(1,1)"], "DM4")
    check_demorgan(A)
    return A


def check_demorgan(A: FiniteAlgebra):
    """Involution plus both De Morgan laws, by exhaustive evaluation."""
    n = np.asarray(A.table("dneg"))
    j, m = A.table("join"), A.table("meet")
    if not np.array_equal(n[n], np.arange(A.size)):
        raise VerificationError("negation is not an involution")
    if not np.array_equal(n[j], m[n[:, None], n[None, :]]):
        raise VerificationError("negation does not turn joins into meets")
    if not np.array_equal(n[m], j[n[:, None], n[None, :]]):
        raise VerificationError("negation does not turn meets into joins")


def boolean2() -> FiniteAlgebra:
    L = two()
    tables = {n: L.table(n) for n in L.signature.names}
    tables["dneg"] = np.array([1, 0])
    return FiniteAlgebra(SIG_DM, 2, tables, ["0", "1"], "B2")


def kleene3() -> FiniteAlgebra:
    C = chain(3)
    tables = {n: C.table(n) for n in C.signature.names}
    tables["dneg"] = np.array([2, 1, 0])
    A = FiniteAlgebra(SIG_DM, 3, tables, ["0", "a", "1"], "K3")
    check_demorgan(A)
    return A


BOT, FALSE, TRUE, TOP = 0, 1, 2, 3


def _lub_table(leq):
    """Join table of a finite lattice given by its order matrix."""
    n = len(leq)
    out = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            ubs = [c for c in range(n) if leq[a][c] and leq[b][c]]
            least = [c for c in ubs if all(leq[c][d] for d in ubs)]
            out[a, b] = least[0]
    return out


def db4() -> FiniteAlgebra:
    """The four-element distributive bilattice from its two orders."""
    k = [[1, 1, 1, 1], [0, 1, 0, 1], [0, 0, 1, 1], [0, 0, 0, 1]]
    # truth order: false < bottom, top < true
    t = [[1, 0, 1, 0], [1, 1, 1, 1], [0, 0, 1, 0], [0, 0, 1, 1]]
    kt = [list(r) for r in zip(*k)]
    tt = [list(r) for r in zip(*t)]
    G = duplicator("gamma_db")
    tables = {"join_t": _lub_table(t), "meet_t": _lub_table(tt),
              "join_k": _lub_table(k), "meet_k": _lub_table(kt),
              "neg": np.array([BOT, TRUE, FALSE, TOP]),
              "false": FALSE, "true": TRUE, "bot_k": BOT, "top_k": TOP}
    return FiniteAlgebra(G.signature, 4, {n: tables[n] for n in G.signature.names},
                         ["bot", "f", "t", "top"], "DB4")


# -- alter egos ---------------------------------------------------------------


LEQ2 = [(0, 0), (0, 1), (1, 1)]


def priestley_ego(M=None) -> AlterEgo:
    M = M or two()
    return AlterEgo(M, FiniteStructure(2, {"leq": (2, LEQ2)}), "priestley")


def pointed_priestley_ego(M=None) -> AlterEgo:
    M = M or two(SIG_DU)
    return AlterEgo(M, FiniteStructure(2, {"leq": (2, LEQ2)}, {"bot": (0, 0), "top": (0, 1)}),
                    "pointed_priestley")


def bare_ego(M) -> AlterEgo:
    return AlterEgo(M, FiniteStructure(M.size), "bare")


def alternating_order4():
    """(a,b) <= (c,d) iff a <= c and b >= d, on 2x + y."""
    out = []
    for p in range(4):
        for q in range(4):
            a, b, c, d = p >> 1, p & 1, q >> 1, q & 1
            if a <= c and b >= d:
                out.append((p, q))
    return out


SWAP4 = [0, 2, 1, 3]


def demorgan_ego(M=None) -> AlterEgo:
    M = M or demorgan4()
    return AlterEgo(M, FiniteStructure(4, {"preceq": (2, alternating_order4())},
                                       {"g": (1, SWAP4)}), "demorgan")


def demorgan_u_ego(M=None) -> AlterEgo:
    M = M or demorgan4(SIG_DMU)
    return AlterEgo(M, FiniteStructure(4, {"preceq": (2, alternating_order4())},
                                       {"g": (1, SWAP4), "bot": (0, 1), "top": (0, 2)}),
                    "demorgan_u")


def db_knowledge_order():
    """Knowledge order of DB4 as tuples: componentwise on the pair encoding."""
    return [(p, q) for p in range(4) for q in range(4)
            if (p >> 1) <= (q >> 1) and (p & 1) <= (q & 1)]


def dm_to_db(p: int) -> int:
    """(x, y) in DM4 to (x, 1-y) in DB4."""
    return (p >> 1) * 2 + (1 - (p & 1))


# -- catalog ------------------------------------------------------------------


@dataclass
class CatalogEntry:
    key: str
    algebra: FiniteAlgebra
    ego: AlterEgo | None = None
    duplicator: str | None = None
    base: str | None = None
    notes: str = ""
    extra: dict = field(default_factory=dict)


def _unbounded_db4():
    return db4().reduct(duplicator("gamma_db_u").signature.names).with_name("DB4_u")


def _build(key):
    if key == "bounded_dl_2":
        return CatalogEntry(key, two(), priestley_ego(), notes="bounded distributive lattices")
    if key == "boolean_2":
        B = boolean2()
        return CatalogEntry(key, B, bare_ego(B), notes="Boolean algebras, ego without structure")
    if key == "demorgan_4":
        return CatalogEntry(key, demorgan4(), demorgan_ego(), notes="De Morgan algebras")
    if key == "kleene_3":
        K = kleene3()
        return CatalogEntry(key, K, brute_force_ego(K), notes="Kleene algebras, brute-force ego")
    if key == "db4":
        return CatalogEntry(key, db4(), transfer_ego(priestley_ego(), duplicator("gamma_db")),
                            "gamma_db", "bounded_dl_2", "distributive bilattices")
    if key == "dbc_16":
        G = duplicator("gamma_dbc")
        P = apply_P_Gamma(G, demorgan4(), name="DBC16")
        return CatalogEntry(key, P, transfer_ego(demorgan_ego(), G, PN=P), "gamma_dbc",
                            "demorgan_4", "distributive bilattices with conflation")
    if key == "dl_u_2":
        return CatalogEntry(key, two(SIG_DU), pointed_priestley_ego(),
                            notes="unbounded distributive lattices, pointed ego")
    if key == "db4_u":
        return CatalogEntry(key, _unbounded_db4(),
                            transfer_ego(pointed_priestley_ego(), duplicator("gamma_db_u")),
                            "gamma_db_u", "dl_u_2", "unbounded distributive bilattices")
    if key == "demorgan_u_4":
        return CatalogEntry(key, demorgan4(SIG_DMU), demorgan_u_ego(), notes="De Morgan lattices")
    if key in ("pdb_u", "pdb_u_gen1", "pdb_u_gen2"):
        G = duplicator("gamma_pdb")
        N, T = two(SIG_DU), trivial(SIG_DU)
        P, Q = {"pdb_u": (N, N), "pdb_u_gen1": (N, T), "pdb_u_gen2": (T, N)}[key]
        return CatalogEntry(key, odot(G, P, Q, name=key), None, "gamma_pdb", "dl_u_2",
                            "distributive pre-bilattices (two-factor product)")
    if key in ("trilattice_u", "trilattice_u_gen1", "trilattice_u_gen2"):
        G = duplicator("gamma_tl_t")
        N = _unbounded_db4()
        T = trivial(N.signature)
        P, Q = {"trilattice_u": (N, N), "trilattice_u_gen1": (N, T),
                "trilattice_u_gen2": (T, N)}[key]
        return CatalogEntry(key, odot(G, P, Q, name=key), None, "gamma_tl_t", "db4_u",
                            "distributive trilattices with t-involution")
    samples = do_samples()
    if key in samples:
        return CatalogEntry(key, samples[key], None, "gamma_dbminus",
                            notes="double Ockham sample")
    if key.startswith("dbminus_") and key[len("dbminus_"):] in samples:
        base = key[len("dbminus_"):]
        A = apply_P_Gamma(duplicator("gamma_dbminus"), samples[base], name=key)
        return CatalogEntry(key, A, None, "gamma_dbminus", base,
                            "distributive bilattice with generalised conflation")
    raise UnknownKey(f"unknown catalog key {key!r}")


def trivial(sig):
    from .algebra import trivial_algebra
    return trivial_algebra(sig)


BASE_KEYS = ("bounded_dl_2", "boolean_2", "demorgan_4", "kleene_3", "db4", "dbc_16",
             "dl_u_2", "db4_u", "demorgan_u_4", "pdb_u", "pdb_u_gen1", "pdb_u_gen2",
             "trilattice_u", "trilattice_u_gen1", "trilattice_u_gen2")
DO_KEYS = ("do2", "do4_bool", "do4_dm_bool", "do4_dm_dm", "do4_proj", "do4_chain",
           "do4_chain_mixed", "do8_bool", "do8_mixed")


def catalog_keys() -> list:
    return list(BASE_KEYS) + list(DO_KEYS) + ["dbminus_" + k for k in DO_KEYS]


@lru_cache(maxsize=None)
def catalog_get(key: str) -> CatalogEntry:
    return _build(key)


def check_db4_identity():
    """The duplicated two-element lattice is isomorphic to the catalog DB4."""
    return find_isomorphism(apply_P_Gamma(duplicator("gamma_db"), two()), db4())
