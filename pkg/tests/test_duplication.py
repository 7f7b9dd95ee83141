import json

import numpy as np
import pytest

from natdual.algebra import (Homomorphism, enumerate_homs, find_isomorphism, is_homomorphism,
                             is_isomorphic, power, projection, subalgebras, trivial_algebra)
from natdual.catalog import (DO_KEYS, SIG_D, SIG_DU, catalog_get, chain, db4, demorgan4,
                             do_samples, duplicator, duplicator_path, two)
from natdual.duplication import (FAILS, HOLDS, Duplicator, TermPair, apply_P_Gamma,
                                 apply_P_Gamma_morphism, check_duplicator, conflation_split,
                                 decompose, decompose_pair, odot)
from natdual.errors import ConditionError, DecompositionError, SignatureError
from natdual.terms import Term, Var, app, term_table

SHIPPED = ["gamma_db", "gamma_dbc", "gamma_dbminus", "gamma_pdb", "gamma_db_u", "gamma_tl_t"]


@pytest.mark.parametrize("name", SHIPPED)
def test_shipped_files_round_trip(name):
    G = duplicator(name)
    with open(duplicator_path(name)) as fh:
        d = json.load(fh)
    assert Duplicator.from_json(d).to_json() == G.to_json()
    assert G.name == name


def test_duplicator_rejects_bad_pairs():
    t = Term(Var(0), 2)
    with pytest.raises(SignatureError):
        Duplicator(SIG_D, [TermPair("a", 1, t, t), TermPair("a", 1, t, t)])
    with pytest.raises(SignatureError):
        TermPair("a", 1, Term(Var(0), 1), t)
    with pytest.raises(SignatureError):
        Duplicator(SIG_D, [TermPair("a", 1, Term(app("nope", Var(0)), 2), t)])


# -- P_Gamma ---------------------------------------------------------------------


def test_db4_from_two():
    P = apply_P_Gamma(duplicator("gamma_db"), two())
    assert find_isomorphism(P, db4()) is not None
    jt = P.table("join_t")
    for a, b, c, d in np.ndindex(2, 2, 2, 2):
        assert jt[2 * a + b, 2 * c + d] == 2 * max(a, c) + min(b, d)
    assert P.table("neg")[1] == 2  # (0,1) -> (1,0)


def test_trivial_duplicates_to_trivial():
    P = apply_P_Gamma(duplicator("gamma_db"), trivial_algebra(SIG_D))
    assert P.size == 1


def test_dbc16_conflation():
    G = duplicator("gamma_dbc")
    M = demorgan4()
    P = apply_P_Gamma(G, M)
    assert P.size == 16
    neg = M.table("dneg")
    conf = P.table("conf")
    for a in range(4):
        for b in range(4):
            assert conf[4 * a + b] == 4 * neg[b] + neg[a]


def test_P_Gamma_on_morphisms():
    G = duplicator("gamma_db")
    D = two()
    ident = apply_P_Gamma_morphism(G, Homomorphism(D, D, (0, 1)))
    assert ident.map == (0, 1, 2, 3)
    D2 = power(D, 2)
    pi = apply_P_Gamma_morphism(G, projection(D2, [D, D], 0))
    assert is_homomorphism(pi.dom, pi.cod, pi.map)
    # functoriality on composable pairs
    D3 = power(D, 3)
    for h in enumerate_homs(D3, D2):
        for k in enumerate_homs(D2, D):
            lhs = apply_P_Gamma_morphism(G, k.compose(h))
            rhs = apply_P_Gamma_morphism(G, k).compose(apply_P_Gamma_morphism(G, h))
            assert lhs.map == rhs.map


def test_hom_counts_preserved():
    G = duplicator("gamma_db")
    algs = [two(), power(two(), 2), power(two(), 3)]
    dups = [apply_P_Gamma(G, B) for B in algs]
    for i, B1 in enumerate(algs):
        for j, B2 in enumerate(algs):
            assert len(enumerate_homs(B1, B2)) == len(enumerate_homs(dups[i], dups[j]))


# -- conditions ------------------------------------------------------------------


def _reverify(N, G, rep):
    """Independent check of reported witnesses by evaluating over all tuples."""
    PN = apply_P_Gamma(G, N)
    s = N.size
    p = np.arange(PN.size)
    for c, res in rep.results.items():
        if res.status != HOLDS:
            continue
        if c == "M":
            assert np.array_equal(term_table(PN, res.witnesses["v"]),
                                  (p[:, None] // s) * s + p[None, :] % s)
        if c == "P":
            assert np.array_equal(term_table(PN, res.witnesses["s"]), (p % s) * s + p // s)
        if c == "L":
            for key, t in res.witnesses.items():
                op, _, i = key.partition(":")
                n = N.signature.arity(op)
                tab = term_table(PN, t)
                for args in np.ndindex(*(s,) * n):
                    v = tab[tuple(x * s + x for x in args)] if n else int(tab)
                    want = N.table(op)[args] if n else N.table(op)
                    assert (v // s if i == "1" else v % s) == want


def test_gamma_db_over_two():
    rep = check_duplicator(two(), duplicator("gamma_db"))
    assert rep.all_hold
    _reverify(two(), duplicator("gamma_db"), rep)


def test_gamma_dbc_over_dm4():
    rep = check_duplicator(demorgan4(), duplicator("gamma_dbc"))
    assert rep.all_hold


@pytest.mark.parametrize("key", DO_KEYS)
def test_gamma_dbminus_over_do_samples(key):
    B = do_samples()[key]
    rep = check_duplicator(B, duplicator("gamma_dbminus"))
    assert rep.all_hold
    _reverify(B, duplicator("gamma_dbminus"), rep)


def test_gamma_pdb_conditions():
    G = duplicator("gamma_pdb")
    N = two(SIG_DU)
    rep = check_duplicator(N, G, ("L", "M", "D"))
    assert rep.all_hold
    # no M witness ships for this duplicator, so it comes from the search
    assert rep.results["M"].source["v"] == "search"
    _reverify(N, G, rep)
    p = check_duplicator(N, G, ("P",)).results["P"]
    assert p.status == FAILS
    assert p.clone_sizes["s"] == 1


def test_gamma_tl_t_conditions():
    rep = check_duplicator(catalog_get("db4_u").algebra, duplicator("gamma_tl_t"), ("L", "M", "D"))
    assert rep.all_hold


def test_negation_breaks_D():
    r = check_duplicator(two(), duplicator("gamma_db"), ("D",)).results["D"]
    assert r.status == FAILS
    assert "neg" in r.counterexample


def test_rejected_witness_falls_back_to_search():
    rep = check_duplicator(two(), duplicator("gamma_db"), ("P",),
                           witness={"P": Term(Var(0), 1)})
    r = rep.results["P"]
    assert r.status == HOLDS and r.source["s"] == "search"
    assert any("rejected" in n for n in r.notes)


def test_tiny_budget_gives_unknown():
    rep = check_duplicator(catalog_get("db4_u").algebra, duplicator("gamma_tl_t"), ("M",),
                           witness=None, max_rows=5)
    # the shipped witness is verified without searching
    assert rep.results["M"].status == HOLDS
    G = duplicator("gamma_tl_t")
    bare = Duplicator(G.base_signature, G.pairs, {}, "bare")
    rep = check_duplicator(catalog_get("db4_u").algebra, bare, ("M",), max_rows=5)
    assert rep.results["M"].status == "UNKNOWN"


# -- two-factor products -------------------------------------------------------------


def test_pdb_generators_orders():
    G = duplicator("gamma_pdb")
    N, T = two(SIG_DU), trivial_algebra(SIG_DU)
    M1, M2 = odot(G, N, T), odot(G, T, N)
    assert M1.size == M2.size == 2
    assert np.array_equal(M1.table("join_t"), M1.table("join_k"))
    assert np.array_equal(M2.table("join_t"), M2.table("meet_k"))
    assert is_isomorphic(odot(G, N, N), apply_P_Gamma(G, N))


def test_odot_needs_D():
    with pytest.raises(ConditionError):
        odot(duplicator("gamma_db"), two(), two())


# -- decomposition -------------------------------------------------------------------


def test_decompose_db4():
    B, iso = decompose(duplicator("gamma_db"), two(), db4())
    assert B.size == 2 and is_isomorphic(B, two())
    assert is_homomorphism(iso.dom, iso.cod, iso.map)


@pytest.mark.parametrize("B", [power(two(), 2), chain(3), power(two(), 3)] +
                         subalgebras(power(two(), 3))[:6])
def test_decompose_round_trip(B):
    G = duplicator("gamma_db")
    A = apply_P_Gamma(G, B)
    B2, iso = decompose(G, two(), A)
    assert is_isomorphic(B, B2)
    # rectangular image: every (x_a, y_b) combination occurs
    assert sorted(iso.map) == list(range(B2.size ** 2))


def test_decompose_rejects_three_elements(data_dir):
    from natdual.io import resolve_algebra

    A = resolve_algebra(f"{data_dir}/three_element.json")
    with pytest.raises(DecompositionError) as e:
        decompose(duplicator("gamma_db"), two(), A)
    assert e.value.code == "NOT_SEPARATED"
    assert len(e.value.witness) == 2


def test_decompose_pair():
    G = duplicator("gamma_pdb")
    N, T = two(SIG_DU), trivial_algebra(SIG_DU)
    P, Q, _ = decompose_pair(G, N, odot(G, N, T))
    assert (P.size, Q.size) == (2, 1)
    P, Q, iso = decompose_pair(G, N, odot(G, N, power(N, 2)))
    assert (P.size, Q.size) == (2, 4)
    assert is_homomorphism(iso.dom, iso.cod, iso.map)


def test_decompose_pair_rejects_non_member():
    # a 3-chain whose truth and knowledge orders agree but with a two-point
    # knowledge collapse; every hom into the generators identifies 0 and 1
    from natdual.algebra import FiniteAlgebra

    G = duplicator("gamma_pdb")
    mx = [[max(a, b) for b in range(3)] for a in range(3)]
    mn = [[min(a, b) for b in range(3)] for a in range(3)]
    flat = [[0, 0, 2], [0, 0, 2], [2, 2, 2]]
    A = FiniteAlgebra(G.signature, 3, {"join_t": mx, "meet_t": mn, "join_k": flat, "meet_k": flat})
    with pytest.raises(DecompositionError) as e:
        decompose_pair(G, two(SIG_DU), A)
    assert e.value.code in ("NOT_SEPARATED", "NOT_RECTANGULAR")


# -- conflation ---------------------------------------------------------------------------


@pytest.mark.parametrize("key", DO_KEYS)
def test_conflation_split_recovers(key):
    B = do_samples()[key]
    A = apply_P_Gamma(duplicator("gamma_dbminus"), B)
    B2, iso = conflation_split(A)
    assert is_isomorphic(B, B2)
    assert is_homomorphism(A, iso.cod, iso.map)


def _conf_props(A):
    conf, neg = np.asarray(A.table("conf")), np.asarray(A.table("neg"))
    return bool(np.array_equal(conf[neg], neg[conf])), bool(np.array_equal(conf[conf], np.arange(A.size)))


@pytest.mark.parametrize("key", DO_KEYS)
def test_conflation_iff_remarks(key):
    B = do_samples()[key]
    A = apply_P_Gamma(duplicator("gamma_dbminus"), B)
    B2, _ = conflation_split(A)
    f, g = np.asarray(B2.table("f")), np.asarray(B2.table("g"))
    commutes, involutive = _conf_props(A)
    assert commutes == bool(np.array_equal(f, g))
    ident = np.arange(B2.size)
    # -(-(a, b)) = (f(g(a)), g(f(b))), so - is an involution exactly when
    # f and g are mutually inverse
    assert involutive == (np.array_equal(f[g], ident) and np.array_equal(g[f], ident))
    if np.array_equal(f, g):
        assert involutive == np.array_equal(f[f], ident)


def test_involutive_f_and_g_need_not_give_involutive_conflation():
    # f = De Morgan negation, g = Boolean complement on 2^2: both involutions
    B = do_samples()["do4_dm_bool"]
    f, g = np.asarray(B.table("f")), np.asarray(B.table("g"))
    ident = np.arange(4)
    assert np.array_equal(f[f], ident) and np.array_equal(g[g], ident)
    A = apply_P_Gamma(duplicator("gamma_dbminus"), B)
    assert _conf_props(A)[1] is False


def test_conflation_split_on_boolean_two():
    B = do_samples()["do2"]
    B2, _ = conflation_split(apply_P_Gamma(duplicator("gamma_dbminus"), B))
    assert list(B2.table("f")) == list(B2.table("g")) == [1, 0]


def test_conflation_split_dbc_gives_equal_involutions():
    # a DBC algebra read in the DB- signature (f = g = dneg)
    G = duplicator("gamma_dbminus")
    B = do_samples()["do4_dm_dm"]
    B2, _ = conflation_split(apply_P_Gamma(G, B))
    f = np.asarray(B2.table("f"))
    assert np.array_equal(f, B2.table("g")) and np.array_equal(f[f], np.arange(4))


def test_conflation_split_mixed_pair():
    B = do_samples()["do4_dm_bool"]
    A = apply_P_Gamma(duplicator("gamma_dbminus"), B)
    B2, _ = conflation_split(A)
    assert not np.array_equal(B2.table("f"), B2.table("g"))
    assert _conf_props(A)[0] is False


def test_conflation_split_rejects_wrong_signature():
    with pytest.raises(SignatureError):
        conflation_split(db4())
