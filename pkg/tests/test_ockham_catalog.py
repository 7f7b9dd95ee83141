from itertools import product

import numpy as np
import pytest

from natdual.algebra import is_homomorphism, is_isomorphic
from natdual.catalog import (DO_KEYS, SIG_DO, catalog_get, catalog_keys, check_db4_identity,
                             check_demorgan, db_knowledge_order, dm_to_db, dual_endomorphisms,
                             duplicator)
from natdual.catalog import UnknownKey
from natdual.duplication import apply_P_Gamma, check_duplicator
from natdual.ockham import (WordAlgebraQuotient, alternating_leq, format_word,
                            ockham_separating_hom, parse_word, word_map, word_term)
from natdual.terms import App, Var, term_table

WORDS = [w for n in range(5) for w in product((1, 2), repeat=n)]


# -- words ----------------------------------------------------------------------------


def test_parse_and_format():
    assert parse_word("") == parse_word("1") == ()
    assert parse_word("e1e2") == (1, 2)
    assert parse_word("e1·e2·e1") == (1, 2, 1)
    assert parse_word([2, 1]) == (2, 1)
    assert format_word((1, 2)) == "e1e2" and format_word(()) == "1"
    for bad in ("e3", "ee1", "x"):
        with pytest.raises(ValueError):
            parse_word(bad)


def test_word_terms():
    assert word_term("").body == Var(0)
    assert word_term("e1e2").body == App("f", (App("g", (Var(0),)),))
    assert word_term("e1e2", "u").body == App("u2", (App("u1", (Var(0),)),))
    with pytest.raises(ValueError):
        word_term("e1", "v")


@pytest.mark.parametrize("key", DO_KEYS)
def test_word_term_coherence(key):
    B = catalog_get(key).algebra
    f = np.asarray(B.table("f"))
    for w in WORDS:
        m = word_map(B, w)
        assert list(term_table(B, word_term(w))) == list(m)
        # appending e1 composes f on the right
        assert list(word_map(B, w + (1,))) == list(m[f])


def test_alternating_leq():
    a = {"1": 0, "e1": 1}
    assert alternating_leq(a, a)
    assert not alternating_leq({"1": 1}, {"1": 0})
    assert alternating_leq({"1": 0, "e1": 1}, {"1": 1, "e1": 0})
    assert not alternating_leq({"1": 0, "e1": 0}, {"1": 0, "e1": 1})
    with pytest.raises(ValueError):
        alternating_leq({"1": 0}, {"e1": 0})


# -- word quotient and separation ---------------------------------------------------


def test_quotient_of_two_negation():
    Q = WordAlgebraQuotient.build(catalog_get("do2").algebra)
    assert Q.size == 2
    assert sorted(Q.parity.tolist()) == [0, 1]
    assert Q.verify(6)


@pytest.mark.parametrize("key", DO_KEYS)
def test_quotient_parity_law(key):
    B = catalog_get(key).algebra
    Q = WordAlgebraQuotient.build(B)
    assert Q.verify(4)
    assert Q.size <= 2 * B.size ** B.size
    # every class is reached by its stored representative
    for k, w in enumerate(Q.words):
        assert Q.class_of(w) == k


@pytest.mark.parametrize("key", DO_KEYS)
def test_separation_all_pairs(key):
    B = catalog_get(key).algebra
    for a in range(B.size):
        for b in range(B.size):
            if a == b:
                continue
            s = ockham_separating_hom(B, a, b)
            assert s.x.map[a] != s.x.map[b]
            assert is_homomorphism(B, s.W, s.phi.map)
            assert s.phi.map[a] != s.phi.map[b]


def test_separation_needs_distinct_pair():
    with pytest.raises(ValueError):
        ockham_separating_hom(catalog_get("do2").algebra, 0, 0)


# -- catalog ------------------------------------------------------------------------------


def test_keys_resolve():
    for k in catalog_keys():
        e = catalog_get(k)
        assert e.key == k and e.algebra.size >= 1
    with pytest.raises(UnknownKey):
        catalog_get("nope")


def test_table_one_egos():
    e = catalog_get("bounded_dl_2").ego.structure
    assert e.tuple_set("leq") == {(0, 0), (0, 1), (1, 1)} and not e.operations
    assert not catalog_get("boolean_2").ego.structure.relations
    dm = catalog_get("demorgan_4").ego.structure
    assert set(dm.relations) == {"preceq"} and set(dm.operations) == {"g"}
    # g swaps the coordinates of (x, y) encoded 2x + y
    assert list(dm.operations["g"][1]) == [0, 2, 1, 3]
    assert catalog_get("db4").algebra.size == 4


def test_demorgan_order_is_knowledge_order():
    dm = catalog_get("demorgan_4").ego.structure.tuple_set("preceq")
    assert {(dm_to_db(p), dm_to_db(q)) for p, q in dm} == set(db_knowledge_order())


def test_db4_identity():
    assert check_db4_identity() is not None


DUPLICATED = [k for k in catalog_keys() if catalog_get(k).base and not k.endswith(("_gen1", "_gen2"))]


@pytest.mark.parametrize("key", DUPLICATED)
def test_duplicated_entries_match_their_base(key):
    e = catalog_get(key)
    P = apply_P_Gamma(duplicator(e.duplicator), catalog_get(e.base).algebra)
    assert is_isomorphic(P, e.algebra)


@pytest.mark.parametrize("key", ["db4", "dbc_16", "db4_u"])
def test_entry_duplicator_holds_over_base(key):
    e = catalog_get(key)
    r = check_duplicator(catalog_get(e.base).algebra, duplicator(e.duplicator))
    assert r.all_hold


@pytest.mark.parametrize("key", DO_KEYS)
def test_do_samples_are_double_ockham(key):
    B = catalog_get(key).algebra
    assert B.signature == SIG_DO
    lat = B.reduct(("join", "meet", "bot", "top"))
    ends = [tuple(h) for h in dual_endomorphisms(lat)]
    assert tuple(B.table("f")) in ends and tuple(B.table("g")) in ends


def test_demorgan_identities():
    check_demorgan(catalog_get("demorgan_4").algebra)
