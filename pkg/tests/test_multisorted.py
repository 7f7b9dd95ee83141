import numpy as np
import pytest

from natdual.algebra import (direct_product, free_algebra_oracle, is_homomorphism, is_isomorphic,
                             power, subalgebras, trivial_algebra)
from natdual.catalog import SIG_DU, catalog_get, duplicator, pointed_priestley_ego, two
from natdual.duality import AlterEgo, FiniteStructure, dualize, edualize
from natdual.duplication import generator_pair, odot
from natdual.errors import SignatureError
from natdual.multisorted import (MultisortedEgo, MultisortedStructure, ego_pair, ms_check_duality_at,
                                 ms_dualize, ms_edualize, separating_pair_hom,
                                 sortwise_identification, uplus)

G = duplicator("gamma_pdb")
N = two(SIG_DU)
EGO_N = pointed_priestley_ego()
M1, M2 = generator_pair(G, N)
EGO = ego_pair(G, N, EGO_N)
T = trivial_algebra(SIG_DU)


def test_generator_pair():
    assert M1.size == M2.size == 2
    assert is_isomorphic(M1, catalog_get("pdb_u_gen1").algebra)
    assert is_isomorphic(M2, catalog_get("pdb_u_gen2").algebra)
    A, B = generator_pair(G, T)
    assert A.size == B.size == 1


def test_generator_pair_trilattice():
    Ms = generator_pair(duplicator("gamma_tl_t"), catalog_get("db4_u").algebra)
    assert [m.size for m in Ms] == [4, 4]


def test_uplus_sorts_and_type_check():
    assert EGO.structure.sizes == (2, 2)
    for e in EGO.egos:
        assert e.structure.tuple_set("leq") == EGO_N.structure.tuple_set("leq")
    other = AlterEgo(M2, FiniteStructure(2, {"eq": (2, [(0, 0), (1, 1)])}))
    with pytest.raises(SignatureError):
        uplus(EGO.egos[0], other)
    with pytest.raises(ValueError):
        MultisortedStructure([EGO_N.structure])


@pytest.mark.parametrize("A,sizes", [(M1, (3, 2)), (M2, (2, 3)), (odot(G, N, N), (3, 3))])
def test_sort_sizes(A, sizes):
    assert ms_dualize(EGO, A).structure.sizes == sizes


def test_trivial_algebra_dual():
    # without bounds in the signature both elements of 2 are idempotent images of T
    X = ms_dualize(EGO, trivial_algebra(G.signature)).structure
    assert X.sizes == (2, 2)
    assert ms_edualize(EGO, X).algebra.size == 1


def test_edual_of_empty_is_trivial():
    S = EGO_N.structure
    E0 = FiniteStructure(0, {"leq": (2, [])}, {k: (0, None) for k in S.operations})
    assert ms_edualize(EGO, MultisortedStructure([E0, E0])).algebra.size == 1


def test_subalgebras_of_generator_product():
    P = direct_product([M1, M2])
    subs = subalgebras(P)
    assert subs
    for B in subs:
        assert ms_check_duality_at(EGO, B).bijective


def test_pdb_u_dualised():
    for k in ("pdb_u", "pdb_u_gen1", "pdb_u_gen2"):
        A = catalog_get(k).algebra
        r = ms_check_duality_at(EGO, A)
        assert r.bijective and r.sizes["E(D(A))"] == A.size


def test_degenerate_ego_fails_surjectivity():
    S = EGO_N.structure
    full = FiniteStructure(2, {"leq": (2, [(0, 0), (0, 1), (1, 0), (1, 1)])}, dict(S.operations))
    deg = MultisortedEgo([AlterEgo(M1, full), AlterEgo(M2, S)])
    fails = [r for r in (ms_check_duality_at(deg, B) for B in subalgebras(power(M1, 2)))
             if not r.surjective]
    assert fails
    # the missing point is a morphism on the dual that no element evaluates to
    assert all(r.injective for r in fails)


@pytest.mark.parametrize("P", [N, power(N, 2), T], ids=["2", "2^2", "T"])
@pytest.mark.parametrize("Q", [N, power(N, 2), T], ids=["2", "2^2", "T"])
def test_sortwise_identification(P, Q):
    assert sortwise_identification(G, N, EGO_N, P, Q) == {"sort1": True, "sort2": True}


@pytest.mark.parametrize("P,Q", [(N, N), (N, power(N, 2)), (power(N, 2), N)])
def test_edual_of_disjoint_union_is_odot(P, Q):
    X = dualize(N, EGO_N, P).structure
    Y = dualize(N, EGO_N, Q).structure
    E = ms_edualize(EGO, MultisortedStructure([X, Y])).algebra
    EX = edualize(N, EGO_N, X).algebra
    EY = edualize(N, EGO_N, Y).algebra
    assert is_isomorphic(E, odot(G, EX, EY))


def test_double_dual_on_free_square():
    F, _ = free_algebra_oracle(N, 2)
    A = odot(G, F, N)
    r = ms_check_duality_at(EGO, A)
    assert r.bijective


def test_joint_separation_matches_injectivity():
    for A in subalgebras(direct_product([M1, M2])) + [catalog_get("pdb_u").algebra]:
        d = ms_dualize(EGO, A)
        cols = np.concatenate(d.homs, axis=0).T
        separated = len({c.tobytes() for c in cols}) == A.size
        assert ms_check_duality_at(EGO, A).injective == separated


def test_separating_pair_hom():
    A = odot(G, N, N)
    seen = set()
    for a in range(A.size):
        for b in range(A.size):
            if a == b:
                continue
            s = separating_pair_hom(G, N, A, a, b)
            cod = M1 if s.sort == 1 else M2
            assert is_homomorphism(A, cod, s.hom.map)
            assert s.hom.map[a] != s.hom.map[b]
            # first coordinates differ exactly when the map goes to N (.) T
            assert (s.sort == 1) == (a // 2 != b // 2)
            seen.add(s.sort)
    assert seen == {1, 2}
    with pytest.raises(ValueError):
        separating_pair_hom(G, N, A, 1, 1)
