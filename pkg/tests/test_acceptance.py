"""Acceptance suite: the nine headline checks, each under its time limit.

Every criterion prints one line, ``ACCEPTANCE <n> PASS|FAIL (<secs> s / <limit> s) <detail>``,
in the terminal summary; ``python3 tests/test_acceptance.py`` prints the same
lines without pytest.
"""

import time

import numpy as np
import pytest

from natdual.algebra import (direct_product, find_isomorphism, free_algebra_oracle, is_isomorphic,
                             power, subalgebras, trivial_algebra)
from natdual.catalog import (DO_KEYS, SIG_DU, brute_force_ego, catalog_get, chain, db4, demorgan4,
                             duplicator, pointed_priestley_ego, priestley_ego, two)
from natdual.duality import (NO_COUNTEREXAMPLE, check_duality_at, eta_check, free_via_duality,
                             injectivity_probe, transfer_ego)
from natdual.duplication import apply_P_Gamma, check_duplicator, conflation_split, generator_pair, odot
from natdual.multisorted import ego_pair, ms_check_duality_at, sortwise_identification
from natdual.ockham import ockham_separating_hom

RESULTS = {}


def _conf_props(A):
    neg = np.asarray(A.table("neg"))
    conf = np.asarray(A.table("conf"))
    ident = np.arange(A.size)
    return np.array_equal(conf[neg], neg[conf]), np.array_equal(conf[conf], ident)


def c1():
    checks = [(two(), "gamma_db", "LMP"), (demorgan4(), "gamma_dbc", "LMP"),
              (two(SIG_DU), "gamma_pdb", "LMD"), (catalog_get("db4_u").algebra, "gamma_tl_t", "LMD")]
    checks += [(catalog_get(k).algebra, "gamma_dbminus", "LMP") for k in DO_KEYS]
    bad = [(G, N.name) for N, G, conds in checks
           if not check_duplicator(N, duplicator(G), tuple(conds)).all_hold]
    return not bad, f"{len(checks)} duplicator checks" + (f", failing {bad}" if bad else "")


def c2():
    return check_db4_iso(), "P(2) vs DB4"


def check_db4_iso():
    return find_isomorphism(apply_P_Gamma(duplicator("gamma_db"), two()), db4()) is not None


def c3():
    e = catalog_get("db4")
    subs = subalgebras(power(db4(), 2))
    dual_ok = all(check_duality_at(e.algebra, e.ego, A).bijective for A in subs)
    cube = subalgebras(power(two(), 3))
    eta_ok = all(eta_check(B, duplicator("gamma_db"), priestley_ego()).ok for B in cube)
    return dual_ok and eta_ok, f"{len(subs)} subalgebras of DB4^2, {len(cube)} of 2^3"


def c4():
    cases = [("D", two(), priestley_ego(), 1, 3), ("D", two(), priestley_ego(), 2, 6),
             ("D", two(), priestley_ego(), 3, 20),
             ("B", catalog_get("boolean_2").algebra, catalog_get("boolean_2").ego, 1, 4),
             ("DB", db4(), catalog_get("db4").ego, 1, 36)]
    sizes = []
    ok = True
    for name, M, ego, n, want in cases:
        F, _ = free_via_duality(M, ego, n)
        O, _ = free_algebra_oracle(M, n)
        ok &= F.size == O.size == want and is_isomorphic(F, O)
        sizes.append(f"F_{name}({n})={O.size}")
    return ok, " ".join(sizes)


def c5_recovery():
    """Recovery of B, and the commutation remark in both directions."""
    G = duplicator("gamma_dbminus")
    ok = True
    for k in DO_KEYS:
        B = catalog_get(k).algebra
        A = apply_P_Gamma(G, B)
        B2, _ = conflation_split(A)
        ok &= find_isomorphism(B, B2) is not None
        f, g = np.asarray(B.table("f")), np.asarray(B.table("g"))
        commutes, _ = _conf_props(A)
        ok &= commutes == np.array_equal(f, g)
    return ok


def c5_involution():
    """The literal involution remark: - involutive iff f and g are."""
    G = duplicator("gamma_dbminus")
    broken = []
    for k in DO_KEYS:
        B = catalog_get(k).algebra
        f, g = np.asarray(B.table("f")), np.asarray(B.table("g"))
        ident = np.arange(B.size)
        _, involutive = _conf_props(apply_P_Gamma(G, B))
        if involutive != (np.array_equal(f[f], ident) and np.array_equal(g[g], ident)):
            broken.append(k)
    return broken


def c5():
    ok = c5_recovery()
    broken = c5_involution()
    detail = "recovery and commutation remark hold on all samples"
    if broken:
        detail += (f"; involution remark fails on {broken}: -(-(a,b)) = (fg(a), gf(b)), so -"
                   " is involutive iff g = f^-1, not iff f and g are involutions")
    return ok and not broken, detail


def c6():
    n = 0
    for k in DO_KEYS:
        B = catalog_get(k).algebra
        for a in range(B.size):
            for b in range(B.size):
                if a != b:
                    s = ockham_separating_hom(B, a, b)
                    if s.phi.map[a] == s.phi.map[b]:
                        return False, f"{k}: {a}, {b} not separated"
                    n += 1
    return True, f"{n} pairs separated"


def c7():
    G, N = duplicator("gamma_pdb"), two(SIG_DU)
    M1, M2 = generator_pair(G, N)
    ego = ego_pair(G, N, pointed_priestley_ego())
    suite = subalgebras(direct_product([M1, M2])) + [odot(G, N, N)]
    ok = all(ms_check_duality_at(ego, A).bijective for A in suite)
    fac = [N, power(N, 2), trivial_algebra(SIG_DU)]
    ident = all(all(sortwise_identification(G, N, pointed_priestley_ego(), P, Q).values())
                for P in fac for Q in fac)
    return ok and ident, f"{len(suite)} algebras, sortwise identification on {len(fac) ** 2} pairs"


def c8():
    slim, brute = priestley_ego(), brute_force_ego(two())
    n_brute = len(brute.structure.relations)
    suite = subalgebras(power(two(), 3)) + [chain(3), chain(4), chain(5),
                                            free_algebra_oracle(two(), 2)[0],
                                            free_algebra_oracle(two(), 3)[0]]
    agree = all(check_duality_at(two(), slim, A).bijective == check_duality_at(two(), brute, A).bijective
                for A in suite)
    K = catalog_get("kleene_3")
    ksubs = subalgebras(power(K.algebra, 2))
    kleene = all(check_duality_at(K.algebra, K.ego, A).bijective for A in ksubs)
    return agree and n_brute == 4 and kleene, \
        f"|S(2^2)| = {n_brute}, {len(suite)} D algebras, {len(ksubs)} subalgebras of K^2"


def c9():
    a = injectivity_probe(priestley_ego(), 2, 4).verdict
    b = injectivity_probe(transfer_ego(priestley_ego(), duplicator("gamma_db")), 2, 4).verdict
    return a == b == NO_COUNTEREXAMPLE, f"base {a}, transfer {b}"


CRITERIA = {1: (c1, 10), 2: (c2, 1), 3: (c3, 60), 4: (c4, 120), 5: (c5, 60),
            6: (c6, 30), 7: (c7, 60), 8: (c8, 60), 9: (c9, 60)}


def run_criterion(n):
    fn, limit = CRITERIA[n]
    t = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t
    passed = bool(ok) and dt < limit
    RESULTS[n] = f"ACCEPTANCE {n} {'PASS' if passed else 'FAIL'} ({dt:.2f} s / {limit} s) {detail}"
    return passed, dt, limit, detail


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 7, 8, 9])
def test_criterion(n):
    passed, dt, limit, detail = run_criterion(n)
    assert dt < limit, f"took {dt:.1f} s, limit {limit} s"
    assert passed, detail


def test_criterion_5_recovery_and_commutation():
    fn, limit = CRITERIA[5]
    t = time.perf_counter()
    assert c5_recovery()
    assert time.perf_counter() - t < limit


@pytest.mark.xfail(strict=True, reason="the involution remark is false as stated: do4_dm_bool has "
                   "f, g involutive but fg != id, so - is not an involution")
def test_criterion_5():
    passed, _, _, detail = run_criterion(5)
    assert passed, detail


if __name__ == "__main__":
    for n in CRITERIA:
        run_criterion(n)
        print(RESULTS[n])
