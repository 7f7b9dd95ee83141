import numpy as np
import pytest

from natdual.catalog import demorgan4, two
from natdual.errors import SignatureError
from natdual.terms import (App, Term, Var, app, depth, eval_term, substitute, term_from_json,
                           term_table, term_to_json, variables)


def test_meet_on_two():
    assert eval_term(two(), Term(app("meet", Var(0), Var(1)), 2), (0, 1)) == 0


def test_dm4_negation_of_bottom():
    # elements of DM4 are pairs (a, b) encoded as 2a + b
    assert eval_term(demorgan4(), Term(app("dneg", Var(0)), 1), (0,)) == 3


def test_identity_term():
    for a in range(4):
        assert eval_term(demorgan4(), Term(Var(0), 1), (a,)) == a


def test_nullary_op_in_term():
    assert eval_term(two(), Term(App("top"), 0), ()) == 1


def test_errors():
    t = Term(app("meet", Var(0), Var(1)), 2)
    with pytest.raises(SignatureError):
        eval_term(two(), t, (0,))
    with pytest.raises(ValueError):
        eval_term(two(), t, (0, 2))
    with pytest.raises(SignatureError):
        eval_term(two(), Term(app("nope", Var(0)), 1), (0,))
    with pytest.raises(SignatureError):
        eval_term(two(), Term(app("meet", Var(0)), 1), (0,))
    with pytest.raises(SignatureError):
        Term(Var(2), 2)


def test_term_table_matches_pointwise_eval():
    A = demorgan4()
    t = Term(app("join", app("dneg", Var(0)), app("meet", Var(0), Var(1))), 2)
    tab = term_table(A, t)
    for a in range(4):
        for b in range(4):
            assert tab[a, b] == eval_term(A, t, (a, b))


def test_json_round_trip():
    t = Term(app("join", Var(1), app("dneg", Var(0))), 3)
    d = term_to_json(t)
    assert d["arity"] == 3
    assert term_from_json(d) == t


def test_helpers():
    n = app("join", Var(2), app("meet", Var(0), Var(2)))
    assert variables(n) == {0, 2}
    assert depth(n) == 2
    s = substitute(n, {0: Var(5), 2: Var(1)})
    assert variables(s) == {1, 5}
    assert str(n) == "join(x2, meet(x0, x2))"


def test_term_table_nullary_shape():
    assert np.asarray(term_table(two(), Term(App("bot"), 0))).shape == ()
