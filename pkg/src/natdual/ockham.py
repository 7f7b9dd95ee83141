"""Word terms for double Ockham algebras and a finite separation construction.

Words are tuples over {1, 2} (letters e1, e2); the empty tuple is the
empty word. ``t_s`` composes f (for e1) and g (for e2) left to right, so
``t_{e1 e2} = f(g(x))`` and appending a letter composes on the right:
``t_{s e1} = t_s o f``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .algebra import FiniteAlgebra, Homomorphism, Signature, enumerate_homs, is_homomorphism
from .errors import VerificationError
from .terms import App, Term, Var

LETTER_OP = {1: "f", 2: "g"}
LETTER_U = {1: "u1", 2: "u2"}
U_SIGNATURE = Signature([("u1", 1), ("u2", 1)])


def parse_word(text) -> tuple:
    """``"e1e2"`` -> (1, 2); ``""`` or ``"1"`` is the empty word."""
    if isinstance(text, (tuple, list)):
        w = tuple(int(c) for c in text)
    else:
        text = str(text).replace(" ", "").replace("·", "").replace(".", "")
        if text in ("", "1"):
            return ()
        if not re.fullmatch(r"(e[12])+", text):
            raise ValueError(f"not a word over e1, e2: {text!r}")
        w = tuple(int(c) for c in text[1::2])
    if any(c not in (1, 2) for c in w):
        raise ValueError("letters must be 1 or 2")
    return w


def format_word(w) -> str:
    return "".join(f"e{c}" for c in w) or "1"


def word_term(s, kind: str = "t") -> Term:
    """``t_s`` over the double Ockham signature or ``u_s`` over {u1, u2}.

    ``u_s`` composes in the opposite order: ``u_{e1 e2} = u2(u1(x))``.
    """
    w = parse_word(s)
    body = Var(0)
    if kind == "t":
        for c in reversed(w):
            body = App(LETTER_OP[c], (body,))
    elif kind == "u":
        for c in w:
            body = App(LETTER_U[c], (body,))
    else:
        raise ValueError("kind must be 't' or 'u'")
    return Term(body, 1)


def word_map(B: FiniteAlgebra, s) -> np.ndarray:
    """``t_s^B`` as an array, composed letter by letter."""
    m = np.arange(B.size)
    for c in parse_word(s):
        m = m[np.asarray(B.table(LETTER_OP[c]))]
    return m


def alternating_leq(a: dict, b: dict) -> bool:
    """``a(s) <= b(s)`` at even-length words and ``>=`` at odd-length ones."""
    ka = {parse_word(k): v for k, v in a.items()}
    kb = {parse_word(k): v for k, v in b.items()}
    if set(ka) != set(kb):
        raise ValueError("maps must share a word domain")
    for w, v in ka.items():
        if len(w) % 2 == 0 and not v <= kb[w]:
            return False
        if len(w) % 2 == 1 and not v >= kb[w]:
            return False
    return True


@dataclass
class WordAlgebraQuotient:
    """Classes of words under ``s -> (t_s^B, |s| mod 2)``.

    ``maps[k]`` is the self-map of class k, ``parity[k]`` its length parity,
    ``trans[k, j]`` the class of ``s e_{j+1}`` and ``words[k]`` a shortest
    representative.
    """

    base: FiniteAlgebra
    maps: np.ndarray
    parity: np.ndarray
    trans: np.ndarray
    words: list

    @classmethod
    def build(cls, B: FiniteAlgebra, max_classes: int = 100_000):
        f = np.asarray(B.table("f"))
        g = np.asarray(B.table("g"))
        start = (np.arange(B.size), 0)
        keys = {start[0].tobytes() + bytes([0]): 0}
        maps, parity, words = [start[0]], [0], [()]
        trans = []
        k = 0
        while k < len(maps):
            row = []
            for j, op in enumerate((f, g)):
                m = maps[k][op]
                p = 1 - parity[k]
                key = m.tobytes() + bytes([p])
                if key not in keys:
                    keys[key] = len(maps)
                    maps.append(m)
                    parity.append(p)
                    words.append(words[k] + (j + 1,))
                    if len(maps) > max_classes:
                        raise VerificationError("too many word classes")
                row.append(keys[key])
            trans.append(row)
            k += 1
        return cls(B, np.stack(maps), np.array(parity), np.array(trans, dtype=np.int64), words)

    @property
    def size(self):
        return len(self.maps)

    def class_of(self, s) -> int:
        k = 0
        for c in parse_word(s):
            k = int(self.trans[k, c - 1])
        return k

    def verify(self, max_len: int = 4) -> bool:
        """Every word up to ``max_len`` lands in the class matching its data."""
        from itertools import product

        for n in range(max_len + 1):
            for w in product((1, 2), repeat=n):
                k = self.class_of(w)
                if not np.array_equal(self.maps[k], word_map(self.base, w)):
                    return False
                if self.parity[k] != n % 2:
                    return False
        return True


def _phi_rows(B, Q: WordAlgebraQuotient, x):
    """``phi(c)(k) = x(t_k(c))`` at even classes, ``1 - x(t_k(c))`` at odd ones."""
    x = np.asarray(x)
    vals = x[Q.maps]  # (classes, |B|)
    vals = np.where(Q.parity[:, None] == 1, 1 - vals, vals)
    return vals.T.astype(np.int64)


def _w_ops(Q: WordAlgebraQuotient):
    t1, t2 = Q.trans[:, 0], Q.trans[:, 1]
    return {"join": lambda a, b: np.maximum(a, b), "meet": lambda a, b: np.minimum(a, b),
            "f": lambda a: 1 - a[..., t1], "g": lambda a: 1 - a[..., t2]}


def word_algebra(Q: WordAlgebraQuotient, seeds: np.ndarray, signature) -> tuple:
    """Subalgebra of ``{0,1}^classes`` generated by ``seeds`` under the W operations."""
    ops = _w_ops(Q)
    K = Q.size
    rows = {}
    order = []

    def add(r):
        key = r.astype(np.int8).tobytes()
        if key not in rows:
            rows[key] = len(order)
            order.append(r.astype(np.int64))
            return True
        return False

    for r in seeds:
        add(r)
    add(np.zeros(K, dtype=np.int64))
    add(np.ones(K, dtype=np.int64))
    changed = True
    while changed:
        changed = False
        cur = np.stack(order)
        for name in ("f", "g"):
            for r in ops[name](cur):
                changed |= add(r)
        cur = np.stack(order)
        for name in ("join", "meet"):
            res = ops[name](cur[:, None, :], cur[None, :, :]).reshape(-1, K)
            for r in res:
                changed |= add(r)
    R = np.stack(order)
    idx = {r.astype(np.int8).tobytes(): i for i, r in enumerate(R)}

    def look(r):
        return idx[r.astype(np.int8).tobytes()]

    n = len(R)
    tables = {}
    for name in ("f", "g"):
        tables[name] = np.array([look(r) for r in ops[name](R)])
    for name in ("join", "meet"):
        res = ops[name](R[:, None, :], R[None, :, :]).reshape(-1, K)
        tables[name] = np.array([look(r) for r in res]).reshape(n, n)
    tables["bot"] = look(np.zeros(K, dtype=np.int64))
    tables["top"] = look(np.ones(K, dtype=np.int64))
    W = FiniteAlgebra(signature, n, {nm: tables[nm] for nm in signature.names}, name="W")
    return W, R, look


@dataclass
class OckhamSeparation:
    x: Homomorphism
    quotient: WordAlgebraQuotient
    W: FiniteAlgebra
    phi: Homomorphism
    rows: np.ndarray


def ockham_separating_hom(B: FiniteAlgebra, a: int, b: int) -> OckhamSeparation:
    """Separate a and b in B by a double Ockham homomorphism into a finite W."""
    if a == b:
        raise ValueError("need two distinct elements")
    from .catalog import SIG_D, two

    lat = B.reduct(SIG_D.names)
    x = next((h for h in enumerate_homs(lat, two()) if h.map[a] != h.map[b]), None)
    if x is None:
        raise VerificationError("no lattice homomorphism into 2 separates the pair")
    Q = WordAlgebraQuotient.build(B)
    if not Q.verify(2):
        raise VerificationError("word classes are not well defined")
    prow = _phi_rows(B, Q, x.map)
    W, R, look = word_algebra(Q, prow, B.signature)
    phi = [look(r) for r in prow]
    if not is_homomorphism(B, W, phi):
        raise VerificationError("phi is not a homomorphism")
    if phi[a] == phi[b]:
        raise VerificationError("phi does not separate the pair")
    return OckhamSeparation(x, Q, W, Homomorphism(B, W, tuple(phi)), R)
