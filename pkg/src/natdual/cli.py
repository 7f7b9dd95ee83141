"""Command-line front end.

Every invocation produces one Report. Text goes to stdout by default,
``--json`` switches to the canonical JSON form. Exit codes: 0 all checks
passed, 1 a check failed (a witness is included), 2 usage or format
error, 3 a resource cap was hit.

Algebra arguments are JSON files or catalog keys. ``KEY-subpowers`` runs
over every subalgebra of the square of a catalog algebra and
``KEY-subpowersN`` over those of its N-th power. Ego arguments are
catalog keys, structure files, or one of ``catalog`` (the ego the catalog
pairs with the generator), ``transferred`` (N's ego carried over by the
entry's duplicator), ``brute`` and ``empty``.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import kernels
from .algebra import (DEFAULT_MAX_HOMS, DEFAULT_MAX_NODES, direct_product, enumerate_homs,
                      enumerate_subuniverses, find_isomorphism, free_algebra_oracle, is_isomorphic,
                      power, subalgebra_generate, subalgebras)
from .errors import (CompatibilityError, ConditionError, DecompositionError, NatDualError,
                     ResourceLimitError, SignatureError, VerificationError)
from .io import (FormatError, algebra_to_json, digest, load_json, resolve_algebra,
                 resolve_duplicator, resolve_ego, structure_from_json, to_plain, validate)
from .report import (EXIT_CAP, EXIT_OK, EXIT_USAGE, Report, render_json,
                     render_text)

DUP_BASE = {"gamma_db": "bounded_dl_2", "gamma_dbc": "demorgan_4", "gamma_pdb": "dl_u_2",
            "gamma_db_u": "dl_u_2", "gamma_tl_t": "db4_u", "gamma_dbminus": None}
SUITE = re.compile(r"^(?P<key>[A-Za-z0-9_]+)-subpowers(?P<n>\d*)$")


class UsageError(NatDualError):
    pass


# -- argument resolution ------------------------------------------------------


def _ref_id(ref):
    if os.path.exists(ref):
        return f"sha256:{digest(ref)}"
    if SUITE.match(ref):
        return f"suite:{ref}"
    if ref.endswith(".json"):
        return f"shipped:{ref}"
    return f"catalog:{ref}"


def _targets(ref):
    """``[(label, algebra)]`` for a file, catalog key or subpower suite."""
    m = SUITE.match(ref) if not os.path.exists(ref) else None
    if m:
        n = int(m["n"] or 2)
        M = resolve_algebra(m["key"])
        return [(f"{ref}[{i}]", B) for i, B in enumerate(subalgebras(power(M, n)))]
    return [(ref, resolve_algebra(ref))]


def _suite_key(ref):
    m = SUITE.match(ref) if not os.path.exists(ref) else None
    return m["key"] if m else ref


def _generator(args, fallback_refs=()):
    """The generator M: ``--over``, else the catalog key behind a target."""
    from .catalog import UnknownKey, catalog_get

    if getattr(args, "over", None):
        return args.over, resolve_algebra(args.over)
    for ref in fallback_refs:
        key = _suite_key(ref)
        try:
            return key, catalog_get(key).algebra
        except UnknownKey:
            continue
    raise UsageError("cannot tell the generator; pass --over")


def _ego(args, key, M):
    """Resolve ``--ego`` against the generator (catalog key ``key``, algebra M)."""
    from .catalog import UnknownKey, bare_ego, catalog_get, duplicator
    from .duality import brute_force_ego, transfer_ego

    ref = getattr(args, "ego", None) or "catalog"
    if ref == "brute":
        return brute_force_ego(M)
    if ref == "empty":
        return bare_ego(M)
    if ref in ("catalog", "transferred"):
        try:
            e = catalog_get(key)
        except UnknownKey:
            raise UsageError(f"--ego {ref} needs a catalog generator, got {key!r}") from None
        if ref == "transferred":
            if not (e.duplicator and e.base):
                raise UsageError(f"catalog entry {key!r} is not a duplicate")
            base = catalog_get(e.base)
            return transfer_ego(base.ego, duplicator(e.duplicator), PN=M)
        if e.ego is None:
            raise UsageError(f"catalog entry {key!r} has no alter ego")
        return e.ego
    return resolve_ego(ref, over=M)


def _base_for(G, args):
    if getattr(args, "base", None):
        return args.base, resolve_algebra(args.base)
    key = DUP_BASE.get(G.name or "")
    if key is None:
        raise UsageError("cannot tell the base algebra for this duplicator; pass --base")
    return key, resolve_algebra(key)


def _emit(r, args, payload, name="output"):
    """Attach an emitted object: written to ``--out`` or kept in the report."""
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            json.dump(to_plain(payload), fh, indent=2, sort_keys=True)
            fh.write("\n")
        r.data[name] = {"written": out}
    else:
        r.data[name] = payload


# -- verbs ---------------------------------------------------------------------


def alg_validate(args, r):
    r.inputs["file"] = _ref_id(args.file)
    r.verdicts.update(validate(args.file))
    r.verdicts["valid"] = True


def alg_hom(args, r):
    r.inputs.update(A=_ref_id(args.A), B=_ref_id(args.B))
    A, B = resolve_algebra(args.A), resolve_algebra(args.B)
    homs = enumerate_homs(A, B, limit=args.max_homs)
    r.verdicts["count"] = len(homs)
    if args.list:
        r.data["homs"] = [list(h.map) for h in homs]


def alg_product(args, r):
    for i, a in enumerate(args.algebras):
        r.inputs[f"factor{i}"] = _ref_id(a)
    P = direct_product([resolve_algebra(a) for a in args.algebras])
    r.verdicts["size"] = P.size
    _emit(r, args, algebra_to_json(P), "algebra")


def alg_iso(args, r):
    r.inputs.update(A=_ref_id(args.A), B=_ref_id(args.B))
    h = find_isomorphism(resolve_algebra(args.A), resolve_algebra(args.B))
    r.verdicts["isomorphic"] = h is not None
    if h is None:
        r.fail()
    else:
        r.witnesses["isomorphism"] = list(h.map)


def alg_sub(args, r):
    r.inputs["A"] = _ref_id(args.A)
    A = resolve_algebra(args.A)
    if args.gen is not None:
        seed = [int(x) for x in args.gen.split(",") if x != ""]
        if any(not 0 <= x < A.size for x in seed):
            raise UsageError(f"generators must lie in [0, {A.size})")
        S = sorted(subalgebra_generate(A, seed))
        r.verdicts["size"] = len(S)
        r.data["subuniverse"] = S
        return
    subs = enumerate_subuniverses(A)
    r.verdicts["count"] = len(subs)
    r.data["subuniverses"] = [sorted(s) for s in subs]


def dup_check(args, r):
    from .duplication import HOLDS, UNKNOWN, check_duplicator

    r.inputs.update(duplicator=_ref_id(args.dup), algebra=_ref_id(args.algebra))
    G = resolve_duplicator(args.dup)
    N = resolve_algebra(args.algebra)
    conds = tuple(c for c in re.split(r"[,\s]*", args.conditions) if c)
    rep = check_duplicator(N, G, conds, max_rows=args.max_rows)
    for c, res in rep.results.items():
        r.verdicts[c] = res.status
        j = res.to_json()
        if res.counterexample:
            r.witnesses[c] = j["counterexample"]
        elif res.witnesses:
            r.witnesses[c] = j["witnesses"]
        if res.status == UNKNOWN:
            r.fail(EXIT_CAP)
        elif res.status != HOLDS:
            r.fail()
    r.resources["max_rows"] = args.max_rows


def dup_apply(args, r):
    from .duplication import apply_P_Gamma

    r.inputs.update(duplicator=_ref_id(args.dup), algebra=_ref_id(args.algebra))
    P = apply_P_Gamma(resolve_duplicator(args.dup), resolve_algebra(args.algebra))
    r.verdicts["size"] = P.size
    _emit(r, args, algebra_to_json(P), "algebra")


def dup_odot(args, r):
    from .duplication import odot

    r.inputs.update(duplicator=_ref_id(args.dup), P=_ref_id(args.P), Q=_ref_id(args.Q))
    A = odot(resolve_duplicator(args.dup), resolve_algebra(args.P), resolve_algebra(args.Q))
    r.verdicts["size"] = A.size
    _emit(r, args, algebra_to_json(A), "algebra")


def _decomposition_failure(r, e):
    r.verdicts["decomposable"] = False
    r.verdicts["code"] = e.code
    r.witnesses["elements"] = list(e.witness) if e.witness is not None else None
    r.witnesses["message"] = str(e)
    r.fail()


def dup_split(args, r):
    from .duplication import decompose, decompose_pair

    r.inputs.update(duplicator=_ref_id(args.dup), algebra=_ref_id(args.algebra))
    G = resolve_duplicator(args.dup)
    bkey, N = _base_for(G, args)
    r.inputs["base"] = _ref_id(bkey)
    A = resolve_algebra(args.algebra)
    try:
        if args.pair:
            P, Q, iso = decompose_pair(G, N, A, max_homs=args.max_homs)
            r.verdicts.update(decomposable=True, sizes=[P.size, Q.size])
            r.data["factors"] = [algebra_to_json(P), algebra_to_json(Q)]
        else:
            B, iso = decompose(G, N, A, max_homs=args.max_homs)
            r.verdicts.update(decomposable=True, size=B.size)
            r.data["factor"] = algebra_to_json(B)
        r.witnesses["isomorphism"] = list(iso.map)
    except DecompositionError as e:
        _decomposition_failure(r, e)


def dup_conflation_split(args, r):
    from .duplication import conflation_split

    r.inputs["algebra"] = _ref_id(args.algebra)
    try:
        B, iso = conflation_split(resolve_algebra(args.algebra))
    except DecompositionError as e:
        _decomposition_failure(r, e)
        return
    r.verdicts.update(decomposable=True, size=B.size)
    r.witnesses["isomorphism"] = list(iso.map)
    r.data["factor"] = algebra_to_json(B)


def dual_ego_brute(args, r):
    from .duality import brute_force_ego

    r.inputs["algebra"] = _ref_id(args.algebra)
    ego = brute_force_ego(resolve_algebra(args.algebra))
    r.verdicts["relations"] = len(ego.structure.relations)
    over = args.algebra if not os.path.exists(args.algebra) else None
    _emit(r, args, ego.structure.to_json(over=over), "ego")


def dual_ego_transfer(args, r):
    from .duality import transfer_ego

    r.inputs.update(ego=_ref_id(args.ego_ref), duplicator=_ref_id(args.dup))
    G = resolve_duplicator(args.dup)
    egoN = resolve_ego(args.ego_ref)
    T = transfer_ego(egoN, G, check=args.check)
    r.verdicts.update(compatible=True, size=T.structure.size)
    _emit(r, args, T.structure.to_json(), "ego")


def dual_D(args, r):
    from .duality import dualize

    r.inputs["algebra"] = _ref_id(args.algebra)
    key, M = _generator(args, [args.algebra])
    ego = _ego(args, key, M)
    d = dualize(M, ego, resolve_algebra(args.algebra))
    r.verdicts["size"] = d.structure.size
    r.data["homs"] = d.homs.tolist()
    _emit(r, args, d.structure.to_json(), "structure")


def dual_E(args, r):
    from .duality import edualize

    r.inputs["structure"] = _ref_id(args.structure)
    key, M = _generator(args)
    ego = _ego(args, key, M)
    X = structure_from_json(load_json(args.structure))
    e = edualize(M, ego, X)
    r.verdicts["size"] = e.algebra.size
    r.data["morphisms"] = e.morphisms.tolist()
    _emit(r, args, algebra_to_json(e.algebra), "algebra")


def dual_check(args, r):
    from .duality import check_duality_at

    key, M = _generator(args, args.targets)
    ego = _ego(args, key, M)
    r.inputs["generator"] = _ref_id(key)
    for ref in args.targets:
        r.inputs[ref] = _ref_id(ref)
        for label, A in _targets(ref):
            rep = check_duality_at(M, ego, A)
            r.verdicts[label] = "BIJECTIVE" if rep.bijective else "NOT_BIJECTIVE"
            if not rep.bijective:
                r.witnesses[label] = {"collision": rep.collision, "missing": rep.missing}
                r.fail()


def dual_free(args, r):
    from .duality import free_via_duality

    key, M = _generator(args, [args.over] if args.over else [])
    ego = _ego(args, key, M)
    r.inputs["generator"] = _ref_id(key)
    F1, _ = free_via_duality(M, ego, args.n)
    F2, _ = free_algebra_oracle(M, args.n)
    iso = F1.size == F2.size and is_isomorphic(F1, F2)
    r.verdicts.update(size_dual=F1.size, size_oracle=F2.size, isomorphic=iso)
    if not iso:
        r.fail()


def dual_probe(args, r):
    from .duality import NO_COUNTEREXAMPLE, injectivity_probe

    key, M = _generator(args, [args.over] if args.over else [])
    r.inputs["generator"] = _ref_id(key)
    rep = injectivity_probe(_ego(args, key, M), args.max_power, args.max_sub)
    r.verdicts.update(verdict=rep.verdict, checked=rep.checked)
    r.resources.update(rep.bounds)
    if rep.verdict != NO_COUNTEREXAMPLE:
        r.witnesses["counterexample"] = rep.counterexample
        r.fail()


def dual_eta(args, r):
    from .duality import eta_check

    G = resolve_duplicator(args.dup)
    bkey, N = _base_for(G, args)
    r.inputs.update(duplicator=_ref_id(args.dup), base=_ref_id(bkey))
    egoN = _ego(args, bkey, N)
    for ref in args.targets:
        r.inputs[ref] = _ref_id(ref)
        for label, B in _targets(ref):
            rep = eta_check(B, G, egoN)
            r.verdicts[label] = "ISO" if rep.ok else "FAILED"
            if not rep.ok:
                r.witnesses[label] = rep.failure
                r.fail()


def _ms_setup(args):
    from .multisorted import ego_pair

    G = resolve_duplicator(args.dup)
    bkey, N = _base_for(G, args)
    egoN = _ego(args, bkey, N)
    return G, bkey, N, egoN, ego_pair(G, N, egoN)


def ms_gens(args, r):
    r.inputs["duplicator"] = _ref_id(args.dup)
    G, bkey, N, egoN, ego = _ms_setup(args)
    r.inputs["base"] = _ref_id(bkey)
    M1, M2 = ego.algebras
    r.verdicts["sizes"] = [M1.size, M2.size]
    r.data["generators"] = [algebra_to_json(M1), algebra_to_json(M2)]


def ms_D(args, r):
    from .multisorted import ms_dualize

    r.inputs.update(duplicator=_ref_id(args.dup), algebra=_ref_id(args.algebra))
    *_, ego = _ms_setup(args)
    d = ms_dualize(ego, resolve_algebra(args.algebra))
    r.verdicts["sizes"] = list(d.structure.sizes)
    _emit(r, args, d.structure.to_json(), "structure")


def ms_E(args, r):
    from .multisorted import MultisortedStructure, ms_edualize

    r.inputs.update(duplicator=_ref_id(args.dup), structure=_ref_id(args.structure))
    *_, ego = _ms_setup(args)
    d = load_json(args.structure)
    if "sorts" not in d or not isinstance(d["sorts"], list) or len(d["sorts"]) != 2:
        raise FormatError("sorts", "expected a list of two structures")
    X = MultisortedStructure([structure_from_json(s) for s in d["sorts"]])
    e = ms_edualize(ego, X)
    r.verdicts["size"] = e.algebra.size
    _emit(r, args, algebra_to_json(e.algebra), "algebra")


def ms_check(args, r):
    from .multisorted import ms_check_duality_at

    r.inputs["duplicator"] = _ref_id(args.dup)
    *_, ego = _ms_setup(args)
    for ref in args.targets:
        r.inputs[ref] = _ref_id(ref)
        for label, A in _targets(ref):
            rep = ms_check_duality_at(ego, A)
            r.verdicts[label] = "BIJECTIVE" if rep.bijective else "NOT_BIJECTIVE"
            if not rep.bijective:
                r.witnesses[label] = {"collision": rep.collision, "missing": rep.missing}
                r.fail()


def catalog_list(args, r):
    from .catalog import catalog_get, catalog_keys

    for k in catalog_keys():
        e = catalog_get(k)
        r.verdicts[k] = {"size": e.algebra.size, "ego": e.ego is not None,
                         "duplicator": e.duplicator, "notes": e.notes}


def catalog_get_verb(args, r):
    from .catalog import catalog_get

    e = catalog_get(args.key)
    r.inputs["key"] = _ref_id(args.key)
    r.verdicts.update(size=e.algebra.size, duplicator=e.duplicator, base=e.base, notes=e.notes)
    if args.emit_json:
        r.data["algebra"] = algebra_to_json(e.algebra)
        if e.ego is not None:
            r.data["ego"] = e.ego.structure.to_json(over=args.key)


def ockham_term(args, r):
    from .ockham import format_word, parse_word, word_term
    from .terms import term_to_json

    text = args.word_opt if args.word_opt is not None else args.word
    if text is None:
        raise UsageError("give a word, e.g. e1e2")
    w = parse_word(text)
    t = word_term(w, args.kind)
    r.verdicts.update(word=format_word(w), term=str(t))
    r.data["term"] = term_to_json(t)


def ockham_separate(args, r):
    from .ockham import ockham_separating_hom

    r.inputs["algebra"] = _ref_id(args.algebra)
    B = resolve_algebra(args.algebra)
    if args.a is not None and args.b is not None:
        pairs = [(args.a, args.b)]
    else:
        pairs = [(a, b) for a in range(B.size) for b in range(a + 1, B.size)]
    for a, b in pairs:
        if not (0 <= a < B.size and 0 <= b < B.size) or a == b:
            raise UsageError("need two distinct elements of the algebra")
        try:
            s = ockham_separating_hom(B, a, b)
            r.verdicts[f"{a},{b}"] = "SEPARATED"
            r.witnesses[f"{a},{b}"] = {"phi": list(s.phi.map), "W_size": s.W.size}
        except VerificationError as e:
            r.verdicts[f"{a},{b}"] = "FAILED"
            r.witnesses[f"{a},{b}"] = str(e)
            r.fail()


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the JSON report")
    common.add_argument("--max-homs", type=int, default=DEFAULT_MAX_HOMS,
                        help=f"cap on maps found per search (default {DEFAULT_MAX_HOMS})")
    common.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES,
                        help=f"cap on nodes visited per search (default {DEFAULT_MAX_NODES})")

    p = argparse.ArgumentParser(prog="natdual", description=__doc__.split("\n")[0])
    groups = p.add_subparsers(dest="group", required=True)

    def verb(group, name, fn, **kw):
        sp = group.add_parser(name, parents=[common], **kw)
        sp.set_defaults(fn=fn)
        return sp

    def gen_opts(sp, ego=True):
        sp.add_argument("--over", help="generator algebra (file or catalog key)")
        if ego:
            sp.add_argument("--ego", help="alter ego: catalog|transferred|brute|empty|KEY|FILE")

    def base_opt(sp):
        sp.add_argument("--base", help="algebra the duplicator acts on (file or catalog key)")

    g = groups.add_parser("alg").add_subparsers(dest="verb", required=True)
    sp = verb(g, "validate", alg_validate)
    sp.add_argument("file")
    sp = verb(g, "hom", alg_hom)
    sp.add_argument("A")
    sp.add_argument("B")
    sp.add_argument("--list", action="store_true")
    sp = verb(g, "product", alg_product)
    sp.add_argument("algebras", nargs="+")
    sp.add_argument("--out")
    sp = verb(g, "iso", alg_iso)
    sp.add_argument("A")
    sp.add_argument("B")
    sp = verb(g, "sub", alg_sub)
    sp.add_argument("A")
    sp.add_argument("--gen", help="comma-separated generators")

    g = groups.add_parser("dup").add_subparsers(dest="verb", required=True)
    sp = verb(g, "check", dup_check)
    sp.add_argument("dup")
    sp.add_argument("algebra")
    sp.add_argument("--conditions", default="L,M,P")
    sp.add_argument("--max-rows", type=int, default=20_000)
    for name, fn in (("apply", dup_apply),):
        sp = verb(g, name, fn)
        sp.add_argument("dup")
        sp.add_argument("algebra")
        sp.add_argument("--out")
    sp = verb(g, "odot", dup_odot)
    sp.add_argument("dup")
    sp.add_argument("P")
    sp.add_argument("Q")
    sp.add_argument("--out")
    sp = verb(g, "split", dup_split)
    sp.add_argument("dup")
    sp.add_argument("algebra")
    sp.add_argument("--pair", action="store_true", help="split into two independent factors")
    base_opt(sp)
    sp = verb(g, "conflation-split", dup_conflation_split)
    sp.add_argument("algebra")

    g = groups.add_parser("dual").add_subparsers(dest="verb", required=True)
    sp = verb(g, "ego-brute", dual_ego_brute)
    sp.add_argument("algebra")
    sp.add_argument("--out")
    sp = verb(g, "ego-transfer", dual_ego_transfer)
    sp.add_argument("ego_ref", metavar="ego")
    sp.add_argument("dup")
    sp.add_argument("--check", action="store_true", help="verify (L), (M), (P) first")
    sp.add_argument("--out")
    sp = verb(g, "D", dual_D)
    sp.add_argument("algebra")
    gen_opts(sp)
    sp.add_argument("--out")
    sp = verb(g, "E", dual_E)
    sp.add_argument("structure")
    gen_opts(sp)
    sp.add_argument("--out")
    sp = verb(g, "check", dual_check)
    sp.add_argument("targets", nargs="+")
    gen_opts(sp)
    sp = verb(g, "free", dual_free)
    sp.add_argument("n", type=int)
    gen_opts(sp)
    sp = verb(g, "probe-injective", dual_probe)
    gen_opts(sp)
    sp.add_argument("--max-power", type=int, default=2)
    sp.add_argument("--max-sub", type=int, default=4)
    sp = verb(g, "eta", dual_eta)
    sp.add_argument("dup")
    sp.add_argument("targets", nargs="+")
    sp.add_argument("--ego", help="ego of the base algebra")
    base_opt(sp)

    g = groups.add_parser("ms").add_subparsers(dest="verb", required=True)
    sp = verb(g, "gens", ms_gens)
    sp.add_argument("dup")
    for name, fn, arg in (("D", ms_D, "algebra"), ("E", ms_E, "structure")):
        sp = verb(g, name, fn)
        sp.add_argument("dup")
        sp.add_argument(arg)
        sp.add_argument("--out")
    sp = verb(g, "check", ms_check)
    sp.add_argument("dup")
    sp.add_argument("targets", nargs="+")
    for sp in g.choices.values():
        base_opt(sp)
        sp.add_argument("--ego", help="ego of the base algebra")

    g = groups.add_parser("catalog").add_subparsers(dest="verb", required=True)
    verb(g, "list", catalog_list)
    sp = verb(g, "get", catalog_get_verb)
    sp.add_argument("key")
    sp.add_argument("--emit-json", action="store_true")

    g = groups.add_parser("ockham").add_subparsers(dest="verb", required=True)
    sp = verb(g, "term", ockham_term)
    sp.add_argument("word", nargs="?", help="e.g. e1e2; 1 for the empty word")
    sp.add_argument("--word", dest="word_opt", help="same as the positional word")
    sp.add_argument("--kind", choices=("t", "u"), default="t")
    sp = verb(g, "separate", ockham_separate)
    sp.add_argument("algebra")
    sp.add_argument("a", type=int, nargs="?")
    sp.add_argument("b", type=int, nargs="?")
    return p


def run(argv=None, out=None) -> tuple:
    """Run one command; returns ``(exit_code, report)`` and prints the report."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        code = EXIT_OK if e.code in (0, None) else EXIT_USAGE
        return code, Report("usage", exit_status=code)
    r = Report(f"{args.group} {args.verb}")
    r.resources.update(max_homs=args.max_homs, max_nodes=args.max_nodes, backend=kernels._pick(None))
    try:
        with kernels.caps(args.max_homs, args.max_nodes):
            args.fn(args, r)
    except ResourceLimitError as e:
        r.verdicts["status"] = "UNKNOWN"
        r.witnesses["cap"] = str(e)
        r.fail(EXIT_CAP)
    except (FormatError, SignatureError, UsageError, CompatibilityError, ConditionError,
            KeyError, ValueError, OSError) as e:
        r.verdicts["error"] = type(e).__name__
        r.witnesses["message"] = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        if isinstance(e, FormatError):
            r.witnesses["path"] = e.path
        r.fail(EXIT_USAGE)
    except (DecompositionError, VerificationError) as e:
        r.verdicts["error"] = type(e).__name__
        r.witnesses["message"] = str(e)
        r.fail()
    out.write(render_json(r) if args.json else render_text(r))
    return r.exit_status, r


def main(argv=None):
    code, _ = run(argv)
    sys.exit(code)


if __name__ == "__main__":
    main()
