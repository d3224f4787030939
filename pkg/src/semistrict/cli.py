"""Command-line front end.

Usage: ``semistrict <command> <file> [name [name2]] [options]``.  Reports are
canonical JSON on standard output; exit status 0 means every check passed,
1 that a check came out false, 2 an input error.
"""
from __future__ import annotations

import argparse
import sys

from . import gray, tam
from .catgp import (cat1_from_crossed_module, cat1_to_internal, is_weak_equivalence_cat1, nerve_of,
                    pi0, pi1, validate_cat1, validate_cat1_morphism, validate_crossed_module)
from .cat2gp import (diagonals_agree, discrete_multinerve, homotopy_groups_cat2,
                     is_weak_equivalence_cat2, multinerve_of, search_retraction, segal_map_bisimp,
                     validate_cat2, validate_cat2_morphism, validate_internal_two_nerve,
                     validate_retraction)
from .document import Document, dumps
from .errors import InvalidInput, SemistrictError
from .groups import describe
from .grp import hom_violation, is_isomorphic, validate_group
from .limits import caps
from .report import ValidationReport
from .sgrp import moore_homotopy

EXIT_OK, EXIT_FALSE, EXIT_INPUT = 0, 1, 2
SET_TRUNC = 2          # set-level 2- and 3-nerves are built to this depth


class Outcome:
    def __init__(self, body, ok=True):
        self.body = body
        self.ok = bool(ok)


gname = describe


def _as_cat1(doc, name):
    kind = doc.kind(name)
    obj = doc.get(name)
    if kind == "crossed_modules":
        return cat1_from_crossed_module(obj, name=name)
    if kind != "cat1":
        raise InvalidInput(f"{name!r} is not a cat1-group or crossed module")
    return obj


def _require_valid(rep):
    if not rep.ok:
        return Outcome({"ok": False, "validation": rep.as_dict()}, False)
    return None


# ---------------------------------------------------------------------------
# commands

def _validate_one(doc, name):
    kind = doc.kind(name)
    obj = doc.get(name)
    if kind == "groups":
        return validate_group(obj)
    if kind == "homs":
        rep = ValidationReport(subject=name)
        bad = hom_violation(obj)
        if bad is not None:
            rep.add("hom", "map is not a homomorphism", [int(b) for b in bad])
        return rep
    fn = {"crossed_modules": validate_crossed_module, "cat1": validate_cat1, "cat2": validate_cat2,
          "cat1_morphisms": validate_cat1_morphism, "cat2_morphisms": validate_cat2_morphism,
          "retractions": validate_retraction}.get(kind)
    if fn is not None:
        return fn(obj)
    return obj.validate()


def cmd_validate(doc, args):
    names = [n for n in (args.name, args.other) if n] or doc.names()
    results = {n: _validate_one(doc, n).as_dict() for n in names}
    ok = all(r["ok"] for r in results.values())
    return Outcome({"ok": ok, "results": results}, ok)


def cmd_pi(doc, args):
    name = args.name or doc.default_name()
    kind = doc.kind(name)
    if kind in ("cat1", "crossed_modules"):
        x = _as_cat1(doc, name)
        bad = _require_valid(validate_cat1(x))
        if bad:
            return bad
        y = cat1_to_internal(x)
        return Outcome({"pi0": gname(pi0(y)), "pi1": gname(pi1(y))})
    if kind == "cat2":
        x = doc.get(name)
        bad = _require_valid(validate_cat2(x))
        if bad:
            return bad
        g = homotopy_groups_cat2(x, max(args.trunc, 3))
        return Outcome({f"pi{k + 1}": gname(h) for k, h in enumerate(g)})
    if kind == "two_groupoids":
        x = doc.get(name)
        bad = _require_valid(x.validate())
        if bad:
            return bad
        h = gray.pi2_groupoid(x)
        return Outcome(h.as_dict())
    if kind == "monoids":
        m = doc.get(name)
        bad = _require_valid(m.validate())
        if bad:
            return bad
        return Outcome(gray.homotopy_of_bar(m).as_dict())
    if kind == "msets":
        s = doc.get(name)
        return Outcome(tam.collapsed_homotopy(s).as_dict())
    raise InvalidInput(f"pi does not apply to {kind} entries")


def cmd_nerve(doc, args):
    name = args.name or doc.default_name()
    kind = doc.kind(name)
    L = args.levels if args.levels is not None else args.trunc
    if kind == "cat2" and args.levels is None:
        L = min(L, 3)
    if kind in ("cat1", "crossed_modules"):
        x = _as_cat1(doc, name)
        bad = _require_valid(validate_cat1(x))
        if bad:
            return bad
        n = nerve_of(cat1_to_internal(x), L)
        return Outcome({"orders": [n.level(k).order for k in range(L + 1)]})
    if kind == "cat2":
        x = doc.get(name)
        bad = _require_valid(validate_cat2(x))
        if bad:
            return bad
        m = multinerve_of(x, L)
        return Outcome({"orders": [[m.level(p, q).order for q in range(L + 1)] for p in range(L + 1)]})
    if kind == "two_groupoids":
        x = doc.get(name)
        bad = _require_valid(x.validate())
        if bad:
            return bad
        return Outcome(tam.msset_to_dict(gray.two_nerve(x, min(L, SET_TRUNC))))
    if kind == "msets":
        s = doc.get(name)
        if args.levels is not None:
            s = s.truncated(tuple(min(args.levels, t) for t in s.trunc))
        return Outcome(tam.msset_to_dict(s))
    raise InvalidInput(f"nerve does not apply to {kind} entries")


def _bisimplicial(doc, name, L, retraction=None):
    kind = doc.kind(name)
    if kind == "retractions":
        r = doc.get(name)
        return discrete_multinerve(r.cat2, r, L).b, r.cat2
    x = doc.get(name, "cat2")
    if retraction:
        r = doc.get(retraction, "retractions")
        return discrete_multinerve(x, r, L).b, x
    return multinerve_of(x, L), x


def cmd_segal(doc, args):
    name = args.name or doc.default_name(("cat2", "retractions", "msets"))
    if doc.kind(name) == "msets":
        s = doc.get(name)
        rows = []
        for n in range(2, s.trunc[0] + 1):
            f = tam.segal_map_2(s, n)
            F = tam.CatFunctor(tam._line_category(s, (n,)), tam.category_of_nerve(f.target),
                               f.at((0,)), f.at((1,)))
            rows.append({"n": n, "equivalence": tam.equivalence_of_categories(F)})
        return Outcome({"direction": "v", "maps": rows}, all(r["equivalence"] for r in rows))
    L = min(args.trunc, 3)
    b, x = _bisimplicial(doc, name, L, args.retraction)
    bad = _require_valid(validate_cat2(x))
    if bad:
        return bad
    axis = 0 if args.direction == "v" else 1
    rows = []
    for n in range(2, b.trunc[axis] + 1):
        res = segal_map_bisimp(b, n, args.direction)
        rows.append({"n": n, "bijective": res.is_iso, "weak_equivalence": bool(res.is_weak_equiv)})
    return Outcome({"direction": args.direction, "maps": rows}, all(r["weak_equivalence"] for r in rows))


def cmd_weq(doc, args):
    name = args.name or doc.default_name(("cat1_morphisms", "cat2_morphisms"))
    kind = doc.kind(name)
    f = doc.get(name)
    if kind == "cat1_morphisms":
        w = is_weak_equivalence_cat1(f)
    elif kind == "cat2_morphisms":
        w = is_weak_equivalence_cat2(f, max(3, min(args.trunc, 4)))
    else:
        raise InvalidInput("weq applies to cat1 or cat2 morphisms")
    return Outcome({"weak_equivalence": bool(w)}, w)


def _retraction_for(doc, x, rname):
    if rname:
        return doc.get(rname, "retractions")
    return search_retraction(x)


def cmd_dsnerve(doc, args):
    name = args.name or doc.default_name(("cat2",))
    x = doc.get(name, "cat2")
    bad = _require_valid(validate_cat2(x))
    if bad:
        return bad
    r = _retraction_for(doc, x, args.retraction)
    if r is None:
        return Outcome({"ok": False, "retraction": None}, False)
    rr = validate_retraction(r)
    if not rr.ok:
        return Outcome({"ok": False, "retraction": rr.as_dict()}, False)
    L = min(args.trunc, 3)
    nv = discrete_multinerve(x, r, L)
    rep = validate_internal_two_nerve(nv)
    orders = [[nv.b.level(p, q).order for q in range(L + 1)] for p in range(L + 1)]
    return Outcome({"Q": gname(r.Q), "orders": orders, "report": rep.as_dict()}, rep.ok)


def _three_nerve(doc, name, rname):
    kind = doc.kind(name)
    if kind == "msets":
        s = doc.get(name)
        return s
    if kind == "monoids":
        m = doc.get(name)
        return gray.one_object_from_monoid(m, SET_TRUNC)
    if kind == "retractions":
        r = doc.get(name)
        return tam.set_nerve_of_internal_2nerve(discrete_multinerve(r.cat2, r, SET_TRUNC), SET_TRUNC)
    x = doc.get(name, "cat2")
    bad = validate_cat2(x)
    if not bad.ok:
        raise InvalidInput(f"{name!r} is not a valid cat2-group: {bad.violations[0].message}")
    r = _retraction_for(doc, x, rname)
    if r is None:
        raise InvalidInput(f"{name!r} has no retraction data")
    return tam.set_nerve_of_internal_2nerve(discrete_multinerve(x, r, SET_TRUNC), SET_TRUNC)


def cmd_hcheck(doc, args):
    name = args.name or doc.default_name(("msets", "monoids", "retractions", "cat2"))
    rep = tam.is_h(_three_nerve(doc, name, args.retraction))
    return Outcome(rep.as_dict(), rep.ok)


def cmd_kcheck(doc, args):
    name = args.name or doc.default_name(("msets", "monoids", "retractions", "cat2"))
    rep = tam.is_k(_three_nerve(doc, name, args.retraction))
    return Outcome(rep.as_dict(), rep.ok)


def cmd_bar(doc, args):
    name = args.name or doc.default_name(("monoids",))
    m = doc.get(name, "monoids")
    bad = _require_valid(m.validate())
    if bad:
        return bad
    s = gray.one_object_from_monoid(m, SET_TRUNC, check=False)
    k = tam.is_k(s)
    return Outcome({"homotopy": gray.homotopy_of_bar(m).as_dict(), "isK": k.as_dict()}, k.ok)


def cmd_lemma51(doc, args):
    name = args.name or doc.default_name(("cat1_morphisms",))
    f = doc.get(name, "cat1_morphisms")
    bad = _require_valid(validate_cat1_morphism(f))
    if bad:
        return bad
    for end in (f.source, f.target):
        bad = _require_valid(validate_cat1(end))
        if bad:
            return bad
    rep = tam.external_equivalence_criteria(tam.nerve_of_nerve_map(f, L=SET_TRUNC))
    return Outcome(rep.as_dict(), rep.ok)


def cmd_diag_agree(doc, args):
    a = args.name or doc.default_name(("cat2",))
    b = args.other
    if b is None:
        if doc.kind(a) == "retractions":
            a, b = doc.get(a).cat2.name, a
        else:
            raise InvalidInput("diag-agree needs two names (a cat2-group and a retraction or cat2-group)")
    L = args.trunc
    psi, _ = _bisimplicial(doc, a, L)
    chi, _ = _bisimplicial(doc, b, L)
    res = diagonals_agree(psi, chi, L)
    return Outcome(res.as_dict(), res.agree and res.hypothesis)


def cmd_report(doc, args):
    name = args.name or doc.default_name()
    kind = doc.kind(name)
    sections = {}
    oks = []

    def run(label, fn, **over):
        ns = argparse.Namespace(**{**vars(args), "name": name, **over})
        try:
            out = fn(doc, ns)
        except SemistrictError as exc:
            sections[label] = {"error": exc.as_dict()}
            oks.append(False)
            return
        sections[label] = out.body
        oks.append(out.ok)

    run("validate", cmd_validate, other=None)
    if kind in ("cat1", "crossed_modules"):
        run("pi", cmd_pi)
        run("nerve", cmd_nerve, levels=min(args.trunc, 4))
        sections["oracle"] = _cat1_oracle(_as_cat1(doc, name), args.trunc)
        oks.append(sections["oracle"]["agree"])
    elif kind == "cat2":
        run("pi", cmd_pi)
        run("segal_v", cmd_segal, direction="v", retraction=None)
        run("segal_h", cmd_segal, direction="h", retraction=None)
        x = doc.get(name)
        if validate_cat2(x).ok and search_retraction(x) is not None:
            run("dsnerve", cmd_dsnerve, retraction=None)
            run("hcheck", cmd_hcheck, retraction=None)
            run("kcheck", cmd_kcheck, retraction=None)
            sections["kcheck_expected_false"] = True
            oks.pop()
    elif kind in ("cat1_morphisms", "cat2_morphisms"):
        run("weq", cmd_weq)
        if kind == "cat1_morphisms":
            run("lemma51", cmd_lemma51)
    elif kind == "two_groupoids":
        run("pi", cmd_pi)
    elif kind == "monoids":
        run("pi", cmd_pi)
        run("bar", cmd_bar)
    elif kind == "msets":
        s = doc.get(name)
        if s.arity == 2:
            sections["weak_2_groupoid"] = tam.is_weak_2_groupoid(s).as_dict()
            oks.append(sections["weak_2_groupoid"]["ok"])
        elif s.arity == 3:
            run("hcheck", cmd_hcheck, retraction=None)
    elif kind == "retractions":
        run("diag_agree", cmd_diag_agree, other=None)
        run("hcheck", cmd_hcheck, retraction=None)
    return Outcome({"kind": kind, "name": name, "sections": sections}, all(oks))


def _cat1_oracle(x, L):
    if not validate_cat1(x).ok:
        return {"agree": False}
    y = cat1_to_internal(x)
    n = nerve_of(y, max(2, min(L, 4)))
    a0 = is_isomorphic(pi0(y), moore_homotopy(n, 0))
    a1 = is_isomorphic(pi1(y), moore_homotopy(n, 1))
    s = tam.nerve_of_nerve(x, oracle_trunc=max(3, min(L, 4)))
    h = tam.collapsed_homotopy(s)
    o = tam.group_level_homotopy(s, 2)
    a2 = len(h.pi0) == 1 and is_isomorphic(h.pi1, o[1]) and is_isomorphic(h.pi2, o[2])
    return {"closed_form_vs_moore": bool(a0 and a1), "collapsed_vs_diagonal": bool(a2),
            "agree": bool(a0 and a1 and a2)}


COMMANDS = {"validate": cmd_validate, "pi": cmd_pi, "nerve": cmd_nerve, "segal": cmd_segal,
            "weq": cmd_weq, "dsnerve": cmd_dsnerve, "hcheck": cmd_hcheck, "kcheck": cmd_kcheck,
            "bar": cmd_bar, "lemma51": cmd_lemma51, "diag-agree": cmd_diag_agree, "report": cmd_report}


def build_parser():
    p = argparse.ArgumentParser(prog="semistrict", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("file")
    p.add_argument("name", nargs="?")
    p.add_argument("other", nargs="?")
    p.add_argument("--levels", type=int)
    p.add_argument("--direction", choices=["h", "v"], default="v")
    p.add_argument("--retraction")
    p.add_argument("--trunc", type=int, default=5)
    p.add_argument("--cap", type=int, default=10**7)
    p.add_argument("--seed", type=int, default=0, help="reserved; every algorithm is deterministic")
    return p


def run(argv=None, stdout=None, stderr=None):
    """Run one command; returns the exit status and writes the report."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.trunc < 2:
            raise InvalidInput("--trunc must be at least 2")
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
        with caps(element_cap=args.cap, trunc=args.trunc):
            doc = Document.from_text(text)
            out = COMMANDS[args.command](doc, args)
        body = out.body
        code = EXIT_OK if out.ok else EXIT_FALSE
    except SemistrictError as exc:
        body = {"error": exc.as_dict()}
        print(f"semistrict: {exc.code}: {exc}", file=stderr)
        code = EXIT_INPUT
    except OSError as exc:
        body = {"error": {"code": "io_error", "message": str(exc)}}
        print(f"semistrict: io_error: {exc}", file=stderr)
        code = EXIT_INPUT
    stdout.write(dumps(body) + "\n")
    return code


def main():
    sys.exit(run())
