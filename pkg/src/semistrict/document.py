"""Self-contained JSON documents: named groups, homs and every higher structure.

Layout (every section optional, names unique across the whole document)::

    {"groups":          {name: {"elements": [...], "table": [[...]], "identity": i}},
     "homs":            {name: {"source": g, "target": g, "map": [...]}},
     "crossed_modules": {name: {"M": g, "P": g, "boundary": [...], "action": [[...]]}},
     "cat1":            {name: {"group": g, "d": [...], "t": [...]}},
     "cat2":            {name: {"group": g, "d1": [...], "t1": [...], "d2": [...], "t2": [...]}},
     "cat1_morphisms":  {name: {"source": x, "target": y, "map": [...]}},
     "cat2_morphisms":  {name: {"source": x, "target": y, "map": [...]}},
     "retractions":     {name: {"cat2": x, "Q": g, "d": [...], "t": [...]}},
     "msets":           {name: {"arity": n, "trunc": L, "levels": {...}, "maps": {...}}},
     "two_groupoids":   {name: {"objects": [...], "cells1": {...}, "cells2": {...}, ...}},
     "monoids":         {name: {"carrier": {...}, "mult0": ..., "mult1": ..., "mult2": ..., "unit": u}}}
"""
from __future__ import annotations

import json

import numpy as np

from .catgp import Cat1Group, Cat1Morphism, CrossedModule
from .cat2gp import Cat2Group, Cat2Morphism, RetractionData
from .errors import InvalidInput, ParseError, SemistrictError, UnknownName
from .gray import StrictTwoGroupoid, TwoGroupMonoid
from .grp import FinGroup, GroupAction, GroupHom
from .tam import msset_from_dict, msset_to_dict

SECTIONS = ("groups", "homs", "crossed_modules", "cat1", "cat2", "cat1_morphisms",
            "cat2_morphisms", "retractions", "msets", "two_groupoids", "monoids")

# preferred kind when a command is given no name
DEFAULT_ORDER = ("monoids", "two_groupoids", "msets", "retractions", "cat2", "cat2_morphisms",
                 "cat1_morphisms", "cat1", "crossed_modules", "homs", "groups")


def dumps(obj):
    """Canonical JSON: sorted keys, compact separators, UTF-8 text."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{exc.msg} at line {exc.lineno} column {exc.colno}",
                         line=exc.lineno, column=exc.colno) from None


class Document:
    def __init__(self, raw):
        if not isinstance(raw, dict):
            raise InvalidInput("a document is a JSON object")
        unknown = sorted(set(raw) - set(SECTIONS))
        if unknown:
            raise InvalidInput(f"unknown section(s): {', '.join(unknown)}")
        self.raw = raw
        self.kinds = {}
        for sec in SECTIONS:
            entries = raw.get(sec, {})
            if not isinstance(entries, dict):
                raise InvalidInput(f"section {sec} must map names to objects")
            for name in entries:
                if name in self.kinds:
                    raise InvalidInput(f"name {name!r} is defined twice")
                self.kinds[name] = sec
        self._built = {}

    @classmethod
    def from_text(cls, text):
        return cls(loads(text))

    def names(self, kind=None):
        return [n for n, k in self.kinds.items() if kind is None or k == kind]

    def kind(self, name):
        if name not in self.kinds:
            raise UnknownName(f"no object named {name!r}", name=name)
        return self.kinds[name]

    def default_name(self, kinds=None):
        for sec in DEFAULT_ORDER:
            if kinds is not None and sec not in kinds:
                continue
            found = self.names(sec)
            if len(found) == 1:
                return found[0]
            if len(found) > 1:
                raise UnknownName(f"several {sec} in the document; give a name", candidates=sorted(found))
        raise UnknownName("the document has no object this command applies to")

    def get(self, name, expect=None):
        kind = self.kind(name)
        if expect is not None and kind not in (expect if isinstance(expect, tuple) else (expect,)):
            raise UnknownName(f"{name!r} is a {kind} entry, expected {expect}", name=name)
        if name not in self._built:
            spec = self.raw[kind][name]
            try:
                self._built[name] = _BUILDERS[kind](self, name, spec)
            except SemistrictError:
                raise
            except (KeyError, TypeError, ValueError, IndexError) as exc:
                raise InvalidInput(f"malformed {kind} entry {name!r}: {exc}") from None
        return self._built[name]


def _arr(v):
    return np.asarray(v, dtype=np.int64)


def _group(doc, name, s):
    return FinGroup(s["elements"], s["table"], s.get("identity"), name=name)


def _hom(doc, name, s):
    src, tgt = doc.get(s["source"], "groups"), doc.get(s["target"], "groups")
    m = _arr(s["map"])
    if m.shape != (src.order,) or (m.size and (m.min() < 0 or m.max() >= tgt.order)):
        raise InvalidInput(f"hom {name!r} has the wrong shape")
    return GroupHom(src, tgt, m, name=name)


def _cm(doc, name, s):
    M, P = doc.get(s["M"], "groups"), doc.get(s["P"], "groups")
    return CrossedModule(GroupHom(M, P, _arr(s["boundary"])), GroupAction(P, M, _arr(s["action"])), name=name)


def _endo_arr(g, v, what):
    m = _arr(v)
    if m.shape != (g.order,) or (m.size and (m.min() < 0 or m.max() >= g.order)):
        raise InvalidInput(f"{what} must be an index array of length {g.order}")
    return m


def _cat1(doc, name, s):
    g = doc.get(s["group"], "groups")
    return Cat1Group(g, _endo_arr(g, s["d"], "d"), _endo_arr(g, s["t"], "t"), name=name)


def _cat2(doc, name, s):
    g = doc.get(s["group"], "groups")
    return Cat2Group(g, *[_endo_arr(g, s[k], k) for k in ("d1", "t1", "d2", "t2")], name=name)


def _morph(kind, cls):
    def build(doc, name, s):
        a, b = doc.get(s["source"], kind), doc.get(s["target"], kind)
        m = _arr(s["map"])
        if m.shape != (a.g.order,) or (m.size and (m.min() < 0 or m.max() >= b.g.order)):
            raise InvalidInput(f"morphism {name!r} has the wrong shape")
        return cls(a, b, m, name=name)
    return build


def _retraction(doc, name, s):
    return RetractionData(doc.get(s["cat2"], "cat2"), doc.get(s["Q"], "groups"), _arr(s["d"]),
                          _arr(s["t"]), name=name)


def _mset(doc, name, s):
    return msset_from_dict(s, name=name)


def _twogpd(doc, name, s):
    return StrictTwoGroupoid.from_json(s, name=name)


def _monoid(doc, name, s):
    return TwoGroupMonoid.from_json(s, name=name)


_BUILDERS = {"groups": _group, "homs": _hom, "crossed_modules": _cm, "cat1": _cat1, "cat2": _cat2,
             "cat1_morphisms": _morph("cat1", Cat1Morphism), "cat2_morphisms": _morph("cat2", Cat2Morphism),
             "retractions": _retraction, "msets": _mset, "two_groupoids": _twogpd, "monoids": _monoid}


# ---------------------------------------------------------------------------
# writing

class DocumentBuilder:
    """Collect objects under names and emit a canonical document."""

    def __init__(self):
        self.raw = {}
        self._group_names = {}
        self._keep = []          # holds groups alive so their ids stay unique
        self._owner = {}

    def _reserve(self, sec, name):
        if self._owner.setdefault(name, sec) != sec:
            raise InvalidInput(f"name {name!r} is already used by a {self._owner[name]} entry")

    def _put(self, sec, name, val):
        self._reserve(sec, name)
        self.raw.setdefault(sec, {})[name] = val
        return name

    def group(self, g, name=None):
        key = id(g)
        if key in self._group_names:
            return self._group_names[key]
        name = name or g.name or f"g{len(self._group_names)}"
        base, k = name, 1
        while name in self._owner:
            name, k = f"{base}#{k}", k + 1
        if hasattr(g, "to_json"):
            val = g.to_json()
        else:
            val = g.as_fingroup().to_json()
        self._group_names[key] = name
        self._keep.append(g)
        return self._put("groups", name, val)

    def hom(self, name, h):
        return self._put("homs", name, {"source": self.group(h.source), "target": self.group(h.target),
                                        "map": [int(v) for v in h.map]})

    def cat1(self, name, x, group_name=None):
        self._reserve("cat1", name)
        return self._put("cat1", name, x.to_json(self.group(x.g, group_name)))

    def crossed_module(self, name, x):
        self._reserve("crossed_modules", name)
        return self._put("crossed_modules", name, {"M": self.group(x.M), "P": self.group(x.P),
                                                   "boundary": [int(v) for v in x.boundary.map],
                                                   "action": x.action.act.tolist()})

    def cat2(self, name, x, group_name=None):
        self._reserve("cat2", name)
        return self._put("cat2", name, x.to_json(self.group(x.g, group_name)))

    def cat1_morphism(self, name, f, source, target):
        return self._put("cat1_morphisms", name, {"source": source, "target": target,
                                                  "map": [int(v) for v in f.hom.map]})

    def cat2_morphism(self, name, f, source, target):
        return self._put("cat2_morphisms", name, {"source": source, "target": target,
                                                  "map": [int(v) for v in f.hom.map]})

    def retraction(self, name, r, cat2_name, q_name=None):
        self._reserve("retractions", name)
        return self._put("retractions", name, r.to_json(cat2_name, self.group(r.Q, q_name)))

    def mset(self, name, s):
        return self._put("msets", name, msset_to_dict(s))

    def two_groupoid(self, name, x):
        return self._put("two_groupoids", name, x.to_json())

    def monoid(self, name, m):
        return self._put("monoids", name, m.to_json())

    def text(self):
        return dumps(self.raw) + "\n"
