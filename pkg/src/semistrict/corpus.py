"""The acceptance corpus: one self-contained JSON document per file.

``python -m semistrict.corpus DIR`` rewrites the files; ``build_corpus()``
returns their text so tests can check the checked-in copies are current.
"""
from __future__ import annotations

import re
import sys
from pathlib import Path

import numpy as np

from . import fixtures as fx
from . import gray
from .cat2gp import Cat2Morphism, cat2_from_cat1, trivial_cat2
from .catgp import Cat1Group, CrossedModule, discrete_cat1, one_object_cat1
from .document import DocumentBuilder
from .groups import cyclic
from .tam import nerve_of_nerve, point_msset


def slug(name):
    s = re.sub(r"[^A-Za-z0-9]+", "_", name).strip("_")
    return s or "x"


def _add_structure(b, name, x):
    if isinstance(x, Cat1Group):
        return b.cat1(name, x)
    if isinstance(x, CrossedModule):
        return b.crossed_module(name, x)
    return b.cat2(name, x)


def _fixture_doc(entries):
    b = DocumentBuilder()
    for name, x, *_ in entries:
        _add_structure(b, slug(name), x)
    return b.text()


def _k_z2_3():
    b = DocumentBuilder()
    b.cat2("k_z2_3", trivial_cat2(cyclic(2)), "Z2")
    return b.text()


def _bad_s3():
    b = DocumentBuilder()
    b.cat1("bad_s3", fx.bad_s3(), "S3")
    return b.text()


def _point():
    b = DocumentBuilder()
    b.mset("point", point_msset((2, 2, 2)))
    return b.text()


def _retractions():
    b = DocumentBuilder()
    for x, r in fx.retraction_fixtures():
        xn = b.cat2(slug(x.name), x)
        b.retraction(f"r_{xn}", r, xn)
    return b.text()


def _maps():
    b = DocumentBuilder()
    for name, f, _ in fx.map_suite():
        src = _add_structure(b, slug(f.source.name), f.source)
        tgt = _add_structure(b, slug(f.target.name), f.target)
        b.cat1_morphism(slug(name), f, src, tgt)
    return b.text()


def _cat2_maps():
    b = DocumentBuilder()
    x = cat2_from_cat1(fx.e3(), 1, name="E3_1")
    pt = trivial_cat2(cyclic(1), name="pt2")
    xn, ptn = b.cat2("E3_1", x), b.cat2("pt2", pt)
    b.cat2_morphism("id_E3_1", Cat2Morphism(x, x, np.arange(x.g.order)), xn, xn)
    b.cat2_morphism("E3_1_to_pt", Cat2Morphism(x, pt, np.zeros(x.g.order, dtype=np.int64)), xn, ptn)
    return b.text()


def _monoids():
    b = DocumentBuilder()
    b.monoid("z3_2cells", gray.monoid_of_abelian_2cells(cyclic(3)))
    b.monoid("z2_1cells", gray.monoid_of_group_1cells(cyclic(2)))
    b.monoid("e3_carrier", gray.monoid_of_cat1(fx.e3()))
    return b.text()


def _two_groupoids():
    b = DocumentBuilder()
    b.two_groupoid("e3", gray.two_groupoid_of_cat1(fx.e3()))
    b.two_groupoid("a3_s3", gray.two_groupoid_of_cat1(fx.a3_in_s3()))
    return b.text()


def _msets():
    b = DocumentBuilder()
    b.mset("point", point_msset((2, 2, 2)))
    b.mset("nn_disc_z2", nerve_of_nerve(discrete_cat1(cyclic(2)), oracle_trunc=3))
    b.mset("nn_one_z2", nerve_of_nerve(one_object_cat1(cyclic(2)), oracle_trunc=3))
    return b.text()


BUILDERS = {
    "k_z2_3.json": _k_z2_3,
    "bad_s3.json": _bad_s3,
    "point.json": _point,
    "valid.json": lambda: _fixture_doc(fx.valid_fixtures()),
    "invalid.json": lambda: _fixture_doc(fx.invalid_fixtures()),
    "retractions.json": _retractions,
    "maps.json": _maps,
    "cat2_maps.json": _cat2_maps,
    "monoids.json": _monoids,
    "two_groupoids.json": _two_groupoids,
    "msets.json": _msets,
}


def build_corpus():
    return {name: fn() for name, fn in BUILDERS.items()}


def write_corpus(directory):
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for name, text in build_corpus().items():
        (d / name).write_text(text, encoding="utf-8")


if __name__ == "__main__":
    write_corpus(sys.argv[1] if len(sys.argv) > 1 else "corpus")
