"""JSON file forms for the toolkit's data types.

Rationals travel as "p/q" strings so files stay exact; floats (from the
approximate paths) are written as JSON numbers and read back as floats.
Dump functions emit deterministically ordered structures, so identical
inputs serialize byte-identically.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .extalg import AElement, Mode, a_normalize
from .fibres import FibreSpec, Preorder
from .functionals.core import (DiscreteMeasure, LinearFunctional,
                               SCALAR_EXACT, SCALAR_FLOAT)
from .polyalg import Poly, grlex_key
from .scalars import GaussianRational, as_fraction, format_fraction
from .semigroups import HermitianSequence, SgDomain


def scalar_to_json(value):
    if isinstance(value, (int, Fraction)):
        return format_fraction(Fraction(value))
    return float(value)


def scalar_from_json(value):
    if isinstance(value, str):
        return as_fraction(value)
    if isinstance(value, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    return float(value)


# -- polynomials -------------------------------------------------------------


def poly_to_dict(p: Poly) -> dict:
    return {"nvars": p.nvars,
            "terms": [{"coeff": format_fraction(c), "exp": list(e)}
                      for e, c in p.sorted_terms()]}


def poly_from_dict(data: dict) -> Poly:
    terms = {tuple(item["exp"]): as_fraction(item["coeff"])
             for item in data["terms"]}
    return Poly(int(data["nvars"]), terms)


# -- algebra elements --------------------------------------------------------


def aelement_to_dict(a: AElement) -> dict:
    return {"numerator": poly_to_dict(a.numerator),
            "pole_order": a.pole_order,
            "mode": a.mode.value}


def aelement_from_dict(data: dict) -> AElement:
    return a_normalize(poly_from_dict(data["numerator"]),
                       int(data["pole_order"]), Mode(data["mode"]))


# -- measures ----------------------------------------------------------------


def measure_to_dict(measure: DiscreteMeasure) -> dict:
    return {
        "dim": measure.dim,
        "atoms": [{"weight": scalar_to_json(w), "point": [scalar_to_json(c) for c in p]}
                  for w, p in measure.atoms],
        "origin_mass": scalar_to_json(measure.origin_mass),
        "sphere_atoms": [{"weight": scalar_to_json(w),
                          "point": [scalar_to_json(c) for c in p]}
                         for w, p in measure.sphere_atoms],
    }


def measure_from_dict(data: dict) -> DiscreteMeasure:
    atoms = tuple((scalar_from_json(item["weight"]),
                   tuple(scalar_from_json(c) for c in item["point"]))
                  for item in data.get("atoms", []))
    sphere = tuple((scalar_from_json(item["weight"]),
                    tuple(scalar_from_json(c) for c in item["point"]))
                   for item in data.get("sphere_atoms", []))
    return DiscreteMeasure(int(data["dim"]), atoms,
                           scalar_from_json(data.get("origin_mass", 0)), sphere)


# -- functionals -------------------------------------------------------------


def functional_to_dict(L: LinearFunctional) -> dict:
    entries = []
    for (gamma, m), value in sorted(L.values.items(),
                                    key=lambda kv: (kv[0][1], grlex_key(kv[0][0]))):
        entries.append({"exp": list(gamma), "pole_order": m,
                        "value": scalar_to_json(value)})
    return {"nvars": L.nvars, "mode": L.mode.value, "scalar_kind": L.scalar_kind,
            "pole_max": L.pole_max, "degree_max": L.degree_max, "entries": entries}


def functional_from_dict(data: dict) -> LinearFunctional:
    kind = data["scalar_kind"]
    if kind not in (SCALAR_EXACT, SCALAR_FLOAT):
        raise ValueError(f"unknown scalar kind {kind!r}")
    values = {}
    for item in data["entries"]:
        value = scalar_from_json(item["value"])
        if kind == SCALAR_FLOAT:
            value = float(value)
        elif isinstance(value, float):
            raise ValueError("exact functional file contains a float value")
        values[(tuple(item["exp"]), int(item["pole_order"]))] = value
    return LinearFunctional(int(data["nvars"]), Mode(data["mode"]), kind, values,
                            pole_max=int(data.get("pole_max", 0)),
                            degree_max=int(data.get("degree_max", 0)))


# -- fibre inputs ------------------------------------------------------------


def preorder_to_dict(preorder: Preorder) -> dict:
    return {"dim": preorder.dim,
            "generators": [poly_to_dict(g) for g in preorder.generators]}


def preorder_from_dict(data: dict) -> Preorder:
    return Preorder(int(data["dim"]),
                    tuple(poly_from_dict(g) for g in data["generators"]))


def fibre_spec_to_dict(spec: FibreSpec) -> dict:
    return {"bounded": [poly_to_dict(h) for h in spec.bounded],
            "value": [format_fraction(v) for v in spec.value]}


def fibre_spec_from_dict(data: dict) -> FibreSpec:
    return FibreSpec(tuple(poly_from_dict(h) for h in data["bounded"]),
                     tuple(as_fraction(v) for v in data["value"]))


def samples_to_dict(dim: int, points: list) -> dict:
    return {"dim": dim,
            "points": [[scalar_to_json(as_fraction(c)) for c in p] for p in points]}


def samples_from_dict(data: dict) -> list[list[Fraction]]:
    dim = int(data["dim"])
    points = []
    for p in data["points"]:
        if len(p) != dim:
            raise ValueError(f"sample {p} does not have dimension {dim}")
        points.append([as_fraction(c) for c in p])
    return points


# -- semigroup sequences -----------------------------------------------------


def sequence_to_dict(seq: HermitianSequence) -> dict:
    entries = []
    for (m, n) in sorted(seq.entries):
        value = seq.entries[(m, n)]
        if isinstance(value, GaussianRational):
            entries.append({"m": m, "n": n,
                            "re": format_fraction(value.re),
                            "im": format_fraction(value.im)})
        else:
            value = complex(value)
            entries.append({"m": m, "n": n, "re": value.real, "im": value.imag})
    return {"domain": seq.domain.value, "entries": entries}


def sequence_from_dict(data: dict) -> HermitianSequence:
    domain = SgDomain(data["domain"])
    entries: dict[tuple[int, int], Any] = {}
    for item in data["entries"]:
        re = scalar_from_json(item["re"])
        im = scalar_from_json(item.get("im", 0))
        if isinstance(re, float) or isinstance(im, float):
            value: Any = complex(float(re), float(im))
        else:
            value = GaussianRational(re, im)
        entries[(int(item["m"]), int(item["n"]))] = value
    return HermitianSequence(domain, entries)


# -- files -------------------------------------------------------------------


def dump_json(data: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(data, handle, indent=2, sort_keys=True)
        handle.write("\n")


def load_json(path) -> dict:
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)
