"""JSON configuration loading.

A config describes the algebra and the structure data::

    {
      "name": "dihedral-h1",
      "field": "Q",                       # or "fp:13"
      "group": {"kind": "dihedral", "u": 4},
      "cocycle": {"kind": "trivial"},     # or {"kind": "xi", "xi": 2} / {"kind": "table", ...}
      "n": 2,
      "representation": {"s": [[-1, 0], [0, -1]], "t": [[1, 0], [0, 1]]},
      "alpha": {"matrix": [[1, 0], [0, 1]], "character": {"s": 1, "t": 1}},
      "chi_sigma": {"s": -1, "t": 1},
      "x1": 1, "x2": 2,
      "delta1": [{"g": "t", "P": "1"}, {"g": "t^3", "P": "1"}],
      "delta2": [{"g": "t^2", "P": "1"}],
      "q": "1",                           # optional cross-check
      "expected": {...}                   # recorded verdicts, optional
    }

Matrices are given as rows; entry [i][j] is the x_{i+1} coefficient of the
image of x_{j+1}.  Characters are given on generators, or per element
under ``"values"``.
"""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Union

from .crossed_product import AlgebraContext
from .groups import (GroupError, character_from_generators, character_from_values, cocycle_from_table, cocycle_xi,
                     make_group, trivial_character, trivial_cocycle)
from .hq_structure import HqStructure, StructureError, build_structure, derived_invariants, validate_structure
from .parsing import ParseError, parse_element, parse_poly
from .polynomials import LinearEndo, representation_from_generators
from .reports import Report
from .scalars import FieldError, FieldSpec


class ConfigError(ValueError):
    def __init__(self, fieldname: str, message: str):
        super().__init__(f"{fieldname}: {message}")
        self.field = fieldname


@dataclass
class Loaded:
    raw: Dict[str, Any]
    ctx: AlgebraContext
    structure: HqStructure

    @property
    def name(self) -> str:
        return self.raw.get("name", "config")

    @property
    def expected(self) -> Dict[str, Any]:
        return self.raw.get("expected", {})


def read_config(path: Union[str, Path]) -> Dict[str, Any]:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"invalid JSON: {exc}") from None
    except OSError as exc:
        raise ConfigError("<file>", str(exc)) from None


def _need(raw: dict, key: str):
    if key not in raw:
        raise ConfigError(key, "missing")
    return raw[key]


def _character(G, fld, desc, name):
    if desc is None:
        return trivial_character(G, fld)
    try:
        if isinstance(desc, dict) and "values" in desc:
            return character_from_values(G, fld, desc["values"])
        return character_from_generators(G, fld, desc)
    except (GroupError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(name, str(exc)) from None


def build_context(raw: dict) -> AlgebraContext:
    try:
        fld = FieldSpec.parse(str(_need(raw, "field")))
    except FieldError as exc:
        raise ConfigError("field", str(exc)) from None
    try:
        G = make_group(_need(raw, "group"))
    except (GroupError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError("group", str(exc)) from None
    n = _need(raw, "n")
    if not isinstance(n, int) or n < 2:
        raise ConfigError("n", "must be an integer >= 2")
    cspec = raw.get("cocycle", {"kind": "trivial"})
    try:
        kind = cspec.get("kind", "trivial")
        if kind == "trivial":
            f = trivial_cocycle(G, fld)
        elif kind == "xi":
            gen = G.index(cspec["generator"]) if "generator" in cspec else None
            f = cocycle_xi(G, fld, fld.parse_scalar(str(cspec["xi"])), gen)
        elif kind == "table":
            vals = {}
            for entry in cspec["values"]:
                vals[(G.parse_word(entry["g"]), G.parse_word(entry["h"]))] = fld.parse_scalar(str(entry["f"]))
            f = cocycle_from_table(G, fld, vals)
        else:
            raise ConfigError("cocycle", f"unknown kind {kind!r}")
    except ConfigError:
        raise
    except (GroupError, KeyError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError("cocycle", str(exc)) from None
    mats = _need(raw, "representation")
    try:
        conv = {k: [[fld.parse_scalar(str(x)) for x in row] for row in m] for k, m in mats.items()}
        rho = representation_from_generators(G, fld, n, conv)
    except (GroupError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError("representation", str(exc)) from None
    return AlgebraContext(fld, n, G, f, rho)


def build_from_raw(raw: dict) -> Loaded:
    ctx = build_context(raw)
    fld, G, n = ctx.field, ctx.group, ctx.n
    aspec = raw.get("alpha", {})
    try:
        if "matrix" in aspec:
            ahat = LinearEndo(fld, [[fld.parse_scalar(str(x)) for x in row] for row in aspec["matrix"]])
        else:
            ahat = LinearEndo.identity(fld, n)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError("alpha.matrix", str(exc)) from None
    if ahat.n != n:
        raise ConfigError("alpha.matrix", f"expected a {n}x{n} matrix")
    chi_a = _character(G, fld, aspec.get("character"), "alpha.character")
    chi_s = _character(G, fld, raw.get("chi_sigma"), "chi_sigma")
    x1, x2 = _need(raw, "x1"), _need(raw, "x2")
    for key, v in (("x1", x1), ("x2", x2)):
        if not isinstance(v, int) or not 1 <= v <= n:
            raise ConfigError(key, f"must be an index in 1..{n}")

    def dlist(key):
        out = []
        for k, entry in enumerate(_need(raw, key)):
            try:
                out.append((G.parse_word(str(entry["g"])), parse_poly(str(entry["P"]), fld, n)))
            except (KeyError, ValueError) as exc:
                raise ConfigError(f"{key}[{k}]", str(exc)) from None
        return out

    d1, d2 = dlist("delta1"), dlist("delta2")
    bars = []
    for key in ("deltabar1", "deltabar2"):
        m = {}
        for lab, txt in raw.get(key, {}).items():
            try:
                m[G.parse_word(lab)] = parse_element(txt, ctx)
            except (ParseError, ValueError) as exc:
                raise ConfigError(f"{key}.{lab}", str(exc)) from None
        bars.append(m)
    q = None
    if raw.get("q") is not None:
        try:
            q = fld.parse_scalar(str(raw["q"]))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError("q", str(exc)) from None
    st = build_structure(ctx, ahat, chi_a, chi_s, x1 - 1, x2 - 1, d1, d2, bars[0], bars[1], q)
    return Loaded(raw, ctx, st)


def load(source: Union[str, Path, dict]) -> Loaded:
    """Load from a path, a fixture name, or an already-parsed dict."""
    if isinstance(source, dict):
        return build_from_raw(copy.deepcopy(source))
    from .fixtures import fixture_path

    p = Path(source)
    if not p.exists():
        fp = fixture_path(str(source))
        if fp is None:
            raise ConfigError("<file>", f"no such file or fixture: {source}")
        p = fp
    return build_from_raw(read_config(p))


def validation_report(source: Union[str, Path, dict], mode: str = "second-case", seed: int = 0) -> Report:
    """Validate a config; structural failures while deriving the data become failed checks."""
    try:
        L = load(source)
    except StructureError as exc:
        rep = Report("validate")
        rep.add(exc.condition, False, {"message": str(exc)})
        return rep
    rep = validate_structure(L.structure, mode, seed)
    rep.name = "validate"
    if mode == "second-case":
        rep.extend(derived_invariants(L.structure))
    return rep


__all__ = ["validation_report", "ConfigError", "Loaded", "load", "read_config", "build_from_raw", "build_context", "StructureError"]
