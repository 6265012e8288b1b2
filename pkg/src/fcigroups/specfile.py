"""
Group spec files: one JSON document per group.

Every document has a ``kind``; the remaining keys depend on it::

    finite_abelian    components
    dedekind          components, hamiltonian, free_rank
    cyclic_extension  base{components, hamiltonian, free_rank}, action{t, sign, q0}, top, d0
    thm32             A, d0, Q
    thm36             D{components, hamiltonian}, t, q0
    thm43             free_rank, torsion, d0

Components are ``[p, e]`` pairs with ``e`` a positive integer or ``"inf"``
(quasicyclic).  A unit ``t`` is an integer or ``{"value", "precision"}``;
parsing normalizes it to its residue at the stated precision.  Optional keys
shared by all kinds: ``level``, ``levels``, ``window``, ``cap``, ``probes``.

:func:`serialize` emits the canonical form, and ``parse(serialize(s)) == s``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any

from .abelian import QUASI, FgAbelian, FinAbelian, QuasiSpec
from .dedekind import Q8_INDEX, Q8_NAMES, DedekindGroup, DedekindSpec
from .errors import SpecInvalid, SpecParseError
from .extension import CyclicExtension
from .generic import DEFAULT_CAP
from .padic import make_unit
from .pauto import power_aut
from .verify import Probe, Thm32Spec, Thm36Spec, Thm43Spec, classify_thm32, classify_thm36, classify_thm43

KINDS = ("finite_abelian", "dedekind", "cyclic_extension", "thm32", "thm36", "thm43")
DEFAULT_PRECISION = 32
DEFAULT_LEVEL = 3
_OPTIONAL = ("level", "levels", "window", "cap", "probes")


@dataclass(frozen=True)
class GroupSpecFile:
    kind: str
    body: str  # canonical JSON of the whole document

    @property
    def data(self) -> dict:
        return json.loads(self.body)

    def get(self, key, default=None):
        return self.data.get(key, default)


def parse_spec(text: str) -> GroupSpecFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(raw, dict):
        raise SpecParseError("a spec file must be a JSON object", 1, 1)
    doc = canonicalize(raw)
    return GroupSpecFile(doc["kind"], json.dumps(doc, sort_keys=True, indent=2))


def serialize(spec: GroupSpecFile) -> str:
    return spec.body + "\n"


def load_spec(path) -> GroupSpecFile:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


# canonicalization


def _need(cond, path, msg):
    if not cond:
        raise SpecInvalid(f"{path}: {msg}")


def _int(v, path, lo=None):
    _need(isinstance(v, int) and not isinstance(v, bool), path, f"expected an integer, got {v!r}")
    if lo is not None:
        _need(v >= lo, path, f"must be >= {lo}")
    return v


def _components(v, path, allow_quasi=True) -> list:
    _need(isinstance(v, list), path, "expected a list of [p, e] pairs")
    out = []
    for i, c in enumerate(v):
        where = f"{path}[{i}]"
        _need(isinstance(c, list) and len(c) == 2, where, "expected [p, e]")
        p, e = c
        _int(p, where, 2)
        if e == "inf":
            _need(allow_quasi, where, "quasicyclic components are not allowed here")
        else:
            _int(e, where, 1)
        out.append([p, e])
    try:
        QuasiSpec(tuple((p, QUASI if e == "inf" else e) for p, e in out))
    except ValueError as exc:
        raise SpecInvalid(f"{path}: {exc}") from None
    return sorted(out, key=lambda c: (c[0], float("inf") if c[1] == "inf" else c[1]))


def _unit(v, p, path, default_precision) -> dict:
    if isinstance(v, dict):
        _need(set(v) <= {"value", "precision"} and "value" in v, path, "expected {value, precision}")
        value = _int(v["value"], path)
        prec = _int(v.get("precision", default_precision), path, 1)
    else:
        value, prec = _int(v, path), default_precision
    try:
        t = make_unit(p, prec, value)
    except ValueError as exc:
        raise SpecInvalid(f"{path}: {exc}") from None
    return {"precision": t.precision, "value": t.residue}


def _units(v, primes, path, default_precision) -> dict:
    _need(isinstance(v, dict), path, "expected an object keyed by prime")
    out = {}
    for key, t in v.items():
        _need(str(key).isdigit(), path, f"bad prime key {key!r}")
        p = int(key)
        _need(p in primes, path, f"prime {p} does not divide the base")
        out[str(p)] = _unit(t, p, f"{path}.{p}", default_precision)
    return dict(sorted(out.items(), key=lambda kv: int(kv[0])))


def _q0(v, path) -> str:
    _need(v in Q8_INDEX, path, f"expected one of {Q8_NAMES}")
    return Q8_NAMES[Q8_INDEX[v] - Q8_INDEX[v] % 2]


def _coords(v, path) -> list:
    _need(isinstance(v, list), path, "expected a list of integers")
    return [_int(c, f"{path}[{i}]") for i, c in enumerate(v)]


def _base(v, path, free_ok=True) -> dict:
    _need(isinstance(v, dict), path, "expected an object")
    _need(set(v) <= {"components", "hamiltonian", "free_rank"}, path, f"unknown keys {sorted(set(v))}")
    out = {
        "components": _components(v.get("components", []), f"{path}.components"),
        "free_rank": _int(v.get("free_rank", 0), f"{path}.free_rank", 0),
        "hamiltonian": v.get("hamiltonian", False),
    }
    _need(isinstance(out["hamiltonian"], bool), f"{path}.hamiltonian", "expected true or false")
    _need(free_ok or not out["free_rank"], f"{path}.free_rank", "must be 0 here")
    if out["free_rank"]:
        _need(not out["hamiltonian"], path, "a Hamiltonian base is periodic")
    if out["hamiltonian"]:
        _need(all(c[0] != 2 or c[1] == 1 for c in out["components"]), path,
              "the 2-part beside Q8 must be elementary abelian")
    return out


def _primes(components) -> set:
    return {p for p, _ in components}


def canonicalize(raw: dict) -> dict:
    kind = raw.get("kind")
    _need(kind in KINDS, "kind", f"expected one of {KINDS}, got {kind!r}")
    prec = _int(raw.get("precision", DEFAULT_PRECISION), "precision", 1)
    known = {"kind", "precision", *_OPTIONAL}
    doc: dict[str, Any] = {"kind": kind}

    if kind == "finite_abelian":
        known |= {"components"}
        doc["components"] = _components(raw.get("components", []), "components")
    elif kind == "dedekind":
        known |= {"components", "hamiltonian", "free_rank"}
        doc.update(_base({k: raw[k] for k in ("components", "hamiltonian", "free_rank") if k in raw}, "dedekind"))
    elif kind == "cyclic_extension":
        known |= {"base", "action", "top", "d0"}
        base = doc["base"] = _base(raw.get("base", {}), "base")
        action = raw.get("action", {})
        _need(isinstance(action, dict) and set(action) <= {"t", "sign", "q0"}, "action", "expected {t, sign, q0}")
        primes = _primes(base["components"]) | ({2} if base["hamiltonian"] else set())
        doc["action"] = {
            "q0": _q0(action.get("q0", "1"), "action.q0"),
            "sign": action.get("sign", 1),
            "t": _units(action.get("t", {}), primes, "action.t", prec),
        }
        _need(doc["action"]["sign"] in (1, -1), "action.sign", "expected 1 or -1")
        top = raw.get("top", "inf")
        doc["top"] = top if top == "inf" else _int(top, "top", 1)
        d0 = raw.get("d0")
        if d0 is not None:
            _need(doc["top"] != "inf", "d0", "an infinite top takes no cocycle")
            _need(isinstance(d0, dict) and set(d0) <= {"q", "coords"}, "d0", "expected {q, coords}")
            q = d0.get("q", "1")
            _need(q in Q8_INDEX, "d0.q", f"expected one of {Q8_NAMES}")
            d0 = {"coords": _coords(d0.get("coords", []), "d0.coords"), "q": q}
        doc["d0"] = d0
    elif kind == "thm32":
        known |= {"A", "d0", "Q"}
        doc["A"] = _components(raw.get("A", []), "A")
        doc["Q"] = _components(raw.get("Q", []), "Q", allow_quasi=False)
        doc["d0"] = _coords(raw.get("d0", [0] * len(doc["A"])), "d0")
        _need(len(doc["d0"]) == len(doc["A"]), "d0", f"expected {len(doc['A'])} coordinates, one per A component")
    elif kind == "thm36":
        known |= {"D", "t", "q0"}
        D = doc["D"] = _base(raw.get("D", {}), "D", free_ok=False)
        del D["free_rank"]
        primes = _primes(D["components"]) | ({2} if D["hamiltonian"] else set())
        doc["t"] = _units(raw.get("t", {}), primes, "t", prec)
        doc["q0"] = _q0(raw.get("q0", "1"), "q0")
    elif kind == "thm43":
        known |= {"free_rank", "torsion", "d0"}
        doc["free_rank"] = _int(raw.get("free_rank", 1), "free_rank", 0)
        doc["torsion"] = _components(raw.get("torsion", []), "torsion", allow_quasi=False)
        d0 = raw.get("d0")
        doc["d0"] = None if d0 is None else _coords(d0, "d0")

    unknown = set(raw) - known
    _need(not unknown, "document", f"unknown keys {sorted(unknown)}")
    if "precision" in raw:
        doc["precision"] = prec
    for key in ("level", "window", "cap"):
        if key in raw:
            doc[key] = _int(raw[key], key, 0 if key == "window" else 1)
    if "levels" in raw:
        lv = raw["levels"]
        _need(isinstance(lv, list) and len(lv) == 2, "levels", "expected [first, last]")
        doc["levels"] = [_int(lv[0], "levels[0]", 1), _int(lv[1], "levels[1]", 1)]
    if "probes" in raw:
        _need(isinstance(raw["probes"], list), "probes", "expected a list")
        doc["probes"] = [_probe(p, f"probes[{i}]") for i, p in enumerate(raw["probes"])]
    return doc


def _probe(v, path) -> dict:
    _need(isinstance(v, dict) and set(v) <= {"k", "coords", "q", "level"}, path, "expected {k, coords, q, level}")
    q = v.get("q", "1")
    _need(q in Q8_INDEX, f"{path}.q", f"expected one of {Q8_NAMES}")
    return {
        "coords": _coords(v.get("coords", []), f"{path}.coords"),
        "k": _int(v.get("k", 0), f"{path}.k"),
        "level": _int(v.get("level", 1), f"{path}.level", 1),
        "q": q,
    }


# building groups and families


def _quasi(components) -> QuasiSpec:
    return QuasiSpec(tuple((p, QUASI if e == "inf" else e) for p, e in components))


def _units_of(doc_t: dict) -> dict:
    return {int(p): make_unit(int(p), t["precision"], t["value"]) for p, t in doc_t.items()}


@dataclass(frozen=True)
class ExtensionSpec:
    """Level-indexed ``<g> x| D``; quasicyclic base components grow with the level."""

    base: DedekindSpec
    free_rank: int
    units: tuple
    q0: int
    sign: int
    top: int | None
    d0: tuple | None  # (q, spec coords with free coordinates first) at level 1

    def base_at(self, level: int, cap: int = DEFAULT_CAP) -> DedekindGroup:
        D = self.base.materialize(level, cap)
        if self.free_rank:
            return DedekindGroup(FgAbelian(self.free_rank, D.abelian.torsion))
        return D

    def _base_element(self, q, coords, ref: int, level: int) -> tuple:
        free, tors = tuple(coords[: self.free_rank]), coords[self.free_rank:]
        d = self.base.embed_to(self.base.element_at(q, tors, ref), ref, level)
        return (d[0], free + d[1])

    def materialize(self, level: int, cap: int = DEFAULT_CAP) -> CyclicExtension:
        B = self.base_at(level, cap)
        if self.free_rank:
            phi = power_aut(B, sign=self.sign)
        else:
            units = dict(self.units)
            for p in B.primes():
                units.setdefault(p, make_unit(p, max(1, self.base.exponent_at(p, level)), 1))
            phi = power_aut(B, units, q0=self.q0)
            phi.order()
        d0 = None
        if self.top is not None and self.d0 is not None:
            d0 = self._base_element(self.d0[0], self.d0[1], 1, level)
        return CyclicExtension(B, phi, self.top, d0 if self.top is not None else None, cap=cap)

    def element_at(self, probe: Probe, level: int) -> tuple:
        d = self._base_element(probe.q, probe.coords, probe.level, level)
        return self.materialize(level).element(probe.k, d) if self.top else (probe.k, d)

    def probe(self, x, level: int) -> Probe:
        k, (q, coords) = x
        free, tors = coords[: self.free_rank], coords[self.free_rank:]
        return Probe(k, tuple(free) + self.base.abelian.spec_coords(tors, level), q, level)


def family(spec: GroupSpecFile):
    """The level-indexed object behind a spec: something with ``materialize(level, cap)``."""
    doc = spec.data
    kind = spec.kind
    if kind == "finite_abelian":
        return _DedekindFamily(DedekindSpec(_quasi(doc["components"])), 0)
    if kind == "dedekind":
        return _DedekindFamily(DedekindSpec(_quasi(doc["components"]), doc["hamiltonian"]), doc["free_rank"])
    if kind == "cyclic_extension":
        b = doc["base"]
        action = doc["action"]
        d0 = doc["d0"]
        return ExtensionSpec(
            DedekindSpec(_quasi(b["components"]), b["hamiltonian"]),
            b["free_rank"],
            tuple(sorted(_units_of(action["t"]).items())),
            Q8_INDEX[action["q0"]],
            action["sign"],
            None if doc["top"] == "inf" else doc["top"],
            None if d0 is None else (Q8_INDEX[d0["q"]], tuple(d0["coords"])),
        )
    return classify(spec).spec


@dataclass(frozen=True)
class _DedekindFamily:
    spec: DedekindSpec
    free_rank: int

    def materialize(self, level: int, cap: int = DEFAULT_CAP) -> DedekindGroup:
        D = self.spec.materialize(level, cap)
        if self.free_rank:
            return DedekindGroup(FgAbelian(self.free_rank, D.abelian.torsion))
        return D


def classify(spec: GroupSpecFile):
    doc = spec.data
    if spec.kind == "thm32":
        return classify_thm32(_quasi(doc["A"]), doc["d0"], FinAbelian(tuple(map(tuple, doc["Q"]))))
    if spec.kind == "thm36":
        D = DedekindSpec(_quasi(doc["D"]["components"]), doc["D"]["hamiltonian"])
        return classify_thm36(D, _units_of(doc["t"]), Q8_INDEX[doc["q0"]])
    if spec.kind == "thm43":
        A = FgAbelian(doc["free_rank"], FinAbelian(tuple(map(tuple, doc["torsion"]))))
        return classify_thm43(A, doc["d0"])
    raise SpecInvalid(f"kind {spec.kind!r} is not a classified family")


def probes(spec: GroupSpecFile) -> list:
    return [Probe(p["k"], tuple(p["coords"]), Q8_INDEX[p["q"]], p["level"]) for p in spec.get("probes", [])]


# element strings: g^k*(c1,...,cn), g^k, (c1,...), (i;c1,...)

_ELEMENT = re.compile(
    r"""^\s*(?:g(?:\^(?P<k>[+-]?\d+))?)?\s*\*?\s*
        (?:\(\s*(?:(?P<q>-?[1ijk])\s*;)?\s*(?P<coords>[-+\d,\s]*)\)|d\((?P<dcoords>[-+\d,\s]*)\))?\s*$""",
    re.VERBOSE,
)


def parse_element(text: str) -> tuple:
    """``(k, q, coords)`` from an element string; coordinates in the printed (level) order."""
    m = _ELEMENT.match(text)
    if not m or not text.strip():
        raise SpecInvalid(f"cannot parse element {text!r}; expected e.g. g^1*(0,2) or (i;1)")
    has_g = text.strip().startswith("g")
    k = int(m["k"]) if m["k"] is not None else (1 if has_g else 0)
    body = m["coords"] if m["coords"] is not None else (m["dcoords"] or "")
    coords = tuple(int(c) for c in body.replace(" ", "").split(",") if c)
    q = Q8_INDEX[m["q"]] if m["q"] else 0
    return k, q, coords


def element_in(G, text: str) -> tuple:
    """Parse ``text`` as an element of G (a group built from a spec)."""
    k, q, coords = parse_element(text)
    if isinstance(G, CyclicExtension):
        B = G.base
        if not coords:
            coords = B.abelian.identity
        _need(len(coords) == len(B.abelian.moduli), "element",
              f"expected {len(B.abelian.moduli)} coordinates, got {len(coords)}")
        return G.element(k, B.element(q, *coords))
    _need(k == 0, "element", "this group has no g")
    if not coords:
        coords = G.abelian.identity
    _need(len(coords) == len(G.abelian.moduli), "element",
          f"expected {len(G.abelian.moduli)} coordinates, got {len(coords)}")
    return G.element(q, *coords)
