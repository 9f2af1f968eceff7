"""JSON documents of named sets, maps, complexes, chain maps and staircases.

Wire format (version "1")::

    {"version": "1",
     "sets": {name: [token, ...]},
     "maps": {name: {"dom": set, "cod": set, "assign": {token: token}}},
     "complexes": {name: {"window": [lo, hi], "degrees": {i: set},
                          "images": {i: set}, "diff": {i: map}}},
     "chain_maps": {name: {"kind": "m" | "e", "src": complex, "dst": complex,
                           "f": {i: map}, "fbar": {i: map}}},
     "staircases": {name: {"row": [map, ...]}}}

Every section is optional.  Saving writes keys sorted and token lists
sorted; staircase rows and windows keep their order.
"""

import json
from dataclasses import dataclass, field

from .errors import EcgwError, ParseError, ValidationError
from .extcat import FinSetObj, SetFun, sort_tokens

VERSION = "1"
SECTIONS = ("sets", "maps", "complexes", "chain_maps", "staircases")


@dataclass
class Document:
    """A parsed document: the canonical raw data and the built objects."""

    raw: dict
    sets: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    complexes: dict = field(default_factory=dict)
    chain_maps: dict = field(default_factory=dict)
    staircases: dict = field(default_factory=dict)

    def get(self, section, name):
        table = getattr(self, section)
        if name not in table:
            raise ValidationError(f"{section}.{name}", "no such entry")
        return table[name]


def canonical(raw):
    """Canonical text of a raw document."""
    return json.dumps(_normalize(raw), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _normalize(raw):
    out = {"version": raw.get("version", VERSION)}
    for sec in SECTIONS:
        if sec in raw:
            out[sec] = raw[sec]
    if "sets" in out:
        out["sets"] = {k: sort_tokens(v) for k, v in out["sets"].items()}
    return out


def _expect(cond, loc, msg):
    if not cond:
        raise ValidationError(loc, msg)


def _degree_table(table, loc):
    _expect(isinstance(table, dict), loc, "expected an object keyed by degree")
    out = {}
    for k, v in table.items():
        try:
            out[int(k)] = v
        except ValueError:
            raise ValidationError(f"{loc}[{k}]", "degree is not an integer") from None
    return out


def _index_loc(loc, exc):
    index = getattr(exc, "index", None)
    return f"{loc}[{index}]" if index is not None else loc


def parse(text):
    """Build a Document from JSON text."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ParseError("top level must be a JSON object")
    unknown = set(raw) - set(SECTIONS) - {"version"}
    if unknown:
        raise ParseError(f"unknown sections: {', '.join(sorted(unknown))}")
    if str(raw.get("version", VERSION)) != VERSION:
        raise ParseError(f"unsupported version {raw.get('version')!r}")
    for sec in SECTIONS:
        if not isinstance(raw.get(sec, {}), dict):
            raise ParseError(f"section {sec} must be an object")
    doc = Document(raw=_normalize(raw))
    _build(doc, raw)
    return doc


def _build(doc, raw):
    from .chain import ChainComplex, validate_map

    for name, tokens in raw.get("sets", {}).items():
        loc = f"sets.{name}"
        _expect(isinstance(tokens, list) and all(isinstance(t, str) for t in tokens), loc, "expected a list of strings")
        try:
            doc.sets[name] = FinSetObj(tokens)
        except ValueError as exc:
            raise ValidationError(loc, str(exc)) from None

    for name, spec in raw.get("maps", {}).items():
        loc = f"maps.{name}"
        _expect(isinstance(spec, dict) and {"dom", "cod", "assign"} <= set(spec), loc, "needs dom, cod and assign")
        dom, cod = doc.get("sets", spec["dom"]), doc.get("sets", spec["cod"])
        try:
            doc.maps[name] = SetFun(dom, cod, spec["assign"])
        except EcgwError as exc:
            raise ValidationError(loc, str(exc)) from None

    for name, spec in raw.get("complexes", {}).items():
        loc = f"complexes.{name}"
        _expect(isinstance(spec, dict) and "window" in spec, loc, "needs a window")
        window = spec["window"]
        _expect(isinstance(window, list) and len(window) == 2 and all(isinstance(x, int) for x in window), loc, "window must be [lo, hi]")
        degrees = {i: doc.get("sets", s) for i, s in _degree_table(spec.get("degrees", {}), loc + ".degrees").items()}
        images = {i: doc.get("sets", s) for i, s in _degree_table(spec.get("images", {}), loc + ".images").items()}
        diffs = {}
        for i, m in _degree_table(spec.get("diff", {}), loc + ".diff").items():
            f = doc.get("maps", m)
            diffs[i] = f.assignment
        try:
            doc.complexes[name] = ChainComplex(window, degrees, images, diffs)
        except EcgwError as exc:
            raise ValidationError(_index_loc(loc, exc), str(exc)) from None

    for name, spec in raw.get("chain_maps", {}).items():
        loc = f"chain_maps.{name}"
        _expect(isinstance(spec, dict) and {"kind", "src", "dst", "f"} <= set(spec), loc, "needs kind, src, dst and f")
        _expect(spec["kind"] in ("m", "e"), loc, "kind must be m or e")
        src, dst = doc.get("complexes", spec["src"]), doc.get("complexes", spec["dst"])
        f = {i: doc.get("maps", m).assignment for i, m in _degree_table(spec["f"], loc + ".f").items()}
        fbar = None
        if "fbar" in spec:
            fbar = {i: doc.get("maps", m).assignment for i, m in _degree_table(spec["fbar"], loc + ".fbar").items()}
        try:
            doc.chain_maps[name] = validate_map(spec["kind"], src, dst, f, fbar)
        except EcgwError as exc:
            raise ValidationError(_index_loc(loc, exc), str(exc)) from None

    for name, spec in raw.get("staircases", {}).items():
        loc = f"staircases.{name}"
        _expect(isinstance(spec, dict) and isinstance(spec.get("row"), list), loc, "needs a row of map names")
        doc.staircases[name] = [doc.get("maps", m) for m in spec["row"]]


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse(text)


def save(doc, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical(doc.raw))


def empty_document():
    return parse("{}")


__all__ = ["Document", "VERSION", "canonical", "empty_document", "load", "parse", "save"]
