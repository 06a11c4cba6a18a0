"""Versioned JSON document carrying a complex with its weights, chains and subcomplexes."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Union

from .complex import Chain, ComplexError, Subcomplex, WeightAssignment, build_complex
from .gadgets import GadgetInstance

FORMAT = "optchain-complex"
VERSION = 1


def _rat_out(v) -> Union[int, str]:
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _rat_in(v) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise ComplexError(f"rational must be an integer or a 'p/q' string, got {v!r}")
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError):
        raise ComplexError(f"bad rational {v!r}") from None


def _jsonable(v):
    if isinstance(v, Fraction):
        return _rat_out(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def to_document(inst: GadgetInstance) -> Dict[str, Any]:
    X = inst.complex
    lab = X.vertex_labels
    simp = lambda s: [lab[v] for v in s]
    doc: Dict[str, Any] = {
        "format": FORMAT,
        "version": VERSION,
        "dimension": X.dim,
        "simplices": {str(n): [simp(s) for s in X.simplices[n]] for n in range(X.dim + 1)},
    }
    if X.coordinates is not None:
        doc["coordinates"] = {str(lab[v]): [_rat_out(x) for x in p] for v, p in enumerate(X.coordinates)}
    if inst.weights:
        doc["weights"] = {str(n): [_rat_out(x) for x in w.weights] for n, w in sorted(inst.weights.items())}
    if inst.chains:
        doc["chains"] = {
            name: {
                "dim": c.dim,
                "coefficients": [[simp(X.simplex(c.dim, i)), _rat_out(v)] for i, v in sorted(c.coefficients.items())],
            }
            for name, c in inst.chains.items()
        }
    if inst.subcomplexes:
        doc["subcomplexes"] = {
            name: [simp(X.simplex(n, i)) for n in range(len(A.members)) for i in sorted(A.members[n])]
            for name, A in inst.subcomplexes.items()
        }
    if inst.threshold is not None:
        doc["threshold"] = _rat_out(inst.threshold)
    if inst.metadata:
        doc["metadata"] = _jsonable(inst.metadata)
    return doc


def from_document(doc: Dict[str, Any]) -> GadgetInstance:
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise ComplexError(f"not an {FORMAT} document")
    if doc.get("version") != VERSION:
        raise ComplexError(f"unsupported document version {doc.get('version')!r}")
    raw = doc.get("simplices")
    if not isinstance(raw, dict) or not raw:
        raise ComplexError("document has no simplices")
    tops = [tuple(s) for n in sorted(raw, key=int) for s in raw[n]]
    for s in tops:
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in s):
            raise ComplexError(f"simplex {list(s)} must list integer vertices")
    # faces may be listed alongside their cofaces; keep each simplex once
    uniq = list(dict.fromkeys(tuple(sorted(s)) for s in tops))
    coords = None
    if "coordinates" in doc:
        c = doc["coordinates"]
        try:
            coords = {int(k): [_rat_in(x) for x in p] for k, p in c.items()}
        except (AttributeError, ValueError):
            raise ComplexError("coordinates must map vertex labels to points") from None
    try:
        X = build_complex(uniq, coords)
    except KeyError as exc:
        raise ComplexError(f"vertex {exc} has no coordinates") from None
    listed = {tuple(sorted(s)) for s in tops}
    relabel = {v: i for i, v in enumerate(X.vertex_labels)}
    for s in listed:
        if tuple(relabel[v] for v in s) not in X:
            raise ComplexError(f"simplex {list(s)} is missing from the closure")
    if "dimension" in doc and doc["dimension"] != X.dim:
        raise ComplexError(f"declared dimension {doc['dimension']} but simplices span {X.dim}")

    def resolve(s, where):
        try:
            return tuple(relabel[v] for v in s)
        except (KeyError, TypeError):
            raise ComplexError(f"{where}: unknown vertex in {s!r}") from None

    weights = {}
    for n, ws in doc.get("weights", {}).items():
        n = int(n)
        if not 0 <= n <= X.dim or len(ws) != X.count(n):
            raise ComplexError(f"weights for dimension {n} must list {X.count(n) if 0 <= n <= X.dim else 0} values")
        try:
            weights[n] = WeightAssignment(n, tuple(_rat_in(x) for x in ws))
        except ValueError as exc:
            raise ComplexError(f"weights for dimension {n}: {exc}") from None
    chains = {}
    for name, ch in doc.get("chains", {}).items():
        dim = ch.get("dim") if isinstance(ch, dict) else None
        if not isinstance(dim, int) or isinstance(dim, bool) or not 0 <= dim <= X.dim:
            raise ComplexError(f"chain {name!r} needs a dimension between 0 and {X.dim}")
        terms = []
        for s, v in ch.get("coefficients", []):
            s = resolve(s, f"chain {name!r}")
            if len(s) != dim + 1 or s not in X:
                raise ComplexError(f"chain {name!r}: {list(s)} is not a {dim}-simplex of the complex")
            terms.append((s, _rat_in(v)))
        chains[name] = Chain.from_simplices(X, terms) if terms else Chain(dim, {})
    subs = {}
    for name, ss in doc.get("subcomplexes", {}).items():
        members = [resolve(s, f"subcomplex {name!r}") for s in ss]
        for s in members:
            if s not in X:
                raise ComplexError(f"subcomplex {name!r}: {list(s)} is not a simplex of the complex")
        subs[name] = Subcomplex.from_simplices(X, members)
    thr = _rat_in(doc["threshold"]) if "threshold" in doc else None
    return GadgetInstance(X, weights, chains, subs, thr, dict(doc.get("metadata", {})))


def dumps(inst: GadgetInstance) -> str:
    return json.dumps(to_document(inst), indent=1, sort_keys=False) + "\n"


def loads(text: str) -> GadgetInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexError(f"invalid JSON: {exc}") from None
    return from_document(doc)


def save(inst: GadgetInstance, path) -> None:
    Path(path).write_text(dumps(inst))


def load(path) -> GadgetInstance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ComplexError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)
