"""JSON documents describing toric Kato data and fans.

A data document looks like::

    {
      "format": "torickato/1",
      "dim": 3,
      "modification": {"type": "star_script",
                       "rays": [[1, 1, 1], [1, 2, 1]],
                       "removals": [{"ray": [2, 3, 3], "restore": [[1, 2, 1], [1, 1, 2]]}]},
      "tau_A": {"columns": [[1, 0, 0], [1, 2, 1], [1, 1, 1]]},
      "ell": [["0", "1"], ["1/2", "1"], ["0", "1"]]
    }

``modification`` may instead be ``{"type": "explicit", "rays": [...],
"max_cones": [[0, 1, 2], ...]}``.  ``tau_A`` is one of ``{"columns": ...}``,
``{"indices": ...}`` (into the explicit ray list, or into e_1..e_n followed by
the script rays) or ``{"A": matrix}``.  Log-parameters are exact rational
strings; approximate floats are only accepted under ``ell_lossy``.

A fan document has ``"kind": "fan"`` with ``rays`` and ``max_cones``.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from importlib import resources
from typing import Any, Union

from . import linalg as la
from .fans import Cone, Fan, orthant_fan, remove_ray, standard_basis, star_subdivide
from .kato import GaussQ, KatoData, validate_kato_data

FORMAT = "torickato/1"


class DocumentError(ValueError):
    """Malformed document; ``field`` names the offending JSON path."""

    def __init__(self, message: str, field: str = "", line: int = 0):
        self.field = field
        self.line = line
        where = f" (line {line})" if line else ""
        where += f" at '{field}'" if field else ""
        super().__init__(f"{message}{where}")


def _load(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"syntax error: {e.msg}", line=e.lineno) from None
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    fmt = doc.get("format", FORMAT)
    if fmt != FORMAT:
        raise DocumentError(f"unsupported format {fmt!r}", "format")
    return doc


def _require(doc: dict, key: str, path: str = "") -> Any:
    if key not in doc:
        raise DocumentError("missing field", f"{path}{key}")
    return doc[key]


def _int_vector(v, n: int, field: str) -> tuple[int, ...]:
    if not isinstance(v, list) or len(v) != n or not all(isinstance(x, int) and not isinstance(x, bool)
                                                         for x in v):
        raise DocumentError(f"expected a list of {n} integers", field)
    return tuple(v)


def _int_vectors(vs, n: int, field: str) -> list[tuple[int, ...]]:
    if not isinstance(vs, list):
        raise DocumentError("expected a list", field)
    return [_int_vector(v, n, f"{field}[{i}]") for i, v in enumerate(vs)]


def _rational(s, field: str) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise DocumentError("expected a rational string such as \"-3/4\"", field)
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise DocumentError(f"bad rational {s!r}", field) from None


def _parse_ell(doc: dict, n: int):
    if "ell" in doc and "ell_lossy" in doc:
        raise DocumentError("give either ell or ell_lossy, not both", "ell_lossy")
    if "ell" in doc:
        raw, exact = doc["ell"], True
    elif "ell_lossy" in doc:
        raw, exact = doc["ell_lossy"], False
    else:
        return None, True
    key = "ell" if exact else "ell_lossy"
    if not isinstance(raw, list) or len(raw) != n:
        raise DocumentError(f"expected {n} entries", key)
    out = []
    for i, z in enumerate(raw):
        if not isinstance(z, list) or len(z) != 2:
            raise DocumentError("expected [re, im]", f"{key}[{i}]")
        if exact:
            out.append(GaussQ(_rational(z[0], f"ell[{i}][0]"), _rational(z[1], f"ell[{i}][1]")))
        else:
            if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in z):
                raise DocumentError("expected numbers", f"ell_lossy[{i}]")
            out.append(GaussQ(Fraction(repr(float(z[0]))), Fraction(repr(float(z[1])))))
    return tuple(out), exact


def _explicit_fan(m: dict, n: int, path: str) -> tuple[Fan, list]:
    rays = _int_vectors(_require(m, "rays", path), n, f"{path}rays")
    cones = _require(m, "max_cones", path)
    if not isinstance(cones, list):
        raise DocumentError("expected a list of index lists", f"{path}max_cones")
    out = []
    for i, idx in enumerate(cones):
        f = f"{path}max_cones[{i}]"
        if not isinstance(idx, list) or not all(isinstance(j, int) and 0 <= j < len(rays) for j in idx):
            raise DocumentError("expected indices into rays", f)
        try:
            out.append(Cone.of([rays[j] for j in idx], n))
        except ValueError as e:
            raise DocumentError(str(e), f) from None
    return Fan.from_cones(out, n), rays


def _script_fan(m: dict, n: int) -> tuple[Fan, list]:
    rays = _int_vectors(_require(m, "rays", "modification."), n, "modification.rays")
    F = orthant_fan(n)
    for i, v in enumerate(rays):
        try:
            F = star_subdivide(F, v)
        except ValueError as e:
            raise DocumentError(str(e), f"modification.rays[{i}]") from None
    for i, rem in enumerate(m.get("removals", [])):
        f = f"modification.removals[{i}]"
        if isinstance(rem, list):
            rem = {"ray": rem}
        if not isinstance(rem, dict):
            raise DocumentError("expected a ray or {ray, restore}", f)
        v = _int_vector(_require(rem, "ray", f + "."), n, f + ".ray")
        restore = rem.get("restore")
        if restore is not None:
            restore = _int_vectors(restore, n, f + ".restore")
        try:
            F = remove_ray(F, v, restore)
        except ValueError as e:
            raise DocumentError(str(e), f) from None
    return F, standard_basis(n) + rays


def _dim(doc: dict) -> int:
    n = _require(doc, "dim")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DocumentError("dim must be a positive integer", "dim")
    return n


def parse_fan(text: str) -> Fan:
    doc = _load(text)
    if doc.get("kind") != "fan":
        raise DocumentError("not a fan document", "kind")
    return _explicit_fan(doc, _dim(doc), "")[0]


def parse(text: str, validate: bool = True) -> KatoData:
    doc = _load(text)
    if doc.get("kind", "kato") != "kato":
        raise DocumentError("not a Kato data document", "kind")
    n = _dim(doc)
    m = _require(doc, "modification")
    if not isinstance(m, dict):
        raise DocumentError("expected an object", "modification")
    typ = m.get("type")
    if typ == "star_script":
        fan, rays = _script_fan(m, n)
    elif typ == "explicit":
        fan, rays = _explicit_fan(m, n, "modification.")
    else:
        raise DocumentError("type must be star_script or explicit", "modification.type")
    tau = _require(doc, "tau_A")
    if isinstance(tau, list):
        tau = {"indices": tau}
    if not isinstance(tau, dict) or len(tau) != 1:
        raise DocumentError("expected one of columns, indices, A", "tau_A")
    if "columns" in tau:
        cols = _int_vectors(tau["columns"], n, "tau_A.columns")
        if len(cols) != n:
            raise DocumentError(f"expected {n} columns", "tau_A.columns")
        A = la.from_columns(cols)
    elif "indices" in tau:
        idx = tau["indices"]
        if not isinstance(idx, list) or len(idx) != n or not all(
                isinstance(j, int) and 0 <= j < len(rays) for j in idx):
            raise DocumentError(f"expected {n} indices into the ray list", "tau_A.indices")
        A = la.from_columns([rays[j] for j in idx])
    elif "A" in tau:
        A = tuple(_int_vectors(tau["A"], n, "tau_A.A"))
        if len(A) != n:
            raise DocumentError(f"expected {n} rows", "tau_A.A")
    else:
        raise DocumentError("expected one of columns, indices, A", "tau_A")
    ell, exact = _parse_ell(doc, n)
    d = KatoData(fan, tuple(tuple(r) for r in A), ell, exact)
    if validate:
        rep = validate_kato_data(d)
        if not rep.valid:
            raise DocumentError("invalid Kato data: " + "; ".join(rep.errors))
    return d


def _fan_fields(F: Fan) -> dict:
    rays = list(F.rays)
    pos = {r: i for i, r in enumerate(rays)}
    cones = sorted(sorted(pos[g] for g in c.generators) for c in F.maximal_cones)
    return {"rays": [list(r) for r in rays], "max_cones": cones}


def to_dict(d: KatoData) -> dict:
    out = {"format": FORMAT, "kind": "kato", "dim": d.n,
           "modification": {"type": "explicit", **_fan_fields(d.fan)},
           "tau_A": {"columns": [list(c) for c in la.columns(d.A)]}}
    if d.ell is not None:
        if d.ell_exact:
            out["ell"] = [[str(z.re), str(z.im)] for z in d.ell]
        else:
            out["ell_lossy"] = [[float(z.re), float(z.im)] for z in d.ell]
    return out


def fan_to_dict(F: Fan) -> dict:
    return {"format": FORMAT, "kind": "fan", "dim": F.ambient_dim, **_fan_fields(F)}


_INNER = re.compile(r"\[\s+([^\[\]{}]*?)\s+\]")


def _dump(obj: dict) -> str:
    # innermost lists on one line keep documents diffable
    text = json.dumps(obj, indent=2, ensure_ascii=False)
    text = _INNER.sub(lambda m: "[" + ", ".join(x.strip() for x in m.group(1).split(",")) + "]", text)
    return text + "\n"


def serialize(obj: Union[KatoData, Fan]) -> str:
    return _dump(fan_to_dict(obj) if isinstance(obj, Fan) else to_dict(obj))


def load(text: str) -> Union[KatoData, Fan]:
    """Parse either kind of document."""
    doc = _load(text)
    return parse_fan(text) if doc.get("kind") == "fan" else parse(text)


def fixture_names() -> list[str]:
    root = resources.files("torickato") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def fixture_text(name: str) -> str:
    p = resources.files("torickato") / "fixtures" / f"{name}.json"
    if not p.is_file():
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(fixture_names())}")
    return p.read_text(encoding="utf-8")


def load_fixture(name: str) -> Union[KatoData, Fan]:
    return load(fixture_text(name))
