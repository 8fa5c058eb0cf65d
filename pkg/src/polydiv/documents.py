"""JSON documents for pp-divisors, actions and downgrade inputs.

Every document carries ``"version": "ppdiv/1"`` and a ``"kind"``.  Rationals
are strings "p/q", quadratic elements "a+b*sqrt(d)".  Unknown fields are
rejected so that typos do not silently change the meaning of a file.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .base import INFINITY, BaseVariety, FinitePoint, Infinity, RationalFunction, RayDivisor, SemilinearBaseMap
from .convex import Cone, Empty, Quasifan, TailedPolyhedron
from .exactnum import QQ, Field, Poly, format_scalar, parse_scalar
from .galois import SemilinearAction
from .lattice import LatticeMorphism
from .ppdiv import Plurifunction, PolyhedralDivisor, PPDivMorphism
from .downgrade import DowngradeInput

VERSION = "ppdiv/1"
KINDS = ("ppdivisor", "morphism", "action", "downgrade-input")


class DocumentError(ValueError):
    def __init__(self, problems: list[str] | str):
        problems = [problems] if isinstance(problems, str) else problems
        super().__init__("; ".join(problems))
        self.problems = problems


def _fields(obj: dict, where: str, required: set, optional: set = frozenset()) -> None:
    if not isinstance(obj, dict):
        raise DocumentError(f"{where}: expected an object")
    missing = required - obj.keys()
    unknown = obj.keys() - required - optional
    problems = [f"{where}: missing field {k!r}" for k in sorted(missing)]
    problems += [f"{where}: unknown field {k!r}" for k in sorted(unknown)]
    if "version" in required and "version" in obj and obj["version"] != VERSION:
        problems.append(f"{where}: unsupported version {obj['version']!r}, expected {VERSION!r}")
    if problems:
        raise DocumentError(problems)


def _int_matrix(rows, where: str) -> list[list[int]]:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise DocumentError(f"{where}: expected a list of integer rows")
    for r in rows:
        for x in r:
            if not isinstance(x, int) or isinstance(x, bool):
                raise DocumentError(f"{where}: {x!r} is not an integer")
    return rows


def load_json(text: str, source: str = "<input>") -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise DocumentError(f"{source}: top level must be an object")
    if doc.get("version") != VERSION:
        raise DocumentError(f"{source}: version must be {VERSION!r}")
    if doc.get("kind") not in KINDS:
        raise DocumentError(f"{source}: kind must be one of {', '.join(KINDS)}")
    return doc


def _compact(x) -> bool:
    return isinstance(x, list) and all(not isinstance(y, (dict, list)) or _compact(y) for y in x)


def _render(x, indent: int) -> str:
    if _compact(x) or not isinstance(x, (dict, list)):
        return json.dumps(x, ensure_ascii=False, separators=(", ", ": "))
    pad = " " * (indent + 2)
    if isinstance(x, list):
        items = [pad + _render(y, indent + 2) for y in x]
        return "[\n" + ",\n".join(items) + "\n" + " " * indent + "]" if items else "[]"
    items = [pad + json.dumps(k) + ": " + _render(v, indent + 2) for k, v in x.items()]
    return "{\n" + ",\n".join(items) + "\n" + " " * indent + "}" if items else "{}"


def dumps(doc) -> str:
    """Stable JSON with short lists kept on one line."""
    return _render(doc, 0) + "\n"


# --- scalars, points, functions ----------------------------------------------------------

def _rat(x) -> str:
    return str(Fraction(x))


def _parse_rat(x, where: str) -> Fraction:
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if not isinstance(x, str):
        raise DocumentError(f"{where}: rationals are written as strings \"p/q\"")
    try:
        return Fraction(x)
    except ValueError as exc:
        raise DocumentError(f"{where}: cannot parse rational {x!r}") from exc


def _parse_scalar(x, fld: Field, where: str):
    try:
        return parse_scalar(x, fld)
    except ValueError as exc:
        raise DocumentError(f"{where}: {exc}") from exc


def _poly_doc(p: Poly) -> list[str]:
    return [format_scalar(c) for c in p.coeffs]


def _parse_poly(coeffs, fld: Field, where: str) -> Poly:
    if not isinstance(coeffs, list) or not coeffs:
        raise DocumentError(f"{where}: polynomial must be a nonempty coefficient list")
    return Poly([_parse_scalar(c, fld, where) for c in coeffs], fld)


def point_doc(P) -> Any:
    if isinstance(P, Infinity):
        return "inf"
    if isinstance(P, FinitePoint):
        return {"poly": _poly_doc(P.poly)}
    return {"ray": P.index}


def parse_point(x, base: BaseVariety, where: str, ray_index: dict | None = None):
    if x == "inf":
        return INFINITY
    if isinstance(x, dict) and set(x) == {"poly"}:
        try:
            return FinitePoint(_parse_poly(x["poly"], base.field, where))
        except ValueError as exc:
            raise DocumentError(f"{where}: {exc}") from exc
    if isinstance(x, dict) and set(x) == {"ray"}:
        i = x["ray"]
        if not isinstance(i, int) or (ray_index is not None and i not in ray_index):
            raise DocumentError(f"{where}: ray index {i!r} is out of range")
        return RayDivisor(ray_index[i] if ray_index is not None else i)
    raise DocumentError(f"{where}: divisor must be \"inf\", {{\"poly\": [...]}} or {{\"ray\": i}}")


def function_doc(f: RationalFunction) -> dict:
    return {
        "constant": format_scalar(f.constant),
        "factors": [{"poly": _poly_doc(p), "exp": e} for p, e in f.factors],
    }


def parse_function(x, fld: Field, where: str) -> RationalFunction:
    _fields(x, where, {"constant"}, {"factors"})
    const = _parse_scalar(x["constant"], fld, where)
    factors = []
    for i, fac in enumerate(x.get("factors", [])):
        _fields(fac, f"{where}.factors[{i}]", {"poly", "exp"})
        factors.append((_parse_poly(fac["poly"], fld, where), int(fac["exp"])))
    try:
        return RationalFunction(const, factors, fld)
    except ValueError as exc:
        raise DocumentError(f"{where}: {exc}") from exc


# --- cones, polyhedra, bases ---------------------------------------------------------------------

def cone_doc(c: Cone) -> list[list[int]]:
    return [list(g) for g in c.generators]


def parse_cone(x, rank: int, where: str) -> Cone:
    gens = _int_matrix(x, where)
    if any(len(g) != rank for g in gens):
        raise DocumentError(f"{where}: generators must have rank {rank}")
    return Cone.from_generators(gens, rank)


def polyhedron_doc(c) -> Any:
    if isinstance(c, Empty):
        return "empty"
    return {"vertices": [[_rat(x) for x in v] for v in c.vertices], "tail": cone_doc(c.tail)}


def parse_polyhedron(x, rank: int, tail: Cone, where: str):
    if x == "empty":
        return Empty(rank, tail)
    _fields(x, where, {"vertices"}, {"tail"})
    verts = x["vertices"]
    if not isinstance(verts, list) or not verts:
        raise DocumentError(f"{where}: vertices must be a nonempty list")
    pts = []
    for v in verts:
        if not isinstance(v, list) or len(v) != rank:
            raise DocumentError(f"{where}: vertex {v!r} must have {rank} coordinates")
        pts.append([_parse_rat(c, where) for c in v])
    own_tail = parse_cone(x["tail"], rank, f"{where}.tail") if "tail" in x else tail
    if not own_tail.is_pointed():
        raise DocumentError(f"{where}: coefficient tail cone is not pointed")
    return TailedPolyhedron(pts, own_tail, rank)


def fan_doc(fan: Quasifan, rays) -> dict:
    index = {r: i for i, r in enumerate(rays)}
    cones = []
    for c in fan.maximal:
        cones.append(sorted(index[r] for r in c.rays))
    return {"rays": [list(r) for r in rays], "cones": sorted(cones)}


def parse_fan(x, where: str) -> tuple[Quasifan, list]:
    _fields(x, where, {"rays", "cones"})
    rays = [tuple(r) for r in _int_matrix(x["rays"], f"{where}.rays")]
    if not rays:
        return Quasifan(0, (Cone.zero(0),)), []
    rank = len(rays[0])
    cones = []
    for c in x["cones"]:
        if not isinstance(c, list) or any(not isinstance(i, int) or not 0 <= i < len(rays) for i in c):
            raise DocumentError(f"{where}.cones: {c!r} is not a list of ray indices")
        cones.append(Cone.from_generators([rays[i] for i in c], rank))
    return Quasifan(rank, tuple(cones)), rays


def base_doc(Y: BaseVariety) -> dict:
    out: dict = {"kind": Y.kind, "field": str(Y.field)}
    if Y.kind == "toric":
        out["fan"] = fan_doc(Y.fan, Y.rays)
    if Y.removed:
        out["removed"] = [point_doc(p) for p in Y.removed]
    return out


def parse_base(x, where: str) -> tuple[BaseVariety, dict | None]:
    _fields(x, where, {"kind", "field"}, {"fan", "removed"})
    try:
        fld = Field.parse(x["field"])
    except ValueError as exc:
        raise DocumentError(f"{where}.field: {exc}") from exc
    kind = x["kind"]
    if kind not in ("P1", "A1", "toric"):
        raise DocumentError(f"{where}.kind: must be P1, A1 or toric")
    ray_index = None
    if kind == "toric":
        if "fan" not in x:
            raise DocumentError(f"{where}: toric bases need a fan")
        fan, rays = parse_fan(x["fan"], f"{where}.fan")
        try:
            Y = BaseVariety("toric", fld, fan)
        except ValueError as exc:
            raise DocumentError(f"{where}: {exc}") from exc
        ray_index = {i: Y.rays.index(r) for i, r in enumerate(rays) if r in Y.rays}
    else:
        if "fan" in x:
            raise DocumentError(f"{where}: only toric bases carry a fan")
        Y = BaseVariety(kind, fld)
    if "removed" in x:
        Y = Y.remove(parse_point(p, Y, f"{where}.removed", ray_index) for p in x["removed"])
    return Y, ray_index


# --- pp-divisors ---------------------------------------------------------------------------------

def ppdiv_doc(D: PolyhedralDivisor, notes: str | None = None) -> dict:
    doc: dict = {"version": VERSION, "kind": "ppdivisor"}
    if notes:
        doc["notes"] = notes
    if D.interpretation:
        doc["interpretation"] = D.interpretation
    if D.proper_by_construction:
        doc["proper_by_construction"] = True
    doc["lattice_rank"] = D.lattice_rank
    doc["tail"] = cone_doc(D.tail)
    doc["base"] = base_doc(D.base)
    doc["entries"] = [{"divisor": point_doc(P), "polyhedron": polyhedron_doc(c)} for P, c in D.entries.items()]
    return doc


def parse_ppdiv(doc: dict, where: str = "ppdivisor") -> PolyhedralDivisor:
    _fields(
        doc,
        where,
        {"version", "kind", "lattice_rank", "tail", "base", "entries"},
        {"notes", "interpretation", "proper_by_construction"},
    )
    if doc["kind"] != "ppdivisor":
        raise DocumentError(f"{where}: expected kind 'ppdivisor', got {doc['kind']!r}")
    rank = doc["lattice_rank"]
    if not isinstance(rank, int) or rank < 0:
        raise DocumentError(f"{where}.lattice_rank: must be a nonnegative integer")
    tail = parse_cone(doc["tail"], rank, f"{where}.tail")
    base, ray_index = parse_base(doc["base"], f"{where}.base")
    entries = []
    problems = []
    for i, e in enumerate(doc["entries"]):
        w = f"{where}.entries[{i}]"
        try:
            _fields(e, w, {"divisor", "polyhedron"})
            P = parse_point(e["divisor"], base, f"{w}.divisor", ray_index)
            c = parse_polyhedron(e["polyhedron"], rank, tail, f"{w}.polyhedron")
            entries.append((P, c))
        except DocumentError as exc:
            problems += exc.problems
        except ValueError as exc:
            problems.append(f"{w}: {exc}")
    if problems:
        raise DocumentError(problems)
    from .ppdiv import InvalidPPDivisor

    try:
        return PolyhedralDivisor(
            tail, base, entries, bool(doc.get("proper_by_construction", False)), doc.get("interpretation")
        )
    except InvalidPPDivisor as exc:
        raise DocumentError([f"{where}: {p}" for p in exc.problems]) from exc


# --- morphisms and actions ------------------------------------------------------------------------

def pluri_doc(f: Plurifunction) -> list:
    return [{"vector": list(v), "function": function_doc(g)} for v, g in f.terms]


def parse_pluri(x, rank: int, fld: Field, where: str) -> Plurifunction:
    if not isinstance(x, list):
        raise DocumentError(f"{where}: plurifunction must be a list of terms")
    terms = []
    for i, t in enumerate(x):
        w = f"{where}[{i}]"
        _fields(t, w, {"vector", "function"})
        v = t["vector"]
        if not isinstance(v, list) or len(v) != rank or any(not isinstance(a, int) for a in v):
            raise DocumentError(f"{w}.vector: must be {rank} integers")
        terms.append((tuple(v), parse_function(t["function"], fld, f"{w}.function")))
    return Plurifunction(rank, terms)


def map_doc(psi: SemilinearBaseMap) -> dict:
    if psi.is_moebius:
        return {
            "moebius": [[format_scalar(x) for x in row] for row in psi.matrix],
            "twist": "conj" if psi.twist else "none",
        }
    return {"forms": {"G": _poly_doc(psi.G), "H": _poly_doc(psi.H), "degree": psi.e}, "twist": "none"}


def parse_map(x: dict, fld: Field, kind: str, where: str) -> SemilinearBaseMap:
    twist = x.get("twist", "none")
    if twist not in ("conj", "none"):
        raise DocumentError(f"{where}.twist: must be 'conj' or 'none'")
    if twist == "conj" and fld.is_rational:
        raise DocumentError(f"{where}: a conjugation twist needs a quadratic field")
    try:
        if "moebius" in x:
            rows = x["moebius"]
            if not isinstance(rows, list) or len(rows) != 2 or any(not isinstance(r, list) or len(r) != 2 for r in rows):
                raise DocumentError(f"{where}.moebius: must be a 2x2 matrix")
            mat = tuple(tuple(_parse_scalar(c, fld, where) for c in r) for r in rows)
            return SemilinearBaseMap.moebius(mat, twist == "conj", fld, kind)
        if "forms" in x:
            fm = x["forms"]
            _fields(fm, f"{where}.forms", {"G", "H", "degree"})
            G = _parse_poly(fm["G"], fld, where)
            H = _parse_poly(fm["H"], fld, where)
            return SemilinearBaseMap(G, H, int(fm["degree"]), twist == "conj", fld, kind)
    except DocumentError:
        raise
    except ValueError as exc:
        raise DocumentError(f"{where}: {exc}") from exc
    raise DocumentError(f"{where}: base map needs 'moebius' or 'forms'")


def morphism_doc(t: PPDivMorphism) -> dict:
    out = map_doc(t.psi)
    out["F"] = t.F.rows()
    out["plurifunction"] = pluri_doc(t.f)
    return out


def parse_morphism_body(x: dict, fld: Field, kind: str, rank: int, where: str) -> PPDivMorphism:
    _fields(x, where, {"F"}, {"moebius", "forms", "twist", "plurifunction"})
    rows = _int_matrix(x["F"], f"{where}.F")
    if len(rows) != rank or any(len(r) != rank for r in rows):
        raise DocumentError(f"{where}.F: must be a {rank}x{rank} integer matrix")
    F = LatticeMorphism(tuple(tuple(r) for r in rows), rank, rank)
    psi = parse_map(x, fld, kind, where)
    f = parse_pluri(x.get("plurifunction", []), rank, fld, f"{where}.plurifunction")
    return PPDivMorphism(psi, F, f)


def action_doc(a: SemilinearAction, d: int | None) -> dict:
    doc: dict = {"version": VERSION, "kind": "action", "group": a.group}
    if d is not None:
        doc["d"] = d
    if a.generator is not None:
        doc["generator"] = morphism_doc(a.generator)
    return doc


def parse_action(doc: dict, D: PolyhedralDivisor, where: str = "action") -> tuple[PolyhedralDivisor, SemilinearAction]:
    """The action together with the pp-divisor it acts on.

    A pp-divisor over Q is base changed to Q(sqrt d) when the action names d.
    """
    from .ppdiv import base_change

    _fields(doc, where, {"version", "kind"}, {"notes", "d", "group", "generator"})
    if doc["kind"] != "action":
        raise DocumentError(f"{where}: expected kind 'action', got {doc['kind']!r}")
    group = doc.get("group", "Z/2")
    if group not in ("trivial", "Z/2"):
        raise DocumentError(f"{where}.group: must be 'trivial' or 'Z/2'")
    if "d" in doc:
        d = doc["d"]
        if not isinstance(d, int) or isinstance(d, bool):
            raise DocumentError(f"{where}.d: must be an integer")
        if D.base.field.is_rational:
            try:
                D = base_change(D, d)
            except ValueError as exc:
                raise DocumentError(f"{where}.d: {exc}") from exc
        elif D.base.field.d != d:
            raise DocumentError(f"{where}.d: action is over Q(sqrt {d}) but the pp-divisor is over {D.base.field}")
    if group == "trivial" and "generator" not in doc:
        return D, SemilinearAction.trivial()
    if "generator" not in doc:
        raise DocumentError(f"{where}: a Z/2 action needs a generator")
    g = parse_morphism_body(doc["generator"], D.base.field, D.base.kind, D.lattice_rank, f"{where}.generator")
    try:
        return D, SemilinearAction(group, g)
    except ValueError as exc:
        raise DocumentError(f"{where}: {exc}") from exc


def parse_morphism(doc: dict, D: PolyhedralDivisor, where: str = "morphism") -> PPDivMorphism:
    _fields(doc, where, {"version", "kind", "F"}, {"notes", "moebius", "forms", "twist", "plurifunction", "d"})
    body = {k: v for k, v in doc.items() if k not in ("version", "kind", "notes", "d")}
    return parse_morphism_body(body, D.base.field, D.base.kind, D.lattice_rank, where)


# --- downgrade input --------------------------------------------------------------------------------

def parse_downgrade_input(doc: dict, where: str = "downgrade-input") -> DowngradeInput:
    _fields(doc, where, {"version", "kind", "sigma", "F"}, {"notes", "P", "s"})
    sigma_rows = _int_matrix(doc["sigma"], f"{where}.sigma")
    if not sigma_rows:
        raise DocumentError(f"{where}.sigma: needs generators")
    n = len(sigma_rows[0])
    sigma = parse_cone(sigma_rows, n, f"{where}.sigma")
    F_rows = _int_matrix(doc["F"], f"{where}.F")
    if len(F_rows) != n:
        raise DocumentError(f"{where}.F: needs {n} rows (one per coordinate of N)")
    r = len(F_rows[0]) if F_rows else 0
    F = LatticeMorphism(tuple(tuple(x) for x in F_rows), r, n)
    P = s = None
    if "P" in doc or "s" in doc:
        if not ("P" in doc and "s" in doc):
            raise DocumentError(f"{where}: give both P and s")
        P_rows = _int_matrix(doc["P"], f"{where}.P")
        s_rows = _int_matrix(doc["s"], f"{where}.s")
        P = LatticeMorphism(tuple(tuple(x) for x in P_rows), n, len(P_rows))
        s = LatticeMorphism(tuple(tuple(x) for x in s_rows), n, len(s_rows))
    try:
        return DowngradeInput(sigma, F, P, s)
    except ValueError as exc:
        raise DocumentError(f"{where}: {exc}") from exc


def downgrade_input_doc(inp: DowngradeInput) -> dict:
    doc = {"version": VERSION, "kind": "downgrade-input", "sigma": cone_doc(inp.sigma), "F": inp.F.rows()}
    if inp.P is not None:
        doc["P"] = inp.P.rows()
        doc["s"] = inp.s.rows()
    return doc


def read_document(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return load_json(fh.read(), path)
