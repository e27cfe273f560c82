"""JSON file formats for quivers (with optional split) and subcategories."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .errors import QrecError
from .linalg import is_prime
from .quiver import Quiver, Rep
from .subcat import Subcat
from .universe import Universe


class ParseError(QrecError):
    """A description file is malformed."""


@dataclass
class QuiverFile:
    quiver: Quiver
    p: int = 2
    quotient_part: tuple[str, ...] | None = None
    dim_bound: int = 30
    mult_cap: int = 2

    def to_json(self) -> dict:
        d: dict[str, Any] = {
            "p": self.p,
            "vertices": list(self.quiver.vertices),
            "arrows": [{"name": a.name, "from": a.source, "to": a.target} for a in self.quiver.arrows],
        }
        if self.quotient_part is not None:
            d["split"] = {"quotient_part": list(self.quotient_part)}
        d["dim_bound"] = self.dim_bound
        d["mult_cap"] = self.mult_cap
        return d


def _load(source: str | Path | dict | list) -> Any:
    if isinstance(source, (dict, list)):
        return source
    try:
        return json.loads(Path(source).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {source}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: invalid JSON ({exc})") from exc


def _int(d: dict, key: str, default: int, lo: int = 1) -> int:
    v = d.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int) or v < lo:
        raise ParseError(f"{key} must be an integer >= {lo}")
    return v


def parse_quiver_file(source: str | Path | dict) -> QuiverFile:
    d = _load(source)
    if not isinstance(d, dict):
        raise ParseError("quiver file must be a JSON object")
    p = _int(d, "p", 2, 2)
    if not is_prime(p):
        raise ParseError(f"p = {p} is not prime")
    verts = d.get("vertices")
    if not isinstance(verts, list) or not verts:
        raise ParseError("vertices must be a nonempty list")
    arrows = d.get("arrows", [])
    if not isinstance(arrows, list):
        raise ParseError("arrows must be a list")
    triples = []
    for k, a in enumerate(arrows):
        if not isinstance(a, dict) or not {"from", "to"} <= set(a):
            raise ParseError(f"arrow #{k} needs 'from' and 'to'")
        triples.append((str(a.get("name", f"a{k}")), str(a["from"]), str(a["to"])))
    try:
        q = Quiver([str(v) for v in verts], triples)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    qp = None
    split = d.get("split")
    if split is not None:
        if not isinstance(split, dict) or not isinstance(split.get("quotient_part"), list):
            raise ParseError("split must be an object with a quotient_part list")
        qp = tuple(str(v) for v in split["quotient_part"])
        unknown = set(qp) - set(q.vertices)
        if unknown:
            raise ParseError(f"split names unknown vertices {sorted(unknown)}")
    return QuiverFile(q, p, qp, _int(d, "dim_bound", 30), _int(d, "mult_cap", 2))


def parse_subcat_file(source: str | Path | dict | list, universe: Universe) -> Subcat:
    d = _load(source)
    if isinstance(d, list):
        d = {"members": d}
    if not isinstance(d, dict) or not isinstance(d.get("members"), list):
        raise ParseError("subcategory file must contain a members list")
    idx = []
    for m in d["members"]:
        try:
            if isinstance(m, str):
                if m != "0":
                    idx.append(universe.resolve(m))
            elif isinstance(m, dict) and isinstance(m.get("dims"), dict):
                idx.append(universe.resolve_dims(m["dims"]))
            else:
                raise ParseError(f"cannot read member {m!r}")
        except KeyError as exc:
            raise ParseError(str(exc.args[0])) from exc
    return Subcat(universe, idx)


def subcat_to_json(c: Subcat) -> dict:
    return {"members": c.names}


def rep_from_json(q: Quiver, p: int, d: dict) -> Rep:
    try:
        return Rep(q, p, {str(k): int(v) for k, v in d["dims"].items()}, d.get("mats", {}))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad representation: {exc}") from exc
