"""JSON network documents and the Le-tableau text format.

Every rational is stored as a "p/q" string in lowest terms with q > 0, so a
document written by `dumps_network` parses back to the identical object and
re-serialises byte for byte.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Mapping, NamedTuple

from .core_model import BOUNDARY, INTERNAL, PlanarNetwork, Vertex, edge, validate
from .errors import DegeneracyError, InvalidNetworkError
from .geometry import GaugeFrame
from .le_networks import LeTableau
from .rational import as_fraction, fmt

VERTEX_KEYS = {"id", "kind", "color", "x", "y", "label"}
EDGE_KEYS = {"id", "tail", "head", "weight"}


class NetworkDocument(NamedTuple):
    network: PlanarNetwork
    frame: GaugeFrame | None
    signature: dict | None


def _rational(value, where: str) -> Fraction:
    if isinstance(value, float):
        raise InvalidNetworkError(f"{where}: floats are not allowed, write \"p/q\"")
    try:
        return as_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidNetworkError(f"{where}: bad rational {value!r} ({exc})") from None


def _require(obj, keys, where):
    if not isinstance(obj, dict):
        raise InvalidNetworkError(f"{where}: expected an object")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise InvalidNetworkError(f"{where}: missing {', '.join(missing)}")


def network_from_dict(doc: Mapping, *, allow_nonpositive: bool = False,
                      check: bool = True) -> NetworkDocument:
    """Build and validate the objects described by a parsed JSON document."""
    _require(doc, ("n", "vertices", "edges"), "document")
    vertices = []
    for i, v in enumerate(doc["vertices"]):
        where = f"vertices[{i}]"
        _require(v, ("id", "kind", "color", "x", "y"), where)
        extra = set(v) - VERTEX_KEYS
        if extra:
            raise InvalidNetworkError(f"{where}: unknown keys {sorted(extra)}")
        if v["kind"] not in (BOUNDARY, INTERNAL):
            raise InvalidNetworkError(f"{where}: kind must be {BOUNDARY!r} or {INTERNAL!r}")
        label = v.get("label")
        if v["kind"] == BOUNDARY and not isinstance(label, int):
            raise InvalidNetworkError(f"{where}: boundary vertices need an integer label")
        vertices.append(Vertex(str(v["id"]), v["kind"], v["color"],
                               _rational(v["x"], where + ".x"), _rational(v["y"], where + ".y"),
                               label if v["kind"] == BOUNDARY else None))
    edges = []
    for i, e in enumerate(doc["edges"]):
        where = f"edges[{i}]"
        _require(e, ("id", "tail", "head", "weight"), where)
        extra = set(e) - EDGE_KEYS
        if extra:
            raise InvalidNetworkError(f"{where}: unknown keys {sorted(extra)}")
        edges.append(edge(str(e["id"]), str(e["tail"]), str(e["head"]), _rational(e["weight"], where + ".weight")))
    network = PlanarNetwork(vertices, edges)
    if network.n != doc["n"]:
        raise InvalidNetworkError(f"document declares n={doc['n']} but has {network.n} boundary vertices")
    if check:
        diags = validate(network, allow_nonpositive=allow_nonpositive)
        if diags:
            raise InvalidNetworkError("; ".join(d.message for d in diags[:5]), diags)
    frame = None
    if doc.get("gauge") is not None:
        g = doc["gauge"]
        _require(g, ("dx", "dy"), "gauge")
        try:
            frame = GaugeFrame(_rational(g["dx"], "gauge.dx"), _rational(g["dy"], "gauge.dy"))
        except DegeneracyError as exc:
            raise InvalidNetworkError(f"gauge: {exc}") from None
    signature = None
    if doc.get("signature") is not None:
        signature = signature_from_dict(network, doc["signature"])
    return NetworkDocument(network, frame, signature)


def signature_from_dict(network: PlanarNetwork, sig: Mapping) -> dict:
    if not isinstance(sig, dict):
        raise InvalidNetworkError("signature: expected an object")
    if set(sig) != set(network.edges):
        missing = sorted(set(network.edges) - set(sig))
        unknown = sorted(set(sig) - set(network.edges))
        raise InvalidNetworkError(f"signature: missing edges {missing}, unknown edges {unknown}")
    out = {}
    for eid in network.edges:
        bit = sig[eid]
        if isinstance(bit, bool) or bit not in (0, 1):
            raise InvalidNetworkError(f"signature: edge {eid} must map to 0 or 1, got {bit!r}")
        out[eid] = int(bit)
    return out


def network_to_dict(network: PlanarNetwork, frame: GaugeFrame | None = None,
                    signature: Mapping[str, int] | None = None) -> dict:
    verts = []
    for v in network.vertices.values():
        d = {"id": v.id, "kind": v.kind, "color": v.color, "x": fmt(v.x), "y": fmt(v.y)}
        if v.is_boundary:
            d["label"] = v.label
        verts.append(d)
    doc = {
        "n": network.n,
        "vertices": verts,
        "edges": [{"id": e.id, "tail": e.tail, "head": e.head, "weight": fmt(e.weight)}
                  for e in network.edges.values()],
    }
    if frame is not None:
        doc["gauge"] = {"dx": fmt(frame.dx), "dy": fmt(frame.dy)}
    if signature is not None:
        doc["signature"] = {eid: int(signature[eid]) for eid in network.edges}
    return doc


def loads_network(text: str, **kwargs) -> NetworkDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidNetworkError(f"malformed JSON: {exc}") from None
    return network_from_dict(doc, **kwargs)


def dumps_network(network: PlanarNetwork, frame: GaugeFrame | None = None,
                  signature: Mapping[str, int] | None = None) -> str:
    return json.dumps(network_to_dict(network, frame, signature), indent=2) + "\n"


def read_network(path: str, **kwargs) -> NetworkDocument:
    with open(path, encoding="utf-8") as fh:
        return loads_network(fh.read(), **kwargs)


# -----------------------------------------------------------------------------------
# Le-tableau text format


def loads_tableau(text: str) -> LeTableau:
    """Parse "k n", then the comma-separated row lengths, then one line per row."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) < 2:
        raise InvalidNetworkError("tableau text needs a 'k n' line and a partition line")
    head = lines[0].split()
    if len(head) != 2 or not all(h.isdigit() for h in head):
        raise InvalidNetworkError(f"first line must be 'k n', got {lines[0]!r}")
    k, n = int(head[0]), int(head[1])
    try:
        lengths = [int(x) for x in lines[1].split(",") if x.strip()]
    except ValueError:
        raise InvalidNetworkError(f"bad partition line {lines[1]!r}") from None
    if len(lengths) != k:
        raise InvalidNetworkError(f"partition has {len(lengths)} parts, expected k={k}")
    body = lines[2:]
    nonzero = [L for L in lengths if L > 0]
    if len(body) != len(nonzero):
        raise InvalidNetworkError(f"expected {len(nonzero)} entry rows, got {len(body)}")
    rows = []
    it = iter(body)
    for r, length in enumerate(lengths):
        if length == 0:
            rows.append(())
            continue
        entries = next(it).replace(",", " ").split()
        if len(entries) != length:
            raise InvalidNetworkError(f"row {r + 1} has {len(entries)} entries, partition says {length}")
        rows.append(tuple(_rational(x, f"row {r + 1}") for x in entries))
    return LeTableau(k, n, tuple(rows))


def dumps_tableau(tableau: LeTableau) -> str:
    lines = [f"{tableau.k} {tableau.n}", ",".join(str(L) for L in tableau.shape)]
    for row in tableau.rows:
        if row:
            lines.append(" ".join("0" if x == 0 else fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def read_tableau(path: str) -> LeTableau:
    with open(path, encoding="utf-8") as fh:
        return loads_tableau(fh.read())
