"""JSON formats for graphs, morphisms, certificates and spectral data.

Graph files look like::

    {"nodes": ["n0", "n1"], "arcs": [{"id": "a0", "src": "n0", "tgt": "n1"}]}

String ids are mapped to dense integers in file order.  A morphism file has
``dom`` and ``cod`` (a path relative to the morphism file, or an inline
graph) plus ``node_map`` and ``arc_map`` keyed by those string ids.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

from .cycles import BasedCycle
from .errors import GphError, InvalidGraph, InvalidMorphism
from .factorization import (
    AddCycleStep,
    CofibCertificate,
    FoldCertificate,
    FoldStep,
    MergeCyclesStep,
    WhiskerStep,
)
from .graph import Arc, Graph, GraphMorphism, validate


class ParseError(GphError, ValueError):
    pass


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from None


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


# -- graphs --------------------------------------------------------------------

def graph_from_json(obj: Any) -> Graph:
    if not isinstance(obj, dict) or "nodes" not in obj or "arcs" not in obj:
        raise ParseError("graph must be an object with 'nodes' and 'arcs'")
    names = obj["nodes"]
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        raise ParseError("'nodes' must be a list of strings")
    index: dict[str, int] = {}
    for n in names:
        if n in index:
            raise InvalidGraph(f"duplicate node id {n!r}")
        index[n] = len(index)
    arcs = []
    arc_names: list[str] = []
    seen: set[str] = set()
    for pos, rec in enumerate(obj["arcs"]):
        if not isinstance(rec, dict) or not {"id", "src", "tgt"} <= rec.keys():
            raise ParseError(f"arc record {pos} needs 'id', 'src' and 'tgt'")
        name = str(rec["id"])
        if name in seen:
            raise InvalidGraph(f"duplicate arc id {name!r}")
        seen.add(name)
        for end in ("src", "tgt"):
            if rec[end] not in index:
                raise InvalidGraph(f"dangling {end}: arc {name!r} refers to unknown node {rec[end]!r}")
        arcs.append(Arc(pos, index[rec["src"]], index[rec["tgt"]]))
        arc_names.append(name)
    return validate(Graph(tuple(range(len(names))), tuple(arcs), tuple(names), tuple(arc_names)))


def graph_to_json(g: Graph) -> dict:
    return {
        "nodes": [g.node_label(x) for x in g.nodes],
        "arcs": [
            {"id": g.arc_label(a.id), "src": g.node_label(a.src), "tgt": g.node_label(a.tgt)}
            for a in g.arcs
        ],
    }


def load_graph(source: str | Path | dict, base_dir: Path | None = None) -> Graph:
    if isinstance(source, dict):
        return graph_from_json(source)
    path = Path(source)
    if base_dir is not None and not path.is_absolute():
        path = base_dir / path
    return graph_from_json(read_json(path))


def graph_digest(g: Graph) -> str:
    """Digest of the bare structure (labels ignored)."""
    payload = json.dumps([g.n_nodes, g.pairs()], separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


# -- morphisms -------------------------------------------------------------------

def morphism_from_json(obj: Any, base_dir: Path | None = None) -> GraphMorphism:
    if not isinstance(obj, dict) or not {"dom", "cod", "node_map", "arc_map"} <= obj.keys():
        raise ParseError("morphism must have 'dom', 'cod', 'node_map' and 'arc_map'")
    dom = load_graph(obj["dom"], base_dir)
    cod = load_graph(obj["cod"], base_dir)
    node_ix = {dom.node_label(x): x for x in dom.nodes}
    cod_node_ix = {cod.node_label(x): x for x in cod.nodes}
    arc_ix = {dom.arc_label(a): a for a in range(dom.n_arcs)}
    cod_arc_ix = {cod.arc_label(a): a for a in range(cod.n_arcs)}
    nodes = [-1] * dom.n_nodes
    arcs = [-1] * dom.n_arcs
    try:
        for k, v in obj["node_map"].items():
            nodes[node_ix[k]] = cod_node_ix[v]
        for k, v in obj["arc_map"].items():
            arcs[arc_ix[str(k)]] = cod_arc_ix[str(v)]
    except KeyError as exc:
        raise InvalidMorphism(f"unknown id {exc.args[0]!r} in morphism maps") from None
    except AttributeError:
        raise ParseError("'node_map' and 'arc_map' must be objects") from None
    if -1 in nodes or -1 in arcs:
        raise InvalidMorphism("morphism maps are not total")
    return GraphMorphism(dom, cod, nodes, arcs)


def morphism_to_json(f: GraphMorphism) -> dict:
    return {
        "dom": graph_to_json(f.dom),
        "cod": graph_to_json(f.cod),
        "node_map": {f.dom.node_label(x): f.cod.node_label(y) for x, y in enumerate(f.node_map)},
        "arc_map": {f.dom.arc_label(a): f.cod.arc_label(b) for a, b in enumerate(f.arc_map)},
    }


def load_morphism(path: str | Path) -> GraphMorphism:
    path = Path(path)
    return morphism_from_json(read_json(path), path.parent)


def is_morphism_json(obj: Any) -> bool:
    return isinstance(obj, dict) and "node_map" in obj


# -- certificates ----------------------------------------------------------------

def _cycle_from_json(obj: dict) -> BasedCycle:
    return BasedCycle(tuple(obj["arcs"]), tuple(obj["nodes"]))


def certificate_to_json(cert: FoldCertificate | CofibCertificate, dom: Graph, mid: Graph) -> dict:
    out = cert.to_json()
    out["dom_digest"] = graph_digest(dom)
    out["mid_digest"] = graph_digest(mid)
    return out


def certificate_from_json(obj: Any) -> tuple[FoldCertificate | CofibCertificate, dict]:
    """Parse a certificate (or a factor report embedding one).

    Returns the certificate and the recorded digests ``{"dom": ..., "mid": ...}``
    (values may be None).
    """
    if isinstance(obj, dict) and "result" in obj and isinstance(obj["result"], dict):
        obj = obj["result"].get("certificate", obj)
    if not isinstance(obj, dict) or "kind" not in obj or "steps" not in obj:
        raise ParseError("certificate needs 'kind' and 'steps'")
    try:
        if obj["kind"] == "fold":
            steps = tuple(FoldStep(s["node"], *s["arcs"]) for s in obj["steps"])
            cert: FoldCertificate | CofibCertificate = FoldCertificate(steps)
        elif obj["kind"] == "cofib":
            parsed = []
            for s in obj["steps"]:
                if s["step"] == "whisker":
                    parsed.append(WhiskerStep(s["node"]))
                elif s["step"] == "add-cycle":
                    parsed.append(AddCycleStep(s["length"]))
                elif s["step"] == "merge-cycles":
                    parsed.append(MergeCyclesStep(_cycle_from_json(s["first"]), _cycle_from_json(s["second"])))
                else:
                    raise ParseError(f"unknown step {s['step']!r}")
            cert = CofibCertificate(tuple(parsed))
        else:
            raise ParseError(f"cannot replay a {obj['kind']!r} certificate")
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed certificate step: {exc}") from None
    return cert, {"dom": obj.get("dom_digest"), "mid": obj.get("mid_digest")}
