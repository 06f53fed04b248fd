"""``gph`` command line: classify, factor, zeta, check and replay.

Each command prints one JSON report on stdout; diagnostics go to stderr.
Exit codes: 0 ok, 2 parse error, 3 invariant violation, 4 factorization
truncated (defects present), 5 precondition violated, 6 replay mismatch.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Any

from . import classify as cls
from . import factorization as fac
from . import io
from . import zeta as zt
from .errors import GphError, InternalConsistencyError, InvalidGraph, InvalidMorphism, PreconditionError, ReplayMismatch
from .graph import Graph, GraphMorphism, core

EXIT_OK, EXIT_PARSE, EXIT_INVARIANT, EXIT_TRUNCATED, EXIT_PRECONDITION, EXIT_REPLAY = 0, 2, 3, 4, 5, 6


def _load_input(path: str) -> tuple[Graph | None, GraphMorphism | None]:
    obj = io.read_json(path)
    if io.is_morphism_json(obj):
        return None, io.morphism_from_json(obj, Path(path).parent)
    return io.graph_from_json(obj), None


def _need_morphism(path: str) -> GraphMorphism:
    graph, f = _load_input(path)
    if f is None:
        raise io.ParseError(f"{path}: expected a morphism file")
    return f


def _need_graph(path: str) -> Graph:
    graph, f = _load_input(path)
    if graph is None:
        raise io.ParseError(f"{path}: expected a graph file")
    return graph


def _factor_json(res: fac.FactorizationResult, dom: Graph) -> dict:
    cert = res.left_certificate
    if isinstance(cert, cls.WhiskerCertificate):
        cert_json = cert.to_json()
    else:
        cert_json = io.certificate_to_json(cert, dom, res.mid)
    return {
        "left": io.morphism_to_json(res.left),
        "mid": io.graph_to_json(res.mid),
        "right": io.morphism_to_json(res.right),
        "certificate": cert_json,
        "right_class_report": {k: v.to_json() for k, v in res.right_class_report.items()},
    }


# -- commands ------------------------------------------------------------------

def cmd_classify(args) -> tuple[dict, list, int]:
    graph, f = _load_input(args.file)
    if f is None:
        tree, forest = cls.is_rooted_tree(graph), cls.is_rooted_forest(graph)
        result = {
            "kind": "graph",
            "nodes": graph.n_nodes,
            "arcs": graph.n_arcs,
            "rooted_tree": {**tree.to_json(), "root": tree.data},
            "rooted_forest": {**forest.to_json(), "roots": forest.data},
            "core": {"nodes": list(core(graph).node_map), "arcs": list(core(graph).arc_map)},
        }
        return result, [], EXIT_OK
    whisk = cls.is_whiskering(f)
    verdicts = {
        "surjecting": cls.is_surjecting(f).to_json(),
        "injecting": cls.is_injecting(f).to_json(),
        "covering": cls.is_covering(f).to_json(),
        "whiskering": whisk.to_json(),
        "folding": cls.is_folding(f).to_json(),
        "acyclic": cls.is_acyclic(f).to_json(),
        "acyclic_fibration": cls.is_acyclic_fibration(f).to_json(),
    }
    if whisk:
        verdicts["whiskering"]["certificate"] = whisk.data.to_json()
    return {"kind": "morphism", "verdicts": verdicts}, [], EXIT_OK


def cmd_factor(args) -> tuple[dict, list, int]:
    f = _need_morphism(args.file)
    if args.mode == "ws":
        res = fac.factor_whisker_surject(f, args.depth)
    elif args.mode == "fold":
        res = fac.factor_fold_inject(f)
    else:
        res = fac.factor_cofib_acyclicfib(f, args.depth, args.merge_bound)
    if res.composite() != f:
        raise InternalConsistencyError("factorization does not compose back to the input")
    result = _factor_json(res, f.dom)
    result["mode"] = args.mode
    if args.certificate_out and not isinstance(res.left_certificate, cls.WhiskerCertificate):
        Path(args.certificate_out).write_text(io.dumps(result["certificate"]) + "\n", encoding="utf-8")
    defects = [d.to_json() for d in res.defects]
    return result, defects, EXIT_TRUNCATED if defects else EXIT_OK


def cmd_zeta(args) -> tuple[dict, list, int]:
    g = _need_graph(args.file)
    order = args.order if args.order is not None else zt.default_order(g)
    series = zt.zeta_series(g, order)
    census = zt.prime_census(g, args.primes)
    check_order = min(order, args.primes)
    euler = zt.euler_product(census, check_order)
    result = {
        "char_poly": zt.char_poly(g).to_json(),
        "reversed_char_poly": zt.reversed_char_poly(g).to_json(),
        "zeta": series.to_json(),
        "census": census.to_json(),
        "euler_check": {"order": check_order, "agrees": euler == series.truncate(check_order)},
    }
    return result, [], EXIT_OK


def cmd_check(args) -> tuple[dict, list, int]:
    if args.kind == "almost-isospectral":
        if len(args.files) != 2:
            raise io.ParseError("almost-isospectral needs two graph files")
        x, y = (_need_graph(p) for p in args.files)
        rx, ry = zt.reversed_char_poly(x), zt.reversed_char_poly(y)
        result = {
            "verdict": rx == ry,
            "isospectral": zt.is_isospectral(x, y),
            "reversed_char_polys": [rx.to_json(), ry.to_json()],
        }
        return result, [], EXIT_OK
    if len(args.files) != 1:
        raise io.ParseError(f"{args.kind} needs one morphism file")
    f = _need_morphism(args.files[0])
    if args.kind == "covering-divides":
        chk = zt.check_covering_divides(f)
        result = {
            "verdict": chk.divides,
            "quotient": chk.quotient.to_json(),
            "remainder": chk.remainder.to_json(),
            "char_polys": [zt.char_poly(f.dom).to_json(), zt.char_poly(f.cod).to_json()],
        }
        return result, [], EXIT_OK
    order = args.order if args.order is not None else 10
    verdict = zt.check_acyclic_preserves_zeta(f, order)
    result = {
        "verdict": verdict,
        "zeta_dom": zt.zeta_series(f.dom, order).to_json(),
        "zeta_cod": zt.zeta_series(f.cod, order).to_json(),
    }
    return result, [], EXIT_OK


def cmd_replay(args) -> tuple[dict, list, int]:
    cert, recorded = io.certificate_from_json(io.read_json(args.certificate))
    dom = _need_graph(args.dom)
    if recorded["dom"] is not None and io.graph_digest(dom) != recorded["dom"]:
        raise ReplayMismatch("domain graph differs from the one the certificate was issued for")
    try:
        mid = cert.replay(dom)
    except (PreconditionError, ValueError, IndexError, KeyError) as exc:
        raise ReplayMismatch(f"certificate does not replay on this domain: {exc}") from None
    got = io.graph_digest(mid)
    if recorded["mid"] is not None and got != recorded["mid"]:
        raise ReplayMismatch(f"replayed mid digest {got} differs from recorded {recorded['mid']}")
    return {"match": True, "steps": len(cert.steps), "mid_digest": got, "mid": io.graph_to_json(mid)}, [], EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "factor": cmd_factor,
    "zeta": cmd_zeta,
    "check": cmd_check,
    "replay": cmd_replay,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--no-timing", action="store_true", help="omit wall time from the report")
    parser = argparse.ArgumentParser(prog="gph", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="run every applicable class predicate")
    p.add_argument("file")

    p = sub.add_parser("factor", parents=[common], help="factor a morphism")
    p.add_argument("mode", choices=["ws", "fold", "model"])
    p.add_argument("file")
    p.add_argument("--depth", type=int, default=3, help="whisker tree depth for cyclic targets")
    p.add_argument("--merge-bound", type=int, default=None, help="longest cycle adjoined in model mode")
    p.add_argument("--certificate-out", default=None, help="also write the fold/cofib certificate here")

    p = sub.add_parser("zeta", parents=[common], help="spectral data of a graph")
    p.add_argument("file")
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--primes", type=int, default=12)

    p = sub.add_parser("check", parents=[common], help="spectral consequences of the model structure")
    p.add_argument("kind", choices=["acyclic-zeta", "covering-divides", "almost-isospectral"])
    p.add_argument("files", nargs="+")
    p.add_argument("--order", type=int, default=None)

    p = sub.add_parser("replay", parents=[common], help="replay a fold or cofibration certificate")
    p.add_argument("certificate")
    p.add_argument("dom")
    return parser


def _inputs(args) -> list[str]:
    paths = []
    for name in ("file", "certificate", "dom"):
        if getattr(args, name, None):
            paths.append(getattr(args, name))
    paths.extend(getattr(args, "files", None) or [])
    return paths


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    echo = {k: v for k, v in sorted(vars(args).items()) if k not in ("no_timing",)}
    report: dict[str, Any] = {"command": echo}
    code = EXIT_OK
    try:
        report["inputs"] = {p: io.file_digest(p) for p in _inputs(args)}
        result, defects, code = COMMANDS[args.command](args)
        report["result"] = result
        report["defects"] = defects
    except (io.ParseError, OSError) as exc:
        code, report["error"] = EXIT_PARSE, str(exc)
    except (InvalidGraph, InvalidMorphism) as exc:
        code, report["error"] = EXIT_INVARIANT, str(exc)
    except PreconditionError as exc:
        code, report["error"] = EXIT_PRECONDITION, str(exc)
    except ReplayMismatch as exc:
        code, report["error"] = EXIT_REPLAY, str(exc)
    except (InternalConsistencyError, GphError) as exc:
        code, report["error"] = EXIT_INVARIANT, str(exc)
    if "error" in report:
        print(f"gph: {report['error']}", file=sys.stderr)
    if not args.no_timing:
        report["wall_time"] = round(time.perf_counter() - start, 6)
    report["exit_code"] = code
    print(io.dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
