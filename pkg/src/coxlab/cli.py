"""`cox`: command-line front end.

Every command produces a CommandResult whose status maps onto the exit
code: ok 0, property-failed 1, invalid-input 2, inconclusive 3.  Reports
are plain key-value payloads printable as text or JSON; seeds, radii and
cutoffs always appear in the payload so a saved report is auditable.
"""

from __future__ import annotations

import argparse
import json
import math
import sys as _sys
import time
from dataclasses import dataclass

from .system import CoxFormatError, CoxeterSystem
from .words import (SearchBudgetExceeded, ball, centralizer, element_order,
                    normalize, render_word)
from .walls import canonical_generators, is_geometric_set, wall_distance
from .endo import (alpha_p_determinant, complexity_matrix, parse_endo,
                   sim_check)
from .probes import (ProbeScopeError, ProbeVerificationError,
                     delta_2spherical_check, domain_check,
                     finite_continuation, phi_gamma_bounded, phi_gamma_check,
                     psi_bounded, psi_reflection_check, rigidity_check,
                     unsuperstability_tree)
from .affine import (AffineModelError, affine_reflection_length, build_affine,
                     build_custom, epsilon, interpret_in_Z, kernel_index)
from .raag import Raag, beta_embed, coset_index, gamma_plus, kernel_and_cosets
from .suites import CHECKS, run_suite

STATUS_CODE = {"ok": 0, "property-failed": 1, "invalid-input": 2,
               "inconclusive": 3}


@dataclass
class CommandResult:
    status: str
    report: dict
    elapsed: float

    @property
    def exit_code(self) -> int:
        return STATUS_CODE[self.status]


def _load_system(path: str) -> CoxeterSystem:
    with open(path, "r", encoding="utf-8") as fh:
        return CoxeterSystem.parse(fh.read())


def _load_graph(path: str) -> Raag:
    """Graphs ride the same file format: an edge is a commuting pair."""
    sysm = _load_system(path)
    edges = [(sysm.names[i], sysm.names[j])
             for i in range(sysm.rank) for j in range(i + 1, sysm.rank)
             if sysm.comm[i, j]]
    return Raag(sysm.names, edges)


def _refs(sysm: CoxeterSystem, text: str):
    return [normalize(sysm, part.strip()) for part in text.split(",")]


def _endo(sysm: CoxeterSystem, text: str):
    if "map " in text:
        return parse_endo(sysm, text.replace(";", "\n"))
    lines = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise ValueError(f"bad image {chunk!r}, want name=word")
        lines.append("map " + chunk)
    return parse_endo(sysm, "\n".join(lines))


def _fmt(value):
    if value is math.inf:
        return "inf"
    return value


def _raag_word(graph: Raag, text: str):
    g = graph.identity()
    for tok in text.split():
        if "^" in tok:
            nm, _, exp = tok.partition("^")
            g = g * graph.generator(nm, int(exp))
        else:
            g = g * graph.generator(tok)
    return g


# ---------------------------------------------------------------------------
# handlers: each returns (status, report)

def _cmd_normalize(args):
    sysm = _load_system(args.system)
    g = normalize(sysm, args.word)
    return "ok", {"word": render_word(sysm, g.word), "length": g.length}


def _cmd_mult(args):
    sysm = _load_system(args.system)
    g = normalize(sysm, args.left) * normalize(sysm, args.right)
    return "ok", {"word": render_word(sysm, g.word), "length": g.length}


def _cmd_order(args):
    sysm = _load_system(args.system)
    g = normalize(sysm, args.word)
    o = element_order(g, cutoff=args.order_cutoff)
    if o is None:
        return "inconclusive", {"order": "unknown",
                                "order_cutoff": args.order_cutoff}
    return "ok", {"order": _fmt(o)}


def _cmd_centralizer(args):
    sysm = _load_system(args.system)
    g = normalize(sysm, args.word)
    desc = centralizer(g)
    rep = {"order_of_element": _fmt(desc.order),
           "conjugator": render_word(sysm, desc.conjugator.word),
           "core": render_word(sysm, desc.core.word),
           "roots": [render_word(sysm, r.word) for r in desc.roots],
           "involution_letters": [sysm.names[s] for s in desc.clique],
           "link": [sysm.names[s] for s in desc.link_letters],
           "generators": [render_word(sysm, t.word) for t in desc.generators]}
    if args.radius is not None:
        members = desc.enumerate_ball(args.radius)
        rep["radius"] = args.radius
        rep["members_in_ball"] = len(members)
    return "ok", rep


def _cmd_dist(args):
    sysm = _load_system(args.system)
    t = normalize(sysm, args.x)
    u = normalize(sysm, args.y)
    return "ok", {"distance": wall_distance(t, u)}


def _cmd_geom_check(args):
    sysm = _load_system(args.system)
    rep = is_geometric_set(_refs(sysm, args.refs))
    out = {"geometric": rep.is_geometric}
    if rep.failing_triple:
        out["failing_triple"] = [render_word(sysm, t.word)
                                 for t in rep.failing_triple]
    return ("ok" if rep.is_geometric else "property-failed"), out


def _cmd_canon_gens(args):
    sysm = _load_system(args.system)
    rep = canonical_generators(_refs(sysm, args.refs))
    status = "ok" if rep.ok else "property-failed"
    return status, {
        "generators": [render_word(sysm, t.word) for t in rep.generators],
        "steps": len(rep.steps),
        "validated": rep.validation is not None and rep.validation.ok}


def _cmd_sim_check(args):
    sysm = _load_system(args.system)
    rep = sim_check(sysm, _endo(sysm, args.images),
                    order_cutoff=args.order_cutoff)
    out = {"is_sim": rep.is_sim, "kind": rep.endo.kind}
    if rep.reason:
        out["reason"] = rep.reason
    if not rep.is_sim and rep.reason and "inconclusive" in rep.reason:
        return "inconclusive", out
    return ("ok" if rep.is_sim else "property-failed"), out


def _cmd_delta(args):
    sysm = _load_system(args.system)
    dm = complexity_matrix(_endo(sysm, args.images))
    return "ok", {"matrix": [list(row) for row in dm.entries],
                  "total": dm.total()}


def _cmd_detp(args):
    sysm = CoxeterSystem.universal(args.rank)
    return "ok", {"rank": args.rank, "prime": args.prime,
                  "det": alpha_p_determinant(sysm, args.prime)}


def _cmd_probe(args):
    sysm = _load_system(args.system) if args.system else None
    if args.kind == "phi":
        elements = _refs(sysm, args.elements)
        rep = phi_gamma_check(sysm, elements)
        out = {"satisfied": rep.satisfied}
        if rep.failing_clause:
            out["failing_clause"] = rep.failing_clause
        if args.radius is not None:
            out["radius"] = args.radius
            out["bounded"] = phi_gamma_bounded(sysm, elements, args.radius)
        return ("ok" if rep.satisfied else "property-failed"), out
    if args.kind == "psi":
        x = normalize(sysm, args.x)
        rep = psi_reflection_check(x)
        out = {"is_reflection": rep.value}
        if args.radius is not None:
            out["radius"] = args.radius
            out["bounded"] = psi_bounded(x, args.radius)
        return ("ok" if rep.value else "property-failed"), out
    if args.kind == "delta":
        rep = delta_2spherical_check(sysm, _refs(sysm, args.elements))
        out = {"ok": rep.ok, "clause": rep.clause, "detail": rep.detail}
        return ("ok" if rep.ok else "property-failed"), out
    if args.kind == "fc":
        x = normalize(sysm, args.x)
        rep = finite_continuation(x, radius=args.radius or 4)
        return "ok", {"radius": rep.radius,
                      "pieces": rep.pieces,
                      "size": len(rep.elements),
                      "members": [render_word(sysm, g.word)
                                  for g in rep.elements]}
    if args.kind == "domain":
        x = normalize(sysm, args.x)
        y = normalize(sysm, args.y)
        rep = domain_check(x, y, radius=args.radius or 4)
        out = {"kind": rep.kind, "radius": rep.radius, "reason": rep.reason}
        if rep.witness is not None:
            out["witness"] = render_word(sysm, rep.witness.word)
        if rep.kind == "exhausted":
            return "inconclusive", out
        return "ok", out
    if args.kind == "rigidity":
        h = normalize(sysm, args.x)
        rep = rigidity_check(h, complexity_cap=args.cap or 6,
                             depth_cap=args.depth)
        return "ok", {"rigid": rep.rigid,
                      "complexity_cap": rep.complexity_cap,
                      "depth_cap": rep.depth_cap,
                      "enumerated": rep.total_enumerated,
                      "kept": rep.kept,
                      "proper_fixing": rep.proper_fixing,
                      "autos_fixing": rep.autos_fixing}
    if args.kind == "tree":
        witness = unsuperstability_tree(
            sysm, n=args.prime or 5, depth=args.depth or 2,
            branching=args.branch or 3)
        return ("ok" if witness.ok else "property-failed"), {
            "n": witness.n, "depth": witness.depth,
            "branching": witness.branching,
            "nodes": len(witness.nodes), "pool": len(witness.pool),
            "purity_radius": witness.purity_radius,
            "pair_radius": witness.pair_radius,
            "clause_e_checked": witness.clause_e_checked,
            "max_branch_overlap": witness.max_branch_overlap}
    raise ValueError(f"unknown probe {args.kind!r}")


def _affine_group(args):
    if args.type == "custom":
        if not args.file:
            raise ValueError("custom models need --file")
        with open(args.file, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        sysm = CoxeterSystem.parse(data["system"])
        return build_custom(sysm, int(data["d"]), data["table"],
                            data["theta"], {k: (tuple(v[0]), v[1])
                                            for k, v in data["images"].items()})
    return build_affine(args.type)


def _affine_elem(group, text: str):
    if ";" in text:
        vec, _, q = text.partition(";")
        from .affine import AffineElement
        return AffineElement(group,
                             tuple(int(t) for t in vec.split(",")), int(q))
    return group.from_word(text)


def _cmd_affine(args):
    group = _affine_group(args)
    if args.kind == "build":
        return "ok", {"type": group.label, "d": group.d,
                      "point_group_order": group.order0,
                      "images": {nm: [list(g.v), g.q]
                                 for nm, g in group.images.items()},
                      "relations_verified": True}
    if args.kind == "mult":
        g = _affine_elem(group, args.left) * _affine_elem(group, args.right)
        return "ok", {"vector": list(g.v), "point_part": g.q}
    if args.kind == "epsilon":
        g = _affine_elem(group, args.word)
        idx, _ = kernel_index(group, radius=args.radius or 6)
        return "ok", {"sign": epsilon(g), "in_kernel": epsilon(g) == 1,
                      "kernel_index": idx, "radius": args.radius or 6}
    if args.kind == "refl-length":
        g = _affine_elem(group, args.word)
        bound = args.bound or 4
        rep = affine_reflection_length(g, translation_bound=bound,
                                       depth_cap=args.depth or 5)
        out = {"translation_bound": rep.translation_bound,
               "depth_cap": rep.depth_cap,
               "reflections_enumerated": rep.reflections}
        if not rep.found:
            out["note"] = rep.note
            return "inconclusive", out
        out["length"] = rep.value
        return "ok", out
    if args.kind == "interp":
        rep = interpret_in_Z(group, radius=args.radius or 6,
                             pairs=args.pairs, seed=args.seed)
        return ("ok" if rep.ok else "property-failed"), {
            "code_length": rep.code_length, "parameters": rep.parameters,
            "roundtrip_checked": rep.roundtrip_checked,
            "pairs_checked": rep.pairs_checked, "seed": args.seed,
            "radius": args.radius or 6, "ok": rep.ok}
    raise ValueError(f"unknown affine command {args.kind!r}")


def _cmd_raag(args):
    graph = _load_graph(args.graph)
    gp = gamma_plus(graph)
    if args.kind == "embed":
        g = _raag_word(graph, args.word)
        img = beta_embed(gp, g)
        rep = kernel_and_cosets(gp, img)
        return "ok", {"image": render_word(gp.system, img.word),
                      "in_kernel": rep.in_kernel,
                      "coset_label": list(rep.label)}
    if args.kind == "index":
        rep = coset_index(gp, radius=args.radius or 5)
        status = "ok" if rep.complete else "inconclusive"
        return status, {"index": rep.index, "expected": rep.expected,
                        "radius": rep.radius, "complete": rep.complete}
    raise ValueError(f"unknown raag command {args.kind!r}")


def _cmd_suite(args):
    if args.name not in CHECKS:
        raise ValueError(f"unknown suite {args.name!r}")
    results = run_suite(args.name, seed=args.seed)
    worst = "ok"
    lines = []
    for res in results:
        lines.append(res.line())
        if res.status == "inconclusive":
            worst = "inconclusive"
        elif res.status == "property-failed" and worst != "inconclusive":
            worst = "property-failed"
    report = {"suite": args.name, "seed": args.seed, "lines": lines,
              "checks": [{"name": r.name, "ok": r.ok,
                          "elapsed": round(r.elapsed, 2),
                          "status": r.status, "details": r.details}
                         for r in results]}
    if worst != "ok":
        report["failing"] = [r.name for r in results if not r.ok]
    return worst, report


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cox", description=__doc__)
    ap.add_argument("--format", choices=("text", "json"), default="text")
    sub = ap.add_subparsers(dest="command")

    def common(p, system=True):
        if system:
            p.add_argument("--system", required=True)
        p.add_argument("--radius", type=int, default=None)
        p.add_argument("--order-cutoff", dest="order_cutoff", type=int,
                       default=None)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("normalize"); common(p); p.add_argument("--word", required=True)
    p = sub.add_parser("mult"); common(p)
    p.add_argument("--left", required=True); p.add_argument("--right", required=True)
    p = sub.add_parser("order"); common(p); p.add_argument("--word", required=True)
    p = sub.add_parser("centralizer"); common(p); p.add_argument("--word", required=True)
    p = sub.add_parser("dist"); common(p)
    p.add_argument("--x", required=True); p.add_argument("--y", required=True)
    p = sub.add_parser("geom-check"); common(p); p.add_argument("--refs", required=True)
    p = sub.add_parser("canon-gens"); common(p); p.add_argument("--refs", required=True)
    p = sub.add_parser("sim-check"); common(p); p.add_argument("--images", required=True)
    p = sub.add_parser("delta"); common(p); p.add_argument("--images", required=True)
    p = sub.add_parser("detp")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--prime", type=int, required=True)

    p = sub.add_parser("probe")
    p.add_argument("kind", choices=("phi", "psi", "delta", "fc", "domain",
                                    "rigidity", "tree"))
    common(p)
    p.add_argument("--x"); p.add_argument("--y")
    p.add_argument("--elements")
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--prime", type=int, default=None)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--branch", type=int, default=None)

    p = sub.add_parser("affine")
    p.add_argument("kind", choices=("build", "mult", "epsilon",
                                    "refl-length", "interp"))
    p.add_argument("--type", required=True)
    p.add_argument("--file")
    p.add_argument("--word"); p.add_argument("--left"); p.add_argument("--right")
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--pairs", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("raag")
    p.add_argument("kind", choices=("embed", "index"))
    p.add_argument("--graph", required=True)
    p.add_argument("--word")
    p.add_argument("--radius", type=int, default=None)

    p = sub.add_parser("suite")
    p.add_argument("name")
    p.add_argument("--seed", type=int, default=0)
    return ap


_HANDLERS = {
    "normalize": _cmd_normalize, "mult": _cmd_mult, "order": _cmd_order,
    "centralizer": _cmd_centralizer, "dist": _cmd_dist,
    "geom-check": _cmd_geom_check, "canon-gens": _cmd_canon_gens,
    "sim-check": _cmd_sim_check, "delta": _cmd_delta, "detp": _cmd_detp,
    "probe": _cmd_probe, "affine": _cmd_affine, "raag": _cmd_raag,
    "suite": _cmd_suite,
}


def run_command(argv) -> CommandResult:
    ap = _build_parser()
    t0 = time.time()
    try:
        args = ap.parse_args(argv)
    except SystemExit:
        return CommandResult("invalid-input", {"error": "bad arguments"},
                             time.time() - t0)
    if args.command not in _HANDLERS:
        return CommandResult("invalid-input",
                             {"error": f"unknown command {args.command!r}"},
                             time.time() - t0)
    try:
        status, report = _HANDLERS[args.command](args)
    except (CoxFormatError, ValueError, KeyError, OSError,
            AffineModelError, ProbeScopeError) as exc:
        return CommandResult("invalid-input", {"error": str(exc)},
                             time.time() - t0)
    except (SearchBudgetExceeded, ProbeVerificationError) as exc:
        return CommandResult("inconclusive", {"error": str(exc)},
                             time.time() - t0)
    result = CommandResult(status, report, time.time() - t0)
    result.report.setdefault("status", status)
    return result


def _print_report(result: CommandResult, fmt: str):
    if fmt == "json":
        print(json.dumps(result.report, sort_keys=True, default=str))
        return
    for key, value in result.report.items():
        if key == "lines" and isinstance(value, list):
            for line in value:
                print(line)
        elif key == "checks":
            continue
        else:
            print(f"{key}: {value}")


def main(argv=None) -> int:
    argv = list(_sys.argv[1:] if argv is None else argv)
    fmt = "text"
    if "--format" in argv:
        k = argv.index("--format")
        if k + 1 < len(argv):
            fmt = argv[k + 1]
    result = run_command(argv)
    _print_report(result, fmt)
    return result.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
