"""Acceptance suites: the checks behind `cox suite <name>`.

Each check returns a CheckResult carrying the verdict, the wall-clock
time, and every knob (seed, radius, cutoff) echoed back so a report is
auditable on its own.  The word-oracle checks compare the production
kernel against a deliberately naive rewriting closure that shares no
code with it.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field

from .system import CoxeterSystem
from .words import (GroupElement, ball, centralizer, element_order, generator,
                    identity, normalize)
from .walls import (canonical_generators, conjugating_element,
                    enumerate_reflections, is_geometric_set)
from .endo import (Endo, alpha_p_determinant, abelianized_plus_matrix,
                   classify, complexity_matrix, identity_endo, int_det,
                   sim_check)
from .probes import (domain_check, phi_gamma_bounded, phi_gamma_check,
                     psi_bounded, psi_reflection_check, ProbeScopeError,
                     unsuperstability_tree)
from .affine import (build_affine, interpret_in_Z, kernel_index,
                     reflection_length_profile, involution_generation_check)
from .raag import Raag, coset_index, gamma_plus, theta, verify_embedding, beta_embed


@dataclass
class CheckResult:
    name: str
    ok: bool
    elapsed: float
    details: dict = field(default_factory=dict)
    status: str = "ok"            # ok | property-failed | inconclusive

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        return f"[{tag}] {self.name} ({self.elapsed:.1f}s)"


def _timed(name, fn):
    t0 = time.time()
    try:
        ok, details = fn()
        status = "ok" if ok else "property-failed"
    except (MemoryError, RecursionError) as exc:     # resource exhaustion
        return CheckResult(name, False, time.time() - t0,
                           {"error": repr(exc)}, "inconclusive")
    return CheckResult(name, ok, time.time() - t0, details, status)


# ---------------------------------------------------------------------------
# sample systems

def sample_systems():
    return {
        "d-inf": CoxeterSystem.universal(["a", "b"]),
        "u3": CoxeterSystem.universal(["a", "b", "c"]),
        "p3": CoxeterSystem.right_angled_from_graph(
            ("a", "b", "c"), [("a", "b"), ("b", "c")]),
        "p4": CoxeterSystem.right_angled_from_graph(
            ("a", "b", "c", "d"), [("a", "b"), ("b", "c"), ("c", "d")]),
        "c4": CoxeterSystem.right_angled_from_graph(
            ("a", "b", "c", "d"),
            [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]),
        "c5": CoxeterSystem.right_angled_from_graph(
            ("a", "b", "c", "d", "e"),
            [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")]),
    }


# ---------------------------------------------------------------------------
# an independent word oracle: rewriting closure, no shared kernel code

def orbit_canonical(sys: CoxeterSystem, word: bytes) -> bytes:
    """Least representative under adjacent cancellation and commutation,
    found by exhausting the rewrite closure (right-angled systems only)."""
    seen = {bytes(word)}
    frontier = [bytes(word)]
    best = bytes(word)
    while frontier:
        nxt = []
        for w in frontier:
            for k in range(len(w) - 1):
                x, y = w[k], w[k + 1]
                if x == y:
                    v = w[:k] + w[k + 2:]
                elif sys.comm[x, y]:
                    v = w[:k] + bytes((y, x)) + w[k + 2:]
                else:
                    continue
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
                    if (len(v), v) < (len(best), best):
                        best = v
        frontier = nxt
    return best


def _raw_words(rank: int, max_len: int):
    yield b""
    frontier = [b""]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for s in range(rank):
                v = w + bytes([s])
                nxt.append(v)
                yield v
        frontier = nxt


def check_word_oracle(seed: int = 0) -> CheckResult:
    def run():
        systems = sample_systems()
        details = {"systems": [], "radius": 5}
        ok = True
        for key in ("d-inf", "u3", "p3", "c4"):
            sys = systems[key]
            by_nf: dict = {}
            by_oracle: dict = {}
            count = 0
            for w in _raw_words(sys.rank, 5):
                nf = normalize(sys, w).word
                oc = orbit_canonical(sys, w)
                by_nf.setdefault(nf, set()).add(w)
                by_oracle.setdefault(oc, set()).add(w)
                count += 1
            # identical partitions == agreement on every pair of words
            agree = (sorted(map(sorted, by_nf.values()))
                     == sorted(map(sorted, by_oracle.values())))
            ok &= agree
            details["systems"].append(
                {"system": key, "words": count,
                 "classes": len(by_nf), "partitions_agree": agree})
        u3 = systems["u3"]
        _, spheres = ball(u3, 6)
        want = [1] + [3 * 2 ** (r - 1) for r in range(1, 7)]
        details["u3_spheres"] = list(spheres)
        details["u3_spheres_expected"] = want
        ok &= (list(spheres) == want)
        return ok, details
    return _timed("word-oracle equivalence", run)


def check_orders_centralizers(seed: int = 0) -> CheckResult:
    def run():
        systems = sample_systems()
        details = {"systems": [], "radius": 6}
        ok = True
        for key in ("u3", "p4", "c5"):
            sys = systems[key]
            elements, _ = ball(sys, 6)
            order_bad = 0
            cent_bad = 0
            ball_set = set(elements)
            for g in elements:
                o = element_order(g)
                sq = g * g
                direct = (1 if g.is_identity()
                          else 2 if sq.is_identity() else math.inf)
                if o != direct:
                    order_bad += 1
                brute = {h for h in elements if (h * g) == (g * h)}
                desc = centralizer(g)
                structural = desc.enumerate_ball(6) & ball_set \
                    if not g.is_identity() else ball_set
                if brute != structural:
                    cent_bad += 1
            ok &= (order_bad == 0 and cent_bad == 0)
            details["systems"].append(
                {"system": key, "ball": len(elements),
                 "order_mismatches": order_bad,
                 "centralizer_mismatches": cent_bad})
        return ok, details
    return _timed("orders and centralizers", run)


def check_geometric(seed: int = 0) -> CheckResult:
    def run():
        rng = random.Random(seed)
        systems = sample_systems()
        d_inf = systems["d-inf"]
        a, b = generator(d_inf, "a"), generator(d_inf, "b")
        aba = a * b * a
        rep = is_geometric_set([a, b, aba])
        ok = (not rep.is_geometric) and rep.failing_triple is not None
        details = {"seed": seed,
                   "d_inf_triple_geometric": rep.is_geometric,
                   "failing_triple": [str(t) for t in (rep.failing_triple or ())]}

        canon = canonical_generators([a, b, aba])
        got = {t.word for t in canon.generators}
        ok &= (got == {a.word, b.word} and canon.ok)
        details["canonical_of_triple"] = sorted(
            str(GroupElement(d_inf, w)) for w in got)

        shrunk = 0
        for key in ("d-inf", "u3", "c4"):
            sys = systems[key]
            pool = enumerate_reflections(sys, 7)
            for _ in range(50):
                size = rng.randrange(2, 5)
                refs = rng.sample(pool, min(size, len(pool)))
                out = canonical_generators(refs, validate=False)
                if len(out.generators) <= len(set(t.word for t in refs)):
                    shrunk += 1
        ok &= (shrunk == 150)
        details["random_sets_nonincreasing"] = shrunk

        # two geometric sets of one subgroup are conjugate inside it
        found = 0
        cases = 0
        for key, names in (("d-inf", ("a", "b")), ("u3", ("a", "b", "c"))):
            sys = systems[key]
            base = [generator(sys, nm) for nm in names]
            R = canonical_generators(base, validate=False).generators
            for c_word in ("ab", "ba", "abc"[:sys.rank]):
                try:
                    c = normalize(sys, c_word)
                except Exception:
                    continue
                cases += 1
                moved = [c * t * c.inverse() for t in R]
                u = conjugating_element(R, moved, 6, within=R)
                if u is not None:
                    found += 1
        ok &= (found == cases)
        details["conjugacy_cases"] = cases
        details["conjugacy_found"] = found
        return ok, details
    return _timed("geometric-set machinery", run)


def check_determinant(seed: int = 0) -> CheckResult:
    def run():
        details = {"values": []}
        ok = True
        for rank in (2, 3, 4):
            sys = CoxeterSystem.universal(rank)
            for p in (3, 5, 7):
                d = alpha_p_determinant(sys, p)
                details["values"].append({"rank": rank, "p": p, "det": d})
                ok &= (d == p)
            di = int_det(abelianized_plus_matrix(identity_endo(sys)))
            ok &= (di == 1)
        details["identity_det"] = 1
        return ok, details
    return _timed("determinant obstruction", run)


def _random_sim(sys: CoxeterSystem, rng, max_clen: int = 2) -> Endo:
    while True:
        imgs = []
        for s in range(sys.rank):
            w = bytes(rng.randrange(sys.rank)
                      for _ in range(rng.randrange(max_clen + 1)))
            imgs.append(normalize(sys, w + bytes([s]) + w[::-1]))
        rep = sim_check(sys, imgs)
        if rep.is_sim:
            return rep.endo


def check_monotonicity(seed: int = 0) -> CheckResult:
    def run():
        rng = random.Random(seed)
        details = {"seed": seed, "pairs": 0, "proper_pairs": 0}
        ok = True
        for rank in (2, 3):
            sys = CoxeterSystem.universal(rank)
            for _ in range(50):
                alpha = _random_sim(sys, rng)
                beta = _random_sim(sys, rng)
                da = complexity_matrix(alpha)
                dab = complexity_matrix(alpha.compose(beta))
                details["pairs"] += 1
                if not dab.dominates(da):
                    ok = False
                if classify(beta).kind == "sim-proper":
                    details["proper_pairs"] += 1
                    if dab == da:
                        ok = False
        return ok, details
    return _timed("complexity monotonicity", run)


def _involutions_in_ball(sys: CoxeterSystem, radius: int):
    elements, _ = ball(sys, radius)
    return [g for g in elements
            if not g.is_identity() and (g * g).is_identity()]


def check_definability(seed: int = 0) -> CheckResult:
    def run():
        import itertools
        systems = sample_systems()
        details = {"radius": 4, "systems": []}
        ok = True
        for key in ("d-inf", "u3"):
            sys = systems[key]
            invs = _involutions_in_ball(sys, 4)
            memo: dict = {}
            phi_checked = phi_mismatch = 0
            for tup in itertools.product(invs, repeat=sys.rank):
                structural = phi_gamma_check(sys, list(tup)).satisfied
                bounded = phi_gamma_bounded(sys, list(tup), 4, _memo=memo)
                phi_checked += 1
                if structural != bounded:
                    phi_mismatch += 1
            psi_checked = psi_mismatch = 0
            for x in invs:
                s = psi_reflection_check(x).value
                bd = psi_bounded(x, 4)
                psi_checked += 1
                if s != bd:
                    psi_mismatch += 1
            ok &= (phi_mismatch == 0 and psi_mismatch == 0)
            details["systems"].append(
                {"system": key, "involutions": len(invs),
                 "phi_tuples": phi_checked, "phi_mismatches": phi_mismatch,
                 "psi_checked": psi_checked, "psi_mismatches": psi_mismatch})
        refused = False
        try:
            psi_reflection_check(generator(systems["p3"], "a"))
        except ProbeScopeError:
            refused = True
        ok &= refused
        details["p3_refused"] = refused
        return ok, details
    return _timed("definability checkers", run)


def check_affine(seed: int = 0) -> CheckResult:
    def run():
        details = {"seed": seed, "models": []}
        ok = True
        for kind in ("A1~", "A2~"):
            group = build_affine(kind)      # relations verified at build
            idx, _ = kernel_index(group, 6)
            interp = interpret_in_Z(group, radius=6, pairs=500, seed=seed)
            profile = reflection_length_profile(group, radius=8)
            gen_ok = involution_generation_check(group, radius=6)
            row = {"model": kind, "kernel_index": idx,
                   "interpretation_ok": interp.ok,
                   "interpretation_pairs": interp.pairs_checked,
                   "max_reflection_length_B8": profile.max_length,
                   "stabilized": profile.stabilized,
                   "involution_generation": gen_ok}
            details["models"].append(row)
            ok &= (idx == 2 and interp.ok and interp.pairs_checked == 500
                   and profile.stabilized and profile.max_length <= 4
                   and gen_ok)
        return ok, details
    return _timed("affine models", run)


def _raag_pair_check(gp, word_len: int = 4):
    """beta(gh) = beta(g)beta(h) over all pairs of elements reachable by
    free words of the given length."""
    from .raag import RaagElement, _free_words
    raag = gp.raag
    elems = {}
    for letters in _free_words(raag.rank, word_len):
        g = RaagElement(raag, tuple((abs(l) - 1, 1 if l > 0 else -1)
                                    for l in letters))
        elems.setdefault(g.syllables, g)
    items = list(elems.values())
    images = {g.syllables: beta_embed(gp, g) for g in items}
    pairs = 0
    for g in items:
        ig = images[g.syllables]
        for h in items:
            if beta_embed(gp, g * h) != ig * images[h.syllables]:
                return pairs, False
            pairs += 1
    return pairs, True


def check_raag(seed: int = 0) -> CheckResult:
    def run():
        graphs = {
            "vertex": Raag(["a"]),
            "edge": Raag(["a", "b"], [("a", "b")]),
            "p3": Raag(["a", "b", "c"], [("a", "b"), ("b", "c")]),
        }
        details = {"graphs": []}
        ok = True
        for key, graph in graphs.items():
            gp = gamma_plus(graph)
            emb = verify_embedding(gp, max_len=6)
            pairs, pair_ok = _raag_pair_check(gp, 4)
            idx = coset_index(gp, radius=5)
            row = {"graph": key, "rank": gp.system.rank,
                   "injective_to_6": emb.injective,
                   "kernel_parity": emb.kernel_parity_ok,
                   "commutation": emb.commutation_ok,
                   "hom_pairs": pairs, "hom_ok": pair_ok,
                   "index": idx.index, "index_expected": idx.expected}
            details["graphs"].append(row)
            ok &= (bool(emb) and pair_ok and idx.complete
                   and gp.system.rank == 2 * graph.rank)
        return ok, details
    return _timed("raag bridge", run)


def check_tree(seed: int = 0) -> CheckResult:
    def run():
        u3 = CoxeterSystem.universal(["a", "b", "c"])
        witness = unsuperstability_tree(u3, n=5, depth=2, branching=3)
        details = {"n": 5, "depth": 2, "branching": 3,
                   "nodes": len(witness.nodes),
                   "pool": len(witness.pool),
                   "purity_radius": witness.purity_radius,
                   "pair_radius": witness.pair_radius,
                   "clause_e_checked": witness.clause_e_checked,
                   "max_branch_overlap": witness.max_branch_overlap}
        return (witness.ok and witness.max_branch_overlap == 1), details
    return _timed("unsuperstability tree", run)


def check_domain(seed: int = 0) -> CheckResult:
    def run():
        rng = random.Random(seed)
        systems = sample_systems()
        u3 = systems["u3"]
        elements, _ = ball(u3, 3)
        nontrivial = [g for g in elements if not g.is_identity()]
        witnesses = 0
        for _ in range(20):
            x = rng.choice(nontrivial)
            y = rng.choice(nontrivial)
            rep = domain_check(x, y, radius=4)
            if rep.kind == "witness":
                witnesses += 1
        details = {"seed": seed, "radius": 4, "u3_witnesses": witnesses}
        ok = (witnesses == 20)

        p3 = systems["p3"]          # two diagram components
        rep = domain_check(generator(p3, "a"), generator(p3, "b"), radius=4)
        details["reducible_kind"] = rep.kind
        ok &= (rep.kind == "certified-negative")

        d_inf = systems["d-inf"]
        t = normalize(d_inf, "ab")
        rep2 = domain_check(t, t, radius=4)
        details["d_inf_kind"] = rep2.kind
        ok &= (rep2.kind == "certified-negative")
        return ok, details
    return _timed("domain probe", run)


# ---------------------------------------------------------------------------

CHECKS = {
    "word-oracle": [check_word_oracle, check_orders_centralizers],
    "geometry": [check_geometric],
    "sim": [check_determinant, check_monotonicity],
    "probes": [check_definability, check_tree, check_domain],
    "affine": [check_affine],
    "raag": [check_raag],
}
CHECKS["all"] = [fn for name in
                 ("word-oracle", "geometry", "sim", "probes", "affine", "raag")
                 for fn in CHECKS[name]]


def run_suite(name: str, seed: int = 0):
    if name not in CHECKS:
        raise KeyError(name)
    return [fn(seed) for fn in CHECKS[name]]
