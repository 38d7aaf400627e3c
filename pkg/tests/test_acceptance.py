"""One test per acceptance criterion; each prints a PASS/FAIL line."""
import time

import pytest

import oracles
from amalgam_forge import suite
from amalgam_forge.amalgam import certify_chain, generic_chain_builder, homogeneity_probe
from amalgam_forge.cliques import extract_cliques, extract_s_structure, find_good_clique
from amalgam_forge.core import read_structure
from amalgam_forge.corpus import complete_triple_system
from amalgam_forge.errors import NoGoodClique
from amalgam_forge.iso import are_isomorphic, iter_embeddings
from amalgam_forge.strength import age_membership, is_strong
from amalgam_forge.suite import FIXTURE_DIR, SuiteConfig, format_report, run_check, run_suite
from amalgam_forge.transforms import gradual_outsource_steps, outsource_set

CFG = SuiteConfig(exhaustive_points=5, random_r=400, random_s=10000, triples=500, outsourcing=150,
                  five=150, ordered=150, pg=80)


def verdict(n, ok, detail):
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


def timed(tags, cfg=CFG):
    suite.clear_caches()
    start = time.perf_counter()
    reports = [run_check(t, cfg) for t in tags]
    return reports, time.perf_counter() - start


def summary(reports):
    return ", ".join(f"{r.tag} {r.instances}/{len(r.failures)}" for r in reports)


def test_criterion_01_formula_agreement():
    (rep,), wall = timed(["IdenticalD0s"])
    random_count = CFG.random_s
    ok = rep.ok and rep.instances >= random_count and wall < 10
    verdict(1, ok, f"{rep.instances} S-structures, {len(rep.failures)} disagreements, {wall:.1f}s")


def test_criterion_02_multiplicity_caps():
    (rep,), wall = timed(["multiplicityMaximum"])
    verdict(2, rep.ok and rep.instances > 0 and wall < 30,
            f"{rep.instances} extractions, {len(rep.failures)} cap violations, {wall:.1f}s")


def test_criterion_03_strength_laws():
    tags = ["dosFreeAmalgam", "StrongSubset", "leqsTransitivity", "strongIntersection"]
    reps, wall = timed(tags)
    corpus = suite._small(CFG)
    sizes = max(len(n.points) for n in corpus)
    kinds = {type(n).__name__ for n in corpus}
    ok = all(r.ok for r in reps) and sizes == 7 and kinds == {"RStructure", "SStructure"} and wall < 300
    verdict(3, ok, f"{summary(reps)}; every subset of {len(corpus)} structures up to {sizes} points, {wall:.1f}s")


def test_criterion_04_outsourcing():
    reps, wall = timed(["outsourceObs", "gradualIsOutsourcing"])
    steps = within = 0
    for inst in suite._outsourcing(CFG):
        b, a, k, l = suite._decode_out(inst)
        steps += len(gradual_outsource_steps(b, a, k, l)) + len(k)
        within += len(outsource_set(b, a, k, l).points) <= 14
    ok = all(r.ok for r in reps) and steps > 0 and within > 0 and wall < 300
    verdict(4, ok, f"{summary(reps)}; {steps} instrumented steps, {within} isomorphism checks "
                   f"within 14 points, {wall:.1f}s")


def test_criterion_05_good_clique():
    (rep,), wall = timed(["goodclique"])
    witnesses = []
    for m in range(5, 9):
        b = complete_triple_system(m)
        with pytest.raises(NoGoodClique) as exc:
            find_good_clique(b, extract_cliques(b.points, b))
        witnesses.append(oracles.r_predim(b.points, b.relations, exc.value.witness))
    ok = rep.ok and all(w < 0 for w in witnesses)
    verdict(5, ok, f"{rep.instances} families, {len(rep.failures)} failures; "
                   f"negative witnesses {witnesses}, {wall:.1f}s")


def test_criterion_06_generic_representation():
    (rep,), wall = timed(["GenericIsEmbeddable"])
    verdict(6, rep.ok and rep.instances > 0 and wall < 60,
            f"{rep.instances} S-structures embedded, {len(rep.failures)} failures, {wall:.1f}s")


def test_criterion_07_five_cliques():
    (rep,), wall = timed(["fiveclique"])
    verdict(7, rep.ok and rep.instances > 0 and wall < 120,
            f"{rep.instances} structures with an S-clique of size at least 5, "
            f"{len(rep.failures)} counterexamples, {wall:.1f}s")


def test_criterion_08_amalgamation_class():
    reps, wall = timed(["FraisseProperties", "dosSimpleAmalgam", "leqsInSimpleAmalgam"])
    fr = reps[0]
    verdict(8, all(r.ok for r in reps) and fr.instances >= 1000,
            f"{summary(reps)}; {wall:.1f}s")


def _strong_copy(x, n):
    for g in iter_embeddings(x, n):
        if is_strong(g.values(), n).strong:
            return g
    return None


def test_criterion_09_proper_reduct():
    state = generic_chain_builder(3, 12, "r")
    n = state.current
    free = read_structure(FIXTURE_DIR / "free_triple.r")
    one = read_structure(FIXTURE_DIR / "one_relation_triple.r")
    g1, g2 = _strong_copy(free, n), _strong_copy(one, n)
    ok = certify_chain(state) and g1 is not None and g2 is not None
    detail = "fixtures not strongly embedded"
    if ok:
        f = {g1[p]: g2[p] for p in sorted(free.points)}
        ns = extract_s_structure(n.points, n)
        left, right = extract_s_structure(f.keys(), n), extract_s_structure(f.values(), n)
        s_iso = are_isomorphic(left, right) and left.rename(f) == right
        r_diff = not are_isomorphic(n.restrict(f.keys()), n.restrict(f.values()))
        r_probe = homogeneity_probe(n, f, 3)
        s_probe = homogeneity_probe(ns, f, 3)
        ok = s_iso and r_diff and not r_probe.ok and s_probe.ok and s_probe.steps_done >= 1
        detail = (f"S-diagrams isomorphic {s_iso}, R-diagrams differ {r_diff}, "
                  f"R probe '{r_probe.reason}', S probe extended {s_probe.steps_done} steps "
                  f"in a {len(n.points)}-point chain")
    verdict(9, ok, detail)


def test_criterion_10_pregeometry_transfer():
    reps, wall = timed(["CCextendstoCCS", "CCSextendstoCC", "PGMandMs"])
    verdict(10, all(r.ok for r in reps) and wall < 600, f"{summary(reps)}; {wall:.1f}s")


def test_criterion_11_symmetrization():
    reps, wall = timed(["symmetrizationBound", "dObs"])
    verdict(11, all(r.ok and r.instances > 0 for r in reps), f"{summary(reps)}; {wall:.1f}s")


def test_criterion_12_determinism():
    cfg = SuiteConfig()
    suite.clear_caches()
    first = format_report(run_suite(cfg))
    suite.clear_caches()
    second = format_report(run_suite(cfg))
    verdict(12, first == second and first.startswith(sorted(suite.REGISTRY)[0]),
            f"two runs of {len(suite.REGISTRY)} checks, {len(first)} bytes each, identical {first == second}")
