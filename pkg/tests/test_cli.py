"""End-to-end checks of the `cox` command surface.

Everything goes through run_command (argv in, CommandResult out) so the
exit-code mapping and report payloads are pinned exactly; the two format
tests go through main() to cover printing.
"""

import json
from pathlib import Path

import pytest

from coxlab.cli import STATUS_CODE, main, run_command

SAMPLES = Path(__file__).resolve().parents[1] / "samples"


def sample(name: str) -> str:
    return str(SAMPLES / f"{name}.cox")


def run(*argv):
    return run_command(list(argv))


# -- word commands -------------------------------------------------------------------


def test_normalize_commuting_pair_sorts():
    r = run("normalize", "--system", sample("p3"), "--word", "b a")
    assert r.exit_code == 0
    assert r.report["word"] == "ab"
    assert r.report["length"] == 2


def test_normalize_order4_pair_keeps_orientation():
    # m(a,b) = 4: ba is reduced and distinct from ab, so it must survive
    r = run("normalize", "--system", sample("d8"), "--word", "b a")
    assert r.exit_code == 0
    assert r.report["word"] == "ba"


def test_mult_cancels_to_identity():
    r = run("mult", "--system", sample("dinf"), "--left", "a b", "--right", "b a")
    assert r.report == {"word": "e", "length": 0, "status": "ok"}


def test_order_finite_and_infinite():
    r = run("order", "--system", sample("d8"), "--word", "a b")
    assert (r.exit_code, r.report["order"]) == (0, 4)
    r = run("order", "--system", sample("dinf"), "--word", "a b")
    assert r.report["order"] == "inf"


def test_order_cutoff_is_inconclusive():
    r = run("order", "--system", sample("d8"), "--word", "a b",
            "--order-cutoff", "2")
    assert r.status == "inconclusive"
    assert r.exit_code == 3
    assert r.report["order"] == "unknown"
    assert r.report["order_cutoff"] == 2


def test_centralizer_report_fields():
    r = run("centralizer", "--system", sample("u3"), "--word", "a b a",
            "--radius", "4")
    assert r.report["conjugator"] == "a"
    assert r.report["core"] == "b"
    assert r.report["order_of_element"] == 2
    assert r.report["involution_letters"] == ["b"]
    assert r.report["generators"] == ["aba"]
    assert r.report["members_in_ball"] == 2


def test_dist_values():
    assert run("dist", "--system", sample("dinf"),
               "--x", "a", "--y", "b a b").report["distance"] == 1
    assert run("dist", "--system", sample("dinf"),
               "--x", "a b a", "--y", "b a b").report["distance"] == 2


# -- geometry ------------------------------------------------------------------------


def test_geom_check_pass():
    r = run("geom-check", "--system", sample("dinf"), "--refs", "a,b")
    assert (r.exit_code, r.report["geometric"]) == (0, True)


def test_geom_check_reports_failing_triple():
    r = run("geom-check", "--system", sample("dinf"), "--refs", "a,b,aba")
    assert r.exit_code == 1
    assert r.report["failing_triple"] == ["a", "b", "aba"]


def test_canon_gens_descends():
    r = run("canon-gens", "--system", sample("dinf"), "--refs", "a,b,aba")
    assert r.exit_code == 0
    assert r.report["generators"] == ["a", "b"]
    assert r.report["steps"] == 1
    assert r.report["validated"] is True


# -- endomorphism commands -----------------------------------------------------------


def test_sim_check_proper_sim():
    r = run("sim-check", "--system", sample("dinf"), "--images", "a=bab;b=aba")
    assert r.exit_code == 0
    assert r.report["kind"] == "sim-proper"


def test_sim_check_both_input_forms_agree():
    short = run("sim-check", "--system", sample("dinf"),
                "--images", "a=bab;b=aba")
    mapped = run("sim-check", "--system", sample("dinf"),
                 "--images", "map a = bab; map b = aba")
    assert short.report == mapped.report


def test_sim_check_wrong_class_fails():
    # aba sits in b's conjugacy class, so it cannot be the image of a
    r = run("sim-check", "--system", sample("dinf"), "--images", "a=aba;b=bab")
    assert r.exit_code == 1
    assert "not conjugate" in r.report["reason"]


def test_delta_identity_is_zero():
    r = run("delta", "--system", sample("dinf"), "--images", "a=a")
    assert r.report["matrix"] == [[0, 0], [0, 0]]
    assert r.report["total"] == 0


def test_detp_matches_prime():
    r = run("detp", "--rank", "3", "--prime", "5")
    assert r.report["det"] == 5
    assert run("detp", "--rank", "2", "--prime", "3").report["det"] == 3


def test_detp_rejects_composite():
    r = run("detp", "--rank", "3", "--prime", "4")
    assert r.exit_code == 2


# -- probes --------------------------------------------------------------------------


def test_probe_domain_witness_identity():
    r = run("probe", "domain", "--system", sample("u3"),
            "--x", "a", "--y", "b", "--radius", "3")
    assert r.exit_code == 0
    assert r.report["kind"] == "witness"
    assert r.report["witness"] == "e"


def test_probe_domain_certified_negative():
    r = run("probe", "domain", "--system", sample("dinf"),
            "--x", "a b", "--y", "a b")
    assert r.exit_code == 0
    assert r.report["kind"] == "certified-negative"
    assert "exhausted" in r.report["reason"]


def test_probe_phi_echoes_radius():
    r = run("probe", "phi", "--system", sample("u3"),
            "--elements", "a,b,c", "--radius", "3")
    assert r.report["satisfied"] is True
    assert r.report["bounded"] is True
    assert r.report["radius"] == 3


def test_probe_psi_accepts_and_rejects():
    ok = run("probe", "psi", "--system", sample("dinf"), "--x", "a b a")
    assert (ok.exit_code, ok.report["is_reflection"]) == (0, True)
    bad = run("probe", "psi", "--system", sample("dinf"), "--x", "a b")
    assert bad.exit_code == 1


def test_probe_psi_scope_error_is_invalid_input():
    r = run("probe", "psi", "--system", sample("p3"), "--x", "a")
    assert r.exit_code == 2
    assert "star" in r.report["error"]


def test_probe_fc_lists_members():
    r = run("probe", "fc", "--system", sample("u3"), "--x", "a", "--radius", "3")
    assert r.report["pieces"] == 2
    assert r.report["members"] == ["e", "a"]


def test_probe_rigidity_report():
    r = run("probe", "rigidity", "--system", sample("dinf"), "--x", "a b")
    assert r.report["rigid"] is True
    assert r.report["proper_fixing"] == ()
    assert r.report["autos_fixing"] >= 1


def test_probe_tree_small_witness():
    r = run("probe", "tree", "--system", sample("u3"),
            "--prime", "5", "--depth", "1", "--branch", "2")
    assert r.exit_code == 0
    assert r.report["nodes"] == 6
    assert r.report["pool"] == 4
    assert r.report["clause_e_checked"] > 0


# -- affine --------------------------------------------------------------------------


def test_affine_build_report():
    r = run("affine", "build", "--type", "A1~")
    assert r.report["d"] == 1
    assert r.report["point_group_order"] == 2
    assert r.report["relations_verified"] is True
    assert set(r.report["images"]) == {"a", "b"}


def test_affine_mult_words():
    r = run("affine", "mult", "--type", "A1~", "--left", "a b", "--right", "a b")
    assert r.report["vector"] == [-2]
    assert r.report["point_part"] == 0


def test_affine_epsilon():
    r = run("affine", "epsilon", "--type", "A1~", "--word", "a b")
    assert r.report["sign"] == 1
    assert r.report["in_kernel"] is True
    assert r.report["kernel_index"] == 2


def test_affine_refl_length_vector_form():
    r = run("affine", "refl-length", "--type", "A1~", "--word=-2;0")
    assert (r.exit_code, r.report["length"]) == (0, 2)
    assert run("affine", "refl-length", "--type", "A1~",
               "--word", "a").report["length"] == 1


def test_affine_interp_echoes_inputs():
    r = run("affine", "interp", "--type", "A1~", "--radius", "4",
            "--pairs", "50", "--seed", "3")
    assert r.report["ok"] is True
    assert r.report["parameters"] == 6
    assert r.report["seed"] == 3
    assert r.report["radius"] == 4


# -- raag ----------------------------------------------------------------------------


def test_raag_embed_single_generator():
    r = run("raag", "embed", "--graph", sample("p3"), "--word", "a")
    assert r.report["image"] == "Aa"
    assert r.report["in_kernel"] is True
    assert r.report["coset_label"] == [0, 0, 0]


def test_raag_embed_inverse_syllable():
    r = run("raag", "embed", "--graph", sample("p3"), "--word", "a b^-1")
    assert r.report["in_kernel"] is True


def test_raag_index_complete():
    r = run("raag", "index", "--graph", sample("p3"), "--radius", "4")
    assert r.report == {"index": 8, "expected": 8, "radius": 4,
                        "complete": True, "status": "ok"}


# -- suites and plumbing -------------------------------------------------------------


def test_suite_sim_is_deterministic():
    first = run("suite", "sim", "--seed", "7")
    second = run("suite", "sim", "--seed", "7")
    assert first.exit_code == 0

    def stable(rep):
        return [{k: v for k, v in chk.items() if k != "elapsed"}
                for chk in rep["checks"]]

    assert stable(first.report) == stable(second.report)
    assert all(line.startswith("[PASS]") for line in first.report["lines"])


def test_suite_unknown_name():
    assert run("suite", "bogus").exit_code == 2


def test_missing_file_is_invalid_input():
    r = run("normalize", "--system", sample("nope"), "--word", "a")
    assert r.exit_code == 2


def test_bad_arguments_do_not_raise():
    r = run("normalize", "--word", "a")
    assert r.status == "invalid-input"
    assert r.exit_code == 2


def test_status_code_table():
    assert STATUS_CODE == {"ok": 0, "property-failed": 1,
                           "invalid-input": 2, "inconclusive": 3}


def test_main_json_output(capsys):
    code = main(["--format", "json", "normalize",
                 "--system", sample("p3"), "--word", "b a"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload == {"word": "ab", "length": 2, "status": "ok"}


def test_main_text_output(capsys):
    code = main(["normalize", "--system", sample("p3"), "--word", "b a"])
    assert code == 0
    out = capsys.readouterr().out
    assert "word: ab" in out
    assert "length: 2" in out
