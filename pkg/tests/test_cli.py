import json

import pytest

from unirep.cli import main
from unirep.fixtures import bundled_path, load_fixture
from unirep.schemas import validate

TURKISH = "hemen gel-iyor- -um diye git- -ti dön- -me- -di"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_derive_turkish(capsys):
    code, doc = run_json(capsys, "derive", "--lexicon", str(bundled_path("turkish_diye.lex")),
                         "--sentence", TURKISH)
    assert code == 0
    validate(doc, "derivations")
    assert any(sum(s["wrapped"] for s in d["steps"]) == 2 for d in doc["derivations"])


def test_derive_english_exit_codes(capsys):
    lex = str(bundled_path("english_svo.lex"))
    words = ["The", "girl", "likes", "the", "flower"]
    assert run(capsys, "derive", "--lexicon", lex, *words, "--max-wrapped", "0")[0] == 0
    assert run(capsys, "derive", "--lexicon", lex, *words, "--goal", "N")[0] == 1
    assert run(capsys, "derive", "--lexicon", lex, "The", "boy")[0] == 2
    assert run(capsys, "derive", *words)[0] == 2


def test_derive_with_explicit_tags(capsys):
    code, out, _ = run(capsys, "derive", "--lexicon", str(bundled_path("english_svo.lex")),
                       "The:Det1", "girl:N1", "likes:V", "the:Det2", "flower:N2")
    assert code == 0 and "final: S" in out


def test_max_wrapped_filters(capsys):
    lex = str(bundled_path("turkish_diye.lex"))
    code, doc = run_json(capsys, "derive", "--lexicon", lex, "--sentence", TURKISH,
                         "--max-wrapped", "1")
    assert code == 0 and doc["count"] == 1


def test_verify_all_bundled(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "fixture turkish_diye: PASS" in out and "unified final: δ(Conj)" in out


def test_verify_json(capsys):
    code, doc = run_json(capsys, "verify", "turkish_diye", "english_svo")
    assert code == 0
    for rep in doc["fixtures"]:
        validate(rep, "fixture_report")
    turkish = doc["fixtures"][0]["summary"]
    assert turkish["equivalences"] == 8 and turkish["psg rules"] == 9
    english = doc["fixtures"][1]["summary"]
    assert english["wrapped steps"] == []


def test_verify_names_flipped_edge(capsys, tmp_path):
    fx = load_fixture("turkish_diye")
    fx["expected"]["edges"] = [[6, 3] if e == [3, 6] else e for e in fx["expected"]["edges"]]
    path = tmp_path / "flipped.json"
    path.write_text(json.dumps(fx, ensure_ascii=False), "utf-8")
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 1
    assert "dön- -> diye (6->3)" in out and "diye -> dön- (3->6)" in out


def test_verify_bad_script_is_semantic_failure(capsys, tmp_path):
    fx = load_fixture("english_svo")
    fx["script"] = [[1, 0]] + fx["script"][1:]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(fx), "utf-8")
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 1 and "[FAIL] replay" in out


def test_verify_missing_file(capsys):
    code, _, err = run(capsys, "verify", "nowhere.json")
    assert code == 2 and "nowhere.json" in err


def test_replay(capsys):
    code, doc = run_json(capsys, "replay", "turkish_diye")
    validate(doc, "derivation")
    assert [s["result"] for s in doc["steps"]] == ["S/N", "S", "S/S", "S/N", "S", "S/N", "S", "S"]


def test_cg2psg_brackets_and_rules(capsys, tmp_path):
    code, out, _ = run(capsys, "cg2psg", "turkish_diye")
    assert code == 0 and out.startswith("(S ")
    tree = tmp_path / "tree.txt"
    tree.write_text(out, "utf-8")
    code, doc = run_json(capsys, "rules", str(tree), "--tree")
    validate(doc, "rules")
    assert len(doc["rules"]) == 9 and doc["crossings"] > 0


def test_cg2psg_json(capsys):
    code, doc = run_json(capsys, "cg2psg", "english_svo")
    validate(doc, "tree")
    assert doc["label"] == "S" and doc["yield"] == [0, 1, 2, 3, 4]


def test_derivation_file_as_input(capsys, tmp_path):
    _, doc = run_json(capsys, "replay", "turkish_diye")
    path = tmp_path / "d.json"
    path.write_text(json.dumps(doc, ensure_ascii=False), "utf-8")
    code, out, _ = run(capsys, "rules", str(path))
    assert code == 0 and "S → Conj S" in out.splitlines()


def test_cg2dg_formats(capsys):
    code, doc = run_json(capsys, "cg2dg", "turkish_diye", "--delta-start", "1")
    validate(doc, "depgraph")
    assert doc["root"] == 4 and doc["delta"]["4"] == 1 and not doc["projective"]
    code, out, _ = run(capsys, "cg2dg", "english_svo", "--format", "conllu")
    assert out.splitlines()[2].split("\t")[6] == "0"
    code, out, _ = run(capsys, "cg2dg", "english_svo")
    assert out.rstrip().endswith("projective")


def test_global_flags_before_command(capsys):
    code, out, _ = run(capsys, "--format", "json", "cg2dg", "english_svo")
    assert code == 0 and json.loads(out)["root"] == 2


def test_dg2cg_with_derivation(capsys, tmp_path):
    _, conllu, _ = run(capsys, "cg2dg", "turkish_diye", "--format", "conllu")
    path = tmp_path / "g.conllu"
    path.write_text(conllu, "utf-8")
    code, out, _ = run(capsys, "dg2cg", str(path), "--derivation", "turkish_diye")
    assert code == 0
    assert "git-(gel-iyor-*) ≡ hemen\\git-" in out and "4 direct, 4 mediated: pass" in out


def test_dg2cg_by_search(capsys, tmp_path):
    _, conllu, _ = run(capsys, "cg2dg", "turkish_diye", "--format", "conllu")
    path = tmp_path / "g.conllu"
    path.write_text(conllu, "utf-8")
    code, doc = run_json(capsys, "dg2cg", str(path), "--lexicon",
                         str(bundled_path("turkish_diye.lex")))
    assert code == 0
    report = doc["sentences"][0]["report"]
    validate(report, "equivalences")
    assert report["verdict"] == "pass"


def test_dg2cg_single_token(capsys, tmp_path):
    path = tmp_path / "one.conllu"
    path.write_text("1\tRain\t_\tV\t_\t_\t0\troot\t_\t_\n\n", "utf-8")
    code, doc = run_json(capsys, "dg2cg", str(path))
    assert code == 0
    assert doc["sentences"][0]["report"]["equivalences"] == []


def test_dg2cg_parse_error_has_line(capsys, tmp_path):
    path = tmp_path / "bad.conllu"
    path.write_text("1\tRain\t_\tV\n", "utf-8")
    code, _, err = run(capsys, "dg2cg", str(path))
    assert code == 2 and "line 1" in err


def test_unify(capsys):
    code, out, _ = run(capsys, "unify", "turkish_diye")
    assert code == 0 and out.splitlines()[-2].strip() == "δ(Conj)"
    code, doc = run_json(capsys, "unify", "french_passe_compose")
    validate(doc, "unified_table")
    assert doc["final"] == "δ(Aux)"
    code, out, _ = run(capsys, "unify", "raising", "--format", "latex")
    assert code == 0 and "\\ldots" in out


def test_unify_against_conllu(capsys, tmp_path):
    _, conllu, _ = run(capsys, "cg2dg", "turkish_diye", "--format", "conllu")
    edited = conllu.replace("V3\t_\t_\t4", "V3\t_\t_\t5")   # hang dön- off git-
    path = tmp_path / "g.conllu"
    path.write_text(edited, "utf-8")
    code, _, err = run(capsys, "unify", "turkish_diye", "--conllu", str(path))
    assert code == 1 and "equivalences do not hold" in err


def test_complexity(capsys):
    code, out, _ = run(capsys, "complexity", "--formalisms", "3", "--sentences", "7")
    assert code == 0 and "2187" in out and "42" in out
    code, doc = run_json(capsys, "complexity", "--formalisms", "1", "--sentences", "7")
    validate(doc, "complexity")
    assert doc["unified_variant"] == 7
    code, out, _ = run(capsys, "complexity", "--sentences", "2", "--enumerate", "9")
    assert "S1^PSG, S2^DG" in out
    assert run(capsys, "complexity", "--formalisms", "0", "--sentences", "2")[0] == 2


def test_sequnion(capsys):
    code, doc = run_json(capsys, "sequnion", "p,q", "r,s")
    validate(doc, "sequnion")
    assert doc["count"] == 6
    assert run(capsys, "sequnion", "p,q", "q")[0] == 2


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.txt"
    code, out, _ = run(capsys, "sequnion", "a", "b", "--output", str(target))
    assert code == 0 and out == "" and target.read_text() == "<a, b>\n<b, a>\n"


@pytest.mark.parametrize("argv", [["cg2psg", "turkish_diye", "--format", "latex"],
                                  ["frobnicate"], ["replay", "raising"]])
def test_bad_usage(capsys, argv):
    assert run(capsys, *argv)[0] == 2
