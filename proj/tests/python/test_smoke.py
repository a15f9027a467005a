import json
import pathlib

import jsonschema
import pytest

import mwetk

ROOT = pathlib.Path(__file__).resolve().parents[2]
FIX = ROOT / "tests" / "fixtures"
SCHEMAS = ROOT / "schemas"


def validate(doc, name):
    schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
    jsonschema.validate(doc, schema)


@pytest.fixture
def gold():
    return mwetk.Corpus.read_cupt_file(str(FIX / "eval_gold.cupt"))


@pytest.fixture
def lexicon():
    return mwetk.Lexicon.load(str(FIX / "lexicon_small.txt"))


def test_cupt_and_json_round_trip(gold):
    assert len(gold) == 7
    assert mwetk.Corpus.read_cupt(gold.to_cupt()) == gold
    doc = mwetk.corpus_to_dict(gold)
    validate(doc, "corpus")
    assert mwetk.corpus_from_dict(doc) == gold


def test_parse_error_carries_line():
    with pytest.raises(mwetk.ParseError) as info:
        mwetk.Corpus.read_cupt("# sent_id = a\n1\tx\n")
    assert info.value.line == 2
    assert isinstance(info.value, mwetk.MwetkError)


def test_identify_matches_checked_in_prediction(gold, lexicon):
    pred = mwetk.identify(gold, lexicon, overlap="longest")
    expected = mwetk.Corpus.read_cupt_file(str(FIX / "eval_pred_rule.cupt"))
    assert pred == expected
    for s in pred.sentences:
        for m in s.mwes:
            assert m.source == "predicted"


def test_evaluate_known_scores(gold, lexicon):
    pred = mwetk.Corpus.read_cupt_file(str(FIX / "eval_pred_llm.cupt"))
    report = mwetk.evaluate(gold, pred, lexicon=lexicon)
    validate(report, "eval-report")
    assert report["precision"] == pytest.approx(0.6)
    assert report["recall"] == pytest.approx(3 / 7)
    assert report["f1"] == pytest.approx(0.5)
    assert mwetk.evaluate(gold, gold)["f1"] == 1.0


def test_stats_and_iaa(gold):
    st = mwetk.stats(gold)
    validate(st, "stats")
    assert st["total"]["mwes"] == 7
    validate(mwetk.stats(gold, group_by="text"), "stats")
    agreement = mwetk.iaa([gold, gold])
    validate(agreement, "iaa")
    assert agreement["mean"] == 1.0


def test_tag_types_keeps_existing(gold):
    tagged, _diags = mwetk.tag_types(gold)
    assert tagged == gold


def test_consistency_accept_reaches_fixpoint():
    c = mwetk.Corpus.read_cupt_file(str(FIX / "give_try.cupt"))
    report = mwetk.consistency_report(c)
    validate(report, "consistency-report")
    assert [x["sentence_id"] for x in report["candidates"]] == ["r2"]
    decisions = {
        "schema": "mwetk.consistency-decisions/1",
        "decisions": [dict(x, decision="accept") for x in report["candidates"]],
    }
    validate(decisions, "consistency-decisions")
    fixed = mwetk.apply_decisions(c, decisions)
    assert fixed.mwe_count == c.mwe_count + 1
    assert mwetk.consistency_report(fixed)["candidates"] == []


def test_llm_format_round_trip(gold):
    s = gold.sentences[0]
    assert mwetk.to_llm_input(s).splitlines() == s.words
    mwes, diags = mwetk.parse_llm_output(mwetk.to_llm_output(s), s)
    assert diags == []
    assert [m.token_indices for m in mwes] == [m.token_indices for m in s.mwes]
    prompt = mwetk.build_prompt(s, "short")
    assert mwetk.mwe_definition("short") in prompt


def test_lexicon_and_mwe_validation():
    lex = mwetk.Lexicon([["give", "up"]])
    assert lex.contains(["give", "up"])
    assert lex.contains(["up", "give"], multiset=True)
    assert not lex.contains(["up", "give"])
    with pytest.raises(mwetk.MwetkError):
        mwetk.Lexicon([["single"]])
    with pytest.raises(mwetk.MwetkError):
        mwetk.MweInstance([3, 3])


def test_service_config_schema():
    config = {
        "schema": "mwetk.service-config/1",
        "rows": 9,
        "users": [
            {"id": "a", "token": "ta", "role": "annotator"},
            {"id": "b", "token": "tb", "role": "annotator"},
            {"id": "r", "token": "tr", "role": "reviewer"},
        ],
    }
    validate(config, "service-config")
