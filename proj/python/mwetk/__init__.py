"""Python access to the mwetk multiword expression toolkit."""

import json as _json

from ._mwetk import (
    Corpus,
    Lexicon,
    MweInstance,
    MwetkError,
    ParseError,
    Sentence,
    build_prompt,
    identify,
    mwe_definition,
    parse_llm_output,
    system_message,
    tag_types,
    to_llm_input,
    to_llm_output,
)
from . import _mwetk

__all__ = [
    "Corpus",
    "Lexicon",
    "MweInstance",
    "MwetkError",
    "ParseError",
    "Sentence",
    "apply_decisions",
    "build_prompt",
    "consistency_report",
    "corpus_from_dict",
    "corpus_to_dict",
    "evaluate",
    "iaa",
    "identify",
    "mwe_definition",
    "parse_llm_output",
    "stats",
    "system_message",
    "tag_types",
    "to_llm_input",
    "to_llm_output",
]


def corpus_to_dict(corpus):
    return _json.loads(corpus.to_json())


def corpus_from_dict(doc):
    return Corpus.from_json(_json.dumps(doc))


def evaluate(gold, pred, lexicon=None, train=None):
    """Scores `pred` against `gold`; returns the evaluation report as a dict."""
    return _json.loads(_mwetk.evaluate_json(gold, pred, lexicon, train))


def iaa(annotations):
    return _json.loads(_mwetk.iaa_json(list(annotations)))


def stats(corpus, group_by="", drop_unclear=False):
    return _json.loads(_mwetk.stats_json(corpus, group_by, drop_unclear))


def consistency_report(corpus, max_gap=3):
    return _json.loads(_mwetk.consistency_report_json(corpus, max_gap))


def apply_decisions(corpus, decisions):
    """`decisions` is a consistency-decisions document (dict)."""
    return _mwetk.apply_decisions_json(corpus, _json.dumps(decisions))
