"""Rule-based quality linting for dictionary definitions.

Eight rules (S1..S8) approximate common defects in Arabic glosses with
conservative lexical heuristics: morphological-forms-only entries, dangling
pronouns, specialized senses without domain context, idiomatic phrasing,
redundant headwords, synonym lists, and circular definitions. Rules operate
on NFC-normalized text with diacritics stripped by default; every flag
carries the matched evidence substring. Heuristics are tuned for precision
over recall and all lexicons are configurable.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .data import Dataset, Entry


class LintRuleId(str, Enum):
    S1 = "S1"  # morphological-forms-only
    S2 = "S2"  # ambiguous-pronoun
    S3 = "S3"  # specialized-before-general
    S4 = "S4"  # missing-domain-marker
    S5 = "S5"  # illustrative-phrase
    S6 = "S6"  # redundant-headword-phrasing
    S7 = "S7"  # synonym-only
    S8 = "S8"  # circular-definition


RULE_NAMES = {
    LintRuleId.S1: "morphological-forms-only",
    LintRuleId.S2: "ambiguous-pronoun",
    LintRuleId.S3: "specialized-before-general",
    LintRuleId.S4: "missing-domain-marker",
    LintRuleId.S5: "illustrative-phrase",
    LintRuleId.S6: "redundant-headword-phrasing",
    LintRuleId.S7: "synonym-only",
    LintRuleId.S8: "circular-definition",
}

# Arabic diacritics (harakat, tanween, shadda, sukun, superscript alef) + tatweel
_DIACRITICS = re.compile("[\u0640\u064B-\u065F\u0670\u06D6-\u06ED]")
_PUNCT_SPLIT = re.compile(r"[\s.,;:!?()\[\]«»\"'،؛؟]+")
_COMMA = re.compile(r"[,،؛;]")

# short function words never counted as content overlap
_STOPWORDS = {"في", "على", "من", "الى", "إلى", "عن", "ما", "لا", "او", "أو", "و", "ان", "أن", "به", "بها", "له", "لها"}


def normalize(text: str, strip_diacritics: bool = True) -> str:
    text = unicodedata.normalize("NFC", text)
    if strip_diacritics:
        text = _DIACRITICS.sub("", text)
    return text.strip()


def tokenize(text: str) -> list:
    return [t for t in _PUNCT_SPLIT.split(text) if t]


def _strip_article(token: str) -> str:
    return token[2:] if token.startswith("ال") and len(token) > 4 else token


@dataclass
class LintConfig:
    morphological_marker_lexicon: list = field(default_factory=lambda: [
        "فهو", "فهي", "والمفعول", "المفعول", "مصدر", "اسم فاعل",
        "اسم مفعول", "جمعه", "مثناه",
    ])
    # attached object/possessive pronouns checked on the gloss's first token
    pronoun_prefix_lexicon: list = field(default_factory=lambda: [
        "ها", "هما", "هم", "هن",
    ])
    domain_keyword_lexicon: dict = field(default_factory=lambda: {
        "قانون": ["القانونية", "قانوني", "قضية", "المحكمة"],
        "رياضيات": ["المثلث", "معادلة", "الزاوية"],
        "نسيج": ["الثوب", "نسيج"],
        "طباعة": ["الراصف", "المطبعة"],
    })
    domain_tag_patterns: list = field(default_factory=lambda: [
        r"\(في [^)]+\)",
        r"في القانون",
        r"في الرياضيات",
        r"في الطب",
        r"في علم \S+",
        r"اصطلاحا",
    ])
    # first-/second-person possessive openings typical of quoted idioms
    idiom_patterns: list = field(default_factory=lambda: [
        r"^\S{3,}ي(?=\s|$)",
        r"^\S{3,}ك(?=\s|$)",
    ])
    synonym_only_max_tokens: int = 3
    min_definition_tokens: int = 2
    strip_diacritics: bool = True
    enabled_rules: frozenset = field(
        default_factory=lambda: frozenset(LintRuleId))


@dataclass
class LintFlag:
    rule: LintRuleId
    evidence: str


@dataclass
class LintRow:
    word: str
    id: Optional[str]
    flags: list
    score: int
    skipped: bool = False  # empty gloss, not linted


@dataclass
class LintSummary:
    histogram: dict  # score 1..5 -> count
    mean_score: float
    n_linted: int
    n_skipped: int


def _rule_s1(headword, gloss, tokens, cfg):
    hits = []
    for marker in cfg.morphological_marker_lexicon:
        if marker in gloss:
            hits.append(marker)
    if len(hits) >= 2:
        return LintFlag(LintRuleId.S1, hits[0])
    if hits and tokens and all(
            any(m in t for m in cfg.morphological_marker_lexicon) or t in _STOPWORDS
            for t in tokens):
        return LintFlag(LintRuleId.S1, hits[0])
    return None


def _rule_s2(headword, gloss, tokens, cfg):
    if not tokens:
        return None
    first = tokens[0]
    for suffix in cfg.pronoun_prefix_lexicon:
        if first.endswith(suffix) and len(first) >= len(suffix) + 3:
            return LintFlag(LintRuleId.S2, first)
    return None


def _domain_hits(gloss, cfg):
    for keywords in cfg.domain_keyword_lexicon.values():
        for kw in keywords:
            if kw in gloss:
                return kw
    return None


def _domain_tag(gloss, cfg):
    for pattern in cfg.domain_tag_patterns:
        m = re.search(pattern, gloss)
        if m:
            return m
    return None


def _rule_s3(headword, gloss, tokens, cfg):
    kw = _domain_hits(gloss, cfg)
    if kw is None:
        return None
    tag = _domain_tag(gloss, cfg)
    # specialized-first: an explicit domain tag with nothing general before it
    if tag is not None and not gloss[:tag.start()].strip():
        return LintFlag(LintRuleId.S3, tag.group(0))
    return None


def _rule_s4(headword, gloss, tokens, cfg):
    kw = _domain_hits(gloss, cfg)
    if kw is not None and _domain_tag(gloss, cfg) is None:
        return LintFlag(LintRuleId.S4, kw)
    return None


def _rule_s5(headword, gloss, tokens, cfg):
    if len(tokens) >= cfg.min_definition_tokens + 3:
        return None
    for pattern in cfg.idiom_patterns:
        m = re.search(pattern, gloss)
        if m:
            return LintFlag(LintRuleId.S5, m.group(0))
    return None


def _rule_s6(headword, gloss, tokens, cfg):
    head_tokens = tokenize(headword)
    if len(head_tokens) <= 2:
        return None
    gloss_tokens = set(tokens)
    for t in head_tokens[1:]:
        if len(t) >= 3 and t not in _STOPWORDS and t in gloss_tokens:
            return LintFlag(LintRuleId.S6, t)
    return None


def _rule_s7(headword, gloss, tokens, cfg):
    if not tokens or len(tokens) > cfg.synonym_only_max_tokens:
        return None
    has_comma = bool(_COMMA.search(gloss))
    if len(tokens) == 1:
        return LintFlag(LintRuleId.S7, tokens[0])
    conj_chain = all(t.startswith("و") and len(t) > 2 for t in tokens[1:])
    if has_comma or conj_chain:
        return LintFlag(LintRuleId.S7, tokens[1])
    return None


def _rule_s8(headword, gloss, tokens, cfg):
    head_tokens = tokenize(headword)
    if not head_tokens:
        return None
    core = head_tokens[0]
    variants = {core, _strip_article(core)}
    for t in tokens:
        if t in variants or _strip_article(t) in variants:
            return LintFlag(LintRuleId.S8, t)
    return None


_RULES = {
    LintRuleId.S1: _rule_s1,
    LintRuleId.S2: _rule_s2,
    LintRuleId.S3: _rule_s3,
    LintRuleId.S4: _rule_s4,
    LintRuleId.S5: _rule_s5,
    LintRuleId.S6: _rule_s6,
    LintRuleId.S7: _rule_s7,
    LintRuleId.S8: _rule_s8,
}


def lint_entry(entry: Entry, cfg: Optional[LintConfig] = None) -> LintRow:
    """Apply every enabled rule to one entry. Empty glosses are skipped
    (marked, not errored)."""
    cfg = cfg or LintConfig()
    if not entry.gloss or not entry.gloss.strip():
        return LintRow(word=entry.word, id=entry.id, flags=[], score=5,
                       skipped=True)
    gloss = normalize(entry.gloss, cfg.strip_diacritics)
    headword = normalize(entry.word, cfg.strip_diacritics)
    tokens = tokenize(gloss)
    flags = []
    for rule_id in LintRuleId:
        if rule_id not in cfg.enabled_rules:
            continue
        flag = _RULES[rule_id](headword, gloss, tokens, cfg)
        if flag is not None:
            flags.append(flag)
    score = max(1, 5 - len({f.rule for f in flags}))
    return LintRow(word=entry.word, id=entry.id, flags=flags, score=score)


def lint_dataset(dataset: Dataset, cfg: Optional[LintConfig] = None):
    """Lint every entry with a non-empty gloss; returns (rows, summary)."""
    cfg = cfg or LintConfig()
    rows = [lint_entry(e, cfg) for e in dataset.entries]
    linted = [r for r in rows if not r.skipped]
    histogram = {s: 0 for s in range(1, 6)}
    for r in linted:
        histogram[r.score] += 1
    mean = sum(r.score for r in linted) / len(linted) if linted else 0.0
    summary = LintSummary(histogram=histogram, mean_score=mean,
                          n_linted=len(linted),
                          n_skipped=len(rows) - len(linted))
    return [r for r in rows if not r.skipped], summary


def row_to_json(row: LintRow) -> dict:
    return {
        "word": row.word,
        "flags": [{"rule": f.rule.value, "evidence": f.evidence}
                  for f in row.flags],
        "score": row.score,
    }
