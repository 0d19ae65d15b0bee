// Pure HTML-string renderers over QueryViewState. Arabic content renders
// right-to-left; UI chrome stays left-to-right.

import { LintFlag, ScoredWord } from "./api.js";
import { QueryViewState } from "./state.js";

const RULE_NAMES: Record<string, string> = {
  S1: "morphological-forms-only",
  S2: "ambiguous-pronoun",
  S3: "specialized-before-general",
  S4: "missing-domain-marker",
  S5: "illustrative-phrase",
  S6: "redundant-headword-phrasing",
  S7: "synonym-only",
  S8: "circular-definition",
};

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderResults(results: ScoredWord[]): string {
  if (results.length === 0) {
    return '<p class="empty">no results yet</p>';
  }
  const rows = results.map((r) => {
    // cosine in [-1,1] -> bar width in [0,100]
    const width = Math.round(((r.similarity + 1) / 2) * 100);
    return (
      '<li class="result" dir="rtl">' +
      `<span class="word">${escapeHtml(r.word)}</span>` +
      `<span class="bar" style="width:${width}%"></span>` +
      `<span class="sim">${r.similarity.toFixed(4)}</span>` +
      "</li>"
    );
  });
  return `<ol class="results">${rows.join("")}</ol>`;
}

// Wrap the first occurrence of the evidence substring in <mark>. Falls back
// to the plain gloss when the evidence is not present verbatim (e.g. the
// engine normalized diacritics away).
export function highlightEvidence(gloss: string, evidence: string): string {
  const at = gloss.indexOf(evidence);
  if (evidence.length === 0 || at < 0) return escapeHtml(gloss);
  return (
    escapeHtml(gloss.slice(0, at)) +
    `<mark>${escapeHtml(evidence)}</mark>` +
    escapeHtml(gloss.slice(at + evidence.length))
  );
}

export function renderLintPanel(
  gloss: string,
  flags: LintFlag[],
  score: number | null,
): string {
  if (score === null) {
    return '<p class="empty">lint the gloss to see feedback</p>';
  }
  if (flags.length === 0) {
    return `<p class="clean">no issues, score ${score}</p>`;
  }
  const items = flags.map(
    (f) =>
      '<li class="flag" dir="rtl">' +
      `<code>${escapeHtml(f.rule)}</code> ` +
      `<span class="rule-name">${escapeHtml(RULE_NAMES[f.rule] ?? f.rule)}</span>: ` +
      highlightEvidence(gloss, f.evidence) +
      "</li>",
  );
  return (
    `<p class="score">score ${score}</p>` +
    `<ul class="flags">${items.join("")}</ul>`
  );
}

export function renderBanner(banner: string | null): string {
  return banner === null
    ? ""
    : `<div class="banner" role="alert">${escapeHtml(banner)}</div>`;
}

export function renderApp(state: QueryViewState): string {
  return (
    renderBanner(state.banner) +
    '<section class="query">' +
    renderResults(state.results) +
    "</section>" +
    '<section class="lint">' +
    renderLintPanel(state.text, state.lintFlags, state.lintScore) +
    "</section>"
  );
}
