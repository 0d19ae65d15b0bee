// View state and its transitions. Rendering is a pure function of this
// state, and every transition returns a fresh object so stale renders are
// impossible to alias.
//
// Concurrency: `generation` counts submissions. A response only lands if it
// carries the current generation, so a newer submission silently cancels
// the render of any older in-flight request.

import { LintFlag, ScoredWord } from "./api.js";

export interface QueryViewState {
  text: string;
  k: number;
  maxK: number;
  inFlight: boolean;
  generation: number;
  results: ScoredWord[];
  lintFlags: LintFlag[];
  lintScore: number | null;
  banner: string | null;
}

export function initialState(maxK: number = 100): QueryViewState {
  return {
    text: "",
    k: 10,
    maxK,
    inFlight: false,
    generation: 0,
    results: [],
    lintFlags: [],
    lintScore: null,
    banner: null,
  };
}

export function setText(state: QueryViewState, text: string): QueryViewState {
  return { ...state, text };
}

export function setK(state: QueryViewState, k: number): QueryViewState {
  const clamped = Math.min(Math.max(1, Math.floor(k)), state.maxK);
  return { ...state, k: clamped };
}

export function canSubmit(state: QueryViewState): boolean {
  return state.text.trim().length > 0 && !state.inFlight;
}

export function submitStarted(state: QueryViewState): QueryViewState {
  return {
    ...state,
    inFlight: true,
    banner: null,
    generation: state.generation + 1,
  };
}

export function querySucceeded(
  state: QueryViewState,
  generation: number,
  results: ScoredWord[],
): QueryViewState {
  if (generation !== state.generation) return state; // stale response
  const sorted = [...results].sort((a, b) => b.similarity - a.similarity);
  return { ...state, inFlight: false, results: sorted, banner: null };
}

export function queryFailed(
  state: QueryViewState,
  generation: number,
  message: string,
): QueryViewState {
  if (generation !== state.generation) return state;
  // errors land in the banner; previous results stay on screen
  return { ...state, inFlight: false, banner: message };
}

export function lintSucceeded(
  state: QueryViewState,
  flags: LintFlag[],
  score: number,
): QueryViewState {
  return { ...state, lintFlags: flags, lintScore: score };
}

export function lintFailed(
  state: QueryViewState,
  message: string,
): QueryViewState {
  return { ...state, banner: message };
}
