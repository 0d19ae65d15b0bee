// Browser wiring: DOM events drive state transitions, every transition
// re-renders. Kept thin — all logic lives in state.ts/render.ts and is
// covered by tests there.

import { EngineClient, EngineError } from "./api.js";
import { renderApp } from "./render.js";
import {
  QueryViewState,
  canSubmit,
  initialState,
  lintFailed,
  lintSucceeded,
  queryFailed,
  querySucceeded,
  setK,
  setText,
  submitStarted,
} from "./state.js";

const client = new EngineClient(
  (window as { ENGINE_URL?: string }).ENGINE_URL ?? "",
);

let state: QueryViewState = initialState();

const textBox = document.getElementById("definition") as HTMLTextAreaElement;
const wordBox = document.getElementById("headword") as HTMLInputElement;
const kBox = document.getElementById("k") as HTMLInputElement;
const submitBtn = document.getElementById("submit") as HTMLButtonElement;
const lintBtn = document.getElementById("lint") as HTMLButtonElement;
const app = document.getElementById("app") as HTMLElement;

function apply(next: QueryViewState): void {
  state = next;
  submitBtn.disabled = !canSubmit(state);
  app.innerHTML = renderApp(state);
}

async function submit(): Promise<void> {
  if (!canSubmit(state)) return;
  apply(submitStarted(state));
  const generation = state.generation;
  try {
    const results = await client.queryText(state.text, state.k);
    apply(querySucceeded(state, generation, results));
  } catch (err) {
    const message =
      err instanceof EngineError ? err.message : "engine unreachable";
    apply(queryFailed(state, generation, message));
  }
}

async function lint(): Promise<void> {
  const word = wordBox.value.trim();
  if (!word || !state.text.trim()) return;
  try {
    const result = await client.lint(word, state.text);
    apply(lintSucceeded(state, result.flags, result.score));
  } catch (err) {
    const message =
      err instanceof EngineError ? err.message : "engine unreachable";
    apply(lintFailed(state, message));
  }
}

client
  .health()
  .then((info) => apply({ ...state, maxK: info.max_k }))
  .catch(() => apply(queryFailed(state, state.generation, "engine unreachable")));

textBox.addEventListener("input", () => apply(setText(state, textBox.value)));
kBox.addEventListener("change", () => apply(setK(state, Number(kBox.value))));
submitBtn.addEventListener("click", () => void submit());
lintBtn.addEventListener("click", () => void lint());
apply(state);
