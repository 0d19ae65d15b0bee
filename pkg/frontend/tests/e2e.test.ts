// Scripted end-to-end pass against a fixture engine: submit a definition,
// render k results sorted descending, lint the gloss, and render the flag
// with its evidence highlighted.

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { Server } from "node:http";

import { EngineClient, EngineError } from "../src/api.js";
import { renderApp, renderLintPanel, renderResults } from "../src/render.js";
import {
  initialState,
  lintSucceeded,
  queryFailed,
  querySucceeded,
  setText,
  submitStarted,
} from "../src/state.js";
import { startFixtureEngine } from "./fixture-engine.js";

let server: Server;
let client: EngineClient;

beforeAll(async () => {
  const engine = await startFixtureEngine();
  server = engine.server;
  client = new EngineClient(engine.url);
});

afterAll(() => {
  server.close();
});

describe("end-to-end query flow", () => {
  it("health reports the engine contract", async () => {
    const info = await client.health();
    expect(info.status).toBe("ok");
    expect(info.max_k).toBe(10);
  });

  it("renders k results sorted descending", async () => {
    let state = setText(initialState(), "سدادة من الفلين تغلق الزجاجة");
    state = submitStarted(state);
    const results = await client.queryText(state.text, 3);
    state = querySucceeded(state, state.generation, results);

    expect(state.results.length).toBe(3);
    const sims = state.results.map((r) => r.similarity);
    expect(sims).toEqual([...sims].sort((a, b) => b - a));

    const html = renderResults(state.results);
    expect((html.match(/class="result"/g) ?? []).length).toBe(3);
    expect(html).toContain("سدادة");
  });

  it("renders a lint flag with evidence highlighted", async () => {
    const gloss = "الدخول في تحالف مع طرف آخر";
    let state = setText(initialState(), gloss);
    const lint = await client.lint("تحالف", gloss);
    state = lintSucceeded(state, lint.flags, lint.score);

    expect(state.lintFlags).toEqual([{ rule: "S8", evidence: "تحالف" }]);
    const html = renderLintPanel(gloss, state.lintFlags, state.lintScore);
    expect(html).toContain("<mark>تحالف</mark>");
    expect(html).toContain("circular-definition");
    expect(html).toContain("score 4");
  });

  it("renders a clean lint verdict", async () => {
    const gloss = "مبنى يسكن فيه الناس";
    const lint = await client.lint("بيت", gloss);
    expect(renderLintPanel(gloss, lint.flags, lint.score)).toContain(
      "no issues, score 5",
    );
  });
});

describe("bridge-down path", () => {
  it("shows the encoder banner and keeps prior results", async () => {
    const down = await startFixtureEngine({ bridgeDown: true });
    const downClient = new EngineClient(down.url);
    try {
      let state = setText(initialState(), "وصف ما");
      state = querySucceeded(state, state.generation, [
        { word: "سابق", similarity: 0.5 },
      ]);
      state = submitStarted(state);
      let message = "unexpected success";
      try {
        await downClient.queryText(state.text, 5);
      } catch (err) {
        message = err instanceof EngineError ? err.message : "other";
      }
      state = queryFailed(state, state.generation, message);

      expect(state.banner).toBe("encoder unavailable");
      expect(state.results.map((r) => r.word)).toEqual(["سابق"]);
      const html = renderApp(state);
      expect(html).toContain("encoder unavailable");
      expect(html).toContain("سابق");
    } finally {
      down.server.close();
    }
  });
});
