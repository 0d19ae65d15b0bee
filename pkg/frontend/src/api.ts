// Typed client for the engine's HTTP endpoints. The UI talks only to the
// engine; the embedding bridge is the engine's concern.

export interface ScoredWord {
  word: string;
  similarity: number;
}

export interface LintFlag {
  rule: string;
  evidence: string;
}

export interface LintResult {
  word: string;
  flags: LintFlag[];
  score: number;
}

export interface HealthInfo {
  status: string;
  dim_in: number;
  dim_out: number;
  vocab_size: number;
  max_k: number;
}

export class EngineError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

async function readError(resp: Response): Promise<string> {
  try {
    const body = await resp.json();
    if (body && typeof body.error === "string") return body.error;
  } catch {
    // fall through to the generic message
  }
  return `engine returned ${resp.status}`;
}

export class EngineClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async health(): Promise<HealthInfo> {
    const resp = await fetch(this.url("/health"));
    if (!resp.ok) throw new EngineError(await readError(resp), resp.status);
    return (await resp.json()) as HealthInfo;
  }

  async queryText(text: string, k: number): Promise<ScoredWord[]> {
    const resp = await fetch(this.url("/query_text"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ text, k }),
    });
    if (resp.status === 503) {
      // bridge down: the engine cannot embed text right now
      throw new EngineError("encoder unavailable", 503);
    }
    if (!resp.ok) throw new EngineError(await readError(resp), resp.status);
    const body = await resp.json();
    return body.results as ScoredWord[];
  }

  async lint(word: string, gloss: string): Promise<LintResult> {
    const resp = await fetch(this.url("/lint"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ word, gloss }),
    });
    if (!resp.ok) throw new EngineError(await readError(resp), resp.status);
    return (await resp.json()) as LintResult;
  }
}
