"""HTTP surface over a loaded model, retrieval index, and lint config.

All shared state is immutable after startup; requests never mutate it.
Body validation is done by hand so malformed requests get a plain 400.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import requests as _requests
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .data import Entry
from .lint import LintConfig, lint_entry, row_to_json
from .model import SemiEncoder, forward
from .retrieval import RetrievalIndex, top_k


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    checkpoint_path: str = ""
    vocabulary_path: str = ""
    bridge_url: Optional[str] = None
    max_k: int = 100


def _bad_request(message: str) -> JSONResponse:
    return JSONResponse(status_code=400, content={"error": message})


def create_app(model: SemiEncoder, index: RetrievalIndex,
               lint_cfg: Optional[LintConfig] = None,
               bridge_url: Optional[str] = None,
               max_k: int = 100) -> FastAPI:
    app = FastAPI(title="revdict")
    lint_cfg = lint_cfg or LintConfig()

    def run_query(embedding, k):
        q, _ = forward(model, np.asarray(embedding, dtype=np.float64)[None, :],
                       train_mode=False)
        results = top_k(index, q[0], k)
        return {"results": [{"word": sw.word, "similarity": sw.similarity}
                            for sw in results]}

    async def read_json(request: Request):
        try:
            body = await request.json()
        except Exception:
            return None
        return body if isinstance(body, dict) else None

    @app.get("/health")
    def health():
        return {"status": "ok", "dim_in": model.d, "dim_out": model.b,
                "vocab_size": len(index), "max_k": max_k}

    @app.post("/query")
    async def query(request: Request):
        body = await read_json(request)
        if body is None:
            return _bad_request("body must be a JSON object")
        emb = body.get("embedding")
        k = body.get("k", 10)
        if not isinstance(emb, list) or not all(
                isinstance(v, (int, float)) for v in emb):
            return _bad_request("\"embedding\" must be an array of numbers")
        if len(emb) != model.d:
            return _bad_request(
                f"embedding has dimension {len(emb)}, expected {model.d}")
        if not isinstance(k, int) or not (1 <= k <= max_k):
            return _bad_request(f"\"k\" must be an integer in [1, {max_k}]")
        return run_query(emb, k)

    @app.post("/query_text")
    async def query_text(request: Request):
        body = await read_json(request)
        if body is None:
            return _bad_request("body must be a JSON object")
        text = body.get("text")
        k = body.get("k", 10)
        if not isinstance(text, str) or not text.strip():
            return _bad_request("\"text\" must be a non-empty string")
        if not isinstance(k, int) or not (1 <= k <= max_k):
            return _bad_request(f"\"k\" must be an integer in [1, {max_k}]")
        if not bridge_url:
            return JSONResponse(status_code=503, content={
                "error": "no embedding bridge configured for text queries"})
        try:
            resp = _requests.post(f"{bridge_url.rstrip('/')}/embed",
                                  json={"text": text}, timeout=30)
            resp.raise_for_status()
            emb = resp.json()["embedding"]
        except Exception as exc:
            return JSONResponse(status_code=503, content={
                "error": f"embedding bridge unreachable: {exc}"})
        if len(emb) != model.d:
            return JSONResponse(status_code=503, content={
                "error": f"bridge returned dimension {len(emb)}, "
                         f"model expects {model.d}"})
        # text queries go through the model: definition space -> word space
        q, _ = forward(model, np.asarray(emb, dtype=np.float64)[None, :],
                       train_mode=False)
        results = top_k(index, q[0], k)
        return {"results": [{"word": sw.word, "similarity": sw.similarity}
                            for sw in results]}

    @app.post("/lint")
    async def lint(request: Request):
        body = await read_json(request)
        if body is None:
            return _bad_request("body must be a JSON object")
        word = body.get("word")
        gloss = body.get("gloss")
        if not isinstance(word, str) or not word:
            return _bad_request("\"word\" must be a non-empty string")
        if not isinstance(gloss, str):
            return _bad_request("\"gloss\" must be a string")
        row = lint_entry(Entry(word=word, gloss=gloss), lint_cfg)
        return row_to_json(row)

    return app
