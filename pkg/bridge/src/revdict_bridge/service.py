"""HTTP surface over a loaded encoder: /embed, /embed_batch, /health.

The encoder is immutable after startup; requests never mutate it. Batch
requests are chunked to the configured batch size to bound memory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .encoder import EncoderError, load_encoder


@dataclass
class BridgeConfig:
    model_id: str = "hash:256"
    dim: Optional[int] = None  # verified against the encoder when given
    host: str = "127.0.0.1"
    port: int = 8081
    batch_size: int = 32


def _bad_request(message: str) -> JSONResponse:
    return JSONResponse(status_code=400, content={"error": message})


def create_app(encoder, model_id: str, batch_size: int = 32) -> FastAPI:
    app = FastAPI(title="revdict-bridge")

    async def read_json(request: Request):
        try:
            body = await request.json()
        except Exception:
            return None
        return body if isinstance(body, dict) else None

    @app.get("/health")
    def health():
        return {"status": "ok", "dim": encoder.dim, "model": model_id}

    @app.post("/embed")
    async def embed(request: Request):
        body = await read_json(request)
        if body is None:
            return _bad_request("body must be a JSON object")
        text = body.get("text")
        if not isinstance(text, str) or not text.strip():
            return _bad_request("\"text\" must be a non-empty string")
        try:
            vec = encoder.encode(text)
        except EncoderError as exc:
            return JSONResponse(status_code=500, content={"error": str(exc)})
        return {"embedding": vec.tolist()}

    @app.post("/embed_batch")
    async def embed_batch(request: Request):
        body = await read_json(request)
        if body is None:
            return _bad_request("body must be a JSON object")
        texts = body.get("texts")
        if not isinstance(texts, list) or not texts or not all(
                isinstance(t, str) and t.strip() for t in texts):
            return _bad_request(
                "\"texts\" must be a non-empty array of non-empty strings")
        out = []
        try:
            for start in range(0, len(texts), batch_size):
                chunk = texts[start:start + batch_size]
                out.append(encoder.encode_batch(chunk))
        except EncoderError as exc:
            return JSONResponse(status_code=500, content={"error": str(exc)})
        return {"embeddings": np.vstack(out).tolist()}

    return app


def serve_bridge(cfg: BridgeConfig) -> None:
    """Load the configured encoder, verify the declared dimension, and run
    until terminated."""
    import uvicorn
    encoder = load_encoder(cfg.model_id)
    if cfg.dim is not None and cfg.dim != encoder.dim:
        raise EncoderError(
            f"declared dim {cfg.dim} != encoder dim {encoder.dim}")
    app = create_app(encoder, cfg.model_id, cfg.batch_size)
    uvicorn.run(app, host=cfg.host, port=cfg.port)
