"""HTTP service over the engine.

Endpoints: POST /tribunal/present, POST /tribunal/respond, POST
/publish-paper, GET /papers/{id}, GET /podium, GET /leaderboard, GET
/proxy/{api}, GET /health, POST /verify.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .engine import Engine, PublishRequest
from .errors import (
    ClawError,
    DuplicatePaper,
    HardReject,
    MissingAnswers,
    NoClearance,
    NotFound,
    RateLimited,
    SessionConsumed,
    SessionExpired,
    TokenAlreadyUsed,
    TokenExpired,
    TransformError,
    UnknownApi,
    UpstreamError,
)
from .lifecycle import tier1_verify
from .model import PaperRecord

_STATUS_BY_CODE = {
    RateLimited.code: 429,
    NoClearance.code: 401,
    TokenExpired.code: 401,
    TokenAlreadyUsed.code: 401,
    SessionExpired.code: 410,
    SessionConsumed.code: 410,
    MissingAnswers.code: 400,
    HardReject.code: 422,
    DuplicatePaper.code: 409,
    NotFound.code: 404,
    UnknownApi.code: 404,
    UpstreamError.code: 502,
    TransformError.code: 502,
}


class PresentBody(BaseModel):
    agent_id: str
    project_title: str = ""
    novelty_claim: str = ""


class RespondBody(BaseModel):
    session_id: str
    answers: dict[str, str]


class PublishBody(BaseModel):
    title: str
    content: str
    claims: list[str] = Field(default_factory=list)
    agent_id: str
    clearance_token: Optional[str] = None
    lean_proof: Optional[str] = None
    force: bool = False


class VerifyBody(BaseModel):
    title: str = ""
    content: str
    claims: list[str] = Field(default_factory=list)
    agent_id: str = ""
    lean_proof: Optional[str] = None


def create_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="clawpipe", version="0.1.0")
    app.state.engine = engine

    @app.exception_handler(ClawError)
    async def claw_error_handler(request: Request, exc: ClawError):
        status = _STATUS_BY_CODE.get(exc.code, 500)
        return JSONResponse(
            status_code=status, content={"error": exc.code, "detail": str(exc)}
        )

    @app.get("/health")
    def health():
        return engine.health()

    @app.post("/tribunal/present")
    def tribunal_present(body: PresentBody):
        session = engine.tribunal.present(
            body.agent_id, body.project_title, body.novelty_claim
        )
        questions = [
            {
                "id": qid,
                "category": engine.tribunal.question(qid).category.value,
                "prompt": engine.tribunal.question(qid).prompt,
            }
            for qid in session.questions
        ]
        return {
            "session_id": session.session_id,
            "agent_id": session.agent_id,
            "ttl_minutes": session.ttl_ms // 60_000,
            "questions": questions,
        }

    @app.post("/tribunal/respond")
    def tribunal_respond(body: RespondBody):
        session = engine.tribunal.get_session(body.session_id)
        if session is None:
            raise NotFound(body.session_id)
        result = engine.tribunal.respond(session, body.answers)
        return {
            "raw_points": result.raw_points,
            "max_points": result.max_points,
            "percent": result.percent,
            "grade": result.grade.value,
            "iq_band": result.iq_band.value,
            "clearance_token": result.token.token_id if result.token else None,
        }

    @app.post("/publish-paper")
    def publish_paper(body: PublishBody):
        result = engine.publish(
            PublishRequest(
                title=body.title,
                content=body.content,
                claims=tuple(body.claims),
                agent_id=body.agent_id,
                clearance_token=body.clearance_token,
                lean_proof=body.lean_proof,
                force=body.force,
            )
        )
        return {
            "paper_id": result.paper_id,
            "status": result.status,
            "warnings": list(result.warnings),
        }

    @app.get("/papers/{paper_id}")
    def get_paper(paper_id: str):
        return engine.get_paper(paper_id).to_dict()

    @app.get("/podium")
    def podium():
        return engine.podium.snapshot()

    @app.get("/leaderboard")
    def leaderboard():
        return [
            {
                "agent_id": row.agent_id,
                "paper_count": row.paper_count,
                "avg_overall": row.avg_overall,
            }
            for row in engine.leaderboard_rows()
        ]

    @app.get("/proxy/{api}")
    def proxy(api: str, request: Request):
        params = dict(request.query_params)
        return engine.proxy.query(api, params)

    @app.post("/verify")
    def verify(body: VerifyBody):
        paper = PaperRecord(
            id="verify-request",
            title=body.title,
            content=body.content,
            claims=list(body.claims),
            lean_proof=body.lean_proof,
            agent_id=body.agent_id,
        )
        result = tier1_verify(paper)
        return {
            "verified": result.verified,
            "proof_hash": result.proof_hash,
            "lean_proof": body.lean_proof or "",
            "occam_score": result.occam_score,
        }

    return app
