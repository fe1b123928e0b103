"""App factory wiring the ops onto POST routes with typed error mapping.

Status codes: precondition violations (DomainError or any core ValueError)
map to 422, guarded-size refusals to 413, numerical failures to 500.
"""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import NumericalError, ResourceLimitError
from . import ops
from .schemas import (
    BoundsRequest,
    BoundsResponse,
    CounterexampleRequest,
    DualModel,
    DualRequest,
    FitRequest,
    FitResponse,
    GenRequest,
    GenResponse,
    HealthResponse,
    KappaRequest,
    KappaResponse,
    ProfileRequest,
    ProfileResponse,
    RadRequest,
    RadResponse,
)

__all__ = ["create_app"]


def create_app() -> FastAPI:
    app = FastAPI(title="configbounds", version=__version__)

    @app.exception_handler(ValueError)
    async def _precondition(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(ResourceLimitError)
    async def _too_large(request: Request, exc: ResourceLimitError) -> JSONResponse:
        return JSONResponse(status_code=413, content={"detail": str(exc)})

    @app.exception_handler(NumericalError)
    async def _numerical(request: Request, exc: NumericalError) -> JSONResponse:
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/gen", response_model=GenResponse)
    def gen(req: GenRequest) -> GenResponse:
        return ops.run_gen(req)

    @app.post("/dual", response_model=DualModel)
    def dual(req: DualRequest) -> DualModel:
        return ops.run_dual(req)

    @app.post("/kappa", response_model=KappaResponse)
    def kappa(req: KappaRequest) -> KappaResponse:
        return ops.run_kappa(req)

    @app.post("/profile", response_model=ProfileResponse)
    def profile(req: ProfileRequest) -> ProfileResponse:
        return ops.run_profile(req)

    @app.post("/bounds", response_model=BoundsResponse)
    def bounds(req: BoundsRequest) -> BoundsResponse:
        return ops.run_bounds(req)

    @app.post("/fit", response_model=FitResponse)
    def fit(req: FitRequest) -> FitResponse:
        return ops.run_fit(req)

    @app.post("/rad", response_model=RadResponse)
    def rad(req: RadRequest) -> RadResponse:
        return ops.run_rad(req)

    @app.post("/counterexample")
    def counterexample(req: CounterexampleRequest) -> dict[str, Any]:
        return ops.run_counterexample(req)

    return app
