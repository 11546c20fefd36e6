"""FastAPI application exposing the adaptation pipeline.

Run with:

    uvicorn chanadapt.service:app --host 127.0.0.1 --port 8337

Domain errors map to HTTP 400 with ``{"error": <message>, "kind":
<exception class>}``; the message text is exactly what the library
raises, so remote clients see the same diagnostics as local callers.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__, handlers
from . import schemas as sc
from .errors import ChanAdaptError, UsageError

app = FastAPI(title="chanadapt", version=__version__)


@app.exception_handler(ChanAdaptError)
async def _domain_error(_request: Request, exc: ChanAdaptError) -> JSONResponse:
    status = 404 if isinstance(exc, UsageError) else 400
    return JSONResponse(status_code=status,
                        content={"error": str(exc), "kind": type(exc).__name__})


@app.get("/health", response_model=sc.HealthOut)
def health() -> sc.HealthOut:
    return handlers.health()


@app.get("/montages", response_model=sc.MontageListOut)
def montages() -> sc.MontageListOut:
    return handlers.montage_list()


@app.get("/montages/{name}", response_model=sc.MontageOut)
def montage(name: str) -> sc.MontageOut:
    return handlers.montage_show(name)


@app.post("/matrices/ssi", response_model=sc.MatrixPayload)
def matrices_ssi(req: sc.SsiRequest) -> sc.MatrixPayload:
    return handlers.matrix_ssi(req)


@app.post("/matrices/harmonic", response_model=sc.MatrixPayload)
def matrices_harmonic(req: sc.HarmonicRequest) -> sc.MatrixPayload:
    return handlers.matrix_harmonic(req)


@app.post("/matrices/lsq", response_model=sc.MatrixPayload)
def matrices_lsq(req: sc.LsqRequest) -> sc.MatrixPayload:
    return handlers.matrix_lsq(req)


@app.post("/matrices/riemannian", response_model=sc.MatrixPayload)
def matrices_riemannian(req: sc.RiemannianRequest) -> sc.MatrixPayload:
    return handlers.matrix_riemannian(req)


@app.post("/matrices/identity", response_model=sc.MatrixPayload)
def matrices_identity(req: sc.IdentityRequest) -> sc.MatrixPayload:
    return handlers.matrix_identity(req)


@app.post("/signals/apply", response_model=sc.SignalPayload)
def signals_apply(req: sc.ApplyRequest) -> sc.SignalPayload:
    return handlers.signal_apply(req)


@app.post("/signals/resample", response_model=sc.SignalPayload)
def signals_resample(req: sc.ResampleRequest) -> sc.SignalPayload:
    return handlers.signal_resample(req)


@app.post("/signals/normalize", response_model=sc.SignalPayload)
def signals_normalize(req: sc.NormalizeRequest) -> sc.SignalPayload:
    return handlers.signal_normalize(req)


@app.post("/synth/field", response_model=sc.SignalPayload)
def synth_field(req: sc.SynthFieldRequest) -> sc.SignalPayload:
    return handlers.synth_field_handler(req)


@app.post("/synth/epochs", response_model=sc.EpochSetPayload)
def synth_epochs(req: sc.SynthEpochsRequest) -> sc.EpochSetPayload:
    return handlers.synth_epochs_handler(req)


@app.post("/bench/run", response_model=sc.BenchResponse)
def bench_run(req: sc.BenchRequest) -> sc.BenchResponse:
    return handlers.bench_run(req)


@app.post("/stats/report", response_model=sc.StatsReportOut)
def stats_report(req: sc.StatsRequest) -> sc.StatsReportOut:
    return handlers.stats_from_rows(req)


def main() -> None:
    import uvicorn

    uvicorn.run(app, host="127.0.0.1", port=8337)


if __name__ == "__main__":
    main()
