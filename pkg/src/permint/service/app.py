"""FastAPI service wrapping the core package.

Every endpoint is a plain synchronous function taking one request model, so
the CLI can call the same functions in-process without a running server.
Domain validation errors (bad shapes, guards, non-bijective mappings)
surface as HTTP 400 with the original message.
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import __version__, fock, linops, mcint, permanent
from . import schemas


def health() -> dict:
    return {"status": "ok", "version": __version__}


def generate_haar_unitary(req: schemas.HaarUnitaryRequest) -> schemas.MatrixModel:
    return schemas.MatrixModel.from_array(linops.haar_random_unitary(req.m, req.seed))


def generate_permutation_unitary(req: schemas.PermutationUnitaryRequest) -> schemas.MatrixModel:
    return schemas.MatrixModel.from_array(linops.permutation_unitary(req.mapping))


def compute_permanent(req: schemas.PermanentRequest) -> schemas.PermanentResponse:
    result = permanent.compute_permanent(req.matrix.to_array(), req.algorithm)
    return schemas.PermanentResponse(
        re=result.value.real,
        im=result.value.imag,
        algorithm=result.algorithm,
        dimension=result.dimension,
    )


def compute_amplitude(req: schemas.AmplitudeRequest) -> schemas.AmplitudeResponse:
    amp = fock.amplitude(req.matrix.to_array(), req.n, req.occupations)
    return schemas.AmplitudeResponse(re=amp.real, im=amp.imag, probability=abs(amp) ** 2)


def compute_distribution(req: schemas.DistributionRequest) -> schemas.DistributionResponse:
    dist = fock.output_distribution(req.matrix.to_array(), req.n)
    entries = [
        schemas.DistributionEntryModel(
            occupations=list(e.occupations),
            re=e.amplitude.real,
            im=e.amplitude.imag,
            probability=e.probability,
        )
        for e in dist.entries
    ]
    return schemas.DistributionResponse(
        n=dist.n, m=dist.m, entries=entries, total_probability=dist.total_probability()
    )


def compute_distribution_csv(req: schemas.DistributionRequest) -> str:
    return fock.distribution_to_csv(fock.output_distribution(req.matrix.to_array(), req.n))


def run_mc_integral(req: schemas.McIntegrateRequest) -> schemas.McEstimateModel:
    est = mcint.mc_probability(
        req.matrix.to_array(), req.n, req.form, req.n_samples, req.seed, req.workers
    )
    return schemas.McEstimateModel(**est.to_dict())


def run_cross_form_report(req: schemas.CrossFormRequest) -> schemas.CrossFormResponse:
    report = mcint.cross_form_report(
        req.matrix.to_array(), req.n, req.n_samples, req.seed, req.workers
    )
    doc = report.to_dict()
    return schemas.CrossFormResponse(
        reference=doc["reference"],
        forms=[schemas.FormReportModel(**f) for f in doc["forms"]],
        pairwise_z=doc["pairwise_z"],
        passed=report.passed(),
    )


def run_identity_checks(req: schemas.IdentitiesRequest) -> schemas.IdentitiesResponse:
    checks = []
    all_passed = True
    for tag in mcint.IDENTITY_REFERENCES:
        est = mcint.verify_identity(tag, req.n_samples, req.seed, req.workers)
        reference = mcint.identity_reference(tag)
        z = (est.mean - reference) / est.std_error if est.std_error > 0 else 0.0
        ok = abs(z) <= 4.0
        all_passed = all_passed and ok
        checks.append(
            schemas.IdentityCheckModel(
                **est.to_dict(), reference=reference, z=z, passed=ok
            )
        )
    return schemas.IdentitiesResponse(checks=checks, passed=all_passed)


def create_app() -> FastAPI:
    app = FastAPI(title="permint", version=__version__)

    app.get("/health")(health)
    app.post("/unitary/haar", response_model=schemas.MatrixModel)(generate_haar_unitary)
    app.post("/unitary/permutation", response_model=schemas.MatrixModel)(
        generate_permutation_unitary
    )
    app.post("/permanent", response_model=schemas.PermanentResponse)(compute_permanent)
    app.post("/amplitude", response_model=schemas.AmplitudeResponse)(compute_amplitude)
    app.post("/distribution", response_model=schemas.DistributionResponse)(compute_distribution)
    app.post("/distribution/csv", response_class=PlainTextResponse)(compute_distribution_csv)
    app.post("/mc/integrate", response_model=schemas.McEstimateModel)(run_mc_integral)
    app.post("/mc/cross-form-report", response_model=schemas.CrossFormResponse)(
        run_cross_form_report
    )
    app.post("/mc/identities", response_model=schemas.IdentitiesResponse)(run_identity_checks)

    @app.exception_handler(ValueError)
    async def _domain_error(request, exc: ValueError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(OverflowError)
    async def _overflow_error(request, exc: OverflowError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    return app


app = create_app()
