"""Request/response models for the HTTP service.

Matrices travel in the shared JSON wire format
``{"rows": r, "cols": c, "entries": [[re, im], ...]}`` (row-major).
"""

from __future__ import annotations

import numpy as np
from pydantic import BaseModel, Field

from .. import linops


class MatrixModel(BaseModel):
    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    entries: list[tuple[float, float]]

    @classmethod
    def from_array(cls, mat: np.ndarray) -> "MatrixModel":
        return cls(**linops.matrix_to_json_dict(mat))

    def to_array(self) -> np.ndarray:
        return linops.matrix_from_json_dict(self.model_dump())


class HaarUnitaryRequest(BaseModel):
    m: int = Field(ge=1)
    seed: int = Field(ge=0, lt=2**64)


class PermutationUnitaryRequest(BaseModel):
    mapping: list[int] = Field(min_length=1)


class PermanentRequest(BaseModel):
    matrix: MatrixModel
    algorithm: str = "ryser"


class PermanentResponse(BaseModel):
    re: float
    im: float
    algorithm: str
    dimension: int


class AmplitudeRequest(BaseModel):
    matrix: MatrixModel
    n: int = Field(ge=0)
    occupations: list[int]


class AmplitudeResponse(BaseModel):
    re: float
    im: float
    probability: float


class DistributionRequest(BaseModel):
    matrix: MatrixModel
    n: int = Field(ge=0)


class DistributionEntryModel(BaseModel):
    occupations: list[int]
    re: float
    im: float
    probability: float


class DistributionResponse(BaseModel):
    n: int
    m: int
    entries: list[DistributionEntryModel]
    total_probability: float


class McIntegrateRequest(BaseModel):
    matrix: MatrixModel
    n: int = Field(ge=0)
    form: str
    n_samples: int = Field(ge=1000)
    seed: int = Field(ge=0, lt=2**64)
    workers: int = Field(default=1, ge=1, le=64)


class McEstimateModel(BaseModel):
    form: str
    mean: float
    std_error: float
    n_samples: int
    seed: int


class CrossFormRequest(BaseModel):
    matrix: MatrixModel
    n: int = Field(ge=0)
    n_samples: int = Field(ge=1000)
    seed: int = Field(ge=0, lt=2**64)
    workers: int = Field(default=1, ge=1, le=64)


class FormReportModel(BaseModel):
    form: str
    mean: float
    std_error: float
    n_samples: int
    seed: int
    reference: float
    z: float


class CrossFormResponse(BaseModel):
    reference: float
    forms: list[FormReportModel]
    pairwise_z: dict[str, float]
    passed: bool


class IdentitiesRequest(BaseModel):
    n_samples: int = Field(ge=1000)
    seed: int = Field(ge=0, lt=2**64)
    workers: int = Field(default=1, ge=1, le=64)


class IdentityCheckModel(BaseModel):
    form: str
    mean: float
    std_error: float
    n_samples: int
    seed: int
    reference: float
    z: float
    passed: bool


class IdentitiesResponse(BaseModel):
    checks: list[IdentityCheckModel]
    passed: bool
