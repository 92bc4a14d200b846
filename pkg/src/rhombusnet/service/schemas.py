"""Request and response models for the analysis service."""

from __future__ import annotations

from typing import Annotated, Literal, Optional

from pydantic import BaseModel, Field

Orders = Annotated[list[Annotated[int, Field(ge=1)]], Field(min_length=1)]
Scheme = Literal["optimal", "max-degree", "metropolis"]


class SlemRequest(BaseModel):
    orders: Orders
    scheme: Scheme = "optimal"


class SlemResponse(BaseModel):
    orders: list[int]
    scheme: Scheme
    weights: list[float]
    slem: float
    lambda2: float
    lambda_min: float
    attaining_source: str
    stratified: bool


class CharpolyRequest(BaseModel):
    orders: Orders


class CharpolyResponse(BaseModel):
    orders: list[int]
    degree: int
    u_coefficients: list[int]     # lowest power first, u = s^2
    roots: list[float]            # decreasing
    largest_root: float


class BenchmarkRowModel(BaseModel):
    orders: list[int]
    slem_charpoly: float
    slem_eig: float
    table_value: float
    abs_err: float


class Table1Response(BaseModel):
    rows: list[BenchmarkRowModel]
    passed: bool
    max_abs_err: float
    tolerance: float


class OptimizeRequest(BaseModel):
    orders: Orders
    budget: Annotated[int, Field(ge=1)] = 20000
    tol: Annotated[float, Field(gt=0)] = 1e-9
    seed: int = 0
    init: Optional[list[float]] = None


class OptimizeResponse(BaseModel):
    orders: list[int]
    weights: list[float]
    slem: float
    evaluations: int
    converged: bool
    seed: int


class SimulateRequest(BaseModel):
    orders: Orders
    scheme: Scheme = "optimal"
    steps: Annotated[int, Field(ge=12)] = 300
    seed: int = 7
    burn_in: Optional[Annotated[int, Field(ge=0)]] = None


class SimulateResponse(BaseModel):
    orders: list[int]
    scheme: Scheme
    steps: int
    seed: int
    burn_in: int
    empirical_factor: float
    analytic_slem: float
    initial_deviation: float
    final_deviation: float


class BranchRequest(BaseModel):
    orders: Orders
    host: str = "node"            # "node" | "triangle" | "random:<n>:<p>:<seed>"
    attach: Annotated[int, Field(ge=0)] = 0
    budget: Annotated[int, Field(ge=1)] = 60000
    seed: int = 0


class BranchResponse(BaseModel):
    orders: list[int]
    host: str
    attach: int
    interior_weights: list[float]
    bridge_weight: float
    host_edge_weights: list[float]
    interior_match: bool
    slem: float
    evaluations: int
    converged: bool
    seed: int


class SweepRequest(BaseModel):
    range_spec: str               # e.g. "m=3;inner=1..50"


class SweepRowModel(BaseModel):
    orders: list[int]
    slem: float


class SweepResponse(BaseModel):
    rows: list[SweepRowModel]


class HealthResponse(BaseModel):
    status: str
    version: str
