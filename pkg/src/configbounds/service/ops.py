"""Schema-in, schema-out operations behind the HTTP routes.

Each function is pure and deterministic, so the CLI can call them
in-process and get byte-identical results to a round trip through the
server.  Core exceptions propagate untouched; the app layer maps them to
status codes.
"""

from __future__ import annotations

from typing import Any

from ..bounds import build_curve
from ..configspace import (
    approx_profile,
    extract_dual,
    generate_instance,
    instance_seeds,
    select_kappa,
)
from ..counterexample import suite_report
from ..dpfit import fit
from ..errors import DomainError
from ..rademacher import DualSample, distinct_vectors, empirical_rad_exact, empirical_rad_mc
from .schemas import (
    BoundRowModel,
    BoundsRequest,
    BoundsResponse,
    CounterexampleRequest,
    DualModel,
    DualRequest,
    FitRequest,
    FitResponse,
    GenRequest,
    GenResponse,
    InstanceModel,
    KappaRequest,
    KappaResponse,
    PiecewiseModel,
    ProfileRequest,
    ProfileResponse,
    ProfileRow,
    RadRequest,
    RadResponse,
    ReportedPoint,
)

__all__ = [
    "run_gen",
    "run_dual",
    "run_kappa",
    "run_profile",
    "run_bounds",
    "run_fit",
    "run_rad",
    "run_counterexample",
]


def run_gen(req: GenRequest) -> GenResponse:
    """Derive per-instance seeds from the root seed and generate each instance."""
    seeds = [int(s) for s in instance_seeds(req.seed, req.count)]
    instances = [
        InstanceModel.from_core(generate_instance(req.gen_config(seed))) for seed in seeds
    ]
    return GenResponse(seeds=seeds, instances=instances)


def run_dual(req: DualRequest) -> DualModel:
    ex = extract_dual(
        req.instance.to_core(),
        req.rule1,
        req.rule2,
        req.kappa,
        req.grid_eps,
        instance_id=req.instance_id,
        node_policy=req.node_policy,
    )
    return DualModel.from_core(ex)


def run_kappa(req: KappaRequest) -> KappaResponse:
    sel = select_kappa(
        [inst.to_core() for inst in req.instances],
        req.rule1,
        req.rule2,
        r_grid=req.r_grid,
        hard_cap=req.hard_cap,
        node_policy=req.node_policy,
    )
    return KappaResponse(kappa=sel.kappa, saturated=sel.saturated)


def run_profile(req: ProfileRequest) -> ProfileResponse:
    if req.j_lo < 1 or req.j_hi < req.j_lo:
        raise DomainError(f"need 1 <= j_lo <= j_hi, got [{req.j_lo}, {req.j_hi}]")
    duals = [d.to_core() for d in req.duals]
    prof = approx_profile(duals, range(req.j_lo, req.j_hi + 1))
    rows = [ProfileRow(j=j, e_hat=prof.e_hat[j]) for j in sorted(prof.e_hat)]
    return ProfileResponse(rows=rows, j_star=prof.j_star)


def run_bounds(req: BoundsRequest) -> BoundsResponse:
    e_hat = {row.j: row.e_hat for row in req.e_hat}
    curve = build_curve(
        e_hat,
        req.m_profile,
        req.j_star,
        req.n_vars,
        req.kappa,
        req.n_schedule,
        sorted(e_hat),
        delta=req.delta,
        paper_mode=req.paper_mode,
    )
    rows = [
        BoundRowModel(
            n=r.n_samples,
            worst_case=r.worst_case,
            srm=r.srm,
            srm_best_j=r.srm_best_j,
            baseline=r.baseline,
        )
        for r in curve.rows
    ]
    reported = [ReportedPoint(n=n, bound=v) for n, v in curve.reported()]
    return BoundsResponse(rows=rows, csv=curve.to_csv(), reported=reported)


def run_fit(req: FitRequest) -> FitResponse:
    res = fit(req.dual.to_core(), req.k, combine=req.combine)
    return FitResponse(
        error=res.error,
        approximant=PiecewiseModel.from_core(res.approximant),
        splits=list(res.splits),
    )


def run_rad(req: RadRequest) -> RadResponse:
    sample = DualSample([d.to_core() for d in req.duals])
    distinct = int(distinct_vectors(sample).shape[0])
    if req.method == "exact":
        return RadResponse(
            value=empirical_rad_exact(sample), stderr=None, distinct=distinct, method="exact"
        )
    if req.method == "mc":
        value, stderr = empirical_rad_mc(sample, req.draws, req.seed)
        return RadResponse(value=value, stderr=stderr, distinct=distinct, method="mc")
    raise DomainError(f"method must be 'exact' or 'mc', got {req.method!r}")


def run_counterexample(req: CounterexampleRequest) -> dict[str, Any]:
    """Full verification sweep; the report dict is the response body as-is."""
    return suite_report(req.gammas, req.ps, req.ns, req.cs)
