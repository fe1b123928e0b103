"""Pipeline driver for the whole experiment: instances to bound curves.

Subcommands write plain JSON/CSV artifacts into a run directory so a rerun
with the same flags is byte-identical.  Every command goes through a
backend with a single ``post(path, payload)`` method: the default backend
dispatches in process to the same operations the HTTP service exposes, and
``--server URL`` swaps in a client for a running service without changing
any output byte.

Exit codes: 0 success, 2 precondition violation, 3 I/O failure, 4
numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Sequence

import httpx
import numpy as np
import uvicorn
from pydantic import BaseModel

from .errors import DomainError, NumericalError, ResourceLimitError
from .service import create_app
from .service import ops
from .service.schemas import (
    BoundsRequest,
    CounterexampleRequest,
    DualRequest,
    FitRequest,
    GenRequest,
    KappaRequest,
    ProfileRequest,
    RadRequest,
)

__all__ = ["LocalBackend", "HttpBackend", "build_parser", "main"]

_EXIT_PRECONDITION = 2
_EXIT_IO = 3
_EXIT_NUMERICAL = 4

_ROUTES: dict[str, tuple[type[BaseModel], Callable[..., Any]]] = {
    "/gen": (GenRequest, ops.run_gen),
    "/dual": (DualRequest, ops.run_dual),
    "/kappa": (KappaRequest, ops.run_kappa),
    "/profile": (ProfileRequest, ops.run_profile),
    "/bounds": (BoundsRequest, ops.run_bounds),
    "/fit": (FitRequest, ops.run_fit),
    "/rad": (RadRequest, ops.run_rad),
    "/counterexample": (CounterexampleRequest, ops.run_counterexample),
}


class LocalBackend:
    """In-process dispatch through the same operations the service routes use."""

    def post(self, path: str, payload: dict[str, Any]) -> dict[str, Any]:
        req_cls, op = _ROUTES[path]
        res = op(req_cls(**payload))
        return res if isinstance(res, dict) else res.model_dump()


class HttpBackend:
    """Client for a running service; errors map back onto the core exceptions."""

    def __init__(self, base_url: str, timeout: float = 600.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout

    def post(self, path: str, payload: dict[str, Any]) -> dict[str, Any]:
        resp = httpx.post(self.base_url + path, json=payload, timeout=self.timeout)
        if resp.status_code == 200:
            return resp.json()
        try:
            detail = str(resp.json()["detail"])
        except Exception:
            detail = resp.text
        if resp.status_code == 422:
            raise DomainError(detail)
        if resp.status_code == 413:
            raise ResourceLimitError(detail)
        if resp.status_code == 500:
            raise NumericalError(detail)
        raise RuntimeError(f"server returned {resp.status_code}: {detail}")


def _instance_id(i: int) -> str:
    return f"inst-{i:04d}"


def _read_json(path: Path) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _write_json(path: Path, payload: Any) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _write_or_print(out: str | None, payload: dict[str, Any]) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _parse_rules(text: str) -> tuple[str, str]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise DomainError(f"rules must be two comma-separated rule names, got {text!r}")
    return parts[0], parts[1]


def _parse_j_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    try:
        if not sep:
            raise ValueError
        j_lo, j_hi = int(lo), int(hi)
    except ValueError:
        raise DomainError(f"j-range must look like LO:HI, got {text!r}") from None
    if j_lo < 1 or j_hi < j_lo:
        raise DomainError(f"need 1 <= LO <= HI in j-range, got {text!r}")
    return j_lo, j_hi


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise DomainError(f"expected comma-separated numbers, got {text!r}") from None


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise DomainError(f"expected comma-separated integers, got {text!r}") from None


def _thread_count(n_tasks: int) -> int:
    raw = os.environ.get("CONFIGBOUNDS_THREADS", "")
    if raw:
        try:
            cap = int(raw)
        except ValueError:
            raise DomainError(f"CONFIGBOUNDS_THREADS must be an integer, got {raw!r}") from None
        if cap < 1:
            raise DomainError(f"CONFIGBOUNDS_THREADS must be >= 1, got {cap}")
    else:
        cap = 4
    return min(cap, n_tasks) if n_tasks else 1


def default_n_schedule() -> list[int]:
    """25 training-set sizes log-spaced over 10^2..10^8, rounded to integers."""
    return sorted({int(round(v)) for v in np.logspace(2.0, 8.0, 25)})


def cmd_gen(args: argparse.Namespace, backend: Any) -> int:
    out = Path(args.out)
    (out / "instances").mkdir(parents=True, exist_ok=True)
    generator = {
        "goods": args.goods,
        "bids": args.bids,
        "bundle_min": args.bundle_min,
        "bundle_max": args.bundle_max,
        "price_lo": args.price_lo,
        "price_hi": args.price_hi,
    }
    body = backend.post("/gen", {"count": args.instances, "seed": args.seed, **generator})
    entries = []
    for i, (seed, inst) in enumerate(zip(body["seeds"], body["instances"])):
        iid = _instance_id(i)
        _write_json(out / "instances" / f"{iid}.json", inst)
        entries.append({"id": iid, "seed": seed})
    _write_json(
        out / "manifest.json",
        {"root_seed": args.seed, "generator": generator, "instances": entries},
    )
    print(f"gen: wrote {len(entries)} instances under {out}")
    return 0


def _load_instances(out: Path) -> tuple[list[str], dict[str, Any]]:
    manifest = _read_json(out / "manifest.json")
    ids = [entry["id"] for entry in manifest["instances"]]
    inst_dir = out / "instances"
    missing = [iid for iid in ids if not (inst_dir / f"{iid}.json").exists()]
    if missing:
        raise FileNotFoundError(f"missing instance files: {', '.join(missing)}")
    return ids, {iid: _read_json(inst_dir / f"{iid}.json") for iid in ids}


def cmd_duals(args: argparse.Namespace, backend: Any) -> int:
    out = Path(args.out)
    ids, instances = _load_instances(out)
    rule1, rule2 = _parse_rules(args.rules)
    if args.kappa == "auto":
        if not ids:
            raise DomainError("kappa auto needs at least one instance")
        body = backend.post(
            "/kappa",
            {
                "instances": [instances[iid] for iid in ids],
                "rule1": rule1,
                "rule2": rule2,
                "hard_cap": args.hard_cap,
                "node_policy": args.node_policy,
            },
        )
        kappa, saturated, source = body["kappa"], body["saturated"], "auto"
    else:
        try:
            kappa = int(args.kappa)
        except ValueError:
            raise DomainError(f"kappa must be 'auto' or an integer, got {args.kappa!r}") from None
        if kappa < 1:
            raise DomainError(f"kappa must be >= 1, got {kappa}")
        saturated, source = False, "fixed"
    _write_json(
        out / "kappa.json",
        {
            "kappa": kappa,
            "saturated": saturated,
            "hard_cap": args.hard_cap if source == "auto" else None,
            "source": source,
            "rules": f"{rule1}-{rule2}",
        },
    )
    dual_dir = out / "duals"
    dual_dir.mkdir(parents=True, exist_ok=True)
    pending = [iid for iid in ids if not (dual_dir / f"{iid}.json").exists()]

    def extract(iid: str) -> dict[str, Any]:
        return backend.post(
            "/dual",
            {
                "instance": instances[iid],
                "rule1": rule1,
                "rule2": rule2,
                "kappa": kappa,
                "grid_eps": args.grid_eps,
                "instance_id": iid,
                "node_policy": args.node_policy,
            },
        )

    results: dict[str, dict[str, Any]] = {}
    first_exc: Exception | None = None
    if pending:
        with ThreadPoolExecutor(max_workers=_thread_count(len(pending))) as pool:
            futures = {iid: pool.submit(extract, iid) for iid in pending}
        for iid in pending:
            try:
                results[iid] = futures[iid].result()
            except Exception as exc:
                if first_exc is None:
                    first_exc = exc
    # completed duals land on disk even if a sibling failed, so a rerun resumes
    for iid in pending:
        if iid in results:
            _write_json(dual_dir / f"{iid}.json", results[iid])
    if first_exc is not None:
        raise first_exc
    print(
        f"duals: kappa={kappa} ({source}), extracted {len(pending)}, "
        f"skipped {len(ids) - len(pending)}"
    )
    return 0


def cmd_bounds(args: argparse.Namespace, backend: Any) -> int:
    out = Path(args.out)
    dual_dir = out / "duals"
    if not dual_dir.is_dir():
        raise FileNotFoundError(f"no duals directory at {dual_dir}")
    duals = [_read_json(p) for p in sorted(dual_dir.glob("*.json"))]
    if not duals:
        raise DomainError(f"no dual files in {dual_dir}")
    kappa_info = _read_json(out / "kappa.json")
    ids, instances = _load_instances(out)
    if not ids:
        raise DomainError("manifest lists no instances, cannot infer the variable count")
    n_vars = int(instances[ids[0]]["n"])
    j_lo, j_hi = _parse_j_range(args.j_range)
    prof = backend.post("/profile", {"duals": duals, "j_lo": j_lo, "j_hi": j_hi})
    profile_lines = ["j,e_hat"] + [f"{row['j']},{row['e_hat']!r}" for row in prof["rows"]]
    (out / "profile.csv").write_text("\n".join(profile_lines) + "\n", encoding="utf-8")
    body = backend.post(
        "/bounds",
        {
            "e_hat": prof["rows"],
            "m_profile": len(duals),
            "j_star": prof["j_star"],
            "n_vars": n_vars,
            "kappa": kappa_info["kappa"],
            "n_schedule": default_n_schedule(),
            "delta": args.delta,
            "paper_mode": args.paper_mode,
        },
    )
    (out / "bounds.csv").write_text(body["csv"], encoding="utf-8")
    _write_json(
        out / "summary.json",
        {
            "kappa": kappa_info["kappa"],
            "j_star": prof["j_star"],
            "m_profile": len(duals),
            "n_vars": n_vars,
            "delta": args.delta,
            "paper_mode": args.paper_mode,
            "reported": body["reported"],
        },
    )
    print(f"bounds: wrote {out / 'bounds.csv'} ({len(body['rows'])} rows), j_star={prof['j_star']}")
    return 0


def cmd_counterexample(args: argparse.Namespace, backend: Any) -> int:
    body = backend.post(
        "/counterexample",
        {
            "gammas": _parse_floats(args.gammas),
            "ps": _parse_floats(args.ps),
            "ns": _parse_ints(args.ns),
            "cs": _parse_floats(args.cs),
        },
    )
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "counterexample.json", body)
    else:
        print(json.dumps(body, sort_keys=True, indent=2))
    print(f"counterexample: all_pass={body['all_pass']}", file=sys.stderr)
    return 0


def cmd_fit(args: argparse.Namespace, backend: Any) -> int:
    dual = _read_json(Path(args.dual))
    body = backend.post("/fit", {"dual": dual, "k": args.k, "combine": args.combine})
    _write_or_print(args.out, body)
    return 0


def cmd_rad(args: argparse.Namespace, backend: Any) -> int:
    paths: list[Path] = []
    for raw in args.paths:
        p = Path(raw)
        if p.is_dir():
            paths.extend(sorted(p.glob("*.json")))
        else:
            paths.append(p)
    duals = [_read_json(p) for p in paths]
    if not duals:
        raise DomainError("no dual files given")
    body = backend.post(
        "/rad",
        {"duals": duals, "method": args.method, "draws": args.draws, "seed": args.seed},
    )
    _write_or_print(args.out, body)
    return 0


def cmd_serve(args: argparse.Namespace, backend: Any) -> int:
    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="configbounds",
        description="Generate instances, extract duals, and emit generalization bound curves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_server_flag(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--server",
            default=None,
            help="base URL of a running service; default dispatches in process",
        )

    gen = sub.add_parser("gen", help="generate instances and a manifest")
    gen.add_argument("--out", required=True, help="run directory")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--instances", type=int, default=50, help="number of instances")
    gen.add_argument("--goods", type=int, default=10)
    gen.add_argument("--bids", type=int, default=20)
    gen.add_argument("--bundle-min", type=int, default=2)
    gen.add_argument("--bundle-max", type=int, default=5)
    gen.add_argument("--price-lo", type=float, default=0.8)
    gen.add_argument("--price-hi", type=float, default=1.25)
    add_server_flag(gen)
    gen.set_defaults(func=cmd_gen)

    duals = sub.add_parser("duals", help="extract dual functions for every instance")
    duals.add_argument("--out", required=True, help="run directory with a manifest")
    duals.add_argument("--rules", default="L,S", help="two rule names, e.g. L,S")
    duals.add_argument("--kappa", default="auto", help="'auto' or a fixed tree-size cap")
    duals.add_argument("--hard-cap", type=int, default=2000)
    duals.add_argument("--grid-eps", type=float, default=1e-4)
    duals.add_argument("--node-policy", default="best_bound", choices=["best_bound", "depth_first"])
    add_server_flag(duals)
    duals.set_defaults(func=cmd_duals)

    bounds = sub.add_parser("bounds", help="profile the duals and emit the bound curves")
    bounds.add_argument("--out", required=True, help="run directory with duals")
    bounds.add_argument("--j-range", default="1:64", help="piece budgets LO:HI")
    bounds.add_argument("--delta", type=float, default=0.01)
    bounds.add_argument("--paper-mode", action="store_true")
    add_server_flag(bounds)
    bounds.set_defaults(func=cmd_bounds)

    ce = sub.add_parser("counterexample", help="run the non-learnability verification suite")
    ce.add_argument("--out", default=None, help="directory for counterexample.json")
    ce.add_argument("--gammas", default="0.05,0.1,0.2")
    ce.add_argument("--ps", default="1,2,3")
    ce.add_argument("--ns", default="4,8,12")
    ce.add_argument("--cs", default="0.4,0.45")
    add_server_flag(ce)
    ce.set_defaults(func=cmd_counterexample)

    fit = sub.add_parser("fit", help="best k-piece approximant of one dual file")
    fit.add_argument("--dual", required=True, help="dual JSON file")
    fit.add_argument("--k", required=True, type=int)
    fit.add_argument("--combine", default="max", choices=["max", "sum"])
    fit.add_argument("--out", default=None, help="write the result here instead of stdout")
    add_server_flag(fit)
    fit.set_defaults(func=cmd_fit)

    rad = sub.add_parser("rad", help="empirical Rademacher complexity of a dual set")
    rad.add_argument("paths", nargs="+", help="dual JSON files or directories of them")
    rad.add_argument("--method", default="exact", choices=["exact", "mc"])
    rad.add_argument("--draws", type=int, default=4096)
    rad.add_argument("--seed", type=int, default=0)
    rad.add_argument("--out", default=None, help="write the result here instead of stdout")
    add_server_flag(rad)
    rad.set_defaults(func=cmd_rad)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=cmd_serve, server=None)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    backend = HttpBackend(args.server) if args.server else LocalBackend()
    try:
        return args.func(args, backend)
    except (DomainError, ResourceLimitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_PRECONDITION
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_NUMERICAL
    except (OSError, httpx.HTTPError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
