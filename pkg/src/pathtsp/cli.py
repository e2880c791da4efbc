"""Command-line surface. Machine-readable JSON goes to stdout, diagnostics
to stderr. Exit codes: 0 success, 1 usage error, 2 infeasible or invalid
input, 3 internal invariant failure."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .decompose import decompose
from .errors import (
    InvalidInstanceError,
    InvariantError,
    NotConnectedError,
    ParseError,
    SizeLimitError,
)
from .exact import exact_path_tsp, exact_pc_path
from .graphical import solve_graphical
from .heldkarp import hk_solve
from .instances import (
    GraphicalInstance,
    Instance,
    generate_random_metric,
    instance_to_dict,
    metric_closure,
    read_instance,
    validate_metric,
    write_instance,
)
from .narrowcuts import (
    VARIANTS,
    build_certificate,
    certificate_to_dict,
    compute_narrow_cuts,
    pairwise_forced_cuts,
    solve_fractional_disjoint,
    variant_parameters,
    verify_certificate,
)
from .prize import PCInstance, pc_solve
from .solver import GOLDEN_RATIO, solve_bom, solve_hoogeveen
from .tjoin import wrong_parity_set

USAGE_ERROR, INPUT_ERROR, INVARIANT_ERROR = 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    command: str
    instance: str | None = None
    variant: str = "golden"
    tau: float | None = None
    theta: float | None = None
    sigma: float | None = None
    kappa: float | None = None
    rho: float = GOLDEN_RATIO
    seed: int = 0
    n: int = 0
    output: str | None = None
    verbose: bool = False
    hoogeveen: bool = False

    def validate(self):
        if self.tau is not None and not (0.0 < self.tau <= 1.0):
            raise ValueError(f"--tau must be in (0, 1], got {self.tau}")
        if self.theta is not None and not (0.0 < self.theta < 1.0):
            raise ValueError(f"--theta must be in (0, 1), got {self.theta}")
        if not (1.5 <= self.rho < 2.0):
            raise ValueError(f"--rho must be in [1.5, 2), got {self.rho}")
        for name, val in (("sigma", self.sigma), ("kappa", self.kappa)):
            if val is not None and val < 0.0:
                raise ValueError(f"--{name} must be nonnegative, got {val}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _build_parser() -> _Parser:
    parser = _Parser(prog="pathtsp", description=__doc__)
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--output", help="write JSON here instead of stdout")
        return p

    p = cmd("solve", help="best-of-many golden-ratio pipeline")
    p.add_argument("instance")
    p.add_argument("--hoogeveen", action="store_true", help="single-MST baseline")

    p = cmd("hk", help="Held-Karp LP optimum")
    p.add_argument("instance")

    p = cmd("decompose", help="spanning-tree convex decomposition")
    p.add_argument("instance")

    p = cmd("narrow", help="tau-narrow cut layers")
    p.add_argument("instance")
    p.add_argument("--tau", type=float, required=True)

    p = cmd("certify", help="fractional T-join dominator per decomposition tree")
    p.add_argument("instance")
    p.add_argument("--variant", choices=VARIANTS, default="golden")

    p = cmd("pc", help="prize-collecting path")
    p.add_argument("instance")
    p.add_argument("--rho", type=float, default=GOLDEN_RATIO)

    p = cmd("graphical", help="unit-weight graphical three-candidate solver")
    p.add_argument("instance")
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--kappa", type=float, default=None)

    p = cmd("exact", help="exact oracle (path TSP, or prize-collecting if prizes present)")
    p.add_argument("instance")

    p = cmd("gen", help="generate a random Euclidean instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)

    p = cmd("validate", help="metric invariant report")
    p.add_argument("instance")
    return parser


def _load_metric(path: str) -> tuple[Instance, dict]:
    raw = _read_json(path)
    inst = read_instance(path)
    if isinstance(inst, GraphicalInstance):
        inst = metric_closure(inst)
    return inst, raw


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ParseError(f"{path}: no such file") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from exc


def _emit(payload: dict, output: str | None):
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _require_valid(inst: Instance):
    report = validate_metric(inst)
    if report:
        raise InvalidInstanceError(
            f"instance violates {len(report)} metric invariant(s)"
        )


def _run(cfg: RunConfig) -> dict:
    if cfg.command == "gen":
        if cfg.n < 2:
            raise _UsageError(f"--n must be at least 2, got {cfg.n}")
        inst = generate_random_metric(cfg.n, cfg.seed)
        if cfg.output:
            write_instance(inst, cfg.output)
            _emit({"written": cfg.output, "n": cfg.n, "seed": cfg.seed}, None)
            return None
        return instance_to_dict(inst)

    if cfg.command == "validate":
        loaded = read_instance(cfg.instance)
        if isinstance(loaded, GraphicalInstance):
            inst = metric_closure(loaded)  # raises when disconnected
            return {"valid": True, "type": "graph", "violations": []}
        report = validate_metric(loaded)
        payload = {
            "valid": not report,
            "type": "metric",
            "violations": [
                {"kind": v.kind, "where": list(v.where), "amount": v.amount}
                for v in report
            ],
        }
        if report:
            raise _InvalidReport(payload)
        return payload

    if cfg.command == "graphical":
        loaded = read_instance(cfg.instance)
        if not isinstance(loaded, GraphicalInstance):
            raise InvalidInstanceError("graphical solver needs a graph-type instance")
        kwargs = {}
        if cfg.theta is not None:
            kwargs["theta"] = cfg.theta
        if cfg.sigma is not None:
            kwargs["sigma"] = cfg.sigma
        if cfg.kappa is not None:
            kwargs["kappa"] = cfg.kappa
        return solve_graphical(loaded, **kwargs).to_dict()

    if cfg.command == "pc":
        raw = _read_json(cfg.instance)
        inst, _ = _load_metric(cfg.instance)
        _require_valid(inst)
        prizes = raw.get("prizes")
        if prizes is None:
            raise ParseError(f"{cfg.instance}: missing field \"prizes\"")
        pc = PCInstance.from_internal(inst, prizes)
        return pc_solve(pc, rho=cfg.rho).to_dict()

    if cfg.command == "exact":
        raw = _read_json(cfg.instance)
        inst, _ = _load_metric(cfg.instance)
        if "prizes" in raw:
            pc = PCInstance.from_internal(inst, raw["prizes"])
            res = exact_pc_path(pc)
        else:
            res = exact_path_tsp(inst)
        return {
            "optimum": res.optimum,
            "witness": list(res.witness),
            "explored": res.explored,
        }

    inst, _ = _load_metric(cfg.instance)
    _require_valid(inst)

    if cfg.command == "hk":
        return hk_solve(inst).to_dict()

    if cfg.command == "solve":
        hk = hk_solve(inst)
        sol = solve_hoogeveen(inst, hk) if cfg.hoogeveen else solve_bom(inst, hk=hk)
        payload = sol.to_dict()
        payload.update(
            {
                "hk_value": sol.hk_value,
                "ratio_vs_hk": sol.cost / sol.hk_value if sol.hk_value else 1.0,
                "guarantee": (5.0 / 3.0 if cfg.hoogeveen else GOLDEN_RATIO),
                "method": "hoogeveen" if cfg.hoogeveen else "bom",
            }
        )
        if not cfg.hoogeveen:
            payload["weighted_average"] = sol.weighted_average
        return payload

    if cfg.command == "decompose":
        hk = hk_solve(inst)
        return decompose(hk).to_dict()

    if cfg.command == "narrow":
        hk = hk_solve(inst)
        return compute_narrow_cuts(hk, cfg.tau).to_dict()

    if cfg.command == "certify":
        hk = hk_solve(inst)
        combo = decompose(hk)
        _, _, tau = variant_parameters(cfg.variant)
        pair_cuts = pairwise_forced_cuts(hk) if tau > 0.0 else None
        structure = compute_narrow_cuts(hk, tau, pair_cuts) if tau > 0.0 else None
        flows = (
            solve_fractional_disjoint(structure, hk)
            if cfg.variant == "golden"
            else None
        )
        certs = []
        all_feasible = True
        for tree in combo.trees:
            T = wrong_parity_set(tree, hk.s, hk.t)
            cert = build_certificate(hk, tree, T, cfg.variant, structure, flows)
            report = verify_certificate(cert, inst)
            all_feasible &= report.feasible
            certs.append(certificate_to_dict(cert, report))
        payload = {"all_feasible": bool(all_feasible), "certificates": certs}
        if not all_feasible:
            raise _InfeasibleCertificates(payload)
        return payload

    raise _UsageError(f"unknown command {cfg.command}")


class _InvalidReport(Exception):
    def __init__(self, payload):
        super().__init__("instance invalid")
        self.payload = payload


class _InfeasibleCertificates(Exception):
    def __init__(self, payload):
        super().__init__("certificate verification failed")
        self.payload = payload


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = RunConfig(
            command=args.command,
            instance=getattr(args, "instance", None),
            variant=getattr(args, "variant", "golden"),
            tau=getattr(args, "tau", None),
            theta=getattr(args, "theta", None),
            sigma=getattr(args, "sigma", None),
            kappa=getattr(args, "kappa", None),
            rho=getattr(args, "rho", GOLDEN_RATIO),
            seed=getattr(args, "seed", 0),
            n=getattr(args, "n", 0),
            output=getattr(args, "output", None),
            verbose=args.verbose,
        )
        cfg.validate()
        if cfg.command == "solve":
            cfg = RunConfig(**{**cfg.__dict__, "hoogeveen": args.hoogeveen})
    except (_UsageError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    try:
        payload = _run(cfg)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except _InvalidReport as exc:
        _emit(exc.payload, cfg.output)
        print("invalid instance", file=sys.stderr)
        return INPUT_ERROR
    except _InfeasibleCertificates as exc:
        _emit(exc.payload, cfg.output)
        print("certificate infeasible", file=sys.stderr)
        return INVARIANT_ERROR
    except (ParseError, InvalidInstanceError, NotConnectedError, SizeLimitError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except InvariantError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return INVARIANT_ERROR
    if payload is not None:
        _emit(payload, cfg.output)
    if cfg.verbose:
        print(f"{cfg.command}: ok", file=sys.stderr)
    return 0


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
