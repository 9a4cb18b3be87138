"""Command-line client for the trivopt service.

The CLI builds a request from a JSON config file plus flag overrides,
sends it to the HTTP service (in-process by default, or a remote
``--server``), and writes the response to disk.  All floating-point
output is printed with 17 significant digits so identical configs and
seeds produce byte-identical files.

Exit codes: 0 success, 1 failed check or unconverged run, 2 bad usage
or configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


# ---------------------------------------------------------------- output


def format_float(x: float) -> str:
    return format(x, ".17g")


def dump_json(obj, indent: int = 0) -> str:
    """JSON with floats at fixed 17-significant-digit precision."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f"{inner}{json.dumps(str(k))}: {dump_json(v, indent + 1)}"
            for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = ",\n".join(f"{inner}{dump_json(v, indent + 1)}" for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return format_float(v)
    return str(v)


def render_csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- client


def _post(server: str | None, route: str, payload: dict):
    if server:
        import httpx

        try:
            resp = httpx.post(server.rstrip("/") + route, json=payload, timeout=3600.0)
        except httpx.HTTPError as exc:
            print(f"error: cannot reach server: {exc}", file=sys.stderr)
            sys.exit(EXIT_CONFIG)
    else:
        import warnings

        with warnings.catch_warnings():
            # starlette warns about its httpx pairing; not actionable here
            warnings.simplefilter("ignore")
            from fastapi.testclient import TestClient

        from .service import app

        with TestClient(app, raise_server_exceptions=False) as client:
            resp = client.post(route, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except Exception:
            detail = resp.text
        print(f"error ({resp.status_code}): {detail}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)
    return resp.json()


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config {path}: {exc}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)
    if not isinstance(cfg, dict):
        print("error: config must be a JSON object", file=sys.stderr)
        sys.exit(EXIT_CONFIG)
    return cfg


def _parse_grid(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        print(f"error: bad r grid {text!r}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)


def _write(path: Path, content: str) -> None:
    path.write_text(content)
    print(f"wrote {path}")


# ---------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    cfg = _load_config(args.config)
    if args.manifold:
        man = cfg.setdefault("manifold", {})
        man["kind"] = args.manifold
    if args.dim is not None:
        cfg.setdefault("manifold", {})["dim"] = args.dim
    if args.subspace_dim is not None:
        cfg.setdefault("manifold", {})["subspace_dim"] = args.subspace_dim
    if args.trials is not None:
        cfg["trials"] = args.trials
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.rmax is not None:
        cfg["rmax"] = args.rmax
    if args.r_grid is not None:
        cfg["r_grid"] = _parse_grid(args.r_grid)
    if args.ball is not None:
        cfg["ball_radius"] = args.ball
    if args.checks is not None:
        cfg["checks"] = [c.strip() for c in args.checks.split(",") if c.strip()]
    if "manifold" not in cfg:
        print("error: verify needs a manifold (--manifold/--dim or config)", file=sys.stderr)
        return EXIT_CONFIG

    data = _post(args.server, "/verify", cfg)
    for rep in data["reports"]:
        status = "PASS" if rep["pass"] else "FAIL"
        print(f"{status} {rep['name']}: worst margin {format_float(rep['worst_margin'])}")

    out = Path(args.out) if args.out else Path(f"verify_report.{args.format}")
    if args.format == "json":
        _write(out, dump_json(data) + "\n")
    else:
        header = ["check", "quantity", "r", "measured_lo", "measured_hi", "bound_lo", "bound_hi", "margin"]
        rows = [
            [rep["name"], row["quantity"], row["r"], row["measured_lo"],
             row["measured_hi"], row["bound_lo"], row["bound_hi"], row["margin"]]
            for rep in data["reports"]
            for row in rep["rows"]
        ]
        _write(out, render_csv(header, rows))
    return EXIT_OK if data["passed"] else EXIT_FAILED


# ---------------------------------------------------------------- bounds


def cmd_bounds(args) -> int:
    cfg = _load_config(args.config)
    if args.profile:
        cfg.setdefault("profile", {})["name"] = args.profile
    if args.manifold:
        cfg.setdefault("manifold", {})["kind"] = args.manifold
    if args.dim is not None:
        cfg.setdefault("manifold", {})["dim"] = args.dim
    if args.subspace_dim is not None:
        cfg.setdefault("manifold", {})["subspace_dim"] = args.subspace_dim
    if args.r_grid is not None:
        cfg["r_grid"] = _parse_grid(args.r_grid)
    if args.alpha is not None:
        cfg["alpha"] = args.alpha
    if "r_grid" not in cfg:
        print("error: bounds needs an r grid (--r-grid or config)", file=sys.stderr)
        return EXIT_CONFIG

    data = _post(args.server, "/bounds", cfg)
    out = Path(args.out) if args.out else Path(f"bounds_table.{args.format}")
    if args.format == "json":
        _write(out, dump_json(data) + "\n")
    else:
        header = ["r", "dexp_lo", "dexp_hi", "hess_radial_lo", "hess_radial_hi",
                  "hess_normal", "hess_full", "hess_full_tight", "alpha_hat"]
        rows = [[row[k] for k in header] for row in data["rows"]]
        _write(out, render_csv(header, rows))
    return EXIT_OK


# ---------------------------------------------------------------- optimize


def cmd_optimize(args) -> int:
    cfg = _load_config(args.config)
    if args.problem:
        cfg.setdefault("problem", {})["kind"] = args.problem
    if args.dim is not None:
        cfg.setdefault("problem", {})["dim"] = args.dim
    if args.subspace_dim is not None:
        cfg.setdefault("problem", {})["subspace_dim"] = args.subspace_dim
    if args.problem_seed is not None:
        cfg.setdefault("problem", {})["seed"] = args.problem_seed
    if args.rule:
        cfg.setdefault("rule", {})["kind"] = args.rule
    if args.trust_radius is not None:
        cfg.setdefault("config", {})["trust_radius"] = args.trust_radius
    if args.eps is not None:
        cfg.setdefault("config", {})["eps_target"] = args.eps
    if args.seed is not None:
        cfg.setdefault("config", {})["seed"] = args.seed
    if "problem" not in cfg or "config" not in cfg:
        print("error: optimize needs a problem and a config block", file=sys.stderr)
        return EXIT_CONFIG

    data = _post(args.server, "/optimize", cfg)
    summary = data["summary"]
    print(dump_json(summary))

    out = Path(args.out) if args.out else Path(f"optimize_trace.{args.format}")
    if args.format == "json":
        _write(out, dump_json(data) + "\n")
    else:
        header = ["outer", "inner", "f", "pullback_grad_norm", "riem_grad_norm", "step_clipped"]
        rows = [[row[k] for k in header] for row in data["trace"]]
        _write(out, render_csv(header, rows))
        summary_path = out.with_suffix(out.suffix + ".summary.json")
        _write(summary_path, dump_json(summary) + "\n")
    return EXIT_OK if summary["converged"] else EXIT_FAILED


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trivopt",
        description="Verify curvature bounds, tabulate them, and run pullback optimization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config; flags override its keys")
        p.add_argument("--out", help="output path")
        p.add_argument("--format", choices=["csv", "json"], default=None)
        p.add_argument("--server", help="remote service URL (default: in-process)")

    pv = sub.add_parser("verify", help="run Monte-Carlo bound checks")
    common(pv)
    pv.add_argument("--manifold", choices=["euclidean", "sphere", "hyperbolic", "so", "grassmann"])
    pv.add_argument("--dim", type=int)
    pv.add_argument("--subspace-dim", type=int, dest="subspace_dim")
    pv.add_argument("--trials", type=int)
    pv.add_argument("--seed", type=int)
    pv.add_argument("--rmax", type=float)
    pv.add_argument("--r-grid", dest="r_grid", help="comma-separated radii")
    pv.add_argument("--ball", type=float, help="triangle sampling ball radius")
    pv.add_argument("--checks", help="comma-separated subset of rauch,second_order,law_of_cosines")
    pv.set_defaults(func=cmd_verify, default_format="json")

    pb = sub.add_parser("bounds", help="tabulate bound certificates over a radius grid")
    common(pb)
    pb.add_argument("--profile", help="built-in profile name")
    pb.add_argument("--manifold", choices=["euclidean", "sphere", "hyperbolic", "so", "grassmann"])
    pb.add_argument("--dim", type=int)
    pb.add_argument("--subspace-dim", type=int, dest="subspace_dim")
    pb.add_argument("--r-grid", dest="r_grid", help="comma-separated radii")
    pb.add_argument("--alpha", type=float, help="weak-convexity constant for alpha_hat")
    pb.add_argument("--seed", type=int, help="accepted for grammar symmetry; tables are deterministic")
    pb.set_defaults(func=cmd_bounds, default_format="csv")

    po = sub.add_parser("optimize", help="run the pullback optimizer on a benchmark problem")
    common(po)
    po.add_argument("--problem", choices=["quadratic", "rayleigh", "procrustes", "karcher", "grassmann_trace"])
    po.add_argument("--dim", type=int)
    po.add_argument("--subspace-dim", type=int, dest="subspace_dim")
    po.add_argument("--problem-seed", type=int, dest="problem_seed")
    po.add_argument("--rule", choices=["never", "always", "grad_ratio"])
    po.add_argument("--trust-radius", type=float, dest="trust_radius")
    po.add_argument("--eps", type=float, help="gradient-norm target")
    po.add_argument("--seed", type=int, help="seed for the starting point")
    po.set_defaults(func=cmd_optimize, default_format="csv")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if args.format is None:
        args.format = args.default_format
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
