"""Command-line front end for the bound machinery.

Subcommands:
  bound         one bound computation at fixed separation delta
  diversity     bisect the largest certifiable delta at fixed cardinality
  table         recompute a published comparison table as CSV
  curve         sweep cardinalities on a geometric ladder, CSV to a file
  verify-lemma  exact nonnegativity check of the seven building blocks
  positivity    random-code check of the positivity property

Exit codes: 0 success / certified / PASS; 1 usage, argument, config, or
I/O errors; 2 no bound exists at the requested degree; 3 certification
failed (UNVERIFIED); 4 a verification verdict is FAIL.

Every numeric knob resolves as flag > config file > built-in default;
the effective configuration is echoed in every JSON payload so runs are
reproducible from their own output.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, fields
from importlib import resources

import numpy as np

from .lp import (
    CERTIFIED,
    NO_BOUND_AT_DEGREE,
    BoundQuery,
    _certified_bound,
    default_grid_resolution,
    diversity_for_cardinality,
    lp_bound,
)
from .partitions import as_partition
from .zonal import (
    PRODUCT,
    SUM,
    Q_NAMES,
    empirical_positivity,
    is_positive_combination,
    q_polynomial,
    real_character,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_BOUND = 2
EXIT_UNVERIFIED = 3
EXIT_FAIL = 4

_KINDS = {"sum": SUM, "product": PRODUCT}
_STATUS_EXIT = {CERTIFIED: EXIT_OK, NO_BOUND_AT_DEGREE: EXIT_NO_BOUND}
_TABLES = {"I": (2, 19), "II": (3, 13)}
_TABLE_NS = (24, 48, 64, 80, 100, 120, 128, 1000)
_REFERENCE_ROWS = ("coxeter", "sphere_volume_b1", "sphere_volume_b2")


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class RunConfig:
    """Solver knobs shared by all subcommands.

    grid_resolution None means the per-n default; threads caps the native
    thread pools and the positivity trial pool.
    """

    grid_resolution: int | None = None
    slack: float = 1e-7
    verify_resolution_factor: int = 4
    max_rounds: int = 20
    seed: int = 1
    threads: int = 1


_CONFIG_TYPES = {
    "grid_resolution": int,
    "slack": float,
    "verify_resolution_factor": int,
    "max_rounds": int,
    "seed": int,
    "threads": int,
}


def load_config_file(path: str) -> dict:
    """Parse a plain `key = value` file (``#`` starts a comment)."""
    values: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            if not sep or not key or not val:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            if key not in _CONFIG_TYPES:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            try:
                values[key] = _CONFIG_TYPES[key](val)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad value for {key}: {val!r}") from None
    return values


def effective_config(args: argparse.Namespace) -> RunConfig:
    """Merge built-in defaults, the config file, and explicit flags."""
    values: dict = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for key in _CONFIG_TYPES:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return RunConfig(**values)


def config_echo(cfg: RunConfig, n: int | None = None) -> dict:
    """The effective configuration as embedded in JSON outputs."""
    out = {f.name: getattr(cfg, f.name) for f in fields(RunConfig)}
    if out["grid_resolution"] is None and n is not None:
        out["grid_resolution"] = default_grid_resolution(n)
    return out


def _apply_threads(threads: int) -> None:
    if threads and threads > 0:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(threads)


# ---------------------------------------------------------------------------
# shared formatting


def _tuple_key(t) -> str:
    return ",".join(str(x) for x in t)


def parse_tuple_key(key: str) -> tuple[int, ...]:
    """Inverse of the JSON map-key encoding ('' is the empty tuple)."""
    return tuple(int(tok) for tok in key.split(",") if tok.strip() != "")


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2))


def _bound_payload(r, cfg: RunConfig, n: int) -> dict:
    return {
        "bound": r.bound,
        "status": r.status,
        "coefficients": {_tuple_key(mu): v for mu, v in sorted(r.coefficients.items())},
        "zonal_coefficients": {
            _tuple_key(k): v for k, v in sorted(r.zonal_coefficients.items())
        },
        "verification": r.verification,
        "config": config_echo(cfg, n),
    }


def _load_reference() -> dict[tuple[str, str, int], float]:
    path = resources.files("unitarylp").joinpath("data/published_tables.csv")
    out: dict[tuple[str, str, int], float] = {}
    with path.open("r", encoding="utf-8") as fh:
        rows = csv.reader(line for line in fh if not line.startswith("#"))
        header = next(rows)
        if header != ["table", "row", "N", "value"]:
            raise ValueError("published_tables.csv: unexpected header")
        for table, row, N, value in rows:
            if value:
                out[(table, row, int(N))] = float(value)
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_bound(args: argparse.Namespace) -> int:
    cfg = effective_config(args)
    _apply_threads(cfg.threads)
    q = BoundQuery(
        n=args.n,
        kind=_KINDS[args.kind],
        delta=args.delta,
        D=args.degree,
        grid_resolution=cfg.grid_resolution,
        slack=cfg.slack,
        verify_resolution_factor=cfg.verify_resolution_factor,
        max_rounds=cfg.max_rounds,
    )
    q.validate()
    r = lp_bound(q)
    if args.json:
        _emit_json(_bound_payload(r, cfg, args.n))
    else:
        print(f"status {r.status}")
        print(f"bound {r.bound:.9g}")
        print(f"max_violation {r.verification['max_violation']:.6e}")
        print(f"points_checked {r.verification['points_checked']}")
        print(f"rounds {r.verification['rounds']}")
    return _STATUS_EXIT.get(r.status, EXIT_UNVERIFIED)


def _diversity_star(n: int, kind: str, N: int, D: int, cfg: RunConfig) -> tuple[float, str, float]:
    """Bisected delta plus the status/bound of its certifying evaluation."""
    d = diversity_for_cardinality(
        n,
        kind,
        N,
        D,
        grid_resolution=cfg.grid_resolution,
        slack=cfg.slack,
        verify_resolution_factor=cfg.verify_resolution_factor,
        max_rounds=cfg.max_rounds,
    )
    status, bound = _certified_bound(
        n, kind, d, D, cfg.grid_resolution, cfg.slack, cfg.verify_resolution_factor, cfg.max_rounds
    )
    return d, status, bound


def cmd_diversity(args: argparse.Namespace) -> int:
    cfg = effective_config(args)
    _apply_threads(cfg.threads)
    d, status, bound = _diversity_star(
        args.n, _KINDS[args.kind], args.cardinality, args.degree, cfg
    )
    if args.json:
        _emit_json(
            {
                "delta_star": d,
                "bound": bound,
                "status": status,
                "n": args.n,
                "kind": args.kind,
                "cardinality": args.cardinality,
                "degree": args.degree,
                "config": config_echo(cfg, args.n),
            }
        )
    else:
        print(f"delta_star {d:.4f}")
        print(f"bound {bound:.6f}")
        print(f"status {status}")
    return _STATUS_EXIT.get(status, EXIT_UNVERIFIED)


def cmd_table(args: argparse.Namespace) -> int:
    cfg = effective_config(args)
    _apply_threads(cfg.threads)
    n, default_degree = _TABLES[args.which]
    D = args.degree if args.degree is not None else default_degree
    reference = _load_reference()
    rows = []
    for N in _TABLE_NS:
        d_sigma, _, _ = _diversity_star(n, SUM, N, D, cfg)
        d_pi, _, _ = _diversity_star(n, PRODUCT, N, D, cfg)
        row = {
            "N": N,
            "lp_d_sigma": d_sigma,
            "lp_d_pi": d_pi,
            "paper_d_sigma": reference.get((args.which, "lp_d_sigma", N)),
            "paper_d_pi": reference.get((args.which, "lp_d_pi", N)),
        }
        for name in _REFERENCE_ROWS:
            if (args.which, name, N) in reference:
                row[name] = reference[(args.which, name, N)]
        rows.append(row)
    if args.json:
        _emit_json(
            {
                "table": args.which,
                "n": n,
                "degree": D,
                "rows": rows,
                "config": config_echo(cfg, n),
            }
        )
    else:
        print("N,lp_d_sigma,lp_d_pi,paper_d_sigma,paper_d_pi")
        for row in rows:
            cells = [str(row["N"])]
            for key in ("lp_d_sigma", "lp_d_pi", "paper_d_sigma", "paper_d_pi"):
                v = row[key]
                cells.append("" if v is None else f"{v:.6f}")
            print(",".join(cells))
    return EXIT_OK


def _geometric_ladder(nmin: int, nmax: int) -> list[int]:
    """Cardinality sweep: doubling steps from nmin, endpoint included."""
    out = []
    cur = nmin
    while cur < nmax:
        out.append(cur)
        cur *= 2
    out.append(nmax)
    return out


def cmd_curve(args: argparse.Namespace) -> int:
    cfg = effective_config(args)
    _apply_threads(cfg.threads)
    if args.nmin > args.nmax:
        raise ValueError("empty cardinality range: nmin exceeds nmax")
    if args.nmin < 2:
        raise ValueError("cardinality targets start at 2")
    ladder = _geometric_ladder(args.nmin, args.nmax)
    results = []
    for N in ladder:
        d, _, _ = _diversity_star(args.n, _KINDS[args.kind], N, args.degree, cfg)
        results.append((N, d))
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("N,delta_bound\n")
        for N, d in results:
            fh.write(f"{N},{d:.6f}\n")
    if args.json:
        _emit_json(
            {
                "out": args.out,
                "rows": [{"N": N, "delta_bound": d} for N, d in results],
                "config": config_echo(cfg, args.n),
            }
        )
    else:
        print(f"wrote {len(results)} rows to {args.out}")
    return EXIT_OK


def cmd_verify_lemma(args: argparse.Namespace) -> int:
    if args.n < 2:
        raise ValueError("need n >= 2")
    results = []
    for name in Q_NAMES:
        p = q_polynomial(name, args.n, reduce_overlong=True)
        ok, expansion = is_positive_combination(p)
        results.append((name, ok, expansion))
    if args.json:
        _emit_json(
            {
                "n": args.n,
                "results": [
                    {
                        "name": name,
                        "pass": ok,
                        "zonal_coefficients": {
                            _tuple_key(k): str(c) for k, c in sorted(exp.coeffs.items())
                        },
                    }
                    for name, ok, exp in results
                ],
                "config": config_echo(effective_config(args)),
            }
        )
    else:
        for name, ok, exp in results:
            print(f"{name} {'PASS' if ok else 'FAIL'}")
            for kappa, c in sorted(exp.coeffs.items()):
                print(f"  ({_tuple_key(kappa)}) {c}")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_FAIL


def cmd_positivity(args: argparse.Namespace) -> int:
    cfg = effective_config(args)
    _apply_threads(cfg.threads)
    lam = as_partition(parse_tuple_key(args.lam))
    if len(lam) > args.n:
        raise ValueError(f"partition {lam} has more than {args.n} parts")
    kappa = tuple(p + args.s for p in lam + (0,) * (args.n - len(lam)))
    p = real_character(kappa)
    if args.negate:
        p = p * -1
    scale = float(np.real(p.eval_at_angles([0.0] * args.n)))
    minimum = empirical_positivity(
        p, trials=args.trials, code_size=args.size, seed=cfg.seed, threads=cfg.threads
    )
    passed = minimum >= -1e-8 * abs(scale)
    if args.json:
        _emit_json(
            {
                "kappa": _tuple_key(kappa),
                "min_value": minimum,
                "scale": scale,
                "pass": passed,
                "trials": args.trials,
                "size": args.size,
                "config": config_echo(cfg, args.n),
            }
        )
    else:
        print(f"kappa ({_tuple_key(kappa)})")
        print(f"min_value {minimum:.6e}")
        print(f"scale {scale:.6g}")
        print(f"verdict {'PASS' if passed else 'FAIL'}")
    return EXIT_OK if passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser assembly


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", metavar="PATH", help="key = value defaults file")
    sp.add_argument("--json", action="store_true", help="emit one JSON object")
    sp.add_argument("--threads", type=int, help="cap thread pools (default 1)")
    sp.add_argument("--grid", dest="grid_resolution", type=int, help="grid levels per axis")
    sp.add_argument("--slack", type=float, help="region slack for certification")
    sp.add_argument(
        "--verify-factor", dest="verify_resolution_factor", type=int, help="verify grid multiplier"
    )
    sp.add_argument("--max-rounds", dest="max_rounds", type=int, help="cutting-plane round cap")
    sp.add_argument("--seed", type=int, help="randomness seed (positivity)")


def build_parser() -> _Parser:
    parser = _Parser(prog="unitarylp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("bound", help="one bound computation at fixed delta")
    p.add_argument("--n", type=int, required=True, help="matrix size")
    p.add_argument("--kind", choices=sorted(_KINDS), required=True)
    p.add_argument("--delta", type=float, required=True, help="separation target")
    p.add_argument("--degree", type=int, required=True, help="polynomial degree cap")
    _add_common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("diversity", help="largest certifiable delta at fixed cardinality")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=sorted(_KINDS), required=True)
    p.add_argument("--cardinality", type=int, required=True, help="code size N")
    p.add_argument("--degree", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_diversity)

    p = sub.add_parser("table", help="recompute a published comparison table")
    p.add_argument("--which", choices=sorted(_TABLES), required=True)
    p.add_argument("--degree", type=int, help="override the table's default degree")
    _add_common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("curve", help="cardinality sweep on a geometric ladder")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=sorted(_KINDS), required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--nmin", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--out", required=True, help="CSV output path")
    _add_common(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("verify-lemma", help="exact nonnegativity of the seven blocks")
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_verify_lemma)

    p = sub.add_parser("positivity", help="random-code positivity check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", default="0", help="partition, comma separated")
    p.add_argument("--s", type=int, default=0, help="determinant power shift")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--size", type=int, default=8, help="matrices per trial")
    p.add_argument("--negate", action="store_true", help="sanity inversion: expect FAIL")
    _add_common(p)
    p.set_defaults(func=cmd_positivity)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "func", None) is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
