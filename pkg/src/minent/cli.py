"""Command-line experiment runner.

Exit codes: 0 success, 2 unsupported group, 3 budget exceeded, 4 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .errors import (BudgetExceeded, DimensionTooHigh, Disconnected, EmptyFiber, InvalidSpec,
                     MinentError, NonRealizable, NotSmallCancellation, Unsupported)
from .groups.growth import DEFAULT_STATE_CAP

EXIT_OK, EXIT_UNSUPPORTED, EXIT_BUDGET, EXIT_INVALID = 0, 2, 3, 4


def _budgets(args) -> dict:
    return {"backend": args.backend, "t_max": args.t_max, "n_max": args.n_max,
            "state_cap": args.state_cap, "jobs": args.jobs, "seed": args.seed}


def _emit(args, name: str, payload: dict, csv_text: str | None = None) -> None:
    from .io import config_hash, dumps, write_text

    config = {"command": args.command, "inputs": [str(x) for x in _inputs(args)],
              **_budgets(args), **getattr(args, "extra_config", {})}
    payload = {"config": config, "config_hash": config_hash(config), "seed": args.seed,
               "result": payload}
    text = dumps(payload)
    if args.out:
        out = Path(args.out)
        write_text(out / f"{name}.json", text)
        if csv_text is not None:
            write_text(out / f"{name}.csv", csv_text)
    sys.stdout.write(text)


def _inputs(args) -> list:
    return [getattr(args, k) for k in ("input", "config_file") if getattr(args, k, None)]


def _backend(presentation, args):
    from .groups.auto import make_backend
    return make_backend(presentation, args.backend, quotient_seed=args.seed)


# --- commands --------------------------------------------------------------------

def cmd_growth(args) -> int:
    from .groups.growth import ball_counts, entropy_estimate
    from .groups.presentation import Presentation

    try:
        pres = Presentation.load(args.input)
    except (OSError, ValueError, KeyError) as exc:
        raise InvalidSpec(str(exc)) from exc
    backend = _backend(pres, args)
    series = ball_counts(backend, n_max=args.n_max, state_cap=args.state_cap)
    est = entropy_estimate(series)
    _emit(args, "growth", {"backend": backend.describe(), "counts": series.counts,
                           "estimate": est.to_json()}, series.to_csv())
    return EXIT_OK


def _load_complex(args):
    from .io import load_complex
    return load_complex(args.input)


def _model(metric, args, basepoint=0):
    from .entropy import Pi1Model
    return Pi1Model.build(metric.complex, basepoint, args.backend, metric, seed=args.seed)


def cmd_entropy(args) -> int:
    from .entropy import count_loops, volume_entropy_estimate

    metric, _ = _load_complex(args)
    if not metric.complex.connected:
        raise Disconnected("the complex is disconnected")
    model = _model(metric, args, args.basepoint)
    series = count_loops(metric, args.basepoint, model, args.t_max, args.state_cap)
    est = volume_entropy_estimate(series)
    _emit(args, "entropy", {"backend": model.backend.describe(),
                            "presentation": model.meta["presentation"],
                            "estimate": est.to_json(), "state_count": series.meta["states"]},
          series.to_csv())
    return EXIT_OK


def _resolve_complex(cfg: dict, base: Path):
    """A complex from ``{"complex": file}`` or ``{"zoo": spec}`` plus its maps."""
    from .io import load_complex
    from .zoo import ZooSpec, build

    if "zoo" in cfg:
        z = build(ZooSpec.from_json(cfg["zoo"]))
        return z.metric() if cfg.get("zoo_lengths", False) else _unit(z), z.maps
    if "complex" in cfg:
        return load_complex(base / cfg["complex"])
    raise InvalidSpec("config needs a 'complex' file or a 'zoo' spec")


def _unit(z):
    from .complex import MetricComplex
    return MetricComplex.unit(z.complex)


def cmd_collapse(args) -> int:
    from .collapse import CollapseConfig, run_collapse, theorem_a_bound_check

    path = Path(args.config_file)
    try:
        cfg = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidSpec(f"cannot read {path}: {exc}") from exc
    metric, maps = _resolve_complex(cfg, path.parent)
    name = cfg.get("map", "base")
    if name not in maps:
        raise InvalidSpec(f"map {name!r} not found; available: {sorted(maps)}")
    schedule = tuple(float(t) for t in cfg.get("schedule", (1.0, 0.5, 0.25, 0.125)))
    t_max = float(cfg.get("t_max", args.t_max))
    args.extra_config = {"schedule": list(schedule), "map": name, "t_max": t_max}
    config = CollapseConfig(metric, maps[name], schedule, t_max, int(cfg.get("basepoint", 0)),
                            state_cap=args.state_cap)
    model = _model(metric, args, config.basepoint)
    report = run_collapse(config, model, jobs=args.jobs)
    _emit(args, "collapse", {"n_edges": report.n_edges, "verdict": report.verdict.to_json(),
                             "volumes_decreasing": report.volumes_decreasing(),
                             "products_decreasing": report.products_decreasing(),
                             "bound_check": theorem_a_bound_check(report),
                             "rows": [r.__dict__ for r in report.rows]}, report.to_csv())
    return EXIT_OK


def cmd_margulis(args) -> int:
    from .margulis import chain_check, margulis_constant

    metric, _ = _load_complex(args)
    model = _model(metric, args)
    args.extra_config = {"resolution": args.resolution, "delta": args.delta}
    report = margulis_constant(metric, model, resolution=args.resolution,
                               state_cap=args.state_cap, jobs=args.jobs)
    out = report.to_json()
    if args.chain:
        out["chain"] = chain_check(metric, model, args.delta, args.resolution, args.t_max,
                                   args.state_cap, report=report).to_json()
    _emit(args, "margulis", out)
    return EXIT_OK


def _map_or_none(maps, name):
    if name is None:
        return None
    if name not in maps:
        raise InvalidSpec(f"map {name!r} not found; available: {sorted(maps)}")
    return maps[name]


def cmd_nerve(args) -> int:
    from .covers import Cover, nerve, pullback_cover, star_cover

    metric, maps = _load_complex(args)
    pi = _map_or_none(maps, args.map)
    if args.cover:
        sets = json.loads(Path(args.cover).read_text())
        cover = Cover.from_vertex_sets(metric.complex, [frozenset(s) for s in sets])
    elif pi is not None:
        cover = pullback_cover(pi, star_cover(pi.target))
    else:
        cover = star_cover(metric.complex)
    nv = nerve(cover)
    out = {"elements": cover.to_json(), "multiplicity": cover.multiplicity,
           "nerve": nv.to_json(), "nerve_dimension": nv.dimension}
    if args.tag:
        from .covers import cover_growth_tagging
        out["tagging"] = cover_growth_tagging(_model(metric, args), cover).to_json()
    _emit(args, "nerve", out)
    return EXIT_OK


def cmd_width(args) -> int:
    from .covers import width_upper_bound

    metric, maps = _load_complex(args)
    pi = _map_or_none(maps, args.map or "base")
    _emit(args, "width", width_upper_bound(metric, pi).to_json())
    return EXIT_OK


def _parse_params(items: list[str]) -> dict:
    params = {}
    for item in items:
        if "=" not in item:
            raise InvalidSpec(f"parameter {item!r} is not key=value")
        k, v = item.split("=", 1)
        try:
            params[k] = json.loads(v)
        except json.JSONDecodeError:
            params[k] = v
    return params


def _zoo_spec(args):
    from .zoo import ZooSpec

    if args.family.endswith(".json"):
        return ZooSpec.from_json(json.loads(Path(args.family).read_text()))
    return ZooSpec.from_json({"family": args.family, "params": _parse_params(args.params)})


def cmd_zoo(args) -> int:
    from .io import complex_to_json, dumps, write_text
    from .zoo import FAMILIES, build

    if args.action == "list":
        sys.stdout.write("\n".join(FAMILIES) + "\n")
        return EXIT_OK
    if not args.family:
        raise InvalidSpec("zoo build needs a family")
    spec = _zoo_spec(args)
    z = build(spec)
    data = complex_to_json(z.metric(), z.maps)
    data["zoo"] = spec.to_json()
    text = dumps(data)
    if args.output:
        write_text(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .zoo import verify

    spec = _zoo_spec(args)
    args.extra_config = {"spec": spec.to_json()}
    report = verify(spec)
    _emit(args, "verify", report)
    return EXIT_OK if report["ok"] else 1


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", choices=("auto", "free", "abelian", "sc"), default="auto")
    common.add_argument("--t-max", type=float, default=10.0, help="loop length budget")
    common.add_argument("--n-max", type=int, default=10, help="word radius budget")
    common.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="directory for JSON/CSV outputs")

    p = argparse.ArgumentParser(prog="minent", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("growth", parents=[common], help="Cayley ball growth of a presentation")
    g.add_argument("input")
    g.add_argument("-n", dest="n_max", type=int, default=10)
    g.set_defaults(func=cmd_growth)

    e = sub.add_parser("entropy", parents=[common], help="volume entropy of a metric complex")
    e.add_argument("input")
    e.add_argument("--basepoint", type=int, default=0)
    e.set_defaults(func=cmd_entropy)

    c = sub.add_parser("collapse", parents=[common], help="g_t collapse run from a JSON config")
    c.add_argument("config_file")
    c.set_defaults(func=cmd_collapse)

    m = sub.add_parser("margulis", parents=[common], help="Margulis-type constant")
    m.add_argument("input")
    m.add_argument("--resolution", type=float, default=1 / 16)
    m.add_argument("--chain", action="store_true", help="also evaluate the inequality chain")
    m.add_argument("--delta", type=float, default=0.0)
    m.set_defaults(func=cmd_margulis)

    n = sub.add_parser("nerve", parents=[common], help="star or pullback cover and its nerve")
    n.add_argument("input")
    n.add_argument("--map")
    n.add_argument("--cover", help="JSON list of vertex lists")
    n.add_argument("--tag", action="store_true", help="classify element subgroups")
    n.set_defaults(func=cmd_nerve)

    w = sub.add_parser("width", parents=[common], help="fiber-diameter width upper bound")
    w.add_argument("input")
    w.add_argument("--map")
    w.set_defaults(func=cmd_width)

    z = sub.add_parser("zoo", parents=[common], help="build example complexes")
    z.add_argument("action", choices=("build", "list"))
    z.add_argument("family", nargs="?")
    z.add_argument("params", nargs="*", help="key=value (values parsed as JSON)")
    z.add_argument("-o", "--output")
    z.set_defaults(func=cmd_zoo)

    v = sub.add_parser("verify", parents=[common], help="verify a zoo member")
    v.add_argument("family")
    v.add_argument("params", nargs="*")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.t_max <= 0 or args.n_max < 1 or args.state_cap < 1 or args.jobs < 1:
        print("error: budgets must be positive", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except (Unsupported, NotSmallCancellation) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidSpec, Disconnected, EmptyFiber, DimensionTooHigh, NonRealizable) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (MinentError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
