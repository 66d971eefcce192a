"""``lnec`` command-line front end.

Every subcommand builds one JSON-serializable result object.  ``--format
json`` prints it verbatim; ``--format text`` renders the same object as
indented ``key: value`` lines.  Failures print ``{"error": {...}}`` on stderr
and exit with the error's status (3 validation, 4 computation, 5 scan guard).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .exceptions import LnecError, ParameterError, ValidationError
from .galois import field_arith
from .lneccode import (
    LnecCode,
    check_equivalence,
    construct,
    decode,
    distance,
    min_distance,
    is_mds,
    verify_path_sums,
)
from .mincut import mincut_edges_to_node, primary_min_cut, source_capacity
from .netgraph import partition_reachable, read_network
from .primaries import (
    _beta_map,
    check_rate,
    count_correctable,
    enumerate_primary,
    field_size_bound,
    mds_field_size_bound,
)


def _edge_list(net, edges):
    return list(net.sort_edges(edges))


def _split(text):
    return [x for x in (p.strip() for p in text.split(",")) if x]


def _ints(text, what):
    try:
        return [int(x) for x in _split(text)]
    except ValueError:
        raise ParameterError(f"{what} must be comma-separated integers") from None


def _load_net(args):
    return read_network(args.net)


def _load_code(args):
    try:
        obj = json.loads(Path(args.code).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{args.code}: invalid JSON: {exc}") from None
    if isinstance(obj, dict) and "code" in obj and "schema" not in obj:
        obj = obj["code"]  # output of `construct` without --out
    return LnecCode.from_dict(obj)


def cmd_mincut(args):
    net = _load_net(args)
    rho = net.check_edges(_split(args.edges))
    cut = primary_min_cut(net, rho, args.sink)
    return {
        "sink": args.sink,
        "edges": _edge_list(net, rho),
        "capacity": mincut_edges_to_node(net, rho, args.sink),
        "primary_cut": _edge_list(net, cut),
    }


def cmd_primary(args):
    net = _load_net(args)
    fam = enumerate_primary(net, args.sink, args.r)
    members = sorted((_edge_list(net, m) for m in fam), key=lambda m: [net.position(e) for e in m])
    return {"sink": args.sink, "r": args.r, "count": len(members), "subsets": members}


def cmd_partition(args):
    net = _load_net(args)
    reach, blocked = partition_reachable(net, args.sink, _split(args.edges))
    return {
        "sink": args.sink,
        "edges": _edge_list(net, net.check_edges(_split(args.edges))),
        "reaching": _edge_list(net, reach),
        "blocked": _edge_list(net, blocked),
    }


def cmd_correctable(args):
    net = _load_net(args)
    n = count_correctable(net, args.sink, args.r, method=args.method, force=args.force_scan)
    return {"sink": args.sink, "r": args.r, "method": args.method, "count": n}


def _beta_arg(net, args):
    if args.mds:
        caps = check_rate(net, args.w)
        return {t: caps[t] - args.w for t in net.sinks}
    if args.beta is None:
        raise ParameterError("give --beta b1,b2,... or --mds")
    return _beta_map(net, _ints(args.beta, "--beta"))


def cmd_bound(args):
    net = _load_net(args)
    if args.mds:
        return mds_field_size_bound(net, args.w).to_dict()
    return field_size_bound(net, args.w, _beta_arg(net, args)).to_dict()


def cmd_construct(args):
    net = _load_net(args)
    beta = _beta_arg(net, args)
    if args.field is None:
        q = field_size_bound(net, args.w, beta).min_prime_power
    else:
        q = args.field
    field = field_arith(q)
    code = construct(net, args.w, beta, field, seed=args.seed, max_attempts=args.max_attempts)
    out = {
        "field": q,
        "w": args.w,
        "beta": beta,
        "min_distance": {t: min_distance(code, t, "primaries") for t in net.sinks},
        "mds": is_mds(code),
    }
    if args.out:
        Path(args.out).write_text(code.to_json(indent=2) + "\n", encoding="utf-8")
        out["out"] = args.out
    else:
        out["code"] = code.to_dict()
    return out


def cmd_mindist(args):
    code = _load_code(args)
    return {
        "sink": args.sink,
        "method": args.method,
        "min_distance": min_distance(code, args.sink, args.method),
    }


def cmd_decode(args):
    code = _load_code(args)
    view = code.sink_view(args.sink)
    y = _ints(args.recv, "--recv")
    radius = args.radius
    if radius is None:
        radius = (min_distance(code, args.sink, "primaries") - 1) // 2
    x = decode(view, y, radius)
    return {"sink": args.sink, "radius": radius, "message": [int(v) for v in x]}


def _metric_check(code, t, samples, rng):
    view = code.sink_view(t)
    n, q = len(view.inputs), code.field.order
    ok = True
    for _ in range(samples):
        a, b, c = (rng.integers(0, q, n) for _ in range(3))
        dab, dba = distance(view, a, b), distance(view, b, a)
        ok &= distance(view, a, a) == 0
        ok &= (dab == 0) == bool(np.array_equal(a, b))
        ok &= dab == dba
        ok &= distance(view, a, c) <= dab + distance(view, b, c)
    return bool(ok)


def cmd_verify(args):
    code = _load_code(args)
    net = code.network
    rng = np.random.default_rng(args.seed)
    sinks = {}
    all_ok = True
    for t in net.sinks:
        top = source_capacity(net, t) - code.w
        rs = [args.r] if args.r is not None else list(range(1, top + 1))
        thm = {}
        for r in rs:
            chk = check_equivalence(code, t, r, force=args.force_scan)
            thm[str(r)] = {
                "primary": chk.primary,
                "hamming": chk.hamming,
                "correctable": chk.correctable,
                "containment": chk.containment,
                "holds": chk.holds,
            }
            all_ok &= chk.holds
        inputs = net.in_edges(t)
        paths_ok = all(verify_path_sums(code, e, e_hat) for e in net.order for e_hat in inputs)
        metric_ok = _metric_check(code, t, args.samples, rng)
        all_ok &= paths_ok and metric_ok
        sinks[t] = {"equivalence": thm, "path_sums": paths_ok, "metric": metric_ok}
    return {"ok": bool(all_ok), "sinks": sinks}


def _nested(v):
    return isinstance(v, dict) or (isinstance(v, list) and any(isinstance(i, (dict, list)) for i in v))


def _render(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if _nested(v) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_render(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    else:
        for v in obj:
            if isinstance(v, dict):
                lines.append(f"{pad}-")
                lines.extend(_render(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    return lines


def _scalar(v):
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        if v and all(isinstance(x, str) for x in v):
            return "{" + ", ".join(v) + "}"
        return json.dumps(v)
    if isinstance(v, dict):
        return "{}"
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--force-scan", action="store_true", default=argparse.SUPPRESS,
                        help="allow exhaustive scans above the size guard")

    p = argparse.ArgumentParser(prog="lnec", description="Linear network error correction toolkit.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--force-scan", action="store_true", default=False,
                   help="allow exhaustive scans above the size guard")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("mincut", cmd_mincut, "capacity and primary minimum cut for an edge subset")
    sp.add_argument("--net", required=True)
    sp.add_argument("--sink", required=True)
    sp.add_argument("--edges", required=True)

    sp = add("primary", cmd_primary, "list the size-r primary edge subsets")
    sp.add_argument("--net", required=True)
    sp.add_argument("--sink", required=True)
    sp.add_argument("--r", type=int, required=True)

    sp = add("partition", cmd_partition, "edges still reaching the sink after deleting a subset")
    sp.add_argument("--net", required=True)
    sp.add_argument("--sink", required=True)
    sp.add_argument("--edges", required=True)

    sp = add("correctable", cmd_correctable, "count edge subsets with mincut <= r")
    sp.add_argument("--net", required=True)
    sp.add_argument("--sink", required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--method", choices=("exhaustive", "classes"), default="exhaustive")

    for name, func, help_ in (
        ("bound", cmd_bound, "field-size bounds"),
        ("construct", cmd_construct, "build a code"),
    ):
        sp = add(name, func, help_)
        sp.add_argument("--net", required=True)
        sp.add_argument("--w", type=int, required=True)
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--beta")
        g.add_argument("--mds", action="store_true")
        if name == "construct":
            sp.add_argument("--field", type=int)
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--max-attempts", type=int, default=50)
            sp.add_argument("--out")

    sp = add("mindist", cmd_mindist, "minimum distance at a sink")
    sp.add_argument("--code", required=True)
    sp.add_argument("--sink", required=True)
    sp.add_argument("--method", choices=("exhaustive", "primaries"), default="primaries")

    sp = add("decode", cmd_decode, "decode a received word")
    sp.add_argument("--code", required=True)
    sp.add_argument("--sink", required=True)
    sp.add_argument("--recv", required=True)
    sp.add_argument("--radius", type=int)

    sp = add("verify", cmd_verify, "check equivalences, path sums and metric axioms")
    sp.add_argument("--code", required=True)
    sp.add_argument("--r", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=5)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except LnecError as exc:
        print(json.dumps({"error": exc.to_dict()}), file=sys.stderr)
        return exc.exit_status
    except OSError as exc:
        print(json.dumps({"error": {"code": "io", "message": str(exc)}}), file=sys.stderr)
        return 3
    if args.format == "json":
        print(json.dumps(result, indent=2))
    else:
        print("\n".join(_render(result)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
