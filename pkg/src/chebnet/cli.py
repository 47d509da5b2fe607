"""Command-line driver: approximate, construct, diagnose, train, evaluate.

Exit codes: 0 on success, 1 on invalid input, 2 on numerical failure.
A reported training divergence is a result, not a failure (exit 0).
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .chebyshev import (
    ChebExpansion,
    LegendreExpansion,
    MonomialExpansion,
    chebyshev_interpolate,
    eval_chebyshev,
    eval_legendre,
    eval_monomial,
    legendre_project,
    legendre_to_monomial,
)
from .conditioning import coefficient_magnitudes, cond_table
from .construct import (
    build_chebnet_1d,
    build_chebnet_1d_general,
    build_chebnet_downward_closed,
    build_powernet_1d,
)
from .expressions import parse_expression
from .indexsets import IndexSet
from .multivariate import ChebExpansionND, eval_chebyshev_nd
from .network import complexity, forward, load_network, network_to_dict, save_network
from .training import Dataset, TrainConfig, loss_mse, test_function, train

LONG_RUN_DEGREE_CAP = 500


class NumericalFailure(RuntimeError):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


def _resolve_function(name: str):
    if name in ("f1", "f2"):
        return test_function(name)
    return parse_expression(name)


def _int_list(text: str):
    try:
        return [int(v) for v in text.split(",") if v != ""]
    except ValueError as exc:
        raise ValueError(f"expected a comma-separated integer list, got {text!r}") from exc


# --- expansion files ---------------------------------------------------------


def expansion_to_dict(obj) -> dict:
    if isinstance(obj, ChebExpansion):
        return {"basis": "chebyshev", "dim": 1, "index_set": None,
                "coeffs": obj.coeffs.tolist()}
    if isinstance(obj, LegendreExpansion):
        return {"basis": "legendre", "dim": 1, "index_set": None,
                "coeffs": obj.coeffs.tolist()}
    if isinstance(obj, MonomialExpansion):
        return {"basis": "monomial", "dim": 1, "index_set": None,
                "coeffs": obj.coeffs.tolist()}
    if isinstance(obj, ChebExpansionND):
        keys = sorted(obj.coeffs)
        return {"basis": "chebyshev", "dim": obj.dim,
                "index_set": [list(k) for k in keys],
                "coeffs": [obj.coeffs[k] for k in keys]}
    raise ValueError(f"cannot serialize {type(obj).__name__}")


def expansion_from_dict(doc: dict):
    try:
        basis = doc["basis"]
        dim = int(doc.get("dim", 1))
        coeffs = doc["coeffs"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed expansion document: {exc}") from exc
    if dim == 1:
        cls = {"chebyshev": ChebExpansion, "legendre": LegendreExpansion,
               "monomial": MonomialExpansion}.get(basis)
        if cls is None:
            raise ValueError(f"unknown basis {basis!r}")
        return cls(np.asarray(coeffs, dtype=float))
    if basis != "chebyshev":
        raise ValueError("multivariate expansions must use the chebyshev basis")
    keys = [tuple(int(v) for v in k) for k in doc["index_set"]]
    index_set = IndexSet(frozenset(keys), dim)
    return ChebExpansionND(dict(zip(keys, coeffs)), index_set)


def save_expansion(obj, path) -> None:
    with open(path, "w") as fh:
        json.dump(expansion_to_dict(obj), fh)
        fh.write("\n")


def load_expansion(path):
    with open(path) as fh:
        return expansion_from_dict(json.load(fh))


# --- manifest ----------------------------------------------------------------


def _write_manifest(command, args, inputs, outputs, started):
    if not outputs:
        return
    manifest = {
        "command": command,
        "parameters": {k: v for k, v in vars(args).items() if k != "func"},
        "inputs": [str(p) for p in inputs],
        "outputs": [str(p) for p in outputs],
        "tool_version": __version__,
        "duration_seconds": time.monotonic() - started,
    }
    path = str(outputs[0]) + ".manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, default=str)
        fh.write("\n")


# --- subcommands -------------------------------------------------------------


def _cmd_approx(args) -> int:
    started = time.monotonic()
    f = _resolve_function(args.function)
    if args.basis == "chebyshev":
        exp = chebyshev_interpolate(f, args.N)
        evaluate = eval_chebyshev
    else:
        exp = legendre_project(f, args.N)
        evaluate = eval_legendre
    grid = np.linspace(-1.0, 1.0, 1000)
    residual = float(np.max(np.abs(evaluate(exp, grid) - np.asarray(f(grid), dtype=float))))
    if not np.isfinite(residual):
        raise NumericalFailure("approximation residual is not finite")
    outputs = []
    if args.output:
        save_expansion(exp, args.output)
        outputs.append(args.output)
    summary = {"basis": args.basis, "degree": args.N,
               "coefficients": len(exp.coeffs), "max_abs_residual": residual}
    if args.json:
        print(json.dumps(summary))
    else:
        print(f"{args.basis} approximation of degree {args.N}: "
              f"{len(exp.coeffs)} coefficients, max|f - p| = {residual:.6g} on 1000 points")
    _write_manifest("approx", args, [], outputs, started)
    return 0


def _reference_evaluator(exp):
    if isinstance(exp, ChebExpansion):
        return lambda pts: eval_chebyshev(exp, pts)
    if isinstance(exp, MonomialExpansion):
        return lambda pts: eval_monomial(exp, pts)
    if isinstance(exp, ChebExpansionND):
        return lambda pts: eval_chebyshev_nd(exp, pts)
    raise ValueError("no reference evaluator for this expansion")


def _cmd_construct(args) -> int:
    started = time.monotonic()
    exp = load_expansion(args.expansion)
    if args.kind == "powernet":
        if isinstance(exp, LegendreExpansion):
            if not args.via_monomial:
                raise ValueError(
                    "powernet needs a monomial expansion; pass --via-monomial "
                    "to convert a Legendre expansion"
                )
            exp = legendre_to_monomial(exp)
        if not isinstance(exp, MonomialExpansion):
            raise ValueError("powernet construction needs a monomial expansion")
        receipt = build_powernet_1d(exp)
    else:
        if isinstance(exp, ChebExpansion):
            receipt = (build_chebnet_1d(exp) if args.s == 2
                       else build_chebnet_1d_general(exp, args.s))
        elif isinstance(exp, ChebExpansionND):
            if args.s != 2:
                raise ValueError("multivariate construction supports s = 2 only")
            receipt = build_chebnet_downward_closed(exp)
        else:
            raise ValueError("chebnet construction needs a chebyshev expansion")
    net = receipt.network
    reference = _reference_evaluator(exp)
    if net.input_dim == 1:
        pts = np.linspace(-1.0, 1.0, 1000)
    else:
        pts = np.random.default_rng(0).uniform(-1.0, 1.0, (1000, net.input_dim))
    want = np.asarray(reference(pts), dtype=float)
    got = np.asarray(forward(net, pts), dtype=float)
    scale = max(1.0, float(np.max(np.abs(want))))
    err = float(np.max(np.abs(got - want)) / scale)
    if not np.isfinite(err):
        raise NumericalFailure("construction error is not finite")
    outputs = []
    if args.output:
        save_network(net, args.output)
        outputs.append(args.output)
    rep = receipt.report
    summary = {
        "kind": args.kind, "s": net.power,
        "hidden_layers": rep.hidden_layers,
        "hidden_layer_bound": receipt.hidden_layer_bound,
        "activations": rep.activation_count,
        "nonzero_weights": rep.nonzero_weights,
        "max_construction_error": err,
        "fingerprint": receipt.source_fingerprint,
    }
    if args.json:
        print(json.dumps(summary))
    else:
        print(f"{args.kind} (s={net.power}): {rep.hidden_layers} hidden layers "
              f"(bound {receipt.hidden_layer_bound}), {rep.activation_count} activations, "
              f"{rep.nonzero_weights} nonzero weights")
        print(f"max construction error vs reference on 1000 points: {err:.6g}")
    _write_manifest("construct", args, [args.expansion], outputs, started)
    return 0


def _cmd_cond(args) -> int:
    started = time.monotonic()
    s_values = _int_list(args.s)
    degrees = _int_list(args.N)
    if any(N > LONG_RUN_DEGREE_CAP for N in degrees) and not args.long:
        raise ValueError(
            f"degrees above {LONG_RUN_DEGREE_CAP} require --long (long-running run)"
        )
    rows = cond_table(s_values, degrees)
    lines = ["s,N,kappa_B,kappa_H"]
    for row in rows:
        lines.append(f"{row.s},{row.N},{row.kappa_B:.4g},{row.kappa_H:.4g}")
    text = "\n".join(lines) + "\n"
    outputs = []
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        outputs.append(args.output)
    if args.json:
        print(json.dumps([
            {"s": r.s, "N": r.N, "kappa_B": float(f"{r.kappa_B:.4g}"),
             "kappa_H": float(f"{r.kappa_H:.4g}")} for r in rows
        ]))
    elif not args.output:
        sys.stdout.write(text)
    _write_manifest("cond", args, [], outputs, started)
    return 0


def _cmd_train(args) -> int:
    started = time.monotonic()
    net = load_network(args.network)
    if net.input_dim != 1:
        raise ValueError("training targets are univariate; network input_dim must be 1")
    f = _resolve_function(args.function)
    x = np.linspace(-1.0, 1.0, args.points)
    data = Dataset(x, np.asarray(f(x), dtype=float))
    cfg = TrainConfig(gamma=args.gamma, eta=args.eta, epsilon=args.epsilon,
                      iterations=args.iterations)
    initial = loss_mse(net, data)
    trace, trained = train(net, data, cfg)
    final = loss_mse(trained, data)
    if initial > 0:
        ratio = final / initial
    else:
        ratio = 1.0 if final == 0 else float("inf")
    outputs = []
    if args.output:
        trace_path = f"{args.output}.trace.csv"
        with open(trace_path, "w") as fh:
            fh.write("iteration,loss\n")
            for i, value in enumerate(trace.losses):
                fh.write(f"{i},{value!r}\n")
        net_path = f"{args.output}.trained.json"
        save_network(trained, net_path)
        outputs = [trace_path, net_path]
    summary = {
        "initial_loss": initial, "final_loss": final, "ratio": ratio,
        "iterations_run": len(trace.losses), "diverged": trace.diverged,
    }
    if args.json:
        print(json.dumps(summary))
    else:
        print(f"initial loss {initial:.6g}, final loss {final:.6g}, ratio {ratio:.6g}")
        if trace.diverged:
            print(f"training diverged after {len(trace.losses)} recorded iterations")
    _write_manifest("train", args, [args.network], outputs, started)
    return 0


def _cmd_coeffs(args) -> int:
    started = time.monotonic()
    f = _resolve_function(args.function)
    report = coefficient_magnitudes(f, args.N)
    lines = ["j,legendre,monomial,chebyshev,hierarchical"]
    for j in range(args.N + 1):
        lines.append(
            f"{j},{report.legendre[j]!r},{report.monomial[j]!r},"
            f"{report.chebyshev[j]!r},{report.hierarchical[j]!r}"
        )
    text = "\n".join(lines) + "\n"
    outputs = []
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        outputs.append(args.output)
    else:
        sys.stdout.write(text)
    _write_manifest("coeffs", args, [], outputs, started)
    return 0


def _parse_points(text: str, dim: int) -> np.ndarray:
    points = []
    for chunk in text.split(";"):
        if chunk.strip() == "":
            continue
        values = [float(v) for v in chunk.split(",")]
        if len(values) != dim:
            raise ValueError(f"point {chunk!r} has {len(values)} coordinates, expected {dim}")
        points.append(values)
    if not points:
        raise ValueError("no evaluation points given")
    return np.asarray(points)


def _cmd_eval(args) -> int:
    started = time.monotonic()
    with open(args.file) as fh:
        doc = json.load(fh)
    if "layers" in doc:
        from .network import network_from_dict

        net = network_from_dict(doc)
        dim = net.input_dim
        evaluate = lambda pts: forward(net, pts if dim > 1 else pts[:, 0])  # noqa: E731
    else:
        exp = expansion_from_dict(doc)
        dim = getattr(exp, "dim", 1)
        ref = _reference_evaluator(exp) if not isinstance(exp, LegendreExpansion) \
            else (lambda pts: eval_legendre(exp, pts))
        evaluate = (lambda pts: ref(pts if dim > 1 else pts[:, 0]))
    if args.at:
        pts = _parse_points(args.at, dim)
    elif dim == 1:
        pts = np.linspace(-1.0, 1.0, args.grid).reshape(-1, 1)
    else:
        raise ValueError("--at is required for multivariate inputs")
    values = np.asarray(evaluate(pts), dtype=float).reshape(len(pts))
    header = ",".join(f"x{i+1}" for i in range(dim)) + ",value"
    lines = [header]
    for p, v in zip(pts, values):
        lines.append(",".join(repr(float(c)) for c in p) + f",{v!r}")
    text = "\n".join(lines) + "\n"
    outputs = []
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        outputs.append(args.output)
    elif args.json:
        print(json.dumps({"points": pts.tolist(), "values": values.tolist()}))
    else:
        sys.stdout.write(text)
    _write_manifest("eval", args, [args.file], outputs, started)
    return 0


def build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="chebnet",
        description="Compile polynomial approximations into exact RePU networks",
    )
    parser.add_argument("--version", action="version", version=f"chebnet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", help="primary output path")
        p.add_argument("--json", action="store_true", help="print summaries as JSON")
        p.add_argument("--seed", type=int, default=0, help="reserved; accepted for forward compatibility")
        p.add_argument("--long", action="store_true",
                       help=f"allow conditioning degrees above {LONG_RUN_DEGREE_CAP}")

    p = sub.add_parser("approx", help="fit a polynomial approximation to a function")
    p.add_argument("function", help="f1, f2, or an expression over x")
    p.add_argument("--basis", choices=("chebyshev", "legendre"), default="chebyshev")
    p.add_argument("-N", type=int, required=True, help="polynomial degree")
    common(p)
    p.set_defaults(func=_cmd_approx)

    p = sub.add_parser("construct", help="compile an expansion file into a network")
    p.add_argument("expansion", help="expansion JSON file")
    p.add_argument("--kind", choices=("chebnet", "powernet"), default="chebnet")
    p.add_argument("--s", type=int, default=2, help="activation power")
    p.add_argument("--via-monomial", action="store_true",
                   help="convert a Legendre expansion to a power series first")
    common(p)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("cond", help="condition numbers of the basis transforms")
    p.add_argument("--s", default="2", help="comma-separated section sizes")
    p.add_argument("--N", default="", help="comma-separated degrees")
    common(p)
    p.set_defaults(func=_cmd_cond)

    p = sub.add_parser("train", help="fine-tune a network on a target function")
    p.add_argument("network", help="network JSON file")
    p.add_argument("function", help="f1, f2, or an expression over x")
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--gamma", type=float, default=0.99)
    p.add_argument("--eta", type=float, default=1e-5)
    p.add_argument("--epsilon", type=float, default=1e-8)
    p.add_argument("--iterations", type=int, default=2000)
    common(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("coeffs", help="coefficient magnitudes in all four bases")
    p.add_argument("function", help="f1, f2, or an expression over x")
    p.add_argument("-N", type=int, required=True, help="truncation degree")
    common(p)
    p.set_defaults(func=_cmd_coeffs)

    p = sub.add_parser("eval", help="evaluate a network or expansion file")
    p.add_argument("file", help="network or expansion JSON file")
    p.add_argument("--at", help="points, e.g. '0.1,0.2;0.3,0.4' for 2-D")
    p.add_argument("--grid", type=int, default=9, help="1-D grid size when --at is absent")
    common(p)
    p.set_defaults(func=_cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"chebnet: invalid input: {exc}", file=sys.stderr)
        return 1
    except (NumericalFailure, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"chebnet: numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
