"""Command-line front end.

Subcommands:

- ``run``: execute a protocol file and write the dataset CSV (and images).
- ``validate``: run the randomized edge-validation procedure and write the
  report CSV.
- ``models``: tabulate a mechanistic model over a grid, or score it against
  recorded data (RMSE and R-squared after an affine calibration fit).
- ``graph``: export a ground-truth adjacency CSV or score an estimate
  against it (edge precision and recall).

Exit codes: 0 success, 1 content errors (protocol parse failures, unknown
model or variable names, empty inputs), 2 I/O and usage errors.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from .dataset_io import write_experiment
from .graphs import edge_precision_recall, export_adjacency_csv, graph_for, read_adjacency_csv
from .models import (
    FanParams,
    integrate_fan_speed,
    model_a1_speed,
    model_b1_current,
    model_c1_pressure,
    model_c3_pressure,
    model_d1_pressure_diff,
    model_e1_intensity,
    model_f_color,
    static_pressure,
)
from .params import PRESETS, SimParams, load_params, preset
from .protocol import ProtocolError, load_protocol
from .engine import SimulationError, run_protocol_blocks
from .validation import EdgeResult, validate_all, validate_edge, write_report
from .variables import Config, variables_for


def _load_sim_params(args) -> SimParams:
    base = preset(args.preset) if getattr(args, "preset", None) else SimParams()
    if getattr(args, "params", None):
        return load_params(args.params, base=base)
    return base


# -- run ------------------------------------------------------------------

def cmd_run(args) -> int:
    try:
        protocol = load_protocol(args.protocol)
    except OSError as e:
        print(f"error: cannot read protocol: {e}", file=sys.stderr)
        return 2
    except ProtocolError as e:
        print(f"error: {args.protocol}: {e}", file=sys.stderr)
        return 1
    try:
        params = _load_sim_params(args)
    except (OSError, ValueError) as e:
        print(f"error: bad params: {e}", file=sys.stderr)
        return 1 if isinstance(e, ValueError) else 2
    name = args.name or args.protocol.rsplit("/", 1)[-1].removesuffix(".txt")
    started = time.perf_counter()
    try:
        blocks = run_protocol_blocks(protocol, params=params,
                                     fidelity=args.fidelity, seed=args.seed)
        n_rows = write_experiment(blocks, args.out, name)
    except SimulationError as e:
        print(f"error: simulation failed: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: cannot write dataset: {e}", file=sys.stderr)
        return 2
    elapsed = time.perf_counter() - started
    print(f"{n_rows} rows in {elapsed:.2f} s -> {args.out}/{name}.csv")
    return 0


# -- validate ---------------------------------------------------------------

def _read_edges_file(path: str, config: Config):
    """Parse an edges file: ``source,target`` per line, optionally followed
    by explicit intervention values ``,x_A,x_B``. Returns (edges, skipped)."""
    known = {v.id for v in variables_for(config)}
    edges, skipped = [], []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = [t.strip() for t in line.split(",")]
            if lineno == 1 and fields[0].lower() in ("source", "edge", "from"):
                continue
            if len(fields) not in (2, 4):
                skipped.append((lineno, line, "expected 2 or 4 comma-separated fields"))
                continue
            source, target = fields[0], fields[1]
            if source not in known or target not in known:
                bad = source if source not in known else target
                skipped.append((lineno, line, f"unknown variable {bad!r}"))
                continue
            values = None
            if len(fields) == 4:
                try:
                    values = (float(fields[2]), float(fields[3]))
                except ValueError:
                    skipped.append((lineno, line, "bad intervention values"))
                    continue
            edges.append((source, target, values))
    return edges, skipped


def cmd_validate(args) -> int:
    try:
        config = Config(args.config)
    except ValueError:
        print(f"error: unknown config {args.config!r}", file=sys.stderr)
        return 1
    try:
        params = _load_sim_params(args)
    except (OSError, ValueError) as e:
        print(f"error: bad params: {e}", file=sys.stderr)
        return 1 if isinstance(e, ValueError) else 2
    results: list[EdgeResult] = []
    started = time.perf_counter()
    if args.all:
        results = validate_all(config, n=args.N, alpha=args.alpha, wait=args.T,
                               seed=args.seed, params=params)
    else:
        try:
            edges, skipped = _read_edges_file(args.edges, config)
        except OSError as e:
            print(f"error: cannot read edges file: {e}", file=sys.stderr)
            return 2
        for lineno, line, reason in skipped:
            print(f"warning: {args.edges}:{lineno}: skipping {line!r}: {reason}",
                  file=sys.stderr)
        if not edges:
            print("error: nothing to validate", file=sys.stderr)
            return 1
        for source, target, values in sorted(edges):
            results.append(validate_edge(config, source, target, n=args.N,
                                         alpha=args.alpha, wait=args.T,
                                         seed=args.seed, params=params,
                                         values=values))
    elapsed = time.perf_counter() - started
    try:
        write_report(results, args.out)
    except OSError as e:
        print(f"error: cannot write report: {e}", file=sys.stderr)
        return 2
    rejected = sum(r.rejected for r in results)
    underpowered = sum(r.underpowered for r in results)
    line = f"rejected {rejected}/{len(results)} edges in {elapsed:.2f} s -> {args.out}"
    if underpowered:
        line += f" ({underpowered} underpowered)"
    print(line)
    return 0


# -- models -------------------------------------------------------------------

class _ModelSpec:
    def __init__(self, inputs, output, sweep, defaults, fn, vector_outputs=None):
        self.inputs = inputs
        self.output = output
        self.sweep = sweep  # (name, lo, hi, step)
        self.defaults = defaults
        self.fn = fn
        self.vector_outputs = vector_outputs


def _a2_step_response(t_values, fixed):
    load = fixed.get("L", 1.0)
    out = []
    omega, t_prev = 0.0, 0.0
    for t in t_values:
        if t > t_prev:
            omega = integrate_fan_speed(omega, load, t - t_prev)
        out.append(omega)
        t_prev = t
    return np.asarray(out)


_OMEGA_MAX = FanParams().omega_max

_MODEL_SPECS = {
    "A1": _ModelSpec(("L",), "omega", ("L", 0.0, 1.0, 0.05), {},
                     lambda v: model_a1_speed(v["L"])),
    "A2": _ModelSpec(("t", "L"), "omega", ("t", 0.0, 10.0, 0.1), {"L": 1.0}, None),
    "B1": _ModelSpec(("L",), "current", ("L", 0.0, 1.0, 0.05), {},
                     lambda v: model_b1_current(v["L"])),
    "C1": _ModelSpec(("omega_in", "omega_out"), "pressure",
                     ("omega_in", 0.0, _OMEGA_MAX, _OMEGA_MAX / 20), {"omega_out": 0.0},
                     lambda v: model_c1_pressure(v["omega_in"], v["omega_out"])),
    "C2": _ModelSpec(("omega", "r"), "pressure",
                     ("omega", 0.0, _OMEGA_MAX, _OMEGA_MAX / 20), {"r": 0.5},
                     lambda v: static_pressure(v["omega"], v["r"])),
    "C3": _ModelSpec(("H", "omega_in", "omega_out"), "pressure",
                     ("H", 0.0, 45.0, 1.0),
                     {"omega_in": 0.5 * _OMEGA_MAX, "omega_out": 0.25 * _OMEGA_MAX},
                     lambda v: model_c3_pressure(v["omega_in"], v["omega_out"], v["H"])),
    "D1": _ModelSpec(("omega_in",), "pressure_diff",
                     ("omega_in", 0.0, _OMEGA_MAX, _OMEGA_MAX / 20), {},
                     lambda v: model_d1_pressure_diff(v["omega_in"])),
    "E1": _ModelSpec(("theta_1", "theta_2"), "intensity",
                     ("theta_1", -90.0, 90.0, 5.0), {"theta_2": 0.0},
                     lambda v: model_e1_intensity(v["theta_1"], v["theta_2"])),
}
for _fid in ("F1", "F2", "F3"):
    _MODEL_SPECS[_fid] = _ModelSpec(
        ("theta_1", "theta_2", "red", "green", "blue"), "out",
        ("theta_1", -90.0, 90.0, 5.0),
        {"theta_2": 0.0, "red": 255.0, "green": 255.0, "blue": 255.0},
        None, vector_outputs=("out_r", "out_g", "out_b"))


def _parse_grid(spec_text: str, model: _ModelSpec):
    """Parse ``name=lo:hi:step`` sweeps and ``name=value`` fixings."""
    sweep = None
    fixed = dict(model.defaults)
    if spec_text:
        for part in spec_text.split(","):
            if "=" not in part:
                raise ValueError(f"bad grid assignment {part!r}")
            name, _, value = part.partition("=")
            name = name.strip()
            if name not in model.inputs:
                raise ValueError(
                    f"unknown grid variable {name!r}; inputs are {', '.join(model.inputs)}")
            if ":" in value:
                pieces = value.split(":")
                if len(pieces) != 3:
                    raise ValueError(f"bad sweep {part!r}; expected name=lo:hi:step")
                if sweep is not None:
                    raise ValueError("only one sweep variable allowed")
                try:
                    lo, hi, step = (float(p) for p in pieces)
                except ValueError:
                    raise ValueError(f"bad sweep {part!r}; expected name=lo:hi:step") from None
                if step <= 0 or hi < lo:
                    raise ValueError(f"bad sweep bounds in {part!r}")
                n = int(np.floor((hi - lo) / step + 1e-9)) + 1
                sweep = (name, lo + step * np.arange(n))
            else:
                try:
                    fixed[name] = float(value)
                except ValueError:
                    raise ValueError(f"bad grid assignment {part!r}") from None
    if sweep is None:
        name, lo, hi, step = model.sweep
        n = int(np.floor((hi - lo) / step + 1e-9)) + 1
        sweep = (name, lo + step * np.arange(n))
    fixed.pop(sweep[0], None)
    return sweep, fixed


def _evaluate_model(model_id: str, sweep, fixed):
    spec = _MODEL_SPECS[model_id]
    name, values = sweep
    if model_id == "A2":
        if name != "t":
            raise ValueError("A2 sweeps over t (step-response time)")
        return [name] + [spec.output], [values, _a2_step_response(values, fixed)]
    if spec.vector_outputs:
        rows = []
        for x in values:
            v = dict(fixed)
            v[name] = float(x)
            rgb = (v["red"], v["green"], v["blue"])
            rows.append(model_f_color(rgb, v["theta_1"], v["theta_2"], model_id))
        rows = np.asarray(rows)
        return [name] + list(spec.vector_outputs), [values] + [rows[:, k] for k in range(3)]
    out = []
    for x in values:
        v = dict(fixed)
        v[name] = float(x)
        out.append(float(spec.fn(v)))
    return [name, spec.output], [values, np.asarray(out)]


def _score_against_data(model_id: str, data_path: str, x_cols, y_col):
    import pandas as pd

    spec = _MODEL_SPECS[model_id]
    if spec.vector_outputs and not y_col:
        raise ValueError(f"{model_id} needs --y naming one observed channel")
    df = pd.read_csv(data_path, float_precision="round_trip")
    x_names = x_cols.split(",") if x_cols else list(spec.inputs[: 1 + len(spec.defaults)])
    y_name = y_col or spec.output
    for c in x_names + [y_name]:
        if c not in df.columns:
            raise ValueError(f"column {c!r} not found in {data_path}")
    predictions = []
    for _, row in df.iterrows():
        v = dict(spec.defaults)
        for c, input_name in zip(x_names, spec.inputs):
            v[input_name] = float(row[c])
        if model_id == "A2":
            raise ValueError("A2 data comparison is not supported; use the grid")
        if spec.vector_outputs:
            rgb = (v["red"], v["green"], v["blue"])
            channel = {"out_r": 0, "out_g": 1, "out_b": 2}.get(y_name, 0)
            predictions.append(float(model_f_color(rgb, v["theta_1"], v["theta_2"], model_id)[channel]))
        else:
            predictions.append(float(spec.fn(v)))
    m = np.asarray(predictions)
    y = df[y_name].to_numpy(dtype=float)
    # affine calibration fit absorbs sensor gain and offset
    design = np.column_stack([m, np.ones_like(m)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    fitted = design @ coef
    residual = y - fitted
    rmse = float(np.sqrt(np.mean(residual**2)))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(residual**2)) / ss_tot if ss_tot > 0 else float("nan")
    return coef[0], coef[1], rmse, r2, len(y)


def cmd_models(args) -> int:
    model_id = args.model.upper()
    if model_id not in _MODEL_SPECS:
        print(f"error: unknown model {args.model!r}; choose from "
              f"{', '.join(sorted(_MODEL_SPECS))}", file=sys.stderr)
        return 1
    if args.data:
        try:
            gain, offset, rmse, r2, n = _score_against_data(
                model_id, args.data, args.x, args.y)
        except OSError as e:
            print(f"error: cannot read data: {e}", file=sys.stderr)
            return 2
        except ValueError as e:
            print(f"error: {e}", file=sys.stderr)
            return 1
        if args.csv is not None:
            print("model,n,gain,offset,rmse,r2")
            print(f"{model_id},{n},{gain!r},{offset!r},{rmse!r},{r2!r}")
        else:
            print(f"{model_id}: n={n} gain={gain:.6g} offset={offset:.6g} "
                  f"rmse={rmse:.6g} r2={r2:.6f}")
        return 0
    try:
        sweep, fixed = _parse_grid(args.grid, _MODEL_SPECS[model_id])
        header, columns = _evaluate_model(model_id, sweep, fixed)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    rows = zip(*[np.asarray(c).tolist() for c in columns])
    if args.csv is not None:
        lines = [",".join(header)]
        lines += [",".join(repr(float(x)) for x in row) for row in rows]
        text = "\n".join(lines) + "\n"
        if args.csv == "-":
            sys.stdout.write(text)
        else:
            try:
                with open(args.csv, "w", encoding="utf-8", newline="\n") as f:
                    f.write(text)
            except OSError as e:
                print(f"error: cannot write CSV: {e}", file=sys.stderr)
                return 2
            print(f"wrote {len(columns[0])} rows -> {args.csv}")
    else:
        print("  ".join(f"{h:>14}" for h in header))
        for row in rows:
            print("  ".join(f"{x:14.6g}" for x in row))
    return 0


# -- graph ----------------------------------------------------------------------

def cmd_graph(args) -> int:
    try:
        config = Config(args.config)
    except ValueError:
        print(f"error: unknown config {args.config!r}", file=sys.stderr)
        return 1
    graph = graph_for(config)
    if args.score:
        try:
            estimate = read_adjacency_csv(args.score)
        except OSError as e:
            print(f"error: cannot read estimate: {e}", file=sys.stderr)
            return 2
        except ValueError as e:
            print(f"error: {e}", file=sys.stderr)
            return 1
        try:
            precision, recall = edge_precision_recall(estimate, graph)
        except ValueError as e:
            print(f"error: {e}", file=sys.stderr)
            return 1
        print(f"precision={precision!r} recall={recall!r}")
        return 0
    if args.out:
        try:
            export_adjacency_csv(graph, args.out)
        except OSError as e:
            print(f"error: cannot write adjacency: {e}", file=sys.stderr)
            return 2
        print(f"wrote {len(graph.edges)} edges -> {args.out}")
        return 0
    print("error: graph needs --out or --score", file=sys.stderr)
    return 1


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chambersim",
        description="Deterministic digital twin of the light tunnel and wind "
                    "tunnel: run experiment protocols, validate causal edges, "
                    "and inspect the mechanistic models.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a protocol file and write a dataset")
    p_run.add_argument("protocol", help="protocol text file")
    p_run.add_argument("--out", required=True, help="dataset output directory")
    p_run.add_argument("--name", help="experiment name (default: protocol file stem)")
    p_run.add_argument("--seed", type=int, default=None,
                       help="root seed (overridden by a SEED instruction)")
    p_run.add_argument("--fidelity", choices=("steady_state", "dynamic"),
                       default="steady_state")
    p_run.add_argument("--params", help="flat key = value parameter file")
    p_run.add_argument("--preset", choices=sorted(PRESETS), help="parameter preset")
    p_run.set_defaults(fn=cmd_run)

    p_val = sub.add_parser("validate", help="run the randomized edge-validation procedure")
    p_val.add_argument("config", help="chamber configuration name")
    group = p_val.add_mutually_exclusive_group(required=True)
    group.add_argument("--all", action="store_true",
                       help="validate every ground-truth edge")
    group.add_argument("--edges", help="edges file: source,target[,x_A,x_B] per line")
    p_val.add_argument("--N", type=int, default=100, help="interventions per edge")
    p_val.add_argument("--alpha", type=float, default=0.01, help="test level")
    p_val.add_argument("--T", type=float, default=0.1, help="settle time per intervention, seconds")
    p_val.add_argument("--seed", type=int, default=0)
    p_val.add_argument("--params", help="flat key = value parameter file")
    p_val.add_argument("--preset", choices=sorted(PRESETS), help="parameter preset")
    p_val.add_argument("--out", required=True, help="report CSV path")
    p_val.set_defaults(fn=cmd_validate)

    p_models = sub.add_parser("models", help="tabulate or score a mechanistic model")
    p_models.add_argument("--model", required=True,
                          help="one of A1, A2, B1, C1, C2, C3, D1, E1, F1, F2, F3")
    p_models.add_argument("--grid",
                          help="comma-separated name=lo:hi:step sweep or name=value fixings")
    p_models.add_argument("--data", help="CSV of recorded rows to score against")
    p_models.add_argument("--x", help="comma-separated data columns mapped to model inputs")
    p_models.add_argument("--y", help="observed output column")
    p_models.add_argument("--csv", nargs="?", const="-", default=None,
                          help="emit CSV (to stdout, or to the given path)")
    p_models.set_defaults(fn=cmd_models)

    p_graph = sub.add_parser("graph", help="export or score a ground-truth graph")
    p_graph.add_argument("config", help="chamber configuration name")
    p_graph.add_argument("--out", help="write adjacency CSV here")
    p_graph.add_argument("--score", help="adjacency CSV of an estimated graph to score")
    p_graph.set_defaults(fn=cmd_graph)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
