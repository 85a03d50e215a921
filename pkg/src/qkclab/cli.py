"""Command-line surface: estimation, census experiments, program-language
utilities, and the trial planner, with reproducible file outputs.

Exit codes: 0 success, 2 usage/configuration error, 3 mathematically empty
result (no finite estimate at the requested bound).  Everything a command
writes is a pure function of (config, seed): no timestamps, sorted JSON keys,
so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Optional

from .census import (
    record_obj,
    consistency_sweep,
    incompressibility_census,
    joint_bound_report,
    rotated_basis,
    subadditivity_report,
)
from .estimator import (
    SamplingPlan,
    exact_estimate,
    k_from_bound,
    projection_oracle,
    sampled_estimate,
)
from .executor import cached_outputs, run
from .proglang import (
    CALLC,
    ENCODING_VERSION,
    Program,
    decode,
    encode,
    enumerate_programs,
    program_from_json,
    program_to_json,
)
from .statevec import (
    CNOT,
    PHASE,
    ROT,
    X,
    classical_state,
    state_from_json,
)

SCHEMA_VERSION = "qkclab/1"
CACHE_ENV_VAR = "QKCLAB_CACHE_DIR"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_ESTIMATE = 3


class UsageError(Exception):
    pass


@dataclass
class Config:
    cache_dir: Optional[str] = None
    n: int = 2
    max_len: int = 12
    alpha: float = 0.05
    epsilon: float = 0.25
    seed: int = 0
    format: str = "json"
    verbosity: int = 0
    out_dir: str = "reports"


def load_config_file(path: str) -> dict:
    """Simple key=value file; # starts a comment."""
    values = {}
    known = set(asdict(Config()))
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value
    return values


def _coerce(config: Config, key: str, value) -> Config:
    current = getattr(config, key)
    if isinstance(current, bool):
        value = str(value).lower() in ("1", "true", "yes")
    elif isinstance(current, int):
        value = int(value)
    elif isinstance(current, float):
        value = float(value)
    return replace(config, **{key: value})


def effective_config(args: argparse.Namespace) -> Config:
    """defaults < config file < environment < command-line flags."""
    config = Config()
    if getattr(args, "config", None):
        for key, value in load_config_file(args.config).items():
            config = _coerce(config, key, value)
    env_cache = os.environ.get(CACHE_ENV_VAR)
    if env_cache:
        config = replace(config, cache_dir=env_cache)
    for key in asdict(config):
        flag = getattr(args, key, None)
        if flag is not None:
            config = _coerce(config, key, flag)
    return config


def _config_obj(config: Config) -> dict:
    return asdict(config)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write_csv(path: Path, header: list, rows: list) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    path.write_text(buf.getvalue())


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _manifest(command: str, config: Config, extra: dict) -> dict:
    manifest = {
        "kind": "manifest",
        "schema": SCHEMA_VERSION,
        "encoding_version": ENCODING_VERSION,
        "command": command,
        "config": _config_obj(config),
    }
    manifest.update(extra)
    return manifest


def _write_report(
    out_dir: str, stem: str, command: str, config: Config, obj: dict,
    csv_header: list, csv_rows: list, params: dict,
) -> list[str]:
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    obj = dict(obj)
    obj["schema"] = SCHEMA_VERSION
    obj["encoding_version"] = ENCODING_VERSION
    obj["config"] = _config_obj(config)
    json_path = directory / f"{stem}.json"
    csv_path = directory / f"{stem}.csv"
    manifest_path = directory / f"{stem}.manifest.json"
    json_path.write_text(_dumps(obj))
    _write_csv(csv_path, csv_header, csv_rows)
    manifest_path.write_text(_dumps(_manifest(command, config, params)))
    return [str(json_path), str(csv_path), str(manifest_path)]


# ---------------------------------------------------------------------------
# Argument parsing helpers
# ---------------------------------------------------------------------------

def parse_program_arg(text: str) -> Program:
    """LEN:HEX, e.g. 7:20 for the seven bits 0100000."""
    try:
        length_str, hex_str = text.split(":", 1)
        return program_from_json({"len": int(length_str), "bits_hex": hex_str})
    except ValueError as exc:
        raise UsageError(f"bad program argument {text!r}: {exc}") from exc


def parse_gate_list(text: str):
    """Comma-separated ops: X:t, CNOT:c:t, ROT:t, PHASE:t, CALLC; qubit
    indices are validated against n during encoding."""
    gates = []
    if not text.strip():
        return gates
    for token in text.split(","):
        parts = token.strip().upper().split(":")
        name, idxs = parts[0], parts[1:]
        try:
            if name == "X" and len(idxs) == 1:
                gates.append(X(int(idxs[0])))
            elif name == "CNOT" and len(idxs) == 2:
                gates.append(CNOT(int(idxs[0]), int(idxs[1])))
            elif name == "ROT" and len(idxs) == 1:
                gates.append(ROT(int(idxs[0])))
            elif name == "PHASE" and len(idxs) == 1:
                gates.append(PHASE(int(idxs[0])))
            elif name == "CALLC" and not idxs:
                gates.append(CALLC())
            else:
                raise UsageError(f"unrecognized gate token {token.strip()!r}")
        except ValueError as exc:
            raise UsageError(f"bad gate token {token.strip()!r}: {exc}") from exc
    return gates


def _load_target(args, config: Config):
    sources = [s for s in (args.classical, args.statefile, args.target_program) if s]
    if len(sources) != 1:
        raise UsageError(
            "exactly one of --classical, --statefile, --target-program is required"
        )
    if args.classical:
        target = classical_state(args.classical)
        desc = {"classical": args.classical}
    elif args.statefile:
        try:
            obj = json.loads(Path(args.statefile).read_text())
            target = state_from_json(obj)
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read state file {args.statefile}: {exc}") from exc
        desc = {"statefile": args.statefile}
    else:
        prog = parse_program_arg(args.target_program)
        result = run(prog, config.n)
        if result.output is None:
            raise UsageError(
                f"target program does not halt for n={config.n}: {prog.bits}"
            )
        target = result.output
        desc = {"target_program": program_to_json(prog)}
    if target.n_qubits != config.n:
        raise UsageError(
            f"target has {target.n_qubits} qubits but n={config.n} was requested"
        )
    return target, desc


def _outputs_table(config: Config, n: int, max_len: int):
    if config.cache_dir is None:
        return None
    return cached_outputs(n, max_len, config.cache_dir)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_estimate(args) -> int:
    config = effective_config(args)
    target, desc = _load_target(args, config)
    conditional = None
    if args.conditional:
        prog = parse_program_arg(args.conditional)
        conditional = decode(prog.bits, config.n, allow_callc=False)
        if conditional is None:
            raise UsageError(
                f"conditional is not a decodable CALLC-free program: {prog.bits}"
            )
    outputs = _outputs_table(config, config.n, config.max_len)
    record = {
        "kind": "estimate",
        "schema": SCHEMA_VERSION,
        "encoding_version": ENCODING_VERSION,
        "config": _config_obj(config),
        "n": config.n,
        "max_len": config.max_len,
        "target": desc,
        "conditional": program_to_json(parse_program_arg(args.conditional))
        if args.conditional
        else None,
    }
    if args.sampled:
        if conditional is not None:
            raise UsageError("--sampled does not take a conditional program")
        plan = SamplingPlan.for_dimension(config.n, config.alpha, config.epsilon)
        result = sampled_estimate(
            projection_oracle(target), config.n, plan, config.max_len,
            config.seed, outputs=outputs,
        )
        record.update(
            {
                "mode": "sampled",
                "plan": {"alpha": plan.alpha, "epsilon": plan.epsilon, "k": plan.k},
                "seed": config.seed,
                "best": None
                if result.best is None
                else {
                    "program": program_to_json(result.best.program),
                    "m": result.best.m,
                    "k": result.best.k,
                    "estimate": result.best.estimate,
                },
                "trace": [[i, est] for i, est in result.trace],
            }
        )
        empty = result.best is None
    else:
        result = exact_estimate(
            target, config.n, config.max_len, conditional=conditional, outputs=outputs
        )
        record.update(
            {
                "mode": "exact",
                "best": record_obj(result.best),
                "trace": [[i, total] for i, total in result.trace],
                "scanned": result.scanned,
            }
        )
        empty = result.best is None
    record["status"] = "no_finite_estimate" if empty else "ok"
    _emit(_dumps(record), args.out)
    return EXIT_NO_ESTIMATE if empty else EXIT_OK


def cmd_census(args) -> int:
    config = effective_config(args)
    basis = rotated_basis(config.n) if args.rotated else None
    label = "rotated" if args.rotated else "standard"
    report = incompressibility_census(
        config.n, args.c, config.max_len,
        basis=basis, cache_dir=config.cache_dir, label=label,
    )
    stem = f"census-{ENCODING_VERSION}-{label}-n{config.n}-c{args.c}-len{config.max_len}"
    paths = _write_report(
        config.out_dir, stem, "census", config, report.to_json_obj(),
        report.csv_header(), report.csv_rows(),
        {"n": config.n, "c": args.c, "max_len": config.max_len, "basis": label},
    )
    summary = {
        "verdict": report.verdict,
        "count_below": report.count_below,
        "bound": report.bound,
        "files": paths,
    }
    sys.stdout.write(_dumps(summary))
    return EXIT_OK


def cmd_consistency(args) -> int:
    config = effective_config(args)
    sweep = consistency_sweep(config.n, config.max_len, cache_dir=config.cache_dir)
    stem = f"consistency-{ENCODING_VERSION}-n{config.n}-len{config.max_len}"
    paths = _write_report(
        config.out_dir, stem, "consistency", config, sweep.to_json_obj(),
        sweep.csv_header(), sweep.csv_rows(),
        {"n": config.n, "max_len": config.max_len},
    )
    sys.stdout.write(_dumps({"max_gap": sweep.max_gap, "files": paths}))
    return EXIT_OK


def cmd_subadd(args) -> int:
    config = effective_config(args)
    p_x = parse_program_arg(args.px)
    p_y = parse_program_arg(args.py)
    try:
        report = subadditivity_report(
            p_x, p_y, config.max_len,
            n_x=args.nx, n_y=args.ny, cache_dir=config.cache_dir,
        )
        bound = joint_bound_report(
            p_x, p_y, config.max_len,
            n_x=args.nx, n_y=args.ny, cache_dir=config.cache_dir,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    obj = report.to_json_obj()
    obj["joint_bound"] = bound.to_json_obj()
    stem = (
        f"subadd-{ENCODING_VERSION}-len{config.max_len}-"
        f"{p_x.length}x{p_x.value:x}-{p_y.length}x{p_y.value:x}"
    )
    header = ["term", "total"]
    rows = [
        ["joint", report.joint.best.total if report.joint.best else ""],
        ["x_given_py", report.conditional.best.total if report.conditional.best else ""],
        ["y", report.unconditional_y.best.total if report.unconditional_y.best else ""],
        ["slack", "" if report.slack is None else report.slack],
    ]
    paths = _write_report(
        config.out_dir, stem, "subadd", config, obj, header, rows,
        {"p_x": program_to_json(p_x), "p_y": program_to_json(p_y),
         "max_len": config.max_len},
    )
    sys.stdout.write(
        _dumps({"conclusive": report.conclusive, "slack": report.slack, "files": paths})
    )
    return EXIT_OK


def cmd_encode(args) -> int:
    config = effective_config(args)
    gates = parse_gate_list(args.gates)
    try:
        program = encode(gates, config.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    record = {
        "kind": "program",
        "schema": SCHEMA_VERSION,
        "encoding_version": ENCODING_VERSION,
        "config": _config_obj(config),
        "n": config.n,
        "bits": program.bits,
        "program": program_to_json(program),
    }
    _emit(_dumps(record), args.out)
    return EXIT_OK


def _gate_str(op) -> str:
    if isinstance(op, X):
        return f"X:{op.target}"
    if isinstance(op, CNOT):
        return f"CNOT:{op.control}:{op.target}"
    if isinstance(op, ROT):
        return f"ROT:{op.target}"
    if isinstance(op, PHASE):
        return f"PHASE:{op.target}"
    return "CALLC"


def cmd_decode(args) -> int:
    config = effective_config(args)
    if args.bits:
        bits = args.bits
    else:
        bits = parse_program_arg(args.program).bits
    decoded = decode(bits, config.n)
    record = {
        "kind": "decoded",
        "schema": SCHEMA_VERSION,
        "encoding_version": ENCODING_VERSION,
        "config": _config_obj(config),
        "n": config.n,
        "bits": bits,
        "decodable": decoded is not None,
        "gates": [_gate_str(g) for g in decoded.gates] if decoded else None,
        "call_sites": list(decoded.call_sites) if decoded else None,
    }
    _emit(_dumps(record), args.out)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    config = effective_config(args)
    lines = []
    for program in enumerate_programs(config.max_len, config.n):
        lines.append(
            json.dumps(
                {"len": program.length, "bits": program.bits,
                 "bits_hex": format(program.value, "x")},
                sort_keys=True,
            )
        )
        if args.limit and len(lines) >= args.limit:
            break
    _emit("\n".join(lines) + ("\n" if lines else ""), args.out)
    return EXIT_OK


def cmd_kplan(args) -> int:
    config = effective_config(args)
    try:
        k = k_from_bound(config.n, config.alpha, config.epsilon, slack=args.slack)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    record = {
        "kind": "kplan",
        "schema": SCHEMA_VERSION,
        "config": _config_obj(config),
        "n": config.n,
        "alpha": config.alpha,
        "epsilon": config.epsilon,
        "slack": args.slack,
        "k": k,
    }
    _emit(_dumps(record), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="key=value configuration file")
    sub.add_argument("--cache-dir", dest="cache_dir", help="program-output cache directory")
    sub.add_argument("--seed", type=int, help="seed for all randomness")
    sub.add_argument("--format", choices=("json", "csv"), help="preferred output format")
    sub.add_argument("--verbosity", type=int, help="verbosity level")
    sub.add_argument("--out-dir", dest="out_dir", help="directory for report files")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkclab",
        description="quantum Kolmogorov complexity lab: exact rational machine, "
        "prefix-free programs, enumeration estimators, counting experiments",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("estimate", help="exact or sampled complexity estimate")
    p.add_argument("--classical", help="classical bit string target")
    p.add_argument("--statefile", help="JSON state-vector file target")
    p.add_argument("--target-program", dest="target_program",
                   help="LEN:HEX program; its output becomes the target")
    p.add_argument("--n", type=int, help="register width (qubits)")
    p.add_argument("--max-len", dest="max_len", type=int, help="enumeration bound in bits")
    p.add_argument("--conditional", help="LEN:HEX conditional program for CALLC")
    p.add_argument("--sampled", action="store_true", help="use the measurement-driven mode")
    p.add_argument("--alpha", type=float, help="error probability for the sampled mode")
    p.add_argument("--epsilon", type=float, help="relative accuracy for the sampled mode")
    p.add_argument("--out", help="write the record here instead of stdout")
    _add_common(p)
    p.set_defaults(func=cmd_estimate)

    p = subs.add_parser("census", help="incompressibility counting over a basis")
    p.add_argument("--n", type=int, help="register width")
    p.add_argument("--c", type=int, required=True, help="compression margin")
    p.add_argument("--max-len", dest="max_len", type=int, help="enumeration bound")
    p.add_argument("--rotated", action="store_true",
                   help="use the fixed ROT/CNOT-rotated basis instead of the standard one")
    _add_common(p)
    p.set_defaults(func=cmd_census)

    p = subs.add_parser("consistency", help="estimate vs exact program length on all classical strings")
    p.add_argument("--n", type=int, help="register width")
    p.add_argument("--max-len", dest="max_len", type=int, help="enumeration bound")
    _add_common(p)
    p.set_defaults(func=cmd_consistency)

    p = subs.add_parser("subadd", help="sub-additivity and joint-state bound for two generator programs")
    p.add_argument("--px", required=True, help="LEN:HEX generator program for x")
    p.add_argument("--py", required=True, help="LEN:HEX generator program for y")
    p.add_argument("--nx", type=int, default=1, help="register width of p_x")
    p.add_argument("--ny", type=int, default=1, help="register width of p_y")
    p.add_argument("--max-len", dest="max_len", type=int, help="enumeration bound")
    _add_common(p)
    p.set_defaults(func=cmd_subadd)

    p = subs.add_parser("encode", help="encode a gate list into program bits")
    p.add_argument("--gates", default="", help="e.g. X:0,CNOT:0:1,ROT:1,CALLC")
    p.add_argument("--n", type=int, help="register width")
    p.add_argument("--out", help="write the record here instead of stdout")
    _add_common(p)
    p.set_defaults(func=cmd_encode)

    p = subs.add_parser("decode", help="decode program bits")
    p.add_argument("--bits", help="raw bit string")
    p.add_argument("--program", help="LEN:HEX form")
    p.add_argument("--n", type=int, help="register width")
    p.add_argument("--out", help="write the record here instead of stdout")
    _add_common(p)
    p.set_defaults(func=cmd_decode)

    p = subs.add_parser("enumerate", help="list decodable programs in canonical order")
    p.add_argument("--max-len", dest="max_len", type=int, help="enumeration bound")
    p.add_argument("--n", type=int, help="register width")
    p.add_argument("--limit", type=int, default=0, help="stop after this many programs")
    p.add_argument("--out", help="write the listing here instead of stdout")
    _add_common(p)
    p.set_defaults(func=cmd_enumerate)

    p = subs.add_parser("kplan", help="trials per candidate from the tail bound")
    p.add_argument("--n", type=int, help="register width")
    p.add_argument("--alpha", type=float, help="error probability")
    p.add_argument("--epsilon", type=float, help="relative accuracy")
    p.add_argument("--slack", type=float, default=0.0, help="additive constant budget")
    p.add_argument("--out", help="write the record here instead of stdout")
    _add_common(p)
    p.set_defaults(func=cmd_kplan)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
