"""Command-line front end.

Exit codes: 0 success, 1 verification mismatch, 2 usage, 3 resource cap,
4 numeric degeneracy (test function vanishes on the grid).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import lattice, resources, simulator
from .encoder import EncodingDescriptor, build_nd
from .errors import ResourceError, SpecificationError
from .lattice import BoundaryCondition, GridAxisSpec, LaplacianSpec
from .qasm import dumps as qasm_dumps

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP, EXIT_DEGENERATE = 0, 1, 2, 3, 4
VERIFY_TOL = 1e-10
CONFIG_SCHEMA = 1


class UsageError(Exception):
    pass


def parse_axis(text: str) -> GridAxisSpec:
    """``n=<int>,h=<float>,bc=<p|d|n>``; ``h`` defaults to 1 and ``bc`` to periodic."""
    fields = {}
    for part in text.split(","):
        if not part.strip():
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise UsageError(f"malformed axis field {part!r} (expected key=value)")
        fields[key.strip().lower()] = value.strip()
    unknown = set(fields) - {"n", "h", "bc"}
    if unknown:
        raise UsageError(f"unknown axis keys {sorted(unknown)}")
    if "n" not in fields:
        raise UsageError(f"axis {text!r} is missing n=")
    try:
        n = int(fields["n"])
        h = float(fields.get("h", 1.0))
        bc = BoundaryCondition.parse(fields.get("bc", "periodic"))
        return GridAxisSpec(n, h, bc)
    except (ValueError, SpecificationError) as exc:
        raise UsageError(f"bad axis {text!r}: {exc}") from None


def load_config(path: str) -> dict:
    with open(path) as fh:
        cfg = json.load(fh)
    if cfg.get("schema") != CONFIG_SCHEMA:
        raise UsageError(f"config {path}: expected \"schema\": {CONFIG_SCHEMA}")
    return cfg


def _axis_from_json(entry: dict) -> GridAxisSpec:
    try:
        return GridAxisSpec(int(entry["n"]), float(entry.get("h", 1.0)), entry.get("bc", "periodic"))
    except (KeyError, TypeError, ValueError, SpecificationError) as exc:
        raise UsageError(f"bad axis entry {entry!r}: {exc}") from None


def resolve(args) -> tuple[LaplacianSpec, dict]:
    """Merge ``--config`` and flags (flags win) into a spec plus options."""
    cfg = load_config(args.config) if args.config else {}
    if args.axis:
        axes = [parse_axis(a) for a in args.axis]
    else:
        axes = [_axis_from_json(a) for a in cfg.get("axes", [])]
    if not axes:
        raise UsageError("at least one --axis (or config axes) is required")
    opts = {k: cfg[k] for k in ("out", "sweep", "cap", "format", "workers", "input") if k in cfg}
    for key in ("out", "sweep", "cap", "format", "workers", "input"):
        val = getattr(args, key, None)
        if val is not None:
            opts[key] = val
    return LaplacianSpec(tuple(axes)), opts


def parse_sweep(text) -> list[int]:
    lo, sep, hi = str(text).partition("..")
    try:
        lo_i, hi_i = int(lo), int(hi if sep else lo)
    except ValueError:
        raise UsageError(f"bad sweep {text!r}; expected <lo>..<hi>") from None
    if lo_i < 1 or hi_i < lo_i:
        raise UsageError(f"bad sweep range {text!r}")
    return list(range(lo_i, hi_i + 1))


def with_n(spec: LaplacianSpec, n: int) -> LaplacianSpec:
    return LaplacianSpec(tuple(replace(ax, n_qubits=n) for ax in spec.axes))


def _specs(spec: LaplacianSpec, opts: dict) -> list[LaplacianSpec]:
    if "sweep" in opts:
        return [with_n(spec, n) for n in parse_sweep(opts["sweep"])]
    return [spec]


def _emit(text: str, out: str | None, stdout) -> None:
    if out:
        Path(out).write_text(text)
    else:
        stdout.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------- commands


def cmd_build(spec: LaplacianSpec, opts: dict, stdout) -> int:
    desc = build_nd(spec)
    qasm = qasm_dumps(desc.circuit)
    out = opts.get("out")
    if out:
        Path(out + ".qasm").write_text(qasm)
        Path(out + ".json").write_text(_dump_json(desc.to_dict()))
        stdout.write(f"wrote {out}.qasm and {out}.json (m={desc.ancilla_count})\n")
    else:
        stdout.write(qasm)
    return EXIT_OK


def verify_descriptor(desc: EncodingDescriptor, *, workers: int = 1, cap: int | None = None):
    """Extracted block, the oracle matrix, max deviation and where it occurs."""
    block = simulator.extract_block(desc, workers=workers, cap=cap)
    oracle = lattice.build_scaled_nd(desc.spec).to_dense()
    diff = np.abs(block - oracle)
    r, c = np.unravel_index(int(np.argmax(diff)), diff.shape)
    return block, oracle, float(diff[r, c]), (int(r), int(c))


def cmd_verify(spec, opts, stdout) -> int:
    desc = build_nd(spec)
    block, oracle, dev, (r, c) = verify_descriptor(
        desc, workers=int(opts.get("workers", 1)), cap=opts.get("cap")
    )
    ok = dev <= VERIFY_TOL
    stdout.write(
        "%s %s dim=%d m=%d max_abs_deviation=%.17g at (%d,%d) block=%.17g oracle=%.17g\n"
        % ("PASS" if ok else "FAIL", spec.label, block.shape[0], desc.ancilla_count, dev, r, c,
           block[r, c], oracle[r, c])
    )
    if opts.get("out"):
        _write_block(block, opts["out"], opts.get("format", "csv"))
    return EXIT_OK if ok else EXIT_FAIL


def _write_block(block: np.ndarray, dest, fmt: str) -> None:
    """``csv``: every entry row-major as ``row,col,value``; ``triplets``: nonzeros only."""
    if fmt == "triplets":
        lattice.write_triplets(block, dest)
        return
    n = block.shape[0]
    lines = ["row,col,value"] + [
        "%d,%d,%.17g" % (r, c, block[r, c]) for r in range(n) for c in range(n)
    ]
    lattice.write_text("\n".join(lines) + "\n", dest)


def cmd_heatmap(spec, opts, stdout) -> int:
    desc = build_nd(spec)
    block = simulator.extract_block(desc, workers=int(opts.get("workers", 1)), cap=opts.get("cap"))
    _write_block(block, opts.get("out") or stdout, opts.get("format", "csv"))
    return EXIT_OK


def cmd_success(spec, opts, stdout) -> int:
    rows = []
    ok = True
    for s in _specs(spec, opts):
        desc = build_nd(s)
        if opts.get("input", "sine") == "uniform":
            v = np.full(s.dim, 1.0 / np.sqrt(s.dim), dtype=np.complex128)
        else:
            v = simulator.test_state(s)
        p = simulator.success_probability(desc, v, cap=opts.get("cap"))
        ref = simulator.oracle_success_probability(s, v)
        ok &= abs(p - ref) <= VERIFY_TOL
        rows.append((s.label, s.dim, p))
    text = resources.reports_csv(rows)
    _emit(text, opts.get("out"), stdout)
    return EXIT_OK if ok else EXIT_FAIL


def resource_record(spec: LaplacianSpec) -> dict:
    desc = build_nd(spec)
    symbolic = resources.estimate_nd(spec)
    lowered = resources.lower_and_count(desc.circuit)
    m = desc.circuit.metrics()
    # lowered never exceeds symbolic; they agree exactly once every axis has n >= 2
    exact_expected = all(ax.n_qubits >= 2 for ax in spec.axes)
    consistent = lowered.t_count <= symbolic.t_count and (
        not exact_expected or lowered.t_count == symbolic.t_count
    )
    return {
        "spec": spec.to_dict(),
        "label": spec.label,
        "ancilla_count": desc.ancilla_count,
        "metrics": m._asdict(),
        "symbolic": symbolic.to_dict(),
        "lowered": lowered.to_dict(),
        "consistent": consistent,
    }


def cmd_resources(spec, opts, stdout) -> int:
    records = [resource_record(s) for s in _specs(spec, opts)]
    if opts.get("format", "json") == "csv":
        rows = []
        for rec in records:
            size = rec["spec"]["axes"][0]["n"]
            rows.append((rec["label"] + ":symbolic_t", size, rec["symbolic"]["t_count"]))
            rows.append((rec["label"] + ":lowered_t", size, rec["lowered"]["t_count"]))
            rows.append((rec["label"] + ":gate_count", size, rec["metrics"]["gate_count"]))
        text = resources.reports_csv(rows)
    else:
        text = _dump_json(records if len(records) > 1 else records[0])
    _emit(text, opts.get("out"), stdout)
    for rec in records:
        if not rec["consistent"]:
            sys.stderr.write(f"warning: symbolic/lowered mismatch for {rec['label']}\n")
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "verify": cmd_verify,
    "heatmap": cmd_heatmap,
    "success": cmd_success,
    "resources": cmd_resources,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lapqbe",
        description="Block-encoding circuits for finite-difference Laplacians.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "build": "write the OpenQASM 3 circuit and JSON descriptor",
        "verify": "simulate, extract the block and compare with the classical operator",
        "heatmap": "write the extracted block as CSV or triplets",
        "success": "success probability of the sine test state (optionally swept)",
        "resources": "symbolic and lowered Clifford+T counts",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--axis", action="append", metavar="n=<int>,h=<float>,bc=<p|d|n>",
                       help="one grid axis; repeat in axis order")
        p.add_argument("--config", help="JSON config with \"schema\": 1 and an \"axes\" list")
        p.add_argument("--out", help="output path (build: path prefix)")
        p.add_argument("--sweep", help="<lo>..<hi>: set every axis to n = lo..hi")
        p.add_argument("--cap", type=int, help="max simulated qubits (default $LAPQBE_CAP or 20)")
        p.add_argument("--format", choices=["csv", "json", "triplets"])
        p.add_argument("--workers", type=int, help="threads for column-parallel simulation")
        p.add_argument("--input", choices=["sine", "uniform"], help="success: input state")
    return parser


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec, opts = resolve(args)
        if "sweep" in opts:
            parse_sweep(opts["sweep"])
        return COMMANDS[args.command](spec, opts, stdout)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"lapqbe: error: {exc}\n")
        return EXIT_USAGE
    except ResourceError as exc:
        sys.stderr.write(f"lapqbe: resource cap: {exc}\n")
        return EXIT_CAP
    except SpecificationError as exc:
        sys.stderr.write(f"lapqbe: {exc}\n")
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
