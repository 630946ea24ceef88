"""Command-line front end: build codes, inspect them, run sweeps.

Exit codes: 0 success, 1 usage, 2 validation (bad inputs, parse errors,
broken invariants), 3 runtime failures (I/O and unexpected errors).

The results CSV has a fixed header; every row carries its full channel
and mode parameters, so partial sweeps can resume without duplicating
grid points (the key is the tuple of all parameter columns).
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
import time

import numpy as np

from .chain4d import (
    SEED_MAPPINGS,
    build_complex,
    preset_seeds,
    seeds_from_protograph,
    to_css,
    validate_chain,
    FourSeeds,
)
from .decoder import BpConfig
from .gf2 import BinaryMatrix
from .montecarlo import ExperimentPoint, default_workers, run_experiment
from .noise import ChannelSpec
from .products import CssCode, ConstructionError
from .protograph import ProtographParseError, parse_protograph

PAPER_CLAIM = "[[384, 48, 6]]"

CSV_FIELDS = (
    "p", "q", "beta_x", "beta_y", "beta_z", "eta", "tailored", "single_shot",
    "trials", "failures", "wer", "wer_stderr", "detection_x", "detection_z",
    "correction_x", "correction_z", "bp_conv_frac", "osd0_frac", "osdw_frac",
    "wall_seconds",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ── code file format ─────────────────────────────────────────────────


def write_code_file(code: CssCode, path: str) -> None:
    parts = [
        "lhpkit-code 1",
        f"n {code.n}",
        f"k {code.k}",
        f"boundary {code.canonical_split if code.canonical_split is not None else '-'}",
        f"tailored {code.tailored_boundary if code.tailored_boundary is not None else '-'}",
    ]
    for name in ("hx", "hz", "mx", "mz", "lx", "lz"):
        m = getattr(code, name)
        parts.append(f"[{name}]")
        parts.append(m.to_text().rstrip("\n") if m is not None else "-")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")


def read_code_file(path: str) -> CssCode:
    with open(path) as fh:
        text = fh.read()
    lines = text.splitlines()
    if not lines or not lines[0].startswith("lhpkit-code"):
        raise ValueError(f"{path}: not a lhpkit code file")
    fields: dict = {}
    sections: dict = {}
    current = None
    for ln in lines[1:]:
        if ln.startswith("["):
            current = ln.strip("[]")
            sections[current] = []
        elif current is None:
            if ln.strip():
                key, _, val = ln.partition(" ")
                fields[key] = val.strip()
        else:
            sections[current].append(ln)

    def _mat(name):
        body = "\n".join(sections.get(name, [])).strip()
        if not body or body == "-":
            return None
        return BinaryMatrix.from_text(body)

    def _opt_int(s):
        return None if s in ("-", "", None) else int(s)

    hx, hz = _mat("hx"), _mat("hz")
    lx, lz = _mat("lx"), _mat("lz")
    if hx is None or hz is None or lx is None or lz is None:
        raise ValueError(f"{path}: missing hx/hz/lx/lz sections")
    return CssCode(
        hx=hx, hz=hz, mx=_mat("mx"), mz=_mat("mz"), lx=lx, lz=lz,
        n=int(fields["n"]), k=int(fields["k"]),
        canonical_split=_opt_int(fields.get("boundary")),
        tailored_boundary=_opt_int(fields.get("tailored")),
    )


# ── seed sources ─────────────────────────────────────────────────────


def _seeds_from_args(args) -> FourSeeds:
    if args.preset:
        return preset_seeds(args.preset)
    source = args.seeds
    if source in ("trivial-scalar", "toy-rep2"):
        return preset_seeds(source)
    with open(source) as fh:
        text = fh.read()
    blocks = [b for b in text.split("\n\n") if b.strip()]
    if len(blocks) == 1:
        proto = parse_protograph(blocks[0])
        return seeds_from_protograph(proto, args.mapping, args.L)
    if len(blocks) != 4:
        raise ValueError(
            f"{source}: expected one 4-row protograph or four blank-line separated "
            f"seed protographs, found {len(blocks)} blocks"
        )
    seeds = [parse_protograph(b) for b in blocks]
    return FourSeeds(*seeds, L=args.L)


# ── commands ─────────────────────────────────────────────────────────


def cmd_build(args) -> int:
    seeds = _seeds_from_args(args)
    cc = build_complex(seeds)
    report = validate_chain(cc)
    code = to_css(cc)
    out = args.out or "code.txt"
    write_code_file(code, out)
    print(f"wrote {out}")
    print(f"n {code.n}  k {code.k}  rank(hx) {report.rank_hx}  rank(hz) {report.rank_hz}")
    print(f"space dims {report.space_dims}")
    print(f"chain composites max {report.composite_max} -> {'ok' if report.ok else 'FAILED'}")
    if args.preset and args.preset.startswith("paper-"):
        print(
            f"achieved [[{code.n}, {code.k}, ?]] vs published claim {PAPER_CLAIM} "
            f"(seed-to-block mapping is not pinned by the source; see README)"
        )
    if not report.ok:
        raise ConstructionError("chain validation failed")
    return 0


def cmd_inspect(args) -> int:
    code = read_code_file(args.code)
    problems = code.validate()
    print(f"n {code.n}  k {code.k}")
    print(f"hx {code.hx.rows}x{code.hx.cols}  rank {code.hx.rank()}")
    print(f"hz {code.hz.rows}x{code.hz.cols}  rank {code.hz.rank()}")
    for name in ("mx", "mz"):
        m = getattr(code, name)
        print(f"{name} {'absent' if m is None else f'{m.rows}x{m.cols}'}")
    stab_weights = np.concatenate([code.hx.row_weights(), code.hz.row_weights()])
    print(
        f"stabilizer row weight mean {stab_weights.mean():.2f} "
        f"min {stab_weights.min()} max {stab_weights.max()}"
    )
    qubit_weights = code.hx.col_weights() + code.hz.col_weights()
    print(f"qubit column weight mean {qubit_weights.mean():.2f} max {qubit_weights.max()}")
    print(f"boundary {code.canonical_split}  tailored {code.tailored_boundary}")
    if problems:
        print("status: FAILED")
        for p in problems:
            print(f"  - {p}")
    else:
        print("status: ok")
    return 0


def _floats(text: str) -> list:
    return [float(tok) for tok in text.replace(",", " ").split()]


def _modes(text: str) -> list:
    text = text.strip().lower()
    if text in ("on", "true", "1", "yes"):
        return [True]
    if text in ("off", "false", "0", "no"):
        return [False]
    if text == "both":
        return [False, True]
    raise ValueError(f"expected on/off/both, got {text!r}")


def load_config(path: str) -> dict:
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise ValueError(f"cannot read config {path}")
    cfg: dict = {}
    code_sec = cp["code"] if cp.has_section("code") else {}
    cfg["preset"] = code_sec.get("preset", None)
    cfg["code_file"] = code_sec.get("code", None)
    cfg["seeds"] = code_sec.get("seeds", None)
    cfg["mapping"] = code_sec.get("mapping", "fold-dual")
    cfg["L"] = int(code_sec.get("L", "3"))
    ch = cp["channel"] if cp.has_section("channel") else {}
    cfg["p"] = _floats(ch.get("p", "0.04"))
    cfg["q"] = _floats(ch.get("q", "0.0"))
    if "eta" in ch and ("beta_x" in ch or "beta_y" in ch or "beta_z" in ch):
        raise ValueError("config sets both eta and explicit beta weights")
    cfg["eta"] = _floats(ch["eta"]) if "eta" in ch else None
    cfg["beta"] = (
        float(ch.get("beta_x", "1")),
        float(ch.get("beta_y", "1")),
        float(ch.get("beta_z", "1")),
    )
    dec = cp["decoder"] if cp.has_section("decoder") else {}
    cfg["decoder"] = BpConfig(
        max_iterations=int(dec.get("max_iterations", "32")),
        variant=dec.get("variant", "product-sum"),
        min_sum_scale=float(dec.get("min_sum_scale", "0.625")),
        osd_order=int(dec.get("osd_order", "2")),
        osd_sweep_cap=int(dec.get("osd_sweep_cap", "40")),
        schedule=dec.get("schedule", "parallel"),
    )
    run = cp["run"] if cp.has_section("run") else {}
    cfg["trials"] = int(run.get("trials", "1000"))
    cfg["master_seed"] = int(run.get("master_seed", "0"))
    cfg["tailored"] = _modes(run.get("tailored", "off"))
    cfg["single_shot"] = _modes(run.get("single_shot", "on"))
    cfg["channel_update"] = _modes(run.get("channel_update", "off"))[0]
    cfg["workers"] = int(run.get("workers", str(default_workers())))
    cfg["output"] = run.get("output", "results.csv")
    if cfg["trials"] < 1:
        raise ValueError("trials must be >= 1")
    if not cfg["p"] or not cfg["q"]:
        raise ValueError("p and q grids must be non-empty")
    return cfg


def _resolve_code(cfg: dict) -> CssCode:
    if cfg.get("code_file"):
        return read_code_file(cfg["code_file"])
    if cfg.get("seeds"):
        proto = parse_protograph(open(cfg["seeds"]).read())
        return to_css(build_complex(seeds_from_protograph(proto, cfg["mapping"], cfg["L"])))
    preset = cfg.get("preset") or "paper-L3"
    return to_css(build_complex(preset_seeds(preset)))


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def _grid_rows(cfg: dict):
    etas = cfg["eta"] if cfg["eta"] is not None else [None]
    for p in cfg["p"]:
        for q in cfg["q"]:
            for eta in etas:
                for tailored in cfg["tailored"]:
                    for ss in cfg["single_shot"]:
                        yield p, q, eta, tailored, ss


def _row_key(vals: dict) -> tuple:
    return tuple(
        _fmt(vals[f])
        for f in ("p", "q", "beta_x", "beta_y", "beta_z", "eta", "tailored",
                  "single_shot", "trials")
    )


def _existing_keys(path: str) -> set:
    keys = set()
    if not os.path.exists(path):
        return keys
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        idx = {name: header.index(name) for name in header}
        for line in fh:
            parts = line.strip().split(",")
            if len(parts) != len(header):
                continue
            keys.add(
                tuple(
                    parts[idx[f]]
                    for f in ("p", "q", "beta_x", "beta_y", "beta_z", "eta",
                              "tailored", "single_shot", "trials")
                )
            )
    return keys


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    if args.output:
        cfg["output"] = args.output
    if args.trials:
        cfg["trials"] = args.trials
    if args.workers:
        cfg["workers"] = args.workers
    code = _resolve_code(cfg)
    out_path = cfg["output"]
    existing = _existing_keys(out_path)
    new_file = not os.path.exists(out_path)
    mode = "w" if new_file else "a"
    written = 0
    with open(out_path, mode) as fh:
        if new_file:
            fh.write(",".join(CSV_FIELDS) + "\n")
        for p, q, eta, tailored, ss in _grid_rows(cfg):
            if eta is not None:
                spec = ChannelSpec.from_eta(p=p, eta=eta, q=q)
            else:
                bx, by, bz = cfg["beta"]
                spec = ChannelSpec(p=p, beta_x=bx, beta_y=by, beta_z=bz, q=q)
            if tailored:
                spec = spec.with_boundary(code.canonical_split)
            vals = {
                "p": p, "q": q,
                "beta_x": spec.beta_x, "beta_y": spec.beta_y, "beta_z": spec.beta_z,
                "eta": spec.eta, "tailored": tailored, "single_shot": ss,
                "trials": cfg["trials"],
            }
            key = _row_key(vals)
            if key in existing:
                print(f"skip completed grid point {key}")
                continue
            t0 = time.perf_counter()
            stats = run_experiment(
                ExperimentPoint(
                    code=code,
                    spec=spec,
                    trials=cfg["trials"],
                    master_seed=cfg["master_seed"],
                    single_shot=ss,
                    channel_update=cfg["channel_update"],
                    decoder_cfg=cfg["decoder"],
                    workers=cfg["workers"],
                )
            )
            wall = time.perf_counter() - t0
            vals.update(
                failures=stats.failures, wer=stats.wer, wer_stderr=stats.wer_stderr,
                detection_x=stats.detection_rate_x, detection_z=stats.detection_rate_z,
                correction_x=stats.correction_rate_x, correction_z=stats.correction_rate_z,
                bp_conv_frac=stats.bp_conv_frac, osd0_frac=stats.osd0_frac,
                osdw_frac=stats.osdw_frac, wall_seconds=wall,
            )
            fh.write(",".join(_fmt(vals[f]) for f in CSV_FIELDS) + "\n")
            fh.flush()
            written += 1
            print(
                f"p={p:g} q={q:g} eta={vals['eta']:g} tailored={int(tailored)} "
                f"ss={int(ss)}: wer={stats.wer:.4g} ({stats.failures}/{cfg['trials']}) "
                f"[{wall:.1f}s]"
            )
    print(f"wrote {written} rows to {out_path}")
    return 0


def cmd_sweep(args) -> int:
    for config in args.configs:
        print(f"== {config} ==")
        ns = argparse.Namespace(config=config, output=None, trials=None, workers=args.workers)
        cmd_simulate(ns)
    return 0


def build_arg_parser() -> _Parser:
    ap = _Parser(prog="lhpkit", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a code and write its export file")
    src = b.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", help="named preset, e.g. paper-L3")
    src.add_argument("--seeds", help="seed source: alias or protograph file")
    b.add_argument("--mapping", default="fold-dual", choices=SEED_MAPPINGS)
    b.add_argument("--L", type=int, default=3)
    b.add_argument("--out", help="output path (default code.txt)")
    b.set_defaults(func=cmd_build)

    i = sub.add_parser("inspect", help="report dims, ranks, weights, chain status")
    i.add_argument("code", help="code export file")
    i.set_defaults(func=cmd_inspect)

    s = sub.add_parser("simulate", help="run the Monte Carlo grid of a config file")
    s.add_argument("--config", required=True)
    s.add_argument("--output")
    s.add_argument("--trials", type=int)
    s.add_argument("--workers", type=int)
    s.set_defaults(func=cmd_simulate)

    w = sub.add_parser("sweep", help="run several config files in sequence")
    w.add_argument("configs", nargs="+")
    w.add_argument("--workers", type=int)
    w.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    ap = build_arg_parser()
    try:
        args = ap.parse_args(argv)
        return args.func(args)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    except (ProtographParseError, ConstructionError, ValueError) as err:
        print(f"validation error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"runtime error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
