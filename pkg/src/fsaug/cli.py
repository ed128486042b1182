"""Batch command-line frontend: augment, saliency, iss, iias.

stdout carries only the machine-readable JSON result; everything else goes
to stderr. Exit codes: 0 success (including partial batch failures),
2 bad flags/config, 3 I/O, 4 data errors.

Flag values win over config-file values, which win over defaults.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import struct
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import metrics
from .erasing import AugConfig, Strategy
from .errors import (
    DivisionByZeroError,
    FormatError,
    FsaugError,
    InsufficientDataError,
    IoError,
)
from .imgcore import RegionBox, load_image, save_image
from .metrics import EmbeddingSet, builtin_features, read_embeddings
from .policy import augment_batch
from .saliency import (
    SaliencyConfig,
    compute_saliency,
    extract_salient_region,
    saliency_map_to_image,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_DATA = 4

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")

CONFIG_KEYS = {
    "augment": {
        "seed", "p_apply", "slice_min", "slice_max", "pse_max",
        "fill", "strategy", "workers",
    },
    "saliency": {"work_size", "log_eps", "blur_sigma", "threshold_mult", "min_region_frac"},
    "metrics": {"features", "mode"},
}


class UsageError(Exception):
    """Bad flags or config; maps to exit code 2."""


def _err(msg: str) -> None:
    print(f"fsaug: {msg}", file=sys.stderr)


def _list_images(root: Path) -> list[Path]:
    return sorted(p for p in root.rglob("*") if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES)


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, "rb") as fh:
            cfg = tomllib.load(fh)
    except OSError as e:
        raise IoError(str(e)) from e
    except tomllib.TOMLDecodeError as e:
        raise UsageError(f"{path}: {e}") from e
    for section, keys in cfg.items():
        if section not in CONFIG_KEYS:
            raise UsageError(f"{path}: unknown config section [{section}]")
        unknown = set(keys) - CONFIG_KEYS[section]
        if unknown:
            raise UsageError(f"{path}: unknown keys in [{section}]: {sorted(unknown)}")
    return cfg


def _pick(flag_value, cfg: dict, section: str, key: str, default):
    """Flag > config file > default."""
    if flag_value is not None:
        return flag_value
    if section in cfg and key in cfg[section]:
        return cfg[section][key]
    return default


def _read_bbox_csv(path) -> dict[str, RegionBox]:
    table = {}
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            for lineno, rec in enumerate(csv.reader(fh), start=1):
                if not rec:
                    continue
                if len(rec) != 5:
                    raise FormatError(f"{path}:{lineno}: expected filename,x0,y0,x1,y1")
                try:
                    table[rec[0]] = RegionBox(int(rec[1]), int(rec[2]), int(rec[3]), int(rec[4]))
                except ValueError as e:
                    raise FormatError(f"{path}:{lineno}: {e}") from e
    except OSError as e:
        raise IoError(str(e)) from e
    return table


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("FSAUG_SEED")
    if env is not None:
        try:
            return int(env, 0)
        except ValueError:
            raise UsageError(f"FSAUG_SEED is not an integer: {env!r}") from None
    raise UsageError("--seed is required (or set FSAUG_SEED)")


def _saliency_config(args, cfg: dict) -> SaliencyConfig:
    return SaliencyConfig(
        work_size=int(_pick(getattr(args, "work_size", None), cfg, "saliency", "work_size", 64)),
        log_eps=float(_pick(None, cfg, "saliency", "log_eps", 0.3)),
        blur_sigma=float(_pick(getattr(args, "blur_sigma", None), cfg, "saliency", "blur_sigma", 0.5)),
        threshold_mult=float(_pick(None, cfg, "saliency", "threshold_mult", 48.0)),
        min_region_frac=float(_pick(None, cfg, "saliency", "min_region_frac", 0.1)),
    )


def cmd_augment(args) -> int:
    cfg_file = _load_config(args.config)
    seed = _resolve_seed(args)
    aug_cfg = AugConfig(
        slice_frac_min=float(_pick(args.slice_min, cfg_file, "augment", "slice_min", 1 / 8)),
        slice_frac_max=float(_pick(args.slice_max, cfg_file, "augment", "slice_max", 1 / 4)),
        pse_max_erase=int(_pick(args.pse_max, cfg_file, "augment", "pse_max", 3)),
        fill_value=int(_pick(args.fill, cfg_file, "augment", "fill", 0)),
        p_apply=float(_pick(args.p_apply, cfg_file, "augment", "p_apply", 1.0)),
    )
    scfg = _saliency_config(args, cfg_file)
    strategy_name = _pick(args.strategy, cfg_file, "augment", "strategy", "random")
    forced = None if strategy_name == "random" else Strategy[strategy_name.upper()]
    workers = int(_pick(args.workers, cfg_file, "augment", "workers", 1))

    in_dir = Path(args.in_dir)
    if not in_dir.is_dir():
        _err(f"input directory not found: {in_dir}")
        return EXIT_IO
    inputs = _list_images(in_dir)
    if not inputs:
        _err(f"no PNG/JPEG files under {in_dir}")
        return EXIT_DATA

    bbox_table = _read_bbox_csv(args.bbox_file) if args.bbox_file else None

    out_dir = Path(args.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        _err(str(e))
        return EXIT_IO

    result = augment_batch(
        inputs, out_dir, seed,
        cfg=aug_cfg, scfg=scfg,
        bbox_table=bbox_table, forced_strategy=forced,
        workers=workers, index_base=args.index_base, in_root=in_dir,
    )

    if args.log:
        with open(args.log, "w", encoding="utf-8") as fh:
            for rec in result.records:
                fh.write(json.dumps(rec.to_json_obj(), sort_keys=True) + "\n")

    for path, msg in result.failures:
        _err(f"failed: {path}: {msg}")
    print(json.dumps({"processed": len(result.records), "failed": len(result.failures)}))
    if result.records:
        return EXIT_OK
    return EXIT_DATA


_FMAP_MAGIC = b"FMP1"


def _write_float_map(smap, path) -> None:
    with open(path, "wb") as fh:
        fh.write(_FMAP_MAGIC)
        fh.write(struct.pack("<II", smap.width, smap.height))
        fh.write(smap.values.astype("<f8").tobytes())


def cmd_saliency(args) -> int:
    cfg_file = _load_config(args.config)
    scfg = _saliency_config(args, cfg_file)
    in_dir = Path(args.in_dir)
    if not in_dir.is_dir():
        _err(f"input directory not found: {in_dir}")
        return EXIT_IO
    inputs = _list_images(in_dir)
    if not inputs:
        _err(f"no PNG/JPEG files under {in_dir}")
        return EXIT_DATA
    out_dir = Path(args.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        _err(str(e))
        return EXIT_IO

    want_map = args.emit in ("map", "both")
    want_bbox = args.emit in ("bbox", "both")
    rows = []
    failures = 0
    processed = 0
    for path in inputs:
        rel = path.relative_to(in_dir)
        try:
            img = load_image(path)
            smap = compute_saliency(img, scfg)
            if want_map:
                dst = (out_dir / rel).with_suffix(".png")
                dst.parent.mkdir(parents=True, exist_ok=True)
                save_image(saliency_map_to_image(smap), dst)
                if args.float_maps:
                    _write_float_map(smap, (out_dir / rel).with_suffix(".fmap"))
            if want_bbox:
                box = extract_salient_region(smap, scfg)
                rows.append((str(rel), box))
            processed += 1
        except FsaugError as e:
            _err(f"failed: {path}: {e}")
            failures += 1
    if want_bbox:
        with open(out_dir / "bboxes.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            for name, box in rows:
                writer.writerow([name, box.x0, box.y0, box.x1, box.y1])
    print(json.dumps({"processed": processed, "failed": failures}))
    return EXIT_OK if processed else EXIT_DATA


def _embedding_set_from_dir(root: Path) -> EmbeddingSet:
    files = _list_images(root)
    if not files:
        raise InsufficientDataError(f"no images under {root}")
    ids = [str(p.relative_to(root)) for p in files]
    mat = [builtin_features(load_image(p)) for p in files]
    import numpy as np

    return EmbeddingSet(ids=ids, matrix=np.array(mat), source="builtin")


def _load_set(path_str: str) -> EmbeddingSet:
    p = Path(path_str)
    if p.is_dir():
        return _embedding_set_from_dir(p)
    return read_embeddings(p)


def cmd_iss(args) -> int:
    cfg_file = _load_config(args.config)
    mode = _pick(args.mode, cfg_file, "metrics", "mode", None)
    if mode not in ("intra", "cross"):
        _err("--mode must be intra or cross")
        return EXIT_USAGE
    features = _pick(args.features, cfg_file, "metrics", "features", "builtin")

    if features == "file":
        if not args.embeddings:
            _err("--embeddings is required with --features file")
            return EXIT_USAGE
        sets = [read_embeddings(Path(p)) for p in args.embeddings.split(",")]
    else:
        if not args.inputs:
            _err("--inputs is required with --features builtin")
            return EXIT_USAGE
        sets = [_embedding_set_from_dir(Path(p)) for p in args.inputs.split(",")]

    if mode == "intra":
        if len(sets) != 1:
            _err("intra mode takes exactly one input set")
            return EXIT_USAGE
        eset = sets[0]
        if args.reference:
            ref = _load_set(args.reference)
            score = metrics.iss_relative(eset, ref)
            out = {"metric": "iss_intra", "score": score, "n": eset.n, "mode": "relative"}
        else:
            score = metrics.iss_intra(eset)
            out = {"metric": "iss_intra", "score": score, "n": eset.n, "mode": "raw"}
    else:
        if len(sets) < 2:
            _err("cross mode needs at least two input sets")
            return EXIT_USAGE
        score = metrics.iss_cross(sets)
        out = {"metric": "iss_cross", "score": score, "n": sum(s.n for s in sets), "mode": "raw"}
    print(json.dumps(out))
    return EXIT_OK


def cmd_iias(args) -> int:
    groups: list[tuple[str, str]] = []
    if args.class_groups:
        groups.extend((name, path) for name, path in args.class_groups)
    if args.concepts:
        groups.append(("all", args.concepts))
    if not groups:
        _err("provide --concepts or at least one --class NAME PATH")
        return EXIT_USAGE

    attr_m = _load_set(args.male)
    attr_f = _load_set(args.female)
    per_class = {}
    for name, path in groups:
        concepts = _load_set(path)
        per_class[name] = metrics.iias(concepts, attr_m, attr_f)

    baseline_total = None
    if args.baseline:
        try:
            with open(args.baseline, encoding="utf-8") as fh:
                baseline_total = float(json.load(fh)["total_abs"])
        except OSError as e:
            raise IoError(str(e)) from e
        except (KeyError, ValueError, json.JSONDecodeError) as e:
            raise FormatError(f"{args.baseline}: {e}") from e

    rep = metrics.report(per_class, baseline_total_abs=baseline_total)
    print(json.dumps(rep.to_json_obj()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fsaug")
    parser.add_argument("--config", help="TOML config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("augment", help="saliency-masked erasing over an image tree")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", dest="out_dir", required=True)
    p.add_argument("--seed", type=lambda s: int(s, 0))
    p.add_argument("--strategy", choices=["rse", "cse", "rcse", "pse", "hhse", "vhse", "random"])
    p.add_argument("--p-apply", dest="p_apply", type=float)
    p.add_argument("--slice-min", dest="slice_min", type=float)
    p.add_argument("--slice-max", dest="slice_max", type=float)
    p.add_argument("--pse-max", dest="pse_max", type=int)
    p.add_argument("--fill", type=int)
    p.add_argument("--bbox-file", dest="bbox_file")
    p.add_argument("--log")
    p.add_argument("--workers", type=int)
    p.add_argument("--index-base", dest="index_base", type=int, default=0,
                   help="stream index of the first (sorted) input")
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("saliency", help="export saliency maps and/or bounding boxes")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", dest="out_dir", required=True)
    p.add_argument("--emit", choices=["map", "bbox", "both"], required=True)
    p.add_argument("--float-maps", dest="float_maps", action="store_true",
                   help="also write lossless float64 .fmap files")
    p.set_defaults(func=cmd_saliency)

    p = sub.add_parser("iss", help="image similarity (diversity) scores")
    p.add_argument("--mode", choices=["intra", "cross"])
    p.add_argument("--inputs", help="comma-separated image directories")
    p.add_argument("--features", choices=["builtin", "file"])
    p.add_argument("--embeddings", help="embedding file(s), comma-separated for cross")
    p.add_argument("--reference", help="reference set (dir or file) for relative intra mode")
    p.set_defaults(func=cmd_iss)

    p = sub.add_parser("iias", help="image-image association (gender bias) score")
    p.add_argument("--concepts")
    p.add_argument("--male", required=True)
    p.add_argument("--female", required=True)
    p.add_argument("--baseline", help="baseline IIAS report JSON for the reduction factor")
    p.add_argument("--class", dest="class_groups", nargs=2, action="append",
                   metavar=("NAME", "PATH"))
    p.set_defaults(func=cmd_iias)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        _err(str(e))
        return EXIT_USAGE
    except (InsufficientDataError, DivisionByZeroError) as e:
        _err(str(e))
        return EXIT_DATA
    except IoError as e:
        _err(str(e))
        return EXIT_IO
    except FsaugError as e:
        _err(str(e))
        return EXIT_DATA
    except KeyError as e:
        _err(f"bad value: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
