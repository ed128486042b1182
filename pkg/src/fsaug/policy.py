"""FaceRandAug: pick one erasing strategy uniformly and apply it to the
salient region, or pass the image through untouched.

Batch processing derives one RNG stream per image from (master_seed, index)
where index is the position in sorted-filename order, so results do not
depend on worker count or filesystem enumeration order.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass
from pathlib import Path

from .erasing import STRATEGY_ORDER, AugConfig, AugRecord, Strategy, erase_salient
from .imgcore import ImageBuffer, RegionBox, load_image, save_image
from .rng import RngStream, derive_stream
from .saliency import SaliencyConfig, compute_saliency, extract_salient_region


def select_strategy(rng: RngStream, p_apply: float) -> Strategy | None:
    """The policy's draw sequence: apply gate first, then a uniform pick.
    Returns None on the pass-through branch."""
    if rng.uniform_f64() >= p_apply:
        return None
    return STRATEGY_ORDER[rng.uniform_int(6)]


def face_rand_aug(
    img: ImageBuffer,
    cfg: AugConfig = AugConfig(),
    scfg: SaliencyConfig = SaliencyConfig(),
    rng: RngStream | None = None,
    external_box: RegionBox | None = None,
    forced_strategy: Strategy | None = None,
    file: str = "",
) -> tuple[ImageBuffer, AugRecord]:
    if rng is None:
        rng = derive_stream(0, 0)
    if rng.uniform_f64() >= cfg.p_apply:
        return img.copy(), AugRecord(file=file, strategy="none", box=None)
    box = external_box
    if box is None:
        box = extract_salient_region(compute_saliency(img, scfg), scfg)
    if forced_strategy is not None:
        strategy = forced_strategy
    else:
        strategy = STRATEGY_ORDER[rng.uniform_int(6)]
    return erase_salient(img, box, strategy, cfg, rng, file=file)


@dataclass
class BatchResult:
    records: list[AugRecord]
    failures: list[tuple[str, str]]  # (path, error message)


def _augment_one(path, out_path, index, master_seed, cfg, scfg, box, forced_strategy):
    img = load_image(path)
    rng = derive_stream(master_seed, index)
    out, record = face_rand_aug(
        img, cfg, scfg, rng,
        external_box=box, forced_strategy=forced_strategy, file=str(path),
    )
    record.seed = master_seed
    record.index = index
    out_path.parent.mkdir(parents=True, exist_ok=True)
    save_image(out, out_path)
    return record


def augment_batch(
    inputs,
    out_dir,
    master_seed: int,
    cfg: AugConfig = AugConfig(),
    scfg: SaliencyConfig = SaliencyConfig(),
    bbox_table: dict[str, RegionBox] | None = None,
    forced_strategy: Strategy | None = None,
    workers: int = 1,
    index_base: int = 0,
    in_root=None,
) -> BatchResult:
    """Augment `inputs` into out_dir. Inputs are sorted here so stream
    indices are stable; per-file failures are collected, not raised."""
    inputs = sorted(Path(p) for p in inputs)
    out_dir = Path(out_dir)
    root = Path(in_root) if in_root is not None else None

    jobs = []
    for i, path in enumerate(inputs):
        rel = path.relative_to(root) if root is not None else Path(path.name)
        out_path = (out_dir / rel).with_suffix(".png")
        box = None
        if bbox_table is not None:
            box = bbox_table.get(path.name) or bbox_table.get(str(rel))
        jobs.append((path, out_path, index_base + i, box))

    records: list[AugRecord | None] = [None] * len(jobs)
    failures: list[tuple[str, str]] = []

    def run(j):
        path, out_path, index, box = j
        return _augment_one(path, out_path, index, master_seed, cfg, scfg, box, forced_strategy)

    if workers <= 1:
        for slot, job in enumerate(jobs):
            try:
                records[slot] = run(job)
            except Exception as e:  # noqa: BLE001 - batch must survive bad files
                failures.append((str(job[0]), str(e)))
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            futs = {pool.submit(run, job): (slot, job) for slot, job in enumerate(jobs)}
            for fut in concurrent.futures.as_completed(futs):
                slot, job = futs[fut]
                try:
                    records[slot] = fut.result()
                except Exception as e:  # noqa: BLE001
                    failures.append((str(job[0]), str(e)))

    failures.sort()
    return BatchResult(records=[r for r in records if r is not None], failures=failures)
