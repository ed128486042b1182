"""The six-mask erasing search space and its application to a salient region.

Masks are {0,1} grids (1 = keep, 0 = erase) the size of the target region.
The augmented region is region * mask + fill * (1 - mask); with fill 0 this
is plain elementwise masking. The masked region is pasted back so every
pixel outside the box is untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np

from .errors import BoundsError, ParamError
from .imgcore import ImageBuffer, RegionBox, crop, paste
from .rng import RngStream


class Strategy(Enum):
    # Order is load-bearing: uniform_int(6) indexes this sequence.
    RSE = 0
    CSE = 1
    RCSE = 2
    PSE = 3
    HHSE = 4
    VHSE = 5


STRATEGY_ORDER = tuple(Strategy)

QUADRANTS = ("TL", "TR", "BL", "BR")


@dataclass(frozen=True)
class AugConfig:
    slice_frac_min: float = 1 / 8
    slice_frac_max: float = 1 / 4
    pse_max_erase: int = 3
    fill_value: int = 0
    p_apply: float = 1.0

    def __post_init__(self):
        if not 0 < self.slice_frac_min <= self.slice_frac_max <= 1:
            raise ParamError("need 0 < slice_frac_min <= slice_frac_max <= 1")
        if not 1 <= self.pse_max_erase <= 4:
            raise ParamError("pse_max_erase must be in 1..4")
        if not 0 <= self.fill_value <= 255:
            raise ParamError("fill_value must be an 8-bit sample")
        if not 0 <= self.p_apply <= 1:
            raise ParamError("p_apply must be in [0, 1]")


@dataclass
class AugRecord:
    """Everything needed to replay one augmentation bit-exactly."""

    file: str
    strategy: str
    box: RegionBox | None
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    index: int = 0

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "file": self.file,
            "strategy": self.strategy,
            "box": [self.box.x0, self.box.y0, self.box.x1, self.box.y1] if self.box else None,
            "params": self.params,
            "seed": self.seed,
            "index": self.index,
        }

    @classmethod
    def from_json_obj(cls, obj: dict[str, Any]) -> "AugRecord":
        box = RegionBox(*obj["box"]) if obj.get("box") else None
        return cls(
            file=obj["file"],
            strategy=obj["strategy"],
            box=box,
            params=dict(obj.get("params", {})),
            seed=int(obj.get("seed", 0)),
            index=int(obj.get("index", 0)),
        )


def _check_thickness(thickness: int, dim: int) -> None:
    if not 1 <= thickness <= dim:
        raise ParamError(f"thickness {thickness} outside 1..{dim}")


def gen_row_mask(h: int, w: int, thickness: int, phase: int) -> np.ndarray:
    """Alternating horizontal bands: row r gets ((r // thickness) + phase) % 2."""
    _check_thickness(thickness, h)
    rows = ((np.arange(h) // thickness) + phase) % 2
    return np.repeat(rows[:, None], w, axis=1).astype(np.uint8)


def gen_col_mask(h: int, w: int, thickness: int, phase: int) -> np.ndarray:
    """Alternating vertical bands: column c gets ((c // thickness) + phase) % 2."""
    _check_thickness(thickness, w)
    cols = ((np.arange(w) // thickness) + phase) % 2
    return np.repeat(cols[None, :], h, axis=0).astype(np.uint8)


def gen_rcse_mask(
    h: int, w: int, row_thickness: int, row_phase: int, col_thickness: int, col_phase: int
) -> np.ndarray:
    """Sequential row+column masking composes to an elementwise AND."""
    return np.minimum(
        gen_row_mask(h, w, row_thickness, row_phase),
        gen_col_mask(h, w, col_thickness, col_phase),
    )


def gen_pse_mask(h: int, w: int, quadrants) -> np.ndarray:
    """Erase the listed quadrants. Bottom/right parts absorb odd remainders."""
    quadrants = list(quadrants)
    if not quadrants:
        raise ParamError("PSE needs at least one quadrant")
    for q in quadrants:
        if q not in QUADRANTS:
            raise ParamError(f"unknown quadrant {q!r}")
    mask = np.ones((h, w), dtype=np.uint8)
    hs, ws = h // 2, w // 2
    spans = {
        "TL": (slice(0, hs), slice(0, ws)),
        "TR": (slice(0, hs), slice(ws, w)),
        "BL": (slice(hs, h), slice(0, ws)),
        "BR": (slice(hs, h), slice(ws, w)),
    }
    for q in quadrants:
        mask[spans[q]] = 0
    return mask


def gen_hhse_mask(h: int, w: int, half: str) -> np.ndarray:
    """Erase the top or bottom half (split at floor(h/2))."""
    if half not in ("TOP", "BOTTOM"):
        raise ParamError(f"unknown half {half!r}")
    mask = np.ones((h, w), dtype=np.uint8)
    hs = h // 2
    if half == "TOP":
        mask[:hs, :] = 0
    else:
        mask[hs:, :] = 0
    return mask


def gen_vhse_mask(h: int, w: int, half: str) -> np.ndarray:
    """Erase the left or right half (split at floor(w/2))."""
    if half not in ("LEFT", "RIGHT"):
        raise ParamError(f"unknown half {half!r}")
    mask = np.ones((h, w), dtype=np.uint8)
    ws = w // 2
    if half == "LEFT":
        mask[:, :ws] = 0
    else:
        mask[:, ws:] = 0
    return mask


def apply_mask(region: ImageBuffer, mask: np.ndarray, fill_value: int = 0) -> ImageBuffer:
    if mask.shape != (region.height, region.width):
        raise BoundsError("mask dimensions do not match the region")
    keep = mask[:, :, None].astype(bool)
    out = np.where(keep, region.pixels, np.uint8(fill_value))
    return ImageBuffer(out.astype(np.uint8))


def _draw_thickness(rng: RngStream, dim: int, cfg: AugConfig) -> int:
    u = rng.uniform_f64()
    frac = cfg.slice_frac_min + u * (cfg.slice_frac_max - cfg.slice_frac_min)
    t = max(1, int(np.floor(frac * dim + 0.5)))
    return min(t, dim)


def draw_params(strategy: Strategy, h: int, w: int, cfg: AugConfig, rng: RngStream) -> dict[str, Any]:
    """Draw strategy parameters in the fixed documented order."""
    if strategy is Strategy.RSE:
        t = _draw_thickness(rng, h, cfg)
        return {"thickness": t, "phase": rng.uniform_int(2)}
    if strategy is Strategy.CSE:
        t = _draw_thickness(rng, w, cfg)
        return {"thickness": t, "phase": rng.uniform_int(2)}
    if strategy is Strategy.RCSE:
        rt = _draw_thickness(rng, h, cfg)
        rp = rng.uniform_int(2)
        ct = _draw_thickness(rng, w, cfg)
        cp = rng.uniform_int(2)
        return {"row_thickness": rt, "row_phase": rp, "col_thickness": ct, "col_phase": cp}
    if strategy is Strategy.PSE:
        k = 1 + rng.uniform_int(cfg.pse_max_erase)
        candidates = list(QUADRANTS)
        chosen = []
        for _ in range(k):
            chosen.append(candidates.pop(rng.uniform_int(len(candidates))))
        return {"quadrants": chosen}
    if strategy is Strategy.HHSE:
        return {"half": "TOP" if rng.uniform_int(2) == 0 else "BOTTOM"}
    if strategy is Strategy.VHSE:
        return {"half": "LEFT" if rng.uniform_int(2) == 0 else "RIGHT"}
    raise ParamError(f"unknown strategy {strategy!r}")


def mask_from_params(strategy: Strategy, h: int, w: int, params: dict[str, Any]) -> np.ndarray:
    if strategy is Strategy.RSE:
        return gen_row_mask(h, w, params["thickness"], params["phase"])
    if strategy is Strategy.CSE:
        return gen_col_mask(h, w, params["thickness"], params["phase"])
    if strategy is Strategy.RCSE:
        return gen_rcse_mask(
            h, w,
            params["row_thickness"], params["row_phase"],
            params["col_thickness"], params["col_phase"],
        )
    if strategy is Strategy.PSE:
        return gen_pse_mask(h, w, params["quadrants"])
    if strategy is Strategy.HHSE:
        return gen_hhse_mask(h, w, params["half"])
    if strategy is Strategy.VHSE:
        return gen_vhse_mask(h, w, params["half"])
    raise ParamError(f"unknown strategy {strategy!r}")


def erase_salient(
    img: ImageBuffer,
    box: RegionBox,
    strategy: Strategy,
    cfg: AugConfig,
    rng: RngStream,
    file: str = "",
) -> tuple[ImageBuffer, AugRecord]:
    """Crop the box, draw parameters, mask, paste back."""
    box.validate(img.width, img.height)
    region = crop(img, box)
    params = draw_params(strategy, region.height, region.width, cfg, rng)
    mask = mask_from_params(strategy, region.height, region.width, params)
    masked = apply_mask(region, mask, cfg.fill_value)
    out = paste(img, box, masked)
    params = dict(params)
    params["fill"] = cfg.fill_value
    record = AugRecord(file=file, strategy=strategy.name, box=box, params=params)
    return out, record


def replay_record(img: ImageBuffer, record: AugRecord) -> ImageBuffer:
    """Re-apply an augmentation from its record, bypassing the RNG."""
    if record.strategy == "none":
        return img.copy()
    strategy = Strategy[record.strategy]
    if record.box is None:
        raise ParamError("record has no box")
    params = {k: v for k, v in record.params.items() if k != "fill"}
    region = crop(img, record.box)
    mask = mask_from_params(strategy, region.height, region.width, params)
    masked = apply_mask(region, mask, int(record.params.get("fill", 0)))
    return paste(img, record.box, masked)
