"""fsaug: saliency-masked face erasing augmentation plus diversity and
gender-association metrics, with a deterministic RNG contract throughout."""

from ._backend import BACKEND_NAME
from .erasing import (
    AugConfig,
    AugRecord,
    Strategy,
    apply_mask,
    erase_salient,
    gen_col_mask,
    gen_hhse_mask,
    gen_pse_mask,
    gen_rcse_mask,
    gen_row_mask,
    gen_vhse_mask,
    replay_record,
)
from .imgcore import (
    ImageBuffer,
    RegionBox,
    crop,
    load_image,
    paste,
    resize_bilinear,
    save_image,
    to_grayscale,
)
from .metrics import (
    EmbeddingSet,
    IiasReport,
    builtin_features,
    cosine,
    iias,
    iss_cross,
    iss_intra,
    iss_relative,
    read_embeddings,
    report,
    write_embeddings,
)
from .policy import augment_batch, face_rand_aug, select_strategy
from .rng import RngStream, derive_stream
from .saliency import (
    SaliencyConfig,
    SaliencyMap,
    compute_saliency,
    extract_salient_region,
    fft2d,
    saliency_map_to_image,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "AugConfig",
    "AugRecord",
    "Strategy",
    "apply_mask",
    "erase_salient",
    "gen_col_mask",
    "gen_hhse_mask",
    "gen_pse_mask",
    "gen_rcse_mask",
    "gen_row_mask",
    "gen_vhse_mask",
    "replay_record",
    "ImageBuffer",
    "RegionBox",
    "crop",
    "load_image",
    "paste",
    "resize_bilinear",
    "save_image",
    "to_grayscale",
    "EmbeddingSet",
    "IiasReport",
    "builtin_features",
    "cosine",
    "iias",
    "iss_cross",
    "iss_intra",
    "iss_relative",
    "read_embeddings",
    "report",
    "write_embeddings",
    "augment_batch",
    "face_rand_aug",
    "select_strategy",
    "RngStream",
    "derive_stream",
    "SaliencyConfig",
    "SaliencyMap",
    "compute_saliency",
    "extract_salient_region",
    "fft2d",
    "saliency_map_to_image",
    "__version__",
]
