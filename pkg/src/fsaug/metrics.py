"""Dataset-diversity (intra/cross similarity) and gender-association scores.

Scores operate on embedding sets: either externally computed features read
from CSV / EMB1 files (the faithful path for learned models), or the
dependency-free builtin feature (mean-centered, L2-normalized 64x64
grayscale intensities).
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionError,
    DivisionByZeroError,
    FormatError,
    InsufficientDataError,
    IoError,
)
from .imgcore import ImageBuffer, resize_bilinear, to_grayscale

_EPS = 1e-12


@dataclass
class EmbeddingSet:
    ids: list[str]
    matrix: np.ndarray  # (n, d) float64
    source: str = "builtin"

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.float64)
        if self.matrix.ndim != 2:
            raise DimensionError("embedding matrix must be 2D")
        if len(self.ids) != self.matrix.shape[0]:
            raise FormatError("id count does not match row count")
        if len(set(self.ids)) != len(self.ids):
            raise FormatError("duplicate ids in embedding set")
        if not np.all(np.isfinite(self.matrix)):
            raise FormatError("non-finite values in embedding set")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]


def builtin_features(img: ImageBuffer) -> np.ndarray:
    """Mean-centered, unit-norm 64x64 grayscale intensities; the zero vector
    for constant images."""
    gray = resize_bilinear(to_grayscale(img), 64, 64)
    v = gray.pixels[:, :, 0].astype(np.float64).reshape(-1) / 255.0
    v = v - v.mean()
    norm = np.linalg.norm(v)
    if norm < _EPS:
        return np.zeros_like(v)
    return v / norm


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu < _EPS or nv < _EPS:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def _unit_rows(m: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(m, axis=1)
    safe = np.where(norms < _EPS, 1.0, norms)
    out = m / safe[:, None]
    out[norms < _EPS] = 0.0
    return out


def iss_intra(eset: EmbeddingSet) -> float:
    """Mean cosine over all unordered distinct pairs."""
    if eset.n < 2:
        raise InsufficientDataError("iss_intra needs at least 2 embeddings")
    u = _unit_rows(eset.matrix)
    total = 0.0
    for i in range(eset.n):
        for j in range(i + 1, eset.n):
            total += float(np.dot(u[i], u[j]))
    return total / (eset.n * (eset.n - 1) / 2)


def iss_cross(sets: list[EmbeddingSet]) -> float:
    """Mean over set pairs of the mean cross-pair cosine."""
    if len(sets) < 2:
        raise InsufficientDataError("iss_cross needs at least 2 sets")
    for s in sets:
        if s.n < 1:
            raise InsufficientDataError("iss_cross: every set must be nonempty")
    units = [_unit_rows(s.matrix) for s in sets]
    total = 0.0
    pairs = 0
    for a in range(len(sets)):
        for b in range(a + 1, len(sets)):
            # orient each pair by content, not argument position, so the
            # accumulation order — and hence the float result — is identical
            # for iss_cross(A, B) and iss_cross(B, A)
            key_a = (units[a].shape[0], units[a].tobytes())
            key_b = (units[b].shape[0], units[b].tobytes())
            lo, hi = (a, b) if key_a <= key_b else (b, a)
            acc = 0.0
            for i in range(units[lo].shape[0]):
                for j in range(units[hi].shape[0]):
                    acc += float(np.dot(units[lo][i], units[hi][j]))
            total += acc / (units[a].shape[0] * units[b].shape[0])
            pairs += 1
    return total / pairs


def iss_relative(eset: EmbeddingSet, reference: EmbeddingSet) -> float:
    ref = iss_intra(reference)
    if abs(ref) < _EPS:
        raise DivisionByZeroError("reference intra score is zero")
    return iss_intra(eset) / ref


def iias(concepts: EmbeddingSet, attr_m: EmbeddingSet, attr_f: EmbeddingSet) -> float:
    """Mean over concepts of (mean cosine to male attrs - mean cosine to
    female attrs). Positive = association with the male attribute set."""
    for s in (concepts, attr_m, attr_f):
        if s.n < 1:
            raise InsufficientDataError("iias: every set must be nonempty")
    if not (concepts.dim == attr_m.dim == attr_f.dim):
        raise DimensionError("embedding dimensions differ")
    uc = _unit_rows(concepts.matrix)
    um = _unit_rows(attr_m.matrix)
    uf = _unit_rows(attr_f.matrix)
    total = 0.0
    for i in range(uc.shape[0]):
        m_acc = 0.0
        for j in range(um.shape[0]):
            m_acc += float(np.dot(uc[i], um[j]))
        f_acc = 0.0
        for j in range(uf.shape[0]):
            f_acc += float(np.dot(uc[i], uf[j]))
        total += m_acc / um.shape[0] - f_acc / uf.shape[0]
    return total / uc.shape[0]


@dataclass
class IiasReport:
    per_class: dict[str, float]
    total_abs: float = field(init=False)
    reduction_factor: float | None = field(init=False, default=None)

    def __post_init__(self):
        self.total_abs = float(sum(abs(v) for v in self.per_class.values()))

    def to_json_obj(self) -> dict:
        obj = {"per_class": self.per_class, "total_abs": self.total_abs}
        if self.reduction_factor is not None:
            obj["reduction_factor"] = self.reduction_factor
        return obj


def report(per_class: dict[str, float], baseline_total_abs: float | None = None) -> IiasReport:
    if not per_class:
        raise InsufficientDataError("report needs at least one class score")
    rep = IiasReport(per_class=dict(per_class))
    if baseline_total_abs is not None:
        if rep.total_abs < _EPS:
            raise DivisionByZeroError("this report's total_abs is zero")
        rep.reduction_factor = baseline_total_abs / rep.total_abs
    return rep


_EMB_MAGIC = b"EMB1"


def write_embeddings(eset: EmbeddingSet, path) -> None:
    """Binary EMB1 (exact) when path ends in anything but .csv; CSV otherwise."""
    if str(path).lower().endswith(".csv"):
        _write_csv(eset, path)
    else:
        _write_binary(eset, path)


def _write_binary(eset: EmbeddingSet, path) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(_EMB_MAGIC)
            fh.write(struct.pack("<III", 1, eset.n, eset.dim))
            m32 = eset.matrix.astype(np.float32)
            for i, ident in enumerate(eset.ids):
                raw = ident.encode("utf-8")
                fh.write(struct.pack("<H", len(raw)))
                fh.write(raw)
                fh.write(m32[i].tobytes())
    except OSError as e:
        raise IoError(str(e)) from e


def _write_csv(eset: EmbeddingSet, path) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id"] + [f"v{i}" for i in range(eset.dim)])
            for ident, row in zip(eset.ids, eset.matrix):
                writer.writerow([ident] + [repr(float(x)) for x in row])
    except OSError as e:
        raise IoError(str(e)) from e


def read_embeddings(path, source: str = "file") -> EmbeddingSet:
    """Auto-detect EMB1 binary (magic) vs CSV (header)."""
    try:
        with open(path, "rb") as fh:
            head = fh.read(4)
            rest = fh.read()
    except OSError as e:
        raise IoError(str(e)) from e
    if head == _EMB_MAGIC:
        return _parse_binary(rest, path, source)
    return _parse_csv(head + rest, path, source)


def _parse_binary(buf: bytes, path, source: str) -> EmbeddingSet:
    try:
        version, count, dim = struct.unpack_from("<III", buf, 0)
    except struct.error as e:
        raise FormatError(f"{path}: truncated header") from e
    if version != 1:
        raise FormatError(f"{path}: unsupported EMB version {version}")
    off = 12
    ids = []
    rows = np.empty((count, dim), dtype=np.float32)
    for i in range(count):
        try:
            (idlen,) = struct.unpack_from("<H", buf, off)
            off += 2
            ident = buf[off : off + idlen].decode("utf-8")
            off += idlen
            rows[i] = np.frombuffer(buf, dtype="<f4", count=dim, offset=off)
            off += 4 * dim
        except (struct.error, ValueError, UnicodeDecodeError) as e:
            raise FormatError(f"{path}: truncated or corrupt record {i}") from e
        ids.append(ident)
    return EmbeddingSet(ids=ids, matrix=rows.astype(np.float64), source=source)


def _parse_csv(buf: bytes, path, source: str) -> EmbeddingSet:
    try:
        text = buf.decode("utf-8")
    except UnicodeDecodeError as e:
        raise FormatError(f"{path}: not EMB1 binary and not UTF-8 text") from e
    reader = csv.reader(text.splitlines())
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError(f"{path}: empty file") from None
    except csv.Error as e:
        raise FormatError(f"{path}: malformed CSV: {e}") from e
    if not header or header[0] != "id":
        raise FormatError(f"{path}: bad CSV header")
    dim = len(header) - 1
    if dim < 1:
        raise FormatError(f"{path}: header declares no value columns")
    ids = []
    rows = []
    try:
        records = list(enumerate(reader, start=2))
    except csv.Error as e:
        raise FormatError(f"{path}: malformed CSV: {e}") from e
    for lineno, rec in records:
        if not rec:
            continue
        if len(rec) != dim + 1:
            raise FormatError(f"{path}:{lineno}: expected {dim + 1} fields, got {len(rec)}")
        ids.append(rec[0])
        try:
            rows.append([float(x) for x in rec[1:]])
        except ValueError as e:
            raise FormatError(f"{path}:{lineno}: {e}") from e
    if not rows:
        raise FormatError(f"{path}: no records")
    return EmbeddingSet(ids=ids, matrix=np.array(rows, dtype=np.float64), source=source)
