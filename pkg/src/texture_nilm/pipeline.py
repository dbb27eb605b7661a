"""End-to-end wiring shared by the CLI and the experiment scripts.

A "record" is one extracted event window: its label, provenance and the two
raw 256-bin descriptor histograms. Records are what the feature dump stores
(one JSON object per line) and what evaluation datasets are built from.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classify import LabeledDataset
from .descriptors import (
    DescriptorConfig,
    DescriptorHistogram,
    HISTOGRAM_BINS,
    lbp_histogram,
    wld_histogram,
)
from .errors import InvalidConfig, MalformedCsv
from .fusion import FusionStrategy, fuse
from .signals import EventDetectorConfig, PowerSignal, detect_events, impute_zeros
from .transform2d import reshape

THREADS_ENV_VAR = "TEXTURE_NILM_THREADS"


@dataclass
class WindowRecord:
    label: str
    source_id: str
    onset_index: int
    lbp: np.ndarray
    wld: np.ndarray


def worker_count(env: dict | None = None) -> int:
    """Worker cap from TEXTURE_NILM_THREADS; 0 or unset means auto."""
    raw = (env if env is not None else os.environ).get(THREADS_ENV_VAR, "0")
    try:
        value = int(raw)
    except ValueError:
        raise InvalidConfig(
            f"{THREADS_ENV_VAR} must be a non-negative integer, got {raw!r}"
        ) from None
    if value < 0:
        raise InvalidConfig(f"{THREADS_ENV_VAR} must be non-negative, got {value}")
    return value if value > 0 else (os.cpu_count() or 1)


def _extract_one(
    signal: PowerSignal,
    detector: EventDetectorConfig,
    descriptor: DescriptorConfig,
) -> list[WindowRecord]:
    repaired = impute_zeros(signal)
    records = []
    for window in detect_events(repaired, detector):
        matrix = reshape(window)
        records.append(
            WindowRecord(
                label=signal.label,
                source_id=signal.source_id,
                onset_index=window.onset_index,
                lbp=lbp_histogram(matrix).bins,
                wld=wld_histogram(matrix, descriptor).bins,
            )
        )
    return records


def extract_records(
    signals: list[PowerSignal],
    detector: EventDetectorConfig,
    descriptor: DescriptorConfig,
    workers: int = 1,
) -> list[WindowRecord]:
    """Run repair, event detection and both descriptors over a corpus.

    Signals are processed in (label, source_id) order and their windows kept
    in onset order, so the output is identical for any worker count.
    """
    ordered = sorted(signals, key=lambda s: (s.label, s.source_id))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_signal = list(
                pool.map(lambda s: _extract_one(s, detector, descriptor), ordered)
            )
    else:
        per_signal = [_extract_one(s, detector, descriptor) for s in ordered]
    return [record for group in per_signal for record in group]


def record_to_json(record: WindowRecord) -> str:
    return json.dumps(
        {
            "label": record.label,
            "source_id": record.source_id,
            "onset_index": record.onset_index,
            "lbp": [int(v) for v in record.lbp],
            "wld": [int(v) for v in record.wld],
        },
        sort_keys=True,
        separators=(",", ":"),
    )


def records_to_jsonl(records: list[WindowRecord]) -> str:
    return "".join(record_to_json(r) + "\n" for r in records)


def load_records(path: str | Path) -> list[WindowRecord]:
    """Parse a feature dump written by ``records_to_jsonl``."""
    path = Path(path)
    records = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedCsv(f"{path}: line {lineno}: not valid JSON: {exc}") from exc
        try:
            record = WindowRecord(
                label=str(obj["label"]),
                source_id=str(obj["source_id"]),
                onset_index=int(obj["onset_index"]),
                lbp=np.asarray(obj["lbp"], dtype=np.int64),
                wld=np.asarray(obj["wld"], dtype=np.int64),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedCsv(f"{path}: line {lineno}: bad record: {exc}") from exc
        if record.lbp.shape != (HISTOGRAM_BINS,) or record.wld.shape != (HISTOGRAM_BINS,):
            raise MalformedCsv(
                f"{path}: line {lineno}: histograms must have {HISTOGRAM_BINS} bins"
            )
        records.append(record)
    return records


def dataset_from_records(
    records: list[WindowRecord], strategy: FusionStrategy | str
) -> LabeledDataset:
    """Fuse every record's histogram pair into one labeled dataset."""
    strategy = FusionStrategy(strategy)
    pairs = []
    for r in records:
        fused = fuse(
            DescriptorHistogram(r.lbp, "lbp"),
            DescriptorHistogram(r.wld, "wld"),
            strategy,
        )
        pairs.append((fused, r.label))
    return LabeledDataset.from_feature_vectors(pairs)


def dataset_from_single_descriptor(
    records: list[WindowRecord], kind: str
) -> LabeledDataset:
    """L1-normalized single-descriptor dataset for ablation comparisons."""
    if kind not in ("lbp", "wld"):
        raise ValueError("kind must be 'lbp' or 'wld'")
    vectors = []
    for r in records:
        bins = np.asarray(getattr(r, kind), dtype=np.float64)
        vectors.append(bins / bins.sum())
    return LabeledDataset(np.vstack(vectors), [r.label for r in records])
