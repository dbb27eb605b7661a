"""Pipeline configuration: JSON parsing, validation, fingerprinting."""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .classify import KnnConfig
from .data import SynthConfig
from .descriptors import DescriptorConfig
from .errors import InvalidConfig
from .evaluation import EvalConfig
from .fusion import FusionStrategy
from .signals import EventDetectorConfig


@dataclass(frozen=True)
class IoConfig:
    """Where data comes from and where artifacts go.

    Exactly one of ``input_root`` (a corpus on disk) and ``synth`` (a
    generator config) must be present. ``output`` is the artifact root; the
    CLI derives `corpus/`, `features.jsonl` and `report.json` under it unless
    a command-level --out overrides the specific target.
    """

    output: str = "out"
    input_root: str | None = None
    synth: SynthConfig | None = None
    sampling_rate_hz: float | None = None
    report_csv: str | None = None

    def __post_init__(self) -> None:
        if (self.input_root is None) == (self.synth is None):
            raise InvalidConfig(
                "exactly one of io.input_root and io.synth must be set"
            )
        if self.sampling_rate_hz is not None and not self.sampling_rate_hz > 0:
            raise InvalidConfig("sampling_rate_hz must be positive when set")


@dataclass(frozen=True)
class PipelineConfig:
    detector: EventDetectorConfig = EventDetectorConfig()
    descriptor: DescriptorConfig = DescriptorConfig()
    fusion_strategy: FusionStrategy = FusionStrategy.SUM
    knn: KnnConfig = KnnConfig()
    eval: EvalConfig = EvalConfig()
    io: IoConfig = IoConfig(synth=SynthConfig())

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "fusion_strategy", FusionStrategy(self.fusion_strategy)
        )
        if self.io.synth is not None:
            if self.io.synth.signal_len < self.detector.window_len:
                raise InvalidConfig(
                    "synth.signal_len must be at least detector.window_len "
                    f"({self.io.synth.signal_len} < {self.detector.window_len})"
                )


def _build(cls, block: dict, where: str):
    if not isinstance(block, dict):
        raise InvalidConfig(f"{where} must be a JSON object")
    fields = {f.name for f in dataclasses.fields(cls)}
    unknown = set(block) - fields
    if unknown:
        raise InvalidConfig(f"unknown keys in {where}: {sorted(unknown)}")
    try:
        return cls(**block)
    except (TypeError, ValueError) as exc:
        raise InvalidConfig(f"bad {where} block: {exc}") from exc


def config_from_dict(raw: dict) -> PipelineConfig:
    if not isinstance(raw, dict):
        raise InvalidConfig("config root must be a JSON object")
    known = {"detector", "descriptor", "fusion_strategy", "knn", "eval", "io"}
    unknown = set(raw) - known
    if unknown:
        raise InvalidConfig(f"unknown top-level keys: {sorted(unknown)}")

    io_block = dict(raw.get("io", {}))
    if "synth" in io_block and io_block["synth"] is not None:
        synth_block = io_block["synth"]
        if isinstance(synth_block, dict) and "classes" in synth_block:
            synth_block = dict(synth_block)
            synth_block["classes"] = tuple(synth_block["classes"])
        io_block["synth"] = _build(SynthConfig, synth_block, "io.synth")

    try:
        strategy = FusionStrategy(raw.get("fusion_strategy", "sum"))
    except ValueError as exc:
        raise InvalidConfig(f"bad fusion_strategy: {exc}") from exc

    return PipelineConfig(
        detector=_build(EventDetectorConfig, raw.get("detector", {}), "detector"),
        descriptor=_build(DescriptorConfig, raw.get("descriptor", {}), "descriptor"),
        fusion_strategy=strategy,
        knn=_build(KnnConfig, raw.get("knn", {}), "knn"),
        eval=_build(EvalConfig, raw.get("eval", {}), "eval"),
        io=_build(IoConfig, io_block, "io"),
    )


def load_config(path: str | Path) -> PipelineConfig:
    """Read and validate a pipeline config file.

    IO errors propagate as OSError; content problems raise InvalidConfig.
    """
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"{path}: not valid JSON: {exc}") from exc
    return config_from_dict(raw)


def apply_overrides(
    cfg: PipelineConfig,
    strategy: str | None = None,
    k: int | None = None,
    metric: str | None = None,
    folds: int | None = None,
    seed: int | None = None,
) -> PipelineConfig:
    """Apply CLI flag overrides. --seed drives both eval and synth seeds."""
    try:
        if strategy is not None:
            cfg = dataclasses.replace(cfg, fusion_strategy=FusionStrategy(strategy))
        if k is not None:
            cfg = dataclasses.replace(cfg, knn=dataclasses.replace(cfg.knn, k=k))
        if metric is not None:
            cfg = dataclasses.replace(
                cfg, knn=dataclasses.replace(cfg.knn, metric=metric)
            )
        if folds is not None:
            cfg = dataclasses.replace(
                cfg, eval=dataclasses.replace(cfg.eval, folds=folds)
            )
        if seed is not None:
            cfg = dataclasses.replace(
                cfg, eval=dataclasses.replace(cfg.eval, seed=seed)
            )
            if cfg.io.synth is not None:
                cfg = dataclasses.replace(
                    cfg,
                    io=dataclasses.replace(
                        cfg.io, synth=dataclasses.replace(cfg.io.synth, seed=seed)
                    ),
                )
    except ValueError as exc:
        raise InvalidConfig(str(exc)) from exc
    return cfg


def config_to_dict(cfg: PipelineConfig) -> dict:
    """Plain-JSON view of a config, canonical enough to fingerprint."""
    return {
        "detector": dataclasses.asdict(cfg.detector),
        "descriptor": dataclasses.asdict(cfg.descriptor),
        "fusion_strategy": cfg.fusion_strategy.value,
        "knn": {
            "k": cfg.knn.k,
            "metric": cfg.knn.metric.value,
            "weighting": cfg.knn.weighting.value,
        },
        "eval": dataclasses.asdict(cfg.eval),
        "io": {
            "output": cfg.io.output,
            "input_root": cfg.io.input_root,
            "synth": (
                None
                if cfg.io.synth is None
                else {**dataclasses.asdict(cfg.io.synth),
                      "classes": list(cfg.io.synth.classes)}
            ),
            "sampling_rate_hz": cfg.io.sampling_rate_hz,
            "report_csv": cfg.io.report_csv,
        },
    }


def config_fingerprint(cfg: PipelineConfig) -> str:
    canonical = json.dumps(config_to_dict(cfg), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()
