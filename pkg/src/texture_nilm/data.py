"""Dataset ingestion: CSV corpora on disk and a seeded synthetic generator.

On-disk layout is one directory per appliance class with one CSV per
recording (`<root>/<label>/<recording>.csv`, header `timestamp,power_w`).
The synthetic generator emits six appliance archetypes that differ in steady
level, transition shape and periodicity, so texture descriptors can separate
them without redistributing any real corpus.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .errors import (
    EmptyDataset,
    InvalidConfig,
    MalformedCsv,
    NonMonotoneTimestamps,
)
from .signals import PowerSignal

CSV_HEADER = ("timestamp", "power_w")

ARCHETYPES = (
    "square_wave",
    "staircase",
    "spike_decay",
    "sinusoid",
    "constant_drift",
    "duty_cycled",
)

# noisy samples are clamped away from 0 so the only zeros in generated data
# are the deliberate dropout markers
_NOISE_FLOOR = 0.5


@dataclass(frozen=True)
class SynthConfig:
    classes: tuple[str, ...] = ARCHETYPES
    signals_per_class: int = 50
    signal_len: int = 4096
    noise_sigma: float = 3.0
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "classes", tuple(self.classes))
        if len(self.classes) < 2:
            raise InvalidConfig("at least two classes required")
        unknown = [c for c in self.classes if c not in ARCHETYPES]
        if unknown:
            raise InvalidConfig(
                f"unknown archetypes {unknown}; known: {list(ARCHETYPES)}"
            )
        if len(set(self.classes)) != len(self.classes):
            raise InvalidConfig("classes must be distinct")
        if self.signals_per_class < 1:
            raise InvalidConfig("signals_per_class must be positive")
        if self.signal_len < 9:
            raise InvalidConfig("signal_len must be at least 9")
        if self.noise_sigma < 0:
            raise InvalidConfig("noise_sigma must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise InvalidConfig("seed must fit in an unsigned 64-bit integer")


def _parse_timestamp(raw: str, path: Path) -> float:
    text = raw.strip()
    try:
        value = float(text)
    except ValueError:
        pass
    else:
        if not np.isfinite(value):
            raise MalformedCsv(f"{path}: non-finite timestamp {raw!r}")
        return value
    try:
        dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError:
        raise MalformedCsv(f"{path}: unparseable timestamp {raw!r}") from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def _load_csv(path: Path, label: str, rate_override: float | None) -> PowerSignal:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedCsv(f"{path}: file is empty") from None
        if tuple(col.strip() for col in header) != CSV_HEADER:
            raise MalformedCsv(
                f"{path}: expected header {','.join(CSV_HEADER)!r}, got {header!r}"
            )
        timestamps = []
        powers = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise MalformedCsv(f"{path}: line {lineno} has {len(row)} fields")
            timestamps.append(_parse_timestamp(row[0], path))
            try:
                power = float(row[1])
            except ValueError:
                raise MalformedCsv(
                    f"{path}: line {lineno} has unparseable power {row[1]!r}"
                ) from None
            if not np.isfinite(power):
                raise MalformedCsv(f"{path}: line {lineno} has non-finite power")
            powers.append(power)

    minimum_rows = 1 if rate_override else 2
    if len(powers) < minimum_rows:
        raise MalformedCsv(
            f"{path}: {len(powers)} data rows; at least {minimum_rows} required"
        )
    ts = np.asarray(timestamps)
    deltas = np.diff(ts)
    if np.any(deltas <= 0):
        raise NonMonotoneTimestamps(f"{path}: timestamps are not strictly increasing")
    if rate_override:
        rate = rate_override
    else:
        rate = 1.0 / float(np.median(deltas))
    return PowerSignal(np.asarray(powers), rate, label, path.stem)


def load_dataset(
    root: str | Path, sampling_rate_hz: float | None = None
) -> list[PowerSignal]:
    """Load every recording under `<root>/<label>/*.csv`.

    The appliance label is the directory name. The sampling rate is inferred
    from the median timestamp delta unless ``sampling_rate_hz`` overrides it
    (high-rate corpora often ship sample indices instead of wall-clock times).
    Output is sorted by (label, file name) for determinism.
    """
    root = Path(root)
    if not root.is_dir():
        raise EmptyDataset(f"{root} is not a directory")
    signals = []
    for class_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        for path in sorted(class_dir.glob("*.csv")):
            signals.append(_load_csv(path, class_dir.name, sampling_rate_hz))
    if not signals:
        raise EmptyDataset(f"no recordings found under {root}")
    return signals


def write_corpus(signals: list[PowerSignal], root: str | Path) -> dict[str, int]:
    """Write signals as a `<root>/<label>/<source_id>.csv` corpus.

    Power values are written with full round-trip precision and timestamps as
    integers whenever the sampling step is integral, so loading the corpus
    back reproduces the exact same signals. Files written before a failure are
    removed again.
    """
    root = Path(root)
    written: list[Path] = []
    counts: dict[str, int] = {}
    try:
        for signal in sorted(signals, key=lambda s: (s.label, s.source_id)):
            class_dir = root / signal.label
            class_dir.mkdir(parents=True, exist_ok=True)
            path = class_dir / f"{signal.source_id}.csv"
            step = 1.0 / signal.sampling_rate_hz
            lines = ["timestamp,power_w"]
            for i, value in enumerate(signal.samples):
                t = i * step
                stamp = str(int(t)) if t == int(t) else repr(float(t))
                lines.append(f"{stamp},{float(value)!r}")
            path.write_text("\n".join(lines) + "\n")
            written.append(path)
            counts[signal.label] = counts.get(signal.label, 0) + 1
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return counts


def _with_noise(x: np.ndarray, rng: np.random.Generator, sigma: float) -> np.ndarray:
    if sigma > 0:
        x = x + rng.normal(0.0, sigma, x.size)
        np.maximum(x, _NOISE_FLOOR, out=x)
    return x


def _activation_start(rng: np.random.Generator) -> int:
    return int(rng.integers(64, 193))


def _square_wave(rng: np.random.Generator, n: int, sigma: float) -> np.ndarray:
    # resistive heater: hard on/off between two exact levels
    low = 30.0
    high = float(rng.uniform(1700.0, 2100.0))
    half_period = int(rng.integers(80, 161))
    x = np.full(n, low)
    pos = _activation_start(rng)
    on = True
    while pos < n:
        if on:
            x[pos : pos + half_period] = high
        pos += half_period
        on = not on
    return _with_noise(x, rng, sigma)


def _staircase(rng: np.random.Generator, n: int, sigma: float) -> np.ndarray:
    # washing-machine style multi-state program, up then down, resting between
    base = 20.0
    levels = [
        float(rng.uniform(250.0, 350.0)),
        float(rng.uniform(600.0, 800.0)),
        float(rng.uniform(1000.0, 1300.0)),
    ]
    program = levels + levels[-2::-1]
    dwell = int(rng.integers(120, 261))
    x = np.full(n, base)
    pos = _activation_start(rng)
    step = 0
    while pos < n:
        x[pos : pos + dwell] = program[step % len(program)]
        pos += dwell
        step += 1
        if step % len(program) == 0:
            pos += int(rng.integers(40, 100))
    return _with_noise(x, rng, sigma)


def _spike_decay(rng: np.random.Generator, n: int, sigma: float) -> np.ndarray:
    # compressor: startup spike decaying exponentially to the running level
    base = 70.0
    x = np.full(n, base)
    pos = _activation_start(rng)
    while pos < n:
        peak = float(rng.uniform(1200.0, 1600.0))
        tau = float(rng.uniform(25.0, 60.0))
        running = float(rng.uniform(180.0, 260.0))
        on_len = int(rng.integers(300, 501))
        off_len = int(rng.integers(200, 401))
        t = np.arange(min(on_len, n - pos), dtype=np.float64)
        x[pos : pos + t.size] = running + (peak - running) * np.exp(-t / tau)
        pos += on_len + off_len
    return _with_noise(x, rng, sigma)


def _sinusoid(rng: np.random.Generator, n: int, sigma: float) -> np.ndarray:
    standby = 15.0
    level = float(rng.uniform(280.0, 360.0))
    amplitude = float(rng.uniform(90.0, 150.0))
    period = float(rng.uniform(48.0, 96.0))
    x = np.full(n, standby)
    start = _activation_start(rng)
    t = np.arange(n - start, dtype=np.float64)
    x[start:] = level + amplitude * np.sin(2.0 * np.pi * t / period)
    return _with_noise(x, rng, sigma)


def _constant_drift(rng: np.random.Generator, n: int, sigma: float) -> np.ndarray:
    # always-on electronics: low constant level with slow linear drift
    standby = 10.0
    level = float(rng.uniform(110.0, 170.0))
    drift = float(rng.uniform(-35.0, 35.0))
    x = np.full(n, standby)
    start = _activation_start(rng)
    span = n - start
    x[start:] = level + drift * np.arange(span) / max(span - 1, 1)
    return _with_noise(x, rng, sigma)


def _duty_cycled(rng: np.random.Generator, n: int, sigma: float) -> np.ndarray:
    # thermostatic on/off cycling, plus isolated zero samples standing in for
    # dropped meter readings (the zeros that impute_zeros exists to repair)
    standby = 5.0
    on_level = float(rng.uniform(550.0, 750.0))
    on_len = int(rng.integers(40, 91))
    off_len = int(rng.integers(40, 91))
    x = np.full(n, standby)
    pos = _activation_start(rng)
    while pos < n:
        x[pos : pos + on_len] = on_level
        pos += on_len + off_len
    x = _with_noise(x, rng, sigma)
    dropouts = rng.choice(np.arange(1, n - 1), size=min(8, n - 2), replace=False)
    x[np.sort(dropouts)] = 0.0
    return x


_ARCHETYPE_FUNCS = {
    "square_wave": _square_wave,
    "staircase": _staircase,
    "spike_decay": _spike_decay,
    "sinusoid": _sinusoid,
    "constant_drift": _constant_drift,
    "duty_cycled": _duty_cycled,
}


def generate(cfg: SynthConfig) -> list[PowerSignal]:
    """Generate a labeled synthetic corpus, deterministically in the seed.

    Each signal gets its own child generator spawned from the config seed, so
    the sequence for signal (class i, index j) never depends on how many draws
    another archetype consumed. All signals are emitted at 1 Hz.
    """
    children = np.random.SeedSequence(cfg.seed).spawn(
        len(cfg.classes) * cfg.signals_per_class
    )
    signals = []
    for ci, cls in enumerate(cfg.classes):
        make = _ARCHETYPE_FUNCS[cls]
        for si in range(cfg.signals_per_class):
            rng = np.random.default_rng(children[ci * cfg.signals_per_class + si])
            samples = make(rng, cfg.signal_len, cfg.noise_sigma)
            signals.append(PowerSignal(samples, 1.0, cls, f"{cls}_{si:03d}"))
    return signals
