"""Episodic multi-rate demonstration format.

An episode is a directory holding a JSON manifest plus one binary file per
stream. Non-audio stream files are a flat sequence of records, each record
being a little-endian float64 timestamp followed by the sample payload
(``prod(shape)`` values of the declared dtype). Audio streams are stored as a
single float64 start timestamp followed by one contiguous float32 block at a
fixed 44100 Hz rate. The format is self-describing and seekable; nothing in
it is specific to any one robot or sensor.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

AUDIO_RATE_HZ = 44100.0
MODALITIES = ("image", "proprio", "tactile", "audio", "action")
_DTYPES = {"float32": np.float32, "uint8": np.uint8}

MANIFEST_NAME = "manifest.json"


class EpisodeFormatError(ValueError):
    """Raised when an episode directory violates the format contract."""


@dataclass(frozen=True)
class StreamSpec:
    """Manifest entry describing one stream."""

    name: str
    modality: str
    rate_hz: float
    shape: tuple[int, ...]
    dtype: str = "float32"
    file: str = ""

    def __post_init__(self):
        if self.modality not in MODALITIES:
            raise EpisodeFormatError(
                f"stream '{self.name}': unknown modality '{self.modality}'"
            )
        if self.dtype not in _DTYPES:
            raise EpisodeFormatError(
                f"stream '{self.name}': unsupported dtype '{self.dtype}'"
            )
        if self.rate_hz <= 0:
            raise EpisodeFormatError(f"stream '{self.name}': rate_hz must be > 0")
        if self.modality == "audio":
            if tuple(self.shape) != (1,):
                raise EpisodeFormatError(
                    f"stream '{self.name}': audio sample shape must be (1,)"
                )
            if self.rate_hz != AUDIO_RATE_HZ:
                raise EpisodeFormatError(
                    f"stream '{self.name}': audio rate must be {AUDIO_RATE_HZ} Hz"
                )
        if not self.file:
            object.__setattr__(self, "file", f"{self.name}.bin")

    @property
    def sample_size(self) -> int:
        return int(np.prod(self.shape)) if self.shape else 1


@dataclass(frozen=True)
class StreamManifest:
    streams: tuple[StreamSpec, ...]

    def __post_init__(self):
        names = [s.name for s in self.streams]
        if len(set(names)) != len(names):
            raise EpisodeFormatError("duplicate stream names in manifest")

    def get(self, name: str) -> StreamSpec:
        for s in self.streams:
            if s.name == name:
                return s
        raise KeyError(name)


@dataclass
class Stream:
    """One timestamped sample sequence.

    ``data`` keeps the on-disk dtype so serialization round-trips are
    bit-identical; consumers convert to float where needed. Audio timestamps
    are derived from the start time and the fixed sample rate.
    """

    spec: StreamSpec
    timestamps: np.ndarray  # (N,) float64, strictly increasing
    data: np.ndarray  # (N, *shape)

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def modality(self) -> str:
        return self.spec.modality

    def __len__(self) -> int:
        return len(self.timestamps)

    def validate(self):
        if self.timestamps.ndim != 1:
            raise EpisodeFormatError(f"stream '{self.name}': timestamps must be 1-D")
        if len(self.timestamps) != len(self.data):
            raise EpisodeFormatError(
                f"stream '{self.name}': {len(self.timestamps)} timestamps for "
                f"{len(self.data)} samples"
            )
        if len(self.timestamps) == 0:
            raise EpisodeFormatError(f"stream '{self.name}': empty stream")
        if np.any(np.diff(self.timestamps) <= 0):
            raise EpisodeFormatError(f"non-monotone timestamps in {self.name}")
        expected = (len(self.data),) + tuple(self.spec.shape)
        if self.data.shape != expected:
            raise EpisodeFormatError(
                f"stream '{self.name}': sample shape {self.data.shape[1:]} does not "
                f"match declared {tuple(self.spec.shape)}"
            )
        if not np.issubdtype(self.data.dtype, np.integer) and not np.all(
            np.isfinite(self.data)
        ):
            raise EpisodeFormatError(f"stream '{self.name}': non-finite samples")


@dataclass
class Episode:
    """A validated demonstration: named streams plus the manifest.

    ``length_T`` counts action-rate ticks and always equals the length of the
    ``actions`` stream.
    """

    id: str
    streams: dict[str, Stream]
    manifest: StreamManifest
    length_T: int = field(init=False)

    def __post_init__(self):
        self.validate()
        self.length_T = len(self.streams["actions"])

    def validate(self):
        for spec in self.manifest.streams:
            if spec.name not in self.streams:
                raise EpisodeFormatError(
                    f"manifest names stream '{spec.name}' but it was not loaded"
                )
        if "actions" not in self.streams:
            raise EpisodeFormatError("missing 'actions' stream")
        if self.streams["actions"].modality != "action":
            raise EpisodeFormatError("'actions' stream must have modality 'action'")
        for st in self.streams.values():
            st.validate()

    @property
    def action_dim(self) -> int:
        return self.streams["actions"].spec.sample_size

    def streams_by_modality(self, modality: str) -> list[Stream]:
        return [s for s in self.streams.values() if s.modality == modality]


def _read_records(path: Path, spec: StreamSpec) -> Stream:
    raw = path.read_bytes()
    if spec.modality == "audio":
        if len(raw) < 8 or (len(raw) - 8) % 4 != 0:
            raise EpisodeFormatError(
                f"stream '{spec.name}': audio file size {len(raw)} is not "
                "8 + 4*n bytes"
            )
        start = float(np.frombuffer(raw, dtype="<f8", count=1)[0])
        samples = np.frombuffer(raw[8:], dtype="<f4").astype(np.float32)
        ts = start + np.arange(len(samples), dtype=np.float64) / AUDIO_RATE_HZ
        return Stream(spec, ts, samples.reshape(-1, 1))

    itemsize = _DTYPES[spec.dtype]().itemsize
    rec_size = 8 + spec.sample_size * itemsize
    if len(raw) == 0 or len(raw) % rec_size != 0:
        raise EpisodeFormatError(
            f"stream '{spec.name}': file size {len(raw)} is not a multiple of the "
            f"record size {rec_size} for shape {tuple(spec.shape)} "
            f"({spec.dtype}); shape mismatch or truncated file"
        )
    n = len(raw) // rec_size
    rec = np.frombuffer(raw, dtype=np.uint8).reshape(n, rec_size)
    ts = rec[:, :8].copy().view("<f8").reshape(n).astype(np.float64)
    payload = rec[:, 8:].copy().view(f"<{np.dtype(spec.dtype).char}")
    data = payload.reshape((n,) + tuple(spec.shape))
    return Stream(spec, ts, data)


def _write_records(path: Path, stream: Stream):
    spec = stream.spec
    if spec.modality == "audio":
        with open(path, "wb") as f:
            f.write(np.float64(stream.timestamps[0]).tobytes())
            f.write(stream.data.astype("<f4").tobytes())
        return
    n = len(stream)
    ts_bytes = stream.timestamps.astype("<f8").view(np.uint8).reshape(n, 8)
    payload = (
        stream.data.astype(f"<{np.dtype(spec.dtype).char}")
        .reshape(n, -1)
        .view(np.uint8)
    )
    np.concatenate([ts_bytes, payload], axis=1).tofile(path)


def load_manifest(path: Path) -> tuple[str, StreamManifest]:
    mpath = Path(path) / MANIFEST_NAME
    if not mpath.is_file():
        raise EpisodeFormatError(f"missing manifest file {mpath}")
    with open(mpath, encoding="utf-8") as f:
        doc = json.load(f)
    try:
        specs = tuple(
            StreamSpec(
                name=s["name"],
                modality=s["modality"],
                rate_hz=float(s["rate_hz"]),
                shape=tuple(int(x) for x in s["shape"]),
                dtype=s.get("dtype", "float32"),
                file=s.get("file", ""),
            )
            for s in doc["streams"]
        )
    except KeyError as e:
        raise EpisodeFormatError(f"manifest missing required field {e}") from e
    return str(doc.get("id", Path(path).name)), StreamManifest(specs)


def load_episode(path) -> Episode:
    """Load and validate one episode directory.

    Raises EpisodeFormatError naming the offending stream on any violation:
    missing manifest, missing files, payload size / declared shape mismatch,
    non-monotone timestamps, or a missing ``actions`` stream.
    """
    path = Path(path)
    ep_id, manifest = load_manifest(path)
    streams = {}
    for spec in manifest.streams:
        fpath = path / spec.file
        if not fpath.is_file():
            raise EpisodeFormatError(f"stream '{spec.name}': missing file {fpath}")
        streams[spec.name] = _read_records(fpath, spec)
    return Episode(id=ep_id, streams=streams, manifest=manifest)


def write_episode(ep: Episode, path) -> Path:
    """Serialize an episode to a directory (inverse of load_episode)."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    doc = {
        "id": ep.id,
        "streams": [
            {
                "name": s.name,
                "modality": s.modality,
                "rate_hz": s.rate_hz,
                "shape": list(s.shape),
                "dtype": s.dtype,
                "file": s.file,
            }
            for s in ep.manifest.streams
        ],
    }
    with open(path / MANIFEST_NAME, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2)
    for spec in ep.manifest.streams:
        _write_records(path / spec.file, ep.streams[spec.name])
    return path


def make_episode(ep_id: str, streams: list[Stream]) -> Episode:
    """Assemble an Episode from in-memory streams."""
    manifest = StreamManifest(tuple(s.spec for s in streams))
    return Episode(id=ep_id, streams={s.name: s for s in streams}, manifest=manifest)
