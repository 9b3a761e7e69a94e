"""Corpus manifests and the multi-work analysis run.

A manifest is a CSV file with one row per work::

    work_id,composer,groups,midi_path,tracks
    haydn_op17_2,Haydn,minuet,haydn/op17no2_2.mid,0;1;2;3

``groups`` holds ``;``-separated labels (may be empty), ``tracks`` the four
track indices in score order (violin 1, violin 2, viola, cello). Relative
``midi_path`` values resolve against the manifest's directory.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .analysis import FEATURE_NAMES, N_INSTRUMENTS, WorkDescriptor, dispersion, pca_2d, work_descriptor
from .midi import MidiParseError, read_midi
from .pipeline import RunConfig, analyze_track

__all__ = [
    "ManifestError",
    "WorkEntry",
    "CorpusManifest",
    "load_manifest",
    "WorkFailure",
    "CorpusResult",
    "run_corpus",
    "write_outputs",
]

log = logging.getLogger(__name__)

MANIFEST_FIELDS = ("work_id", "composer", "groups", "midi_path", "tracks")


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class WorkEntry:
    work_id: str
    composer: str
    groups: tuple[str, ...]
    midi_path: Path
    instrument_track_indices: tuple[int, ...]


@dataclass(frozen=True)
class CorpusManifest:
    works: tuple[WorkEntry, ...]

    def __post_init__(self):
        ids = [w.work_id for w in self.works]
        dup = sorted({i for i in ids if ids.count(i) > 1})
        if dup:
            raise ManifestError(f"duplicate work_id(s): {', '.join(dup)}")
        for w in self.works:
            if len(w.instrument_track_indices) != N_INSTRUMENTS:
                raise ManifestError(
                    f"{w.work_id}: expected {N_INSTRUMENTS} track indices, got {len(w.instrument_track_indices)}"
                )

    def without(self, excluded: Iterable[str]) -> "CorpusManifest":
        excluded = set(excluded)
        unknown = excluded - {w.work_id for w in self.works}
        if unknown:
            raise ManifestError(f"cannot exclude unknown work_id(s): {', '.join(sorted(unknown))}")
        return CorpusManifest(tuple(w for w in self.works if w.work_id not in excluded))


def _split(cell: str) -> list[str]:
    return [p for p in cell.replace(",", ";").replace(" ", ";").split(";") if p]


def load_manifest(path: str | Path) -> CorpusManifest:
    path = Path(path)
    base = path.parent
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if not rows or tuple(c.strip() for c in rows[0]) != MANIFEST_FIELDS:
        raise ManifestError(f"{path}: header must be {','.join(MANIFEST_FIELDS)}")
    works = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(MANIFEST_FIELDS):
            raise ManifestError(f"{path}: record {lineno} has {len(row)} fields")
        work_id, composer, groups, midi_path, tracks = (c.strip() for c in row)
        try:
            idx = tuple(int(t) for t in _split(tracks))
        except ValueError as exc:
            raise ManifestError(f"{path}: {work_id}: bad track indices {tracks!r}") from exc
        mp = Path(midi_path)
        works.append(WorkEntry(work_id, composer, tuple(_split(groups)), mp if mp.is_absolute() else base / mp, idx))
    return CorpusManifest(tuple(works))


@dataclass(frozen=True)
class WorkFailure:
    work_id: str
    message: str
    io_error: bool


@dataclass
class CorpusResult:
    config: RunConfig
    works: list[WorkEntry] = field(default_factory=list)
    descriptors: list[WorkDescriptor] = field(default_factory=list)
    failures: list[WorkFailure] = field(default_factory=list)

    def groupings(self) -> dict[str, dict[str, list[int]]]:
        by_composer: dict[str, list[int]] = {}
        by_group: dict[str, list[int]] = {}
        for i, w in enumerate(self.works):
            by_composer.setdefault(w.composer, []).append(i)
            for g in w.groups:
                by_group.setdefault(g, []).append(i)
        return {"by_composer": by_composer, "by_group": by_group}

    def matrix(self) -> np.ndarray:
        return np.array([d.values for d in self.descriptors]).reshape(-1, len(FEATURE_NAMES))

    def dispersions(self) -> dict:
        X = self.matrix()
        out: dict = {}
        for kind, groups in self.groupings().items():
            out[kind] = {
                g: (dispersion(X[idx], self.config.dispersion_variant) if len(idx) >= 2 else None)
                for g, idx in groups.items()
            }
        out["all"] = dispersion(X, self.config.dispersion_variant) if len(X) >= 2 else None
        return out


def analyze_work(entry: WorkEntry, config: RunConfig) -> WorkDescriptor:
    tracks = read_midi(entry.midi_path)
    for t in entry.instrument_track_indices:
        if not 0 <= t < len(tracks):
            raise IndexError(f"track {t} out of range, file has {len(tracks)} tracks")
    barcodes = [analyze_track(tracks[t], config, t).barcodes for t in entry.instrument_track_indices]
    return work_descriptor(barcodes, entry.work_id)


def run_corpus(manifest: CorpusManifest, config: RunConfig = RunConfig()) -> CorpusResult:
    """Analyse every work in manifest order; failures are collected, not raised."""
    result = CorpusResult(config)
    for entry in manifest.works:
        try:
            if not entry.midi_path.is_file():
                raise FileNotFoundError(f"MIDI file not found: {entry.midi_path}")
            desc = analyze_work(entry, config)
        except (OSError, ValueError, IndexError) as exc:
            io = isinstance(exc, (OSError, IndexError, MidiParseError))
            log.error("%s: %s", entry.work_id, exc)
            result.failures.append(WorkFailure(entry.work_id, str(exc), io))
            continue
        result.works.append(entry)
        result.descriptors.append(desc)
    return result


def _fmt(x: float) -> str:
    return repr(float(x))


def write_outputs(result: CorpusResult, out_dir: str | Path, svg_dir: str | Path | None = None) -> dict[str, Path]:
    """Write descriptors.csv, projection.csv, dispersion.json (and SVGs).

    The projection is skipped, with a warning, when fewer than three works
    succeeded or the corpus has no variance.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = {}
    cfg = result.config.to_dict()

    p = out_dir / "descriptors.csv"
    with p.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(("work_id",) + FEATURE_NAMES)
        for d in result.descriptors:
            w.writerow([d.work_id] + [_fmt(x) for x in d.values])
    written["descriptors"] = p

    projection = None
    if len(result.descriptors) >= 3:
        try:
            projection = pca_2d(result.descriptors, zscore=result.config.zscore_pca)
        except ValueError as exc:
            log.warning("projection skipped: %s", exc)
    else:
        log.warning("projection skipped: PCA needs at least 3 works, have %d", len(result.descriptors))
    if projection is not None:
        p = out_dir / "projection.csv"
        with p.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\r\n")
            w.writerow(("work_id", "pc1", "pc2"))
            for d, (x, y) in zip(result.descriptors, projection.coords):
                w.writerow((d.work_id, _fmt(x), _fmt(y)))
        written["projection"] = p

    disp = result.dispersions()
    report = {
        "config": cfg,
        "variant": result.config.dispersion_variant,
        "space": f"R^{len(FEATURE_NAMES)} descriptors",
        "n_works": len(result.descriptors),
        "dispersion": disp,
        "projection": None
        if projection is None
        else {
            "explained_variance": projection.explained_variance.tolist(),
            "total_variance": projection.total_variance,
            "zscore": result.config.zscore_pca,
        },
        "failures": [{"work_id": f.work_id, "message": f.message} for f in result.failures],
    }
    p = out_dir / "dispersion.json"
    p.write_text(json.dumps(report, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    written["dispersion"] = p

    if svg_dir is not None:
        from .plotting import plot_dispersion, plot_projection

        svg_dir = Path(svg_dir)
        if projection is not None:
            written["projection_svg"] = svg_dir / "projection.svg"
            plot_projection(
                projection.coords,
                [d.work_id for d in result.descriptors],
                [w.composer for w in result.works],
                projection.explained_variance,
                path=written["projection_svg"],
            )
        for kind in ("by_composer", "by_group"):
            vals = {g: s for g, s in disp[kind].items() if s is not None}
            if vals:
                written[f"dispersion_{kind}_svg"] = svg_dir / f"dispersion_{kind}.svg"
                plot_dispersion(vals, kind.replace("_", " "), path=written[f"dispersion_{kind}_svg"])
    return written
