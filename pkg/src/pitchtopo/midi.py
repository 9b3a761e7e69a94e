"""Standard MIDI File reading into timed note events.

Byte-level chunk and event decoding is delegated to :mod:`mido`; this
module pairs note-on/note-off events and converts ticks to seconds through
the file's tempo map.
"""

from __future__ import annotations

import bisect
import io
import warnings
from collections import defaultdict, deque
from dataclasses import dataclass
from pathlib import Path

import mido

__all__ = ["NoteEvent", "MidiParseError", "TempoMap", "parse_midi", "read_midi"]

DEFAULT_TEMPO = 500_000  # microseconds per quarter note (120 bpm)


class MidiParseError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class NoteEvent:
    onset: float
    duration: float
    pitch: int
    track: int = 0

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError(f"note duration must be positive, got {self.duration}")
        if self.onset < 0:
            raise ValueError(f"note onset must be non-negative, got {self.onset}")
        if not 0 <= self.pitch <= 127:
            raise ValueError(f"MIDI pitch out of range: {self.pitch}")

    @property
    def offset(self) -> float:
        return self.onset + self.duration

    @property
    def pitch_class(self) -> int:
        return self.pitch % 12


class TempoMap:
    """Piecewise-constant tempo; converts absolute ticks to seconds."""

    def __init__(self, ticks_per_beat: int, changes: list[tuple[int, int]] = ()):
        self.ticks_per_beat = ticks_per_beat
        # later events at the same tick win
        merged: dict[int, int] = {0: DEFAULT_TEMPO}
        for tick, tempo in sorted(changes, key=lambda c: c[0]):
            merged[tick] = tempo
        self._ticks = sorted(merged)
        self._tempi = [merged[t] for t in self._ticks]
        self._seconds = [0.0]
        for k in range(1, len(self._ticks)):
            span = self._ticks[k] - self._ticks[k - 1]
            self._seconds.append(self._seconds[-1] + self._tick_seconds(span, self._tempi[k - 1]))

    def _tick_seconds(self, ticks: int, tempo: int) -> float:
        return ticks * tempo * 1e-6 / self.ticks_per_beat

    def seconds(self, tick: int) -> float:
        k = bisect.bisect_right(self._ticks, tick) - 1
        return self._seconds[k] + self._tick_seconds(tick - self._ticks[k], self._tempi[k])


class _SmpteMap:
    def __init__(self, fps: float, ticks_per_frame: int):
        self.rate = fps * ticks_per_frame

    def seconds(self, tick: int) -> float:
        return tick / self.rate


def _timing(mid: mido.MidiFile, raw_division: int):
    if raw_division & 0x8000:
        fps = 256 - (raw_division >> 8)
        return _SmpteMap(29.97 if fps == 29 else float(fps), raw_division & 0xFF)
    changes = []
    # format 1 keeps tempo in the first track by convention; honour any track
    for track in mid.tracks:
        tick = 0
        for msg in track:
            tick += msg.time
            if msg.type == "set_tempo":
                changes.append((tick, msg.tempo))
    return TempoMap(mid.ticks_per_beat, changes)


def parse_midi(data: bytes) -> list[list[NoteEvent]]:
    """Decode a format 0 or 1 Standard MIDI File into per-track note lists.

    Tracks keep file order (empty tracks included) and each list is sorted
    by ``(onset, pitch)``. A note-on with velocity 0 counts as a note-off.
    Overlapping notes of the same pitch and channel are closed first in,
    first out. Notes still sounding at the end of a track are closed there,
    with a warning.
    """
    if len(data) < 14 or data[:4] != b"MThd":
        raise MidiParseError("not a Standard MIDI File (missing MThd header)")
    try:
        mid = mido.MidiFile(file=io.BytesIO(data))
    except (OSError, EOFError, ValueError, KeyError, IndexError) as exc:
        raise MidiParseError(f"malformed MIDI data: {exc}") from exc
    if mid.type == 2:
        raise MidiParseError("SMF format 2 is not supported")
    timing = _timing(mid, int.from_bytes(data[12:14], "big"))

    tracks = []
    for t_idx, track in enumerate(mid.tracks):
        sounding: dict[tuple[int, int], deque[int]] = defaultdict(deque)
        spans: list[tuple[int, int, int]] = []
        tick = 0
        for msg in track:
            tick += msg.time
            if msg.type == "note_on" and msg.velocity > 0:
                sounding[(msg.channel, msg.note)].append(tick)
            elif msg.type in ("note_off", "note_on"):
                queue = sounding.get((msg.channel, msg.note))
                if queue:
                    spans.append((queue.popleft(), tick, msg.note))
        dangling = [(start, tick, key[1]) for key, q in sounding.items() for start in q]
        if dangling:
            warnings.warn(f"track {t_idx}: {len(dangling)} note(s) without note-off, closed at track end")
            spans.extend(dangling)

        notes = []
        dropped = 0
        for start, end, pitch in spans:
            onset = timing.seconds(start)
            duration = timing.seconds(end) - onset
            if duration <= 0:
                dropped += 1
                continue
            notes.append(NoteEvent(onset, duration, pitch, t_idx))
        if dropped:
            warnings.warn(f"track {t_idx}: dropped {dropped} zero-length note(s)")
        notes.sort(key=lambda n: (n.onset, n.pitch))
        tracks.append(notes)
    return tracks


def read_midi(path: str | Path) -> list[list[NoteEvent]]:
    return parse_midi(Path(path).read_bytes())
