"""Synthetic MIDI fixtures.

``python tests/fixtures.py`` rewrites the files under ``tests/data/``.
"""

from __future__ import annotations

import io
from pathlib import Path

import mido

DATA = Path(__file__).parent / "data"
TPB = 480


def midi_bytes(tracks, tempi=((0, 120.0),), tpb=TPB, conductor=True, fmt=1):
    """Encode note tracks as a Standard MIDI File.

    ``tracks`` is a list of note lists ``(start_tick, length_ticks, pitch)``;
    ``tempi`` a list of ``(tick, bpm)``. With ``conductor`` the tempo events
    go in a separate first track (so note track ``k`` is file track ``k+1``).
    """
    mid = mido.MidiFile(type=fmt, ticks_per_beat=tpb)
    tempo_events = [(t, mido.MetaMessage("set_tempo", tempo=mido.bpm2tempo(bpm))) for t, bpm in tempi]
    track_events = []
    for notes in tracks:
        ev = []
        for start, length, pitch in notes:
            ev.append((start + length, 0, mido.Message("note_off", note=pitch, velocity=0)))
            ev.append((start, 1, mido.Message("note_on", note=pitch, velocity=80)))
        track_events.append(ev)
    if conductor:
        track_events.insert(0, [(t, 0, m) for t, m in tempo_events])
    else:
        track_events[0] = [(t, -1, m) for t, m in tempo_events] + track_events[0]
    for ev in track_events:
        ev.sort(key=lambda e: (e[0], e[1]))
        tr = mido.MidiTrack()
        now = 0
        for tick, _, msg in ev:
            tr.append(msg.copy(time=tick - now))
            now = tick
        tr.append(mido.MetaMessage("end_of_track", time=0))
        mid.tracks.append(tr)
    buf = io.BytesIO()
    mid.save(file=buf)
    return buf.getvalue()


def melody(pitches, beat=TPB, start=0):
    """Legato monophonic line, one beat per pitch."""
    return [(start + k * beat, beat, p) for k, p in enumerate(pitches)]


# four monophonic parts over small pitch-class sets, so brute-force oracles stay cheap
QUARTET = [
    melody([72, 74, 76, 74, 72, 76, 76, 72, 74, 72]),  # C D E
    [(0, 240, 67), (240, 720, 64), (960, 480, 67), (1440, 240, 60), (1680, 960, 64)],  # G E G C E
    melody([60, 65, 60, 65, 65, 60, 57]),  # C F A
    [(0, 960, 48), (960, 480, 43), (1440, 480, 48), (2400, 480, 43), (2880, 960, 48)],  # C G with a rest
]

QUARTET_B = [
    melody([72, 71, 72, 74, 72]),
    melody([67, 69, 67, 65, 67]),
    melody([64, 64, 65, 64]),
    melody([48, 53, 48, 43]),
]

QUARTET_C = [
    melody([76, 77, 79, 77, 76, 74]),
    melody([72, 72, 71, 72]),
    [(0, 480, 67), (720, 480, 69), (1440, 960, 67)],
    melody([48, 55, 48, 55, 53]),
]


def write_all(target: Path = DATA) -> None:
    target.mkdir(parents=True, exist_ok=True)
    (target / "quartet.mid").write_bytes(midi_bytes(QUARTET))
    (target / "quartet_b.mid").write_bytes(midi_bytes(QUARTET_B, tempi=((0, 96.0),)))
    (target / "quartet_c.mid").write_bytes(midi_bytes(QUARTET_C, tempi=((0, 132.0), (1440, 66.0))))
    (target / "manifest.csv").write_text(
        "work_id,composer,groups,midi_path,tracks\n"
        "syn_a,Alpha,minuet,quartet.mid,1;2;3;4\n"
        "syn_b,Alpha,adagio,quartet_b.mid,1;2;3;4\n"
        "syn_c,Beta,minuet,quartet_c.mid,1;2;3;4\n",
        encoding="utf-8",
    )


if __name__ == "__main__":
    write_all()
