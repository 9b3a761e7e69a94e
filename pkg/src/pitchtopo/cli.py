"""Command-line entry point: ``pitchtopo {transitions,analyze,corpus}``.

Exit codes: 0 success, 1 analysis failure, 2 I/O or parse failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from .analysis import work_descriptor
from .corpus import ManifestError, load_manifest, run_corpus, write_outputs
from .midi import MidiParseError, read_midi
from .pipeline import RunConfig, TrackAnalysis, analyze_track, matrix_barcodes
from .transitions import PITCH_CLASS_NAMES, RestMode, TransitionMatrix, transition_matrix

log = logging.getLogger("pitchtopo")

EXIT_OK, EXIT_ANALYSIS, EXIT_IO = 0, 1, 2


class CLIError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def format_matrix_csv(M) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(("from\\to",) + PITCH_CLASS_NAMES)
    for name, row in zip(PITCH_CLASS_NAMES, np.asarray(M)):
        w.writerow([name] + [f"{x:.15g}" for x in row])
    return buf.getvalue()


def load_matrix_csv(path: str | Path) -> np.ndarray:
    """Read a square matrix from CSV, with or without a header row and label column."""
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]

    def numeric(cell):
        try:
            float(cell)
            return True
        except ValueError:
            return False

    if rows and not all(numeric(c) for c in rows[0]):
        rows = rows[1:]
    rows = [r[1:] if r and not numeric(r[0]) else r for r in rows]
    try:
        M = np.array([[float(c) for c in r] for r in rows])
    except ValueError as exc:
        raise ValueError(f"{path}: non-numeric matrix entry") from exc
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{path}: matrix is not square (shape {M.shape})")
    return M


def _config(args) -> RunConfig:
    return RunConfig(
        rest_mode=RestMode(args.rest_mode),
        accent_tau=args.tau,
        accent_index=args.accent_index,
        use_raw_durations=args.raw_durations,
        zscore_pca=getattr(args, "zscore", False),
        dispersion_variant=getattr(args, "dispersion_variant", "norm"),
    )


def _read_tracks(path):
    try:
        return read_midi(path)
    except FileNotFoundError as exc:
        raise CLIError(f"{path}: no such file", EXIT_IO) from exc
    except (OSError, MidiParseError) as exc:
        raise CLIError(f"{path}: {exc}", EXIT_IO) from exc


def _write(text: str, output: str | None):
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(output).parent.mkdir(parents=True, exist_ok=True)
        Path(output).write_text(text, encoding="utf-8")


def cmd_transitions(args) -> int:
    config = _config(args)
    tracks = _read_tracks(args.midi)
    if args.track is None:
        track = next((i for i, t in enumerate(tracks) if t), 0)
    else:
        track = args.track
    if not 0 <= track < len(tracks):
        raise CLIError(f"{args.midi}: track {track} out of range ({len(tracks)} tracks)", EXIT_IO)
    M = transition_matrix(
        tracks[track],
        config.rest_mode,
        tau=config.accent_tau,
        accent_index=config.accent_index,
        raw_durations=config.use_raw_durations,
    )
    _write(format_matrix_csv(M.entries), args.output)
    return EXIT_OK


def cmd_analyze(args) -> int:
    config = _config(args)
    src = Path(args.input)
    if src.suffix.lower() == ".csv":
        try:
            M = load_matrix_csv(src)
        except FileNotFoundError as exc:
            raise CLIError(f"{src}: no such file", EXIT_IO) from exc
        except (OSError, ValueError) as exc:
            raise CLIError(str(exc), EXIT_IO) from exc
        if M.shape != (12, 12):
            raise CLIError(f"{src}: expected a 12x12 transition matrix, got {M.shape}", EXIT_IO)
        analyses = [TrackAnalysis(0, 0, TransitionMatrix(M, config.rest_mode), matrix_barcodes(M))]
    else:
        tracks = _read_tracks(src)
        selected = args.tracks if args.tracks else [i for i, t in enumerate(tracks) if t]
        for t in selected:
            if not 0 <= t < len(tracks):
                raise CLIError(f"{src}: track {t} out of range ({len(tracks)} tracks)", EXIT_IO)
        analyses = [analyze_track(tracks[t], config, t) for t in selected]

    report = {
        "source": src.name,
        "config": config.to_dict(),
        "tracks": [a.to_dict() for a in analyses],
    }
    if len(analyses) == 4:
        report["descriptor"] = work_descriptor([a.barcodes for a in analyses], src.stem).as_dict()
    _write(json.dumps(report, indent=2) + "\n", args.output)

    if args.svg_dir:
        from .plotting import plot_barcode

        for a in analyses:
            for bc in a.barcodes:
                plot_barcode(
                    bc,
                    f"{src.stem} track {a.track}: H{bc.dimension}",
                    Path(args.svg_dir) / f"{src.stem}_track{a.track}_dim{bc.dimension}.svg",
                )
    return EXIT_OK


def cmd_corpus(args) -> int:
    config = _config(args)
    try:
        manifest = load_manifest(args.manifest)
        if args.exclude:
            manifest = manifest.without(args.exclude)
    except FileNotFoundError as exc:
        raise CLIError(f"{args.manifest}: no such file", EXIT_IO) from exc
    except (OSError, ManifestError) as exc:
        raise CLIError(str(exc), EXIT_IO) from exc

    result = run_corpus(manifest, config)
    for f in result.failures:
        print(f"error: {f.work_id}: {f.message}", file=sys.stderr)
    write_outputs(result, args.out_dir, args.svg_dir)
    if result.failures and not args.keep_going:
        print(f"{len(result.failures)} of {len(manifest.works)} work(s) failed", file=sys.stderr)
        return EXIT_IO if any(f.io_error for f in result.failures) else EXIT_ANALYSIS
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--rest-mode", choices=[m.value for m in RestMode], default=RestMode.IGNORE.value)
    p.add_argument("--tau", type=float, default=RunConfig.accent_tau, help="durational accent time constant (s)")
    p.add_argument("--accent-index", type=float, default=RunConfig.accent_index)
    p.add_argument("--raw-durations", action="store_true", help="weight transitions by seconds, not accents")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pitchtopo",
        description="Persistent homology of pitch-class transition graphs.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transitions", help="12x12 pitch-class transition matrix of one track as CSV")
    p.add_argument("midi")
    p.add_argument("--track", type=int, default=None, help="track index (default: first track with notes)")
    p.add_argument("-o", "--output", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_transitions)

    p = sub.add_parser("analyze", help="barcodes and statistics per track as JSON")
    p.add_argument("input", help="MIDI file, or a 12x12 matrix as .csv")
    p.add_argument("--tracks", type=int, nargs="+", default=None, help="track indices (default: tracks with notes)")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--svg-dir", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("corpus", help="descriptors, PCA projection and dispersion for a manifest")
    p.add_argument("manifest")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--svg-dir", default=None)
    p.add_argument("--exclude", action="append", default=[], metavar="WORK_ID")
    p.add_argument("--zscore", action="store_true", help="standardise features before PCA")
    p.add_argument("--dispersion-variant", choices=["norm", "rms"], default="norm")
    p.add_argument("--keep-going", action="store_true", help="exit 0 even if some works fail")
    _add_common(p)
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    logging.captureWarnings(True)
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    finally:
        logging.captureWarnings(False)


if __name__ == "__main__":
    sys.exit(main())
