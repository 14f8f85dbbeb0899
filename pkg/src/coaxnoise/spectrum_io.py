"""Spectrum CSV serialization.

Format: header exactly "frequency_hz,level,excluded", one record per grid
point, levels at 17 significant digits so a write/read round trip is
bit-identical. LF line endings are emitted; CRLF is accepted on read.
"""
from __future__ import annotations

import io
import os
import tempfile
from pathlib import Path

import numpy as np

from .display import NoiseSpectrum
from .errors import NonMonotonicFrequencyError, SpectrumFormatError

HEADER = "frequency_hz,level,excluded"
SWEEP_HEADER = "length_m,frequency_hz,level"


def write_spectrum_csv(spectrum: NoiseSpectrum, target) -> None:
    """Write a spectrum to a path or text stream."""
    if spectrum.display_level is None:
        raise ValueError("spectrum has no display levels to serialize")
    if hasattr(target, "write"):
        _write_stream(spectrum, target)
        return
    _write_atomic(Path(target), lambda stream: _write_stream(spectrum, stream))


def _write_stream(spectrum: NoiseSpectrum, stream) -> None:
    stream.write(HEADER + "\n")
    for f, level, excl in zip(
        spectrum.frequencies, spectrum.display_level, spectrum.excluded
    ):
        stream.write(f"{f:.17g},{level:.17g},{int(excl)}\n")


def _write_atomic(path: Path, emit) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as stream:
            emit(stream)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_spectrum_csv(source) -> NoiseSpectrum:
    """Read a spectrum from a path or text stream; display levels only."""
    if hasattr(source, "read"):
        return _read_stream(source)
    with open(source, "r", encoding="utf-8", newline="") as stream:
        return _read_stream(stream)


def _read_stream(stream) -> NoiseSpectrum:
    text = stream.read()
    lines = text.replace("\r\n", "\n").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise SpectrumFormatError("empty file")
    if lines[0] != HEADER:
        raise SpectrumFormatError(f"expected header {HEADER!r}, got {lines[0]!r}", row=1)
    if len(lines) == 1:
        raise SpectrumFormatError("no records")
    freqs, levels, excluded = [], [], []
    for row, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 3:
            raise SpectrumFormatError(f"expected 3 fields, got {len(parts)}", row=row)
        try:
            f = float(parts[0])
            level = float(parts[1])
            excl = int(parts[2])
        except ValueError as exc:
            raise SpectrumFormatError(str(exc), row=row) from None
        if excl not in (0, 1):
            raise SpectrumFormatError("excluded flag must be 0 or 1", row=row)
        if freqs and f <= freqs[-1]:
            raise NonMonotonicFrequencyError(
                f"frequency {f:g} does not increase past {freqs[-1]:g}", row=row
            )
        freqs.append(f)
        levels.append(level)
        excluded.append(bool(excl))
    return NoiseSpectrum.from_display(
        np.asarray(freqs), np.asarray(levels), np.asarray(excluded)
    )


def write_sweep_csv(lengths, frequencies, levels, target) -> None:
    """Long-format sweep records (length_m, frequency_hz, level), row-major."""
    lengths = np.asarray(lengths, dtype=float)
    frequencies = np.asarray(frequencies, dtype=float)
    levels = np.asarray(levels, dtype=float)
    if levels.shape != (lengths.size, frequencies.size):
        raise ValueError("levels must have shape (n_lengths, n_frequencies)")

    def emit(stream):
        stream.write(SWEEP_HEADER + "\n")
        for i, length in enumerate(lengths):
            for j, f in enumerate(frequencies):
                stream.write(f"{length:.17g},{f:.17g},{levels[i, j]:.17g}\n")

    if hasattr(target, "write"):
        emit(target)
    else:
        _write_atomic(Path(target), emit)


def spectrum_to_string(spectrum: NoiseSpectrum) -> str:
    buf = io.StringIO()
    write_spectrum_csv(spectrum, buf)
    return buf.getvalue()
