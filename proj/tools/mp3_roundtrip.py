#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The wbe-watermark Authors
"""MP3 encode/decode round trip through libsndfile (LAME + mpg123 inside).

usage: mp3_roundtrip.py IN.wav OUT.wav KBPS

Writes OUT.wav as 16-bit mono PCM after compressing IN.wav to a constant
bit-rate MP3 stream. Suitable as the encoder for `wbe_cli evaluate` with
the default command template.
"""

import os
import sys
import tempfile

import soundfile as sf


def compression_level(kbps: int) -> float:
    # libsndfile maps level 0..1 linearly onto 320..32 kbps for MPEG layer III.
    level = (320.0 - kbps) / 288.0
    return min(max(level, 0.0), 1.0)


def main(argv):
    if len(argv) != 4:
        sys.stderr.write(__doc__)
        return 2
    src, dst, kbps = argv[1], argv[2], int(argv[3])
    data, rate = sf.read(src, dtype="float64")
    fd, mp3 = tempfile.mkstemp(suffix=".mp3")
    os.close(fd)
    try:
        sf.write(mp3, data, rate, format="MP3", subtype="MPEG_LAYER_III",
                 compression_level=compression_level(kbps), bitrate_mode="CONSTANT")
        decoded, decoded_rate = sf.read(mp3, dtype="float64")
    finally:
        os.unlink(mp3)
    sf.write(dst, decoded, decoded_rate, format="WAV", subtype="PCM_16")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
