#!/usr/bin/env python3
"""Convert the digit JSON files shipped in the npm ``mnist`` package to IDX.

The npm package (https://www.npmjs.com/package/mnist, v1.1.0) bundles 10000
MNIST digits as ``src/digits/<d>.json`` with 784 gray values per image scaled
to [0, 1] and rounded to three decimals. One gray step is 1/255 > 0.001, so
``round(v * 255)`` recovers the original byte exactly.

Usage:
    tools/mnist_json_to_idx.py <package-dir> <out-dir>

Writes ``t10k-images-idx3-ubyte`` and ``t10k-labels-idx1-ubyte`` into
<out-dir>, images ordered by digit then by position inside each JSON file.
"""

import json
import pathlib
import struct
import sys

ROWS = COLS = 28


def main(argv):
    if len(argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    src = pathlib.Path(argv[1]) / "src" / "digits"
    out = pathlib.Path(argv[2])
    out.mkdir(parents=True, exist_ok=True)

    pixels = bytearray()
    labels = bytearray()
    for digit in range(10):
        data = json.loads((src / f"{digit}.json").read_text())["data"]
        if len(data) % (ROWS * COLS):
            raise SystemExit(f"{digit}.json: length {len(data)} not a multiple of 784")
        for value in data:
            byte = int(round(float(value) * 255.0))
            if not 0 <= byte <= 255:
                raise SystemExit(f"{digit}.json: value {value} out of range")
            pixels.append(byte)
        labels.extend([digit] * (len(data) // (ROWS * COLS)))

    count = len(labels)
    (out / "t10k-images-idx3-ubyte").write_bytes(
        struct.pack(">IIII", 0x803, count, ROWS, COLS) + bytes(pixels))
    (out / "t10k-labels-idx1-ubyte").write_bytes(
        struct.pack(">II", 0x801, count) + bytes(labels))
    print(f"wrote {count} images to {out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
