"""Regenerate src/primezeta/data/stieltjes.txt from the Euler-Maclaurin oracle.

Usage: python scripts/generate_stieltjes.py [--order 20]
Prints the SHA-256 to pin in primezeta.zeta.STIELTJES_SHA256.
"""

import argparse
from pathlib import Path

from primezeta.precision import format_decimal
from primezeta.zeta import STIELTJES_DIGITS, file_sha256, stieltjes_oracle

OUT = Path(__file__).resolve().parents[1] / "src" / "primezeta" / "data" / "stieltjes.txt"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--order", type=int, default=20)
    args = ap.parse_args()
    lines = []
    for n in range(args.order + 1):
        value = stieltjes_oracle(n, STIELTJES_DIGITS + 15)
        lines.append(f"{n} {format_decimal(value, STIELTJES_DIGITS)}")
    OUT.write_text("\n".join(lines) + "\n")
    print(file_sha256(OUT))


if __name__ == "__main__":
    main()
