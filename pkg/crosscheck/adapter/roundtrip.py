"""Parse an interchange document with the engine's own reader and print
it back.  The harness compares the output bytes with the input; equality
is the round-trip invariant every exported document must satisfy, and
checking it here means the real parser is exercised rather than a
re-implementation of it.

Usage: roundtrip.py {result|ringtable|matrix} <path>
"""

import sys
from pathlib import Path

from wss.formats import (
    matrix_document,
    parse_matrix,
    parse_result,
    parse_ring_table,
    result_document,
    ring_table_document,
)


def main(argv) -> int:
    if len(argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    kind, path = argv[1], argv[2]
    text = Path(path).read_text()
    if kind == "result":
        sys.stdout.write(result_document(parse_result(text)))
    elif kind == "ringtable":
        sys.stdout.write(ring_table_document(parse_ring_table(text)))
    elif kind == "matrix":
        rows, nrows, ncols = parse_matrix(text)
        sys.stdout.write(matrix_document(rows, nrows, ncols))
    else:
        print(f"unknown document kind {kind!r}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
