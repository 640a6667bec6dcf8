"""
Code file format

    # free-form comment lines start with '#'
    # claimed_d: 4           (optional, read back into LinearCode.claimed_d)
    q n k [modulus]
    k lines of n whitespace-separated lowercase hex symbols in [0, q)

The modulus (hex) is written only when it differs from the default modulus
of GF(q).
"""
import logging
import sys
from pathlib import Path
from typing import List, Optional, TextIO, Union

import numpy as np

from src.galois import MAX_M, default_modulus, field_make
from src.gf2la import BitMatrix, FqMatrix, rank
from src.codes import LinearCode
from src.helper.exceptions import CodeFileError, FieldError

logger = logging.getLogger(__name__)

CLAIMED_D_TAG = "claimed_d:"


def parse_code(text: str, source: str = "<string>") -> LinearCode:
    """Parse a code file into a LinearCode; errors carry the 1-based line number"""
    header = None
    header_line = 0
    claimed_d: Optional[int] = None
    label = ""
    rows: List[List[int]] = []
    spec = None

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith(CLAIMED_D_TAG):
                try:
                    claimed_d = int(body[len(CLAIMED_D_TAG):].strip())
                except ValueError:
                    raise CodeFileError(f"bad claimed_d comment {body!r}", number)
            elif body.startswith("label:"):
                label = body[len("label:"):].strip()
            continue

        tokens = line.split()
        if header is None:
            if len(tokens) not in (3, 4):
                raise CodeFileError(f"header must be 'q n k [modulus]', got {line!r}", number)
            try:
                q, n, k = (int(tok) for tok in tokens[:3])
            except ValueError:
                raise CodeFileError(f"header values must be decimal integers: {line!r}", number)
            if q < 2 or q & (q - 1) or q.bit_length() - 1 > MAX_M:
                raise CodeFileError(f"field size q={q} is not a power of two up to 2^{MAX_M}", number)
            if n < 1 or not 0 <= k <= n:
                raise CodeFileError(f"need n >= 1 and 0 <= k <= n, got n={n}, k={k}", number)
            m = q.bit_length() - 1
            try:
                modulus = int(tokens[3], 16) if len(tokens) == 4 else None
                spec = field_make(m, modulus)
            except (ValueError, FieldError) as e:
                raise CodeFileError(f"bad modulus: {e}", number)
            header = (q, n, k)
            header_line = number
            continue

        q, n, k = header
        if len(rows) == k:
            raise CodeFileError(f"more than k={k} rows", number)
        if len(tokens) != n:
            raise CodeFileError(f"expected {n} symbols, got {len(tokens)}", number)
        row = []
        for tok in tokens:
            try:
                value = int(tok, 16)
            except ValueError:
                raise CodeFileError(f"not a hex symbol: {tok!r}", number)
            if not 0 <= value < q:
                raise CodeFileError(f"symbol {tok} outside [0, {q})", number)
            row.append(value)
        rows.append(row)

    if header is None:
        raise CodeFileError(f"{source}: missing header line")
    q, n, k = header
    if len(rows) != k:
        raise CodeFileError(f"{source}: expected {k} rows, found {len(rows)}", header_line)

    entries = np.array(rows, dtype=np.int64).reshape(k, n)
    gen = BitMatrix.from_dense(entries) if spec.m == 1 else FqMatrix(spec, entries)
    if rank(gen) != k:
        raise CodeFileError(f"{source}: generator rows are dependent (rank {rank(gen)} < k={k})", header_line)
    code = LinearCode(spec=spec, n=n, k=k, gen=gen, claimed_d=claimed_d, label=label)
    logger.debug(f"Parsed {code} from {source}")
    return code


def emit_code(code: LinearCode) -> str:
    """Serialise a LinearCode; parse_code(emit_code(c)) reproduces the matrix"""
    spec = code.spec
    lines = []
    if code.label:
        lines.append(f"# label: {code.label}")
    if code.claimed_d is not None:
        lines.append(f"# {CLAIMED_D_TAG} {code.claimed_d}")
    header = f"{spec.q} {code.n} {code.k}"
    if spec.modulus != default_modulus(spec.m):
        header += f" {spec.modulus:x}"
    lines.append(header)
    entries = code.gen.to_dense() if isinstance(code.gen, BitMatrix) else code.gen.entries
    for row in entries:
        lines.append(" ".join(format(int(s), "x") for s in row))
    return "\n".join(lines) + "\n"


def read_code(path: Union[str, Path], stdin: Optional[TextIO] = None) -> LinearCode:
    """Read a code file; '-' reads standard input"""
    name = "<stdin>" if str(path) == "-" else str(path)
    try:
        if str(path) == "-":
            text = (stdin or sys.stdin).read()
        else:
            p = Path(path)
            if not p.is_file():
                raise CodeFileError(f"code file not found: {p}")
            text = p.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise CodeFileError(f"{name} is not UTF-8 text (byte {e.start})") from e
    return parse_code(text, name)


def write_code(code: LinearCode, path: Union[str, Path]) -> None:
    Path(path).write_text(emit_code(code), encoding="utf-8")
    logger.info(f"✅ Wrote {code} to {path}")
