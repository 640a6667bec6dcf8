import io

import numpy as np
import pytest

from src.code_file import emit_code, parse_code, read_code, write_code
from src.codes import rm_code, rs_code
from src.galois import field_make
from src.helper.exceptions import CodeFileError


HAMMING = """\
# extended Hamming code
# label: RM(1,3)
# claimed_d: 4
2 8 4
1 1 1 1 1 1 1 1
0 0 0 0 1 1 1 1
0 0 1 1 0 0 1 1
0 1 0 1 0 1 0 1
"""


def test_parse_binary_code():
    code = parse_code(HAMMING)
    assert (code.n, code.k, code.claimed_d, code.label) == (8, 4, 4, "RM(1,3)")
    assert code.is_binary


def test_emit_reproduces_the_generator(gf16):
    code = rs_code(gf16, 6, 3)
    text = emit_code(code)
    assert text.splitlines()[2] == "16 6 3"
    parsed = parse_code(text)
    assert np.array_equal(parsed.gen.entries, code.gen.entries)
    assert parsed.spec == gf16


def test_non_default_modulus_is_written():
    spec = field_make(4, 0x19)
    code = rs_code(spec, 4, 2)
    header = [line for line in emit_code(code).splitlines() if not line.startswith("#")][0]
    assert header == "16 4 2 19"
    assert parse_code(emit_code(code)).spec.modulus == 0x19


def test_hex_symbols_are_lowercase(gf16):
    text = emit_code(rs_code(gf16, 16, 2))
    rows = [line for line in text.splitlines() if not line.startswith("#")][1:]
    assert any("f" in row.split() for row in rows)
    assert all(row == row.lower() for row in rows)


@pytest.mark.parametrize("text, line", [
    ("2 4\n", 1),
    ("3 4 1\n1 0 1 0\n", 1),
    ("4 4 1 5\n1 0 1 0\n", 1),
    ("2 4 1\n1 0 1\n", 2),
    ("4 3 1\n1 4 2\n", 2),
    ("2 3 1\n1 0 1\n0 1 1\n", 3),
    ("# only a comment\n2 3 2\n1 0 1\n", 2),
    ("2 3 2\n1 0 1\n1 0 1\n", 1),
])
def test_malformed_files_report_line(text, line):
    with pytest.raises(CodeFileError) as excinfo:
        parse_code(text)
    assert excinfo.value.line == line


def test_missing_header():
    with pytest.raises(CodeFileError):
        parse_code("# nothing here\n")


def test_read_from_stdin_and_file(tmp_path):
    code = read_code("-", stdin=io.StringIO(HAMMING))
    assert code.k == 4
    path = tmp_path / "rm.code"
    write_code(rm_code(2, 4), path)
    assert read_code(path).params == rm_code(2, 4).params
    with pytest.raises(CodeFileError):
        read_code(tmp_path / "missing.code")
