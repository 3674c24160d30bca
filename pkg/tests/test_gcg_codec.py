import numpy as np
import pytest

from coloring import from_rows, monochromatic
from constructions import pentagon_base
from gcg_codec import GcgFormatError, decode_gcg, encode_gcg, read_comments


def test_smallest_graph():
    g = decode_gcg(b"2 1\n1\n")
    assert g.n == 2
    assert g.k == 1
    assert g.color(0, 1) == 1


def test_single_vertex():
    g = decode_gcg("1 3\n")
    assert g.n == 1
    assert g.k == 3
    assert encode_gcg(g) == b"1 3\n"


def test_canonical_text_round_trips():
    text = b"4 3\n1 2 3\n2 1\n3\n"
    assert encode_gcg(decode_gcg(text)) == text


def test_comments_and_blank_lines():
    text = "# made by hand\n\n3 2\n\n1 2\n# inline\n1\n"
    g = decode_gcg(text)
    assert g == from_rows([[1, 2], [1]], k=2)
    assert read_comments(text) == ['made by hand']


def test_encode_comments_have_no_trailing_space():
    data = encode_gcg(monochromatic(2), ['seed 7', ''])
    assert data == b"# seed 7\n#\n2 1\n1\n"
    assert all(line == line.rstrip() for line in data.decode().split('\n'))


def test_pentagon_file_has_two_five_cycles():
    g = decode_gcg(encode_gcg(pentagon_base(1, 2)))
    assert g.n == 5
    for color in (1, 2):
        degrees = g.color_degrees(color)
        assert np.all(degrees == 2)
        # connected 2-regular on 5 vertices is C5
        reached, frontier = {0}, [0]
        while frontier:
            u = frontier.pop()
            for v in range(5):
                if v != u and g.color(u, v) == color and v not in reached:
                    reached.add(v)
                    frontier.append(v)
        assert reached == set(range(5))


@pytest.mark.parametrize('text, line, message', [
    ("", 1, "missing header"),
    ("3\n1 1\n1\n", 1, "header"),
    ("x 2\n", 1, "header"),
    ("0 2\n", 1, None),
    ("3 2\n1 1\n", 3, "rows"),
    ("3 2\n1 1\n1\n1\n", 4, None),
    ("3 2\n1 3\n1\n", 2, "outside"),
    ("3 2\n1 0\n1\n", 2, "outside"),
    ("3 2\n1 1 1\n1\n", 2, "duplicate"),
    ("3 2\n1\n1\n", 2, None),
    ("3 2\n1 a\n1\n", 2, None),
    ("2 40000\n40000\n", 1, "at most"),
    ("# wide\n2 32768\n1\n", 2, "colours"),
])
def test_errors_carry_line_numbers(text, line, message):
    with pytest.raises(GcgFormatError) as info:
        decode_gcg(text)
    assert info.value.line == line
    if message:
        assert message in str(info.value)


def test_rejects_non_utf8():
    with pytest.raises(GcgFormatError):
        decode_gcg(b"\xff\xfe 2\n")
