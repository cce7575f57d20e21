import json
import re
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from annolattice import FormalContext, build_lattice, build_report
from annolattice.dot import RenderOptions, render_dot
from annolattice.errors import InputError
from annolattice.formats import (
    format_percent,
    lattice_from_json,
    lattice_to_json,
    report_to_dict,
    report_to_json,
    report_to_markdown,
    round_half_up,
)


@pytest.fixture(scope="module")
def babel_report(babel_lattice, babel, t8, babel_log):
    return build_report(babel_lattice, babel, t8, babel_log)


class TestRounding:
    @pytest.mark.parametrize(
        "count, total, text",
        [(2, 75, "3%"), (5, 75, "7%"), (19, 75, "25%"), (4, 75, "5%"), (3, 75, "4%"),
         (1, 75, "1%"), (1, 8, "13%"), (1, 200, "1%"), (0, 0, "0%"), (3, 3, "100%")],
    )
    def test_format_percent(self, count, total, text):
        assert format_percent(count, total) == text

    @given(st.integers(0, 10_000), st.integers(1, 10_000))
    def test_half_up_exact(self, count, total):
        count = min(count, total)
        r = round_half_up(Fraction(100 * count, total))
        # nearest integer, halves upward, checked in integer arithmetic
        assert 2 * (100 * count) >= (2 * r - 1) * total
        assert 2 * (100 * count) < (2 * r + 1) * total


class TestLatticeJson:
    def test_round_trip(self, f4_lattice, babel_lattice, small_ctx):
        for lat in (f4_lattice, babel_lattice, build_lattice(small_ctx)):
            again = lattice_from_json(lattice_to_json(lat))
            assert again == lat
            assert lattice_to_json(again) == lattice_to_json(lat)

    def test_percent_is_exact(self, babel_lattice):
        doc = json.loads(lattice_to_json(babel_lattice))
        assert doc["concepts"][0]["percent"] == {"numerator": 100, "denominator": 1}

    def test_rejects_other_documents(self):
        with pytest.raises(InputError):
            lattice_from_json('{"format": "x"}')
        with pytest.raises(InputError):
            lattice_from_json("{not json")


class TestDot:
    def test_f4_counts(self, f4_lattice):
        text = render_dot(f4_lattice)
        assert len(re.findall(r"^  c\d+ \[", text, re.M)) == 11
        assert len(re.findall(r"->", text)) == len(f4_lattice.covers)
        assert "rankdir=BT" in text

    def test_single_concept(self):
        lat = build_lattice(FormalContext.from_sets(["o"], ["a"], [{"a"}]))
        text = render_dot(lat)
        assert len(re.findall(r"^  c\d+ \[", text, re.M)) == 1
        assert "->" not in text

    def test_unused_highlight(self, babel_lattice, babel_report):
        text = render_dot(babel_lattice, babel_report, RenderOptions(highlight={"unused"}))
        bottom = next(l for l in text.splitlines() if l.startswith(f"  c{babel_lattice.bottom_index} "))
        assert 'class="unused"' in bottom
        for name in ("Future", "Narrator", "Other", "Devil", "Authorities"):
            assert name in bottom
        assert text.count("class=") == 1

    def test_no_report_no_highlight(self, babel_lattice):
        assert "class=" not in render_dot(babel_lattice)

    def test_bad_highlight(self):
        with pytest.raises(ValueError):
            RenderOptions(highlight={"loud"})

    def test_deterministic(self, babel_lattice, babel_report):
        assert render_dot(babel_lattice, babel_report) == render_dot(babel_lattice, babel_report)


class TestReportDocuments:
    def test_markdown_lines(self, babel_report):
        md = report_to_markdown(babel_report)
        found = {}
        for line in md.splitlines():
            m = re.match(r"- (.+?) — (\d+/75 notes \(\d+%\))(.*)", line)
            if m:
                found[frozenset(m.group(1).split(" + "))] = m.group(2) + m.group(3)
        expected = {
            ("Authors",): "2/75 notes (3%)",
            ("Citations",): "5/75 notes (7%)",
            ("Word Meanings",): "19/75 notes (25%)",
            ("Library", "Universe"): "4/75 notes (5%)",
            ("Word Meanings", "Library", "Universe"): "3/75 notes (4%)",
            ("Word Meanings", "Universe"): "1/75 notes (1%)",
            ("Books", "Past"): "1/75 notes (1%)",
            ("Library", "Present"): "3/75 notes (4%); all by s1",
        }
        for names, usage in expected.items():
            assert found[frozenset(names)].startswith(usage), names

    def test_markdown_god(self, babel_report, babel_lattice):
        md = report_to_markdown(babel_report)
        i = babel_lattice.attribute_concept("God")
        row = next(l for l in md.splitlines() if l.startswith(f"| {i} |"))
        assert "4/75 notes (5%)" in row

    def test_json_report(self, babel_report):
        doc = json.loads(report_to_json(babel_report))
        assert doc["activity"]["objects"] == 75
        assert doc == report_to_dict(babel_report)
        for f in doc["findings"]:
            assert f["count"] == len(f["supporting_extent"])
