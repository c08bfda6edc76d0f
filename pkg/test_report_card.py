from PIL import Image

from report import ClassificationReport, Verdict
from report_card import MAX_CELLS, render_report, witness_matrix


def test_saturation_witness_is_drawn_with_its_combination():
    report = ClassificationReport(Verdict.NOT_SPECIAL, "inner-type saturation",
                                  {"matrix": [[2]], "invariant_factors": [2],
                                   "primitive_vector": [1], "divisor": 2, "combination": [2]})
    matrix, highlight = witness_matrix(report)
    assert matrix == [[2], [2]] and highlight == 1


def test_section_is_drawn_for_tori():
    report = ClassificationReport(Verdict.SPECIAL, "torus invertibility",
                                  {"invertible": True, "cover_rank": 6, "section": [[1, 0, 0, 0, 0, 0]]})
    assert witness_matrix(report) == ([[1, 0, 0, 0, 0, 0]], None)
    assert witness_matrix(ClassificationReport(Verdict.SPECIAL, "semisimple split factors")) == (None, None)


def test_render_produces_a_png():
    report = ClassificationReport(Verdict.NOT_SPECIAL, "inner-type saturation",
                                  {"matrix": [[2, 0, 1], [0, 3, 3]], "combination": [2, 3, 4]})
    img = Image.open(render_report(report, "inner: SL_1(A) of degree 4"))
    assert img.format == "PNG"
    assert img.width >= 420
    assert img.getpixel((20, 20)) != img.getpixel((img.width - 2, img.height - 2))


def test_large_witnesses_are_elided():
    matrix = [[i + j for j in range(40)] for i in range(40)]
    report = ClassificationReport(Verdict.SPECIAL, "torus invertibility", {"section": matrix})
    img = Image.open(render_report(report))
    assert img.width < 40 * 44
    assert img.height < 40 * 30
    assert MAX_CELLS < 40
