"""
PNG report cards: verdict badge, criterion, and the witness matrix as a grid.
"""
import io

from PIL import Image, ImageDraw, ImageFont

from report import ClassificationReport, Verdict

CELL_W = 44
CELL_H = 30
RADIUS = 10
PADDING = 16
HEADER_H = 96
MAX_CELLS = 16     # rows and columns shown before eliding

WHITE = (255, 255, 255)
INK = (30, 30, 35)
GRAY_TEXT = (120, 120, 120)
PANEL = (245, 246, 250)
GRID = (200, 200, 210)
HIGHLIGHT = (255, 236, 170)

VERDICT_COLORS = {
    Verdict.SPECIAL: (40, 140, 70),
    Verdict.NOT_SPECIAL: (190, 40, 40),
    Verdict.UNDECIDED: (200, 140, 20),
}

FONT_PATH_BOLD = "/usr/share/fonts/truetype/dejavu/DejaVuSans-Bold.ttf"
FONT_PATH = "/usr/share/fonts/truetype/dejavu/DejaVuSans.ttf"


def load_fonts():
    try:
        f_badge = ImageFont.truetype(FONT_PATH_BOLD, 22)
        f_label = ImageFont.truetype(FONT_PATH, 14)
        f_cell = ImageFont.truetype(FONT_PATH, 13)
    except OSError:
        f_badge = f_label = f_cell = ImageFont.load_default()
    return f_badge, f_label, f_cell


def witness_matrix(report: ClassificationReport):
    """The matrix worth drawing and the index of a highlighted row (or None).

    A non-saturation witness appends its row combination, highlighted.
    """
    w = report.witness
    if w.get("matrix"):
        if "combination" in w:
            return w["matrix"] + [w["combination"]], len(w["matrix"])
        return w["matrix"], None
    torus = w.get("torus", w)
    if torus.get("section"):
        return torus["section"], None
    return None, None


def _text_width(draw, text, font) -> int:
    box = draw.textbbox((0, 0), text, font=font)
    return box[2] - box[0]


def _draw_grid(draw, matrix, origin, font, highlight=None):
    x0, y0 = origin
    rows = matrix[:MAX_CELLS]
    for i, row in enumerate(rows):
        for j, value in enumerate(row[:MAX_CELLS]):
            x, y = x0 + j * CELL_W, y0 + i * CELL_H
            fill = HIGHLIGHT if i == highlight else WHITE
            draw.rectangle([x, y, x + CELL_W, y + CELL_H], fill=fill, outline=GRID)
            text = str(value)
            draw.text((x + (CELL_W - _text_width(draw, text, font)) // 2, y + 7),
                      text, font=font, fill=INK)


def render_report(report: ClassificationReport, label: str = "") -> io.BytesIO:
    """Render the report as a PNG in memory."""
    f_badge, f_label, f_cell = load_fonts()
    matrix, highlight = witness_matrix(report)
    shown_rows = min(len(matrix), MAX_CELLS) if matrix else 0
    shown_cols = min(max(len(r) for r in matrix), MAX_CELLS) if matrix else 0

    img_w = max(420, PADDING * 2 + shown_cols * CELL_W)
    img_h = PADDING * 2 + HEADER_H + shown_rows * CELL_H + (8 if matrix else 0)
    img = Image.new("RGB", (img_w, img_h), PANEL)
    draw = ImageDraw.Draw(img)

    color = VERDICT_COLORS[report.verdict]
    badge = report.verdict.value.replace("_", " ").upper()
    badge_w = _text_width(draw, badge, f_badge) + 24
    draw.rounded_rectangle([PADDING, PADDING, PADDING + badge_w, PADDING + 36],
                           radius=RADIUS, fill=color)
    draw.text((PADDING + 12, PADDING + 5), badge, font=f_badge, fill=WHITE)

    draw.text((PADDING, PADDING + 46), report.criterion, font=f_label, fill=INK)
    if label:
        draw.text((PADDING, PADDING + 66), label, font=f_label, fill=GRAY_TEXT)

    if matrix:
        _draw_grid(draw, matrix, (PADDING, PADDING + HEADER_H), f_cell, highlight)

    buf = io.BytesIO()
    img.save(buf, format="PNG", optimize=True)
    buf.seek(0)
    return buf
