from trivector.plotting import char2_agreement, rank_histogram, verlinde_plot
from trivector.verlinde import verlinde_table

PNG_MAGIC = b"\x89PNG"


def test_rank_histogram(tmp_path):
    report = {"p": 3, "total_points": 9841, "rank_histogram": {"0": 0, "2": 0, "4": 10, "6": 100, "8": 9731}}
    out = rank_histogram(report, tmp_path / "ranks.png")
    assert out.read_bytes().startswith(PNG_MAGIC)


def test_verlinde_plot(tmp_path):
    out = verlinde_plot(verlinde_table(20), tmp_path / "v.png")
    assert out.read_bytes().startswith(PNG_MAGIC)


def test_char2_plot(tmp_path):
    rows = [{"u": [1] + [0] * 8, "cubic": c, "hyperdisc2": c, "agree": True} for c in (0, 1, 1)]
    out = char2_agreement(rows, tmp_path / "c.png")
    assert out.read_bytes().startswith(PNG_MAGIC)


def test_figures_are_reproducible(tmp_path):
    rows = verlinde_table(10)
    a = verlinde_plot(rows, tmp_path / "a.png").read_bytes()
    b = verlinde_plot(rows, tmp_path / "b.png").read_bytes()
    assert a == b
