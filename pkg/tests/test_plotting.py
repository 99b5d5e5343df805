import hashlib

from ctes.analysis import factor_scan
from ctes.plotting import plot_factor_report, plot_interferogram


def digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_svg_is_reproducible(single_ig, tmp_path):
    rep = factor_scan(single_ig, 207911)
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    plot_factor_report(single_ig, rep, a)
    plot_factor_report(single_ig, rep, b)
    assert digest(a) == digest(b)
    text = a.read_text()
    assert "<dc:date>" not in text
    assert "factors found: 451, 461" in text


def test_factor_lines_styled(single_ig, tmp_path):
    path = tmp_path / "f.svg"
    plot_factor_report(single_ig, factor_scan(single_ig, 207911), path)
    text = path.read_text()
    # nine dashed non-factor markers, two solid factor markers
    assert text.count("stroke-dasharray") >= 9


def test_interferogram_plot(single_ig, tmp_path):
    for name, N in (("w.svg", None), ("xi.svg", 207911)):
        path = tmp_path / name
        plot_interferogram(single_ig, path, N)
        assert path.stat().st_size > 1000
