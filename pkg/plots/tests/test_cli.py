"""End-to-end CLI behavior: exit codes and message channels."""

from __future__ import annotations

import pytest

from plots.cli import main

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def test_render_each_kind(born_csv, coeff_csv, survival_csv, tmp_path, capsys):
    jobs = [
        ("born-spectrum", born_csv, "born.png"),
        ("coefficients", coeff_csv, "coeff.png"),
        ("survival", survival_csv, "survival.png"),
    ]
    for kind, src, name in jobs:
        out = tmp_path / name
        assert main([kind, str(src), str(out)]) == 0
        assert out.read_bytes().startswith(PNG_MAGIC)
        assert f"wrote {out}" in capsys.readouterr().out


def test_malformed_csv_clean_exit(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("# lambda=100\nk,density_continuum,density_resonance\n")
    out = tmp_path / "out.png"
    assert main(["born-spectrum", str(bad), str(out)]) == 2
    assert "render: error:" in capsys.readouterr().err
    assert not out.exists()


def test_column_mismatch_clean_exit(coeff_csv, tmp_path, capsys):
    out = tmp_path / "out.png"
    assert main(["survival", str(coeff_csv), str(out)]) == 2
    assert "missing required column" in capsys.readouterr().err
    assert not out.exists()


def test_missing_input_clean_exit(tmp_path, capsys):
    assert main(["survival", str(tmp_path / "gone.csv"), str(tmp_path / "o.png")]) == 2
    assert "render: error:" in capsys.readouterr().err


def test_unknown_kind_is_usage_error(born_csv, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["pie", str(born_csv), str(tmp_path / "o.png")])
    assert exc.value.code == 2


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.startswith("render ")
