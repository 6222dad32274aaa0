"""CSV contract parser: metadata, columns, and strict failure modes."""

from __future__ import annotations

import math

import pytest

from conftest import write_contract_csv
from plots.contract import ContractError, parse_csv


def test_parse_roundtrip(born_csv):
    ds = parse_csv(str(born_csv))
    assert ds.metadata["lambda"] == "100"
    assert ds.metadata["a"] == "1"
    assert ds.header == ("k", "density_continuum", "density_resonance", "abs_deviation")
    assert ds.n_rows == 101
    k = ds.numeric("k")
    assert k[0] == 2.9 and k[-1] == pytest.approx(3.3)


def test_footer_metadata_merges(tmp_path):
    path = write_contract_csv(
        tmp_path / "x.csv",
        ["a", "b"],
        [[1, 2]],
        metadata=["lambda=100", "stage=head"],
        footer=["total=3", "stage=foot"],
    )
    ds = parse_csv(str(path))
    assert ds.metadata["total"] == "3"
    assert ds.metadata["stage"] == "foot"  # later keys win


def test_nan_fields_are_numeric(tmp_path):
    path = write_contract_csv(tmp_path / "x.csv", ["t", "v"], [[1.0, "nan"]])
    ds = parse_csv(str(path))
    assert math.isnan(ds.numeric("v")[0])


def test_header_only_rejected(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("# lambda=100\nk,density\n")
    with pytest.raises(ContractError, match="no data rows"):
        parse_csv(str(path))


def test_no_header_rejected(tmp_path):
    path = tmp_path / "none.csv"
    path.write_text("# only=comments\n")
    with pytest.raises(ContractError, match="no header row"):
        parse_csv(str(path))


def test_ragged_row_rejected(tmp_path):
    path = tmp_path / "ragged.csv"
    path.write_text("a,b\n1,2\n3\n")
    with pytest.raises(ContractError, match="expected 2 fields, got 1"):
        parse_csv(str(path))


def test_duplicate_header_rejected(tmp_path):
    path = tmp_path / "dup.csv"
    path.write_text("a,a\n1,2\n")
    with pytest.raises(ContractError, match="unique"):
        parse_csv(str(path))


def test_missing_column_and_non_numeric(tmp_path):
    path = write_contract_csv(tmp_path / "x.csv", ["a", "b"], [[1, "oops"]])
    ds = parse_csv(str(path))
    with pytest.raises(ContractError, match="missing required column"):
        ds.require("a", "c")
    with pytest.raises(ContractError, match="not numeric"):
        ds.numeric("b")


def test_missing_file_raises_oserror(tmp_path):
    with pytest.raises(OSError):
        parse_csv(str(tmp_path / "absent.csv"))
