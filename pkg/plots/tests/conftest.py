"""Synthetic contract CSVs shaped like the generator's real outputs."""

from __future__ import annotations

import math

import numpy as np
import pytest

METADATA = ["deltashell 0.1.0", "command=test", "lambda=100", "a=1"]


def write_contract_csv(path, header, rows, metadata=METADATA, footer=()):
    lines = [f"# {m}" for m in metadata]
    lines.append(",".join(header))
    lines.extend(",".join(str(v) for v in row) for row in rows)
    lines.extend(f"# {m}" for m in footer)
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def born_csv(tmp_path):
    # narrow Lorentzian peak with a near-identical overlay partner
    ks = np.linspace(2.9, 3.3, 101)
    rows = []
    for k in (float(v) for v in ks):
        cont = 0.003 / ((k - 3.11) ** 2 + 0.001**2) / math.pi
        reso = cont * (1.0 + 2e-6)
        rows.append([repr(k), repr(cont), repr(reso), repr(abs(reso - cont))])
    header = ["k", "density_continuum", "density_resonance", "abs_deviation"]
    return write_contract_csv(tmp_path / "born.csv", header, rows)


@pytest.fixture
def coeff_csv(tmp_path):
    rows = []
    for n in range(1, 11):
        product = 0.9997 if n == 1 else 10.0 ** (-1.8 - 1.1 * (n - 2))
        rows.append([n, repr(product), repr(math.log10(product))])
    header = ["n", "product", "log10_product"]
    return write_contract_csv(tmp_path / "coeff.csv", header, rows)


@pytest.fixture
def survival_csv(tmp_path):
    tau, t_star = 84.0, 4132.0
    rows = []
    for t in (float(v) for v in np.geomspace(1e-2, 1e6, 49)):
        s_exp = math.exp(-t / tau)
        s_pow = 3.1e-11 / t**3
        tag = "early" if t < 0.1 * tau else ("powerlaw" if t >= t_star else "exponential")
        rows.append([repr(t), repr(s_exp + s_pow), repr(s_pow), tag])
    header = ["t", "S_resonance", "S_asymptotic", "regime_tag"]
    return write_contract_csv(tmp_path / "survival.csv", header, rows)
