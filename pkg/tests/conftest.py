"""Shared oracle fixtures.

The small ensembles are enumerated once per session; the Monte-Carlo
batches at (128, 64) are sampled once and shared by the acceptance
criteria that all call for 2000 samples at that size.
"""

from __future__ import annotations

import numpy as np
import pytest

from regfactor.ensemble import enumerate_regular
from regfactor.factors import EdgeField, gamma
from regfactor.graphs import cycle_graph
from regfactor.stats import triangle_count
from regfactor.cli import farm_samples

ACCEPTANCE_SEED = 20250805


@pytest.fixture(scope="session")
def g52():
    return list(enumerate_regular(5, 2))


@pytest.fixture(scope="session")
def g63():
    return list(enumerate_regular(6, 3))


@pytest.fixture(scope="session")
def g83():
    return list(enumerate_regular(8, 3))


def _stats_128(g):
    a = g.adjacency_matrix()
    fld = EdgeField(g, d=64)
    tr = [float(np.trace(np.linalg.matrix_power(a, ell))) for ell in (3, 4, 5)]
    g3 = gamma(g, cycle_graph(3), field=fld)
    g4 = gamma(g, cycle_graph(4), field=fld)
    return (triangle_count(g), g3.raw_float, g4.raw_float,
            g3.normalized, g4.normalized, *tr)


@pytest.fixture(scope="session")
def samples_128():
    """2000 samples at (n, d) = (128, 64): triangle counts, gamma values
    for C3/C4 (raw and normalized), and tr(A^l) for l = 3, 4, 5."""
    rows = farm_samples(128, 64, 2000, ACCEPTANCE_SEED, threads=1,
                        per_sample=_stats_128)
    arr = np.array(rows, dtype=np.float64)
    return {
        "x_c3": arr[:, 0],
        "gamma_c3": arr[:, 1],
        "gamma_c4": arr[:, 2],
        "norm_c3": arr[:, 3],
        "norm_c4": arr[:, 4],
        "tr3": arr[:, 5],
        "tr4": arr[:, 6],
        "tr5": arr[:, 7],
    }
