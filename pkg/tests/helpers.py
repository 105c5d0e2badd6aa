"""Shared test utilities."""

import numpy as np
from scipy.spatial import cKDTree


def assert_spectra_match(a, b, tol):
    """Assert two eigenvalue multisets agree within tol.

    Plain lexicographic sorting misorders members of degenerate clusters, so
    compare sizes plus the bidirectional nearest-neighbour distance instead.
    """
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    assert a.size == b.size, f"sizes differ: {a.size} vs {b.size}"
    pts_a = np.column_stack([a.real, a.imag])
    pts_b = np.column_stack([b.real, b.imag])
    d_ab = cKDTree(pts_b).query(pts_a)[0].max()
    d_ba = cKDTree(pts_a).query(pts_b)[0].max()
    assert max(d_ab, d_ba) < tol, f"spectra differ by {max(d_ab, d_ba):.3e}"
