"""Shared builders for the test suite. Everything is deterministic."""

import numpy as np
import pytest

from blgauss import BLDatum, YoungExponents, datum_from_exponents, make_datum
from blgauss._linalg import numerical_rank


def prekopa_leindler_datum() -> BLDatum:
    """Two identity maps on the line with weights 1/2: a frame datum."""
    return make_datum(1, [0.5, 0.5], [np.array([[1.0]]), np.array([[1.0]])])


def coordinate_datum(n: int, weights=None) -> BLDatum:
    """Coordinate projections with unit weights by default (Hadamard datum)."""
    if weights is None:
        weights = [1.0] * n
    maps = [np.eye(n)[i : i + 1] for i in range(n)]
    return make_datum(n, weights, maps)


def mercedes_frame_datum() -> BLDatum:
    """Three unit vectors at 120 degrees in the plane, weights 2/3."""
    maps = []
    for k in range(3):
        t = 2.0 * np.pi * k / 3.0
        maps.append(np.array([[np.cos(t), np.sin(t)]]))
    return make_datum(2, [2.0 / 3.0] * 3, maps)


def young_flagship() -> tuple[YoungExponents, BLDatum]:
    e = YoungExponents(4.0 / 3.0, 4.0 / 3.0, 2.0)
    return e, datum_from_exponents(e)


def random_datum(rng: np.random.Generator, homogeneous: bool = False) -> BLDatum:
    """Random non-degenerate datum with onto factor maps, n in {2, 3}."""
    while True:
        n = int(rng.integers(2, 4))
        m = int(rng.integers(2, 4))
        dims = [int(rng.integers(1, n + 1)) for _ in range(m)]
        maps = []
        for ni in dims:
            B = rng.standard_normal((ni, n))
            while numerical_rank(B) < ni:
                B = rng.standard_normal((ni, n))
            maps.append(B)
        if numerical_rank(np.vstack(maps)) < n:
            continue
        cs = rng.uniform(0.3, 2.0, size=m)
        if homogeneous:
            cs = cs * (n / float(np.dot(cs, dims)))
        return make_datum(n, cs, maps)


def random_spd_tuple(datum: BLDatum, rng: np.random.Generator) -> list[np.ndarray]:
    out = []
    for i in datum.active_indices():
        d = datum.factors[i].target_dim
        G = rng.standard_normal((d, d))
        out.append(G @ G.T + 0.1 * np.eye(d))
    return out


def well_conditioned_spd(n: int, rng: np.random.Generator) -> np.ndarray:
    """Eigenvalues in [0.5, 2]: keeps finite-difference curvature error small."""
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    w = rng.uniform(0.5, 2.0, size=n)
    return (Q * w) @ Q.T


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
