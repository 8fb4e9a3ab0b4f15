"""Brascamp-Lieb datum: weighted surjective linear maps from a common space.

A datum is a list of factors (c_i, B_i) with c_i > 0 and B_i a linear map
from R^n onto R^{n_i}. The exact zero map is allowed as a degenerate marker
(it contributes nothing to the inequalities and is excluded from all
bookkeeping); a non-zero map that fails to be onto is malformed and rejected.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from ._linalg import numerical_rank

# Entries at or below this (in max-abs) mean "exactly the zero map".
ZERO_MAP_TOL = 1e-14

# Numerical rank cutoff shared across the package.
RANK_TOL = 1e-10


class DatumError(ValueError):
    """Malformed datum: bad shapes, non-positive weight, or a map that is not onto."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LinearFactor:
    """One weighted factor (c, B) with B of shape (target_dim, n)."""

    c: float
    B: np.ndarray

    def __post_init__(self):
        if not (np.isfinite(self.c) and self.c > 0.0):
            raise DatumError(f"factor weight must be positive and finite, got {self.c}")
        B = np.asarray(self.B, dtype=float)
        if B.ndim != 2 or B.shape[0] < 1 or B.shape[1] < 1:
            raise DatumError(f"factor map must be a 2-d array, got shape {B.shape}")
        if not np.all(np.isfinite(B)):
            raise DatumError("factor map has non-finite entries")
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "B", _readonly(B))

    @property
    def target_dim(self) -> int:
        return self.B.shape[0]

    def is_zero(self) -> bool:
        return bool(np.abs(self.B).max() <= ZERO_MAP_TOL)


@dataclass(frozen=True)
class BLDatum:
    """Ambient dimension n plus the factor list."""

    n: int
    factors: tuple[LinearFactor, ...]

    def __post_init__(self):
        if self.n < 1:
            raise DatumError(f"ambient dimension must be >= 1, got {self.n}")
        factors = tuple(self.factors)
        if not factors:
            raise DatumError("datum needs at least one factor")
        for i, f in enumerate(factors):
            if f.B.shape[1] != self.n:
                raise DatumError(
                    f"factor {i} maps from R^{f.B.shape[1]}, datum is on R^{self.n}"
                )
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "factors", factors)

    @property
    def m(self) -> int:
        return len(self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.target_dim for f in self.factors)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(f.c for f in self.factors)

    def active_indices(self) -> list[int]:
        """Indices of factors that are not the zero map."""
        return [i for i, f in enumerate(self.factors) if not f.is_zero()]


def make_datum(n: int, weights, maps) -> BLDatum:
    """Convenience constructor from parallel weight / matrix sequences."""
    return BLDatum(n, tuple(LinearFactor(c, B) for c, B in zip(weights, maps, strict=True)))


@dataclass
class DatumDiagnostics:
    """Result of validate(): global health indicators for a datum.

    homogeneity_defect  sum of c_i * n_i over non-zero factors, minus n.
    degenerate          the non-zero maps fail to jointly separate points
                        (equivalently the adjoints fail to jointly span R^n);
                        both constants are +inf for such a datum.
    frame               every non-zero B_i B_i^T = id and the weighted sum
                        of B_i^T B_i is id, so identity solves the fixed
                        point and the constant is exactly 1.
    zero_map_indices    factors that are exactly the zero map.
    """

    homogeneity_defect: float
    degenerate: bool
    frame: bool
    zero_map_indices: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "homogeneity_defect": self.homogeneity_defect,
            "degenerate": self.degenerate,
            "frame": self.frame,
            "zero_map_indices": list(self.zero_map_indices),
        }


def validate(datum: BLDatum, tol: float = RANK_TOL) -> DatumDiagnostics:
    """Check a datum and summarize it. Raises DatumError for a non-zero map
    that is not onto; zero maps are legal and merely flagged."""
    zero_idx = [i for i, f in enumerate(datum.factors) if f.is_zero()]
    active = [i for i in range(datum.m) if i not in zero_idx]
    for i in active:
        f = datum.factors[i]
        r = numerical_rank(f.B, tol)
        if r < f.target_dim:
            raise DatumError(
                f"factor {i} has rank {r} < target dimension {f.target_dim}; "
                "a non-zero factor map must be onto"
            )
    defect = sum(datum.factors[i].c * datum.factors[i].target_dim for i in active) - datum.n
    if active:
        stacked = np.vstack([datum.factors[i].B for i in active])
        degenerate = numerical_rank(stacked, tol) < datum.n
    else:
        degenerate = True
    return DatumDiagnostics(
        homogeneity_defect=float(defect),
        degenerate=bool(degenerate),
        frame=is_frame(datum, tol),
        zero_map_indices=zero_idx,
    )


def is_frame(datum: BLDatum, tol: float = RANK_TOL) -> bool:
    """True when each non-zero B_i has orthonormal rows and the weighted sum
    of B_i^T B_i is the identity. Zero maps are ignored."""
    active = datum.active_indices()
    if not active:
        return False
    total = np.zeros((datum.n, datum.n))
    for i in active:
        f = datum.factors[i]
        gram = f.B @ f.B.T
        if np.abs(gram - np.eye(f.target_dim)).max() > tol:
            return False
        total += f.c * (f.B.T @ f.B)
    return bool(np.abs(total - np.eye(datum.n)).max() <= tol)


def direct_sum(a: BLDatum, b: BLDatum) -> BLDatum:
    """Block-diagonal combination on R^{n_a + n_b}; factors keep their weights."""
    n = a.n + b.n
    factors = []
    for f in a.factors:
        B = np.zeros((f.target_dim, n))
        B[:, : a.n] = f.B
        factors.append(LinearFactor(f.c, B))
    for f in b.factors:
        B = np.zeros((f.target_dim, n))
        B[:, a.n :] = f.B
        factors.append(LinearFactor(f.c, B))
    return BLDatum(n, tuple(factors))


# -- serialization ------------------------------------------------------------

def datum_to_dict(datum: BLDatum) -> dict:
    return {
        "n": datum.n,
        "factors": [{"c": f.c, "rows": f.B.tolist()} for f in datum.factors],
    }


def datum_from_dict(doc: dict) -> BLDatum:
    try:
        n = int(doc["n"])
        factors = tuple(LinearFactor(float(f["c"]), np.asarray(f["rows"], dtype=float))
                        for f in doc["factors"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DatumError):
            raise
        raise DatumError(f"bad datum document: {exc}") from exc
    return BLDatum(n, factors)


def load_datum(path) -> BLDatum:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DatumError(f"{path}: not valid JSON: {exc}") from exc
    return datum_from_dict(doc)


def save_datum(datum: BLDatum, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(datum_to_dict(datum), fh, indent=2, sort_keys=True)
        fh.write("\n")


def datum_digest(datum: BLDatum) -> str:
    """Stable content hash, embedded in reports so results can be tied to inputs."""
    canonical = json.dumps(datum_to_dict(datum), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
