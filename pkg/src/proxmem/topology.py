"""3D neuron geometries, distance matrices and proximity permutations.

Neurons live on an integer lattice so that squared distances are exact
integers; ties in the proximity ordering are then detected exactly and
broken by ascending neuron label. All user-facing neuron labels are
1-based, internal arrays are 0-based.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ColocationError, DegeneratePairWarning, FixtureError, RetryExhausted, SizeMismatch
from .validation import check_coords, check_rng


@dataclass(frozen=True)
class NetworkGeometry:
    """Positions of n neurons in integer 3D space."""

    coords: np.ndarray  # (n, 3) int64

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    def to_dict(self) -> dict:
        return {"n": self.n, "coords": self.coords.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "NetworkGeometry":
        try:
            coords = data["coords"]
        except (KeyError, TypeError):
            raise FixtureError("geometry fixture must be an object with a 'coords' list")
        geom = load_geometry(coords)
        if "n" in data and int(data["n"]) != geom.n:
            raise FixtureError(f"geometry fixture says n={data['n']} but has {geom.n} coordinate triples")
        return geom


@dataclass(frozen=True)
class DistanceMatrix:
    """Pairwise Euclidean distances, stored as exact squared integers."""

    squared: np.ndarray  # (n, n) int64, symmetric, zero diagonal

    @property
    def n(self) -> int:
        return self.squared.shape[0]

    @property
    def values(self) -> np.ndarray:
        """Real distances, derived on demand from the exact squares."""
        return np.sqrt(self.squared.astype(np.float64))


@dataclass(frozen=True)
class PermutationSequence:
    """Neurons ordered by increasing distance from a start neuron.

    ``order`` holds 0-based indices; ``labels`` renders the 1-based form
    used in every report and file format.
    """

    order: np.ndarray  # (n,) 0-based neuron indices
    start: int  # 1-based start neuron label
    inverse: np.ndarray = field(init=False)  # inverse[i] = position (0-based) of neuron i

    def __post_init__(self):
        order = np.asarray(self.order, dtype=np.int64)
        n = order.shape[0]
        if sorted(order.tolist()) != list(range(n)):
            raise SizeMismatch("order is not a permutation of 0..n-1")
        inverse = np.empty(n, dtype=np.int64)
        inverse[order] = np.arange(n)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "inverse", inverse)

    @property
    def n(self) -> int:
        return self.order.shape[0]

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(int(i) + 1 for i in self.order)

    def position_of(self, label: int) -> int:
        """1-based sequence position of a 1-based neuron label."""
        return int(self.inverse[label - 1]) + 1

    @classmethod
    def identity(cls, n: int) -> "PermutationSequence":
        return cls(order=np.arange(n), start=1)


@dataclass(frozen=True)
class ColocationReport:
    ok: bool
    pairs: tuple[tuple[int, int], ...]  # 1-based offending pairs


def generate_geometry(seed, n: int, coord_range: tuple[int, int] = (0, 9),
                      max_retries: int = 1000) -> NetworkGeometry:
    """Sample n distinct integer positions uniformly from the given cube.

    A draw containing co-located neurons is discarded wholesale and the
    trial regenerated. When the lattice is so densely filled that
    rejection cannot realistically terminate (e.g. n equal to the lattice
    size), one draw without replacement is taken instead; conditioned on
    distinctness the two procedures have identical distributions.
    RetryExhausted is raised when the lattice has fewer points than
    neurons.
    """
    if n < 1:
        raise SizeMismatch("n must be positive")
    lo, hi = int(coord_range[0]), int(coord_range[1])
    if hi < lo:
        raise SizeMismatch(f"bad coordinate range {coord_range}")
    side = hi - lo + 1
    lattice = side ** 3
    if lattice < n:
        raise RetryExhausted(
            f"range {coord_range} has only {lattice} lattice points for {n} neurons"
        )
    rng = check_rng(seed)
    for _ in range(max_retries):
        coords = rng.integers(lo, hi + 1, size=(n, 3), dtype=np.int64)
        if len({tuple(row) for row in coords.tolist()}) == n:
            return NetworkGeometry(coords=coords)
    # persistent rejection failure means a near-full lattice; small enough
    # to draw without replacement directly
    if lattice > 10**7:
        raise RetryExhausted(f"no co-location-free geometry found in {max_retries} draws")
    flat = rng.choice(lattice, size=n, replace=False)
    x, rest = np.divmod(flat, side * side)
    y, z = np.divmod(rest, side)
    coords = np.stack([x + lo, y + lo, z + lo], axis=1).astype(np.int64)
    return NetworkGeometry(coords=coords)


def load_geometry(coords) -> NetworkGeometry:
    """Build a geometry from explicit coordinate triples, rejecting co-locations."""
    arr = check_coords(coords)
    seen: dict[tuple, int] = {}
    for i, row in enumerate(arr.tolist()):
        key = tuple(row)
        if key in seen:
            raise ColocationError(seen[key] + 1, i + 1)
        seen[key] = i
    return NetworkGeometry(coords=arr)


def distance_matrix(geom: NetworkGeometry) -> DistanceMatrix:
    """All pairwise squared distances; exactly symmetric by construction."""
    diff = geom.coords[:, None, :] - geom.coords[None, :, :]
    return DistanceMatrix(squared=(diff * diff).sum(axis=2))


def validate_no_colocation(d: DistanceMatrix) -> ColocationReport:
    """Check for zero distances off the main diagonal."""
    sq = d.squared
    iu = np.triu_indices(d.n, k=1)
    zeros = np.nonzero(sq[iu] == 0)[0]
    pairs = tuple((int(iu[0][k]) + 1, int(iu[1][k]) + 1) for k in zeros)
    return ColocationReport(ok=len(pairs) == 0, pairs=pairs)


def select_stimulus_pair(geom: NetworkGeometry) -> tuple[int, int]:
    """First occurrence of the maximum x coordinate, then of the minimum.

    Returns 1-based labels. A constant x axis yields a degenerate pair
    (a, a), reported with a DegeneratePairWarning; interplay refuses it.
    """
    x = geom.coords[:, 0]
    first = int(np.argmax(x)) + 1
    second = int(np.argmin(x)) + 1
    if first == second or x[first - 1] == x[second - 1]:
        warnings.warn(
            f"constant x axis: stimulus pair degenerates to ({first}, {second})",
            DegeneratePairWarning,
        )
    return first, second


def proximity_permutation(d: DistanceMatrix, start: int) -> PermutationSequence:
    """Order neurons by ascending distance from ``start`` (1-based label).

    Equal distances are broken by ascending neuron label; numpy's stable
    sort on the exact squared distances guarantees that.
    """
    if not 1 <= start <= d.n:
        raise SizeMismatch(f"start neuron {start} out of range 1..{d.n}")
    row = d.squared[start - 1]
    order = np.argsort(row, kind="stable")
    return PermutationSequence(order=order, start=start)


def save_geometry(geom: NetworkGeometry, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(geom.to_dict(), f, indent=2)
        f.write("\n")


def load_geometry_file(path) -> NetworkGeometry:
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise FixtureError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from e
    return NetworkGeometry.from_dict(data)
