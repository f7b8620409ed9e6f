"""Bipolar memory sets, Hebbian weight matrices and B-matrix extraction.

Everything here is exact integer arithmetic: weights are sums of +-1
products, never normalized (recall only reads signs, which are scale
invariant), and the B-matrix is the strict lower triangle of T so that
B + B^T = T holds exactly.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .errors import FixtureError, SizeMismatch
from .topology import PermutationSequence
from .validation import check_bipolar_matrix, check_rng, check_symmetric_zero_diagonal


def generate_memories(seed, m: int, n: int) -> np.ndarray:
    """m independent length-n bipolar vectors, each entry +-1 with p=1/2."""
    if m < 1 or n < 1:
        raise SizeMismatch("m and n must be positive")
    rng = check_rng(seed)
    return (2 * rng.integers(0, 2, size=(m, n), dtype=np.int64) - 1)


def hebbian_weights(mems) -> np.ndarray:
    """Outer-product sum T[i][j] = sum_k mems[k][i] * mems[k][j], zero diagonal."""
    M = check_bipolar_matrix(mems)
    T = M.T @ M
    np.fill_diagonal(T, 0)
    return T


def permute_memories(mems, p: PermutationSequence) -> np.ndarray:
    """Reorder every memory's components into sequence coordinates."""
    M = check_bipolar_matrix(mems)
    if M.shape[1] != p.n:
        raise SizeMismatch(f"memories have length {M.shape[1]}, permutation has {p.n}")
    return M[:, p.order]


def permute_weights(T, p: PermutationSequence) -> np.ndarray:
    """Conjugate T by the permutation: out[a][b] = T[order[a]][order[b]]."""
    T = np.asarray(T)
    if T.shape != (p.n, p.n):
        raise SizeMismatch(f"weights have shape {T.shape}, permutation has {p.n}")
    return T[np.ix_(p.order, p.order)]


def b_matrix(T) -> np.ndarray:
    """Strictly lower-triangular half of a symmetric zero-diagonal T."""
    T = check_symmetric_zero_diagonal(T)
    return np.tril(T, k=-1)


@dataclass(frozen=True)
class MemoryStability:
    """One-step stability of a stored memory under sign(T x)."""

    index: int  # 1-based memory index
    stable: bool
    unstable_components: tuple[int, ...]  # 1-based positions where sign(Tx) != x


def stability_report(T, mems, sign_policy: str = "plus") -> list[MemoryStability]:
    """Classical one-step check: is sign(T x) == x componentwise for each memory?

    Zero local fields are resolved by ``sign_policy`` ("plus" or "minus").
    Diagnostic only; B-matrix recall does not depend on it.
    """
    T = check_symmetric_zero_diagonal(T)
    M = check_bipolar_matrix(mems, n_columns=T.shape[0])
    zero_to = 1 if sign_policy == "plus" else -1
    out = []
    for k, x in enumerate(M):
        h = T @ x
        img = np.where(h > 0, 1, np.where(h < 0, -1, zero_to))
        bad = np.nonzero(img != x)[0]
        out.append(
            MemoryStability(
                index=k + 1,
                stable=bad.size == 0,
                unstable_components=tuple(int(i) + 1 for i in bad),
            )
        )
    return out


def save_memories(mems, path) -> None:
    M = check_bipolar_matrix(mems)
    data = {"m": int(M.shape[0]), "n": int(M.shape[1]), "vectors": M.tolist()}
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2)
        f.write("\n")


def load_memories_file(path) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise FixtureError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from e
    try:
        vectors = data["vectors"]
    except (KeyError, TypeError):
        raise FixtureError(f"{path}: memory fixture must be an object with a 'vectors' list")
    M = check_bipolar_matrix(vectors)
    if "n" in data and int(data["n"]) != M.shape[1]:
        raise FixtureError(f"{path}: fixture says n={data['n']} but vectors have length {M.shape[1]}")
    if "m" in data and int(data["m"]) != M.shape[0]:
        raise FixtureError(f"{path}: fixture says m={data['m']} but there are {M.shape[0]} vectors")
    return M


def weights_to_csv(T, path) -> None:
    """Dump a weight matrix for outside inspection."""
    T = np.asarray(T)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        for row in T.tolist():
            writer.writerow(row)
