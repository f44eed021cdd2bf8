"""Orthogonal arrays and exhaustive large-set / double-large-set checks.

Verification is tally-based and exact: for every t-subset of rows the
column tuples are counted and compared against the index N / v^t.  Code
words are computed through BLAS in float64 whenever v^k < 2^53, which
keeps every intermediate integer exactly representable; otherwise the
computation falls back to integer matmul.  All in-scope arrays have at
most 2t <= 20 rows, so the C(k, t) subsets stay cheap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

_EXACT_FLOAT_LIMIT = 2**53


@dataclass(frozen=True)
class OrthArray:
    """A k x N array over symbols 0..v-1 with a declared strength t."""

    entries: np.ndarray
    v: int
    t: int

    def __post_init__(self):
        e = np.asarray(self.entries)
        if e.ndim != 2:
            raise ValueError("entries must be two-dimensional")
        if not np.issubdtype(e.dtype, np.integer):
            raise ValueError("entries must be integers")
        if self.v < 2:
            raise ValueError("at least two levels required")
        if not 1 <= self.t <= e.shape[0]:
            raise ValueError(f"strength t={self.t} out of range for k={e.shape[0]}")
        if e.size and (e.min() < 0 or e.max() >= self.v):
            raise ValueError(f"entries must lie in 0..{self.v - 1}")
        if e.shape[1] % self.v**self.t:
            raise ValueError(
                f"column count {e.shape[1]} is not a multiple of v^t={self.v ** self.t}"
            )
        object.__setattr__(self, "entries", e)

    @property
    def k(self) -> int:
        return self.entries.shape[0]

    @property
    def n_cols(self) -> int:
        return self.entries.shape[1]

    @property
    def index(self) -> int:
        return self.n_cols // self.v**self.t


@dataclass(frozen=True)
class ArrayFamily:
    """An ordered family of arrays sharing (k, v, t)."""

    members: tuple[OrthArray, ...]

    def __post_init__(self):
        if not self.members:
            raise ValueError("empty family")
        first = self.members[0]
        for m in self.members:
            if (m.k, m.v, m.t) != (first.k, first.v, first.t):
                raise ValueError("family members disagree on (k, v, t)")

    @property
    def k(self) -> int:
        return self.members[0].k

    @property
    def v(self) -> int:
        return self.members[0].v


@lru_cache(maxsize=None)
def _subset_weights(k: int, t: int, v: int) -> np.ndarray:
    """One row of base-v position weights per t-subset of k rows."""
    combos = list(itertools.combinations(range(k), t))
    weights = np.zeros((len(combos), k), dtype=np.int64)
    for r, combo in enumerate(combos):
        for pos, row in enumerate(combo):
            weights[r, row] = v**pos
    weights.setflags(write=False)
    return weights


def _codes(weights: np.ndarray, entries: np.ndarray, limit: int) -> np.ndarray:
    """weights @ entries, exactly; float64 BLAS when all values < 2^53."""
    if limit < _EXACT_FLOAT_LIMIT:
        out = weights.astype(np.float64) @ entries.astype(np.float64)
        return out.astype(np.int64)
    return weights @ entries.astype(np.int64)


def _subset_codes(arr: OrthArray, t: int) -> np.ndarray:
    weights = _subset_weights(arr.k, t, arr.v)
    return _codes(weights, arr.entries, arr.v**t)


def column_codes(arr: OrthArray) -> np.ndarray:
    """Base-v integer code of every full column."""
    weights = (arr.v ** np.arange(arr.k, dtype=np.int64))[None, :]
    return _codes(weights, arr.entries, arr.v**arr.k)[0]


def _uniform_tallies(codes: np.ndarray, span: int, lam: int) -> bool:
    """True iff every row of codes hits each value in 0..span-1 lam times."""
    rows = codes.shape[0]
    offsets = np.arange(rows, dtype=np.int64)[:, None] * span
    counts = np.bincount((codes + offsets).ravel(), minlength=rows * span)
    return bool(np.all(counts == lam))


def verify_oa(arr: OrthArray) -> bool:
    """Every t-tuple appears exactly N / v^t times in every t-row slice."""
    return _uniform_tallies(_subset_codes(arr, arr.t), arr.v**arr.t, arr.index)


def is_simple(arr: OrthArray) -> bool:
    """No two identical columns."""
    return np.unique(column_codes(arr)).size == arr.n_cols


def verify_large_set(fam: ArrayFamily, t: int) -> bool:
    """Every member a simple OA of strength t, and the member columns
    jointly cover every possible k-tuple exactly once."""
    if t < 1:
        raise ValueError("strength must be at least 1")
    total = sum(m.n_cols for m in fam.members)
    full = fam.v**fam.k
    if total != full:
        raise ValueError(
            f"family holds {total} columns but a large set needs v^k={full}"
        )
    for m in fam.members:
        arr = m if m.t == t else OrthArray(m.entries, m.v, t)
        if not verify_oa(arr) or not is_simple(arr):
            return False
    codes = np.concatenate([column_codes(m) for m in fam.members])
    return bool(np.all(np.bincount(codes, minlength=full) == 1))


def transposed_family(fam: ArrayFamily) -> ArrayFamily:
    """The family whose j-th member collects the j-th column of every
    member: member j, column s is member s, column j of the input."""
    stack = np.stack([m.entries for m in fam.members])  # (count, k, N)
    by_col = np.ascontiguousarray(stack.transpose(2, 1, 0))
    v, t = fam.v, fam.members[0].t
    return ArrayFamily(tuple(
        OrthArray(by_col[j], v, t) for j in range(by_col.shape[0])
    ))


def diagonal_selections(fam: ArrayFamily) -> tuple[OrthArray, OrthArray]:
    """The arrays D and D': column j of D is column j of member j, and
    column j of D' is column N-1-j of member j."""
    stack = np.stack([m.entries for m in fam.members])
    count, _, n = stack.shape
    if count != n:
        raise ValueError("diagonal selection needs member count == column count")
    js = np.arange(n)
    v, t = fam.v, fam.members[0].t
    d = OrthArray(np.ascontiguousarray(stack[js, :, js].T), v, t)
    d_back = OrthArray(np.ascontiguousarray(stack[js, :, n - 1 - js].T), v, t)
    return d, d_back


def _stack_members_ok(stack: np.ndarray, v: int, t: int) -> bool:
    """Simple-OA check for every slab of a (count, k, N) stack, batched."""
    count, k, n = stack.shape
    weights = _subset_weights(k, t, v)
    nsub = weights.shape[0]
    span = v**t
    lam = n // span
    col_weights = v ** np.arange(k, dtype=np.int64)
    full = v**k
    use_float = full < _EXACT_FLOAT_LIMIT
    w_f = weights.astype(np.float64)
    cw_f = col_weights.astype(np.float64)

    chunk = max(1, 4_000_000 // (nsub * n))
    for s0 in range(0, count, chunk):
        blk = stack[s0:s0 + chunk]
        c = blk.shape[0]
        if use_float:
            blk_f = blk.astype(np.float64)
            codes = np.matmul(w_f[None, :, :], blk_f).astype(np.int64)
            col_codes = np.matmul(cw_f[None, None, :], blk_f)[:, 0, :].astype(np.int64)
        else:
            blk_i = blk.astype(np.int64)
            codes = np.matmul(weights[None, :, :], blk_i)
            col_codes = np.matmul(col_weights[None, None, :], blk_i)[:, 0, :]
        if not _uniform_tallies(codes.reshape(c * nsub, n), span, lam):
            return False
        srt = np.sort(col_codes, axis=1)
        if srt.shape[1] > 1 and not np.all(srt[:, 1:] != srt[:, :-1]):
            return False
    return True


def _stack_coverage_ok(stack: np.ndarray, v: int) -> bool:
    count, k, n = stack.shape
    full = v**k
    w = v ** np.arange(k, dtype=np.int64)
    if full < _EXACT_FLOAT_LIMIT:
        codes = np.einsum("i,sij->sj", w.astype(np.float64),
                          stack.astype(np.float64)).astype(np.int64)
    else:
        codes = np.einsum("i,sij->sj", w, stack.astype(np.int64))
    return bool(np.all(np.bincount(codes.ravel(), minlength=full) == 1))


def verify_sdloa(fam: ArrayFamily, t: int) -> bool:
    """Large set in both orientations plus both diagonal selections."""
    count = len(fam.members)
    n = fam.members[0].n_cols
    if any(m.n_cols != n for m in fam.members):
        raise ValueError("members must share one column count")
    if count != n:
        raise ValueError(f"need N={n} members, got {count}")
    if count * n != fam.v**fam.k:
        raise ValueError("member count x columns must equal v^k")
    v = fam.v

    stack = np.stack([m.entries for m in fam.members])
    if not _stack_members_ok(stack, v, t):
        return False
    if not _stack_coverage_ok(stack, v):
        return False

    by_col = np.ascontiguousarray(stack.transpose(2, 1, 0))
    if not _stack_members_ok(by_col, v, t):
        return False
    # Column coverage is the same multiset of columns, already checked.

    js = np.arange(n)
    d = OrthArray(np.ascontiguousarray(stack[js, :, js].T), v, t)
    d_back = OrthArray(np.ascontiguousarray(stack[js, :, n - 1 - js].T), v, t)
    return verify_oa(d) and verify_oa(d_back)
