"""Deterministic chunked execution and compensated accumulation."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

ENV_WORKERS = "PSTL_WORKERS"


def resolve_workers(workers: int | None = None) -> int:
    if workers is None:
        workers = int(os.environ.get(ENV_WORKERS, "1"))
    return max(1, int(workers))


def chunked_map(fn, chunks, workers: int | None = None) -> list:
    """Apply ``fn`` to each chunk and return results in chunk order.

    Chunk boundaries never depend on the worker count, so any reduction over
    the returned list is bit-identical for every ``workers`` value.
    """
    chunks = list(chunks)
    workers = resolve_workers(workers)
    if workers == 1 or len(chunks) <= 1:
        return [fn(ch) for ch in chunks]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, chunks))


def spans(n: int, size: int) -> list[tuple[int, int]]:
    return [(i, min(i + size, n)) for i in range(0, n, size)]


def neumaier_add(acc: np.ndarray, comp: np.ndarray, x: np.ndarray) -> None:
    """In-place Neumaier step ``acc + comp += x`` (elementwise, real arrays)."""
    t = acc + x
    big = np.abs(acc) >= np.abs(x)
    comp += np.where(big, (acc - t) + x, (x - t) + acc)
    acc[...] = t


def compensated_rowsum(blocks) -> np.ndarray:
    """Sum an iterable of equally shaped complex partial sums.

    Each block is usually a pairwise ``np.sum`` over a slab of terms; the
    blocks themselves are combined with Neumaier compensation on the real
    and imaginary parts separately.
    """
    acc_re = acc_im = comp_re = comp_im = None
    for b in blocks:
        b = np.asarray(b, dtype=np.complex128)
        if acc_re is None:
            acc_re, acc_im = b.real.copy(), b.imag.copy()
            comp_re, comp_im = np.zeros_like(acc_re), np.zeros_like(acc_im)
            continue
        neumaier_add(acc_re, comp_re, b.real)
        neumaier_add(acc_im, comp_im, b.imag)
    if acc_re is None:
        return np.zeros(0, dtype=np.complex128)
    return (acc_re + comp_re) + 1j * (acc_im + comp_im)
