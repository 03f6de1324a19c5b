"""
Vectorised exhaustive search for permutation polynomials.

A search is described by one domain of allowed coefficient codes per position
(position 0 is the constant term). Candidates are indexed in mixed radix with the
lowest position varying fastest. The lowest positions form an inner block whose value
tables are precomputed once; every outer index adds one base vector to the whole block
and the rows are tested for injectivity with numpy. Outer ranges are split into
contiguous chunks that run in worker processes and are merged in index order, so the
output does not depend on the number of workers.
"""
import logging
import multiprocessing as mp
import os
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import field_core as fc
from .models import FieldSpec

log = logging.getLogger(__name__)

DEFAULT_BLOCK_ROWS = 1 << 16
DEFAULT_CHUNK_TARGET = 1 << 22

Domains = Sequence[Sequence[int]]


def search_space_size(domains: Domains) -> int:
    size = 1
    for d in domains:
        size *= len(d)
    return size


def sort_key(coeffs: Tuple[int, ...]) -> Tuple:
    """Degree first, then coefficients from the top down."""
    return (len(coeffs), tuple(reversed(coeffs)))


def _add_table(field: FieldSpec) -> np.ndarray:
    if field._add_table is not None:
        return field._add_table
    codes = np.arange(field.q, dtype=np.int64)
    return fc.vec_add(field, codes[:, None], codes[None, :]).astype(np.int64)


class _Plan:
    """Precomputed per-position value tables and the inner block."""

    def __init__(self, field: FieldSpec, domains: Domains, block_rows: int):
        self.field = field
        self.q = field.q
        self.add = _add_table(field)
        codes = np.arange(field.q, dtype=np.int64)
        self.terms = []
        for i, dom in enumerate(domains):
            dom_arr = np.asarray(dom, dtype=np.int64)
            powers = fc.power_vector(field, i) if i else np.ones(field.q, dtype=np.int64)
            self.terms.append(fc.vec_mul(field, dom_arr[:, None], powers[None, :]).astype(np.int64))
        self.sizes = [len(d) for d in domains]

        inner = 0
        rows = 1
        while inner < len(domains) and (inner == 0 or rows * self.sizes[inner] <= block_rows):
            rows *= self.sizes[inner]
            inner += 1
        self.inner_positions = inner
        self.inner_rows = rows
        block = self.terms[inner - 1]
        for i in range(inner - 2, -1, -1):
            block = self.add[block[:, None, :], self.terms[i][None, :, :]].reshape(-1, self.q)
        self.inner = block
        self.outer_sizes = self.sizes[inner:]
        self.outer_count = int(np.prod(self.outer_sizes, dtype=object)) if self.outer_sizes else 1
        self.neg_x = fc.vec_neg(field, codes)
        self.zero_row = np.zeros(self.q, dtype=np.int64)

    def outer_digits(self, index: int) -> List[int]:
        digits = []
        for size in self.outer_sizes:
            index, d = divmod(index, size)
            digits.append(d)
        return digits

    def base_vector(self, digits: Sequence[int]) -> np.ndarray:
        vec = self.zero_row
        for offset, d in enumerate(digits):
            vec = self.add[vec, self.terms[self.inner_positions + offset][d]]
        return vec

    def inner_digits(self, row: int) -> List[int]:
        digits = []
        for size in self.sizes[:self.inner_positions]:
            row, d = divmod(row, size)
            digits.append(d)
        return digits


def injective_rows(values: np.ndarray, q: int) -> np.ndarray:
    """Boolean mask of rows that hit every element exactly once."""
    if q <= 62:
        masks = np.bitwise_or.reduce(np.left_shift(np.int64(1), values.astype(np.int64)), axis=1)
        return masks == (1 << q) - 1
    ordered = np.sort(values, axis=1)
    return np.all(np.diff(ordered, axis=1) != 0, axis=1)


def power_sum_rows(values: np.ndarray, power_table: np.ndarray, add: np.ndarray) -> np.ndarray:
    """Field sum of power_table[values] along each row."""
    powered = power_table[values]
    acc = powered[:, 0]
    for j in range(1, powered.shape[1]):
        acc = add[acc, powered[:, j]]
    return acc


def _scan(field: FieldSpec, domains: Domains, start: int, stop: int, ortho: bool,
          power_filter: Optional[int], block_rows: int) -> Tuple[List[Tuple[int, ...]], int]:
    plan = _Plan(field, domains, block_rows)
    q = plan.q
    power_table = fc.power_vector(field, power_filter) if power_filter else None
    found: List[Tuple[int, ...]] = []
    filtered = 0
    for index in range(start, stop):
        digits = plan.outer_digits(index)
        values = plan.add[plan.base_vector(digits)[None, :], plan.inner]
        keep = np.ones(values.shape[0], dtype=bool)
        if power_table is not None:
            keep = power_sum_rows(values, power_table, plan.add) == 0
            filtered += int(values.shape[0] - keep.sum())
        keep &= injective_rows(values, q)
        if ortho and keep.any():
            idx = np.flatnonzero(keep)
            shifted = plan.add[values[idx], plan.neg_x[None, :]]
            keep[idx] = injective_rows(shifted, q)
        for row in np.flatnonzero(keep):
            codes = [domains[i][d] for i, d in enumerate(plan.inner_digits(int(row)))]
            codes += [domains[plan.inner_positions + k][d] for k, d in enumerate(digits)]
            while codes and codes[-1] == 0:
                codes.pop()
            found.append(tuple(int(c) for c in codes))
    return found, filtered


def _scan_task(args) -> Tuple[List[Tuple[int, ...]], int]:
    key, domains, start, stop, ortho, power_filter, block_rows = args
    p, r, modulus = key
    field = fc.make_field(p, r, modulus)
    return _scan(field, domains, start, stop, ortho, power_filter, block_rows)


def default_jobs() -> int:
    return os.cpu_count() or 1


def search(
    field: FieldSpec,
    domains: Domains,
    ortho: bool = False,
    power_filter: Optional[int] = None,
    jobs: Optional[int] = None,
    block_rows: int = DEFAULT_BLOCK_ROWS,
    chunk_target: int = DEFAULT_CHUNK_TARGET,
) -> Tuple[List[Tuple[int, ...]], dict]:
    """
    Every candidate in the product of domains whose value table is a permutation.

    Args:
        field: Field of the coefficients
        domains: Allowed codes for each coefficient position, constant term first
        ortho: Also require f(x) - x to permute
        power_filter: Reject candidates whose power sum at this exponent is nonzero
            before the injectivity test
        jobs: Worker processes (None: one per CPU; 1: in-process)
        block_rows: Largest inner block held in memory at once
        chunk_target: Approximate candidates per worker task

    Returns:
        (sorted coefficient tuples, statistics dict)
    """
    field = fc.ensure_tables(field)
    total = search_space_size(domains)
    domains = [list(int(c) for c in d) for d in domains]
    started = time.perf_counter()
    stats = {"search_space": total, "filtered": 0}
    if total == 0:
        stats["wall_time"] = 0.0
        return [], stats

    plan = _Plan(field, domains, block_rows)
    outer = plan.outer_count
    jobs = jobs or default_jobs()
    per_task = max(1, chunk_target // plan.inner_rows)
    ranges = [(s, min(outer, s + per_task)) for s in range(0, outer, per_task)]
    log.info("searching %d candidates over %s in %d chunk(s), %d job(s)",
             total, field, len(ranges), jobs)

    tasks = [(field.key(), domains, s, e, ortho, power_filter, block_rows) for s, e in ranges]
    results: List[Tuple[List[Tuple[int, ...]], int]] = []
    executor = None
    if jobs > 1 and len(tasks) > 1:
        try:
            executor = ProcessPoolExecutor(max_workers=min(jobs, len(tasks)),
                                           mp_context=mp.get_context("spawn"))
        except (NotImplementedError, PermissionError, OSError) as exc:
            log.warning("parallel workers unavailable; running serially (%s)", exc)
            executor = None
    if executor is None:
        for i, task in enumerate(tasks):
            results.append(_scan_task(task))
            log.debug("chunk %d/%d done", i + 1, len(tasks))
    else:
        with executor:
            for i, result in enumerate(executor.map(_scan_task, tasks)):
                results.append(result)
                log.debug("chunk %d/%d done", i + 1, len(tasks))

    found = sorted({c for part, _ in results for c in part}, key=sort_key)
    stats["filtered"] = sum(f for _, f in results)
    stats["wall_time"] = time.perf_counter() - started
    log.info("found %d of %d candidates in %.2fs", len(found), total, stats["wall_time"])
    return found, stats


def count_permutation_functions(field: FieldSpec, jobs: Optional[int] = 1) -> int:
    """Number of reduced polynomials (all q^q value maps) that permute F_q."""
    field = fc.ensure_tables(field)
    domains = [list(range(field.q)) for _ in range(field.q)]
    found, _ = search(field, domains, jobs=jobs)
    return len(found)


def image_sizes(field: FieldSpec, domains: Domains, block_rows: int = DEFAULT_BLOCK_ROWS) -> np.ndarray:
    """|V_f| for every candidate, in index order."""
    field = fc.ensure_tables(field)
    domains = [list(int(c) for c in d) for d in domains]
    plan = _Plan(field, domains, block_rows)
    codes = np.arange(plan.q, dtype=np.int64)
    sizes = []
    for index in range(plan.outer_count):
        values = plan.add[plan.base_vector(plan.outer_digits(index))[None, :], plan.inner]
        hits = (values[:, :, None] == codes[None, None, :]).any(axis=1)
        sizes.append(hits.sum(axis=1))
    return np.concatenate(sizes)


def candidate_codes(domains: Domains, index: int) -> Tuple[int, ...]:
    """Coefficient tuple at a mixed-radix index (lowest position fastest)."""
    codes = []
    for dom in domains:
        index, d = divmod(index, len(dom))
        codes.append(int(dom[d]))
    while codes and codes[-1] == 0:
        codes.pop()
    return tuple(codes)
