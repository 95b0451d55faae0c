"""Execution backends: element-wise kernel maps, barriers, atomic reservations.

Every phase kernel in the package runs through this module. A kernel is a
body applied to each index (or index chunk) of a range; the body may read
shared immutable state and must write only per-index-disjoint locations or
ranges it reserved through a ReservationCounter. Both backends provide
barrier semantics: the map returns only after every invocation finished,
and body errors are aggregated and raised after the barrier.
"""

import threading
from concurrent.futures import ThreadPoolExecutor, wait
from dataclasses import dataclass

from .errors import StructuralError

_INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class Backend:
    """Kernel execution strategy: sequential ascending order, or a worker pool."""

    kind: str
    workers: int = 1

    def __post_init__(self):
        if self.kind not in ("sequential", "parallel"):
            raise ValueError(f"unknown backend kind {self.kind!r}")
        if self.workers < 1:
            raise ValueError("worker count must be positive")

    @property
    def is_parallel(self) -> bool:
        return self.kind == "parallel"

    def __str__(self):
        return "seq" if self.kind == "sequential" else f"par/{self.workers}"


SEQUENTIAL = Backend("sequential")


def parallel(workers: int) -> Backend:
    return Backend("parallel", workers)


class ReservationCounter:
    """Monotone counter with atomic fetch-add semantics.

    fetch_add(n) returns the value before the addition; concurrent callers
    therefore receive non-overlapping ranges [offset, offset + n).
    """

    __slots__ = ("_value", "_lock")

    def __init__(self, start: int = 0):
        self._value = int(start)
        self._lock = threading.Lock()

    def fetch_add(self, n: int) -> int:
        if n < 0:
            raise ValueError("reservation size must be non-negative")
        with self._lock:
            before = self._value
            after = before + n
            if after > _INT64_MAX:
                raise StructuralError("reservation counter overflow")
            self._value = after
            return before

    @property
    def value(self) -> int:
        with self._lock:
            return self._value


def reserve(counter: ReservationCounter, n: int) -> int:
    """Atomically reserve n slots; returns the start of the reserved range."""
    return counter.fetch_add(n)


def _chunks(count: int, pieces: int, min_chunk: int):
    size = max(min_chunk, -(-count // pieces))
    return [(lo, min(lo + size, count)) for lo in range(0, count, size)]


def _raise_aggregated(errors):
    if not errors:
        return
    head = "; ".join(str(e) for e in errors[:3])
    more = f" (+{len(errors) - 3} more)" if len(errors) > 3 else ""
    err = StructuralError(f"{len(errors)} kernel error(s): {head}{more}")
    raise err from errors[0]


def for_each_chunk(backend: Backend, count: int, body, min_chunk: int = 1) -> None:
    """Apply body(lo, hi) over a partition of range(count).

    The sequential backend runs one ascending pass; the parallel backend
    fans chunks out to a worker pool. Either way the call returns only
    after every chunk completed, with body errors aggregated.
    """
    if count == 0:
        return
    if not backend.is_parallel:
        body(0, count)
        return
    errors = []
    lock = threading.Lock()

    def guarded(span):
        try:
            body(*span)
        except Exception as e:  # collected, re-raised after the barrier
            with lock:
                errors.append(e)

    spans = _chunks(count, backend.workers * 4, min_chunk)
    with ThreadPoolExecutor(max_workers=backend.workers) as pool:
        wait([pool.submit(guarded, span) for span in spans])
    _raise_aggregated(errors)


def for_each_index(backend: Backend, count: int, body) -> None:
    """Apply body(i) exactly once for every i in range(count), with barrier
    semantics and aggregated error reporting under both backends."""
    errors = []

    def run_span(lo, hi):
        for i in range(lo, hi):
            try:
                body(i)
            except Exception as e:
                errors.append(e)

    if count == 0:
        return
    if not backend.is_parallel:
        run_span(0, count)
        _raise_aggregated(errors)
        return

    lock = threading.Lock()

    def guarded(span):
        local = []
        for i in range(span[0], span[1]):
            try:
                body(i)
            except Exception as e:
                local.append(e)
        if local:
            with lock:
                errors.extend(local)

    spans = _chunks(count, backend.workers * 4, 1)
    with ThreadPoolExecutor(max_workers=backend.workers) as pool:
        wait([pool.submit(guarded, span) for span in spans])
    _raise_aggregated(errors)
