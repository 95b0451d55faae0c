"""Backend contract: exactly-once execution, barriers, atomic reservations."""

import threading

import numpy as np
import pytest

from termesh import ReservationCounter, for_each_chunk, for_each_index, reserve
from termesh.backend import SEQUENTIAL, Backend, parallel
from termesh.errors import StructuralError


@pytest.mark.parametrize("backend", [SEQUENTIAL, parallel(1), parallel(4)])
def test_empty_range_no_invocation(backend):
    calls = []
    for_each_index(backend, 0, calls.append)
    for_each_chunk(backend, 0, lambda lo, hi: calls.append((lo, hi)))
    assert calls == []


@pytest.mark.parametrize("backend", [SEQUENTIAL, parallel(2), parallel(8)])
def test_exactly_once_per_index(backend):
    n = 10_000
    hits = np.zeros(n, dtype=np.int64)
    for_each_index(backend, n, lambda i: hits.__setitem__(i, hits[i] + 1))
    assert (hits == 1).all()


@pytest.mark.parametrize("backend", [SEQUENTIAL, parallel(4)])
def test_counter_body_reaches_n(backend):
    n = 5000
    counter = ReservationCounter()
    for_each_index(backend, n, lambda i: counter.fetch_add(1))
    assert counter.value == n


def test_chunks_cover_range_disjointly():
    spans = []
    for_each_chunk(Backend("parallel", 3), 1000, lambda lo, hi: spans.append((lo, hi)))
    spans.sort()
    assert spans[0][0] == 0 and spans[-1][1] == 1000
    for (a, b), (c, d) in zip(spans, spans[1:]):
        assert b == c


def test_sequential_chunk_is_single_ascending_pass():
    spans = []
    for_each_chunk(SEQUENTIAL, 123, lambda lo, hi: spans.append((lo, hi)))
    assert spans == [(0, 123)]


def test_reserve_basics():
    c = ReservationCounter()
    assert reserve(c, 5) == 0
    assert c.value == 5
    assert reserve(c, 0) == 5
    assert c.value == 5
    with pytest.raises(ValueError):
        reserve(c, -1)


def test_reserve_overflow_is_hard_error():
    c = ReservationCounter(2**63 - 2)
    with pytest.raises(StructuralError):
        c.fetch_add(5)


def test_concurrent_reservations_disjoint_full_coverage():
    c = ReservationCounter()
    offsets = []
    lock = threading.Lock()

    def grab():
        got = [c.fetch_add(3) for _ in range(125)]
        with lock:
            offsets.extend(got)

    threads = [threading.Thread(target=grab) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(offsets) == 1000
    assert sorted(offsets) == list(range(0, 3000, 3))
    assert c.value == 3000


@pytest.mark.parametrize("backend", [SEQUENTIAL, parallel(4)])
def test_errors_aggregate_after_barrier(backend):
    n = 100
    done = np.zeros(n, dtype=bool)

    def body(i):
        done[i] = True
        if i % 10 == 0:
            raise StructuralError(f"index {i}")

    with pytest.raises(StructuralError, match="kernel error"):
        for_each_index(backend, n, body)
    assert done.all()  # barrier semantics: everything ran before the raise


def test_bad_backend_configs_rejected():
    with pytest.raises(ValueError):
        Backend("gpu")
    with pytest.raises(ValueError):
        Backend("parallel", 0)
    assert str(SEQUENTIAL) == "seq"
    assert str(parallel(4)) == "par/4"
