import functools

import pytest

from padic_k2.arith import is_squarefree
from padic_k2.characters import cubic_field_instances
from padic_k2.invariants import FieldDescriptor, analyze

B1_RANGE = (5, 1100)
C1_RANGE = (7, 700)
B2_RANGE = (2, 200)
C2_RANGE = (7, 800)


@functools.lru_cache(maxsize=None)
def quadratic_scan(p, lo, hi):
    return {m: analyze(FieldDescriptor.quadratic(m), p) for m in range(lo, hi + 1) if is_squarefree(m)}


@functools.lru_cache(maxsize=None)
def cubic_scan(p, lo, hi):
    rows = []
    for f in range(lo, hi + 1):
        for inst in cubic_field_instances(f):
            rows.append(analyze(FieldDescriptor.cubic(inst), p))
    return rows


@pytest.fixture(scope="session")
def b1_rows():
    return quadratic_scan(2, *B1_RANGE)


@pytest.fixture(scope="session")
def b2_rows():
    return quadratic_scan(3, *B2_RANGE)


@pytest.fixture(scope="session")
def c1_rows():
    return cubic_scan(3, *C1_RANGE)


@pytest.fixture(scope="session")
def c2_rows():
    return cubic_scan(2, *C2_RANGE)
