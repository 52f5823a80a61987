"""Session-wide fixtures shared by the slower end-to-end checks."""

from __future__ import annotations

import time
from random import Random

import pytest

from minigp.harness import lockstep_verify, measure
from minigp.machines import (
    counter_input,
    counter_machine,
    filler_machine,
    random_machine_pair,
    stamp_machine,
    unary,
)

RANDOM_SEED = 20260814


@pytest.fixture(scope="session")
def verification_cases():
    """The (label, machine, input) matrix driving the correctness checks."""
    cases = [(f"stamp-{n}", stamp_machine(), unary(n)) for n in range(1, 7)]
    cases += [(f"count-{n}", counter_machine(), counter_input(n))
              for n in range(1, 9)]
    rng = Random(RANDOM_SEED)
    for i in range(20):
        m, input = random_machine_pair(rng)
        cases.append((f"random-{i}", m, input))
    return cases


@pytest.fixture(scope="session")
def verify_reports(verification_cases):
    """Lockstep reports for every case, plus the wall time spent."""
    t0 = time.perf_counter()
    reports = {label: lockstep_verify(m, input)
               for label, m, input in verification_cases}
    return reports, time.perf_counter() - t0


@pytest.fixture(scope="session")
def filler_metrics():
    """Measured runs of the tape-filler family, plus the wall time spent."""
    m = filler_machine()
    t0 = time.perf_counter()
    metrics = {reps: measure(m, unary(reps), max_steps=100_000)
               for reps in (1, 7, 14, 28)}
    return metrics, time.perf_counter() - t0
