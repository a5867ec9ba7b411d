from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import pytest

from thetarecon.oracle import HyperellipticConfig, generate_steiner, random_config
from thetarecon.pipeline import RunConfig, reconstruct

# a_7 = 5 and a_8 = 6 are the two points defining α; pair id 0 is I = {1}
HAND_BRANCH = (1, 2, 3, 4, 7, 8, 5, 6)
HAND_WITNESS = [Fraction(1), Fraction(14, 3), Fraction(196, 9), Fraction(-2, 3), Fraction(-28, 9)]

# criterion number -> {part: (passed, detail)}; filled by tests/test_acceptance.py
CRITERIA: dict[int, dict[str, tuple[bool, str]]] = {}


def record(n: int, part: str, ok: bool, detail: str) -> None:
    CRITERIA.setdefault(n, {})[part] = (bool(ok), detail)
    print(f"criterion {n} [{part}]: {'PASS' if ok else 'FAIL'}  {detail}")


@lru_cache(maxsize=None)
def oracle_input(g: int, seed: int, witnesses: int = 24, height: int = 50):
    return generate_steiner(random_config(g, seed, height), witnesses, seed)


@lru_cache(maxsize=None)
def hand_input():
    return generate_steiner(HyperellipticConfig(3, HAND_BRANCH), 24, 0)


@lru_cache(maxsize=None)
def oracle_run(g: int, seed: int, backend: str = "exact", height: int = 50):
    inp = oracle_input(g, seed, 24, height)
    return reconstruct(inp, RunConfig(backend=backend, seed=seed))


@pytest.fixture
def hand():
    return hand_input()


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        parts = CRITERIA[n]
        ok = all(v[0] for v in parts.values())
        detail = "; ".join(f"{k}: {d}" for k, (_, d) in parts.items())
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
