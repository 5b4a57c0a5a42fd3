import functools
import os
import random

from hypothesis import HealthCheck, settings

from plabic.generators import corpus

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=300, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("PLABIC_HYPOTHESIS_PROFILE", "default"))

CORPUS_SEED = 20240611
CORPUS_SIZE = 100


@functools.lru_cache(maxsize=None)
def main_corpus():
    """Seeded PBDTP networks from random Le-tableaux, random moves and reorientations."""
    return tuple(corpus(CORPUS_SEED, CORPUS_SIZE, max_k=4, max_extra=4, moves=6, prefer_cycles=True))


@functools.lru_cache(maxsize=None)
def small_corpus():
    return tuple(corpus(7, 30, max_k=3, max_extra=3, moves=3, prefer_cycles=True))


def rng(seed=0):
    return random.Random(seed)


_VERDICTS = []


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance")
        for line in sorted(_VERDICTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


def verdict(number, ok, detail):
    """Record and print one acceptance line, then fail the calling test if needed."""
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    _VERDICTS.append(line)
    print(line)
    assert ok, line
