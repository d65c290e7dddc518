import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from braidcrack.braid import Braid

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@st.composite
def braids(draw, n=None, min_n=3, max_n=6, max_len=12):
    if n is None:
        n = draw(st.integers(min_n, max_n))
    letters = draw(
        st.lists(
            st.integers(1, n - 1).flatmap(lambda i: st.sampled_from((i, -i))),
            max_size=max_len,
        )
    )
    return Braid(n, tuple(letters))


@st.composite
def braid_pairs(draw, min_n=3, max_n=6, max_len=12):
    n = draw(st.integers(min_n, max_n))
    return draw(braids(n=n, max_len=max_len)), draw(braids(n=n, max_len=max_len))


def perturb(w: Braid, rng: random.Random, steps: int = 6) -> Braid:
    """An equal word: random braid relations and free insertions."""
    letters = list(w.letters)
    n = w.n
    for _ in range(steps):
        kind = rng.randrange(3)
        if kind == 0:
            i = rng.randint(1, n - 1)
            s = rng.choice((1, -1))
            pos = rng.randint(0, len(letters))
            letters[pos:pos] = [s * i, -s * i]
        elif kind == 1 and n >= 3:
            i = rng.randint(1, n - 2)
            pos = rng.randint(0, len(letters))
            # insert (s_i s_{i+1} s_i)(s_{i+1} s_i s_{i+1})^-1 = e
            letters[pos:pos] = [i, i + 1, i, -(i + 1), -i, -(i + 1)]
        else:
            for k in range(len(letters) - 1):
                a, b = letters[k], letters[k + 1]
                if abs(abs(a) - abs(b)) >= 2:
                    letters[k], letters[k + 1] = b, a
                    break
    return Braid(n, tuple(letters))


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda x: int(x[1:3])):
            terminalreporter.write_line(line)
