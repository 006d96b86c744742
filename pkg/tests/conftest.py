import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

settings.register_profile(
    "default",
    deadline=None,
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

_entries = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)


@st.composite
def hermitian(draw, n=None, n_min=2, n_max=4):
    n = draw(st.integers(n_min, n_max)) if n is None else n
    re = draw(arrays(np.float64, (n, n), elements=_entries))
    im = draw(arrays(np.float64, (n, n), elements=_entries))
    X = re + 1j * im
    return 0.5 * (X + X.conj().T)


@st.composite
def unit_psi(draw, n):
    v = draw(arrays(np.float64, (2 * n,), elements=_entries))
    norm = np.linalg.norm(v)
    if norm < 1e-3:
        v = np.zeros(2 * n)
        v[0] = 1.0
        norm = 1.0
    return v / norm


@st.composite
def hermitian_with_psi(draw, n_min=2, n_max=4):
    n = draw(st.integers(n_min, n_max))
    return draw(hermitian(n)), draw(hermitian(n)), draw(unit_psi(n))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_CRITERIA: list[tuple[int, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance line; call with (k, ok, detail) before asserting."""

    def record(k: int, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
        _CRITERIA.append((k, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_CRITERIA, key=lambda kv: kv[0]):
            terminalreporter.write_line(line)
