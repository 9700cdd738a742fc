import numpy as np
import pytest

from weaklogic.core import Operator, StateVector, projector

ACCEPTANCE_LINES = []


def random_vector(rng, dim, real=False):
    v = rng.normal(size=dim)
    if not real:
        v = v + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_state(rng, dim):
    return StateVector(random_vector(rng, dim))


def random_unitary(rng, dim):
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return Operator((m + m.conj().T) / 2)


def random_rank1(rng, dim):
    return projector(random_state(rng, dim))


def random_projector(rng, dim, rank=None):
    rank = rng.integers(0, dim + 1) if rank is None else rank
    u = random_unitary(rng, dim)[:, :rank]
    return Operator(u @ u.conj().T, "projector", tol=1e-10)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
