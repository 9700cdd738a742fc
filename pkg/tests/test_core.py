import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weaklogic.core import (
    Kind,
    Operator,
    adjoint,
    basis_state,
    commutator,
    compose,
    eig_hermitian,
    identity,
    inner,
    make_state,
    op_norm,
    outer,
    projector,
    tensor,
)
from weaklogic.errors import DimMismatch, NotHermitian, NotProjector, ZeroVector
from weaklogic.scenarios import hardy_scenario, hardy_states

from conftest import random_hermitian, random_state

complex_entries = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


def test_make_state_already_normalized():
    np.testing.assert_allclose(make_state([1, 0]).amplitudes, [1, 0])


def test_make_state_normalizes_hardy_pre():
    s = make_state([0, 1, 1, 1])
    np.testing.assert_allclose(s.amplitudes, [0] + [1 / np.sqrt(3)] * 3, atol=1e-15)


def test_make_state_zero():
    with pytest.raises(ZeroVector):
        make_state([0, 0])
    with pytest.raises(ZeroVector):
        make_state([])


def test_state_is_immutable():
    s = make_state([1, 1])
    with pytest.raises(ValueError):
        s.amplitudes[0] = 3


def test_inner_basics():
    x = make_state([1, 2j, 3])
    assert inner(x, x) == pytest.approx(1)
    assert inner(basis_state(2, 0), basis_state(2, 1)) == 0
    with pytest.raises(DimMismatch):
        inner(basis_state(2, 0), basis_state(3, 0))


def test_inner_conjugates_first_argument():
    a, b = make_state([1j, 0]), make_state([1, 0])
    assert inner(a, b) == pytest.approx(-1j)


def test_hardy_overlap():
    pre, post = hardy_states()
    assert abs(inner(post, pre)) ** 2 == pytest.approx(1 / 12, abs=1e-15)


def test_outer_examples():
    e0, e1 = basis_state(2, 0), basis_state(2, 1)
    np.testing.assert_array_equal(outer(e0, e0).matrix, np.diag([1, 0]))
    assert outer(e0, e0).kind is Kind.PROJECTOR
    assert outer(e0, e1).kind is Kind.GENERAL


def test_outer_hardy_pre():
    pre, _ = hardy_states()
    expected = np.zeros((4, 4))
    expected[1:, 1:] = 1 / 3
    np.testing.assert_allclose(outer(pre, pre).matrix, expected, atol=1e-15)


def test_declared_kind_is_verified():
    with pytest.raises(NotHermitian):
        Operator([[0, 1], [0, 0]], "hermitian")
    with pytest.raises(NotProjector):
        Operator([[2, 0], [0, 0]], "projector")
    assert Operator([[1, 0], [0, 0]], "hermitian").kind is Kind.HERMITIAN


def test_commutator_examples():
    p = projector(make_state([1, 1]))
    assert op_norm(commutator(p, p)) == 0
    d1, d2 = Operator(np.diag([1, 0, 0])), Operator(np.diag([0, 1, 1]))
    assert op_norm(commutator(d1, d2)) == 0
    s = hardy_scenario()
    psi = projector(s.post)
    assert op_norm(commutator(psi, s.observable("N_NO,NO"))) > 0.1


def test_compose_and_dims():
    x = Operator(np.diag([1, 2]))
    np.testing.assert_array_equal(compose(x, x).matrix, np.diag([1, 4]))
    with pytest.raises(DimMismatch):
        compose(x, identity(3))


def test_tensor_examples():
    v = tensor(basis_state(2, 0), basis_state(2, 1))
    np.testing.assert_array_equal(v.amplitudes, [0, 1, 0, 0])
    np.testing.assert_array_equal(tensor(identity(2), identity(2)).matrix, np.eye(4))
    o, no = basis_state(2, 0), basis_state(2, 1)
    n = tensor(projector(o), projector(no))
    np.testing.assert_array_equal(n.matrix, hardy_scenario().observable("N_O,NO").matrix)


def test_tensor_associative(rng):
    a, b, c = (random_state(rng, d) for d in (2, 3, 2))
    left = tensor(tensor(a, b), c).amplitudes
    right = tensor(a, tensor(b, c)).amplitudes
    np.testing.assert_allclose(left, right, atol=1e-15)


def test_eig_diag():
    dec = eig_hermitian(Operator(np.diag([0, 1])))
    assert dec.eigenvalues == (0.0, 1.0)
    np.testing.assert_allclose(dec.eigenprojectors[0].matrix, np.diag([1, 0]), atol=1e-15)
    np.testing.assert_allclose(dec.eigenprojectors[1].matrix, np.diag([0, 1]), atol=1e-15)


def test_eig_merges_degenerate():
    dec = eig_hermitian(Operator(np.diag([2, 0, 2 + 1e-11])))
    assert len(dec) == 2
    assert dec.eigenprojectors[1].trace().real == pytest.approx(2)


def test_eig_projector_spectrum(rng):
    p = projector(random_state(rng, 5))
    for lam in eig_hermitian(p).eigenvalues:
        assert min(abs(lam), abs(lam - 1)) < 1e-12


def test_eig_rejects_general():
    with pytest.raises(NotHermitian):
        eig_hermitian(Operator([[0, 1], [0, 0]]))


def test_sandwich_rank1_eigenvalue_2x2(rng):
    # brute force: a rank <= 1 2x2 Hermitian matrix has eigenvalues {0, trace}
    a, psi = random_state(rng, 2), random_state(rng, 2)
    h = projector(a) @ projector(psi) @ projector(a)
    h = Operator((h.matrix + h.matrix.conj().T) / 2)
    tr, det = np.trace(h.matrix).real, np.linalg.det(h.matrix).real
    disc = np.sqrt(tr**2 - 4 * det)
    brute = sorted([(tr - disc) / 2, (tr + disc) / 2])
    got = eig_hermitian(h).eigenvalues
    assert got[-1] == pytest.approx(brute[1], abs=1e-12)
    assert got[-1] == pytest.approx(abs(inner(a, psi)) ** 2, abs=1e-12)


@pytest.mark.parametrize("dim", [1, 2, 5, 9, 16])
def test_eig_reconstruction(rng, dim):
    for _ in range(20):
        x = random_hermitian(rng, dim)
        dec = eig_hermitian(x)
        assert op_norm(dec.reconstruct() - x.matrix) <= 1e-10
        total = sum(p.matrix for p in dec.eigenprojectors)
        assert op_norm(total - np.eye(dim)) <= 1e-10
        for i, p in enumerate(dec.eigenprojectors):
            for q in dec.eigenprojectors[i + 1:]:
                assert op_norm(p.matrix @ q.matrix) <= 1e-10


def test_op_norm_matches_svd(rng):
    m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    assert op_norm(m) == pytest.approx(np.linalg.svd(m, compute_uv=False)[0], rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(complex_entries, min_size=3, max_size=3), st.lists(complex_entries, min_size=3, max_size=3))
def test_inner_conjugate_symmetry(a, b):
    try:
        x, y = make_state(a), make_state(b)
    except ZeroVector:
        return
    assert inner(x, y) == pytest.approx(inner(y, x).conjugate(), abs=1e-14)


@settings(max_examples=100, deadline=None)
@given(st.lists(complex_entries, min_size=9, max_size=9))
def test_adjoint_involution(entries):
    x = Operator(np.array(entries).reshape(3, 3))
    np.testing.assert_array_equal(adjoint(adjoint(x)).matrix, x.matrix)


@settings(max_examples=100, deadline=None)
@given(st.lists(complex_entries, min_size=4, max_size=4))
def test_outer_self_is_idempotent(entries):
    try:
        a = make_state(entries)
    except ZeroVector:
        return
    p = outer(a, a)
    assert p.kind is Kind.PROJECTOR
    assert np.max(np.abs(p.matrix @ p.matrix - p.matrix)) <= 1e-12
