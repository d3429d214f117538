import numpy as np
import pytest

from steercert.core import Ket, Op, identity, kron
from steercert.channels import (
    ChoiOp,
    KrausChannel,
    Povm,
    State,
    apply_channel_on_subsystems,
    apply_choi,
    choi_from_map,
    choi_of_kraus,
    choi_of_unitary,
    extend_channel,
    maximally_entangled,
    projective_povm,
    pure_state,
    random_density,
    random_kraus_channel,
    verify_cptp,
)


def kraus_apply(k: KrausChannel, x: np.ndarray) -> np.ndarray:
    return sum(op @ x @ op.conj().T for op in k.kraus_ops)


def test_state_validation():
    with pytest.raises(ValueError):
        State(Op((2,), np.diag([0.5, -0.5])))
    with pytest.raises(ValueError):
        State(Op((2,), np.diag([0.7, 0.7])))
    s = pure_state(Ket((2,), [1, 1]))
    assert s.op.trace() == pytest.approx(1.0)


def test_povm_validation():
    eye = identity((2,))
    with pytest.raises(ValueError):
        Povm(2, ((eye, eye),))  # sums to 2*I
    p = projective_povm([[np.array([1, 0]), np.array([0, 1])]])
    assert p.settings == 1 and p.outcomes == 2 and p.dim == 2


def test_kraus_completeness():
    with pytest.raises(ValueError):
        KrausChannel(2, 2, (0.5 * np.eye(2),))


def test_maximally_entangled():
    phi = maximally_entangled(2)
    np.testing.assert_allclose(phi.data, [1, 0, 0, 1] / np.sqrt(2))
    assert phi.dims == (2, 2)


def test_identity_channel_choi():
    c = choi_of_unitary(np.eye(2))
    np.testing.assert_allclose(c.op.data, maximally_entangled(2).outer().data)
    report = verify_cptp(c)
    assert report.ok and report.cp and report.tp


def test_choi_roundtrip_random_channels(rng):
    # acceptance property: Choi / inverse-Choi agree with the Kraus action
    for _ in range(100):
        din = int(rng.integers(2, 4))
        dout = int(rng.integers(2, 4))
        k = random_kraus_channel(rng, din, dout)
        c = choi_of_kraus(k)
        assert verify_cptp(c).ok
        x = rng.normal(size=(din, din)) + 1j * rng.normal(size=(din, din))
        direct = kraus_apply(k, x)
        via_choi = apply_choi(c, Op((din,), x)).data
        assert np.max(np.abs(direct - via_choi)) < 1e-9


def test_choi_from_map_matches_kraus(rng):
    k = random_kraus_channel(rng, 3, 2)
    c1 = choi_of_kraus(k)
    c2 = choi_from_map(lambda x: Op((2,), kraus_apply(k, x.data)), (3,), (2,))
    np.testing.assert_allclose(c1.op.data, c2.op.data, atol=1e-12)


def test_cptp_iff_choi_conditions(rng):
    # transpose map: TP but not CP (Choi has a negative eigenvalue)
    transpose = choi_from_map(lambda x: Op((2,), x.data.T), (2,), (2,))
    report = verify_cptp(transpose)
    assert not report.cp and report.tp and report.min_eigenvalue < -1e-3
    # scaled channel: CP but not TP
    k = random_kraus_channel(rng, 2, 2)
    c = choi_of_kraus(k)
    scaled = ChoiOp((2,), (2,), Op((2, 2), 0.9 * c.op.data))
    report = verify_cptp(scaled)
    assert report.cp and not report.tp
    assert report.tp_deviation == pytest.approx(0.05, abs=1e-9)


def test_choi_dims_must_match():
    with pytest.raises(ValueError):
        ChoiOp((2,), (2,), Op((2, 3), np.zeros((6, 6))))
    with pytest.raises(ValueError):
        ChoiOp((2,), (2,), Op((2, 2), np.triu(np.ones((4, 4)))))


def test_apply_channel_on_subsystems_matches_global(rng):
    # applying on the first subsystem equals conjugating by U (x) 1
    u = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
    c = choi_of_unitary(u)
    rho = random_density(rng, (2, 3)).op
    out = apply_channel_on_subsystems(c, rho, targets=[0])
    big = np.kron(u, np.eye(3))
    np.testing.assert_allclose(out.data, big @ rho.data @ big.conj().T,
                               atol=1e-10)


def test_apply_channel_on_subsystems_permutes(rng):
    # applying on the last subsystem moves its output to the front
    u = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
    c = choi_of_unitary(u)
    rho = random_density(rng, (3, 2)).op
    out = apply_channel_on_subsystems(c, rho, targets=[1])
    assert out.dims == (2, 3)
    swap = np.zeros((6, 6))
    for i in range(3):
        for j in range(2):
            swap[j * 3 + i, i * 2 + j] = 1.0
    big = np.kron(np.eye(3), u)
    expected = swap @ (big @ rho.data @ big.conj().T) @ swap.T
    np.testing.assert_allclose(out.data, expected, atol=1e-10)


def test_extend_channel(rng):
    # e : A -> A' (x) B extends to E : A (x) B -> A' (x) B with a fixed ancilla
    k = random_kraus_channel(rng, 2, 4)
    e = choi_of_kraus(k, in_dims=(2,), out_dims=(2, 2))
    anc, big = extend_channel(e)
    assert verify_cptp(big).ok
    assert big.in_dims == (2, 2) and big.out_dims == (2, 2)
    rho = random_density(rng, (2,)).op
    joint = kron(rho, anc.op)
    np.testing.assert_allclose(apply_choi(big, joint).data,
                               apply_choi(e, rho).data, atol=1e-9)
