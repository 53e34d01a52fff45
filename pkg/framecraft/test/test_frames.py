import numpy as np
import pytest
from scipy.stats import unitary_group

from framecraft import (
    Classification,
    InvalidSystemError,
    NotTotalError,
    VectorSystem,
    analysis_operator,
    canonical_parseval,
    frame_operator,
    frame_report,
    gram_projection_defect,
    probe_frame_sums,
    span_bounds,
    spectral_truncation,
    standard_basis,
    synthesis_operator,
)


@pytest.fixture
def mercedes():
    """Three unit vectors at 120 degrees, scaled to a Parseval frame of C^2."""
    angles = np.pi / 2 + 2 * np.pi * np.arange(3) / 3
    return VectorSystem(np.sqrt(2.0 / 3.0) * np.stack([np.cos(angles), np.sin(angles)], axis=1))


@pytest.fixture
def lopsided():
    return VectorSystem([[1.0, 0.0], [1.0, 1.0], [0.0, 2.0j]])


def test_standard_basis_is_onb():
    report = frame_report(standard_basis(4))

    assert report.classification == Classification.ONB
    assert report.lower_bound == 1.0
    assert report.upper_bound == 1.0
    assert report.is_total
    assert report.condition == 1.0
    assert repr(report) == "<FrameReport ONB(A=1.0, B=1.0)>"


def test_parseval(mercedes):
    report = frame_report(mercedes)

    assert report.classification == Classification.PARSEVAL
    np.testing.assert_allclose(report.frame_operator, np.eye(2), atol=1e-12)
    assert gram_projection_defect(mercedes) < 1e-12


def test_frame(lopsided):
    report = frame_report(lopsided)
    expected = np.linalg.eigvalsh(frame_operator(lopsided))

    assert report.classification == Classification.FRAME
    assert report.lower_bound == pytest.approx(expected[0])
    assert report.upper_bound == pytest.approx(expected[-1])
    assert report.to_dict() == {
        "A": report.lower_bound,
        "B": report.upper_bound,
        "classification": "Frame",
        "tol": 1e-8,
    }
    assert gram_projection_defect(lopsided) > 0.1


def test_not_total():
    sys = VectorSystem([[1.0, 0.0], [2.0, 0.0]])
    report = frame_report(sys)

    assert report.classification == Classification.NOT_TOTAL
    assert report.lower_bound == 0.0
    assert report.upper_bound == pytest.approx(5.0)
    assert report.condition == float("inf")
    with pytest.raises(NotTotalError) as info:
        canonical_parseval(sys)
    assert info.value.lower_bound == 0.0


def test_operators(lopsided):
    theta = analysis_operator(lopsided)
    v = np.array([0.5 - 1j, 2.0])

    np.testing.assert_allclose(theta @ v, [np.vdot(f, v) for f in lopsided])
    np.testing.assert_allclose(synthesis_operator(lopsided), theta.conj().T)
    np.testing.assert_allclose(
        np.vdot(v, frame_operator(lopsided) @ v).real, np.sum(np.abs(theta @ v) ** 2)
    )


@pytest.mark.parametrize("sys", ["mercedes", "lopsided"])
def test_canonical_parseval(sys, request):
    sys = request.getfixturevalue(sys)
    result = canonical_parseval(sys)
    report = frame_report(result)

    assert report.classification == Classification.PARSEVAL
    assert max(abs(report.lower_bound - 1), abs(report.upper_bound - 1)) < 1e-10
    assert gram_projection_defect(result) < 1e-10


def test_canonical_parseval_is_idempotent(mercedes):
    np.testing.assert_allclose(canonical_parseval(mercedes).vectors, mercedes.vectors, atol=1e-12)


def test_unscaled_mercedes_is_a_tight_frame():
    angles = np.deg2rad([90.0, 210.0, 330.0])
    sys = VectorSystem(np.stack([np.cos(angles), np.sin(angles)], axis=1))
    report = frame_report(sys)

    assert report.lower_bound == pytest.approx(1.5, abs=1e-12)
    assert report.upper_bound == pytest.approx(1.5, abs=1e-12)
    assert report.condition == pytest.approx(1.0)
    assert report.classification == Classification.FRAME
    scaled = canonical_parseval(sys)
    np.testing.assert_allclose(scaled.vectors, np.sqrt(2.0 / 3.0) * sys.vectors, atol=1e-12)


def test_canonical_parseval_of_repeated_vector():
    sys = VectorSystem([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    result = canonical_parseval(sys)

    r = 1 / np.sqrt(2.0)
    np.testing.assert_allclose(result.vectors, [[r, 0.0], [r, 0.0], [0.0, 1.0]], atol=1e-15)
    report = frame_report(result)
    assert report.classification == Classification.PARSEVAL
    assert report.lower_bound == pytest.approx(1.0, abs=1e-12)
    assert report.upper_bound == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("d", range(2, 17))
def test_canonical_parseval_on_random_systems(d):
    rnd = np.random.RandomState(d)
    for _ in range(50):
        m = d + rnd.randint(0, 2 * d + 1)
        sys = VectorSystem(rnd.randn(m, d) + 1j * rnd.randn(m, d))
        report = frame_report(canonical_parseval(sys))

        assert abs(report.lower_bound - 1.0) <= 1e-7
        assert abs(report.upper_bound - 1.0) <= 1e-7


def test_unitary_invariance(lopsided):
    u = unitary_group.rvs(2, random_state=1)
    report = frame_report(lopsided)
    rotated = frame_report(lopsided.transformed(u))

    assert rotated.lower_bound == pytest.approx(report.lower_bound)
    assert rotated.upper_bound == pytest.approx(report.upper_bound)
    assert rotated.classification == report.classification


def test_sampled_sums_lie_between_bounds(lopsided):
    report = frame_report(lopsided)
    sums = probe_frame_sums(lopsided, n_probes=500)

    assert sums.shape == (500,)
    assert np.all(sums >= report.lower_bound - 1e-10)
    assert np.all(sums <= report.upper_bound + 1e-10)


def test_spectral_truncation():
    sys = VectorSystem(np.diag([0.1, 0.5, 1.0, 3.0]))
    sliced = spectral_truncation(sys, 2)

    np.testing.assert_allclose(sliced.window_eigenvalues, [1.0])
    assert sliced.rank == 1
    np.testing.assert_allclose(sliced.projection, np.diag([0.0, 0.0, 1.0, 0.0]))

    wider = spectral_truncation(sys, 10)
    assert wider.rank == 3
    with pytest.raises(ValueError):
        spectral_truncation(sys, 0)


def test_spectral_truncation_of_diag_system():
    """a_k = 1/k for k <= 10: S has eigenvalues 1/k^2."""
    sys = VectorSystem(np.diag(1.0 / np.arange(1, 11)))
    sliced = spectral_truncation(sys, 3)

    # only 1/k^2 = 1 lies in [1/3, 3]
    assert sliced.rank == 1
    np.testing.assert_allclose(sliced.projection, np.diag([1.0] + [0.0] * 9), atol=1e-15)
    np.testing.assert_allclose(sliced.window_eigenvalues, [1.0])

    # the window [1/10, 10] keeps k <= 3
    wide = spectral_truncation(sys, 10)
    assert wide.rank == 3
    np.testing.assert_allclose(np.diag(wide.projection).real, [1.0, 1.0, 1.0] + [0.0] * 7, atol=1e-15)

    theta = analysis_operator(sys)
    for v in np.eye(10)[:3]:
        energy = np.sum(np.abs(theta @ (wide.projection @ v)) ** 2)
        assert 1 / 100 <= energy <= 100
    np.testing.assert_allclose(wide.window_eigenvalues, [1 / 9, 1 / 4, 1.0])


def test_span_bounds():
    sys = VectorSystem([[1.0, 0.0, 0.0], [0.0, 0.5, 0.0]])

    assert span_bounds(sys) == pytest.approx((0.25, 1.0))
    assert frame_report(sys).classification == Classification.NOT_TOTAL


@pytest.mark.parametrize(
    "vectors",
    [
        [],
        [[1.0, 0.0], [1.0]],
        np.zeros((2, 0)),
        np.zeros(3),
    ],
)
def test_invalid_systems(vectors):
    with pytest.raises(InvalidSystemError):
        VectorSystem(vectors)


def test_systems_are_immutable(lopsided):
    with pytest.raises(ValueError):
        lopsided.vectors[0, 0] = 2.0
    assert lopsided == VectorSystem(lopsided.vectors.copy())
    assert hash(lopsided) == hash(VectorSystem(lopsided.vectors.copy()))


def test_tolerance_has_to_be_positive(mercedes):
    with pytest.raises(ValueError):
        frame_report(mercedes, tol=0.0)
