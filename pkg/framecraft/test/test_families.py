import numpy as np
import pytest

from framecraft import VectorSystem, families, family, truncation_profile
from framecraft.families import ProfilePoint, profile_frame


@pytest.mark.parametrize("name", sorted(families))
def test_families(name):
    sys = families[name](5)
    assert isinstance(sys, VectorSystem)
    assert len(sys) == 5


def test_registry():
    assert families.names() == ["diag", "overlap"]
    assert families.diag is families["diag"]
    with pytest.raises(KeyError, match="registered"):
        families.resolve("gabor")


def test_diag_profile():
    points = truncation_profile("diag", [2, 4, 8])

    assert points == [
        ProfilePoint(2, 0.25, 1.0),
        ProfilePoint(4, 0.0625, 1.0),
        ProfilePoint(8, 0.015625, 1.0),
    ]


def test_diag_exponent():
    steep = families.diag.with_params(exponent=2.0)
    points = truncation_profile(steep, [3])

    assert points[0].A == pytest.approx(3.0 ** -4)
    assert repr(steep) == "<family diag(size; exponent=2.0)>"
    with pytest.raises(ValueError):
        families.diag.with_params(base=2)


def test_overlap_profile():
    """f_n = e_n + e_(n+1): B approaches 4 while A tends to zero."""
    sizes = [2, 4, 8, 16]
    df = profile_frame(truncation_profile("overlap", sizes))

    assert list(df.columns) == ["N", "A", "B"]
    assert df.N.tolist() == sizes
    expected = [2 - 2 * np.cos(np.pi / (n + 1)) for n in sizes]
    np.testing.assert_allclose(df.A, expected, atol=1e-10)
    assert np.all(np.diff(df.A) < 0)
    assert np.all(np.diff(df.B) > 0)
    assert np.all(df.B < 4.0)


def test_threads_keep_order():
    sizes = [1, 3, 5, 7, 9]

    assert truncation_profile("overlap", sizes, max_workers=3) == truncation_profile(
        "overlap", sizes
    )


@pytest.mark.parametrize("sizes", [[], [4, 2], [2, 2]])
def test_invalid_sizes(sizes):
    with pytest.raises(ValueError):
        truncation_profile("diag", sizes)


def test_invalid_size():
    with pytest.raises(ValueError):
        families.diag(0)


def test_custom_family():
    @family
    def scaled_basis(size, *, scale=2.0):
        return VectorSystem(scale * np.eye(size))

    points = truncation_profile(scaled_basis, [1, 2])
    assert [p.A for p in points] == pytest.approx([4.0, 4.0])
    assert "scaled_basis" not in families


def test_family_signature():
    with pytest.raises(ValueError, match="signature"):

        @family
        def bad(n, size):
            return VectorSystem(np.eye(size))


def test_diag_lower_bound_is_inverse_square():
    sizes = [2, 4, 8, 16]
    points = truncation_profile("diag", sizes)

    np.testing.assert_allclose([p.A for p in points], [1.0 / n**2 for n in sizes], rtol=0, atol=1e-12)
    assert all(p.B == pytest.approx(1.0, abs=1e-12) for p in points)


def test_overlap_lower_bound_decreases():
    points = truncation_profile("overlap", [4, 16, 64])
    lower = [p.A for p in points]

    assert lower[0] > lower[1] > lower[2] > 0
    assert all(p.B <= 4.0 + 1e-10 for p in points)
    np.testing.assert_allclose(lower[2], 2 - 2 * np.cos(np.pi / 65), atol=1e-10)
