import pytest

from framecraft import GroupValidationError, SpecError, build_group, cyclic, dihedral, symmetric
from framecraft.constructions import _kinds


def test_cyclic():
    G = cyclic(5)
    assert G.name == "C5"
    assert G.labels == ("0", "1", "2", "3", "4")
    assert G.mul(3, 4) == 2


@pytest.mark.parametrize("n", [1, 2, 3, 4, 7])
def test_dihedral(n):
    G = dihedral(n)
    r, s = 1 % n, n

    assert G.order == 2 * n
    assert G.name == f"D{n}"
    assert G.labels[n] == "s0"
    assert G.element_order(s) == 2
    # s r s = r^-1
    assert G.mul(G.mul(s, r), s) == G.inv(r)
    assert G.is_abelian == (n <= 2)


def test_symmetric_ordering():
    G = symmetric(3)

    assert G.labels == ("123", "132", "213", "231", "312", "321")
    assert G.element_orders().tolist() == [1, 2, 2, 3, 3, 2]
    # (sigma tau)(i) = sigma(tau(i))
    assert G.mul(1, 2) == 4
    assert G.mul(2, 1) == 3
    assert not G.is_abelian


def test_symmetric_degree_limit():
    assert symmetric(4).order == 24
    with pytest.raises(SpecError):
        symmetric(7)


@pytest.mark.parametrize(
    "spec,order,name",
    [
        ({"kind": "cyclic", "n": 6}, 6, "C6"),
        ({"kind": "dihedral", "n": 4}, 8, "D4"),
        ({"kind": "symmetric", "n": 3}, 6, "S3"),
        ({"kind": "table", "labels": ["e", "a"], "table": [[0, 1], [1, 0]]}, 2, "table"),
        (
            {"kind": "product", "factors": [{"kind": "cyclic", "n": 2}, {"kind": "cyclic", "n": 2}]},
            4,
            "C2xC2",
        ),
        (
            {
                "kind": "product",
                "factors": [{"kind": "cyclic", "n": 2}] * 3,
            },
            8,
            "C2xC2xC2",
        ),
        (
            {
                "kind": "semidirect",
                "acting": {"kind": "cyclic", "n": 2},
                "normal": {"kind": "cyclic", "n": 4},
                "action": [[0, 1, 2, 3], [0, 3, 2, 1]],
            },
            8,
            "C4:C2",
        ),
        (
            {"kind": "semidirect", "acting": {"kind": "cyclic", "n": 2}, "normal": {"kind": "cyclic", "n": 3}},
            6,
            "C3:C2",
        ),
    ],
)
def test_build_group(spec, order, name):
    G = build_group(spec)
    assert G.order == order
    assert G.name == name


def test_registered_kinds():
    assert _kinds.names() == ["cyclic", "dihedral", "symmetric", "table", "product", "semidirect"]


@pytest.mark.parametrize(
    "spec,pointer",
    [
        ([], "/"),
        ({"n": 3}, "/kind"),
        ({"kind": "cyclic"}, "/n"),
        ({"kind": "cyclic", "n": 0}, "/n"),
        ({"kind": "cyclic", "n": True}, "/n"),
        ({"kind": "symmetric", "n": 9}, "/n"),
        ({"kind": "table", "table": [[0, 1], [1]]}, "/table/1"),
        ({"kind": "table", "table": [[0, "a"], [1, 0]]}, "/table/0/1"),
        ({"kind": "product", "factors": [{"kind": "cyclic", "n": 2}]}, "/factors"),
        ({"kind": "product", "factors": [{"kind": "cyclic", "n": 2}, {"kind": "cyclic"}]}, "/factors/1/n"),
        (
            {"kind": "semidirect", "acting": {"kind": "cyclic", "n": 2}, "normal": {"kind": "cyclic", "n": 3}, "action": [[0, 1, 2]]},
            "/action",
        ),
    ],
)
def test_spec_errors(spec, pointer):
    with pytest.raises(SpecError) as info:
        build_group(spec)
    assert info.value.pointer == ("" if pointer == "/" else pointer)
    assert f"(at {pointer})" in str(info.value)


def test_unknown_kind():
    with pytest.raises(KeyError, match="group kind"):
        build_group({"kind": "quaternion"})


def test_invalid_table_in_spec():
    with pytest.raises(GroupValidationError):
        build_group({"kind": "table", "table": [[0, 1], [1, 1]]})
