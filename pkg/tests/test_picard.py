import pytest

from isodyn.errors import BasisMismatch, NotTranslation, UnknownMap
from isodyn.picard import (
    MAP_NAMES,
    MAP_ROOTS,
    P1XP1,
    P2,
    PicClass,
    anticanonical,
    blowdown_change_of_basis,
    check_isometry,
    cls,
    diagram_matches,
    identity_map,
    pairing,
    pairing_matrix,
    picard_report,
    pushforward,
    pushforward_as_printed,
    root_basis,
    surface_permutation,
    surface_roots_for,
    translation_vector,
    virtual_genus,
)
from oracles import lattice_isometry

EXPECTED_TRANSLATIONS = {
    "phi_a2": (0, 0, 0, 1, 0, -1, 0),
    "psi_a2": (0, 0, 0, -1, 1, 1, -1),
    "phi_a1": (0, 0, 0, 0, 1, 0, 0, -2),
    "psi11_a1": (0, 0, 0, -1, 0, 1, 0, 0),
    "psi12_a1": (0, 0, 1, 0, 0, 0, 0, -1),
    "psi34_a1": (0, 0, -1, 0, 1, 0, 0, -1),
}


def e(i):
    return cls(P1XP1, **{f"E{i}": 1})


def test_basic_pairings():
    h_f, h_g = cls(P1XP1, H_f=1), cls(P1XP1, H_g=1)
    assert pairing(h_f, h_g) == 1 and pairing(h_f, h_f) == 0
    assert pairing(e(1), e(1)) == -1 and pairing(e(1), e(2)) == 0
    with pytest.raises(BasisMismatch):
        pairing(h_f, cls(P2, F=1))


@pytest.mark.parametrize("basis, coeffs", [(P1XP1, (2, 2) + (-1,) * 8), (P2, (3,) + (-1,) * 9)])
def test_anticanonical_classes(basis, coeffs):
    k = anticanonical(basis)
    assert k.coeffs == coeffs
    assert pairing(k, k) == 0


def test_class_printing_round_trip():
    c = cls(P1XP1, H_f=2, H_g=-1, E3=1)
    assert str(c) == "2H_f - H_g + E3"
    assert str(PicClass(P1XP1, (0,) * 10)) == "0"


@pytest.mark.parametrize("label", ["E6_affine", "E7_affine", "A2_surface", "A1_surface"])
def test_root_bases_have_their_diagrams(label):
    basis = root_basis(label)
    assert diagram_matches(basis)
    assert all(pairing(a, a) == -2 for a in basis.roots)
    assert all(pairing(a, anticanonical(P1XP1)) == 0 for a in basis.roots)


@pytest.mark.parametrize("label", ["E6_affine", "E7_affine"])
def test_symmetry_roots_are_orthogonal_to_surface_roots(label):
    for alpha in root_basis(label).roots:
        for d in surface_roots_for(label).roots:
            assert pairing(alpha, d) == 0


def test_root_basis_entries():
    assert root_basis("E6_affine").roots[3] == cls(P1XP1, H_f=1, E1=-1, E7=-1)
    assert root_basis("E7_affine").roots[7] == cls(P1XP1, H_g=1, H_f=-1)
    d0, d1 = root_basis("A1_surface").roots
    assert pairing(d0, d1) == 2 and pairing(d0, d0) == -2


def test_a2_surface_diagram_is_a_triangle():
    assert root_basis("A2_surface").cartan() == [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]


def test_perturbed_root_basis_fails_the_diagram():
    basis = root_basis("E6_affine")
    broken = type(basis)(basis.label, (basis.roots[1],) + basis.roots[1:])
    assert not diagram_matches(broken)


def test_identity_is_an_isometry():
    assert check_isometry(identity_map())
    assert check_isometry(identity_map(P2))


@pytest.mark.parametrize("name", MAP_NAMES)
def test_pushforwards_are_isometries(name):
    m = pushforward(name)
    assert check_isometry(m)
    assert lattice_isometry(m.matrix, pairing_matrix(P1XP1))


@pytest.mark.parametrize("name", MAP_NAMES)
def test_translation_vectors(name):
    m = pushforward(name)
    assert translation_vector(m, root_basis(MAP_ROOTS[name])) == EXPECTED_TRANSLATIONS[name]


def test_e7_translation_vectors_add_up():
    roots = root_basis("E7_affine")
    t12 = translation_vector(pushforward("psi12_a1"), roots)
    t34 = translation_vector(pushforward("psi34_a1"), roots)
    assert tuple(a + b for a, b in zip(t12, t34)) == translation_vector(pushforward("phi_a1"), roots)


def test_psi34_after_psi12_is_phi_a1():
    composite = pushforward("psi34_a1").compose(pushforward("psi12_a1"))
    assert composite.matrix == pushforward("phi_a1").matrix


def test_listed_images():
    assert pushforward("phi_a2")(e(7)) == cls(P1XP1, H_f=1, E8=-1)
    assert pushforward("psi_a2")(e(5)) == e(7)
    phi = pushforward("phi_a1")
    everything = PicClass(P1XP1, (0, 0) + (1,) * 8)
    for i in range(1, 9):
        assert phi(e(i)) == cls(P1XP1, H_f=3, H_g=1) - everything + e(i)
    assert phi(cls(P1XP1, H_f=1)) == cls(P1XP1, H_f=9, H_g=4) - everything * 3
    assert phi(cls(P1XP1, H_g=1)) == cls(P1XP1, H_f=4, H_g=1) - everything


def test_phi_a2_cycles_the_surface_components():
    perm = surface_permutation(pushforward("phi_a2"), root_basis("A2_surface"))
    assert sorted(perm) == [0, 1, 2]
    assert all(perm[i] != i for i in range(3))


def test_perturbed_map_is_not_an_isometry():
    m = pushforward("phi_a2")
    assert not check_isometry(m.with_entry(0, 0, m.matrix[0][0] + 1))


def test_as_printed_lines_fail_the_isometry_check():
    for name in ("psi12_a1", "psi34_a1"):
        printed = pushforward_as_printed(name)
        assert not check_isometry(printed)
        assert not lattice_isometry(printed.matrix, pairing_matrix(P1XP1))
    assert not check_isometry(pushforward_as_printed("psi34_a1", lines=[5]))
    assert pushforward_as_printed("phi_a2").matrix == pushforward("phi_a2").matrix


def test_non_translation_is_reported():
    swap = pushforward("psi_a2")
    with pytest.raises(NotTranslation):
        translation_vector(swap, root_basis("E7_affine"))


def test_unknown_names():
    with pytest.raises(UnknownMap):
        pushforward("phi_b3")
    with pytest.raises(UnknownMap):
        root_basis("F4_affine")
    with pytest.raises(UnknownMap):
        blowdown_change_of_basis("q_case")


def test_exceptional_candidates_have_genus_zero():
    candidates = [
        e(1),
        cls(P1XP1, H_f=1, E8=-1),
        cls(P1XP1, H_f=1, E5=-1),
        cls(P2, F=1, F5=-1, F6=-1),
        cls(P2, F9=1),
    ]
    for c in candidates:
        assert virtual_genus(c) == 0
    assert virtual_genus(anticanonical(P1XP1)) == 1


@pytest.mark.parametrize("case", ["a2_schlesinger", "a1_schlesinger"])
def test_blowdown_change_of_basis(case):
    report = blowdown_change_of_basis(case)
    assert report.relations_hold and report.surface_roots_match
    images = report.change.images()
    if case == "a2_schlesinger":
        assert images[8] == cls(P2, F=1, F5=-1, F6=-1)
    else:
        # (H_x, H_y, F1..F8) is stored under the P1xP1 labels (H_f, H_g, E1..E8).
        assert images[8] == cls(P1XP1, H_f=1, H_g=1, E5=-1, E6=-1, E7=-1)


def test_picard_report_shape():
    report = picard_report()
    assert [m["name"] for m in report["maps"]] == list(MAP_NAMES)
    assert all(m["isometry"] for m in report["maps"])
    assert {m["name"]: tuple(m["translation"]) for m in report["maps"]} == EXPECTED_TRANSLATIONS
    assert report["informational"]["psi34_after_psi12_equals_phi_a1"]
    assert all(v["diagram_ok"] for v in report["root_bases"].values())
