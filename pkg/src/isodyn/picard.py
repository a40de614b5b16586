"""Integer Picard lattices of the rational surfaces attached to the two maps.

Two bases of rank 10 occur.  ``P1xP1_8`` is (H_f, H_g, E_1..E_8) with
H_f.H_g = 1, H^2 = 0 and E_i^2 = -1.  ``P2_9`` is (F, F_1..F_9) with F^2 = 1 and
F_i^2 = -1.  A lattice map is an integer matrix whose column j is the image of
basis vector j.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .errors import BasisMismatch, NotTranslation, UnknownMap

P1XP1 = "P1xP1_8"
P2 = "P2_9"

_LABELS = {
    P1XP1: ["H_f", "H_g"] + [f"E{i}" for i in range(1, 9)],
    P2: ["F"] + [f"F{i}" for i in range(1, 10)],
}


def basis_labels(basis: str) -> list[str]:
    try:
        return list(_LABELS[basis])
    except KeyError:
        raise BasisMismatch(f"unknown basis {basis!r}") from None


def pairing_matrix(basis: str) -> tuple[tuple[int, ...], ...]:
    basis_labels(basis)
    g = [[0] * 10 for _ in range(10)]
    if basis == P1XP1:
        g[0][1] = g[1][0] = 1
        for i in range(2, 10):
            g[i][i] = -1
    else:
        g[0][0] = 1
        for i in range(1, 10):
            g[i][i] = -1
    return tuple(tuple(r) for r in g)


@dataclass(frozen=True)
class PicClass:
    basis: str
    coeffs: tuple

    def __post_init__(self):
        basis_labels(self.basis)
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) != 10:
            raise ValueError("Picard classes have exactly 10 coefficients")
        object.__setattr__(self, "coeffs", coeffs)

    def _same(self, other: "PicClass"):
        if self.basis != other.basis:
            raise BasisMismatch(f"{self.basis} vs {other.basis}")

    def __add__(self, other: "PicClass") -> "PicClass":
        self._same(other)
        return PicClass(self.basis, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "PicClass") -> "PicClass":
        self._same(other)
        return PicClass(self.basis, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "PicClass":
        return PicClass(self.basis, tuple(-a for a in self.coeffs))

    def __mul__(self, k: int) -> "PicClass":
        return PicClass(self.basis, tuple(k * a for a in self.coeffs))

    __rmul__ = __mul__

    def __str__(self) -> str:
        terms = []
        for c, name in zip(self.coeffs, basis_labels(self.basis)):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else str(abs(c))
            terms.append(f"{sign} {mag}{name}")
        if not terms:
            return "0"
        text = " ".join(terms)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def cls(basis: str, **coeffs: int) -> PicClass:
    """Build a class from keyword coefficients, e.g. ``cls(P1XP1, H_f=1, E1=-1)``."""
    labels = basis_labels(basis)
    vec = [0] * 10
    for name, value in coeffs.items():
        vec[labels.index(name)] = value
    return PicClass(basis, tuple(vec))


def pairing(a: PicClass, b: PicClass) -> int:
    a._same(b)
    g = pairing_matrix(a.basis)
    return sum(a.coeffs[i] * g[i][j] * b.coeffs[j] for i in range(10) for j in range(10))


def anticanonical(basis: str) -> PicClass:
    if basis == P1XP1:
        return PicClass(basis, (2, 2) + (-1,) * 8)
    basis_labels(basis)
    return PicClass(basis, (3,) + (-1,) * 9)


def canonical(basis: str) -> PicClass:
    return -anticanonical(basis)


def virtual_genus(c: PicClass) -> int:
    """g(C) = (C.C + K.C)/2 + 1."""
    twice = pairing(c, c) + pairing(canonical(c.basis), c)
    if twice % 2:
        raise ValueError(f"odd C^2 + K.C for {c}")
    return twice // 2 + 1


# ---------------------------------------------------------------------------
# root bases


@dataclass(frozen=True)
class RootBasis:
    label: str
    roots: tuple

    def cartan(self) -> list[list[int]]:
        return [[-pairing(a, b) for b in self.roots] for a in self.roots]


def _parse_class(basis: str, text: str) -> PicClass:
    """Parse a short linear combination such as ``"2H_f + H_g - E1 - 3E7"``."""
    labels = basis_labels(basis)
    vec = [0] * 10
    tokens = text.replace("-", " - ").replace("+", " + ").split()
    sign = 1
    for tok in tokens:
        if tok in "+-":
            sign = 1 if tok == "+" else -1
            continue
        k = 0
        while k < len(tok) and tok[k].isdigit():
            k += 1
        coeff = int(tok[:k]) if k else 1
        vec[labels.index(tok[k:])] += sign * coeff
        sign = 1
    return PicClass(basis, tuple(vec))


_ROOTS = {
    "E6_affine": (
        "E3 - E4", "E2 - E3", "E1 - E2", "H_f - E1 - E7", "E7 - E8", "H_g - E1 - E5", "E5 - E6",
    ),
    "E7_affine": (
        "E7 - E8", "E3 - E4", "E2 - E3", "E1 - E2", "H_f - E1 - E5", "E5 - E6", "E6 - E7",
        "H_g - H_f",
    ),
    "A2_surface": ("H_f + H_g - E1 - E2 - E3 - E4", "H_f - E5 - E6", "H_g - E7 - E8"),
    "A1_surface": ("H_f + H_g - E1 - E2 - E3 - E4", "H_f + H_g - E5 - E6 - E7 - E8"),
}

# Arm lengths of the star-shaped affine diagrams (E6: 2,2,2; E7: 3,3,1).
_STAR_ARMS = {"E6_affine": [2, 2, 2], "E7_affine": [1, 3, 3]}


def root_basis(label: str) -> RootBasis:
    try:
        texts = _ROOTS[label]
    except KeyError:
        raise UnknownMap(f"unknown root basis {label!r}") from None
    return RootBasis(label, tuple(_parse_class(P1XP1, t) for t in texts))


def surface_roots_for(symmetry_label: str) -> RootBasis:
    return root_basis({"E6_affine": "A2_surface", "E7_affine": "A1_surface"}[symmetry_label])


def diagram_matches(basis: RootBasis) -> bool:
    """Check self-pairing -2 and that the Cartan matrix has the labelled affine shape."""
    c = basis.cartan()
    n = len(c)
    if any(c[i][i] != 2 for i in range(n)):
        return False
    if basis.label == "A2_surface":
        return all(c[i][j] == -1 for i in range(n) for j in range(n) if i != j)
    if basis.label == "A1_surface":
        return c[0][1] == c[1][0] == -2
    adj = {i: [j for j in range(n) if j != i and c[i][j] != 0] for i in range(n)}
    if any(c[i][j] not in (0, -1) for i in range(n) for j in range(n) if i != j):
        return False
    if sum(len(v) for v in adj.values()) != 2 * (n - 1):
        return False
    centers = [i for i in range(n) if len(adj[i]) == 3]
    if len(centers) != 1 or any(len(adj[i]) > 3 for i in range(n)):
        return False
    arms = []
    for start in adj[centers[0]]:
        prev, cur, length = centers[0], start, 1
        while True:
            nxt = [j for j in adj[cur] if j != prev]
            if not nxt:
                break
            prev, cur, length = cur, nxt[0], length + 1
        arms.append(length)
    return sorted(arms) == _STAR_ARMS[basis.label]


# ---------------------------------------------------------------------------
# lattice maps


@dataclass(frozen=True)
class LatticeMap:
    name: str
    matrix: tuple
    source: str = P1XP1
    target: str = P1XP1

    def __post_init__(self):
        m = tuple(tuple(int(v) for v in row) for row in self.matrix)
        if len(m) != 10 or any(len(r) != 10 for r in m):
            raise ValueError("lattice maps are 10x10")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_images(cls, name: str, images: Sequence[PicClass], source: str = P1XP1) -> "LatticeMap":
        target = images[0].basis
        cols = [img.coeffs for img in images]
        return cls(name, tuple(tuple(cols[j][i] for j in range(10)) for i in range(10)), source, target)

    def image(self, c: PicClass) -> PicClass:
        if c.basis != self.source:
            raise BasisMismatch(f"{self.name} acts on {self.source}, got {c.basis}")
        m = self.matrix
        return PicClass(self.target, tuple(sum(m[i][j] * c.coeffs[j] for j in range(10)) for i in range(10)))

    def __call__(self, c: PicClass) -> PicClass:
        return self.image(c)

    def compose(self, inner: "LatticeMap", name: str | None = None) -> "LatticeMap":
        """self after inner."""
        if inner.target != self.source:
            raise BasisMismatch(f"cannot compose {self.name} after {inner.name}")
        a, b = self.matrix, inner.matrix
        prod = tuple(tuple(sum(a[i][k] * b[k][j] for k in range(10)) for j in range(10)) for i in range(10))
        return LatticeMap(name or f"{self.name}*{inner.name}", prod, inner.source, self.target)

    def with_entry(self, i: int, j: int, value: int) -> "LatticeMap":
        rows = [list(r) for r in self.matrix]
        rows[i][j] = value
        return LatticeMap(self.name + "'", tuple(tuple(r) for r in rows), self.source, self.target)

    def images(self) -> list[PicClass]:
        return [self.image(PicClass(self.source, tuple(int(i == j) for i in range(10)))) for j in range(10)]


def identity_map(basis: str = P1XP1) -> LatticeMap:
    return LatticeMap("id", tuple(tuple(int(i == j) for j in range(10)) for i in range(10)), basis, basis)


def check_isometry(m: LatticeMap) -> bool:
    """M^T G_target M = G_source and M(-K_source) = -K_target."""
    gs, gt = pairing_matrix(m.source), pairing_matrix(m.target)
    a = m.matrix
    for i in range(10):
        for j in range(10):
            v = sum(a[k][i] * gt[k][l] * a[l][j] for k in range(10) for l in range(10))
            if v != gs[i][j]:
                return False
    return m.image(anticanonical(m.source)) == anticanonical(m.target)


def translation_vector(m: LatticeMap, roots: RootBasis) -> tuple[int, ...]:
    """Coefficients c_i with m(alpha_i) = alpha_i + c_i (-K)."""
    k = anticanonical(m.source)
    pivot = next(i for i, v in enumerate(k.coeffs) if v)
    out = []
    for idx, alpha in enumerate(roots.roots):
        diff = m.image(alpha) - alpha
        c, rem = divmod(diff.coeffs[pivot], k.coeffs[pivot])
        if rem or diff != k * c:
            raise NotTranslation(f"{m.name}: alpha_{idx} moves by {diff}, not a multiple of -K")
        out.append(c)
    return tuple(out)


# ---------------------------------------------------------------------------
# transcribed push-forwards (images of H_f, H_g, E1..E8 in order)

_E_ALL = " - E1 - E2 - E3 - E4 - E5 - E6 - E7 - E8"

_IMAGES = {
    "phi_a2": (
        "6H_f + 3H_g - 2E1 - 2E2 - 2E3 - 2E4 - E5 - E6 - 3E7 - 3E8",
        "3H_f + H_g - E1 - E2 - E3 - E4 - E7 - E8",
        "2H_f + H_g - E2 - E3 - E4 - E7 - E8",
        "2H_f + H_g - E1 - E3 - E4 - E7 - E8",
        "2H_f + H_g - E1 - E2 - E4 - E7 - E8",
        "2H_f + H_g - E1 - E2 - E3 - E7 - E8",
        "3H_f + H_g - E1 - E2 - E3 - E4 - E6 - E7 - E8",
        "3H_f + H_g - E1 - E2 - E3 - E4 - E5 - E7 - E8",
        "H_f - E8",
        "H_f - E7",
    ),
    "psi_a2": (
        "2H_f + 3H_g - E1 - E2 - E3 - E4 - 2E5 - 2E8",
        "3H_f + 5H_g - 2E1 - 2E2 - 2E3 - 2E4 - 3E5 - E6 - 2E8",
        "H_f + 2H_g - E2 - E3 - E4 - E5 - E8",
        "H_f + 2H_g - E1 - E3 - E4 - E5 - E8",
        "H_f + 2H_g - E1 - E2 - E4 - E5 - E8",
        "H_f + 2H_g - E1 - E2 - E3 - E5 - E8",
        "E7",
        "2H_f + 2H_g - E1 - E2 - E3 - E4 - 2E5 - E8",
        "2H_f + 3H_g - E1 - E2 - E3 - E4 - 2E5 - E6 - 2E8",
        "H_g - E5",
    ),
    "psi11_a1": (
        "4H_f + 3H_g - 3E1 - E2 - E3 - E4 - 2E6 - 2E7 - 2E8",
        "3H_f + 4H_g - 3E1 - E2 - E3 - E4 - 2E6 - 2E7 - 2E8",
        "E5",
        "2H_f + 2H_g - 2E1 - E3 - E4 - E6 - E7 - E8",
        "2H_f + 2H_g - 2E1 - E2 - E4 - E6 - E7 - E8",
        "2H_f + 2H_g - 2E1 - E2 - E3 - E6 - E7 - E8",
        "3H_f + 3H_g - 2E1 - E2 - E3 - E4 - 2E6 - 2E7 - 2E8",
        "H_f + H_g - E1 - E7 - E8",
        "H_f + H_g - E1 - E6 - E8",
        "H_f + H_g - E1 - E6 - E7",
    ),
    "psi12_a1": (
        "6H_f + 3H_g - E1 - E2 - 3E3 - 3E4 - 2E5 - 2E6 - 2E7 - 2E8",
        # printed with -2E8; fixing -K forces -E8 given the other nine images
        "3H_f + 2H_g - 2E3 - 2E4 - E5 - E6 - E7 - E8",
        "3H_f + 2H_g - E2 - 2E3 - 2E4 - E5 - E6 - E7 - E8",
        "3H_f + 2H_g - E1 - 2E3 - 2E4 - E5 - E6 - E7 - E8",
        "H_f - E4",
        "H_f - E3",
        "2H_f + H_g - E3 - E4 - E6 - E7 - E8",
        "2H_f + H_g - E3 - E4 - E5 - E7 - E8",
        "2H_f + H_g - E3 - E4 - E5 - E6 - E8",
        "2H_f + H_g - E3 - E4 - E5 - E6 - E7",
    ),
    "psi34_a1": (
        "6H_f + 3H_g - 3E1 - 3E2 - E3 - E4 - 2E5 - 2E6 - 2E7 - 2E8",
        # printed with -2E8, as in psi12_a1
        "3H_f + 2H_g - 2E1 - 2E2 - E5 - E6 - E7 - E8",
        "H_f - E2",
        "H_f - E1",
        "3H_f + 2H_g - 2E1 - 2E2 - E4 - E5 - E6 - E7 - E8",
        # symmetric reading of a line printed with a repeated E3 term
        "3H_f + 2H_g - 2E1 - 2E2 - E3 - E5 - E6 - E7 - E8",
        "2H_f + H_g - E1 - E2 - E6 - E7 - E8",
        "2H_f + H_g - E1 - E2 - E5 - E7 - E8",
        "2H_f + H_g - E1 - E2 - E5 - E6 - E8",
        "2H_f + H_g - E1 - E2 - E5 - E6 - E7",
    ),
}

# Lines whose printed form differs from the reading used above: (map, image index, text).
AS_PRINTED = {
    ("psi12_a1", 1): "3H_f + 2H_g - 2E3 - 2E4 - E5 - E6 - E7 - 2E8",
    ("psi34_a1", 1): "3H_f + 2H_g - 2E1 - 2E2 - E5 - E6 - E7 - 2E8",
    ("psi34_a1", 5): "3H_f + 2H_g - 2E1 - 2E3 - E3 - E5 - E6 - E7 - E8",
}

MAP_NAMES = ("phi_a2", "psi_a2", "phi_a1", "psi11_a1", "psi12_a1", "psi34_a1")

# Which symmetry lattice each map acts on.
MAP_ROOTS = {
    "phi_a2": "E6_affine",
    "psi_a2": "E6_affine",
    "phi_a1": "E7_affine",
    "psi11_a1": "E7_affine",
    "psi12_a1": "E7_affine",
    "psi34_a1": "E7_affine",
}


def _from_texts(name: str, texts: Sequence[str]) -> LatticeMap:
    return LatticeMap.from_images(name, [_parse_class(P1XP1, t) for t in texts])


def phi_a1_halves() -> tuple[LatticeMap, LatticeMap]:
    """Push-forwards of the two half-maps (fbar first, then gbar)."""
    first = ["H_f + 4H_g" + _E_ALL, "H_g"] + [f"H_g - E{i}" for i in range(1, 9)]
    second = ["H_f", "4H_f + H_g" + _E_ALL] + [f"H_f - E{i}" for i in range(1, 9)]
    return _from_texts("phi1_a1", first), _from_texts("phi2_a1", second)


def pushforward(name: str) -> LatticeMap:
    if name == "phi_a1":
        first, second = phi_a1_halves()
        return second.compose(first, "phi_a1")
    try:
        texts = _IMAGES[name]
    except KeyError:
        raise UnknownMap(f"unknown push-forward {name!r}") from None
    return _from_texts(name, texts)


def pushforward_as_printed(name: str, lines: Sequence[int] | None = None) -> LatticeMap:
    """The map with the given (default: all) differing lines restored to their printed form."""
    if name not in _IMAGES:
        return pushforward(name)
    texts = list(_IMAGES[name])
    for (map_name, idx), text in AS_PRINTED.items():
        if map_name == name and (lines is None or idx in lines):
            texts[idx] = text
    return _from_texts(name + "_printed", texts)


# ---------------------------------------------------------------------------
# blow-down identifications: columns are the model classes H_f, H_g, E1..E8
# written in the basis of the surface built from the transformations.

_BLOWDOWN = {
    "a2_schlesinger": (
        P2,
        ("F - F6", "F - F5", "F1", "F2", "F3", "F4", "F7", "F8", "F - F5 - F6", "F9"),
    ),
    "a1_schlesinger": (
        P1XP1,
        (
            "H_x + H_y - F5 - F7", "H_x + H_y - F6 - F7", "F1", "F2", "F3", "F4",
            "H_y - F7", "H_x - F7", "H_x + H_y - F5 - F6 - F7", "F8",
        ),
    ),
}

# Surface components on the transformation side, matched in order with the model's.
_BLOWDOWN_SURFACE = {
    "a2_schlesinger": ("2F - F1 - F2 - F3 - F4 - F5 - F6", "F - F6 - F7 - F8", "F6 - F9"),
    "a1_schlesinger": ("2H_x + 2H_y - F1 - F2 - F3 - F4 - F5 - F6 - 2F7", "F7 - F8"),
}


def _parse_source(basis: str, text: str) -> PicClass:
    if basis == P2:
        return _parse_class(P2, text)
    # (H_x, H_y, F1..F8) is a P1xP1 basis with renamed labels
    renamed = text.replace("H_x", "H_f").replace("H_y", "H_g")
    for i in range(8, 0, -1):
        renamed = renamed.replace(f"F{i}", f"E{i}")
    return _parse_class(P1XP1, renamed)


@dataclass(frozen=True)
class BlowdownReport:
    case: str
    change: LatticeMap
    relations_hold: bool
    surface_roots_match: bool
    details: dict = field(default_factory=dict)


def blowdown_change_of_basis(case: str) -> BlowdownReport:
    try:
        basis, texts = _BLOWDOWN[case]
    except KeyError:
        raise UnknownMap(f"unknown blow-down case {case!r}") from None
    images = [_parse_source(basis, t) for t in texts]
    change = LatticeMap.from_images(case, images, source=P1XP1)
    # pulling back the pairing: the identified classes must pair like H_f, H_g, E_i
    relations = check_isometry(change)
    model_surface = root_basis("A2_surface" if case == "a2_schlesinger" else "A1_surface").roots
    ours = [_parse_source(basis, t) for t in _BLOWDOWN_SURFACE[case]]
    matched = [change.image(d) == o for d, o in zip(model_surface, ours)]
    return BlowdownReport(
        case, change, relations, all(matched),
        {"surface_matches": matched, "classes": [str(c) for c in images]},
    )


def surface_permutation(m: LatticeMap, surface: RootBasis) -> tuple[int, ...] | None:
    """Indices k with m(D_i) = D_k, or None if some component is not sent to a component."""
    out = []
    for d in surface.roots:
        img = m.image(d)
        if img not in surface.roots:
            return None
        out.append(surface.roots.index(img))
    return tuple(out)


# ---------------------------------------------------------------------------


def picard_report() -> dict:
    """Everything the acceptance and CLI checks need, as plain JSON data."""
    maps = []
    for name in MAP_NAMES:
        m = pushforward(name)
        roots = root_basis(MAP_ROOTS[name])
        entry = {
            "name": name,
            "isometry": check_isometry(m),
            "root_images": [str(m.image(a)) for a in roots.roots],
            "surface_action": surface_permutation(m, surface_roots_for(MAP_ROOTS[name])),
        }
        try:
            entry["translation"] = list(translation_vector(m, roots))
        except NotTranslation as exc:
            entry["translation"] = None
            entry["error"] = str(exc)
        maps.append(entry)
    composite = pushforward("psi34_a1").compose(pushforward("psi12_a1"))
    return {
        "isodyn-schema": 1,
        "maps": maps,
        "root_bases": {
            label: {
                "diagram_ok": diagram_matches(root_basis(label)),
                "cartan": root_basis(label).cartan(),
            }
            for label in _ROOTS
        },
        "informational": {
            "psi34_after_psi12_equals_phi_a1": composite.matrix == pushforward("phi_a1").matrix,
            "as_printed_isometry": {
                name: check_isometry(pushforward_as_printed(name)) for name in ("psi12_a1", "psi34_a1")
            },
            "psi34_printed_e4_line_only_isometry": check_isometry(
                pushforward_as_printed("psi34_a1", lines=[5])
            ),
        },
        "blowdown": {
            case: {
                "relations_hold": rep.relations_hold,
                "surface_roots_match": rep.surface_roots_match,
                "classes": rep.details["classes"],
            }
            for case in _BLOWDOWN
            for rep in [blowdown_change_of_basis(case)]
        },
    }


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
