"""Canonical holonomy samples used by the tests, the CLI and the self-test."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

# sl(2) basis used for the adjoint representation; -det is the form diag(1, 1, -1)
_SL2_BASIS = (
    np.array([[1.0, 0.0], [0.0, -1.0]]),
    np.array([[0.0, 1.0], [1.0, 0.0]]),
    np.array([[0.0, 1.0], [-1.0, 0.0]]),
)

LORENTZ3 = np.diag([1.0, 1.0, -1.0])
LORENTZ4 = np.diag([1.0, 1.0, 1.0, -1.0])


def _sl2_coords(z: np.ndarray) -> np.ndarray:
    return np.array([z[0, 0], (z[0, 1] + z[1, 0]) / 2, (z[0, 1] - z[1, 0]) / 2])


def adjoint_sl2(a) -> np.ndarray:
    """SO(2,1) image of an element of SL(2, R)."""
    a = np.asarray(a, dtype=float)
    ai = np.linalg.inv(a)
    return np.column_stack([_sl2_coords(a @ b @ ai) for b in _SL2_BASIS])


_HERM_BASIS = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, 1j], [-1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
    np.array([[1, 0], [0, 1]], dtype=complex),
)


def _herm_coords(z: np.ndarray) -> np.ndarray:
    return np.array([(z[0, 1] + z[1, 0]).real / 2, (z[0, 1] - z[1, 0]).imag / 2,
                     (z[0, 0] - z[1, 1]).real / 2, (z[0, 0] + z[1, 1]).real / 2])


def hermitian_sl2c(a) -> np.ndarray:
    """SO(3,1) image of an element of SL(2, C) acting by Z -> A Z A^*."""
    a = np.asarray(a, dtype=complex)
    return np.column_stack([_herm_coords(a @ b @ a.conj().T) for b in _HERM_BASIS])


def direct_sum(*blocks) -> np.ndarray:
    size = sum(np.atleast_2d(b).shape[0] for b in blocks)
    out = np.zeros((size, size))
    k = 0
    for b in blocks:
        b = np.atleast_2d(np.asarray(b, dtype=float))
        out[k:k + b.shape[0], k:k + b.shape[0]] = b
        k += b.shape[0]
    return out


def boost(d: float) -> np.ndarray:
    c, s = np.cosh(d), np.sinh(d)
    return np.array([[c, 0, s], [0, 1, 0], [s, 0, c]])


def rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1.0]])


def unit(i: int, size: int) -> np.ndarray:
    e = np.zeros(size)
    e[i] = 1.0
    return e


@dataclass
class Fixture:
    name: str
    generators: list[np.ndarray]
    vertex: np.ndarray | None
    radius: int
    description: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return self.generators[0].shape[0] - 1

    def to_json(self) -> dict:
        d = {
            "dimension": self.dimension,
            "generators": [g.ravel().tolist() for g in self.generators],
            "ball_radius": self.radius,
            "description": self.description,
        }
        if self.vertex is not None:
            d["vertex"] = self.vertex.tolist()
        for k, val in self.extra.items():
            d[k] = val.ravel().tolist() if isinstance(val, np.ndarray) else val
        return d


def so21_lattice() -> Fixture:
    """Principal congruence subgroup of level 2 (free of rank 2) in SO(2,1), plus a trivial line."""
    gens = [direct_sum(adjoint_sl2(m), 1.0) for m in ([[1, 2], [0, 1]], [[1, 0], [2, 1]])]
    return Fixture("so21_lattice", gens, unit(3, 4), 6,
                   "level-2 congruence subgroup of SL(2,Z) via the adjoint map, direct sum 1",
                   {"ambient_quadric": np.diag([1.0, 1.0, -1.0, 1.0]), "ambient_chart": [0.0, 0.0, 1.0, 0.0],
                    "base_quadric": LORENTZ3, "base_chart": [0.0, 0.0, 1.0]})


def so31_lattice() -> Fixture:
    mats = ([[1, 1], [0, 1]], [[1, 1j], [0, 1]], [[0, -1], [1, 0]], [[1j, 0], [0, -1j]])
    gens = [direct_sum(hermitian_sl2c(m), 1.0) for m in mats]
    return Fixture("so31_lattice", gens, unit(4, 5), 3,
                   "Picard group generators acting on Hermitian matrices, direct sum 1")


def diag_z1() -> Fixture:
    g = np.diag([4.0, 2.0, 1.0]) / 2.0
    return Fixture("diag_z1", [g], unit(1, 3), 5, "cyclic diagonal group, vertex at the middle eigenvector")


def diag_z2() -> Fixture:
    gens = [np.diag([2.0, 1.0, 0.5, 1.0]), np.diag([1.0, 3.0, 1 / 3, 1.0])]
    return Fixture("diag_z2", gens, unit(3, 4), 4, "rank-2 diagonal group fixing e4")


def quasi_lens_3(sign: float = 1.0) -> Fixture:
    zeta = 2 ** (1 / 3) * np.array([[0.5, 0, 0], [0, 1, 0], [0, sign, 1]])
    name = "quasi_lens_3" if sign > 0 else "quasi_lens_3_negated"
    return Fixture(name, [zeta], unit(2, 3), 8, "single quasi-lens generator",
                   {"zeta": zeta, "g_generators": []})


def quasi_lens_4(sign: float = 1.0, mu: float = 2.0) -> Fixture:
    g = np.diag([mu, 1 / mu, 1.0, 1.0])
    zeta = np.sqrt(2.0) * np.array([[0.5, 0, 0, 0], [0, 0.5, 0, 0], [0, 0, 1, 0], [0, 0, sign, 1]])
    name = "quasi_lens_4" if sign > 0 else "quasi_lens_4_negated"
    return Fixture(name, [g, zeta], unit(3, 4), 4, "diagonal group on the D-block with a compatible quasi-lens generator",
                   {"zeta": zeta, "g_generators": [g.ravel().tolist()]})


def bad_vertex_dominant() -> Fixture:
    h1 = adjoint_sl2([[2, 1], [1, 1]])
    lam = float(np.max(np.abs(np.linalg.eigvals(h1))))
    g1 = direct_sum(lam ** (-1 / 3) * h1, lam)
    g2 = direct_sum(adjoint_sl2([[1, 1], [1, 2]]), 1.0)
    return Fixture("bad_vertex_dominant", [g1, g2], unit(3, 4), 4,
                   "vertex eigenvalue equals the top eigenvalue for the first generator")


def unipotent_cusp() -> Fixture:
    gens = [hermitian_sl2c([[1, 1], [0, 1]]), hermitian_sl2c([[1, 1j], [0, 1]])]
    v = np.array([0.0, 0.0, 1.0, 1.0]) / np.sqrt(2.0)
    return Fixture("unipotent_cusp", gens, v, 4, "rank-2 parabolic subgroup of SO(3,1)")


def klein_238() -> Fixture:
    """(2,3,8) triangle group acting on the Klein disk."""
    d = float(np.arccosh(np.cos(np.pi / 3) / np.sin(np.pi / 8)))
    a = rotation(np.pi / 4)
    b = boost(d) @ np.diag([-1.0, -1.0, 1.0]) @ boost(-d)
    return Fixture("klein_238", [a, b], None, 6, "cocompact triangle group in SO(2,1)",
                   {"quadric": LORENTZ3})


BUILDERS = {
    "so21_lattice": so21_lattice,
    "so31_lattice": so31_lattice,
    "diag_z1": diag_z1,
    "diag_z2": diag_z2,
    "quasi_lens_3": quasi_lens_3,
    "quasi_lens_3_negated": lambda: quasi_lens_3(-1.0),
    "quasi_lens_4": quasi_lens_4,
    "quasi_lens_4_negated": lambda: quasi_lens_4(-1.0),
    "bad_vertex_dominant": bad_vertex_dominant,
    "unipotent_cusp": unipotent_cusp,
    "klein_238": klein_238,
}


def fixture(name: str) -> Fixture:
    try:
        return BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {sorted(BUILDERS)}") from None


def data_path(name: str) -> Path:
    return Path(str(resources.files("projends") / "data" / f"{name}.json"))


def write_all(directory: Path) -> list[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name in BUILDERS:
        p = directory / f"{name}.json"
        p.write_text(json.dumps(fixture(name).to_json(), indent=1) + "\n")
        out.append(p)
    return out
