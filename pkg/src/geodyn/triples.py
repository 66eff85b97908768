"""Finite-dimensional real spectral triples.

A triple bundles an algebra representation (a list of generator matrices on
the Hilbert space), a Dirac matrix, an optional grading, and an optional real
structure J = K o conj with sign table (eps, eps', eps'').  check_axioms
measures every defining identity; nothing is assumed beyond shapes.

The antilinear J acts as v -> K conj(v), so conjugation by J on operators is
J M J^-1 = K conj(M) K^dagger, independent of eps.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "FiniteTriple",
    "AxiomReport",
    "AlgebraElement",
    "YukawaData",
    "FluctuationElement",
    "check_axioms",
    "inner_fluctuations",
    "fluctuation_space",
    "span_residual",
    "fluctuate",
    "unimodular_projection",
    "split_u3",
    "build_sm_finite",
    "two_point_triple",
    "lepton_triple",
]


def _as_matrix(m, name: str) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class FiniteTriple:
    """Algebra generators, Dirac matrix, grading and real structure."""

    dim: int
    algebra_generators: tuple
    d: np.ndarray
    gamma: np.ndarray | None = None
    k: np.ndarray | None = None
    epsilon_signs: tuple = (1, 1, 1)
    first_order_claimed: bool = True
    dirac_hermitian_claimed: bool = True
    label: str = ""

    def __post_init__(self):
        d = _as_matrix(self.d, "D")
        if d.shape[0] != self.dim:
            raise ValueError(f"D is {d.shape[0]}x{d.shape[0]} but dim = {self.dim}")
        gens = tuple(_as_matrix(a, "algebra generator") for a in self.algebra_generators)
        if any(a.shape[0] != self.dim for a in gens):
            raise ValueError("algebra generators must match the Hilbert dimension")
        gamma = None if self.gamma is None else _as_matrix(self.gamma, "gamma")
        if gamma is not None and gamma.shape[0] != self.dim:
            raise ValueError("grading must match the Hilbert dimension")
        k = None if self.k is None else _as_matrix(self.k, "K")
        if k is not None and k.shape[0] != self.dim:
            raise ValueError("K must match the Hilbert dimension")
        if any(s not in (-1, 1) for s in self.epsilon_signs) or len(self.epsilon_signs) != 3:
            raise ValueError("epsilon signs must be a triple of +-1")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "algebra_generators", gens)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "k", k)

    def conjugate_by_j(self, m: np.ndarray) -> np.ndarray:
        """J M J^-1 for a matrix M."""
        if self.k is None:
            raise ValueError("triple has no real structure")
        return self.k @ np.conj(m) @ self.k.conj().T

    def with_dirac(self, d_new: np.ndarray) -> "FiniteTriple":
        return replace(self, d=d_new)


@dataclass
class AxiomReport:
    """Residuals of the defining identities; None marks unclaimed structure."""

    dirac_hermitian: float
    grading_hermitian: float | None
    grading_squares: float | None
    grading_commutes_algebra: float | None
    grading_anticommutes_dirac: float | None
    j_squares: float | None
    j_dirac: float | None
    j_grading: float | None
    order_zero: float | None
    first_order: float | None
    first_order_claimed: bool
    dirac_hermitian_claimed: bool
    commutator_bound: float

    def residual_items(self):
        skip = {"commutator_bound", "first_order_claimed", "dirac_hermitian_claimed"}
        for name, val in self.__dict__.items():
            if name in skip or val is None:
                continue
            if name == "first_order" and not self.first_order_claimed:
                continue
            if name == "dirac_hermitian" and not self.dirac_hermitian_claimed:
                continue
            yield name, val

    def worst(self) -> float:
        return max((v for _, v in self.residual_items()), default=0.0)

    def all_passed(self, tol: float = 1e-12) -> bool:
        return self.worst() <= tol


def _max_abs(m: np.ndarray) -> float:
    return float(np.abs(m).max()) if m.size else 0.0


def check_axioms(t: FiniteTriple) -> AxiomReport:
    """Measure every claimed identity of the triple.

    Boundedness of [D, a] is automatic in finite dimension; the report carries
    the largest spectral norm over the generators instead.
    """
    d = t.d
    eye = np.eye(t.dim)
    dirac_h = _max_abs(d - d.conj().T)
    g_h = g_sq = g_comm = g_anti = None
    if t.gamma is not None:
        g = t.gamma
        g_h = _max_abs(g - g.conj().T)
        g_sq = _max_abs(g @ g - eye)
        g_comm = max((_max_abs(g @ a - a @ g) for a in t.algebra_generators),
                     default=0.0)
        g_anti = _max_abs(g @ d + d @ g)
    j_sq = j_d = j_g = order_zero = first_order = None
    if t.k is not None:
        eps, eps_p, eps_pp = t.epsilon_signs
        k = t.k
        j_sq = _max_abs(k @ np.conj(k) - eps * eye)
        j_d = _max_abs(k @ np.conj(d) - eps_p * d @ k)
        if t.gamma is not None:
            j_g = _max_abs(k @ np.conj(t.gamma) - eps_pp * t.gamma @ k)
        order_zero = 0.0
        first_order = 0.0
        for a in t.algebra_generators:
            da = d @ a - a @ d
            for b in t.algebra_generators:
                bo = t.conjugate_by_j(b)
                order_zero = max(order_zero, _max_abs(a @ bo - bo @ a))
                first_order = max(first_order, _max_abs(da @ bo - bo @ da))
    bound = max((float(np.linalg.norm(d @ a - a @ d, 2))
                 for a in t.algebra_generators), default=0.0)
    return AxiomReport(
        dirac_hermitian=dirac_h,
        grading_hermitian=g_h,
        grading_squares=g_sq,
        grading_commutes_algebra=g_comm,
        grading_anticommutes_dirac=g_anti,
        j_squares=j_sq,
        j_dirac=j_d,
        j_grading=j_g,
        order_zero=order_zero,
        first_order=first_order,
        first_order_claimed=t.first_order_claimed,
        dirac_hermitian_claimed=t.dirac_hermitian_claimed,
        commutator_bound=bound,
    )


# -- algebra elements of C + H + M3(C) ----------------------------------------


@dataclass(frozen=True)
class AlgebraElement:
    """An element (lambda, q, m) of C + H + M3(C).

    q must be a quaternion in the 2x2 complex form [[x, y], [-y*, x*]].  The
    canonical block representation acts on C^6 = C + C^2 + C^3.
    """

    lam: complex
    q: np.ndarray
    m: np.ndarray

    def __post_init__(self):
        q = _as_matrix(self.q, "quaternion part")
        m = _as_matrix(self.m, "M3 part")
        if q.shape != (2, 2):
            raise ValueError("quaternion part must be 2x2")
        if m.shape != (3, 3):
            raise ValueError("matrix part must be 3x3")
        if self.quaternion_residual_of(q) > 1e-12:
            raise ValueError("q is not of the quaternion form [[x, y], [-y*, x*]]")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "m", m)

    @staticmethod
    def quaternion_residual_of(q: np.ndarray) -> float:
        return float(max(abs(q[1, 0] + np.conj(q[0, 1])),
                         abs(q[1, 1] - np.conj(q[0, 0]))))

    def block_rep(self) -> np.ndarray:
        out = np.zeros((6, 6), dtype=complex)
        out[0, 0] = self.lam
        out[1:3, 1:3] = self.q
        out[3:6, 3:6] = self.m
        return out

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(self.lam * other.lam, self.q @ other.q,
                              self.m @ other.m)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(self.lam + other.lam, self.q + other.q,
                              self.m + other.m)

    @classmethod
    def random(cls, rng) -> "AlgebraElement":
        x, y = rng.normal(size=2) + 1j * rng.normal(size=2)
        q = np.array([[x, y], [-np.conj(y), np.conj(x)]])
        m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        lam = complex(rng.normal() + 1j * rng.normal())
        return cls(lam, q, m)


# -- inner fluctuations --------------------------------------------------------


@dataclass
class FluctuationElement:
    """A gauge potential A = sum_i a_i [D, b_i] on a finite triple."""

    pairs: tuple
    a: np.ndarray
    hermitian_projected: bool = False

    def matrix(self) -> np.ndarray:
        return self.a

    def hermitian(self) -> "FluctuationElement":
        if self.hermitian_projected:
            return self
        return FluctuationElement(pairs=self.pairs,
                                  a=0.5 * (self.a + self.a.conj().T),
                                  hermitian_projected=True)

    def trace(self) -> complex:
        return complex(np.trace(self.a))


def inner_fluctuations(t: FiniteTriple, pairs) -> FluctuationElement:
    """A = sum_i a_i [D, b_i] for a list of matrix pairs (a_i, b_i)."""
    pairs = tuple((_as_matrix(a, "a_i"), _as_matrix(b, "b_i")) for a, b in pairs)
    if not pairs:
        raise ValueError("at least one (a, b) pair required")
    acc = np.zeros((t.dim, t.dim), dtype=complex)
    for a, b in pairs:
        acc += a @ (t.d @ b - b @ t.d)
    return FluctuationElement(pairs=pairs, a=acc)


def fluctuation_space(t: FiniteTriple, rcond: float = 1e-10):
    """Span of {a_i [D, b_j]} over the generator list.

    Returns (dimension, orthonormal basis) with basis rows the vectorized
    span elements from an SVD of the generator sweep.
    """
    rows = []
    for a in t.algebra_generators:
        for b in t.algebra_generators:
            rows.append((a @ (t.d @ b - b @ t.d)).ravel())
    if not rows:
        return 0, np.zeros((0, t.dim * t.dim), dtype=complex)
    mat = np.array(rows)
    if not np.abs(mat).max():
        return 0, np.zeros((0, t.dim * t.dim), dtype=complex)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    keep = s > rcond * s[0]
    return int(keep.sum()), vh[keep]


def span_residual(basis: np.ndarray, m: np.ndarray) -> float:
    """Distance of m from the row span of an orthonormal basis."""
    v = m.ravel()
    if basis.shape[0] == 0:
        return float(np.linalg.norm(v))
    proj = basis.conj() @ v
    return float(np.linalg.norm(v - basis.T @ proj))


def fluctuate(t: FiniteTriple, a: FluctuationElement,
              hermitian_projection: bool = True) -> FiniteTriple:
    """Perturbed triple with D' = D + A + J A J^-1.

    The Hermitian projection (on by default) replaces A by (A + A^dagger)/2
    before fluctuating, which keeps D' Hermitian.  The first-order and
    grading residuals of the result are available via check_axioms.
    """
    if t.k is None:
        raise ValueError("fluctuation needs a real structure J")
    elem = a.hermitian() if hermitian_projection else a
    mat = elem.matrix()
    d_new = t.d + mat + t.conjugate_by_j(mat)
    return t.with_dirac(d_new)


def unimodular_projection(a: FluctuationElement) -> FluctuationElement:
    """Remove the trace part: A -> A - (Tr A / dim) I."""
    mat = a.matrix()
    dim = mat.shape[0]
    shifted = mat - (np.trace(mat) / dim) * np.eye(dim)
    return FluctuationElement(pairs=a.pairs, a=shifted,
                              hermitian_projected=a.hermitian_projected)


def split_u3(v: np.ndarray) -> tuple:
    """Split a u(3) block as V = -V' - (1/3) Lambda I with V' traceless.

    Returns (lam, vprime) where lam = -Tr(V).
    """
    v = _as_matrix(v, "V")
    if v.shape != (3, 3):
        raise ValueError("V must be 3x3")
    lam = -complex(np.trace(v))
    vprime = -v - (lam / 3.0) * np.eye(3)
    return lam, vprime


# -- built-in triples ----------------------------------------------------------


def two_point_triple(m: complex = 1.0) -> FiniteTriple:
    """The two-point space: H = C^2, D = [[0, m], [m*, 0]], gamma = diag(1,-1).

    J is the swap composed with conjugation; sign table (1, 1, -1).  The
    first-order condition fails for this triple whenever m != 0, so it is
    not claimed.
    """
    d = np.array([[0.0, m], [np.conj(m), 0.0]], dtype=complex)
    gamma = np.diag([1.0, -1.0]).astype(complex)
    k = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    gens = (np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex))
    return FiniteTriple(dim=2, algebra_generators=gens, d=d, gamma=gamma, k=k,
                        epsilon_signs=(1, 1, -1), first_order_claimed=False,
                        label="two-point")


def lepton_triple(k_e: np.ndarray | None = None) -> FiniteTriple:
    """A lepton-sector triple on C^12 = (a, b, abar, bbar) with 3 generations.

    D couples a <-> b through k_e and the conjugate blocks through its
    conjugate.  The algebra is spanned by the two chiral projectors on the
    particle half plus the scalar projector on the conjugate half; elements
    act as (x, y) on the particle slots and as a single scalar z on all
    conjugate slots.  With that representation the conjugate action J b J^-1
    is scalar wherever [D, a] lives, so the order-zero and first-order
    conditions hold exactly.
    """
    ke = np.eye(3, dtype=complex) if k_e is None else _as_matrix(k_e, "k_e")
    if ke.shape != (3, 3):
        raise ValueError("k_e must be 3x3")
    z = np.zeros((3, 3), dtype=complex)
    top = np.block([[z, ke], [ke.conj().T, z]])
    d = np.block([[top, np.zeros((6, 6))], [np.zeros((6, 6)), np.conj(top)]])
    gamma = np.diag([1.0] * 3 + [-1.0] * 3 + [1.0] * 3 + [-1.0] * 3).astype(complex)
    k = np.block([[np.zeros((6, 6)), np.eye(6)], [np.eye(6), np.zeros((6, 6))]]).astype(complex)
    gens = []
    for i in range(2):
        p = np.zeros((12, 12), dtype=complex)
        p[3 * i:3 * i + 3, 3 * i:3 * i + 3] = np.eye(3)
        gens.append(p)
    anti = np.zeros((12, 12), dtype=complex)
    anti[6:, 6:] = np.eye(6)
    gens.append(anti)
    return FiniteTriple(dim=12, algebra_generators=tuple(gens), d=d, gamma=gamma,
                        k=k, epsilon_signs=(1, 1, 1), first_order_claimed=True,
                        label="lepton")


# -- Standard Model Yukawa sector ----------------------------------------------


E_DOWN = np.array([0.0, 1.0], dtype=complex)            # doublet slot hit by k^d, k^e
E_UP = np.array([1.0, 0.0], dtype=complex)              # i sigma_2 applied to E_DOWN


@dataclass(frozen=True)
class YukawaData:
    """Yukawa matrices in generation space and their assembled blocks.

    Basis order: quark sector (Q_L doublet x 3 generations, d_R, u_R) with
    color multiplicity 3, then lepton sector (l_L doublet x 3, e_R).  The
    total Dirac matrix doubles everything with the conjugate block.
    """

    k_u: np.ndarray
    k_d: np.ndarray
    k_e: np.ndarray

    def __post_init__(self):
        for name in ("k_u", "k_d", "k_e"):
            mat = _as_matrix(getattr(self, name), name)
            if mat.shape != (3, 3):
                raise ValueError(f"{name} must be 3x3 (three generations)")
            object.__setattr__(self, name, mat)

    def y_quark(self) -> np.ndarray:
        """12x12 block on (Q_L(6), d_R(3), u_R(3))."""
        out = np.zeros((12, 12), dtype=complex)
        out[0:6, 6:9] = np.kron(E_DOWN[:, None], self.k_d)
        out[0:6, 9:12] = np.kron(E_UP[:, None], self.k_u)
        out[6:9, 0:6] = np.kron(E_DOWN[None, :], np.conj(self.k_d))
        out[9:12, 0:6] = np.kron(E_UP[None, :], np.conj(self.k_u))
        return out

    def y_lepton(self) -> np.ndarray:
        """9x9 block on (l_L(6), e_R(3))."""
        out = np.zeros((9, 9), dtype=complex)
        out[0:6, 6:9] = np.kron(E_DOWN[:, None], self.k_e)
        out[6:9, 0:6] = np.kron(E_UP[None, :], np.conj(self.k_e))
        return out

    def y_total(self) -> np.ndarray:
        """45x45: color-tripled quark block direct-summed with the leptons."""
        yq = np.kron(self.y_quark(), np.eye(3))
        yl = self.y_lepton()
        out = np.zeros((45, 45), dtype=complex)
        out[:36, :36] = yq
        out[36:, 36:] = yl
        return out

    def d_y(self) -> np.ndarray:
        """90x90 Yukawa Dirac matrix [[Y, 0], [0, conj(Y)]]."""
        y = self.y_total()
        out = np.zeros((90, 90), dtype=complex)
        out[:45, :45] = y
        out[45:, 45:] = np.conj(y)
        return out

    def hermiticity_residual(self) -> float:
        d = self.d_y()
        return _max_abs(d - d.conj().T)

    def sector_dimensions(self) -> dict:
        return {"quark_block": 12, "quark_with_color": 36, "lepton_block": 9,
                "particle_total": 45, "hilbert": 90}


def _chirality_pattern_45() -> np.ndarray:
    """-1 on left-handed slots, +1 on right-handed slots, colored then leptons."""
    quark12 = np.array([-1.0] * 6 + [1.0] * 6)
    colored = np.repeat(quark12, 3)
    lepton = np.array([-1.0] * 6 + [1.0] * 3)
    return np.concatenate([colored, lepton])


def build_sm_finite(yukawa: YukawaData) -> FiniteTriple:
    """Assemble the 90-dimensional Yukawa-sector triple.

    The grading is -1 on left-handed and +1 on right-handed slots, repeated
    on the conjugate half; J swaps the two halves and conjugates, with sign
    table (1, 1, 1).  The algebra representation on this space is not
    forced by the axioms, so the generator list is the diagonal
    sector-projector algebra: chiral sectors on the particle half plus the
    scalar projector on the conjugate half.  Every claimed identity is
    then exact.
    Hermiticity of D depends on the Yukawa inputs and is reported, not
    asserted: the quark block is Hermitian iff k_u and k_d are symmetric,
    while the lepton block pairs the down-slot embedding of k_e with the
    up-slot embedding of its conjugate and so is Hermitian only for k_e = 0.
    """
    d = yukawa.d_y()
    chir = _chirality_pattern_45()
    gamma = np.diag(np.concatenate([chir, chir])).astype(complex)
    k = np.zeros((90, 90), dtype=complex)
    k[:45, 45:] = np.eye(45)
    k[45:, :45] = np.eye(45)
    gens = []
    slots = {
        "quark_left": np.arange(36)[np.repeat([True] * 6 + [False] * 6, 3)],
        "quark_right": np.arange(36)[np.repeat([False] * 6 + [True] * 6, 3)],
        "lepton_left": 36 + np.arange(6),
        "lepton_right": 42 + np.arange(3),
    }
    for idx in slots.values():
        p = np.zeros((90, 90), dtype=complex)
        p[idx, idx] = 1.0
        gens.append(p)
    anti = np.zeros((90, 90), dtype=complex)
    anti[45:, 45:] = np.eye(45)
    gens.append(anti)
    return FiniteTriple(dim=90, algebra_generators=tuple(gens), d=d, gamma=gamma,
                        k=k, epsilon_signs=(1, 1, 1), first_order_claimed=True,
                        dirac_hermitian_claimed=False, label="sm-yukawa")
