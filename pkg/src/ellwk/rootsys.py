"""Elliptic root systems of type X_l^(1,1) and their 2-extensions.

Basis order is fixed everywhere: the l simple roots of the finite system,
then the radical vectors a, b, then the dual isotropic vectors a*, b*.
All vectors are integer (or rational) coordinate tuples in that basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import numpy as np

from ._linalg import frac_array, signature
from .errors import SpecFileError, UnsupportedBaseType

SIMPLY_LACED = ("A", "D", "E")


def cartan_matrix(base_type: str, l: int) -> np.ndarray:
    """Cartan matrix of a simply-laced finite root system (Bourbaki labelling)."""
    t = base_type.upper().rstrip("_")
    if t not in SIMPLY_LACED or l < 1:
        raise UnsupportedBaseType(f"{base_type}_{l}")
    if (t == "D" and l < 4) or (t == "E" and l not in (6, 7, 8)):
        raise UnsupportedBaseType(f"{base_type}_{l}")
    c = 2 * np.eye(l, dtype=np.int64)
    edges: list[tuple[int, int]] = []
    if t == "A":
        edges = [(i, i + 1) for i in range(l - 1)]
    elif t == "D":
        edges = [(i, i + 1) for i in range(l - 2)] + [(l - 3, l - 1)]
    else:
        # E_l: chain 1-3-4-5-...-l with node 2 attached to node 4
        edges = [(0, 2), (1, 3), (2, 3)] + [(i, i + 1) for i in range(3, l - 1)]
    for i, j in edges:
        c[i, j] = c[j, i] = -1
    return c


def finite_root_coords(cartan: np.ndarray) -> list[tuple[int, ...]]:
    """All roots in simple-root coordinates, as the Weyl orbit of the simple roots."""
    l = cartan.shape[0]
    simple = [tuple(int(i == j) for j in range(l)) for i in range(l)]
    seen = set(simple)
    stack = list(simple)
    while stack:
        beta = stack.pop()
        pairing = cartan @ np.array(beta)  # <beta, alpha_i^vee> for each i
        for i in range(l):
            img = list(beta)
            img[i] -= int(pairing[i])
            img = tuple(img)
            if img not in seen:
                seen.add(img)
                stack.append(img)
    return sorted(seen, key=lambda r: (sum(r) < 0, abs(sum(r)), r))


@dataclass(frozen=True)
class BilinearSpace:
    dim: int
    basis_labels: tuple[str, ...]
    gram: np.ndarray = field(repr=False, compare=False)  # Fraction object array
    signature: tuple[int, int, int]

    def __post_init__(self):
        g = self.gram
        if g.shape != (self.dim, self.dim):
            raise ValueError("gram shape does not match dim")
        if any(g[i, j] != g[j, i] for i in range(self.dim) for j in range(i)):
            raise ValueError("gram is not symmetric")
        if signature(g) != self.signature:
            raise ValueError("stored signature does not match the gram matrix")

    def pair(self, u, v) -> Fraction:
        return sum((Fraction(u[i]) * self.gram[i, j] * Fraction(v[j])
                    for i in range(self.dim) for j in range(self.dim)
                    if u[i] and v[j]), Fraction(0))

    @cached_property
    def gram_float(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.gram])

    @cached_property
    def dual_gram_float(self) -> np.ndarray:
        return np.linalg.inv(self.gram_float)

    def sub_block(self, k: int) -> np.ndarray:
        return self.gram[:k, :k]


@dataclass(frozen=True)
class SignedMarking:
    """Radical lattice vector p*a + q*b, required to be primitive."""

    p: int
    q: int

    def __post_init__(self):
        if (self.p, self.q) == (0, 0) or math.gcd(self.p, self.q) != 1:
            raise ValueError(f"({self.p}, {self.q}) is not primitive")


@dataclass(frozen=True)
class EllipticRootSystem:
    base_type: str
    l: int
    finite_roots: tuple[tuple[int, ...], ...]  # in simple-root coordinates
    space: BilinearSpace
    gram_scale: Fraction = Fraction(1)
    orientation: tuple[str, str] = ("a", "b")

    # basis indices
    @property
    def n(self) -> int:
        return self.l + 4

    @property
    def ia(self) -> int:
        return self.l

    @property
    def ib(self) -> int:
        return self.l + 1

    @property
    def ias(self) -> int:
        return self.l + 2

    @property
    def ibs(self) -> int:
        return self.l + 3

    @property
    def rank_F(self) -> int:
        return self.l + 2

    @cached_property
    def base_gram(self) -> np.ndarray:
        """Integer gram before the scalar normalisation (reflections only need this)."""
        return np.array([[int(v / self.gram_scale) for v in row] for row in self.space.gram],
                        dtype=np.int64)

    def unit(self, idx: int) -> tuple[int, ...]:
        return tuple(int(i == idx) for i in range(self.n))

    @property
    def a(self) -> tuple[int, ...]:
        return self.unit(self.ia)

    @property
    def b(self) -> tuple[int, ...]:
        return self.unit(self.ib)

    @property
    def a_star(self) -> tuple[int, ...]:
        return self.unit(self.ias)

    @property
    def b_star(self) -> tuple[int, ...]:
        return self.unit(self.ibs)

    def root(self, finite: tuple[int, ...], n: int = 0, m: int = 0) -> tuple[int, ...]:
        """alpha + n*a + m*b in full coordinates."""
        return tuple(finite) + (n, m, 0, 0)

    @property
    def simple_roots(self) -> list[tuple[int, ...]]:
        return [self.root(tuple(int(i == j) for j in range(self.l))) for i in range(self.l)]

    @cached_property
    def finite_root_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self.finite_roots)

    def pair(self, u, v) -> Fraction:
        return self.space.pair(u, v)

    def is_root(self, v) -> bool:
        """Exact membership in R = R_f + Za + Zb."""
        if any(Fraction(x).denominator != 1 for x in v):
            return False
        if v[self.ias] != 0 or v[self.ibs] != 0:
            return False
        return tuple(int(x) for x in v[: self.l]) in self.finite_root_set


def _gram(cartan: np.ndarray, scale: Fraction) -> np.ndarray:
    l = cartan.shape[0]
    n = l + 4
    g = np.zeros((n, n), dtype=np.int64)
    g[:l, :l] = -cartan
    g[l, l + 2] = g[l + 2, l] = 1
    g[l + 1, l + 3] = g[l + 3, l + 1] = 1
    return frac_array(g) * scale


def build_system(base_type: str, l: int, *, gram_scale=1) -> EllipticRootSystem:
    """Elliptic root system X_l^(1,1) with its 2-extension (I(alpha, alpha) = -2*gram_scale)."""
    t = str(base_type).upper().rstrip("_")
    if t == "E" and l not in (6, 7, 8):
        raise UnsupportedBaseType(f"{base_type}_{l}")
    cartan = cartan_matrix(t, l)
    scale = Fraction(gram_scale)
    if scale == 0:
        raise ValueError("gram_scale must be nonzero")
    gram = _gram(cartan, scale)
    labels = tuple(f"alpha{i + 1}" for i in range(l)) + ("a", "b", "a*", "b*")
    sig = (2, 0, l + 2) if scale > 0 else (l + 2, 0, 2)
    space = BilinearSpace(l + 4, labels, gram, sig)
    roots = tuple(finite_root_coords(cartan))
    return EllipticRootSystem(t, l, roots, space, scale)


def with_finite_roots(sys: EllipticRootSystem, roots) -> EllipticRootSystem:
    """Same 2-extension with a replaced finite root set (used for negative controls)."""
    return replace(sys, finite_roots=tuple(tuple(int(x) for x in r) for r in roots))


def enumerate_roots(sys: EllipticRootSystem, radius: int) -> list[tuple[int, ...]]:
    if radius < 0:
        raise ValueError("radius must be >= 0")
    rng = range(-radius, radius + 1)
    return [sys.root(f, n, m) for f in sys.finite_roots for n in rng for m in rng]


@dataclass(frozen=True)
class AxiomReport:
    radius: int
    lattice_full: bool
    integrality: bool
    closure: bool
    connected: bool
    reduced: bool
    roots_checked: int
    pairs_checked: int
    images_out_of_window: int
    bad_pairings: int

    @property
    def all_pass(self) -> bool:
        return self.lattice_full and self.integrality and self.closure and self.connected

    def as_dict(self) -> dict:
        return {
            "lattice_full": self.lattice_full,
            "integrality": self.integrality,
            "closure": self.closure,
            "connected": self.connected,
            "reduced": self.reduced,
            "roots_checked": self.roots_checked,
            "pairs_checked": self.pairs_checked,
            "images_out_of_window": self.images_out_of_window,
            "bad_pairings": self.bad_pairings,
        }


def hermite_rows(vectors: np.ndarray) -> np.ndarray:
    """Row-style Hermite normal form of an integer matrix (nonzero rows only)."""
    a = [list(map(int, r)) for r in vectors]
    ncols = len(a[0]) if a else 0
    out, pivots = [], []
    for col in range(ncols):
        rows = [r for r in a if r[col] != 0]
        rest = [r for r in a if r[col] == 0]
        while len(rows) > 1:
            rows.sort(key=lambda r: abs(r[col]))
            piv = rows[0]
            nxt = [piv]
            for r in rows[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                (nxt if r[col] != 0 else rest).append(r)
            rows = nxt
        if rows:
            piv = rows[0]
            if piv[col] < 0:
                piv = [-x for x in piv]
            out.append(piv)
            pivots.append(col)
        a = [r for r in rest if any(r)]
    # reduce entries above each pivot into [0, pivot)
    for i, col in enumerate(pivots):
        for j in range(i):
            q = out[j][col] // out[i][col]
            out[j] = [x - q * y for x, y in zip(out[j], out[i])]
    return np.array(out, dtype=object).reshape(len(out), ncols)


def _lattice_index(basis_rows: np.ndarray) -> int:
    h = hermite_rows(basis_rows)
    if h.shape[0] < h.shape[1]:
        return 0
    return int(abs(np.prod([h[i, i] for i in range(h.shape[1])])))


def check_axioms(sys: EllipticRootSystem, radius: int) -> AxiomReport:
    """Axioms 1-4 on the window |n|, |m| <= radius, decided in exact integer arithmetic."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    roots = np.array(enumerate_roots(sys, radius), dtype=np.int64)
    f_dim = sys.rank_F
    in_f = roots[:, :f_dim]

    # (1) the Z-span of the window must be Q(R) and of full rank l+2
    q_gen = np.array([list(r) + [0, 0] for r in sys.finite_roots]
                     + [list(sys.root((0,) * sys.l, 1, 0)[:f_dim]),
                        list(sys.root((0,) * sys.l, 0, 1)[:f_dim])], dtype=np.int64)
    h_window = hermite_rows(in_f)
    h_q = hermite_rows(q_gen)
    lattice_full = (h_window.shape == h_q.shape == (f_dim, f_dim)
                    and all(h_window[i, j] == h_q[i, j]
                            for i in range(f_dim) for j in range(f_dim)))

    # (2) integrality I(alpha, beta^vee) = 2 I(alpha, beta) / I(beta, beta)
    g = sys.base_gram
    p = roots @ g @ roots.T
    norms = np.diag(p)
    two_p = 2 * p
    bad = (two_p % norms[None, :]) != 0
    integrality = not bad.any()

    # (3) closure under w_beta; membership via finite part + integral radical part
    closure = True
    out_of_window = 0
    coef = two_p // norms[None, :]  # valid where integral
    finite_set = sys.finite_root_set
    for j in range(len(roots)):
        beta = roots[j]
        imgs = roots - coef[:, j:j + 1] * beta[None, :]
        for k in range(len(roots)):
            if bad[k, j]:
                closure = False
                continue
            v = imgs[k]
            if tuple(int(x) for x in v[: sys.l]) not in finite_set or v[sys.ias] or v[sys.ibs]:
                closure = False
            elif max(abs(int(v[sys.ia])), abs(int(v[sys.ib]))) > radius:
                out_of_window += 1

    # (4) the pairing graph on finite roots is connected
    fr = np.array([sys.root(r) for r in sys.finite_roots], dtype=np.int64)
    adj = (fr @ g @ fr.T) != 0
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in np.nonzero(adj[i])[0]:
            if int(j) not in seen:
                seen.add(int(j))
                stack.append(int(j))
    connected = len(seen) == len(fr)

    reduced = not any(tuple(2 * x for x in r) in finite_set for r in sys.finite_roots)
    return AxiomReport(radius, lattice_full, integrality, closure, connected, reduced,
                       len(roots), len(roots) ** 2, out_of_window, int(bad.sum()))


def is_signed_marking(sys: EllipticRootSystem, v: tuple[int, int], radius: int) -> bool:
    """Primitive p*a + q*b whose quotient root system (in the window) is reduced."""
    p, q = int(v[0]), int(v[1])
    if (p, q) == (0, 0):
        raise ValueError("v must be nonzero")
    if math.gcd(p, q) != 1:
        return False
    # F / R(pa + qb): finite part plus the radical coordinate n*q - m*p
    images = set()
    rng = range(-radius, radius + 1)
    for f in sys.finite_roots:
        for n in rng:
            for m in rng:
                images.add(tuple(f) + (n * q - m * p,))
    imgs = sorted(images)
    for u in imgs:
        for w in imgs:
            if u == w or all(x == -y for x, y in zip(u, w)):
                continue
            i0 = next(i for i, x in enumerate(u) if x)
            c = Fraction(w[i0], u[i0])
            if c not in (1, -1) and all(Fraction(y) == c * x for x, y in zip(u, w)):
                return False
    return True


def load_spec(path: str | Path) -> EllipticRootSystem:
    """Read ``base = "A"`` / ``rank = 1`` key/value spec file (TOML syntax)."""
    import tomli

    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecFileError(f"{path}: {exc.strerror}") from exc
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise SpecFileError(f"{path}: {exc}") from exc
    for key in ("base", "rank"):
        if key not in data:
            raise SpecFileError(f"{path}: missing field '{key}'")
    base, rank = data["base"], data["rank"]
    if not isinstance(base, str):
        raise SpecFileError(f"{path}: field 'base' must be a string")
    if not isinstance(rank, int) or isinstance(rank, bool):
        raise SpecFileError(f"{path}: field 'rank' must be an integer")
    scale = data.get("gram_scale", 1)
    try:
        return build_system(base, rank, gram_scale=Fraction(str(scale)))
    except UnsupportedBaseType as exc:
        raise SpecFileError(f"{path}: field 'base'/'rank': {exc}") from exc
