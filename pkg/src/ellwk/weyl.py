"""Reflections, the elliptic Weyl group W^2, Eichler-Siegel transformations and the center.

Exact rationals (numpy object arrays of ``Fraction``) are used for everything
except ``rho(t)`` at complex ``t``.  Matrices act on column coordinate vectors
in the fixed basis (finite block, a, b, a*, b*).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from ._linalg import exact_equal, frac_array, frac_eye, frac_inv, is_exact, to_complex
from .errors import BudgetExhausted, FlagViolation, IsotropicVector
from .rootsys import EllipticRootSystem

MAX_WORD = 64


@dataclass(frozen=True, eq=False)
class OrthogonalElement:
    matrix: np.ndarray = field(repr=False)
    word: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.word is not None and len(self.word) > MAX_WORD:
            object.__setattr__(self, "word", None)

    @property
    def exact(self) -> bool:
        return is_exact(self.matrix)

    def __matmul__(self, other: "OrthogonalElement") -> "OrthogonalElement":
        word = None
        if self.word is not None and other.word is not None:
            word = self.word + other.word
        if self.exact and not other.exact:
            return OrthogonalElement(to_complex(self.matrix) @ other.matrix, word)
        if other.exact and not self.exact:
            return OrthogonalElement(self.matrix @ to_complex(other.matrix), word)
        return OrthogonalElement(self.matrix.dot(other.matrix), word)

    def apply(self, v) -> np.ndarray:
        vec = frac_array(list(v)) if self.exact else np.asarray(v, dtype=complex)
        return self.matrix.dot(vec)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrthogonalElement):
            return NotImplemented
        if self.exact and other.exact:
            return exact_equal(self.matrix, other.matrix)
        return bool(np.allclose(to_complex(self.matrix), to_complex(other.matrix), atol=1e-12))

    __hash__ = None  # type: ignore[assignment]


def identity(sys: EllipticRootSystem) -> OrthogonalElement:
    return OrthogonalElement(frac_eye(sys.n), ())


def root_label(sys: EllipticRootSystem, beta) -> str:
    fin = "".join(str(int(x)) for x in beta[: sys.l])
    return f"[{fin}{int(beta[sys.ia]):+d}a{int(beta[sys.ib]):+d}b]"


def reflect(sys: EllipticRootSystem, beta) -> OrthogonalElement:
    """u -> u - I(u, beta^vee) beta on F^2 (beta^vee = 2 beta / I(beta, beta))."""
    g = sys.space.gram
    b = frac_array(list(beta))
    norm = b.dot(g).dot(b)
    if norm == 0:
        raise IsotropicVector(str(tuple(beta)))
    # column j of the matrix is e_j - (2 I(e_j, beta) / I(beta, beta)) beta
    row = (2 * g.dot(b)) / norm
    m = frac_eye(sys.n) - np.outer(b, row)
    return OrthogonalElement(m, (root_label(sys, beta),))


def inverse(sys: EllipticRootSystem, g: OrthogonalElement) -> OrthogonalElement:
    word = None if g.word is None else tuple(reversed(g.word))
    if g.exact:
        return OrthogonalElement(frac_inv(g.matrix), word)
    return OrthogonalElement(np.linalg.inv(g.matrix), word)


def orthogonality_residual(sys: EllipticRootSystem, g: OrthogonalElement) -> float:
    """0 exactly when g^T Gram g == Gram over Q; max-abs residual otherwise."""
    gram = sys.space.gram
    if g.exact:
        d = g.matrix.T.dot(gram).dot(g.matrix) - gram
        return float(max(abs(v) for v in d.reshape(-1)))
    gf = sys.space.gram_float
    return float(np.max(np.abs(g.matrix.T @ gf @ g.matrix - gf)))


def preserves_flag(sys: EllipticRootSystem, g: OrthogonalElement) -> bool:
    """g(F) in F and g(rad) in rad, with det(g|rad) = 1."""
    m = g.matrix
    f = sys.rank_F
    zero = (lambda v: v == 0) if g.exact else (lambda v: abs(v) < 1e-12)
    if not all(zero(m[i, j]) for j in range(f) for i in range(f, sys.n)):
        return False
    rad = [sys.ia, sys.ib]
    if not all(zero(m[i, j]) for j in rad for i in range(sys.n) if i not in rad):
        return False
    det = m[sys.ia, sys.ia] * m[sys.ib, sys.ib] - m[sys.ia, sys.ib] * m[sys.ib, sys.ia]
    return zero(det - 1)


# --- Eichler-Siegel -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ESTensor:
    """Finite sum of elementary tensors u (x) v in F^2 (x) F^2."""

    terms: tuple[tuple[tuple, tuple], ...] = ()

    @property
    def canonical_form(self) -> np.ndarray:
        if not self.terms:
            raise ValueError("empty tensor has no dimension; use ESTensor.zero(n)")
        n = len(self.terms[0][0])
        t = frac_array(np.zeros((n, n), dtype=int))
        for u, v in self.terms:
            t = t + np.outer(frac_array(list(u)), frac_array(list(v)))
        return t

    @staticmethod
    def zero(n: int) -> "ESTensor":
        z = (0,) * n
        return ESTensor(((z, z),))

    @staticmethod
    def from_matrix(t: np.ndarray) -> "ESTensor":
        n = t.shape[0]
        terms = []
        for i in range(n):
            row = tuple(t[i, j] for j in range(n))
            if any(row):
                terms.append((tuple(int(k == i) for k in range(n)), row))
        return ESTensor(tuple(terms)) if terms else ESTensor.zero(n)

    def __add__(self, other: "ESTensor") -> "ESTensor":
        return ESTensor(self.terms + other.terms)

    def scaled(self, c) -> "ESTensor":
        c = Fraction(c)
        return ESTensor(tuple((tuple(c * Fraction(x) for x in u), tuple(v))
                              for u, v in self.terms))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ESTensor):
            return NotImplemented
        return exact_equal(self.canonical_form, other.canonical_form)

    def __hash__(self) -> int:
        return hash(tuple(self.canonical_form.reshape(-1)))


def wedge_ab(sys: EllipticRootSystem, c=1) -> ESTensor:
    """c * (a (x) b - b (x) a)."""
    c = Fraction(c)
    a = tuple(c * x for x in sys.a)
    mb = tuple(-c * x for x in sys.b)
    return ESTensor(((a, sys.b), (mb, sys.a)))


def es_matrix(sys: EllipticRootSystem, t: np.ndarray) -> np.ndarray:
    """Matrix of u -> u - sum_i alpha_i I(u, beta_i) for canonical form t = sum alpha_i beta_i^T."""
    return frac_eye(sys.n) - t.dot(sys.space.gram)


def es(sys: EllipticRootSystem, t: ESTensor) -> OrthogonalElement:
    return OrthogonalElement(es_matrix(sys, t.canonical_form), None)


def es_product(sys: EllipticRootSystem, t1: ESTensor, t2: ESTensor) -> ESTensor:
    """t1 o t2 = t1 + t2 - sum_ij I(v_i, w_j) u_i (x) x_j, so that es(t1 o t2) = es(t1) es(t2)."""
    cross = []
    for u, v in t1.terms:
        for w, x in t2.terms:
            coef = sys.pair(v, w)
            if coef:
                cross.append((tuple(-coef * Fraction(k) for k in u), tuple(x)))
    return ESTensor(t1.terms + t2.terms + tuple(cross))


def pi2_restrict(sys: EllipticRootSystem, g: OrthogonalElement) -> tuple[np.ndarray, bool]:
    """Restriction g|_F (F = finite block + radical) and whether it is the identity."""
    f = sys.rank_F
    m = g.matrix
    zero = (lambda v: v == 0) if g.exact else (lambda v: abs(v) < 1e-12)
    if not all(zero(m[i, j]) for j in range(f) for i in range(f, sys.n)):
        raise FlagViolation()
    block = m[:f, :f]
    if g.exact:
        flag = exact_equal(block, frac_eye(f))
    else:
        flag = bool(np.allclose(block, np.eye(f), atol=1e-12))
    return block, flag


def kernel_coefficient(sys: EllipticRootSystem, g: OrthogonalElement) -> Fraction:
    """c with g = es(c (a(x)b - b(x)a)), read off from g(b*) = b* - c I(b*, b) a."""
    c = -g.matrix[sys.ia, sys.ibs] / sys.space.gram[sys.ibs, sys.ib]
    expected = es(sys, wedge_ab(sys, c))
    if not (g == expected):
        raise ValueError("kernel element is not of Eichler-Siegel wedge form")
    return Fraction(c)


def generating_roots(sys: EllipticRootSystem, shift: int = 1) -> list[tuple[int, ...]]:
    """alpha_i + n a + m b for simple alpha_i and |n|, |m| <= shift."""
    rng = range(-shift, shift + 1)
    return [sys.root(s[: sys.l], n, m) for s in sys.simple_roots for n in rng for m in rng]


def translation(sys: EllipticRootSystem, beta, radical) -> OrthogonalElement:
    """w_{beta + radical} w_beta."""
    shifted = tuple(x + y for x, y in zip(beta, radical))
    return reflect(sys, shifted) @ reflect(sys, beta)


def commutator(sys: EllipticRootSystem, x: OrthogonalElement, y: OrthogonalElement):
    return x @ y @ inverse(sys, x) @ inverse(sys, y)


@dataclass(frozen=True)
class G0Result:
    coefficient: Fraction  # g0 = coefficient * (a(x)b - b(x)a)
    multiple: Fraction  # positive multiple of sgn(I_F) (a(x)b - b(x)a)
    witness_word: tuple[str, ...]
    found: tuple[Fraction, ...]  # all kernel coefficients seen (signed)
    elements_explored: int
    backend: str

    def as_dict(self) -> dict:
        return {
            "coefficient": _frac_str(self.coefficient),
            "multiple": _frac_str(self.multiple),
            "witness_word": list(self.witness_word),
            "kernel_coefficients": [_frac_str(c) for c in self.found],
            "elements_explored": self.elements_explored,
        }


def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def sgn_IF(sys: EllipticRootSystem) -> int:
    """-1 when I_F is negative semi-definite (the convention here), +1 otherwise."""
    return -1 if sys.gram_scale > 0 else 1


def compute_g0(sys: EllipticRootSystem, max_word_length: int, shift: int = 1,
               max_elements: int = 2_000_000) -> G0Result:
    """Search reflection words up to ``max_word_length`` for the generator of K^2_Z.

    Commutators of translation pairs are tried first; the ball of all distinct
    products of generating reflections is then enumerated breadth first with
    iterative deepening.  Deepening stops early only once a kernel element is
    known and the next ball is predicted to exceed ``max_elements``.
    """
    roots = generating_roots(sys, shift)
    refl = [reflect(sys, r) for r in roots]
    labels = [r.word[0] for r in refl]
    sgn = sgn_IF(sys)
    found: dict[Fraction, tuple[str, ...]] = {}

    if max_word_length >= 8:
        for s in sys.simple_roots:
            ta = translation(sys, s, sys.a)
            tb = translation(sys, s, sys.b)
            k = commutator(sys, ta, tb)
            _, flag = pi2_restrict(sys, k)
            if flag and not exact_equal(k.matrix, frac_eye(sys.n)):
                found.setdefault(kernel_coefficient(sys, k), k.word or ())

    gens = np.array([[[int(v) for v in row] for row in r.matrix] for r in refl], dtype=np.int64)
    f = sys.rank_F
    eye_f = np.eye(f, dtype=np.int64)
    explored = 0
    # kernel elements have determinant 1, hence even length; deepen two at a time
    depths = list(range(min(4, max_word_length), max_word_length + 1, 2))
    if max_word_length not in depths:
        depths.append(max_word_length)
    prev_size = None
    for depth in depths:
        elems, parent, gen_idx, _ = _kernels.bfs_ball(gens, max(depth, 0))
        explored = len(elems)
        blocks = elems[:, :f, :f]
        hits = np.nonzero((blocks == eye_f).all(axis=(1, 2)))[0]
        for idx in hits[1:] if len(hits) and hits[0] == 0 else hits:
            m = elems[idx]
            if np.any(m[f:, :f]):
                continue
            word = []
            j = int(idx)
            while j > 0:
                word.append(labels[gen_idx[j]])
                j = int(parent[j])
            word.reverse()
            c = kernel_coefficient(sys, OrthogonalElement(frac_array(m)))
            if c not in found or len(word) < len(found[c]):
                found[c] = tuple(word)
        growth = explored / prev_size if prev_size else float(explored)
        prev_size = explored
        if any(sgn * c > 0 for c in found) and explored * growth > max_elements:
            break
    positive = sorted(c for c in found if sgn * c > 0)
    if not positive:
        raise BudgetExhausted(f"no kernel element up to word length {max_word_length}")
    best = min(positive, key=lambda c: abs(c))
    return G0Result(best, abs(best), found[best], tuple(sorted(found)), explored,
                    _kernels.BACKEND)


def rho(sys: EllipticRootSystem, c, t: complex) -> OrthogonalElement:
    """es(t c (a(x)b - b(x)a)) with complex entries."""
    wedge = wedge_ab(sys, 1).canonical_form.dot(sys.space.gram)
    w = to_complex(wedge)
    return OrthogonalElement(np.eye(sys.n, dtype=complex) - complex(t) * complex(Fraction(c)) * w)


def rho_exact(sys: EllipticRootSystem, c, t) -> OrthogonalElement:
    """rho at rational t, in exact arithmetic."""
    return es(sys, wedge_ab(sys, Fraction(c) * Fraction(t)))


# --- random material for property checks ---------------------------------------------

def random_word(sys: EllipticRootSystem, rng: random.Random, length: int,
                shift: int = 2) -> OrthogonalElement:
    g = identity(sys)
    fr = sys.finite_roots
    for _ in range(length):
        beta = sys.root(rng.choice(fr), rng.randint(-shift, shift), rng.randint(-shift, shift))
        g = g @ reflect(sys, beta)
    return g


def random_tensor(sys: EllipticRootSystem, rng: random.Random, terms: int = 2,
                  den: int = 5) -> ESTensor:
    def vec():
        return tuple(Fraction(rng.randint(-den, den), rng.randint(1, den)) for _ in range(sys.n))
    return ESTensor(tuple((vec(), vec()) for _ in range(terms)))


def apply_to_root(g: OrthogonalElement, beta: Sequence) -> tuple:
    return tuple(g.apply(beta))


def words_from(sys: EllipticRootSystem, roots: Iterable) -> OrthogonalElement:
    g = identity(sys)
    for r in roots:
        g = g @ reflect(sys, r)
    return g
