from fractions import Fraction

import pytest

from ellwk.errors import SpecFileError, UnsupportedBaseType
from ellwk.rootsys import (build_system, cartan_matrix, check_axioms, enumerate_roots,
                           finite_root_coords, hermite_rows, is_signed_marking, load_spec,
                           with_finite_roots)


def test_a1_space(a1):
    assert a1.n == 5
    assert a1.space.signature == (2, 0, 3)
    g = a1.space.gram
    assert g[0, 0] == -2
    assert g[a1.ia, a1.ias] == g[a1.ib, a1.ibs] == 1
    assert g[a1.ia, a1.ia] == g[a1.ia, a1.ib] == 0


def test_a2_and_d4():
    a2 = build_system("A", 2)
    assert a2.space.signature == (2, 0, 4)
    assert len(a2.finite_roots) == 6
    d4 = build_system("D", 4)
    assert d4.n == 8 and len(d4.finite_roots) == 24


def test_d4_roots_match_brute_force():
    # D4 roots are +-e_i +- e_j; their count in simple-root coordinates must agree
    import itertools
    brute = {tuple(s1 * (k == i) + s2 * (k == j) for k in range(4))
             for i, j in itertools.combinations(range(4), 2) for s1 in (1, -1) for s2 in (1, -1)}
    assert len(brute) == len(finite_root_coords(cartan_matrix("D", 4)))


def test_gram_scale():
    s = build_system("A", 1, gram_scale=2)
    assert s.space.gram[0, 0] == -4
    assert s.gram_scale == Fraction(2)


def test_unsupported_type():
    with pytest.raises(UnsupportedBaseType):
        build_system("Q", 3)


@pytest.mark.parametrize("base,l,radius,count", [("A", 1, 0, 2), ("A", 1, 1, 18), ("A", 2, 2, 150)])
def test_enumerate_roots_counts(base, l, radius, count):
    roots = enumerate_roots(build_system(base, l), radius)
    assert len(roots) == count == len(set(roots))


def test_enumerate_negative_radius(a1):
    with pytest.raises(ValueError):
        enumerate_roots(a1, -1)


@pytest.mark.parametrize("base,l", [("A", 1), ("A", 2), ("D", 4)])
def test_axioms_pass(base, l):
    rep = check_axioms(build_system(base, l), 2 if l < 4 else 1)
    assert rep.all_pass and rep.reduced
    assert rep.images_out_of_window > 0


def test_doubled_roots_not_reduced(a1):
    # the window pairing stays integral for {+-alpha, +-2alpha}; reducedness flags it
    doubled = with_finite_roots(a1, [(1,), (-1,), (2,), (-2,)])
    rep = check_axioms(doubled, 1)
    assert not rep.reduced


def test_hermite_canonical():
    import numpy as np
    a = hermite_rows(np.array([[1, -1, -1], [0, 1, 0], [0, 0, 1], [2, 0, 0]]))
    assert a.tolist() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


@pytest.mark.parametrize("v,radius,expected", [((1, 0), 3, True), ((2, 0), 3, False),
                                               ((3, 5), 6, True), ((0, 1), 2, True)])
def test_signed_marking(a1, v, radius, expected):
    assert is_signed_marking(a1, v, radius) is expected


def test_load_spec(tmp_path):
    p = tmp_path / "s.toml"
    p.write_text('base = "A"\nrank = 2\ngram_scale = "1/2"\n')
    s = load_spec(p)
    assert s.l == 2 and s.gram_scale == Fraction(1, 2)


@pytest.mark.parametrize("text,needle", [
    ('rank = 1\n', "base"),
    ('base = "A"\nrank = "x"\n', "rank"),
    ('base = "A"\nrank = \n', "line 2"),
    ('base = "Z"\nrank = 1\n', "base"),
])
def test_load_spec_errors(tmp_path, text, needle):
    p = tmp_path / "bad.toml"
    p.write_text(text)
    with pytest.raises(SpecFileError, match=needle):
        load_spec(p)


def test_load_spec_missing(tmp_path):
    with pytest.raises(SpecFileError):
        load_spec(tmp_path / "absent.toml")
