import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import confode.chareq as chareq
from confode.chareq import (
    CharPoly,
    RootFindingError,
    RootSet,
    eval_poly,
    eval_poly_deriv,
    find_roots,
    reconstruct_coeffs,
)


def entries(p_coeffs):
    return find_roots(CharPoly(p_coeffs)).entries


def test_charpoly_validation():
    with pytest.raises(ValueError):
        CharPoly(())
    assert CharPoly((3, 4)).degree == 2
    assert CharPoly((3, 4)).full() == [1.0, 4.0, 3.0]


def test_eval_poly_horner():
    p = CharPoly((3.0, 4.0))  # r^2 + 4r + 3
    assert eval_poly(p, 0.0) == 3.0
    assert eval_poly(p, -1.0) == 0.0
    assert eval_poly(p, 2.0) == 15.0
    assert eval_poly(p, 1j) == (2 + 4j)


def test_eval_poly_deriv():
    p = CharPoly((3.0, 4.0))
    assert eval_poly_deriv(p, 2.0, 0) == 15.0
    assert eval_poly_deriv(p, 2.0, 1) == 8.0   # 2r + 4
    assert eval_poly_deriv(p, 2.0, 2) == 2.0
    assert eval_poly_deriv(p, 2.0, 3) == 0.0
    assert eval_poly_deriv(p, 2.0, 7) == 0.0


# --- worked root sets ------------------------------------------------------

def test_two_simple_real_roots():
    got = entries((3.0, 4.0))
    assert len(got) == 2
    (z1, m1), (z2, m2) = got
    assert (m1, m2) == (1, 1)
    assert z1 == pytest.approx(-3.0, abs=1e-12)
    assert z2 == pytest.approx(-1.0, abs=1e-12)


def test_double_root():
    got = entries((25.0, -10.0))
    assert got == ((5.0 + 0.0j, 2),)


def test_complex_pair():
    got = entries((1.0, 1.0))
    s3 = math.sqrt(3.0) / 2.0
    assert len(got) == 2
    assert got[0][0] == got[1][0].conjugate()
    top = got[1][0]
    assert top.real == pytest.approx(-0.5, abs=1e-12)
    assert top.imag == pytest.approx(s3, abs=1e-12)


def test_triple_root():
    # (r - 1)^3 = r^3 - 3 r^2 + 3 r - 1
    got = entries((-1.0, 3.0, -3.0))
    assert got == ((1.0 + 0.0j, 3),)


def test_degree_one():
    assert entries((5.0,)) == ((-5.0 + 0.0j, 1),)


def test_double_complex_pair():
    # (r^2 + 1)^2
    got = entries((1.0, 0.0, 2.0, 0.0))
    assert got == ((-1j, 2), (1j, 2))


def test_nonconvergence_is_reported(monkeypatch):
    monkeypatch.setattr(chareq, "ABERTH_MAX_ITER", 0)
    with pytest.raises(RootFindingError) as err:
        find_roots(CharPoly((3.0, 4.0)))
    assert "r^2" in str(err.value)


# --- invariants ------------------------------------------------------------

def _mult_consistency(p: CharPoly, rs: RootSet):
    scale = max([1.0] + [abs(c) for c in p.coeffs])
    for z, m in rs.entries:
        for j in range(m):
            assert abs(eval_poly_deriv(p, z, j)) < 1e-6 * scale, (p, z, m, j)
        assert abs(eval_poly_deriv(p, z, m)) > 1e-3 * scale, (p, z, m)


@pytest.mark.parametrize("coeffs", [
    (3.0, 4.0), (25.0, -10.0), (1.0, 1.0), (-1.0, 3.0, -3.0),
    (1.0, 0.0, 2.0, 0.0), (5.0,),
])
def test_multiplicity_consistency(coeffs):
    p = CharPoly(coeffs)
    _mult_consistency(p, find_roots(p))


coeff_lists = st.lists(
    st.floats(min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False),
    min_size=1, max_size=5)


@given(coeff_lists)
def test_random_polys_resolve_and_reconstruct(coeffs):
    p = CharPoly(tuple(coeffs))
    rs = find_roots(p)
    assert rs.total_multiplicity == p.degree
    # conjugate closure is exact
    as_set = {(z.real, z.imag, m) for z, m in rs.entries}
    for z, m in rs.entries:
        assert (z.real, -z.imag, m) in as_set
    # sorted deterministically
    keys = [(z.real, z.imag) for z, _ in rs.entries]
    assert keys == sorted(keys)
    recon = reconstruct_coeffs(rs)
    full = np.array(p.full())
    assert np.max(np.abs(recon - full)) <= 1e-8 * (1.0 + np.max(np.abs(full)))


def test_reconstruction_from_planted_root_sets():
    # random root sets with multiplicities <= 3, degree <= 6, pairwise
    # separation comfortably above the clustering radius
    rng = np.random.default_rng(20240817)
    for _ in range(40):
        roots: list[tuple[complex, int]] = []
        degree = 0
        while degree < 6:
            m = int(rng.integers(1, 4))
            if degree + m > 6:
                break
            if rng.random() < 0.5:
                z = complex(round(rng.uniform(-3, 3), 2), 0.0)
                need = m
            else:
                z = complex(round(rng.uniform(-2, 2), 2), round(rng.uniform(0.2, 2), 2))
                need = 2 * m
            if degree + need > 6:
                continue
            if any(abs(z - w) < 0.15 or abs(z - w.conjugate()) < 0.15 for w, _ in roots):
                continue
            roots.append((z, m))
            degree += need
        full = np.array([1.0 + 0j])
        expected = []
        for z, m in roots:
            for _ in range(m):
                full = np.convolve(full, np.array([1.0, -z]))
                if z.imag:
                    full = np.convolve(full, np.array([1.0, -z.conjugate()]))
            expected.append((z, m))
        p = CharPoly(tuple(full.real[1:][::-1]))
        rs = find_roots(p)
        recon = reconstruct_coeffs(rs)
        scale = 1.0 + np.max(np.abs(full.real))
        assert np.max(np.abs(recon - np.array(p.full()))) <= 1e-8 * scale, (p, rs)
        assert rs.total_multiplicity == p.degree


def test_root_records_shape():
    rs = find_roots(CharPoly((1.0, 1.0)))
    recs = rs.to_records()
    assert recs == sorted(recs, key=lambda r: (r["re"], r["im"]))
    assert all(set(r) == {"re", "im", "mult"} for r in recs)
