from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dsqc.analysis import (
    announcement_distribution,
    efficiency,
    leakage_audit,
    leakage_of_state,
)
from dsqc.errors import ContractViolation
from dsqc.qcore import StateVector, bell_basis
from dsqc.states import CATALOG_NAMES, GenericFormSpec, build_generic, named_state

import oracles


@pytest.mark.parametrize("m", range(2, 7))
def test_equal_dimensions(m):
    assert efficiency(m, m, m, "total_qubits").eta == Fraction(1, 6)
    assert efficiency(m, m, m, "transmitted_qubits").eta == Fraction(1, 4)


def test_ghz_like_total():
    report = efficiency(2, 1, 1)
    assert (report.c, report.q, report.b, report.eta) == (1, 6, 4, Fraction(1, 10))


def valid_dims():
    for m in range(2, 7):
        for l in range(1, m + 1):
            for n in range(1, min(m, l) + 1):
                yield m, l, n


def test_eta_algebra_over_sweep():
    for m, l, n in valid_dims():
        total = efficiency(m, l, n, "total_qubits")
        sent = efficiency(m, l, n, "transmitted_qubits")
        assert total.eta == Fraction(1, 2) * Fraction(n, 2 * m + l)
        assert total.eta == Fraction(total.c, total.q + total.b)
        assert sent.eta == Fraction(n, 2 * m + 2 * l)
        assert sent.eta > total.eta
        assert 0 < total.eta <= Fraction(1, 3)


@pytest.mark.parametrize("args", [(1, 1, 1), (2, 1, 2), (3, 2, 3), (2, 2, 0)])
def test_invalid_dimensions(args):
    with pytest.raises(ContractViolation):
        efficiency(*args)


def test_unknown_convention():
    with pytest.raises(ContractViolation):
        efficiency(2, 2, 2, "per_photon")


def test_report_dict():
    d = efficiency(3, 3, 3).to_dict()
    assert d["eta_exact"] == "1/6" and d["convention"] == "total_qubits"


# -- leakage ---------------------------------------------------------------------

LEAK_FREE = [n for n in CATALOG_NAMES if n != "brown-swapped"]


@pytest.mark.parametrize("name", LEAK_FREE)
def test_catalog_leakage_zero(name):
    assert leakage_audit(named_state(name).spec) <= 1e-12


def test_brown_swapped_announcements_reveal_parity():
    # second-set patterns of the four encodings are 10, 11, 01, 00: their
    # within-set parity (1, 0, 1, 0) is visible in the announced cat label
    spec = named_state("brown-swapped").spec
    e_basis, _ = spec.bases()
    psi = build_generic(spec)
    dists = [announcement_distribution(psi, 3, e_basis.elements[i]).ravel() for i in spec.e_selection]
    tv = np.array([[0.5 * np.abs(a - b).sum() for b in dists] for a in dists])
    expected = np.array([[0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 0]])
    assert np.allclose(tv, expected, atol=1e-12)
    assert abs(leakage_audit(spec) - 1) < 1e-12


def test_brown_family_with_matching_patterns_is_leak_free():
    # G000, G100, G011, G111 share second-set parity
    spec = GenericFormSpec(3, 2, 2, (0, 1, 6, 7), (0, 1, 2, 3), (1, -1, 1, -1))
    assert leakage_audit(spec) <= 1e-12


def _pattern_signature(m: int, index: int) -> tuple:
    u = [0] + [int(b) for b in format(index >> 1, f"0{m - 1}b")]
    p = m // 2
    first, second = u[:p], u[p:]
    return tuple(b ^ first[0] for b in first), tuple(b ^ second[0] for b in second)


@st.composite
def specs(draw):
    m = draw(st.integers(2, 4))
    l = draw(st.integers(1, 2))
    n = draw(st.integers(1, min(m, l)))
    size = 1 << n
    e_sel = draw(st.permutations(range(1 << m)))[:size]
    f_sel = draw(st.permutations(range(1 << l)))[:size]
    signs = draw(st.lists(st.sampled_from([1, -1]), min_size=size, max_size=size))
    return GenericFormSpec(m, l, n, tuple(e_sel), tuple(f_sel), tuple(signs))


@given(specs())
def test_leakage_matches_pattern_oracle(spec):
    sigs = {_pattern_signature(spec.m, i) for i in spec.e_selection}
    leak = leakage_audit(spec)
    if len(sigs) == 1:
        assert leak <= 1e-12
    else:
        assert abs(leak - 1) <= 1e-12


@given(specs())
def test_two_qubit_cat_families_never_leak(spec):
    if spec.m == 2:
        assert leakage_audit(spec) <= 1e-12


def test_announcement_distribution_normalized():
    spec = named_state("ghz-like").spec
    d = announcement_distribution(build_generic(spec), 2, bell_basis().element("psi-"))
    assert d.shape == (4, 4) and abs(d.sum() - 1) < 1e-12
    support = d[d > 1e-12]
    assert len(support) == 8 and np.allclose(support, 1 / 8, atol=1e-12)


def test_announcement_size_check():
    with pytest.raises(ContractViolation):
        announcement_distribution(named_state("ghz").vector, 3, StateVector.from_bits("000"))


# -- negative controls -------------------------------------------------------------

def _state(vec):
    return StateVector.from_amplitudes(vec, normalize=True)


def test_non_cat_e_with_overlapping_f_leaks():
    e0 = StateVector.from_bits("00")
    e1 = StateVector.from_amplitudes(np.array([1, 1, 0, 0]) / np.sqrt(2))
    psi = _state(oracles.kron(e0.amplitudes, oracles.KET0) + oracles.kron(e1.amplitudes, oracles.PLUS))
    assert abs(leakage_of_state(psi, 2, [e0, e1]) - 1 / 3) < 1e-12


def test_unequal_weights_leak():
    bell = bell_basis()
    es = [bell.element("psi+"), bell.element("psi-")]
    psi = _state(np.sqrt(0.8) * oracles.kron(oracles.BELL["psi+"], oracles.KET0)
                 + np.sqrt(0.2) * oracles.kron(oracles.BELL["psi-"], oracles.KET1))
    assert abs(leakage_of_state(psi, 2, es) - 0.6) < 1e-12


def test_cat_e_with_overlapping_f_does_not_leak():
    # announcement statistics only see Alice's side, so non-orthogonal |f> alone is invisible
    bell = bell_basis()
    es = [bell.element("psi+"), bell.element("psi-")]
    psi = _state(oracles.kron(oracles.BELL["psi+"], oracles.KET0) + oracles.kron(oracles.BELL["psi-"], oracles.PLUS))
    assert leakage_of_state(psi, 2, es) <= 1e-12


def test_leakage_of_catalog_vector_agrees_with_audit():
    spec = named_state("omega").spec
    e_basis, _ = spec.bases()
    es = [e_basis.elements[i] for i in spec.e_selection]
    assert leakage_of_state(named_state("omega").vector, 2, es) == leakage_audit(spec)

