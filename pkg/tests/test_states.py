import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dsqc.errors import SpecError
from dsqc.qcore import StateVector, bell_basis, computational_basis
from dsqc.states import (
    CATALOG_NAMES,
    GenericFormSpec,
    build_generic,
    load_state,
    named_state,
    verify_generic_form,
)

import oracles
from oracles import BELL, KET0, KET1, MINUS, PLUS, brown_g, ket, kron

H = 0.5


# Hand-transcribed printed forms of the eight catalog members (qubit order 1..m+l)
PRINTED = {
    "cluster": H * (ket("0000") + ket("0011") + ket("1100") - ket("1111")),
    "cluster-swapped": H * (ket("0000") + ket("0101") + ket("1010") - ket("1111")),
    "cat4": oracles.S2 * (kron(BELL["psi+"], BELL["psi+"]) + kron(BELL["psi-"], BELL["psi-"])),
    "ghz": oracles.S2 * (kron(BELL["psi+"], PLUS) + kron(BELL["psi-"], MINUS)),
    "ghz-like": oracles.S2 * (kron(BELL["psi+"], KET0) + kron(BELL["psi-"], KET1)),
    "brown-swapped": H * (
        kron(brown_g(0, 1, 0), ket("00")) - kron(brown_g(1, 1, 1), ket("01"))
        + kron(brown_g(0, 0, 1), ket("10")) - kron(brown_g(1, 0, 0), ket("11"))
    ),
    "chi": (1 / (2 * np.sqrt(2))) * (
        ket("0000") - ket("0011") - ket("0101") + ket("0110")
        + ket("1001") + ket("1010") + ket("1100") + ket("1111")
    ),
    "omega": H * (ket("0000") + ket("0110") + ket("1001") - ket("1111")),
}

PRINTED_LMN = {
    "cluster": (2, 2, 1), "cluster-swapped": (2, 2, 2), "cat4": (2, 2, 1), "ghz": (1, 2, 1),
    "ghz-like": (1, 2, 1), "brown-swapped": (2, 3, 2), "chi": (2, 2, 2), "omega": (2, 2, 2),
}


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_catalog_matches_printed_expansion(name):
    state = named_state(name)
    assert StateVector.from_amplitudes(PRINTED[name]).equals(state.vector)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_catalog_dimensions(name):
    assert named_state(name).lmn == PRINTED_LMN[name]


def test_cluster_swapped_is_relabelled_cluster():
    swapped = oracles.permute_vector(PRINTED["cluster"], 4, [0, 2, 1, 3])
    assert np.allclose(swapped, named_state("cluster-swapped").vector.amplitudes, atol=1e-12)


def test_chi_printed_basis_form():
    # the chi row lists a non-cat e-family; the Bell rewrite must be the same vector
    phi1p = oracles.S2 * (BELL["psi+"] + BELL["phi-"])
    phi1m = oracles.S2 * (BELL["psi+"] - BELL["phi-"])
    psi1p = oracles.S2 * (BELL["phi+"] + BELL["psi-"])
    psi1m = oracles.S2 * (BELL["phi+"] - BELL["psi-"])
    printed = H * (
        kron(phi1p, KET0, MINUS) + kron(phi1m, KET0, PLUS) + kron(psi1p, KET1, MINUS) + kron(psi1m, KET1, PLUS)
    )
    assert np.allclose(printed, PRINTED["chi"], atol=1e-12)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_catalog_members_verify(name):
    state = named_state(name)
    spec = state.spec
    report = verify_generic_form(state.vector, spec.m, spec.l, spec.n)
    assert report.accepted, report.reason
    assert np.allclose(report.schmidt_coefficients, 2 ** (-spec.n / 2), atol=1e-12)
    # the recovered pairs rebuild the state
    rebuilt = sum(np.kron(e.amplitudes, f.amplitudes) for e, f in zip(report.e_vectors, report.f_vectors))
    assert StateVector.from_amplitudes(rebuilt, normalize=True).equals(state.vector, atol=1e-9)


def test_ghz_like_recovers_bell_pair():
    report = verify_generic_form(named_state("ghz-like").vector, 2, 1, 1)
    found = {min(range(4), key=lambda i: 1 - abs(np.vdot(bell_basis().matrix[i], e.amplitudes))) for e in report.e_vectors}
    assert {bell_basis().labels[i] for i in found} == {"psi+", "psi-"}


def test_rejects_product_state():
    report = verify_generic_form(StateVector.from_bits("000"), 2, 1, 1)
    assert not report.accepted
    assert report.reason == "single Schmidt coefficient (product state)"


def test_rejects_w_state():
    w = StateVector.from_terms({"001": 1, "010": 1, "100": 1})
    report = verify_generic_form(w, 2, 1, 1)
    assert not report.accepted
    assert report.reason == "Schmidt coefficients unequal"


def test_rejects_non_cat_schmidt_space():
    # equal Schmidt weights but |e> = |00>, |01> are not cat states
    s = StateVector.from_terms({"000": 1, "011": 1})
    report = verify_generic_form(s, 2, 1, 1)
    assert not report.accepted and "cat" in report.reason


def test_rejects_wrong_rank_and_size():
    assert verify_generic_form(named_state("ghz-like").vector, 2, 1, 1).accepted
    assert not verify_generic_form(named_state("cluster").vector, 2, 2, 2).accepted
    assert not verify_generic_form(named_state("cluster").vector, 2, 1, 1).accepted


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(m=1, l=1, n=1, e_selection=(0, 1), f_selection=(0, 1)),
        dict(m=2, l=1, n=2, e_selection=(0, 1, 2, 3), f_selection=(0, 1, 0, 1)),
        dict(m=2, l=1, n=1, e_selection=(0, 0), f_selection=(0, 1)),
        dict(m=2, l=1, n=1, e_selection=(0, 4), f_selection=(0, 1)),
        dict(m=2, l=1, n=1, e_selection=(0, 1), f_selection=(0, 1), f_signs=(1, 2)),
        dict(m=2, l=1, n=1, e_selection=(0, 1, 2), f_selection=(0, 1)),
        dict(m=2, l=1, n=0, e_selection=(0,), f_selection=(0,)),
    ],
)
def test_spec_validation(kwargs):
    with pytest.raises(SpecError):
        GenericFormSpec(**kwargs)


def test_non_cat_e_family_rejected():
    spec = GenericFormSpec(2, 1, 1, (0, 1), (0, 1), e_basis="computational")
    with pytest.raises(SpecError):
        build_generic(spec)


def test_unknown_catalog_name():
    with pytest.raises(LookupError):
        named_state("bogus")


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_document_round_trip(name):
    spec = named_state(name).spec
    assert GenericFormSpec.from_document(spec.to_document()) == spec


def test_document_labels_are_readable():
    doc = named_state("brown-swapped").spec.to_document()
    assert doc["f"] == ["00", "-01", "10", "-11"]
    assert doc["e"][0] == "cat(0,u=010)"
    assert named_state("ghz-like").spec.to_document()["e"] == ["psi+", "psi-"]


def test_load_custom_document():
    doc = {"m": 2, "l": 1, "n": 1, "e": ["phi+", "phi-"], "f": ["0", "1"], "name": "mine"}
    state = load_state(document=doc)
    assert state.name == "mine"
    expected = oracles.S2 * (kron(BELL["phi+"], KET0) + kron(BELL["phi-"], KET1))
    assert np.allclose(state.vector.amplitudes, expected)


def test_malformed_document():
    with pytest.raises(SpecError):
        GenericFormSpec.from_document({"m": 2})
    with pytest.raises(SpecError):
        GenericFormSpec.from_document({"m": 2, "l": 1, "n": 1, "e": ["nope", "psi-"], "f": ["0", "1"]})


@st.composite
def generic_specs(draw, max_m=3, max_l=3):
    m = draw(st.integers(2, max_m))
    l = draw(st.integers(1, max_l))
    n = draw(st.integers(1, min(m, l)))
    size = 1 << n
    e_sel = draw(st.permutations(range(1 << m)))[:size]
    f_sel = draw(st.permutations(range(1 << l)))[:size]
    signs = draw(st.lists(st.sampled_from([1, -1]), min_size=size, max_size=size))
    f_basis = draw(st.sampled_from(["computational", "cat"]))
    return GenericFormSpec(m, l, n, tuple(e_sel), tuple(f_sel), tuple(signs), f_basis=f_basis)


@given(generic_specs())
def test_every_family_member_verifies(spec):
    psi = build_generic(spec)
    assert abs(np.vdot(psi.amplitudes, psi.amplitudes) - 1) < 1e-12
    report = verify_generic_form(psi, spec.m, spec.l, spec.n)
    assert report.accepted, report.reason


@given(generic_specs())
def test_schmidt_spectrum_oracle(spec):
    psi = build_generic(spec)
    coeffs = oracles.schmidt_coefficients(psi.amplitudes, spec.m, spec.l)
    nonzero = coeffs[coeffs > 1e-9]
    assert len(nonzero) == 1 << spec.n
    assert np.allclose(nonzero, 2 ** (-spec.n / 2), atol=1e-12)


def test_f_basis_names():
    spec = GenericFormSpec(2, 1, 1, (0, 1), (0, 1), f_basis="cat")
    assert spec.bases()[1].labels == ("+", "-")
    assert spec.bases()[0].labels == bell_basis().labels
    assert GenericFormSpec(2, 2, 1, (0, 1), (0, 3)).bases()[1].labels == computational_basis(2).labels
