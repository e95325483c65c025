"""The carrier state family ``(1/√2^n) Σ_i |e_i>|f_i>`` and its named members.

``|e_i>`` are m-qubit cat states kept by the sender, ``|f_i>`` are l-qubit
orthonormal states that travel to the receiver.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SpecError
from .qcore import (
    OrthonormalBasis,
    StateVector,
    basis_by_name,
    is_cat_state,
)

SCHMIDT_ATOL = 1e-9


@dataclass(frozen=True)
class GenericFormSpec:
    """Which basis elements make up a family member.

    ``e_selection[j]`` indexes the ``e_basis`` family at size ``m`` and is
    also the state Alice prepares to send message value ``j``.
    ``f_selection``/``f_signs`` pick the partner ``±|f_j>`` from ``f_basis``.
    """

    m: int
    l: int
    n: int
    e_selection: tuple[int, ...]
    f_selection: tuple[int, ...]
    f_signs: tuple[int, ...] = ()
    e_basis: str = "cat"
    f_basis: str = "computational"

    def __post_init__(self):
        object.__setattr__(self, "e_selection", tuple(int(i) for i in self.e_selection))
        object.__setattr__(self, "f_selection", tuple(int(i) for i in self.f_selection))
        signs = tuple(int(s) for s in self.f_signs) or (1,) * len(self.f_selection)
        object.__setattr__(self, "f_signs", signs)
        if self.n < 1:
            raise SpecError("n must be at least 1")
        if self.m < 2:
            raise SpecError(f"m = {self.m}: each |e_i> must be entangled, so m >= 2")
        if self.m < self.n:
            raise SpecError(f"m = {self.m} < n = {self.n}: not enough room for 2^n values of |e_i>")
        if self.l < self.n:
            raise SpecError(f"l = {self.l} < n = {self.n}: not enough room for 2^n values of |f_i>")
        size = 1 << self.n
        for name, sel, bound in (("e", self.e_selection, 1 << self.m), ("f", self.f_selection, 1 << self.l)):
            if len(sel) != size:
                raise SpecError(f"{name}_selection needs {size} entries, got {len(sel)}")
            if len(set(sel)) != size:
                raise SpecError(f"{name}_selection has duplicate entries: {sel}")
            if any(not 0 <= i < bound for i in sel):
                raise SpecError(f"{name}_selection index out of range: {sel}")
        if len(signs) != size or any(s not in (1, -1) for s in signs):
            raise SpecError(f"f_signs must be {size} values of ±1, got {signs}")

    @property
    def message_values(self) -> int:
        return 1 << self.n

    def bases(self) -> tuple[OrthonormalBasis, OrthonormalBasis]:
        return basis_by_name(self.e_basis, self.m), basis_by_name(self.f_basis, self.l)

    def to_document(self) -> dict:
        """Label-based description, the format of ``--spec-file``."""
        e_basis, f_basis = self.bases()
        return {
            "m": self.m,
            "l": self.l,
            "n": self.n,
            "e_basis": self.e_basis,
            "f_basis": self.f_basis,
            "e": [e_basis.labels[i] for i in self.e_selection],
            "f": [
                ("-" if sign < 0 else "") + f_basis.labels[i]
                for i, sign in zip(self.f_selection, self.f_signs)
            ],
        }

    @classmethod
    def from_document(cls, doc: dict) -> GenericFormSpec:
        try:
            m, l, n = int(doc["m"]), int(doc["l"]), int(doc["n"])
            e_name = doc.get("e_basis", "cat")
            f_name = doc.get("f_basis", "computational")
            e_labels, f_labels = list(doc["e"]), list(doc["f"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecError(f"malformed state document: {exc}") from exc
        if m < 1 or l < 1:
            raise SpecError("m and l must be positive")
        e_basis, f_basis = basis_by_name(e_name, m), basis_by_name(f_name, l)
        try:
            e_sel = [e_basis.index(lab) for lab in e_labels]
            f_sel, signs = [], []
            for lab in f_labels:
                if lab not in f_basis.labels and lab.startswith("-"):
                    f_sel.append(f_basis.index(lab[1:]))
                    signs.append(-1)
                else:
                    f_sel.append(f_basis.index(lab))
                    signs.append(1)
        except KeyError as exc:
            raise SpecError(str(exc)) from exc
        return cls(m, l, n, tuple(e_sel), tuple(f_sel), tuple(signs), e_name, f_name)


def build_generic(
    spec: GenericFormSpec,
    e_basis: OrthonormalBasis | None = None,
    f_basis: OrthonormalBasis | None = None,
) -> StateVector:
    """``(1/√2^n) Σ_i |e_i>|f_i>`` with the ``|e>`` qubits first."""
    if e_basis is None or f_basis is None:
        default_e, default_f = spec.bases()
        e_basis = e_basis or default_e
        f_basis = f_basis or default_f
    if e_basis.num_qubits != spec.m or f_basis.num_qubits != spec.l:
        raise SpecError(
            f"bases on ({e_basis.num_qubits}, {f_basis.num_qubits}) qubits for m={spec.m}, l={spec.l}"
        )
    for i in spec.e_selection:
        if not is_cat_state(e_basis.elements[i]):
            raise SpecError(
                f"{e_basis.labels[i]} is not a cat state; only cat-state |e_i> are supported"
            )
    amps = np.zeros(1 << (spec.m + spec.l), dtype=np.complex128)
    for ei, fi, sign in zip(spec.e_selection, spec.f_selection, spec.f_signs):
        amps += sign * np.kron(e_basis.matrix[ei], f_basis.matrix[fi])
    return StateVector(spec.m + spec.l, amps / np.sqrt(spec.message_values))


@dataclass(frozen=True, eq=False)
class NamedState:
    name: str
    spec: GenericFormSpec
    vector: StateVector = field(repr=False)
    description: str = ""

    @property
    def lmn(self) -> tuple[int, int, int]:
        return self.spec.l, self.spec.m, self.spec.n


# Specs take (m, l, n); `lmn` reports the (l, m, n) order of the catalog listing.
_CATALOG: dict[str, tuple[str, GenericFormSpec]] = {
    "cluster": (
        "4-qubit cluster state",
        GenericFormSpec(2, 2, 1, (0, 1), (0b00, 0b11)),
    ),
    "cluster-swapped": (
        "cluster state with particles 2 and 3 exchanged",
        GenericFormSpec(2, 2, 2, (0, 1, 2, 3), (1, 0, 2, 3), f_basis="cat"),
    ),
    "cat4": (
        "4-qubit cat state",
        GenericFormSpec(2, 2, 1, (0, 1), (0, 1), f_basis="cat"),
    ),
    "ghz": (
        "3-qubit GHZ state",
        GenericFormSpec(2, 1, 1, (0, 1), (0, 1), f_basis="cat"),
    ),
    "ghz-like": (
        "GHZ-like state (|psi+ 0> + |psi- 1>)/√2",
        GenericFormSpec(2, 1, 1, (0, 1), (0, 1)),
    ),
    "brown-swapped": (
        "5-qubit Brown state with particles reordered",
        # G_ijk = |0jk> + (-1)^i |1 j^1 k^1>  ->  cat(3) index 2*int(jk) + i
        GenericFormSpec(3, 2, 2, (4, 7, 2, 1), (0, 1, 2, 3), (1, -1, 1, -1)),
    ),
    "chi": (
        "chi state, rewritten over the Bell basis",
        # ½(Φ1+|0-> + Φ1-|0+> + Ψ1+|1-> + Ψ1-|1+>) = ½(ψ+|00> - ψ-|11> + φ+|10> - φ-|01>)
        GenericFormSpec(2, 2, 2, (0, 1, 2, 3), (0b00, 0b11, 0b10, 0b01), (1, -1, 1, -1)),
    ),
    "omega": (
        "Omega state",
        GenericFormSpec(2, 2, 2, (0, 1, 2, 3), (1, 0, 2, 3), (1, 1, 1, -1), f_basis="cat"),
    ),
}

CATALOG_NAMES = tuple(_CATALOG)


def named_state(name: str) -> NamedState:
    try:
        description, spec = _CATALOG[name]
    except KeyError:
        raise LookupError(f"unknown state {name!r}; choose from {', '.join(CATALOG_NAMES)}") from None
    return NamedState(name, spec, build_generic(spec), description)


@dataclass(frozen=True, eq=False)
class GenericFormReport:
    accepted: bool
    reason: str | None
    schmidt_coefficients: np.ndarray
    e_vectors: tuple[StateVector, ...] = ()
    f_vectors: tuple[StateVector, ...] = ()

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "reason": self.reason,
            "schmidt_coefficients": [float(x) for x in self.schmidt_coefficients],
            "e": [repr(v) for v in self.e_vectors],
            "f": [repr(v) for v in self.f_vectors],
        }


def _cat_states_in(support: np.ndarray, m: int) -> list[np.ndarray] | None:
    """An orthonormal basis of ``span(support)`` made of cat states, if one exists.

    Works pair by pair: the subspace meets ``span{|u>, |u^c>}`` in the
    eigenvalue-1 eigenspace of the projector restricted to that plane.
    """
    projector = support @ support.conj().T
    mask = (1 << m) - 1
    found = []
    for u in range(1 << (m - 1)):
        uc = u ^ mask
        plane = projector[np.ix_([u, uc], [u, uc])]
        vals, vecs = np.linalg.eigh(plane)
        inside = vals > 1 - SCHMIDT_ATOL
        if inside.sum() == 2:
            for sign in (1, -1):
                v = np.zeros(1 << m, dtype=np.complex128)
                v[u], v[uc] = 1 / np.sqrt(2), sign / np.sqrt(2)
                found.append(v)
        elif inside.sum() == 1:
            a, b = vecs[:, inside][:, 0]
            if abs(abs(a) - abs(b)) > SCHMIDT_ATOL:
                return None
            phase = a / abs(a)
            v = np.zeros(1 << m, dtype=np.complex128)
            v[u], v[uc] = a / phase, b / phase
            found.append(v)
    if len(found) != support.shape[1]:
        return None
    return found


def verify_generic_form(s: StateVector, m: int, l: int, n: int) -> GenericFormReport:
    """Decide whether ``s`` is a family member with the given sizes.

    The Schmidt spectrum across the m|l cut must be 2^n equal coefficients,
    and the left Schmidt space must admit a basis of cat states.  When it
    does, the matching ``|f_i>`` are recovered from the state.
    """
    empty = np.zeros(0)
    if s.num_qubits != m + l:
        return GenericFormReport(False, f"state has {s.num_qubits} qubits, expected m + l = {m + l}", empty)
    if m < 2 or m < n or l < n or n < 1:
        return GenericFormReport(False, f"dimension conditions fail for (m, l, n) = ({m}, {l}, {n})", empty)
    matrix = s.amplitudes.reshape(1 << m, 1 << l)
    u, sigma, vh = np.linalg.svd(matrix)
    rank = int((sigma > SCHMIDT_ATOL).sum())
    coeffs = sigma[:rank]
    if rank == 1:
        return GenericFormReport(False, "single Schmidt coefficient (product state)", coeffs)
    if rank != 1 << n:
        return GenericFormReport(False, f"Schmidt rank {rank}, expected {1 << n}", coeffs)
    target = 1 / np.sqrt(1 << n)
    if np.any(np.abs(coeffs - target) > SCHMIDT_ATOL):
        return GenericFormReport(False, "Schmidt coefficients unequal", coeffs)
    cats = _cat_states_in(u[:, :rank], m)
    if cats is None:
        return GenericFormReport(False, "left Schmidt space has no cat-state basis", coeffs)
    e_vectors, f_vectors = [], []
    for e in cats:
        f = np.sqrt(1 << n) * (e.conj() @ matrix)
        e_vectors.append(StateVector(m, e))
        f_vectors.append(StateVector.from_amplitudes(f, normalize=True))
    return GenericFormReport(True, None, coeffs, tuple(e_vectors), tuple(f_vectors))


def load_state(name: str | None = None, document: dict | None = None) -> NamedState:
    """Catalog lookup, or a custom member described by a spec document."""
    if document is not None:
        spec = GenericFormSpec.from_document(document)
        return NamedState(document.get("name", "custom"), spec, build_generic(spec), "custom state")
    if name is None:
        raise LookupError("need a catalog name or a spec document")
    return named_state(name)

