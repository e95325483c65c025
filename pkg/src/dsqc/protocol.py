"""Alice/Bob state machine for entanglement-swapping DSQC.

One session: Alice prepares N copies of a family state, ships the l-qubit
halves mixed with |psi+> decoy pairs under a secret permutation, Bob checks
the decoys, then per copy Alice prepares the message state |e_j>, swaps
entanglement with a pair of cat-basis measurements and announces both
outcomes, and Bob reads his qubits in the {|f_i>} basis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AmbiguousTableError, ContractViolation, ProtocolCorruption
from .qcore import (
    ATOL,
    MeasurementRecord,
    OrthonormalBasis,
    PermutationMap,
    Register,
    StateVector,
    bell_basis,
    cat_basis,
    joint_distribution,
    make_stream,
    split,
    tensor,
)
from .states import GenericFormSpec, NamedState, build_generic
from .transcript import (
    Ack,
    DecodeResult,
    DecoyCheckResult,
    EncodedBlockIndex,
    PermutationDisclosure,
    QubitTransfer,
    SwapAnnouncement,
    Transcript,
)


@dataclass(frozen=True)
class ProtocolConfig:
    state: NamedState | GenericFormSpec
    copies: int = 1
    decoy_pairs: int | None = None
    error_threshold: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.copies < 0:
            raise ContractViolation("copies must be >= 0")
        if self.decoy_pairs is not None and self.decoy_pairs < 0:
            raise ContractViolation("decoy_pairs must be >= 0")
        if not 0.0 <= self.error_threshold <= 1.0:
            raise ContractViolation("error_threshold must lie in [0, 1]")

    @property
    def spec(self) -> GenericFormSpec:
        return self.state.spec if isinstance(self.state, NamedState) else self.state

    @property
    def num_decoy_pairs(self) -> int:
        if self.decoy_pairs is not None:
            return self.decoy_pairs
        # Nl/2 pairs, rounded up when Nl is odd
        return math.ceil(self.copies * self.spec.l / 2)

    @property
    def carrier_count(self) -> int:
        return self.copies * self.spec.l

    @property
    def sequence_length(self) -> int:
        return self.carrier_count + 2 * self.num_decoy_pairs

    def to_dict(self) -> dict:
        state = self.state.name if isinstance(self.state, NamedState) else "custom"
        return {
            "state": state,
            "spec": self.spec.to_document(),
            "copies": self.copies,
            "decoy_pairs": self.num_decoy_pairs,
            "error_threshold": self.error_threshold,
            "seed": self.seed,
        }


@dataclass(frozen=True, eq=False)
class Family:
    """Everything derived once per state family."""

    spec: GenericFormSpec
    e_basis: OrthonormalBasis
    f_basis: OrthonormalBasis
    psi: StateVector

    @property
    def encodings(self) -> list[StateVector]:
        return [self.e_basis.elements[i] for i in self.spec.e_selection]


@lru_cache(maxsize=64)
def family(spec: GenericFormSpec) -> Family:
    e_basis, f_basis = spec.bases()
    return Family(spec, e_basis, f_basis, build_generic(spec, e_basis, f_basis))


# -- Steps 1-4: distribution and eavesdropping check -------------------------

@dataclass
class Preparation:
    register: Register
    alice: list[list[int]]
    carriers: list[int]


def alice_prepare(cfg: ProtocolConfig, register: Register | None = None) -> Preparation:
    """Make N copies; Alice keeps the first m qubits of each, P_B is the rest."""
    register = register if register is not None else Register()
    fam = family(cfg.spec)
    m = cfg.spec.m
    alice, carriers = [], []
    for _ in range(cfg.copies):
        ids = register.allocate(fam.psi)
        alice.append(ids[:m])
        carriers.extend(ids[m:])
    return Preparation(register, alice, carriers)


def insert_decoys_and_permute(
    register: Register,
    carriers: list[int],
    decoy_pairs: int,
    rng: np.random.Generator,
    permutation: PermutationMap | None = None,
) -> tuple[list[int], PermutationMap, list[tuple[int, int]]]:
    """Append |psi+> pairs and scramble the whole sequence.

    Returns the sent sequence, the permutation and, in sent-sequence
    positions, the partner coordinates of every decoy pair.
    """
    if decoy_pairs < 0:
        raise ContractViolation("decoy_pairs must be >= 0")
    psi_plus = bell_basis().element("psi+")
    sequence = list(carriers)
    for _ in range(decoy_pairs):
        sequence.extend(register.allocate(psi_plus))
    if permutation is None:
        permutation = PermutationMap.random(len(sequence), rng)
    elif permutation.size != len(sequence):
        raise ContractViolation(
            f"permutation of size {permutation.size} for a {len(sequence)}-qubit sequence"
        )
    sent = permutation.apply(sequence)
    c = len(carriers)
    coords = [
        (permutation.mapping[c + 2 * k], permutation.mapping[c + 2 * k + 1])
        for k in range(decoy_pairs)
    ]
    return sent, permutation, coords


def bob_reorder(received: list[int], permutation: PermutationMap) -> list[int]:
    """Undo the disclosed permutation."""
    return permutation.inverse().apply(received)


def bob_check_decoys(
    register: Register,
    received: list[int],
    decoy_coords: list[tuple[int, int]],
    threshold: float,
    rng: np.random.Generator,
) -> DecoyCheckResult:
    bell = bell_basis()
    failures = 0
    for x, y in decoy_coords:
        record = register.measure([received[x], received[y]], bell, rng)
        failures += record.outcome_label != "psi+"
    checked = len(decoy_coords)
    rate = failures / checked if checked else 0.0
    return DecoyCheckResult(checked, failures, rate, threshold, rate <= threshold)


# -- Steps 5-7: encoding, swapping, decoding ----------------------------------

def swap_sets(m: int) -> tuple[list[int], list[int]]:
    """Local indices of the two measured sets within Alice's ``2m`` qubits.

    Alice's qubits are ordered ``|e_j>`` (0..m-1) then her half of the
    carrier copy (m..2m-1).  The first set takes the leading ``p`` qubits of
    each, ``p = floor(m / 2)``.
    """
    p = m // 2
    first = list(range(p)) + list(range(m, m + p))
    second = list(range(p, m)) + list(range(m + p, 2 * m))
    return first, second


def swap_bases(m: int) -> tuple[OrthonormalBasis, OrthonormalBasis]:
    p = m // 2
    return cat_basis(2 * p), cat_basis(2 * m - 2 * p)


def alice_encode(register: Register, copy_qubits: list[int], j: int, spec: GenericFormSpec) -> list[int]:
    """Prepare ``|e_j>`` next to one copy; returns Alice's ``2m`` qubit ids."""
    if not 0 <= j < spec.message_values:
        raise ContractViolation(f"message value {j} outside 0..{spec.message_values - 1}")
    fam = family(spec)
    return register.allocate(fam.encodings[j]) + list(copy_qubits)


def alice_swap_measure(
    register: Register, alice_qubits: list[int], m: int, rng: np.random.Generator
) -> tuple[MeasurementRecord, MeasurementRecord]:
    if len(alice_qubits) != 2 * m:
        raise ContractViolation(f"expected {2 * m} Alice qubits, got {len(alice_qubits)}")
    first, second = swap_sets(m)
    b1, b2 = swap_bases(m)
    r1 = register.measure([alice_qubits[i] for i in first], b1, rng)
    r2 = register.measure([alice_qubits[i] for i in second], b2, rng)
    return r1, r2


@dataclass(frozen=True)
class DecodeTable:
    """``(first outcome, second outcome, Bob outcome) -> message value``."""

    n: int
    entries: dict

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, first: str, second: str, bob: str) -> int:
        try:
            return self.entries[(first, second, bob)]
        except KeyError:
            raise ProtocolCorruption(
                f"no honest run yields ({first}, {second}, {bob})"
            ) from None

    def rows(self) -> list[tuple[str, str, str, int]]:
        return sorted((a, b, c, j) for (a, b, c), j in self.entries.items())

    def to_rows(self) -> list[dict]:
        return [
            {"first": a, "second": b, "bob": c, "value": format(j, f"0{self.n}b")}
            for a, b, c, j in self.rows()
        ]


def combined_state(spec: GenericFormSpec, j: int) -> StateVector:
    """``|e_j> ⊗ |psi>`` on ``2m + l`` qubits."""
    fam = family(spec)
    return tensor(fam.encodings[j], fam.psi)


def build_decode_table(
    spec: GenericFormSpec,
    e_basis: OrthonormalBasis | None = None,
    f_basis: OrthonormalBasis | None = None,
) -> DecodeTable:
    """Enumerate every nonzero-probability outcome triple for every message value."""
    if e_basis is None or f_basis is None:
        fam = family(spec)
        e_basis, f_basis = e_basis or fam.e_basis, f_basis or fam.f_basis
    psi = build_generic(spec, e_basis, f_basis)
    m, l = spec.m, spec.l
    first, second = swap_sets(m)
    b1, b2 = swap_bases(m)
    bob = list(range(2 * m, 2 * m + l))
    entries: dict = {}
    for j, e_index in enumerate(spec.e_selection):
        state = tensor(e_basis.elements[e_index], psi)
        probs = joint_distribution(state, [(first, b1), (second, b2), (bob, f_basis)])
        for a1, a2, b in zip(*np.nonzero(probs > ATOL)):
            key = (b1.labels[a1], b2.labels[a2], f_basis.labels[b])
            if entries.setdefault(key, j) != j:
                raise AmbiguousTableError(
                    f"{key} occurs for message values {entries[key]} and {j}"
                )
    return DecodeTable(spec.n, entries)


@lru_cache(maxsize=64)
def decode_table(spec: GenericFormSpec) -> DecodeTable:
    return build_decode_table(spec)


def bob_decode(
    register: Register,
    bob_qubits: list[int],
    f_basis: OrthonormalBasis,
    announcement: tuple[str, str],
    table: DecodeTable,
    rng: np.random.Generator,
) -> int:
    record = register.measure(bob_qubits, f_basis, rng)
    return table.lookup(announcement[0], announcement[1], record.outcome_label)


# -- full session ----------------------------------------------------------------

def _blocks(message: str, copies: int, n: int) -> list[int]:
    if any(ch not in "01" for ch in message):
        raise ContractViolation(f"message must be a bit string, got {message!r}")
    if len(message) > copies * n:
        raise ContractViolation(
            f"{len(message)}-bit message does not fit in {copies} copies of {n} bits"
        )
    padded = message.ljust(copies * n, "0")
    return [int(padded[i * n:(i + 1) * n], 2) for i in range(copies)]


def run_protocol(
    cfg: ProtocolConfig,
    message: str,
    attack=None,
    rng: np.random.Generator | None = None,
    permutation: PermutationMap | None = None,
) -> Transcript:
    """Run one session; aborts after the decoy check if the error rate is too high.

    ``permutation`` pins Alice's secret reordering (for fixtures); normally
    it is drawn from ``rng``.
    """
    from .adversary import AttackStrategy, apply_attack

    attack = attack if attack is not None else AttackStrategy.none()
    spec = cfg.spec
    values = _blocks(message, cfg.copies, spec.n)
    rng = rng if rng is not None else make_stream(cfg.seed)
    alice_rng, eve_rng, bob_rng, swap_rng = split(rng, 4)

    transcript = Transcript(config={**cfg.to_dict(), "attack": attack.to_dict()}, message=message)
    if cfg.sequence_length == 0:
        return transcript

    prep = alice_prepare(cfg)
    register = prep.register
    sent, perm, coords = insert_decoys_and_permute(
        register, prep.carriers, cfg.num_decoy_pairs, alice_rng, permutation
    )
    transcript.record(QubitTransfer(len(sent)))
    received, eve = apply_attack(register, sent, attack, eve_rng, cfg)
    transcript.eve = eve.to_dict()
    transcript.record(Ack())
    transcript.record(PermutationDisclosure(perm.mapping, tuple(coords)))
    check = bob_check_decoys(register, received, coords, cfg.error_threshold, bob_rng)
    transcript.record(check)
    if not check.passed:
        return transcript

    fam = family(spec)
    table = decode_table(spec)
    reordered = bob_reorder(received, perm)
    for copy, j in enumerate(values):
        alice_qubits = alice_encode(register, prep.alice[copy], j, spec)
        transcript.record(EncodedBlockIndex(copy))
        r1, r2 = alice_swap_measure(register, alice_qubits, spec.m, swap_rng)
        transcript.record(SwapAnnouncement(copy, r1.outcome_label, r2.outcome_label))
        bob_qubits = reordered[copy * spec.l:(copy + 1) * spec.l]
        try:
            value = bob_decode(register, bob_qubits, fam.f_basis, (r1.outcome_label, r2.outcome_label), table, bob_rng)
        except ProtocolCorruption as exc:
            transcript.record(DecodeResult(copy, None, str(exc)))
        else:
            transcript.record(DecodeResult(copy, format(value, f"0{spec.n}b")))
    return transcript
