"""Eavesdropper models and decoy-check detection probabilities.

Eve acts on the permuted in-flight sequence only: she sees positions, not
which of them are decoy partners or carriers.

The exact estimator works with small reduced density matrices.  A decoy
pair's check outcome depends only on the qubits Eve's operations couple to
it, so each pair needs at most a 4-qubit reduced state, whatever the
sequence length.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, SizeCapError
from .protocol import ProtocolConfig, family, run_protocol
from .qcore import (
    MeasurementRecord,
    PermutationMap,
    Register,
    StateVector,
    bell_basis,
    computational_basis,
    trial_stream,
)
from .states import GenericFormSpec

KINDS = ("none", "measure_resend", "cnot_clone", "capture_replace")
MEASURE_BASES = ("computational", "bell_with_random_pairing")
CLI_NAMES = {
    "none": ("none", None),
    "measure-resend": ("measure_resend", "computational"),
    "measure-resend-bell": ("measure_resend", "bell_with_random_pairing"),
    "cnot-clone": ("cnot_clone", None),
    "capture-replace": ("capture_replace", None),
}
MAX_EXACT_SEQUENCE = 48


@dataclass(frozen=True)
class AttackStrategy:
    kind: str = "none"
    basis: str | None = None
    pairing: tuple[tuple[int, int], ...] | None = None
    fake_state: GenericFormSpec | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ContractViolation(f"unknown attack kind {self.kind!r}")
        if self.kind == "measure_resend":
            if self.basis not in MEASURE_BASES:
                raise ContractViolation(f"measure_resend basis must be one of {MEASURE_BASES}")
            if self.pairing is not None and self.basis != "bell_with_random_pairing":
                raise ContractViolation("a pairing only applies to Bell-basis measure-resend")
        elif self.basis is not None or self.pairing is not None:
            raise ContractViolation(f"{self.kind} takes no measurement options")
        if self.fake_state is not None and self.kind != "capture_replace":
            raise ContractViolation("fake_state only applies to capture_replace")
        if self.pairing is not None:
            pairing = tuple((int(x), int(y)) for x, y in self.pairing)
            flat = [p for pair in pairing for p in pair]
            if len(set(flat)) != len(flat):
                raise ContractViolation(f"pairing reuses a position: {pairing}")
            object.__setattr__(self, "pairing", pairing)

    @classmethod
    def none(cls) -> AttackStrategy:
        return cls()

    @classmethod
    def measure_resend(cls, basis: str = "computational", pairing=None) -> AttackStrategy:
        return cls("measure_resend", basis=basis, pairing=pairing)

    @classmethod
    def cnot_clone(cls) -> AttackStrategy:
        return cls("cnot_clone")

    @classmethod
    def capture_replace(cls, fake_state: GenericFormSpec | None = None) -> AttackStrategy:
        return cls("capture_replace", fake_state=fake_state)

    @classmethod
    def from_name(cls, name: str) -> AttackStrategy:
        try:
            kind, basis = CLI_NAMES[name]
        except KeyError:
            raise ContractViolation(
                f"unknown attack {name!r}; choose from {', '.join(CLI_NAMES)}"
            ) from None
        return cls(kind, basis=basis)

    @property
    def name(self) -> str:
        for cli, (kind, basis) in CLI_NAMES.items():
            if kind == self.kind and basis == self.basis:
                return cli
        raise AssertionError("unreachable")

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.basis is not None:
            d["basis"] = self.basis
        if self.pairing is not None:
            d["pairing"] = [list(p) for p in self.pairing]
        if self.fake_state is not None:
            d["fake_state"] = self.fake_state.to_document()
        return d


@dataclass
class EveRecord:
    kind: str
    measurements: list[MeasurementRecord] = field(default_factory=list)
    ancillas: list[int] = field(default_factory=list)
    captured: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "measurements": [r.to_dict() for r in self.measurements],
            "ancillas": len(self.ancillas),
            "captured": len(self.captured),
        }


def adjacent_pairing(length: int) -> list[tuple[int, int]]:
    return [(2 * i, 2 * i + 1) for i in range(length // 2)]


def _fake_layout(cfg: ProtocolConfig, strategy: AttackStrategy, length: int) -> tuple[GenericFormSpec, int, int]:
    """Eve's forgery: the public family, same copy and decoy counts, no permutation."""
    spec = strategy.fake_state or cfg.spec
    carriers = length - 2 * cfg.num_decoy_pairs
    if carriers < 0 or carriers % spec.l:
        raise ContractViolation(
            f"cannot forge {carriers} carrier qubits from {spec.l}-qubit halves"
        )
    return spec, carriers // spec.l, cfg.num_decoy_pairs


def apply_attack(
    register: Register,
    sequence: list[int],
    strategy: AttackStrategy,
    rng: np.random.Generator,
    cfg: ProtocolConfig | None = None,
) -> tuple[list[int], EveRecord]:
    """Let Eve act on the in-flight qubits; returns what Bob will receive."""
    record = EveRecord(strategy.kind)
    if strategy.kind == "none":
        return list(sequence), record

    if strategy.kind == "measure_resend":
        if strategy.basis == "computational":
            z = computational_basis(1)
            for q in sequence:
                record.measurements.append(register.measure([q], z, rng))
        else:
            bell = bell_basis()
            pairs = strategy.pairing if strategy.pairing is not None else adjacent_pairing(len(sequence))
            for x, y in pairs:
                if not (0 <= x < len(sequence) and 0 <= y < len(sequence)):
                    raise ContractViolation(f"pairing position out of range: {(x, y)}")
                record.measurements.append(register.measure([sequence[x], sequence[y]], bell, rng))
        return list(sequence), record

    if strategy.kind == "cnot_clone":
        zero = StateVector.from_bits("0")
        for q in sequence:
            (ancilla,) = register.allocate(zero)
            register.cnot(q, ancilla)
            record.ancillas.append(ancilla)
        return list(sequence), record

    # capture_replace
    if cfg is None:
        raise ContractViolation("capture_replace needs the protocol configuration")
    spec, copies, decoys = _fake_layout(cfg, strategy, len(sequence))
    fam = family(spec)
    fake = []
    for _ in range(copies):
        fake.extend(register.allocate(fam.psi)[spec.m:])
    psi_plus = bell_basis().element("psi+")
    for _ in range(decoys):
        fake.extend(register.allocate(psi_plus))
    record.captured = list(sequence)
    return fake, record


# -- exact detection probability ----------------------------------------------

@dataclass(frozen=True, eq=False)
class _Factor:
    state: StateVector
    local: dict  # sequence position -> qubit index inside `state`


def _sequence_factors(spec: GenericFormSpec, copies: int, decoys: int) -> dict[int, _Factor]:
    """Map each P_B' position to the independent pure factor holding it."""
    fam = family(spec)
    psi_plus = bell_basis().element("psi+")
    owner: dict[int, _Factor] = {}
    pos = 0
    for _ in range(copies):
        f = _Factor(fam.psi, {pos + k: spec.m + k for k in range(spec.l)})
        owner.update({p: f for p in f.local})
        pos += spec.l
    for _ in range(decoys):
        f = _Factor(psi_plus, {pos: 0, pos + 1: 1})
        owner.update({p: f for p in f.local})
        pos += 2
    return owner


def _partial_density(state: StateVector, keep: list[int]) -> np.ndarray:
    n = state.num_qubits
    rest = [q for q in range(n) if q not in keep]
    mat = state.amplitudes.reshape((2,) * n).transpose(keep + rest).reshape(1 << len(keep), -1)
    return mat @ mat.conj().T


def _reorder_density(rho: np.ndarray, order: list[int]) -> np.ndarray:
    """Density on qubits listed by ``order`` -> density on qubits 0..k-1."""
    k = len(order)
    axes = [order.index(i) for i in range(k)]
    return rho.reshape((2,) * (2 * k)).transpose(axes + [a + k for a in axes]).reshape(1 << k, 1 << k)


def _reduced(owner: dict[int, _Factor], positions: list[int]) -> np.ndarray:
    """Reduced density of sequence ``positions`` (in that order)."""
    groups: dict[int, tuple[_Factor, list[int]]] = {}
    for p in positions:
        f = owner[p]
        groups.setdefault(id(f), (f, []))[1].append(p)
    rho = np.ones((1, 1), dtype=np.complex128)
    order: list[int] = []
    for f, ps in groups.values():
        rho = np.kron(rho, _partial_density(f.state, [f.local[p] for p in ps]))
        order.extend(positions.index(p) for p in ps)
    return _reorder_density(rho, order)


def _embed(op: np.ndarray, targets: list[int], k: int) -> np.ndarray:
    """Operator on qubits ``targets`` of a k-qubit register."""
    rest = [q for q in range(k) if q not in targets]
    full = np.kron(op, np.eye(1 << len(rest)))
    return _reorder_density(full, targets + rest)


def _dephase(rho: np.ndarray, targets: list[int], basis) -> np.ndarray:
    k = int(rho.shape[0]).bit_length() - 1
    out = np.zeros_like(rho)
    for row in basis.matrix:
        proj = _embed(np.outer(row, row.conj()), targets, k)
        out += proj @ rho @ proj
    return out


_PSI_PLUS = bell_basis().matrix[0]


def _psi_plus_probability(rho: np.ndarray, a: int, b: int) -> float:
    k = int(rho.shape[0]).bit_length() - 1
    proj = _embed(np.outer(_PSI_PLUS, _PSI_PLUS.conj()), [a, b], k)
    return float(np.trace(proj @ rho).real)


def _cnot_matrix(control: int, target: int, k: int) -> np.ndarray:
    idx = np.arange(1 << k)
    flipped = idx ^ (((idx >> (k - 1 - control)) & 1) << (k - 1 - target))
    u = np.zeros((1 << k, 1 << k))
    u[flipped, idx] = 1.0
    return u


def _pair_detection_local(rho_ab: np.ndarray, strategy: AttackStrategy) -> float:
    if strategy.kind == "none":
        return 1.0 - _psi_plus_probability(rho_ab, 0, 1)
    if strategy.kind == "measure_resend":
        z = computational_basis(1)
        rho = _dephase(_dephase(rho_ab, [0], z), [1], z)
        return 1.0 - _psi_plus_probability(rho, 0, 1)
    # cnot_clone: ancillas 2, 3 start in |0>, then traced out
    ancillas = np.zeros((4, 4))
    ancillas[0, 0] = 1.0
    rho = np.kron(rho_ab, ancillas)
    u = _cnot_matrix(1, 3, 4) @ _cnot_matrix(0, 2, 4)
    rho = u @ rho @ u.T
    return 1.0 - _psi_plus_probability(rho, 0, 1)


def _bell_pair_detection(owner, a: int, b: int, x: int | None, y: int | None) -> float:
    """Bob's pair (a, b) after Eve Bell-measures (a, x) and (b, y); None = unmeasured."""
    positions = [a, b] + [p for p in (x, y) if p is not None]
    rho = _reduced(owner, positions)
    bell = bell_basis()
    slot = 2
    if x is not None:
        rho = _dephase(rho, [0, slot], bell)
        slot += 1
    if y is not None:
        rho = _dephase(rho, [1, slot], bell)
    return 1.0 - _psi_plus_probability(rho, 0, 1)


def _check_exact_size(cfg: ProtocolConfig) -> None:
    if cfg.sequence_length > MAX_EXACT_SEQUENCE:
        raise SizeCapError(
            f"exact enumeration supports sequences up to {MAX_EXACT_SEQUENCE} qubits, "
            f"got {cfg.sequence_length}"
        )


def detection_probability_exact(
    cfg: ProtocolConfig,
    strategy: AttackStrategy,
    permutation: PermutationMap | None = None,
) -> float:
    """Probability that one decoy pair fails Bob's |psi+> check.

    Averaged over decoy pairs and Eve's outcomes; over the uniformly random
    permutation unless ``permutation`` pins it.
    """
    _check_exact_size(cfg)
    D, c, T = cfg.num_decoy_pairs, cfg.carrier_count, cfg.sequence_length
    if D == 0 or strategy.kind == "none":
        return 0.0
    if permutation is not None and permutation.size != T:
        raise ContractViolation(f"permutation of size {permutation.size} for a {T}-qubit sequence")
    owner = _sequence_factors(cfg.spec, cfg.copies, D)
    decoy_pairs = [(c + 2 * k, c + 2 * k + 1) for k in range(D)]

    if strategy.kind in ("none", "cnot_clone") or (
        strategy.kind == "measure_resend" and strategy.basis == "computational"
    ):
        # local operations: the permutation is irrelevant
        values = [_pair_detection_local(_reduced(owner, [a, b]), strategy) for a, b in decoy_pairs]
        return min(1.0, max(0.0, float(np.mean(values))))

    if strategy.kind == "measure_resend":
        value = _bell_exact(owner, decoy_pairs, T, strategy, permutation)
    else:
        value = _capture_exact(cfg, strategy, decoy_pairs, T, permutation)
    return min(1.0, max(0.0, value))


def _bell_exact(owner, decoy_pairs, T, strategy, permutation) -> float:
    if permutation is not None:
        pairs = strategy.pairing if strategy.pairing is not None else adjacent_pairing(T)
        inv = permutation.inverse().mapping  # sent position -> P_B' position
        partner: dict[int, int] = {}
        for x, y in pairs:
            partner[inv[x]], partner[inv[y]] = inv[y], inv[x]
        results = []
        for a, b in decoy_pairs:
            if partner.get(a) == b:
                results.append(0.0)  # Eve's Bell measurement of the true pair leaves it intact
            else:
                results.append(_bell_pair_detection(owner, a, b, partner.get(a), partner.get(b)))
        return float(np.mean(results))

    if strategy.pairing is not None:
        raise ContractViolation("an explicit pairing needs a fixed permutation for exact analysis")
    # Uniform permutation + adjacent pairing = uniform perfect matching of the
    # P_B' positions (with a ghost partner for the leftover when T is odd).
    ghost = None
    nodes = list(range(T)) + ([ghost] if T % 2 else [])
    Tp = len(nodes)
    results = []
    for a, b in decoy_pairs:
        total = 0.0  # a matched with b: Bell measurement of the true pair, no error
        others = [v for v in nodes if v not in (a, b)]
        weight = 1.0 / ((Tp - 1) * (Tp - 3)) if Tp > 3 else 0.0
        for x in others:
            for y in others:
                if x == y:
                    continue
                total += weight * _bell_pair_detection(owner, a, b, x, y)
        results.append(total)
    return float(np.mean(results))


def _capture_exact(cfg, strategy, decoy_pairs, T, permutation) -> float:
    spec, copies, decoys = _fake_layout(cfg, strategy, T)
    fake = _sequence_factors(spec, copies, decoys)
    if permutation is not None:
        landed = [(permutation.mapping[a], permutation.mapping[b]) for a, b in decoy_pairs]
        return float(np.mean([1.0 - _psi_plus_probability(_reduced(fake, [x, y]), 0, 1) for x, y in landed]))
    # each of Bob's decoy pairs lands on a uniformly random ordered pair of positions
    total = 0.0
    for x in range(T):
        for y in range(T):
            if x != y:
                total += 1.0 - _psi_plus_probability(_reduced(fake, [x, y]), 0, 1)
    return total / (T * (T - 1))


# -- Monte-Carlo detection probability ----------------------------------------

def _mc_chunk(cfg, strategy, seed, indices, permutation):
    out = []
    for t in indices:
        transcript = run_protocol(cfg, "", strategy, trial_stream(seed, t), permutation)
        check = transcript.decoy_check
        out.append((check.failures, check.checked) if check else (0, 0))
    return out


def detection_probability_mc(
    cfg: ProtocolConfig,
    strategy: AttackStrategy,
    trials: int,
    seed: int,
    permutation: PermutationMap | None = None,
    workers: int = 1,
) -> tuple[float, float]:
    """Fraction of failed decoy pairs over ``trials`` full sessions, with its standard error.

    The standard error is taken over per-trial failure fractions, so pairs
    whose outcomes are correlated within a session are not over-counted.
    With one decoy pair per session it is the binomial standard error.
    """
    if trials < 1:
        raise ContractViolation("trials must be >= 1")
    indices = list(range(trials))
    if workers > 1:
        chunks = [indices[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_mc_chunk, *zip(*[(cfg, strategy, seed, ch, permutation) for ch in chunks])))
        by_index = {}
        for ch, part in zip(chunks, parts):
            by_index.update(zip(ch, part))
        results = [by_index[t] for t in indices]
    else:
        results = _mc_chunk(cfg, strategy, seed, indices, permutation)
    failures = sum(f for f, _ in results)
    checked = sum(c for _, c in results)
    if checked == 0:
        return 0.0, 0.0
    estimate = failures / checked
    fractions = np.array([f / c for f, c in results if c])
    if len(fractions) < 2:
        return estimate, math.sqrt(estimate * (1 - estimate) / checked)
    se = float(fractions.std(ddof=1) / math.sqrt(len(fractions)))
    return estimate, se
