"""Superoperator quantum finite automata over real float matrices.

A quantum machine evolves a density matrix: each symbol applies a channel
given by a finite family of operation elements, rho -> sum_j E_j rho E_j^T,
and acceptance is the probability mass on the accepting diagonal entries
after the right end-marker. Scalars are real doubles throughout; channel
validity and float comparisons use the ``DEFAULT_KAPPA`` tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .automata import CENT, DOLLAR, RESERVED_SYMBOLS

DEFAULT_KAPPA = 1e-9

#: Refuse branching evaluation trees with more leaves than this.
DEFAULT_TREE_CAP = 10**6


def _as_operator(entries) -> np.ndarray:
    arr = np.array(entries, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"operation elements must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("operation elements must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Superoperator:
    """A channel described by its operation elements."""

    elements: tuple[np.ndarray, ...]

    def __post_init__(self):
        elements = tuple(_as_operator(e) for e in self.elements)
        if not elements:
            raise ValueError("channels need at least one operation element")
        dim = elements[0].shape[0]
        if any(e.shape[0] != dim for e in elements):
            raise ValueError("operation elements must share one dimension")
        object.__setattr__(self, "elements", elements)

    @classmethod
    def identity(cls, dim: int) -> "Superoperator":
        return cls((np.eye(dim),))

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def kraus_deviation(self) -> float:
        """Largest absolute entry of sum_j E_j^T E_j minus the identity."""
        total = np.zeros((self.dim, self.dim))
        for e in self.elements:
            total += e.T @ e
        return float(np.abs(total - np.eye(self.dim)).max())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Superoperator)
            and len(self.elements) == len(other.elements)
            and all(np.array_equal(a, b) for a, b in zip(self.elements, other.elements))
        )


@dataclass(frozen=True)
class ChannelReport:
    deviation: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.deviation <= self.tolerance


def validate_channel(channel: Superoperator, kappa: float = DEFAULT_KAPPA) -> ChannelReport:
    """Check trace preservation: sum_j E_j^T E_j must equal I within kappa."""
    return ChannelReport(channel.kraus_deviation(), kappa)


def apply_channel(channel: Superoperator, rho: np.ndarray) -> np.ndarray:
    """Evolve a density matrix: sum_j E_j rho E_j^T. Preserves trace for valid channels."""
    rho = np.asarray(rho, dtype=float)
    if rho.shape != (channel.dim, channel.dim):
        raise ValueError(f"density matrix shape {rho.shape} does not match channel dimension {channel.dim}")
    out = np.zeros_like(rho)
    for e in channel.elements:
        out += e @ rho @ e.T
    return out


def basis_density(dim: int, index: int) -> np.ndarray:
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dimension {dim}")
    rho = np.zeros((dim, dim))
    rho[index, index] = 1.0
    return rho


def density_defects(rho: np.ndarray, kappa: float = DEFAULT_KAPPA) -> list[str]:
    """Diagnostics for a would-be density matrix; empty list means plausible."""
    rho = np.asarray(rho, dtype=float)
    out = []
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return [f"not square: shape {rho.shape}"]
    if abs(np.trace(rho) - 1.0) > kappa:
        out.append(f"trace is {np.trace(rho)!r}, expected 1")
    if np.abs(rho - rho.T).max() > kappa:
        out.append("not symmetric")
    if rho.diagonal().min() < -kappa:
        out.append(f"negative diagonal entry {rho.diagonal().min()!r}")
    return out


@dataclass(frozen=True)
class QuantumAutomaton:
    """A finite automaton whose symbols apply superoperator channels."""

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    channels: Mapping[str, Superoperator]
    initial: int
    accepting: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "channels", dict(self.channels))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        if not self.states:
            raise ValueError("machines need at least one state")
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate state names")
        for sym in self.alphabet:
            if len(sym) != 1:
                raise ValueError(f"alphabet symbols must be single characters, got {sym!r}")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate alphabet symbols")
        expected = set(self.alphabet) | set(RESERVED_SYMBOLS)
        if set(self.channels) != expected:
            missing = expected - set(self.channels)
            extra = set(self.channels) - expected
            raise ValueError(f"channel table mismatch: missing {sorted(missing)}, extra {sorted(extra)}")
        n = len(self.states)
        for sym, channel in self.channels.items():
            if channel.dim != n:
                raise ValueError(f"channel for {sym!r} has dimension {channel.dim}, machine has {n} states")
        if not 0 <= self.initial < n:
            raise ValueError(f"initial state {self.initial} out of range")
        if not self.accepting <= set(range(n)):
            raise ValueError("accepting set contains unknown state indices")

    @classmethod
    def build(
        cls,
        states: Sequence[str],
        alphabet: Sequence[str],
        channels: Mapping[str, Superoperator],
        initial: int,
        accepting: Iterable[int] = (),
    ) -> "QuantumAutomaton":
        table = dict(channels)
        ident = Superoperator.identity(len(states))
        table.setdefault(CENT, ident)
        table.setdefault(DOLLAR, ident)
        return cls(tuple(states), tuple(alphabet), table, initial, frozenset(accepting))

    @property
    def size(self) -> int:
        return len(self.states)

    def violations(self, kappa: float = DEFAULT_KAPPA) -> list[str]:
        """One line per channel whose Kraus sum strays from identity by more than kappa."""
        out = []
        for sym in (*self.alphabet, CENT, DOLLAR):
            report = validate_channel(self.channels[sym], kappa)
            if not report.ok:
                out.append(f"symbol {sym}: Kraus sum deviates from identity by {report.deviation:.3e}")
        return out


def _symbol_channel(machine: QuantumAutomaton, sym: str) -> Superoperator:
    if sym not in machine.channels or (sym not in machine.alphabet and sym not in RESERVED_SYMBOLS):
        raise ValueError(f"symbol {sym!r} not in alphabet {machine.alphabet}")
    return machine.channels[sym]


def qfa_final_density(machine: QuantumAutomaton, w: str) -> np.ndarray:
    """Density matrix after reading ``cent + w + dollar``."""
    rho = basis_density(machine.size, machine.initial)
    for sym in (CENT, *w, DOLLAR):
        rho = apply_channel(_symbol_channel(machine, sym), rho)
    return rho


def _accept_from_density(machine: QuantumAutomaton, rho: np.ndarray) -> float:
    raw = float(sum(rho[k, k] for k in machine.accepting))
    return min(1.0, max(0.0, raw))


def qfa_accept(machine: QuantumAutomaton, w: str) -> float:
    """Acceptance probability of ``w``, clamped into [0, 1] for reporting.

    The unclamped value can stray from the interval by at most the
    accumulated float error, on the order of ``DEFAULT_KAPPA`` for valid
    channels.
    """
    return _accept_from_density(machine, qfa_final_density(machine, w))


def qfa_prefix_values(machine: QuantumAutomaton, maxlen: int) -> Iterator[tuple[str, float]]:
    """Quantum twin of :func:`afalib.automata.prefix_values`, same ordering."""
    if maxlen < 0:
        raise ValueError("maxlen must be nonnegative")
    dollar = machine.channels[DOLLAR]
    start = apply_channel(machine.channels[CENT], basis_density(machine.size, machine.initial))
    frontier: list[tuple[str, np.ndarray]] = [("", start)]
    while frontier:
        grown = []
        for w, rho in frontier:
            yield w, _accept_from_density(machine, apply_channel(dollar, rho))
            if len(w) < maxlen:
                for sym in machine.alphabet:
                    grown.append((w + sym, apply_channel(machine.channels[sym], rho)))
        frontier = grown


def projective_measure(
    blocks: Iterable[Iterable[int]], rho: np.ndarray, kappa: float = DEFAULT_KAPPA
) -> list[tuple[float, np.ndarray | None]]:
    """Measure ``rho`` against a partition of the state indices.

    Each block corresponds to the diagonal projector onto its indices;
    the outcome probability is trace(P rho P) and the post-measurement
    state is P rho P / p. Blocks whose probability is within ``kappa`` of
    zero get ``None`` instead of an unnormalizable state.
    """
    rho = np.asarray(rho, dtype=float)
    n = rho.shape[0]
    blocks = [tuple(b) for b in blocks]
    seen: set[int] = set()
    for block in blocks:
        for k in block:
            if not 0 <= k < n:
                raise ValueError(f"partition index {k} out of range")
            if k in seen:
                raise ValueError(f"partition blocks overlap at index {k}")
            seen.add(k)
    if seen != set(range(n)):
        raise ValueError("partition does not cover every state index")
    out = []
    for block in blocks:
        mask = np.zeros(n, dtype=bool)
        mask[list(block)] = True
        projected = np.where(np.outer(mask, mask), rho, 0.0)
        p = float(np.trace(projected))
        if p <= kappa:
            out.append((p, None))
        else:
            out.append((p, projected / p))
    return out


def leaf_count(machine: QuantumAutomaton, w: str) -> int:
    total = 1
    for sym in (CENT, *w, DOLLAR):
        total *= len(_symbol_channel(machine, sym).elements)
    return total


def leaf_vectors(
    machine: QuantumAutomaton, w: str, cap: int = DEFAULT_TREE_CAP
) -> list[np.ndarray]:
    """All leaf state vectors of the branching pure-state evaluation tree.

    Each operation element spawns one child per node, so the tree for
    ``cent + w + dollar`` has one leaf per choice of element indices,
    ordered with the first symbol's element index most significant. Zero
    vectors are kept. Trees with more than ``cap`` leaves are refused.
    """
    total = leaf_count(machine, w)
    if total > cap:
        raise ValueError(f"evaluation tree has {total} leaves, above the cap of {cap}")
    vectors = [np.eye(machine.size)[:, machine.initial].copy()]
    for sym in (CENT, *w, DOLLAR):
        elements = _symbol_channel(machine, sym).elements
        vectors = [e @ v for v in vectors for e in elements]
    return vectors


def leaf_acceptance(machine: QuantumAutomaton, w: str, cap: int = DEFAULT_TREE_CAP) -> float:
    """Acceptance aggregated over tree leaves.

    Sums the squared accepting amplitudes across every leaf; for valid
    channels this equals :func:`qfa_accept` up to float error.
    """
    acc = sorted(machine.accepting)
    return float(sum(float(np.sum(v[acc] ** 2)) for v in leaf_vectors(machine, w, cap)))
