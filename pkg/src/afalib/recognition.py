"""Language recognition checks: oracles, exhaustive sweeps, isolation
gaps and cutpoint-equivalence comparisons.

Classical machines are compared with exact rational arithmetic, so a
sweep verdict of agree or disagree is a theorem about that string.
Quantum machines produce floats; their comparisons are sign tests with a
kappa tolerance, and any value within kappa of the cutpoint is flagged
indeterminate rather than misclassified.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Union

from .automata import ClassicalAutomaton, accept_value, prefix_values
from .quantum import DEFAULT_KAPPA, QuantumAutomaton, qfa_accept, qfa_prefix_values

Machine = Union[ClassicalAutomaton, QuantumAutomaton]
Value = Union[Fraction, float]

MODES = ("cutpoint", "exclusive", "equality", "nondet", "isolation")


@dataclass(frozen=True)
class LanguageOracle:
    """Ground-truth membership for a language over a fixed alphabet."""

    name: str
    alphabet: tuple[str, ...]
    membership: Callable[[str], bool]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))


def oracle_eval(oracle: LanguageOracle, w: str) -> bool:
    for ch in w:
        if ch not in oracle.alphabet:
            raise ValueError(f"symbol {ch!r} not in oracle alphabet {oracle.alphabet}")
    return bool(oracle.membership(w))


def eq_oracle() -> LanguageOracle:
    """Strings over a, b with equally many of each."""
    return LanguageOracle("eq", ("a", "b"), lambda w: w.count("a") == w.count("b"))


def lapins_oracle() -> LanguageOracle:
    """Strings over a, b, c with |w|_a^2 > |w|_b and |w|_b^2 > |w|_c."""

    def member(w: str) -> bool:
        x, y, z = w.count("a"), w.count("b"), w.count("c")
        return x * x > y and y * y > z

    return LanguageOracle("lapins", ("a", "b", "c"), member)


def abseq_oracle() -> LanguageOracle:
    """Strings over a, b with |m-n| + |m-4n| = |m-2n| + |m-3n| for counts m, n."""

    def member(w: str) -> bool:
        m, n = w.count("a"), w.count("b")
        return abs(m - n) + abs(m - 4 * n) == abs(m - 2 * n) + abs(m - 3 * n)

    return LanguageOracle("abseq", ("a", "b"), member)


def dfa_oracle(machine: ClassicalAutomaton) -> LanguageOracle:
    """Membership decided by a deterministic machine (value exactly 1)."""
    if machine.kind != "dfa":
        raise ValueError("oracle machines must be deterministic")
    return LanguageOracle("dfa", machine.alphabet, lambda w: accept_value(machine, w) == 1)


BUILTIN_ORACLES: dict[str, Callable[[], LanguageOracle]] = {
    "eq": eq_oracle,
    "lapins": lapins_oracle,
    "abseq": abseq_oracle,
}


def enumerate_strings(alphabet: Iterable[str], maxlen: int) -> Iterator[str]:
    """All strings up to ``maxlen``, shortest first, lexicographic within a length."""
    alphabet = tuple(alphabet)
    if maxlen < 0:
        raise ValueError("maxlen must be nonnegative")
    for length in range(maxlen + 1):
        for combo in itertools.product(alphabet, repeat=length):
            yield "".join(combo)


def _sign(value: Value, cutpoint: Fraction, kappa: float) -> int | None:
    """Three-way sign of value - cutpoint; None when a float is within kappa."""
    if isinstance(value, float):
        diff = value - float(cutpoint)
        if abs(diff) <= kappa:
            return None
        return 1 if diff > 0 else -1
    diff = value - cutpoint
    if diff == 0:
        return 0
    return 1 if diff > 0 else -1


def _mode_member(mode: str, sign: int) -> bool:
    if mode in ("cutpoint", "isolation", "nondet"):
        return sign > 0
    if mode == "exclusive":
        return sign != 0
    return sign == 0  # equality


@dataclass(frozen=True)
class StringRecord:
    string: str
    value: Value
    member: bool
    verdict: str  # "agree", "disagree" or "indeterminate"


@dataclass(frozen=True)
class SweepReport:
    """Outcome of an exhaustive comparison against an oracle.

    ``min_member_value`` and ``max_nonmember_value`` are the extremes of
    the machine's values over oracle members and non-members (None when
    a side is empty). ``gap`` is their difference, meaningful for
    isolation sweeps: it is the full certified width between the two
    value populations, twice the isolation radius when the cutpoint sits
    midway between them.
    """

    mode: str
    cutpoint: Fraction
    maxlen: int
    kappa: float
    records: tuple[StringRecord, ...]
    counterexamples: tuple[str, ...] = field(default=())
    indeterminate: tuple[str, ...] = field(default=())
    min_member_value: Value | None = None
    max_nonmember_value: Value | None = None

    @property
    def ok(self) -> bool:
        return not self.counterexamples and not self.indeterminate

    @property
    def gap(self) -> Value | None:
        if self.min_member_value is None or self.max_nonmember_value is None:
            return None
        return self.min_member_value - self.max_nonmember_value


def _machine_values(machine: Machine, maxlen: int) -> Iterator[tuple[str, Value]]:
    if isinstance(machine, QuantumAutomaton):
        return qfa_prefix_values(machine, maxlen)
    return prefix_values(machine, maxlen)


def sweep(
    machine: Machine,
    cutpoint,
    mode: str,
    oracle: LanguageOracle,
    maxlen: int,
    kappa: float = DEFAULT_KAPPA,
) -> SweepReport:
    """Compare a machine against an oracle on every string up to ``maxlen``.

    Modes: ``cutpoint`` claims membership equals value > cutpoint,
    ``exclusive`` value != cutpoint, ``equality`` value = cutpoint,
    ``nondet`` value > 0 (the cutpoint argument is ignored), and
    ``isolation`` behaves like ``cutpoint`` while the report's extremes
    certify the gap. Strings are processed in length-lexicographic order
    and the report is deterministic.
    """
    if mode not in MODES:
        raise ValueError(f"unknown sweep mode {mode!r}; choose from {MODES}")
    if set(machine.alphabet) != set(oracle.alphabet):
        raise ValueError(
            f"alphabet mismatch: machine {machine.alphabet} vs oracle {oracle.alphabet}"
        )
    cutpoint = Fraction(0) if mode == "nondet" else Fraction(cutpoint)
    records = []
    counterexamples = []
    indeterminate = []
    min_member = None
    max_nonmember = None
    for w, value in _machine_values(machine, maxlen):
        member = oracle_eval(oracle, w)
        if member:
            if min_member is None or value < min_member:
                min_member = value
        else:
            if max_nonmember is None or value > max_nonmember:
                max_nonmember = value
        sign = _sign(value, cutpoint, kappa)
        if sign is None:
            verdict = "indeterminate"
            indeterminate.append(w)
        elif _mode_member(mode, sign) == member:
            verdict = "agree"
        else:
            verdict = "disagree"
            counterexamples.append(w)
        records.append(StringRecord(w, value, member, verdict))
    return SweepReport(
        mode=mode,
        cutpoint=cutpoint,
        maxlen=maxlen,
        kappa=kappa,
        records=tuple(records),
        counterexamples=tuple(counterexamples),
        indeterminate=tuple(indeterminate),
        min_member_value=min_member,
        max_nonmember_value=max_nonmember,
    )


@dataclass(frozen=True)
class IsolationReport:
    """Certified value extremes around a cutpoint.

    ``gap`` is twice the isolation radius: 2 * min(min_member - cutpoint,
    cutpoint - max_nonmember). It equals min_member - max_nonmember
    exactly when the cutpoint is centered between the extremes, and is
    None when either side of the language is empty in the corpus or the
    cutpoint is not actually isolated.
    """

    cutpoint: Fraction
    min_member_value: Value | None
    max_nonmember_value: Value | None
    gap: Value | None


def isolation_gap(
    machine: Machine,
    cutpoint,
    oracle: LanguageOracle,
    maxlen: int,
    kappa: float = DEFAULT_KAPPA,
) -> IsolationReport:
    """Measure how far machine values stay from a cutpoint, per oracle side."""
    cutpoint = Fraction(cutpoint)
    report = sweep(machine, cutpoint, "isolation", oracle, maxlen, kappa)
    gap = None
    if report.min_member_value is not None and report.max_nonmember_value is not None:
        radius = min(report.min_member_value - cutpoint, cutpoint - report.max_nonmember_value)
        if radius > 0:
            gap = 2 * radius
    return IsolationReport(cutpoint, report.min_member_value, report.max_nonmember_value, gap)


@dataclass(frozen=True)
class EquivalenceReport:
    """Three-way sign comparison of two machines around their cutpoints."""

    maxlen: int
    violations: tuple[tuple[str, Value, Value], ...]
    indeterminate: tuple[str, ...]

    @property
    def equivalent(self) -> bool:
        return not self.violations and not self.indeterminate


def equivalence_check(
    m1: Machine,
    cutpoint1,
    m2: Machine,
    cutpoint2,
    maxlen: int,
    kappa: float = DEFAULT_KAPPA,
) -> EquivalenceReport:
    """Check that sign(f1(w) - cutpoint1) = sign(f2(w) - cutpoint2) for all w.

    The comparison is exact for classical machines; floats within kappa
    of their cutpoint make the string indeterminate instead of failing.
    """
    if set(m1.alphabet) != set(m2.alphabet):
        raise ValueError(f"alphabet mismatch: {m1.alphabet} vs {m2.alphabet}")
    cutpoint1, cutpoint2 = Fraction(cutpoint1), Fraction(cutpoint2)
    if m1.alphabet == m2.alphabet:
        pairs = (
            ((w, v1), v2)
            for (w, v1), (_, v2) in zip(_machine_values(m1, maxlen), _machine_values(m2, maxlen))
        )
    else:
        # Same symbols, different order: align by string instead of by stream.
        lookup = dict(_machine_values(m2, maxlen))
        pairs = (((w, v1), lookup[w]) for w, v1 in _machine_values(m1, maxlen))
    violations = []
    indeterminate = []
    for (w, v1), v2 in pairs:
        s1 = _sign(v1, cutpoint1, kappa)
        s2 = _sign(v2, cutpoint2, kappa)
        if s1 is None or s2 is None:
            indeterminate.append(w)
        elif s1 != s2:
            violations.append((w, v1, v2))
    return EquivalenceReport(maxlen, tuple(violations), tuple(indeterminate))
