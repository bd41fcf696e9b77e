"""Acceptance suite: thirteen numbered end-to-end checks.

Each test prints one ``criterion NN PASS|FAIL`` line (run pytest with -s
to see the lines for passing tests too). Classical machine checks are
exact rational comparisons; quantum checks state their float tolerance
inline. Random machines always come from fixed seeds so every run sees
the same corpus.
"""

import math
import random
from fractions import Fraction

import numpy as np

import afalib as A
from afalib.rand import random_afa, random_pfa, random_qfa, random_rational_vector

HALF = Fraction(1, 2)


def report(num: int, ok: bool, label: str) -> None:
    print(f"criterion {num:02d} {'PASS' if ok else 'FAIL'} {label}")
    assert ok, f"criterion {num:02d}: {label}"


def sign(q) -> int:
    return (q > 0) - (q < 0)


def rebuild(machine, accepting):
    return A.ClassicalAutomaton.build(
        kind=machine.kind,
        states=machine.states,
        alphabet=machine.alphabet,
        transitions=dict(machine.transitions),
        initial=machine.initial,
        accepting=accepting,
    )


def test_criterion_01_equality_machine_exhaustive():
    m = A.m1_eq()
    eq = A.BUILTIN_ORACLES["eq"]()
    max_nonmember = Fraction(0)
    ok = True
    for w, value in A.prefix_values(m, 12):
        if w.count("a") == w.count("b"):
            ok = ok and value == 1
        else:
            max_nonmember = max(max_nonmember, value)
    ok = ok and max_nonmember == Fraction(2, 3)
    swept = A.sweep(m, Fraction(5, 6), "cutpoint", eq, 12)
    ok = ok and swept.ok and len(swept.records) == 8191
    # cutpoint 5/6 sits midway: certified width 1/3, radius 1/6
    ok = ok and A.isolation_gap(m, Fraction(5, 6), eq, 12).gap == Fraction(1, 3)
    report(1, ok, "two-state equality machine, all strings to length 12")


def test_criterion_02_scaled_equality_machines():
    ok = True
    for x in (Fraction(1), Fraction(3), Fraction(10)):
        m = A.m2_eq(x)
        worst = Fraction(0)
        for w, value in A.prefix_values(m, 10):
            diff = abs(w.count("a") - w.count("b"))
            expected = Fraction(1) if diff == 0 else 1 / (2 * x * diff + 1)
            ok = ok and value == expected
            if diff:
                worst = max(worst, value)
        ok = ok and worst == 1 / (2 * x + 1)
    report(2, ok, "scaled equality machines at x in {1, 3, 10}, length 10")


def test_criterion_03_square_threshold_machine():
    m = A.lapins()
    ok = True
    count = 0
    for w, value in A.prefix_values(m, 9):
        count += 1
        x, y, z = w.count("a"), w.count("b"), w.count("c")
        member = x * x > y and y * y > z
        ok = ok and (value > HALF) == member
        delta = 1 if y * y - z >= 1 else -1
        ok = ok and sign(value - HALF) == sign(x * x * delta - y)
    ok = ok and count == 29524
    report(3, ok, "square-threshold machine, 29524 strings to length 9")


def test_criterion_04_absolute_value_machine():
    m = A.abs_eq()
    ok = A.accept_value(m, "aab") == Fraction(9, 14)
    for w, value in A.prefix_values(m, 14):
        mc, nc = w.count("a"), w.count("b")
        holds = abs(mc - nc) + abs(mc - 4 * nc) == abs(mc - 2 * nc) + abs(mc - 3 * nc)
        ok = ok and (value == HALF) == holds
    report(4, ok, "absolute-value machine, all strings to length 14")


def test_criterion_05_interior_cutpoint_shift():
    rng = random.Random(20240817)
    machines = [A.m1_eq()] + [random_afa(rng) for _ in range(20)]
    pairs = [
        (Fraction(1, 3), Fraction(1, 2)),
        (Fraction(1, 3), Fraction(1, 4)),
        (Fraction(5, 6), Fraction(1, 2)),
        (Fraction(5, 6), Fraction(1, 4)),
    ]
    ok = True
    for m in machines:
        base = list(A.prefix_values(m, 8))
        for lam1, lam2 in pairs:
            moved = A.shift_interior(m, lam1, lam2)
            ok = ok and moved.size == m.size + 2
            for (w, v), (_, v2) in zip(base, A.prefix_values(moved, 8)):
                ok = ok and sign(v - lam1) == sign(v2 - lam2)
    report(5, ok, "interior cutpoint shift on 21 machines, 4 cutpoint pairs")


def test_criterion_06_extreme_cutpoint_shift():
    # machines with honestly nonempty zero sets: the equality machine
    # with the accepting state swapped, and a counter machine whose
    # controller dies on the letter b
    swapped = rebuild(A.m1_eq(), (1,))
    controller = A.dfa_automaton(
        states=("ok", "dead"),
        alphabet=("a", "b"),
        moves={
            ("ok", "a"): "ok",
            ("ok", "b"): "dead",
            ("dead", "a"): "dead",
            ("dead", "b"): "dead",
        },
        initial="ok",
        accepting=("ok",),
    )
    counter = A.compile_blind_counters(
        A.CounterMachineSpec(
            dfa=controller,
            counters=1,
            increments={(0, "a"): (1,), (0, "b"): (0,), (1, "a"): (0,), (1, "b"): (0,)},
        )
    )
    ok = True
    zeros = 0
    for machine in (swapped, counter):
        for lam in (HALF, Fraction(2, 5)):
            moved = A.shift_extreme(machine, "zero", lam)
            for (w, v), (_, v2) in zip(
                A.prefix_values(machine, 8), A.prefix_values(moved, 8)
            ):
                ok = ok and (v == 0) == (v2 == lam)
                zeros += v == 0
    ok = ok and zeros > 0

    m = A.m1_eq()
    lam = Fraction(3, 4)
    moved = A.shift_extreme(m, "one", lam)
    for (w, v), (_, v2) in zip(A.prefix_values(m, 8), A.prefix_values(moved, 8)):
        if v == 1:
            ok = ok and v2 == lam
        else:
            ok = ok and v2 < lam
    report(6, ok, "extreme cutpoint shifts, zero and one sides, length 8")


def test_criterion_07_exclusive_pfa_to_nondeterministic_afa():
    mix = A.Mat([["1/4"] * 3, ["1/4"] * 3, ["1/2"] * 3])
    engineered = A.ClassicalAutomaton.build(
        kind="pfa",
        states=("u", "v", "w"),
        alphabet=("a", "b"),
        transitions={"a": mix, "b": mix, "cent": mix},
        initial=0,
        accepting=(0, 1),
    )
    rng = random.Random(71)
    pfas = [random_pfa(rng) for _ in range(10)] + [engineered]
    ok = True
    halves = 0
    for pfa in pfas:
        nafa = A.exclusive_pfa_to_nafa(pfa)
        for (w, p), (_, value) in zip(
            A.prefix_values(pfa, 10), A.prefix_values(nafa, 10)
        ):
            ok = ok and (value == 0) == (p == HALF)
            halves += p == HALF
    ok = ok and halves >= 2047  # the engineered machine sits at 1/2 everywhere
    report(7, ok, "exclusive-to-nondeterministic fold on 11 machines, length 10")


def test_criterion_08_affine_to_quantum_simulation():
    ok = True
    for m in (A.m1_eq(), A.abs_eq()):
        q = A.afa_to_nqfa(m)
        # (a) every channel completes to a valid superoperator
        ok = ok and q.violations(kappa=1e-9) == []
        # (b) quantitative tracking against the exact affine trace
        factors = {
            sym: A.normalization_factor(m.transitions[sym])
            for sym in (*m.alphabet, "cent", "dollar")
        }
        for w, value in A.prefix_values(m, 6):
            scale = factors["cent"] * factors["dollar"]
            for ch in w:
                scale *= factors[ch]
            v = A.run(m, w)
            target = sum(float(v[k]) ** 2 for k in m.accepting)
            got = A.qfa_accept(q, w) * scale * scale
            ok = ok and abs(got - target) <= 1e-6
        # (c) zero sets agree with no indeterminate strings
        members = {w for w, value in A.prefix_values(m, 6) if value > 0}
        oracle = A.LanguageOracle("positive", m.alphabet, lambda w: w in members)
        swept = A.sweep(q, 0, "nondet", oracle, 6, kappa=1e-9)
        ok = ok and swept.ok and swept.indeterminate == ()
    report(8, ok, "affine-to-quantum simulation, channels and values to length 6")


def test_criterion_09_normalized_semantics_agree():
    ok = True
    for name in A.ZOO_NAMES:
        m = A.zoo(name)
        for w, value in A.prefix_values(m, 8):
            ok = ok and A.accept_value_normalized(m, w) == value
        if not ok:
            break
    report(9, ok, "renormalizing semantics equals plain semantics, length 8")


def test_criterion_10_stochastic_machines_embed():
    rng = random.Random(1009)
    ok = True
    for _ in range(10):
        pfa = random_pfa(rng)
        as_affine = A.ClassicalAutomaton.build(
            kind="afa",
            states=pfa.states,
            alphabet=pfa.alphabet,
            transitions=dict(pfa.transitions),
            initial=pfa.initial,
            accepting=pfa.accepting,
        )
        for (w, p), (_, value) in zip(
            A.prefix_values(pfa, 8), A.prefix_values(as_affine, 8)
        ):
            ok = ok and p == value
    report(10, ok, "stochastic machines evaluate identically as affine, length 8")


def test_criterion_11_counter_encoders():
    ok = True
    for m in range(101):
        ok = ok and A.count_encoding(m) == (1, Fraction(m))
        square = A.square_encoding(m)
        ok = ok and square == (1, Fraction(2 * m + 1), Fraction(m * m))
        ok = ok and square[2] == m * m
    report(11, ok, "counting and squaring encoders for all m up to 100")


def test_criterion_12_weighting_operator():
    outcomes = A.weigh_partition(A.vec([1, -1, 1]), [{0}, {1, 2}])
    ok = [o.weight for o in outcomes] == [Fraction(1, 3), Fraction(2, 3)]
    ok = ok and outcomes[1].terminal and not outcomes[0].terminal
    rng = random.Random(5)
    for _ in range(100):
        v = random_rational_vector(rng, 5)
        fine = A.weigh_partition(v, [{k} for k in range(5)])
        ok = ok and sum(o.weight for o in fine) == 1
    report(12, ok, "weighting operator example and 100 random weight sums")


def test_criterion_13_tree_versus_density_semantics():
    rng = np.random.default_rng(42)
    ok = True
    for _ in range(5):
        q = random_qfa(rng, n=2, elements=2)
        for w in A.enumerate_strings("ab", 3):
            ok = ok and abs(A.leaf_acceptance(q, w) - A.qfa_accept(q, w)) <= 1e-9
    report(13, ok, "branching-tree aggregation matches density evolution")
