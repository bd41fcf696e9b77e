"""End-to-end tests for the command line interface.

Everything goes through ``main`` so the tests see exactly what a shell
user sees: exit codes, stdout text and stderr diagnostics.
"""

from fractions import Fraction

import pytest

from afalib.cli import main
from afalib.constructions import m1_eq
from afalib.fileformat import dumps_automaton, load_automaton, loads_counter_spec

BAD_COLUMN = """\
kind afa
states p q
alphabet a
initial p
accepting p

symbol a
1 0
1 1
"""

COUNTER = """\
kind counters
states only
alphabet a b
initial only
accepting only
counters 1

transition only a only
transition only b only
increment only a 1
increment only b -1
"""


@pytest.fixture
def m1_path(tmp_path):
    path = tmp_path / "m1.afa"
    path.write_text(dumps_automaton(m1_eq()))
    return str(path)


# ---------------------------------------------------------------- validate


def test_validate_accepts_a_good_machine(m1_path, capsys):
    assert main(["validate", m1_path]) == 0
    assert capsys.readouterr().out.strip() == "ok"


def test_validate_reports_violations(tmp_path, capsys):
    path = tmp_path / "bad.afa"
    path.write_text(BAD_COLUMN)
    assert main(["validate", str(path)]) == 1
    out = capsys.readouterr().out
    assert "column 0" in out
    assert "invalid: 1 violation(s)" in out


def test_validate_parse_failure_is_a_usage_error(tmp_path, capsys):
    path = tmp_path / "broken.afa"
    path.write_text("kind afa\nstates p\nalphabet a\ninitial p\nsymbol a\n1/0\n")
    assert main(["validate", str(path)]) == 2
    assert "error" in capsys.readouterr().err


def test_validate_missing_file(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "nowhere.afa")]) == 2


# --------------------------------------------------------------------- run


def test_run_prints_final_state_and_value(m1_path, capsys):
    assert main(["run", m1_path, "--input", "aab"]) == 0
    out = capsys.readouterr().out
    assert "final 2 -1" in out
    assert "value 2/3" in out


def test_run_empty_input_by_default(m1_path, capsys):
    assert main(["run", m1_path]) == 0
    assert "value 1" in capsys.readouterr().out


def test_run_normalized_flag(m1_path, capsys):
    assert main(["run", m1_path, "--input", "aab", "--normalized"]) == 0
    assert "value 2/3" in capsys.readouterr().out


def test_run_normalized_rejects_non_affine_machines(tmp_path, capsys):
    path = tmp_path / "d.dfa"
    path.write_text(
        "kind dfa\nstates p\nalphabet a\ninitial p\naccepting p\n\nsymbol a\n1\n"
    )
    assert main(["run", str(path), "--input", "a", "--normalized"]) == 2


def test_run_rejects_letters_outside_the_alphabet(m1_path):
    assert main(["run", m1_path, "--input", "xyz"]) == 2


def test_run_quantum_machine(tmp_path, m1_path, capsys):
    qpath = tmp_path / "q.qfa"
    assert main(["construct", "afa-to-nqfa", m1_path, "--out", str(qpath)]) == 0
    capsys.readouterr()
    assert main(["run", str(qpath), "--input", "ab"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("final")
    value = float(out.splitlines()[1].split()[1])
    assert 0.0 <= value <= 1.0


# ------------------------------------------------------------------- sweep


def test_sweep_pass_exit_code_and_report(m1_path, capsys):
    code = main(
        ["sweep", m1_path, "--cutpoint", "5/6", "--oracle", "eq", "--maxlen", "5"]
    )
    assert code == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert lines[0] == "string\tvalue\tmember\tagrees"
    assert "counterexamples\t0" in out
    assert "min_member_value\t1" in out
    assert "max_nonmember_value\t2/3" in out


def test_sweep_failure_lists_counterexamples(m1_path, capsys):
    code = main(
        ["sweep", m1_path, "--cutpoint", "1/2", "--oracle", "eq", "--maxlen", "4"]
    )
    assert code == 1
    out = capsys.readouterr().out
    assert "counterexample\ta" in out


def test_sweep_report_is_byte_deterministic(m1_path, tmp_path):
    args = ["sweep", m1_path, "--cutpoint", "5/6", "--oracle", "eq", "--maxlen", "6"]
    first, second = tmp_path / "one.tsv", tmp_path / "two.tsv"
    assert main(args + ["--out", str(first)]) == 0
    assert main(args + ["--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_sweep_oracle_can_be_a_dfa_file(tmp_path, capsys):
    dfa = tmp_path / "parity.dfa"
    dfa.write_text(
        "kind dfa\n"
        "states even odd\n"
        "alphabet a b\n"
        "initial even\n"
        "accepting even\n\n"
        "symbol a\n0 1\n1 0\n\n"
        "symbol b\n0 1\n1 0\n"
    )
    # the machine judged against itself as ground truth must agree everywhere
    code = main(
        ["sweep", str(dfa), "--cutpoint", "1/2", "--oracle", str(dfa), "--maxlen", "4"]
    )
    assert code == 0


def test_sweep_unknown_oracle_name(m1_path):
    assert main(
        ["sweep", m1_path, "--cutpoint", "1/2", "--oracle", "primes", "--maxlen", "3"]
    ) == 2


def test_sweep_rejects_bad_cutpoint_text(m1_path):
    assert main(
        ["sweep", m1_path, "--cutpoint", "0.83", "--oracle", "eq", "--maxlen", "3"]
    ) == 2


# --------------------------------------------------------------- construct


def test_construct_shift_interior_round_trip(tmp_path, m1_path, capsys):
    out = tmp_path / "shifted.afa"
    code = main(
        [
            "construct",
            "shift-interior",
            m1_path,
            "--from-cutpoint",
            "5/6",
            "--to-cutpoint",
            "1/2",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    shifted = load_automaton(out)
    assert shifted.size == 4
    capsys.readouterr()
    assert main(["run", str(out), "--input", "ab"]) == 0
    assert "value 4/5" in capsys.readouterr().out


def test_construct_requires_its_flags(m1_path, capsys):
    assert main(["construct", "shift-interior", m1_path]) == 2
    assert main(["construct", "shift-zero", m1_path]) == 2


def test_construct_checks_input_arity(m1_path):
    assert main(["construct", "tensor", m1_path]) == 2
    assert main(
        ["construct", "afa-to-nqfa", m1_path, m1_path]
    ) == 2


def test_construct_tensor(tmp_path, m1_path, capsys):
    out = tmp_path / "prod.afa"
    assert main(["construct", "tensor", m1_path, m1_path, "--out", str(out)]) == 0
    assert load_automaton(out).size == 4
    capsys.readouterr()
    assert main(["validate", str(out)]) == 0


def test_construct_shift_one(tmp_path, m1_path, capsys):
    out = tmp_path / "capped.afa"
    code = main(
        ["construct", "shift-one", m1_path, "--to-cutpoint", "3/4", "--out", str(out)]
    )
    assert code == 0
    capsys.readouterr()
    assert main(["run", str(out), "--input", "ab"]) == 0
    assert "value 3/4" in capsys.readouterr().out


def test_construct_counters_from_spec_file(tmp_path, capsys):
    spec_path = tmp_path / "balance.cm"
    spec_path.write_text(COUNTER)
    loads_counter_spec(COUNTER)  # sanity: the fixture itself parses
    out = tmp_path / "balance.afa"
    assert main(["construct", "counters", str(spec_path), "--out", str(out)]) == 0
    capsys.readouterr()
    assert main(["run", str(out), "--input", "aab"]) == 0
    assert "value 1/3" in capsys.readouterr().out


def test_construct_writes_to_stdout_without_out_flag(m1_path, capsys):
    assert main(["construct", "afa-to-nqfa", m1_path]) == 0
    text = capsys.readouterr().out
    assert text.startswith("kind qfa")


# --------------------------------------------------------------------- zoo


def test_zoo_writes_loadable_machines(tmp_path, capsys):
    out = tmp_path / "m.afa"
    assert main(["zoo", "lapins", "--out", str(out)]) == 0
    assert load_automaton(out).size == 25


def test_zoo_m2_requires_the_scale(capsys):
    assert main(["zoo", "m2_eq"]) == 2
    assert main(["zoo", "m1_eq", "--x", "2"]) == 2


def test_zoo_m2_with_scale_runs(tmp_path, capsys):
    out = tmp_path / "m2.afa"
    assert main(["zoo", "m2_eq", "--x", "3", "--out", str(out)]) == 0
    capsys.readouterr()
    assert main(["run", str(out), "--input", "aab"]) == 0
    assert "value 1/7" in capsys.readouterr().out


# ------------------------------------------------------------------- usage


def test_no_arguments_is_a_usage_error(capsys):
    assert main([]) == 2


def test_unknown_subcommand_is_a_usage_error(capsys):
    assert main(["frobnicate"]) == 2


def test_unknown_zoo_name_is_a_usage_error(capsys):
    assert main(["zoo", "m9_eq"]) == 2
