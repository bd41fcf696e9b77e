"""Plain-text automaton files.

The format is line oriented. ``#`` starts a comment, blank lines are
ignored. A header names the machine, then one matrix section per symbol:

    kind afa
    states e1 e2
    alphabet a b
    initial e1
    accepting e1

    symbol a
    2 0
    -1 1

    symbol b
    1/2 0
    1/2 1

Classical entries are rationals (``-?digits[/digits]``). The reserved
symbol names ``cent`` and ``dollar`` hold the end-marker matrices and may
be omitted, in which case they default to the identity. Quantum machines
(``kind qfa``) list one or more operation elements per symbol, each
introduced by an ``element`` line, with decimal float entries:

    symbol a
    element
    0.5 0.5
    -0.5 0.5

Counter machine inputs for the ``construct counters`` command use their
own header plus ``transition FROM SYMBOL TO`` and ``increment STATE
SYMBOL d1 .. dk`` lines; see :func:`loads_counter_spec`.
"""

from __future__ import annotations

import os
from typing import Union

from .automata import CENT, DOLLAR, KINDS, ClassicalAutomaton
from .constructions import CounterMachineSpec
from .exactnum import Mat, parse_rational, render_rational
from .quantum import QuantumAutomaton, Superoperator

Machine = Union[ClassicalAutomaton, QuantumAutomaton]

_HEADER_KEYS = ("kind", "states", "alphabet", "initial", "accepting")


class FormatError(ValueError):
    """Raised for unreadable automaton or counter files."""


def _logical_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append((lineno, body.split()))
    return out


def _parse_header(lines, path_hint: str):
    header: dict[str, list[str]] = {}
    index = 0
    while index < len(lines):
        lineno, tokens = lines[index]
        if tokens[0] not in _HEADER_KEYS:
            break
        key = tokens[0]
        if key in header:
            raise FormatError(f"{path_hint}:{lineno}: duplicate header line {key!r}")
        header[key] = tokens[1:]
        index += 1
    missing = [k for k in _HEADER_KEYS if k not in header and k != "accepting"]
    if missing:
        raise FormatError(f"{path_hint}: missing header lines: {', '.join(missing)}")
    header.setdefault("accepting", [])
    for key in ("kind", "initial"):
        if len(header[key]) != 1:
            raise FormatError(f"{path_hint}: header line {key!r} needs exactly one value")
    if not header["states"]:
        raise FormatError(f"{path_hint}: header line 'states' needs at least one name")
    return header, index


def _state_indices(header, path_hint: str):
    states = tuple(header["states"])
    if len(set(states)) != len(states):
        raise FormatError(f"{path_hint}: duplicate state names")
    index = {name: i for i, name in enumerate(states)}
    initial_name = header["initial"][0]
    if initial_name not in index:
        raise FormatError(f"{path_hint}: unknown initial state {initial_name!r}")
    accepting = []
    for name in header["accepting"]:
        if name not in index:
            raise FormatError(f"{path_hint}: unknown accepting state {name!r}")
        accepting.append(index[name])
    return states, index[initial_name], accepting


def _rational_row(tokens, width, lineno, path_hint):
    if len(tokens) != width:
        raise FormatError(f"{path_hint}:{lineno}: expected {width} entries, got {len(tokens)}")
    try:
        return [parse_rational(tok) for tok in tokens]
    except ValueError as exc:
        raise FormatError(f"{path_hint}:{lineno}: {exc}") from None


def _float_row(tokens, width, lineno, path_hint):
    if len(tokens) != width:
        raise FormatError(f"{path_hint}:{lineno}: expected {width} entries, got {len(tokens)}")
    out = []
    for tok in tokens:
        try:
            value = float(tok)
        except ValueError:
            raise FormatError(f"{path_hint}:{lineno}: not a float: {tok!r}") from None
        if value != value or value in (float("inf"), float("-inf")):
            raise FormatError(f"{path_hint}:{lineno}: non-finite entry {tok!r}")
        out.append(value)
    return out


def loads_automaton(text: str, path_hint: str = "<string>") -> Machine:
    """Parse an automaton file body. Raises :class:`FormatError` on bad input."""
    lines = _logical_lines(text)
    if not lines:
        raise FormatError(f"{path_hint}: empty file")
    header, index = _parse_header(lines, path_hint)
    kind = header["kind"][0]
    if kind not in (*KINDS, "qfa"):
        raise FormatError(f"{path_hint}: unknown kind {kind!r}")
    states, initial, accepting = _state_indices(header, path_hint)
    alphabet = tuple(header["alphabet"])
    n = len(states)
    reserved = {CENT, DOLLAR}
    known = set(alphabet) | reserved

    sections: dict[str, list[tuple[int, list[str]]]] = {}
    current: list[tuple[int, list[str]]] | None = None
    for lineno, tokens in lines[index:]:
        if tokens[0] == "symbol":
            if len(tokens) != 2:
                raise FormatError(f"{path_hint}:{lineno}: 'symbol' needs exactly one name")
            name = tokens[1]
            if name not in known:
                raise FormatError(f"{path_hint}:{lineno}: symbol {name!r} not in the alphabet")
            if name in sections:
                raise FormatError(f"{path_hint}:{lineno}: duplicate section for symbol {name!r}")
            current = sections.setdefault(name, [])
        elif tokens[0] in _HEADER_KEYS:
            raise FormatError(f"{path_hint}:{lineno}: header line {tokens[0]!r} after the body started")
        else:
            if current is None:
                raise FormatError(f"{path_hint}:{lineno}: matrix rows before any 'symbol' line")
            current.append((lineno, tokens))

    for sym in alphabet:
        if sym not in sections:
            raise FormatError(f"{path_hint}: no matrix section for alphabet symbol {sym!r}")

    if kind == "qfa":
        channels = {}
        for sym, body in sections.items():
            channels[sym] = _parse_channel(body, n, path_hint)
        return QuantumAutomaton.build(states, alphabet, channels, initial, accepting)

    transitions = {}
    for sym, body in sections.items():
        if len(body) != n:
            raise FormatError(f"{path_hint}: matrix for {sym!r} needs {n} rows, got {len(body)}")
        rows = [_rational_row(tokens, n, lineno, path_hint) for lineno, tokens in body]
        transitions[sym] = Mat(rows)
    return ClassicalAutomaton.build(kind, states, alphabet, transitions, initial, accepting)


def _parse_channel(body, n, path_hint) -> Superoperator:
    elements = []
    rows: list[list[float]] | None = None
    for lineno, tokens in body:
        if tokens == ["element"]:
            if rows is not None:
                elements.append(rows)
            rows = []
        else:
            if rows is None:
                raise FormatError(f"{path_hint}:{lineno}: matrix rows before any 'element' line")
            rows.append(_float_row(tokens, n, lineno, path_hint))
    if rows is not None:
        elements.append(rows)
    if not elements:
        raise FormatError(f"{path_hint}: channel section without any 'element' block")
    for rows in elements:
        if len(rows) != n:
            raise FormatError(f"{path_hint}: channel element needs {n} rows, got {len(rows)}")
    return Superoperator(tuple(elements))


def load_automaton(path) -> Machine:
    with open(path, "r", encoding="utf-8") as handle:
        return loads_automaton(handle.read(), path_hint=os.fspath(path))


def dumps_automaton(machine: Machine) -> str:
    """Serialize a machine; identity end-markers are omitted.

    Round-trips exactly: classical entries print as lowest-term
    rationals, quantum entries with full float precision.
    """
    lines = []
    kind = "qfa" if isinstance(machine, QuantumAutomaton) else machine.kind
    lines.append(f"kind {kind}")
    lines.append("states " + " ".join(machine.states))
    lines.append("alphabet " + " ".join(machine.alphabet))
    lines.append(f"initial {machine.states[machine.initial]}")
    lines.append(("accepting " + " ".join(machine.states[k] for k in sorted(machine.accepting))).rstrip())
    if isinstance(machine, QuantumAutomaton):
        identity = Superoperator.identity(machine.size)
        for sym in (*machine.alphabet, CENT, DOLLAR):
            channel = machine.channels[sym]
            if sym in (CENT, DOLLAR) and channel == identity:
                continue
            lines.append("")
            lines.append(f"symbol {sym}")
            for element in channel.elements:
                lines.append("element")
                for row in element:
                    lines.append(" ".join(repr(float(x)) for x in row))
    else:
        identity = Mat.identity(machine.size)
        for sym in (*machine.alphabet, CENT, DOLLAR):
            mat = machine.transitions[sym]
            if sym in (CENT, DOLLAR) and mat == identity:
                continue
            lines.append("")
            lines.append(f"symbol {sym}")
            for row in mat.data:
                lines.append(" ".join(render_rational(x) for x in row))
    return "\n".join(lines) + "\n"


def save_automaton(machine: Machine, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_automaton(machine))


def loads_counter_spec(text: str, path_hint: str = "<string>") -> CounterMachineSpec:
    """Parse a counter machine description.

    Header: ``kind counters``, ``states``, ``alphabet``, ``initial``,
    ``accepting``, plus ``counters K`` and optional ``scale X`` (default
    1). Body: one ``transition FROM SYMBOL TO`` line per controller move
    and one ``increment STATE SYMBOL d1 .. dK`` line per pair; both
    tables must be total.
    """
    from .automata import dfa_automaton

    lines = _logical_lines(text)
    if not lines:
        raise FormatError(f"{path_hint}: empty file")
    header: dict[str, list[str]] = {}
    body = []
    for lineno, tokens in lines:
        if tokens[0] in (*_HEADER_KEYS, "counters", "scale") and tokens[0] not in header:
            header[tokens[0]] = tokens[1:]
        else:
            body.append((lineno, tokens))
    for key in ("kind", "states", "alphabet", "initial", "counters"):
        if key not in header:
            raise FormatError(f"{path_hint}: missing header line {key!r}")
    if header["kind"] != ["counters"]:
        raise FormatError(f"{path_hint}: counter files need 'kind counters'")
    header.setdefault("accepting", [])
    states, initial, accepting = _state_indices(header, path_hint)
    alphabet = tuple(header["alphabet"])
    try:
        k = int(header["counters"][0])
    except (IndexError, ValueError):
        raise FormatError(f"{path_hint}: 'counters' needs one integer") from None
    scale_tokens = header.get("scale", ["1"])
    try:
        scale = parse_rational(scale_tokens[0])
    except (IndexError, ValueError):
        raise FormatError(f"{path_hint}: 'scale' needs one rational") from None

    moves = {}
    increments = {}
    state_index = {name: i for i, name in enumerate(states)}
    for lineno, tokens in body:
        if tokens[0] == "transition":
            if len(tokens) != 4:
                raise FormatError(f"{path_hint}:{lineno}: transition lines are 'transition FROM SYMBOL TO'")
            _, src, sym, dst = tokens
            _check_counter_names(src, sym, states, alphabet, path_hint, lineno)
            if dst not in state_index:
                raise FormatError(f"{path_hint}:{lineno}: unknown state {dst!r}")
            if (src, sym) in moves:
                raise FormatError(f"{path_hint}:{lineno}: duplicate transition for ({src!r}, {sym!r})")
            moves[(src, sym)] = dst
        elif tokens[0] == "increment":
            if len(tokens) != 3 + k:
                raise FormatError(f"{path_hint}:{lineno}: increment lines need {k} deltas")
            src, sym = tokens[1], tokens[2]
            _check_counter_names(src, sym, states, alphabet, path_hint, lineno)
            try:
                deltas = tuple(int(tok) for tok in tokens[3:])
            except ValueError:
                raise FormatError(f"{path_hint}:{lineno}: increments must be integers") from None
            if (state_index[src], sym) in increments:
                raise FormatError(f"{path_hint}:{lineno}: duplicate increment for ({src!r}, {sym!r})")
            increments[(state_index[src], sym)] = deltas
        else:
            raise FormatError(f"{path_hint}:{lineno}: unknown line {tokens[0]!r}")

    accepting_names = [states[i] for i in accepting]
    try:
        dfa = dfa_automaton(states, alphabet, moves, states[initial], accepting_names)
        return CounterMachineSpec(dfa, k, increments, scale)
    except ValueError as exc:
        raise FormatError(f"{path_hint}: {exc}") from None


def _check_counter_names(src, sym, states, alphabet, path_hint, lineno):
    if src not in states:
        raise FormatError(f"{path_hint}:{lineno}: unknown state {src!r}")
    if sym not in alphabet:
        raise FormatError(f"{path_hint}:{lineno}: unknown symbol {sym!r}")


def load_counter_spec(path) -> CounterMachineSpec:
    with open(path, "r", encoding="utf-8") as handle:
        return loads_counter_spec(handle.read(), path_hint=os.fspath(path))
