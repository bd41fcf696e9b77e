"""Affine, probabilistic and quantum finite automata.

Classical machines evaluate over exact rationals; affine machines admit
negative state entries and read acceptance through the weighting of the
final state. Quantum machines evolve density matrices through
superoperator channels on float matrices. The constructions module holds
the reference zoo and the compilers between the models; recognition
sweeps machines against language oracles; fileformat and cli expose the
plain-text machine format and the ``afa`` command.
"""

from .automata import (
    CENT,
    DOLLAR,
    ClassicalAutomaton,
    WeightOutcome,
    accept_value,
    accept_value_normalized,
    dfa_automaton,
    prefix_values,
    run,
    weigh_partition,
)
from .constructions import (
    CounterMachineSpec,
    ZOO_NAMES,
    abs_eq,
    afa_to_nqfa,
    compile_blind_counters,
    count_encoding,
    encoder,
    exclusive_pfa_to_nafa,
    lapins,
    m1_eq,
    m2_eq,
    normalization_factor,
    shift_extreme,
    shift_interior,
    square_encoding,
    tensor,
    zoo,
)
from .exactnum import (
    Mat,
    MatrixKind,
    Rational,
    RationalParseError,
    basis_vector,
    direct_sum,
    kron,
    kron_vec,
    l1_norm,
    parse_rational,
    render_rational,
    validate_kind,
    vec,
    vec_sum,
)
from .fileformat import (
    FormatError,
    dumps_automaton,
    load_automaton,
    load_counter_spec,
    loads_automaton,
    loads_counter_spec,
    save_automaton,
)
from .quantum import (
    DEFAULT_KAPPA,
    ChannelReport,
    QuantumAutomaton,
    Superoperator,
    apply_channel,
    basis_density,
    density_defects,
    leaf_acceptance,
    leaf_vectors,
    projective_measure,
    qfa_accept,
    qfa_final_density,
    qfa_prefix_values,
    validate_channel,
)
from .recognition import (
    BUILTIN_ORACLES,
    EquivalenceReport,
    IsolationReport,
    LanguageOracle,
    SweepReport,
    abseq_oracle,
    dfa_oracle,
    enumerate_strings,
    eq_oracle,
    equivalence_check,
    isolation_gap,
    lapins_oracle,
    oracle_eval,
    sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
