"""Supervisory control of discrete event systems under sensor and actuator attacks."""
from casct.attack import (
    AttackLanguage,
    AttackSpec,
    control_always,
    control_sometimes,
    enumerate_attacked_patterns,
    phi,
    project,
    theta,
)
from casct.automata import (
    Automaton,
    EventClassification,
    SubautomatonWitness,
    accessible_part,
    determinize,
    epsilon_closure,
    language_contains,
    language_equal,
    product,
    subset_construction,
    to_dot,
)
from casct.closedloop import (
    AdversarialPolicy,
    RandomPolicy,
    ScriptedPolicy,
    closed_loop,
    large_language,
    simulate_trace,
    small_language,
)
from casct.errors import (
    CapacityError,
    CasctError,
    DomainError,
    ModelError,
    ObservationError,
    PolicyError,
    UnsupportedError,
)
from casct.modelfile import ModelFile, ModelFileError, format_model, format_supervisor, parse_model, parse_supervisor
from casct.observer import ca_observer, erase_unobservable, expand_attacks, state_estimate
from casct.synthesis import (
    InfimalResult,
    SupervisorRealization,
    compute_l_na,
    infimal_caco,
    least_restrictive_supervisor,
    synthesize_sp,
)
from casct.verification import (
    Counterexample,
    Verdict,
    check_ca_s_controllable,
    check_ca_s_observable,
    check_classic_controllable,
    check_classic_observable,
)

__version__ = "0.1.0"

__all__ = [
    "AttackLanguage",
    "AttackSpec",
    "control_always",
    "control_sometimes",
    "enumerate_attacked_patterns",
    "phi",
    "project",
    "theta",
    "Automaton",
    "EventClassification",
    "SubautomatonWitness",
    "accessible_part",
    "determinize",
    "epsilon_closure",
    "language_contains",
    "language_equal",
    "product",
    "subset_construction",
    "to_dot",
    "AdversarialPolicy",
    "RandomPolicy",
    "ScriptedPolicy",
    "closed_loop",
    "large_language",
    "simulate_trace",
    "small_language",
    "CapacityError",
    "CasctError",
    "DomainError",
    "ModelError",
    "ObservationError",
    "PolicyError",
    "UnsupportedError",
    "ModelFile",
    "ModelFileError",
    "format_model",
    "format_supervisor",
    "parse_model",
    "parse_supervisor",
    "ca_observer",
    "erase_unobservable",
    "expand_attacks",
    "state_estimate",
    "InfimalResult",
    "SupervisorRealization",
    "compute_l_na",
    "infimal_caco",
    "least_restrictive_supervisor",
    "synthesize_sp",
    "Counterexample",
    "Verdict",
    "check_ca_s_controllable",
    "check_ca_s_observable",
    "check_classic_controllable",
    "check_classic_observable",
]
