"""Colored Petri nets as concrete data: their step-sequence semantics,
morphisms, and the unfolding into ordinary nets."""

from .colored import (
    ColoredMarking,
    ColoredMorphism,
    ColoredPetriNet,
    binding_effect,
    check_colored_morphism,
    colored_enabled,
    colored_fire,
    colored_reachable,
    validate_colored_net,
)
from .errors import *  # noqa: F401,F403
from .multiset import GeneratorMap, Multiset, ms_add, ms_apply, ms_leq, ms_subtract
from .petri import (
    NetMorphism,
    PetriNet,
    check_net_morphism,
    enabled,
    enumerate_firing_sequences,
    fire,
    reachable,
)
from .semantics import (
    FoataForm,
    StepSequence,
    enumerate_step_sequences,
    foata_normalize,
    seq_compose,
    seq_equal,
    seq_parallel,
    seq_target,
)
from .unfolding import (
    IsoReport,
    marking_to_unfolded,
    step_to_unfolded,
    unfold_morphism,
    unfold_net,
    verify_unfolding_iso,
)

__version__ = "0.1.0"
