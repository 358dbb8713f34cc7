"""Online multiple testing with e-values and p-values."""

from ._ofdr import (
    CapabilityError,
    ConfigError,
    DomainError,
    InputError,
    Procedure,
    StepOutcome,
    calibrate_p,
    donation_ebh_offline,
    ebh_offline,
    gamma_default,
    gen_bounded_hoeffding,
    gen_gaussian_local,
    harmonic,
    make_procedure,
    procedure_names,
    restricted_round,
    run_trials,
    verify,
)


def run(name, values, delta=0.1, gamma="default", seed=None, deadlines=None):
    """Feed a whole stream to a fresh procedure; returns its rejection set, 1-based, ascending."""
    proc = make_procedure(name, delta=delta, gamma=gamma, seed=seed)
    for i, v in enumerate(values):
        if deadlines is None:
            proc.step(v)
        else:
            proc.step(v, deadlines[i])
    return sorted(proc.rejected)


__all__ = [
    "CapabilityError",
    "ConfigError",
    "DomainError",
    "InputError",
    "Procedure",
    "StepOutcome",
    "calibrate_p",
    "donation_ebh_offline",
    "ebh_offline",
    "gamma_default",
    "gen_bounded_hoeffding",
    "gen_gaussian_local",
    "harmonic",
    "make_procedure",
    "procedure_names",
    "restricted_round",
    "run",
    "run_trials",
    "verify",
]
