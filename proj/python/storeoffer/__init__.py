"""Online offering strategies for a storage-assisted renewable producer."""

from ._core import (
    BudgetExceeded,
    DomainError,
    IoError,
    Offer,
    PriceBounds,
    StorageSpec,
    ThresholdPolicy,
    Trace,
    ValidationError,
    __version__,
    adversarial_search,
    c_threshold,
    default_config,
    gen_synthetic,
    load_trace,
    ocsmb_offers,
    offline_opt,
    run_experiment,
    simulate,
    socs_offer,
    theoretical_cr,
)

__all__ = [
    "BudgetExceeded",
    "DomainError",
    "IoError",
    "Offer",
    "PriceBounds",
    "StorageSpec",
    "ThresholdPolicy",
    "Trace",
    "ValidationError",
    "__version__",
    "adversarial_search",
    "c_threshold",
    "default_config",
    "gen_synthetic",
    "load_trace",
    "ocsmb_offers",
    "offline_opt",
    "run_experiment",
    "simulate",
    "socs_offer",
    "theoretical_cr",
]
