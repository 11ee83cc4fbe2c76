from .admm import solve
from .config import (
    DictMode,
    SelfRepresentation,
    SolverConfig,
    Trpca,
    TruncatedTtsvd,
    config_from_dict,
    load_config,
    parse_dict_mode,
)
from .dictionary import (
    Dictionary,
    TrpcaResult,
    build_dictionary,
    default_trpca_lambda,
    denoise_dictionary,
    trpca,
)
from .state import SolverReport, SolverState, init_state
from .updates import (
    augmented_lagrangian,
    check_convergence,
    objective,
    update_e,
    update_j,
    update_l_bar,
    update_multipliers,
    update_n,
    update_t_aux,
    update_z_bar,
)

__all__ = [
    "solve",
    "SolverConfig",
    "DictMode",
    "SelfRepresentation",
    "TruncatedTtsvd",
    "Trpca",
    "parse_dict_mode",
    "config_from_dict",
    "load_config",
    "Dictionary",
    "TrpcaResult",
    "build_dictionary",
    "denoise_dictionary",
    "default_trpca_lambda",
    "trpca",
    "SolverState",
    "SolverReport",
    "init_state",
    "update_j",
    "update_z_bar",
    "update_t_aux",
    "update_l_bar",
    "update_n",
    "update_e",
    "update_multipliers",
    "check_convergence",
    "objective",
    "augmented_lagrangian",
]
