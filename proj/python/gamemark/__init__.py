"""gamemark: watermarking and statistical detection for game-playing strategies.

The heavy lifting lives in the C++ extension module; this package re-exports
its operations under one flat namespace.
"""

from gamemark._core import (  # noqa: F401
    START_FEN,
    analyze_trace,
    apply_move,
    classify_move,
    fnv1a64,
    game_status,
    legal_moves,
    next_action,
    observation,
    p_value,
    partition_actions,
    perft,
    pgn_records,
    roc_auc,
    seed_from_observation,
    simulate_null_z,
    simulate_theorem1,
    simulate_watermarked_z,
    verify_loss_bound,
    watermarked_expected_utility,
    z_score,
)

__all__ = [
    "START_FEN",
    "analyze_trace",
    "apply_move",
    "classify_move",
    "fnv1a64",
    "game_status",
    "legal_moves",
    "next_action",
    "observation",
    "p_value",
    "partition_actions",
    "perft",
    "pgn_records",
    "roc_auc",
    "seed_from_observation",
    "simulate_null_z",
    "simulate_theorem1",
    "simulate_watermarked_z",
    "verify_loss_bound",
    "watermarked_expected_utility",
    "z_score",
]

__version__ = "0.1.0"
