"""Deterministic, resumable random-number streams.

Every stochastic phase of a campaign (initial design, hyperparameter
restarts, network initialization, preference sampling, ...) draws from its
own counter-based generator derived from ``(seed, phase, iteration)``.  A
resumed run can therefore rebuild the exact stream for any iteration from
the campaign seed alone, without serializing generator state.
"""

import numpy as np

# Phase tags.  Values are part of the checkpoint/reproducibility contract:
# changing them changes every seeded run.
INIT_DESIGN = 1
GP_FIT = 2
PSL_INIT = 3
PSL_PREFS = 4
CANDIDATES = 5
SOBOL = 6
DIRECT_OPT = 7
EXPORT = 8
PSL_RETRY = 9


def stream(seed: int, phase: int, iteration: int = 0) -> np.random.Generator:
    """Return the generator for one (seed, phase, iteration) cell.

    Args:
        seed: campaign-level seed.
        phase: one of the module-level phase tags.
        iteration: iteration counter for per-iteration phases.

    Returns:
        A ``numpy.random.Generator`` backed by Philox, independent of all
        other (seed, phase, iteration) combinations.
    """
    ss = np.random.SeedSequence([int(seed), int(phase), int(iteration)])
    return np.random.Generator(np.random.Philox(ss))


def spawn_seed(seed: int, phase: int, iteration: int = 0) -> int:
    """Derive a plain integer seed for APIs that want one (e.g. Sobol scrambling)."""
    ss = np.random.SeedSequence([int(seed), int(phase), int(iteration)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])
