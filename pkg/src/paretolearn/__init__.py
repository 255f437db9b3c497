"""Multi-objective Bayesian optimization with a learned Pareto set model.

The package couples Gaussian-process surrogates with a preference-conditioned
network that maps trade-off weights to decision vectors.  Batched campaigns
select evaluation points by greedy hypervolume improvement over candidates
sampled from the learned model, and a small HTTP server exposes trained
models for interactive trade-off exploration.
"""

__version__ = "0.1.0"

from . import campaign, hv, problems, psmodel, scalarize, surrogate  # noqa: F401
