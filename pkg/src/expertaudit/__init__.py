"""Auditing human discretionary expertise in algorithm-assisted interventions.

Subpackages:

- ``scm``: exact inference on small binary structural causal models
- ``audit``: expertise checks evaluated on exact models
- ``matching``: greedy pairing of algorithmically-indistinguishable records
- ``expert_test``: the matched-pair swap permutation test
- ``hte``: logistic HTE models, power/MDE calculus, AUC
- ``io``: ingestion, simulation, configuration and reports
"""

__version__ = "0.1.0"
