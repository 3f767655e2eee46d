"""Student-t process regression and Bayesian optimization.

Exact closed-form inference for Student-t process (TP) models in the
covariance parameterization, a Gaussian process baseline, samplers for the
matrix-variate constructions underlying the TP prior, marginalized
expected-improvement Bayesian optimization, and a distributional
verification battery.  See the command-line entry point ``tproc`` for the
packaged workflows.
"""

__version__ = "0.1.0"
