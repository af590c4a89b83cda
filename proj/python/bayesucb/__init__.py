"""Bayesian UCB bandits: policies, regret-bound calculators, and simulation."""

try:
    from bayesucb._core import *  # noqa: F401,F403  (installed package layout)
    from bayesucb._core import bounds  # noqa: F401
except ImportError:  # build-tree layout: extension next to this package on sys.path
    from _core import *  # noqa: F401,F403
    from _core import bounds  # noqa: F401

__version__ = "0.1.0"
