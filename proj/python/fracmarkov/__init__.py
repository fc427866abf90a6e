"""Fractional operators, jump processes and boundary value problems."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, Error, ConfigError, DomainError, CensoringError  # noqa: F401


def derivative_on_grid(f, anchor, beta, xs, kind="caputo", side="right"):
    """frac_derivative at each point of xs."""
    return [frac_derivative(f, anchor, beta, x, kind, side) for x in xs]  # noqa: F405
