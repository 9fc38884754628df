"""Inverse link functions and the derived scalar maps used by the estimators.

Two links are supported: logistic (M2PL) and probit (normal ogive). For each
link we expose the forward map f, its inverse, its derivative, and the two
derived maps

    h(y) = max(|f_inv(y)|, |f_inv(1 - y)|)
    g(y) = inf { f'(x) : x in [f_inv(y), f_inv(1 - y)] }

on y in (0, 0.5). For the logistic link these have the closed forms
h(y) = log((1 - y) / y) and g(y) = y (1 - y); for the probit link g is the
normal density at the quantile f_inv(y) (the density is symmetric and
unimodal, so the infimum over the symmetric interval is attained at either
endpoint).

All maps are pure and accept scalars or numpy arrays.
"""

from __future__ import annotations

import enum

import numpy as np
from scipy.special import expit, logit, ndtr, ndtri

from .errors import InputError

_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


class LinkKind(enum.Enum):
    LOGISTIC = "logistic"
    PROBIT = "probit"


class LinkFunction:
    """An inverse link f together with f_inverse, f_derivative, h and g."""

    def __init__(self, kind: LinkKind | str):
        if isinstance(kind, str):
            kind = LinkKind(kind.lower())
        self.kind = kind

    def __repr__(self) -> str:
        return f"LinkFunction({self.kind.value})"

    def __eq__(self, other) -> bool:
        return isinstance(other, LinkFunction) and self.kind == other.kind

    def f(self, x):
        """Map a linear predictor to a probability in (0, 1)."""
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)):
            raise InputError("f requires finite input")
        if self.kind is LinkKind.LOGISTIC:
            out = expit(x)
        else:
            out = ndtr(x)
        return out if out.ndim else float(out)

    def f_inverse(self, y):
        """Quantile map; defined on (0, 1) only."""
        y = np.asarray(y, dtype=float)
        if not np.all(np.isfinite(y)) or np.any(y <= 0.0) or np.any(y >= 1.0):
            raise InputError("f_inverse requires values strictly inside (0, 1)")
        if self.kind is LinkKind.LOGISTIC:
            out = logit(y)
        else:
            out = ndtri(y)
        return out if out.ndim else float(out)

    def f_derivative(self, x):
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)):
            raise InputError("f_derivative requires finite input")
        if self.kind is LinkKind.LOGISTIC:
            p = expit(x)
            out = p * (1.0 - p)
        else:
            out = _INV_SQRT_2PI * np.exp(-0.5 * x * x)
        return out if out.ndim else float(out)

    def h(self, y):
        """Truncation-to-predictor bound: max of |f_inverse| at y and 1 - y."""
        y = np.asarray(y, dtype=float)
        if np.any(y <= 0.0) or np.any(y >= 0.5):
            raise InputError("h is defined on (0, 0.5)")
        out = np.maximum(np.abs(self.f_inverse(y)), np.abs(self.f_inverse(1.0 - y)))
        return out if out.ndim else float(out)

    def g(self, y):
        """Smallest slope of f on the symmetric interval [f_inv(y), f_inv(1-y)]."""
        y = np.asarray(y, dtype=float)
        if np.any(y <= 0.0) or np.any(y >= 0.5):
            raise InputError("g is defined on (0, 0.5)")
        if self.kind is LinkKind.LOGISTIC:
            out = y * (1.0 - y)
        else:
            # slope minimized at the interval endpoints (symmetric unimodal density)
            out = self.f_derivative(self.f_inverse(y))
        out = np.asarray(out)
        return out if out.ndim else float(out)


LOGISTIC = LinkFunction(LinkKind.LOGISTIC)
PROBIT = LinkFunction(LinkKind.PROBIT)
