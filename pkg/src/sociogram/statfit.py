"""Log-space least-squares fits for degree power laws and exponential trends."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractError, SingularFitError, UndefinedMetricError

__all__ = [
    "FitResult",
    "Model",
    "fit",
    "fit_exponential",
    "fit_power_law",
    "fit_stretched_power_law",
    "r_squared",
]


class Model(str, Enum):
    POWER_LAW = "power_law"
    STRETCHED_POWER_LAW = "stretched_power_law"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class FitResult:
    """Fitted parameters.

    For power laws ``y = a * x**-beta`` (stretched: ``a * x**(-beta * x)``),
    ``param_a_or_k`` is a and ``param_beta_or_alpha`` is beta. For the
    exponential ``y = k * exp(alpha * x)`` they are k and alpha. ``r_squared``
    is measured in the space the regression ran in (log y).
    """

    model: Model
    param_a_or_k: float
    param_beta_or_alpha: float
    r_squared: float
    n_points: int
    log_space: bool = True
    flags: tuple[str, ...] = field(default=())

    def predict(self, x: float) -> float:
        if self.model is Model.POWER_LAW:
            return self.param_a_or_k * x ** (-self.param_beta_or_alpha)
        if self.model is Model.STRETCHED_POWER_LAW:
            return self.param_a_or_k * x ** (-self.param_beta_or_alpha * x)
        return self.param_a_or_k * math.exp(self.param_beta_or_alpha * x)


def r_squared(observed: Sequence[float], predicted: Sequence[float]) -> float:
    """Coefficient of determination 1 - SS_res / SS_tot."""
    obs = np.asarray(observed, dtype=float)
    pred = np.asarray(predicted, dtype=float)
    if obs.shape != pred.shape:
        raise ContractError("observed and predicted must have equal length")
    if obs.size < 2:
        raise ContractError("need at least two observations")
    ss_tot = float(np.sum((obs - obs.mean()) ** 2))
    if ss_tot == 0.0:
        raise UndefinedMetricError("observed values have zero variance")
    ss_res = float(np.sum((obs - pred) ** 2))
    return 1.0 - ss_res / ss_tot


def _ols(u: np.ndarray, w: np.ndarray) -> tuple[float, float, float, tuple[str, ...]]:
    """Slope, intercept and R^2 of w ~ intercept + slope * u."""
    u_mean = u.mean()
    w_mean = w.mean()
    su = u - u_mean
    suu = float(su @ su)
    if suu == 0.0 or suu <= 1e-300:
        raise SingularFitError("abscissa is constant; slope is not identifiable")
    slope = float(su @ (w - w_mean)) / suu
    intercept = float(w_mean - slope * u_mean)
    fitted = intercept + slope * u
    ss_res = float(np.sum((w - fitted) ** 2))
    ss_tot = float(np.sum((w - w_mean) ** 2))
    # the regression reproduces a constant target exactly; call that a perfect fit
    if ss_tot <= 1e-24 * max(1.0, float(w @ w)):
        return slope, intercept, 1.0, ("flat",)
    return slope, intercept, 1.0 - ss_res / ss_tot, ()


def _arrays(points: Iterable[tuple[float, float]]) -> tuple[np.ndarray, np.ndarray]:
    pts = list(points)
    if len(pts) < 3:
        raise ContractError(f"need at least 3 points, got {len(pts)}")
    arr = np.asarray(pts, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or not np.all(np.isfinite(arr)):
        raise ContractError("points must be finite (x, y) pairs")
    return arr[:, 0], arr[:, 1]


def fit_power_law(points: Iterable[tuple[float, float]]) -> FitResult:
    """Fit ``y = a x^-beta`` by OLS on (ln x, ln y).

    Raises:
        ContractError: fewer than 3 points or any coordinate <= 0.
        SingularFitError: all x equal.
    """
    x, y = _arrays(points)
    if np.any(x <= 0) or np.any(y <= 0):
        raise ContractError("power-law fit needs strictly positive x and y")
    slope, intercept, r2, flags = _ols(np.log(x), np.log(y))
    return FitResult(Model.POWER_LAW, math.exp(intercept), -slope, r2, len(x), True, flags)


def fit_stretched_power_law(points: Iterable[tuple[float, float]]) -> FitResult:
    """Fit ``y = a x^(-beta x)``, i.e. ln y = ln a - beta (x ln x)."""
    x, y = _arrays(points)
    if np.any(x <= 0) or np.any(y <= 0):
        raise ContractError("power-law fit needs strictly positive x and y")
    slope, intercept, r2, flags = _ols(x * np.log(x), np.log(y))
    return FitResult(Model.STRETCHED_POWER_LAW, math.exp(intercept), -slope, r2, len(x), True, flags)


def fit_exponential(points: Iterable[tuple[float, float]]) -> FitResult:
    """Fit ``y = k e^(alpha x)`` by OLS on (x, ln y).

    When alpha comes out as 0 (flag ``flat``), k is the geometric mean of y.
    """
    x, y = _arrays(points)
    if np.any(y <= 0):
        raise ContractError("exponential fit needs strictly positive y")
    slope, intercept, r2, flags = _ols(x, np.log(y))
    return FitResult(Model.EXPONENTIAL, math.exp(intercept), slope, r2, len(x), True, flags)


def fit(model: Model | str, points: Iterable[tuple[float, float]]) -> FitResult:
    model = Model(model)
    return {
        Model.POWER_LAW: fit_power_law,
        Model.STRETCHED_POWER_LAW: fit_stretched_power_law,
        Model.EXPONENTIAL: fit_exponential,
    }[model](points)
