# fracspec/optimizers/admissible.py

from dataclasses import dataclass
from enum import Enum
import warnings

import numpy as np

from fracspec.models.grid import ScalarField, lp_norm
from fracspec.utils.exceptions import (
    DegenerateDirectionWarning,
    InvalidGridError,
    InvalidInputError,
    InvalidParameterError,
)
from fracspec.utils.logger import logger


class SetKind(str, Enum):
    BALL = "ball"
    REARRANGEMENT = "rearrangement"


@dataclass(frozen=True, eq=False)
class AdmissibleSet:
    """
    Class of potentials λ is optimized over.

    Attributes:
        kind (SetKind): Ball {||V||_q <= M} or permutations of V0's cell values.
        q (float): Exponent of the ball norm.
        M (float): Ball radius.
        V0 (ScalarField): Generator of the rearrangement class.
    """
    kind: SetKind
    q: float | None = None
    M: float | None = None
    V0: ScalarField | None = None

    @classmethod
    def ball(cls, q: float, M: float) -> "AdmissibleSet":
        if not q > 1.0:
            raise InvalidParameterError(f"ball exponent must exceed 1, got q={q}")
        if not M > 0.0:
            raise InvalidParameterError(f"ball radius must be positive, got M={M}")
        return cls(SetKind.BALL, q=float(q), M=float(M))

    @classmethod
    def rearrangement(cls, V0: ScalarField) -> "AdmissibleSet":
        if V0 is None or len(V0.values) == 0:
            raise InvalidParameterError("rearrangement class needs a nonempty V0")
        return cls(SetKind.REARRANGEMENT, V0=V0)

    def contains(self, V: ScalarField, tol: float = 1e-12) -> bool:
        if self.kind is SetKind.BALL:
            return lp_norm(V, self.q) <= self.M + tol
        return bool(np.array_equal(np.sort(V.values), np.sort(self.V0.values)))


def project_ball(V: ScalarField, q: float, M: float) -> ScalarField:
    """V ↦ M V / max(M, ||V||_q)."""
    norm = lp_norm(V, q)
    if norm <= M:
        return V
    return V.with_values(V.values * (M / norm))


def ball_extremal(w: ScalarField, q: float, M: float) -> ScalarField:
    """
    M w^(1/(q-1)) / ||w^(1/(q-1))||_q, the Hölder equality case for w >= 0.

    Returns the zero field when w vanishes identically.
    """
    t = w.with_values(np.abs(w.values) ** (1.0 / (q - 1.0)))
    norm = lp_norm(t, q)
    if norm == 0.0:
        return w.with_values(np.zeros_like(w.values))
    return t.with_values(t.values * (M / norm))


def tangent_projection(V: ScalarField, W: ScalarField, q: float) -> ScalarField:
    """Remove from W its component along |V|^(q-2) V, so Σ |V|^(q-2) V W h = 0."""
    n = np.sign(V.values) * np.abs(V.values) ** (q - 1.0)
    nn = float(np.dot(n, n))
    if nn == 0.0:
        return W
    return W.with_values(W.values - (np.dot(n, W.values) / nn) * n)


def linear_minimize_over_set(w: ScalarField, admissible: AdmissibleSet) -> ScalarField:
    """
    Minimizer of V ↦ Σ V_i w_i h over the admissible set, for w >= 0.

    Ball: V = -M w^(1/(q-1)) / ||w^(1/(q-1))||_q. A zero w gives V ≡ 0 and a
    DegenerateDirectionWarning.
    Rearrangement: V0's values placed in the opposite order of w, the largest
    value on the cell with the smallest w; ties in w go by ascending cell index.

    Raises:
        InvalidInputError: If w has a negative entry.
    """
    values = np.asarray(w.values)
    if np.any(values < 0):
        raise InvalidInputError("linear minimization needs w >= 0")

    if admissible.kind is SetKind.BALL:
        if not np.any(values > 0):
            logger.warning("Linear minimization over the ball received w = 0; returning V = 0.")
            warnings.warn("w vanishes identically; the zero potential is returned", DegenerateDirectionWarning)
            return w.with_values(np.zeros_like(values))
        extremal = ball_extremal(w, admissible.q, admissible.M)
        return extremal.with_values(-extremal.values)

    V0 = admissible.V0.values
    if V0.shape != values.shape:
        raise InvalidGridError(f"w has {values.size} cells but V0 has {V0.size}")
    order = np.argsort(values, kind="stable")
    result = np.empty_like(V0)
    result[order] = np.sort(V0)[::-1]
    return w.with_values(result)


def comonotonicity_violations(w: np.ndarray, V: np.ndarray, tol: float) -> int:
    """Number of pairs (i, j), i < j, with (w_i - w_j)(V_i - V_j) > tol."""
    products = (w[:, None] - w[None, :]) * (V[:, None] - V[None, :])
    return int(np.count_nonzero(np.triu(products, k=1) > tol))
