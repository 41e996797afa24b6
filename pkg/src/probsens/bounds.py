"""Numerical certification of the sensitivity and perturbation bounds.

Two kinds of checks live here:

* exact-arithmetic theorem checks (Titu/Sedrakyan, Pinsker, the discrete
  simplex oracle) where any violation beyond 1e-12 * scale is a bug, and
* estimator-facing checks (trace ordering, matrix ordering) whose
  comparisons build documented statistical slack into the right-hand side,
  never into the report's pass rule.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.stats import binom

from .errors import ContractError, ParameterDomainError, SupportError
from .fisher import FisherMatrix
from .mclr import SensitivityResult


def _tol(rhs: float) -> float:
    return 1e-12 * max(1.0, rhs)


@dataclass(frozen=True)
class BoundReport:
    """One lhs <= rhs comparison with its margin and context."""

    name: str
    lhs: float
    rhs: float
    satisfied: bool
    margin: float
    context: dict = field(default_factory=dict)

    @staticmethod
    def of(name: str, lhs: float, rhs: float, context: dict | None = None) -> "BoundReport":
        return BoundReport(
            name=name,
            lhs=float(lhs),
            rhs=float(rhs),
            satisfied=bool(lhs <= rhs + _tol(rhs)),
            margin=float(rhs - lhs),
            context=context or {},
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "satisfied": self.satisfied,
            "margin": self.margin,
            "context": self.context,
        }


def check_sensitivity_bound(
    result: SensitivityResult, f_y: FisherMatrix, f_x: FisherMatrix
) -> tuple[BoundReport, BoundReport]:
    """The two links of the chain |grad|^2 <= tr(F_y) <= tr(F_x)."""
    if f_y.n != f_x.n or result.gradient.shape != (f_y.n,):
        raise ContractError("parameter dimensions of gradient and information matrices differ")
    ctx = {"z": result.z, "p_f": result.p_f}
    return (
        BoundReport.of("grad_norm_sq<=tr_Fy", result.grad_norm_sq, f_y.trace, ctx),
        BoundReport.of("tr_Fy<=tr_Fx", f_y.trace, f_x.trace, ctx),
    )


def check_perturbation_bound(
    p_f_at_b: float, p_f_at_b_plus: float, db, fim: FisherMatrix
) -> BoundReport:
    """|delta P_f|^2 <= db^T F db; also reports delta-H = quad/2.

    The bound is only informative while the quadratic form stays <= 1
    (probabilities cannot change by more than 1); larger perturbations
    get a vacuous-bound warning.
    """
    quad = fim.quad_form(db)
    if quad > 1.0:
        warnings.warn(
            f"perturbation quadratic form {quad:.3g} > 1: bound is vacuous", RuntimeWarning
        )
    dp = p_f_at_b_plus - p_f_at_b
    return BoundReport.of(
        "dPf_sq<=quad_form",
        dp * dp,
        quad,
        {"delta_pf": dp, "delta_h": 0.5 * quad, "vacuous": quad > 1.0},
    )


def titu(u, v) -> tuple[float, float, bool]:
    """Sedrakyan/Titu inequality (sum u)^2 / sum v <= sum u^2/v for v > 0."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.ndim != 1:
        raise ContractError("u and v must be 1-D of equal length")
    if np.any(v <= 0.0):
        raise ParameterDomainError("all v entries must be > 0")
    if np.any(u < 0.0):
        raise ParameterDomainError("u entries must be >= 0")
    lhs = float(u.sum()) ** 2 / float(v.sum())
    rhs = float(np.sum(u * u / v))
    return lhs, rhs, lhs <= rhs + _tol(rhs)


def discrete_kl(p, q) -> float:
    """KL divergence of two PMFs on a shared support."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    active = p > 0.0
    if np.any(q[active] <= 0.0):
        raise SupportError("Q must be strictly positive wherever P is")
    return float(np.sum(p[active] * np.log(p[active] / q[active])))


def _require_pmf(p, name: str) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-9:
        raise ContractError(f"{name} is not a probability vector (sum {p.sum()!r})")
    return np.clip(p, 0.0, None)


def pinsker_check(p, q) -> BoundReport:
    """Pinsker's inequality ||P - Q||_1^2 <= 2 KL[P || Q].

    Also records the failure-set restriction chain: the worst failure set
    changes by the total variation distance, and (2 TV)^2 = L1^2 dominates
    every |delta P_f(A)|^2.
    """
    p = _require_pmf(p, "P")
    q = _require_pmf(q, "Q")
    if p.shape != q.shape:
        raise ContractError("P and Q must share a support")
    l1 = float(np.abs(p - q).sum())
    kl = discrete_kl(p, q)
    tv = 0.5 * l1
    return BoundReport.of(
        "l1_sq<=2kl",
        l1 * l1,
        2.0 * kl,
        {"kl": kl, "tv": tv, "worst_set_dpf_sq": tv * tv, "chain_ok": tv * tv <= l1 * l1 + _tol(l1 * l1)},
    )


@dataclass(frozen=True)
class DiscretePmfFamily:
    """A parametric PMF on d cells with a designated failure set.

    ``pmf(b)`` maps a parameter vector to d probabilities; ``dpdb`` may
    supply the exact (d, n) Jacobian, otherwise it is built from high-order
    central differences.
    """

    d: int
    pmf: Callable[[np.ndarray], np.ndarray]
    failure_set: tuple[int, ...]
    dpdb: Callable[[np.ndarray], np.ndarray] | None = None

    def probs(self, b) -> np.ndarray:
        p = np.asarray(self.pmf(np.asarray(b, dtype=float)), dtype=float)
        if p.shape != (self.d,):
            raise ContractError(f"pmf returned shape {p.shape}, expected ({self.d},)")
        return _require_pmf(p, "pmf(b)")

    def jacobian(self, b) -> np.ndarray:
        b = np.asarray(b, dtype=float)
        if self.dpdb is not None:
            jac = np.asarray(self.dpdb(b), dtype=float)
            if jac.shape != (self.d, b.size):
                raise ContractError(f"dpdb returned shape {jac.shape}")
            return jac
        # 4th-order central stencil per parameter
        jac = np.empty((self.d, b.size))
        for j in range(b.size):
            hj = 1e-4 * max(1.0, abs(b[j]))
            e = np.zeros_like(b)
            e[j] = 1.0
            jac[:, j] = (
                -self.probs(b + 2 * hj * e)
                + 8.0 * self.probs(b + hj * e)
                - 8.0 * self.probs(b - hj * e)
                + self.probs(b - 2 * hj * e)
            ) / (12.0 * hj)
        return jac

    def fim(self, b) -> FisherMatrix:
        p = self.probs(b)
        jac = self.jacobian(b)
        active = p > 0.0
        f = (jac[active].T / p[active]) @ jac[active]
        return FisherMatrix(0.5 * (f + f.T))


@dataclass(frozen=True)
class SimplexOracleResult:
    """Exact PMF evaluation of every quantity in the perturbation chain."""

    delta_pf: float
    delta_pf_sq: float
    d1_sq: float           # exact squared distance in sqrt-probability space
    d1_sq_linear: float    # first-order version; equals quad_form / 4 exactly
    quad_form: float       # db^T F db
    pf_b: float
    pf_b_plus: float
    bound_eq2: BoundReport
    bound_geometric: BoundReport


def discrete_simplex_oracle(fam: DiscretePmfFamily, b, db) -> SimplexOracleResult:
    """Brute-force check of the perturbation bound on a finite PMF.

    Everything is computed exactly from the PMF: the probability change of
    the failure set, the distance in sqrt-probability coordinates, and the
    quadratic form of the exact information matrix.  The geometric relation
    |delta P_f|^2 <= D1^2 is checked with O(|db|^3) slack (its first-order
    derivation ignores curvature); the final bound
    |delta P_f|^2 <= db^T F db is checked outright.

    Note the first-order D1^2 built from d(sqrt p)/db equals one quarter of
    the quadratic form, not the quadratic form itself; both values are
    reported so the discrepancy in the geometric derivation stays visible.
    """
    b = np.asarray(b, dtype=float)
    db = np.asarray(db, dtype=float)
    p = fam.probs(b)
    q = fam.probs(b + db)

    idx = np.asarray(fam.failure_set, dtype=int)
    if idx.size and (idx.min() < 0 or idx.max() >= fam.d):
        raise ContractError("failure set indices out of range")
    dead = idx[p[idx] == 0.0]
    if dead.size:
        warnings.warn(f"failure cells with zero probability excluded: {dead.tolist()}", RuntimeWarning)
        idx = idx[p[idx] > 0.0]

    pf_b = float(p[idx].sum())
    pf_bp = float(q[idx].sum())
    dpf = pf_bp - pf_b

    d1_sq = float(np.sum((np.sqrt(q) - np.sqrt(p)) ** 2))
    jac = fam.jacobian(b)
    active = p > 0.0
    dq_lin = (jac[active] @ db) / (2.0 * np.sqrt(p[active]))
    d1_sq_linear = float(np.sum(dq_lin * dq_lin))
    quad = fam.fim(b).quad_form(db)

    norm_db = float(np.linalg.norm(db))
    geometric = BoundReport.of(
        "dPf_sq<=d1_sq+O(db^3)",
        dpf * dpf,
        d1_sq + norm_db**3,
        {"d1_sq_exact": d1_sq, "slack": norm_db**3},
    )
    eq2 = BoundReport.of("dPf_sq<=quad_form", dpf * dpf, quad, {"pf_b": pf_b, "pf_b_plus": pf_bp})
    return SimplexOracleResult(
        delta_pf=dpf,
        delta_pf_sq=dpf * dpf,
        d1_sq=d1_sq,
        d1_sq_linear=d1_sq_linear,
        quad_form=quad,
        pf_b=pf_b,
        pf_b_plus=pf_bp,
        bound_eq2=eq2,
        bound_geometric=geometric,
    )


def binomial_family(n_trials: int, failure_set) -> DiscretePmfFamily:
    """Binomial(n_trials, theta) family with exact probability Jacobian."""

    def pmf(b):
        theta = float(np.atleast_1d(b)[0])
        if not 0.0 < theta < 1.0:
            raise ParameterDomainError("theta must be in (0, 1)")
        return binom.pmf(np.arange(n_trials + 1), n_trials, theta)

    def dpdb(b):
        theta = float(np.atleast_1d(b)[0])
        k = np.arange(n_trials + 1)
        p = binom.pmf(k, n_trials, theta)
        return (p * (k - n_trials * theta) / (theta * (1.0 - theta)))[:, None]

    return DiscretePmfFamily(
        d=n_trials + 1, pmf=pmf, failure_set=tuple(failure_set), dpdb=dpdb
    )


def info_processing_check(f_y: FisherMatrix, f_x: FisherMatrix, eig_tol: float = 0.05) -> BoundReport:
    """Deterministic maps cannot create information: tr(F_y) <= tr(F_x).

    The matrix ordering F_y <= F_x would need min eig(F_x - F_y) >= 0; with
    a kernel-estimated F_y only a relaxed check is possible, recorded in
    the context as a secondary report with rhs = eig_tol * tr(F_x).
    """
    if f_y.n != f_x.n:
        raise ContractError("information matrices differ in dimension")
    diff = f_x.matrix - f_y.matrix
    min_eig = float(np.linalg.eigvalsh(0.5 * (diff + diff.T)).min())
    secondary = BoundReport.of(
        "neg_min_eig<=tol*tr_Fx", -min_eig, eig_tol * f_x.trace, {"min_eigenvalue": min_eig}
    )
    return BoundReport.of(
        "tr_Fy<=tr_Fx",
        f_y.trace,
        f_x.trace,
        {"min_eigenvalue": min_eig, "matrix_order": secondary.to_dict()},
    )


def kl_quadratic_consistency(fim: FisherMatrix, db, kl_direct: float) -> float:
    """Relative error of a measured KL against its quadratic form.

    |kl - 0.5 db^T F db| / (0.5 db^T F db).  The expansion has an O(|db|)
    remainder, so halving the perturbation should roughly halve the error.
    """
    half_quad = 0.5 * fim.quad_form(db)
    if half_quad <= 0.0:
        raise ContractError("quadratic form must be positive for a relative error")
    return abs(kl_direct - half_quad) / half_quad


def kl_error_scaling_slope(rel_errors, scales) -> float:
    """Log-log slope of relative error against perturbation scale."""
    x = np.log(np.asarray(scales, dtype=float))
    y = np.log(np.asarray(rel_errors, dtype=float))
    slope = float(np.polyfit(x, y, 1)[0])
    return slope


def normal_pdf_grid(axis: np.ndarray, mu: float, sigma: float) -> np.ndarray:
    """Exact Normal pdf evaluated on a grid (for oracle density pairs)."""
    z = (axis - mu) / sigma
    return np.exp(-0.5 * z * z) / (sigma * math.sqrt(2.0 * math.pi))
