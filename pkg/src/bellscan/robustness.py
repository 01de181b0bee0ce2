"""Noise and detection-efficiency thresholds.

Noise model: the isotropic mixture rho_w = w |psi(theta)><psi(theta)| +
(1-w) 1/4.  For rank-1 projective measurements the fully mixed component
contributes the measurement-independent value

    N = sum M_A / 2 + sum M_B / 2 + sum C / 4,

so I(rho_w) = w Q(theta) + (1-w) N is linear in w and the visibility
threshold is the closed form w* = (bound - N) / (Q(theta) - N).  With
degenerate measurements allowed the noise term depends on the chosen
effects, so the threshold is found by bisection, re-optimizing the
measurements at each visibility (the optimized value is convex in w, so
the violating set is an interval ending at w = 1).

Detection model: each party holds a deterministic no-click assignment
(bit 1 = output "0" on non-detection).  The detected behavior is an affine
image of the quantum behavior, so for fixed assignments and efficiencies
the optimization collapses onto an effective coefficient table evaluated
on the undetected behavior plus a constant.  Thresholds are bisected on
the efficiency; monotonicity holds because a party can always discard
detections to simulate a lower efficiency.  The inner maximization runs
one batched see-saw over all no-click assignments times restarts, warm
started from the previous bisection step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import Behavior, BellFunctional, StructuralError
from .quantum import (
    QubitModel,
    _coefficient_arrays,
    _model_from_row,
    _seesaw_batch,
    seesaw_maximize,
)

__all__ = [
    "NoiseResult",
    "DetectionModel",
    "DetectionResult",
    "noise_floor",
    "noise_threshold",
    "detected_behavior",
    "eta_threshold_symmetric",
    "eta_threshold_asymmetric",
    "eta_asymmetric_sweep",
    "DEFAULT_SWEEP_THETAS",
]

_VIOLATION_MARGIN = 1e-9


@dataclass(frozen=True)
class NoiseResult:
    w_threshold: float
    theta: float
    model: QubitModel


@dataclass(frozen=True)
class DetectionModel:
    eta_a: float
    eta_b: float
    noclick_a: tuple[int, ...]
    noclick_b: tuple[int, ...]

    def __post_init__(self):
        if not (0.0 <= self.eta_a <= 1.0 and 0.0 <= self.eta_b <= 1.0):
            raise StructuralError("efficiencies must lie in [0, 1]")
        object.__setattr__(self, "noclick_a", tuple(self.noclick_a))
        object.__setattr__(self, "noclick_b", tuple(self.noclick_b))
        if not all(v in (0, 1) for v in self.noclick_a + self.noclick_b):
            raise StructuralError("no-click assignments must be bit vectors")


@dataclass(frozen=True)
class DetectionResult:
    eta: float
    eta_a: float
    eta_b: float
    model: QubitModel
    noclick_a: tuple[int, ...]
    noclick_b: tuple[int, ...]


def noise_floor(f: BellFunctional) -> Fraction:
    """Exact value on the maximally mixed state with rank-1 measurements."""
    return (Fraction(sum(f.alice_marg), 2) + Fraction(sum(f.bob_marg), 2)
            + Fraction(sum(v for row in f.corr for v in row), 4))


def noise_threshold(f: BellFunctional, theta: float, *,
                    allow_degenerate: bool = False, restarts: int = 50,
                    seed: int = 0, tol: float = 1e-10, w_tol: float = 1e-5,
                    max_sweeps: int = 500) -> NoiseResult | None:
    """Smallest visibility w at which |psi(theta)> still violates f.

    Returns None when the state does not violate even at w = 1.
    """
    if not 0.0 < theta <= math.pi / 4 + 1e-12:
        raise StructuralError(f"theta {theta} outside (0, pi/4]")
    bound = float(f.bound)
    best = seesaw_maximize(f, restarts=restarts, seed=seed, theta=theta,
                           allow_degenerate=allow_degenerate, tol=tol,
                           max_sweeps=max_sweeps)
    if best.value <= bound + _VIOLATION_MARGIN:
        return None
    if not allow_degenerate:
        floor = float(noise_floor(f))
        w = (bound - floor) / (best.value - floor)
        return NoiseResult(w_threshold=w, theta=theta, model=best.model)

    # identity effects make the noise term measurement-dependent: bisect,
    # re-optimizing at each visibility
    MA, MB, C = _coefficient_arrays(f)
    n = restarts
    rng = np.random.default_rng(seed)

    def value_at(w: float):
        state = _seesaw_batch(
            np.broadcast_to(MA, (n, MA.size)), np.broadcast_to(MB, (n, MB.size)),
            np.broadcast_to(C, (n,) + C.shape),
            theta=np.full(n, theta), free_theta=False, w=w,
            allow_degenerate=True, rng=rng, tol=tol, max_sweeps=max_sweeps)
        row = int(np.argmax(state["values"]))
        return float(state["values"][row]), _model_from_row(state, row)

    lo, hi = 0.0, 1.0
    model = best.model
    while hi - lo > w_tol:
        mid = 0.5 * (lo + hi)
        value, m = value_at(mid)
        if value > bound + _VIOLATION_MARGIN:
            hi, model = mid, m
        else:
            lo = mid
    return NoiseResult(w_threshold=hi, theta=theta, model=model)


def detected_behavior(p: Behavior, d: DetectionModel) -> Behavior:
    """Behavior seen with inefficient detectors and deterministic no-click outputs."""
    ma, mb = len(p.p_a), len(p.p_b)
    if len(d.noclick_a) != ma or len(d.noclick_b) != mb:
        raise StructuralError("no-click assignments do not match the behavior shape")
    ea, eb = d.eta_a, d.eta_b
    sa, sb = d.noclick_a, d.noclick_b
    q_a = tuple(ea * p.p_a[x] + (1 - ea) * sa[x] for x in range(ma))
    q_b = tuple(eb * p.p_b[y] + (1 - eb) * sb[y] for y in range(mb))
    q_ab = tuple(
        tuple(ea * eb * p.p_ab[x][y]
              + ea * (1 - eb) * p.p_a[x] * sb[y]
              + (1 - ea) * eb * sa[x] * p.p_b[y]
              + (1 - ea) * (1 - eb) * sa[x] * sb[y]
              for y in range(mb))
        for x in range(ma))
    return Behavior(q_a, q_b, q_ab)


# ---------------------------------------------------------------------------
# Detection thresholds.
# ---------------------------------------------------------------------------

def _assignment_bits(count: int, m: int) -> np.ndarray:
    masks = np.arange(count, dtype=np.int64)
    return ((masks[:, None] >> np.arange(m)) & 1).astype(float)


def _effective_tables(MA, MB, C, eta_a, eta_b, sa, sb):
    """Detected-value decomposition: I(detected p) = const + I_eff(p)."""
    csb = sb @ C.T                      # (n, ma): sum_y C[x,y] s_b[y]
    csa = sa @ C                        # (n, mb)
    MA_eff = eta_a * MA[None, :] + eta_a * (1 - eta_b) * csb
    MB_eff = eta_b * MB[None, :] + (1 - eta_a) * eta_b * csa
    const = ((1 - eta_a) * (sa @ MA) + (1 - eta_b) * (sb @ MB)
             + (1 - eta_a) * (1 - eta_b) * np.einsum("nx,nx->n", sa, csb))
    return MA_eff, MB_eff, const


def _detected_max(MA, MB, C, theta, eta_a, eta_b, sa, sb, *, rng, restarts,
                  warm, allow_degenerate, tol, max_sweeps):
    """Max of I over measurements and the supplied no-click assignments."""
    n = sa.shape[0]
    MA_eff, MB_eff, const = _effective_tables(MA, MB, C, eta_a, eta_b, sa, sb)
    r = restarts
    total_rows = n * r
    big_ma = np.repeat(MA_eff, r, axis=0)
    big_mb = np.repeat(MB_eff, r, axis=0)
    big_c = np.broadcast_to(eta_a * eta_b * C, (total_rows,) + C.shape)
    init = None
    if warm is not None:
        init = {"rows": np.arange(n) * r, **warm}
    state = _seesaw_batch(big_ma, big_mb, big_c,
                          theta=np.full(total_rows, theta), free_theta=False,
                          allow_degenerate=allow_degenerate, rng=rng, init=init,
                          tol=tol, max_sweeps=max_sweeps)
    totals = (state["values"] + np.repeat(const, r)).reshape(n, r)
    best_r = totals.argmax(axis=1)
    best_rows = np.arange(n) * r + best_r
    warm_out = {k: state[k][best_rows].copy()
                for k in ("akind", "abloch", "bkind", "bbloch")}
    best_assign = int(totals.max(axis=1).argmax())
    best_row = best_assign * r + int(best_r[best_assign])
    return (float(totals[best_assign, best_r[best_assign]]), best_assign,
            _model_from_row(state, best_row), warm_out)


def _eta_threshold(f: BellFunctional, theta: float, symmetric: bool, *,
                   seed: int, restarts: int, eta_tol: float,
                   allow_degenerate: bool, tol: float,
                   max_sweeps: int) -> DetectionResult | None:
    if not 0.0 < theta <= math.pi / 4 + 1e-12:
        raise StructuralError(f"theta {theta} outside (0, pi/4]")
    ma, mb = f.scenario.m_a, f.scenario.m_b
    MA, MB, C = _coefficient_arrays(f)
    bound = float(f.bound)
    rng = np.random.default_rng(seed)

    if symmetric:
        n = 1 << (ma + mb)
        masks = np.arange(n)
        sa = ((masks[:, None] >> np.arange(ma)) & 1).astype(float)
        sb = ((masks[:, None] >> (ma + np.arange(mb))) & 1).astype(float)
    else:
        sb = _assignment_bits(1 << mb, mb)
        sa = np.zeros((1 << mb, ma))  # irrelevant at eta_a = 1

    warm = None

    def evaluate_at(eta):
        nonlocal warm
        ea, eb = (eta, eta) if symmetric else (1.0, eta)
        value, assign, model, warm = _detected_max(
            MA, MB, C, theta, ea, eb, sa, sb, rng=rng, restarts=restarts,
            warm=warm, allow_degenerate=allow_degenerate, tol=tol,
            max_sweeps=max_sweeps)
        return value > bound + _VIOLATION_MARGIN, (assign, model)

    violated, info = evaluate_at(1.0)
    if not violated:
        return None
    lo, hi = 0.0, 1.0
    while hi - lo > eta_tol:
        mid = 0.5 * (lo + hi)
        violated, res = evaluate_at(mid)
        if violated:
            hi, info = mid, res
        else:
            lo = mid
    assign, model = info
    noclick_a = tuple(int(v) for v in sa[assign])
    noclick_b = tuple(int(v) for v in sb[assign])
    ea, eb = (hi, hi) if symmetric else (1.0, hi)
    return DetectionResult(eta=hi, eta_a=ea, eta_b=eb, model=model,
                           noclick_a=noclick_a, noclick_b=noclick_b)


def eta_threshold_symmetric(f: BellFunctional, theta: float = math.pi / 4, *,
                            seed: int = 0, restarts: int = 8,
                            eta_tol: float = 1e-5,
                            allow_degenerate: bool = False, tol: float = 1e-10,
                            max_sweeps: int = 300) -> DetectionResult | None:
    """Threshold efficiency eta_A = eta_B = eta, optimizing measurements and
    no-click strategies; None when there is no violation at eta = 1."""
    return _eta_threshold(f, theta, True, seed=seed, restarts=restarts,
                          eta_tol=eta_tol, allow_degenerate=allow_degenerate,
                          tol=tol, max_sweeps=max_sweeps)


def eta_threshold_asymmetric(f: BellFunctional, theta: float = math.pi / 4, *,
                             seed: int = 0, restarts: int = 8,
                             eta_tol: float = 1e-5,
                             allow_degenerate: bool = False, tol: float = 1e-10,
                             max_sweeps: int = 300) -> DetectionResult | None:
    """Threshold eta_B with a perfect detector on Alice's side (eta_A = 1)."""
    return _eta_threshold(f, theta, False, seed=seed, restarts=restarts,
                          eta_tol=eta_tol, allow_degenerate=allow_degenerate,
                          tol=tol, max_sweeps=max_sweeps)


def _default_sweep_thetas() -> tuple[float, ...]:
    out = []
    t = 0.25
    while t > 0.005:
        out.append(t)
        t /= 2
    out.append(0.005)
    return tuple(v * math.pi for v in out)


DEFAULT_SWEEP_THETAS = _default_sweep_thetas()


def eta_asymmetric_sweep(f: BellFunctional, thetas=None, **opts):
    """eta_B thresholds over a decreasing grid of Schmidt angles.

    Returns [(theta, DetectionResult | None), ...].  The grid shows the
    trend toward weak entanglement; the limiting value is not asserted.
    """
    if thetas is None:
        thetas = DEFAULT_SWEEP_THETAS
    return [(theta, eta_threshold_asymmetric(f, theta, **opts))
            for theta in thetas]
