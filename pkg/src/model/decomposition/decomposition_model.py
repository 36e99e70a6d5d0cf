from typing import Callable

import numpy as np
from loguru import logger
from pydantic import ValidationError
from scipy.optimize import bisect

from exception.domain_exception import DomainException
from exception.infeasible_distribution_exception import InfeasibleDistributionException
from exception.solver_not_converged_exception import SolverNotConvergedException
from infra.env import FEASIBILITY_TOLERANCE, ROOT_SCAN_CELLS, ROOT_TOLERANCE
from model.channel.channel_model import (
    canonicalize,
    expand_signals,
    merge_equal_ratios,
    require_canonical,
    to_canonical_sample,
    to_raw_signals,
)
from model.distribution.bounded_dist import BoundedDist, check_unit_interval
from model.feasibility.feasibility_model import bc_allocation, check, check_ec
from scheme.channel.channel_scheme import ChannelKind, ChannelSpec
from scheme.decomposition.decomposition_scheme import DecompositionMethod, PartitionPlan, PhiParams, SignalingPlan
from util.interval_set import IntervalSet
from util.logger import log

StopLoss = Callable[[float], float]

_SLIVER = 1e-14
_CERTIFICATE_TOLERANCE = 1e-6


def phi(s, v: float, z: float):
    """
    Greedily-constructed quantile map: s below v, flat at v on (v, v + z],
    shifted down by z above.
    """
    try:
        params = PhiParams(v=v, z=z)
    except ValidationError as e:
        raise DomainException(f"phi parameters out of range: v={v!r}, z={z!r}") from e
    v, z = params.v, max(params.z, 0.0)
    s = check_unit_interval(s, "s")
    value = np.where(s <= v, s, np.where(s <= v + z, v, s - z))
    return value if value.ndim else float(value)


def _residual_slt(parent: StopLoss, v: float, z: float, mass: float) -> StopLoss:
    """SLT of phi(R; v, z) given the SLT of R; `mass` is the SLT drop over [v, v + z]."""
    def slt(t: float) -> float:
        if t <= v:
            return max(parent(t) - mass, 0.0)
        return parent(min(t + z, 1.0))
    return slt


def _smallest_root(f: Callable[[float], float], lo: float, hi: float) -> float:
    """Smallest v in [lo, hi] with f(v) <= 0 for a continuous nonincreasing f."""
    if f(lo) <= 0.0:
        return lo
    top = f(hi)
    if top > 0.0:
        if top <= FEASIBILITY_TOLERANCE:
            return hi
        raise InfeasibleDistributionException(f"no threshold in [{lo!r}, {hi!r}], excess {top!r}")

    grid = np.linspace(lo, hi, ROOT_SCAN_CELLS + 1)
    left, right = lo, hi
    for a, b in zip(grid[:-1], grid[1:]):
        if f(b) <= 0.0:
            left, right = a, b
            break

    def excess(v: float) -> float:
        # Negative on the whole of f <= 0 so a plateau of roots resolves to its left end
        value = f(v)
        return value if value > 0.0 else -1.0

    try:
        root = bisect(excess, left, right, xtol=ROOT_TOLERANCE)
    except RuntimeError as e:
        raise SolverNotConvergedException(f"threshold bisection stalled on [{left!r}, {right!r}]") from e
    return root if f(root) <= 0.0 else min(root + ROOT_TOLERANCE, right)


def _assemble_sets(kappas: np.ndarray, h: np.ndarray) -> list[IntervalSet]:
    n = h.size
    sets: list[IntervalSet] = [IntervalSet()] * n
    occupied = IntervalSet()
    for j in range(n - 1, -1, -1):
        # Start where the unassigned measure below reaches kappa_j
        _, start = occupied.take_measure(0.0, kappas[j])
        collected, _ = occupied.take_measure(start, h[j])
        sets[j] = IntervalSet(collected, min_length=_SLIVER)
        occupied = occupied.union(sets[j])
    return sets


@log("Solve interval partition")
def solve_partition(S: BoundedDist, spec: ChannelSpec) -> PartitionPlan:
    """
    Thresholds kappa_n..kappa_2 as the smallest roots of
    SLT_R(v) - SLT_R(v + h_i) = h_i alpha_i on [0, H_[i-1]], R running
    through the residuals R_n = S, R_{i-1} = phi(R_i; kappa_i, h_i).
    The interval sets are then laid out from P_n down to P_1.
    """
    report = check_ec(S, spec)
    if not report.feasible:
        raise InfeasibleDistributionException(
            f"S is not (h, alpha)-decomposable (mean residual {report.mean_residual!r}, "
            f"min slack {report.min_slack!r})"
        )

    h = spec.gains
    alpha = spec.ratios
    cumulative = spec.cumulative_gains
    n = spec.size

    def _base(t: float) -> float:
        return float(S.slt(min(max(t, 0.0), 1.0)))

    residual: StopLoss = _base
    kappas = np.zeros(n)
    for i in range(n - 1, 0, -1):
        target = h[i] * alpha[i]

        def gap(v: float, _slt=residual, _h=h[i], _target=target) -> float:
            return _slt(v) - _slt(min(v + _h, 1.0)) - _target

        v = _smallest_root(gap, 0.0, cumulative[i])
        kappas[i] = v
        logger.debug(f"kappa_{i + 1} = {v!r}")
        residual = _residual_slt(residual, v, h[i], target)

    if np.any(np.diff(kappas) < -ROOT_TOLERANCE):
        logger.warning(f"Thresholds are not monotone: {kappas.tolist()}")

    plan = PartitionPlan(kappas=kappas.tolist(), sets=_assemble_sets(kappas, h))

    for i in range(2, n + 2):
        residual_value = partition_residual(S, spec, plan, i)
        if abs(residual_value) > _CERTIFICATE_TOLERANCE:
            logger.warning(f"Partition equation for set {i - 1} is off by {residual_value!r}")
    return plan


def partition_residual(S: BoundedDist, spec: ChannelSpec, plan: PartitionPlan, i: int) -> float:
    """
    Left minus right side of the partition equation for set i - 1
    (i = 2..n+1): SLT_S(kappa) - SLT_S(eta) - sum_{m=i-1}^{M} h_m alpha_m,
    eta the right end of P_{i-1} and M the largest index whose threshold
    lies below eta.
    """
    n = spec.size
    if not 2 <= i <= n + 1:
        raise DomainException(f"set index must lie in 2..{n + 1}, got {i}")
    k = i - 2
    kappa = plan.kappas[k]
    eta = plan.sets[k].upper_bound()
    if eta is None:
        eta = kappa
    overlapped = [j for j in range(k, n) if plan.kappas[j] < eta]
    last = max(overlapped, default=k)
    weighted = spec.gains * spec.ratios
    return float(S.slt(kappa) - S.slt(min(eta, 1.0)) - weighted[k:last + 1].sum())


def _as_rows(s) -> tuple[np.ndarray, bool]:
    s = check_unit_interval(s, "s")
    return np.atleast_1d(s), s.ndim == 0


def decompose_partition(plan: PartitionPlan, spec: ChannelSpec, s) -> np.ndarray:
    """x_k = |P_k intersected with [0, s]| / h_k."""
    values, scalar = _as_rows(s)
    h = spec.gains
    x = np.array([[P.measure_below(v) for P in plan.sets] for v in values]) / h
    x = np.clip(x, 0.0, 1.0)
    return x[0] if scalar else x


def decompose_iterative(plan: PartitionPlan, spec: ChannelSpec, s) -> np.ndarray:
    """
    From the last antenna down: x_k = (r - phi(r; kappa_k, h_k)) / h_k,
    then r <- phi(r; kappa_k, h_k), starting from r = s.
    """
    values, scalar = _as_rows(s)
    h = spec.gains
    x = np.zeros((values.size, spec.size))
    residual = values.copy()
    for k in range(spec.size - 1, -1, -1):
        kappa = plan.kappas[k]
        z = min(h[k], 1.0 - kappa)
        shifted = phi(residual, kappa, z)
        x[:, k] = (residual - shifted) / h[k]
        residual = shifted
    x = np.clip(x, 0.0, 1.0)
    return x[0] if scalar else x


def decompose(plan: PartitionPlan, spec: ChannelSpec, s, method: str = DecompositionMethod.PARTITION) -> np.ndarray:
    if method == DecompositionMethod.PARTITION:
        return decompose_partition(plan, spec, s)
    if method == DecompositionMethod.ITERATIVE:
        return decompose_iterative(plan, spec, s)
    raise DomainException(f"Unknown decomposition method: {method}")


def _allocation_partition(S: BoundedDist, spec: ChannelSpec):
    allocation = bc_allocation(S, spec)
    if allocation.beta <= 0.0:
        return allocation, None, None, [[k] for k in range(spec.size)]
    merged, groups = merge_equal_ratios(spec.h, allocation.a)
    return allocation, solve_partition(S, merged), merged, groups


def _spread(x_merged: np.ndarray, groups: list[list[int]], size: int) -> np.ndarray:
    x = np.zeros(x_merged.shape[:-1] + (size,))
    for g, members in enumerate(groups):
        x[..., members] = x_merged[..., g:g + 1]
    return x


def decompose_bc(S: BoundedDist, spec: ChannelSpec, s, method: str = DecompositionMethod.PARTITION) -> np.ndarray:
    """
    Bounded-cost signals: the allocation a = min(beta 1, alpha) turns the
    problem into an equal-cost decomposition for (h, a). Antennas with
    equal a share one threshold and one signal.
    """
    require_canonical(spec)
    allocation, partition, merged, groups = _allocation_partition(S, spec)
    values, scalar = _as_rows(s)
    if partition is None:
        x = np.zeros((values.size, spec.size))
    else:
        x = _spread(decompose(partition, merged, values, method), groups, spec.size)
    return x[0] if scalar else x


@log("Build signaling plan")
def plan_signaling(S: BoundedDist, spec: ChannelSpec, kind: str, peaks: list[float] | None = None) -> SignalingPlan:
    """
    Canonicalizes the channel (merging, flipping; no clamping), moves S into
    canonical coordinates and solves the partition once for reuse across
    realizations.
    """
    canonical, reduction = canonicalize(spec, kind, clamp=False)
    S_canonical = S.reflect() if reduction.flipped else S
    report = check(S_canonical, canonical, kind)
    if not report.feasible:
        raise InfeasibleDistributionException(
            f"S is not feasible for the {kind} channel (mean residual {report.mean_residual!r}, "
            f"min slack {report.min_slack!r})"
        )

    if kind == ChannelKind.EC:
        return SignalingPlan(
            kind=kind,
            spec=canonical,
            reduction=reduction,
            partition=solve_partition(S_canonical, canonical),
            partition_groups=[[k] for k in range(canonical.size)],
            partition_spec=canonical,
            peaks=peaks,
        )

    allocation, partition, merged, groups = _allocation_partition(S_canonical, canonical)
    return SignalingPlan(
        kind=kind,
        spec=canonical,
        reduction=reduction,
        partition=partition,
        partition_groups=groups,
        partition_spec=merged,
        allocation=allocation,
        peaks=peaks,
    )


def signal(plan: SignalingPlan, s, method: str = DecompositionMethod.PARTITION) -> np.ndarray:
    """Normalized per-antenna signals, in the antenna order of the channel as given."""
    values, scalar = _as_rows(s)
    s_canonical = np.atleast_1d(to_canonical_sample(plan.reduction, values))
    if plan.partition is None:
        x_canonical = np.zeros((values.size, plan.spec.size))
    else:
        x_merged = decompose(plan.partition, plan.partition_spec, s_canonical, method)
        x_canonical = _spread(x_merged, plan.partition_groups, plan.spec.size)
    x = np.array([expand_signals(plan.reduction, row) for row in x_canonical])
    return x[0] if scalar else x


def raw_signal(plan: SignalingPlan, s, method: str = DecompositionMethod.PARTITION) -> np.ndarray:
    if plan.peaks is None:
        raise DomainException("the channel was given in normalized form; no peak intensities to scale by")
    return to_raw_signals(signal(plan, s, method), plan.peaks)


def plan_to_json(plan: SignalingPlan) -> dict:
    return {
        "kind": plan.kind,
        "flipped": plan.reduction.flipped,
        # Antennas of the channel as given driven by each partition set
        "groups": [
            sorted(i for k in members for i in plan.reduction.groups[k]) for members in plan.partition_groups
        ],
        "allocation": plan.allocation.dict() if plan.allocation is not None else None,
        **(plan.partition.to_json_dict() if plan.partition is not None else {"kappa": [], "sets": []}),
    }
