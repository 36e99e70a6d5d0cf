import numpy as np
from loguru import logger

from exception.invalid_channel_exception import InvalidChannelException
from infra.env import MERGE_TOLERANCE
from scheme.channel.channel_scheme import ChannelKind, ChannelSpec, ChannelUpload, RawChannelSpec, Reduction


def normalize(raw: RawChannelSpec) -> ChannelSpec:
    """
    h_k = h~_k A_k / sum_i h~_i A_i and sigma = sigma~ / sum_i h~_i A_i.
    """
    weighted = np.asarray(raw.h_raw) * np.asarray(raw.peaks)
    scale = weighted.sum()
    h = weighted / scale
    # Keep the gains summing to 1 after rounding
    h[-1] = 1.0 - h[:-1].sum()
    sigma = raw.sigma_raw / scale if raw.sigma_raw is not None else None
    return ChannelSpec(h=h.tolist(), alpha=list(raw.alpha), sigma=sigma)


def from_upload(upload: ChannelUpload) -> tuple[ChannelSpec, list[float] | None]:
    """Channel and, for the raw form, the peak vector used to unnormalize signals."""
    if upload.h is not None:
        return ChannelSpec(h=upload.h, alpha=upload.alpha, sigma=upload.sigma), None
    raw = RawChannelSpec(h_raw=upload.h_raw, peaks=upload.peaks, alpha=upload.alpha, sigma_raw=upload.sigma_raw)
    return normalize(raw), list(upload.peaks)


def _merge(h, alpha) -> tuple[list[list[int]], list[float], list[float]]:
    order = sorted(range(len(h)), key=lambda k: -alpha[k])
    groups: list[list[int]] = []
    ratios: list[float] = []
    gains: list[float] = []
    for k in order:
        if ratios and abs(ratios[-1] - alpha[k]) <= MERGE_TOLERANCE:
            groups[-1].append(k)
            gains[-1] += h[k]
        else:
            groups.append([k])
            ratios.append(alpha[k])
            gains.append(h[k])
    return groups, gains, ratios


def merge_equal_ratios(h, alpha) -> tuple[ChannelSpec, list[list[int]]]:
    """
    Sorts by descending ratio and merges antennas whose ratios agree; returns
    the merged channel and, per merged antenna, the input indices it drives.
    """
    groups, gains, ratios = _merge(list(h), list(alpha))
    gains[-1] = 1.0 - sum(gains[:-1])
    return ChannelSpec(h=gains, alpha=ratios), groups


def canonicalize(spec: ChannelSpec, kind: str, clamp: bool = True) -> tuple[ChannelSpec, Reduction]:
    """
    Sorts antennas by descending alpha and merges equal ratios. EC channels
    with every ratio above 1/2 are flipped (alpha -> 1 - alpha). BC channels
    with every ratio at least 1/2 are clamped to a single antenna with
    alpha = 1/2 unless `clamp` is off (feasibility of a given input is not
    preserved by the clamp, only capacity).
    """
    if kind not in ChannelKind.ALL:
        raise InvalidChannelException(f"Unknown channel kind: {kind}")

    n = spec.size
    groups, gains, ratios = _merge(spec.h, spec.alpha)

    flipped = clamped = False
    if kind == ChannelKind.EC and ratios[-1] > 0.5:
        flipped = True
        groups, gains = groups[::-1], gains[::-1]
        ratios = [1.0 - a for a in ratios[::-1]]
    elif kind == ChannelKind.BC and clamp and ratios[-1] >= 0.5:
        clamped = True
        groups = [sorted(range(n))]
        gains, ratios = [1.0], [0.5]

    if len(groups) < n:
        logger.debug(f"Merged {n} antennas into {len(groups)} groups")

    gains[-1] = 1.0 - sum(gains[:-1])
    canonical = ChannelSpec(h=gains, alpha=ratios, sigma=spec.sigma)
    reduction = Reduction(kind=kind, groups=groups, original_size=n, flipped=flipped, clamped=clamped)
    return canonical, reduction


def mirror(spec: ChannelSpec) -> ChannelSpec:
    """
    The equal-cost channel driven by 1 - x: gains reversed, alpha -> 1 - alpha.
    Both have the same capacity.
    """
    h = spec.h[::-1]
    h[-1] = 1.0 - sum(h[:-1])
    return ChannelSpec(h=h, alpha=[1.0 - a for a in spec.alpha[::-1]], sigma=spec.sigma)


def require_canonical(spec: ChannelSpec):
    if not spec.is_canonical():
        raise InvalidChannelException("alpha must be strictly decreasing; canonicalize the channel first")


def to_canonical_sample(reduction: Reduction, s):
    s = np.asarray(s, dtype=float)
    value = 1.0 - s if reduction.flipped else s
    return value if value.ndim else float(value)


def expand_signals(reduction: Reduction, x_canonical) -> np.ndarray:
    """
    Per-antenna normalized signals of the channel as given: antennas in a
    merged group repeat the group's signal, flipped channels send 1 - x.
    """
    x_canonical = np.asarray(x_canonical, dtype=float)
    x = np.empty(reduction.original_size)
    for g, members in enumerate(reduction.groups):
        x[members] = x_canonical[g]
    return 1.0 - x if reduction.flipped else x


def to_raw_signals(x, peaks) -> np.ndarray:
    return np.asarray(x, dtype=float) * np.asarray(peaks, dtype=float)
