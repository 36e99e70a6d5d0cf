from pathlib import Path

from loguru import logger

from exception.file_not_found_exception import FileNotFoundException
from exception.invalid_distribution_exception import InvalidDistributionException
from model.channel.channel_model import canonicalize
from model.distribution.bounded_dist import BoundedDist
from model.distribution.discrete_dist import DiscreteDist
from model.distribution.piecewise_exp_dist import PiecewiseExpDist
from model.maxent.maxent_model import solve_gamma
from scheme.channel.channel_scheme import ChannelKind, ChannelSpec
from scheme.distribution.distribution_scheme import DistributionType, DistributionUpload


def read_distribution(path: str | Path) -> DistributionUpload:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundException(f"Distribution file {path} not found")
    return DistributionUpload.parse_file(path)


def _pwexp(upload: DistributionUpload, spec: ChannelSpec, kind: str) -> BoundedDist:
    canonical, reduction = canonicalize(spec, kind, clamp=False)
    breakpoints = upload.breakpoints
    if breakpoints is None:
        breakpoints = canonical.cumulative_gains
    if upload.nu0 is None:
        density = PiecewiseExpDist(breakpoints, upload.lambdas)
    else:
        try:
            density = PiecewiseExpDist(breakpoints, upload.lambdas, upload.nu0)
        except InvalidDistributionException as e:
            # Rounded coefficients rarely integrate to exactly 1
            logger.warning(f"Renormalizing piecewise-exponential density: {e}")
            density = PiecewiseExpDist(breakpoints, upload.lambdas)
    return density.reflect() if reduction.flipped else density


def to_distribution(upload: DistributionUpload, spec: ChannelSpec, kind: str = ChannelKind.EC) -> BoundedDist:
    """
    The law of S in the coordinates of the channel as given. Discrete
    uploads are read as is. `pwexp` coefficients live on the canonical
    channel, as `maxent` writes them, and `maxent` uploads are solved
    there; both are reflected back when the canonical form flipped the
    ratios.
    """
    if upload.type == DistributionType.DISCRETE:
        return DiscreteDist(upload.support, upload.masses)
    if upload.type == DistributionType.PWEXP:
        return _pwexp(upload, spec, kind)
    canonical, reduction = canonicalize(spec, kind)
    density = solve_gamma(canonical, kind).density
    return density.reflect() if reduction.flipped else density


def load_distribution(path: str | Path, spec: ChannelSpec, kind: str = ChannelKind.EC) -> BoundedDist:
    return to_distribution(read_distribution(path), spec, kind)
