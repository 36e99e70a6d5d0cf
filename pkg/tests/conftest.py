import pytest

from scheme.channel.channel_scheme import ChannelSpec


@pytest.fixture
def _ec_channel():
    """Three-antenna equal-cost channel with ratios already in canonical order."""
    return ChannelSpec(h=[0.4, 0.2, 0.4], alpha=[0.8, 0.3, 0.1])


@pytest.fixture
def _raw_channel_upload():
    """Three LEDs given by raw gains and peak intensities; the last two share a ratio."""
    return {"h_raw": [4e-6, 1.5e-6, 3e-6], "peaks": [2.0, 3.0, 2.5], "alpha": [0.4, 0.1, 0.1], "sigma_raw": 1e-6}


@pytest.fixture
def _merged_channel():
    """The raw channel above after normalization and merging of equal ratios."""
    return ChannelSpec(h=[0.4, 0.6], alpha=[0.4, 0.1])
