import json

import numpy as np
import pytest

from exception.domain_exception import DomainException
from exception.infeasible_distribution_exception import InfeasibleDistributionException
from model.decomposition import decomposition_model
from model.distribution.discrete_dist import DiscreteDist, from_atoms, point_mass
from model.distribution.distribution_model import maximally_convex
from model.channel.channel_model import from_upload
from model.file.distribution_file_model import to_distribution
from model.maxent.maxent_model import solve_gamma
from scheme.channel.channel_scheme import ChannelKind, ChannelSpec, ChannelUpload
from scheme.decomposition.decomposition_scheme import DecompositionMethod, PartitionPlan
from scheme.distribution.distribution_scheme import DistributionUpload


@pytest.fixture
def _maxent_ec(_ec_channel):
    return solve_gamma(_ec_channel, ChannelKind.EC).density


@pytest.fixture
def _plan(_maxent_ec, _ec_channel):
    return decomposition_model.solve_partition(_maxent_ec, _ec_channel)


def test_phi():
    assert decomposition_model.phi(0.3, 0.4, 0.2) == pytest.approx(0.3)
    assert decomposition_model.phi(0.5, 0.4, 0.2) == pytest.approx(0.4)
    assert decomposition_model.phi(0.9, 0.4, 0.2) == pytest.approx(0.7)
    np.testing.assert_allclose(decomposition_model.phi(np.array([0.1, 0.55, 1.0]), 0.4, 0.2), [0.1, 0.4, 0.8])
    with pytest.raises(DomainException):
        decomposition_model.phi(0.5, 0.6, 0.5)
    with pytest.raises(DomainException):
        decomposition_model.phi(0.5, 0.4, -0.1)
    assert decomposition_model.phi(0.5, 0.4, 0.6) == pytest.approx(0.4)


def test_thresholds(_plan):
    np.testing.assert_allclose(_plan.kappas, [0.0, 0.4, 0.564], atol=2e-3)


def test_sets_partition_unit_interval(_plan, _ec_channel):
    """|P_k| = h_k and the sets do not overlap."""
    np.testing.assert_allclose([P.measure() for P in _plan.sets], _ec_channel.h, atol=1e-9)
    for i in range(3):
        for j in range(i + 1, 3):
            assert _plan.sets[i].intersection(_plan.sets[j]).measure() < 1e-9
    assert _plan.sets[2].lower_bound() == pytest.approx(0.564, abs=2e-3)
    assert _plan.sets[2].upper_bound() == pytest.approx(0.964, abs=2e-3)


def test_partition_equations_hold(_maxent_ec, _ec_channel, _plan):
    for i in range(2, 5):
        assert decomposition_model.partition_residual(_maxent_ec, _ec_channel, _plan, i) == pytest.approx(0.0, abs=1e-6)
    with pytest.raises(DomainException):
        decomposition_model.partition_residual(_maxent_ec, _ec_channel, _plan, 5)


def test_signals_rebuild_s(_plan, _ec_channel):
    s = np.linspace(0.0, 1.0, 41)
    for method in (DecompositionMethod.PARTITION, DecompositionMethod.ITERATIVE):
        x = decomposition_model.decompose(_plan, _ec_channel, s, method)
        assert x.shape == (41, 3)
        assert np.all((x >= 0.0) & (x <= 1.0))
        np.testing.assert_allclose(x @ _ec_channel.gains, s, atol=1e-9)
        assert np.all(np.diff(x, axis=0) >= -1e-12)


def test_methods_agree(_plan, _ec_channel):
    s = np.linspace(0.0, 1.0, 101)
    x_partition = decomposition_model.decompose_partition(_plan, _ec_channel, s)
    x_iterative = decomposition_model.decompose_iterative(_plan, _ec_channel, s)
    np.testing.assert_allclose(x_partition, x_iterative, atol=1e-6)


def test_scalar_realization(_plan, _ec_channel):
    x = decomposition_model.decompose(_plan, _ec_channel, 0.98)
    assert x.shape == (3,)
    np.testing.assert_allclose(x, [1.0, 0.9, 1.0], atol=1e-2)
    with pytest.raises(DomainException):
        decomposition_model.decompose(_plan, _ec_channel, 0.5, "random")


def test_average_intensities_match(_maxent_ec, _plan, _ec_channel):
    """E[x_k(S)] = alpha_k, by midpoint quadrature over the quantile function."""
    u = (np.arange(4000) + 0.5) / 4000
    x = decomposition_model.decompose(_plan, _ec_channel, _maxent_ec.quantile(u))
    np.testing.assert_allclose(x.mean(axis=0), _ec_channel.alpha, atol=2e-3)


def test_discrete_input(_ec_channel):
    S = maximally_convex(_ec_channel)
    plan = decomposition_model.solve_partition(S, _ec_channel)
    x = decomposition_model.decompose(plan, _ec_channel, S.support)
    np.testing.assert_allclose(S.masses @ x, _ec_channel.alpha, atol=1e-9)
    np.testing.assert_allclose(x[-1], [1.0, 1.0, 1.0], atol=1e-9)
    np.testing.assert_allclose(x[0], [0.0, 0.0, 0.0], atol=1e-9)


def test_infeasible_input(_ec_channel):
    binary = DiscreteDist([0.0, 1.0], [0.58, 0.42])
    with pytest.raises(InfeasibleDistributionException):
        decomposition_model.solve_partition(binary, _ec_channel)
    with pytest.raises(InfeasibleDistributionException):
        decomposition_model.plan_signaling(binary, _ec_channel, ChannelKind.EC)


def test_flipped_channel():
    """A point mass at the mean drives every antenna at its own ratio."""
    spec = ChannelSpec(h=[0.5, 0.5], alpha=[0.9, 0.7])
    plan = decomposition_model.plan_signaling(point_mass(0.8), spec, ChannelKind.EC)
    assert plan.reduction.flipped
    np.testing.assert_allclose(plan.partition.kappas, [0.0, 0.15], atol=1e-9)
    np.testing.assert_allclose(decomposition_model.signal(plan, 0.8), [0.9, 0.7], atol=1e-9)


def test_bc_eight_ask(_merged_channel):
    S = DiscreteDist(np.arange(8) * 0.22 / 3.5, np.full(8, 1 / 8))
    plan = decomposition_model.plan_signaling(S, _merged_channel, ChannelKind.BC)
    assert plan.allocation.beta == pytest.approx(0.4)
    assert plan.partition.kappas[1] == pytest.approx(0.225714, abs=1e-5)


def test_bc_ook_merges_antennas(_merged_channel):
    """With a = (0.1, 0.1) both antennas send the same signal."""
    S = DiscreteDist([0.0, 1.0], [0.9, 0.1])
    plan = decomposition_model.plan_signaling(S, _merged_channel, ChannelKind.BC)
    np.testing.assert_allclose(plan.allocation.a, [0.1, 0.1])
    assert plan.partition_groups == [[0, 1]]
    x = decomposition_model.signal(plan, np.array([0.0, 1.0]))
    np.testing.assert_allclose(x, [[0.0, 0.0], [1.0, 1.0]], atol=1e-12)
    np.testing.assert_allclose(decomposition_model.decompose_bc(S, _merged_channel, 1.0), [1.0, 1.0], atol=1e-12)


def test_bc_zero_mean(_merged_channel):
    plan = decomposition_model.plan_signaling(point_mass(0.0), _merged_channel, ChannelKind.BC)
    assert plan.partition is None
    np.testing.assert_allclose(decomposition_model.signal(plan, [0.0]), [[0.0, 0.0]])
    assert decomposition_model.plan_to_json(plan)["kappa"] == []


def test_raw_signals_from_maxent(_raw_channel_upload):
    """Raw LED drive levels for the bounded-cost max-entropy input."""
    spec, peaks = from_upload(ChannelUpload(**_raw_channel_upload))
    S = to_distribution(DistributionUpload(type="maxent"), spec, ChannelKind.BC)
    plan = decomposition_model.plan_signaling(S, spec, ChannelKind.BC, peaks)
    assert plan.partition.kappas[1] == pytest.approx(0.272, abs=2e-3)

    x_raw = decomposition_model.raw_signal(plan, [0.2, 0.5, 0.9])
    np.testing.assert_allclose(
        x_raw,
        [[1.0, 0.0, 0.0], [1.36, 1.14, 0.95], [1.5, 3.0, 2.5]],
        atol=0.02,
    )

    plan_json = decomposition_model.plan_to_json(plan)
    assert plan_json["groups"] == [[0], [1, 2]]
    assert len(plan_json["sets"]) == 2


def test_raw_signals_need_peaks(_ec_channel):
    plan = decomposition_model.plan_signaling(maximally_convex(_ec_channel), _ec_channel, ChannelKind.EC)
    with pytest.raises(DomainException):
        decomposition_model.raw_signal(plan, 0.5)


def _random_channel(rng, n: int) -> ChannelSpec:
    h = rng.dirichlet(np.ones(n))
    alpha = np.sort(rng.uniform(0.02, 0.98, n))[::-1]
    h[-1] = 1.0 - h[:-1].sum()
    return ChannelSpec(h=h.tolist(), alpha=alpha.tolist())


def _random_feasible_input(rng, spec: ChannelSpec) -> DiscreteDist:
    """Mixture of the maximally convex law and a point mass at the mean."""
    extreme = maximally_convex(spec)
    weight = rng.uniform(0.2, 1.0)
    support = np.concatenate([extreme.support, [spec.mean_intensity]])
    masses = np.concatenate([weight * extreme.masses, [1.0 - weight]])
    return from_atoms(support, masses)


def test_random_discrete_inputs():
    """Reconstruction, ranges, monotonicity and average intensities on random channels."""
    rng = np.random.default_rng(2024)
    s = np.linspace(0.0, 1.0, 1000)
    for _ in range(200):
        spec = _random_channel(rng, int(rng.integers(2, 7)))
        S = _random_feasible_input(rng, spec)
        plan = decomposition_model.solve_partition(S, spec)

        x_partition = decomposition_model.decompose_partition(plan, spec, s)
        x_iterative = decomposition_model.decompose_iterative(plan, spec, s)
        np.testing.assert_allclose(x_partition @ spec.gains, s, atol=1e-12)
        np.testing.assert_allclose(x_partition, x_iterative, atol=1e-10)
        assert np.all((x_partition >= 0.0) & (x_partition <= 1.0))
        assert np.all(np.diff(x_partition, axis=0) >= -1e-12)

        x_atoms = decomposition_model.decompose_partition(plan, spec, S.support)
        np.testing.assert_allclose(S.masses @ x_atoms, spec.alpha, atol=1e-6)


@pytest.mark.parametrize("kind", ChannelKind.ALL)
def test_plan_json_reproduces_signals(_raw_channel_upload, kind):
    """A partition read back from its JSON form drives the antennas exactly as the solved one."""
    spec, _ = from_upload(ChannelUpload(**_raw_channel_upload))
    S = to_distribution(DistributionUpload(type="maxent"), spec, kind)
    plan = decomposition_model.plan_signaling(S, spec, kind)
    stored = json.loads(json.dumps(decomposition_model.plan_to_json(plan)))
    restored = plan.copy(update={"partition": PartitionPlan.from_json_dict(stored)})

    np.testing.assert_allclose(restored.partition.kappas, plan.partition.kappas, atol=0.0)
    s = np.linspace(0.0, 1.0, 101)
    for method in (DecompositionMethod.PARTITION, DecompositionMethod.ITERATIVE):
        np.testing.assert_allclose(
            decomposition_model.signal(restored, s, method), decomposition_model.signal(plan, s, method), atol=1e-15
        )
