import json

import pytest

from glocalsync import (
    ContentCategory,
    FaultModel,
    Workload,
    baseline_no_policy,
    load_catalog,
    replay_log,
    run,
)
from glocalsync.errors import InvalidFaultModel

ALL_RATES = {
    ContentCategory.CORPORATE: 0.4,
    ContentCategory.PRODUCT: 0.3,
    ContentCategory.SUPPORT: 0.3,
}


def test_zero_rate_is_trivially_converged(fig6_network, fig6_catalog):
    workload = Workload(seed=1, horizon=10, rates={})
    metrics, state, log = run(fig6_network, fig6_catalog, workload)
    assert metrics.windows == {}
    assert metrics.converged
    assert metrics.updates_applied == 0
    assert log == ""


def test_zero_latency_single_update_converges(fig6_network):
    catalog = load_catalog(json.dumps([
        {
            "item_id": "corp",
            "category": "CorporateInformation",
            "origin": "US",
            "components": [{"component_id": "c1", "pattern": "Internationalisation"}],
        }
    ]))
    # rate 1 on a 1-tick horizon forces exactly one update
    workload = Workload(seed=3, horizon=1, rates={ContentCategory.CORPORATE: 1.0})
    metrics, state, _ = run(fig6_network, catalog, workload, FaultModel())
    assert metrics.updates_applied == 1
    assert metrics.converged
    assert metrics.windows == {}  # acks land within the update tick


def test_drop_everything_leaves_outdated_window(fig6_network):
    catalog = load_catalog(json.dumps([
        {
            "item_id": "corp",
            "category": "CorporateInformation",
            "origin": "US",
            "components": [{"component_id": "c1", "pattern": "Internationalisation"}],
        }
    ]))
    horizon = 20
    workload = Workload(seed=3, horizon=horizon, rates={ContentCategory.CORPORATE: 1.0})
    # single update at tick 1; everything else dropped, never retried
    one_shot = Workload(seed=3, horizon=1, rates={ContentCategory.CORPORATE: 1.0})
    faults = FaultModel(drop_probability=1.0, retries=False)
    metrics, state, _ = run(
        fig6_network, catalog,
        Workload(seed=3, horizon=horizon, rates={ContentCategory.CORPORATE: 0.0}),
        faults,
    )
    assert metrics.windows == {}

    # force one update then silence: emulate via a catalog rate that fires
    # only on tick 1 is not expressible, so drive a 1-update run directly
    metrics1, _, _ = run(fig6_network, catalog, one_shot, faults)
    assert not metrics1.converged
    key = ("CorporateInformation", "Missing")
    scope_minus_author = 6
    assert metrics1.windows[key] == scope_minus_author  # one audited tick


def test_determinism_bit_identical(fig6_network, fig6_catalog):
    workload = Workload(seed=11, horizon=15, rates=ALL_RATES)
    faults = FaultModel(bounded_delay=(0, 2), lazy_delay=(1, 4), drop_probability=0.2)
    a = run(fig6_network, fig6_catalog, workload, faults)
    b = run(fig6_network, fig6_catalog, workload, faults)
    assert json.dumps(a[0].to_json(), sort_keys=True) == json.dumps(b[0].to_json(), sort_keys=True)
    assert a[2] == b[2]
    assert a[1].snapshot() == b[1].snapshot()


def test_replay_equivalence(fig6_network, fig6_catalog):
    workload = Workload(seed=5, horizon=12, rates=ALL_RATES)
    faults = FaultModel(bounded_delay=(0, 2), lazy_delay=(0, 3))
    _, state, log = run(fig6_network, fig6_catalog, workload, faults)
    replayed = replay_log(fig6_network, fig6_catalog, log.splitlines())
    assert replayed.snapshot() == state.snapshot()


def test_baseline_dominance(fig6_network, fig6_catalog):
    workload = Workload(seed=9, horizon=15, rates=ALL_RATES)
    policy, _, _ = run(fig6_network, fig6_catalog, workload, FaultModel())
    baseline, _, _ = baseline_no_policy(fig6_network, fig6_catalog, workload)
    assert policy.updates_applied == baseline.updates_applied
    for category in ContentCategory:
        assert policy.category_window(category) <= baseline.category_window(category)


def test_baseline_localisation_single_language(fig6_network):
    catalog = load_catalog(json.dumps([
        {
            "item_id": "np-only",
            "category": "CustomerSupportInformation",
            "origin": "NP",
            "components": [{"component_id": "c1", "pattern": "Localisation"}],
        }
    ]))
    workload = Workload(seed=2, horizon=10, rates={ContentCategory.SUPPORT: 0.8})
    metrics, _, _ = baseline_no_policy(fig6_network, catalog, workload)
    assert metrics.windows == {}  # singleton scope: nothing to propagate


def test_invalid_fault_models():
    with pytest.raises(InvalidFaultModel):
        FaultModel(drop_probability=1.5)
    with pytest.raises(InvalidFaultModel):
        FaultModel(bounded_delay=(3, 1))
    with pytest.raises(InvalidFaultModel):
        Workload(seed=1, horizon=0, rates={})
