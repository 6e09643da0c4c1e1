"""Chain construction, stationary solve, and structural invariants."""

import numpy as np
import pytest

from mmwlink.chain import (MarkovChain, build_chain, chain_from_rates,
                           state_labels, stationary, transition_csv)
from mmwlink.scenario import (BlockageProcess, ConfigError, ScenarioConfig,
                              SweepPolicy, validate)


def test_state_labels():
    assert state_labels(1) == ("best", "blocked")
    assert state_labels(3) == ("best", "sub1", "sub2", "blocked")


def test_chain_from_rates_shapes_and_rows():
    ch = chain_from_rates(2000.0, 532.0, 0.5, (0.25, 0.25, 0.5),
                          (3.0e9, 2.0e9, 1.0e9, 0.0))
    assert ch.n_states == 4
    assert ch.matrix.shape == (4, 4)
    np.testing.assert_allclose(ch.matrix.sum(axis=1), 1.0, atol=1e-15)
    # best row: hold or get blocked
    assert ch.matrix[0, 0] == 1.0 - 1.0 / 2000.0
    assert ch.matrix[0, 3] == 1.0 / 2000.0
    # blocked row: hold or recover per the recovery weights
    assert ch.matrix[3, 3] == 1.0 - 1.0 / 532.0
    assert ch.matrix[3, 0] == pytest.approx(0.25 / 532.0, rel=1e-15)
    assert ch.matrix[3, 2] == pytest.approx(0.5 / 532.0, rel=1e-15)


def test_suboptimal_row_always_preempted():
    # preemption certain: suboptimal states behave exactly like the best
    # one (same dwell, same exit target)
    ch = chain_from_rates(2000.0, 500.0, 1.0, (0.5, 0.5), (2.0e9, 1.0e9, 0.0))
    assert ch.matrix[1, 1] == ch.matrix[0, 0]
    assert ch.matrix[1, 2] == ch.matrix[0, 2]
    assert ch.matrix[1, 0] == 0.0


def test_suboptimal_row_never_preempted():
    # preemption impossible: the next sweep rescues within one slot
    ch = chain_from_rates(2000.0, 500.0, 0.0, (0.5, 0.5), (2.0e9, 1.0e9, 0.0))
    assert ch.matrix[1, 0] == 1.0
    assert ch.matrix[1, 1] == 0.0
    assert ch.matrix[1, 2] == 0.0


def test_chain_from_rates_rejects_bad_parameters():
    with pytest.raises(ConfigError):
        chain_from_rates(1.0, 500.0, 0.5, (1.0,), (1.0e9, 0.0))
    with pytest.raises(ConfigError):
        chain_from_rates(2000.0, 500.0, 1.5, (1.0,), (1.0e9, 0.0))


def test_markov_chain_validates_structure():
    labels = ("best", "sub1", "blocked")
    good = np.array([[0.9, 0.0, 0.1],
                     [0.2, 0.7, 0.1],
                     [0.5, 0.4, 0.1]])
    thp = np.array([2.0e9, 1.0e9, 0.0])
    MarkovChain(labels=labels, matrix=good, throughput_per_state=thp)

    direct = good.copy()
    direct[0] = [0.8, 0.1, 0.1]  # best -> sub without a blockage
    with pytest.raises(ValueError, match="best state"):
        MarkovChain(labels=labels, matrix=direct, throughput_per_state=thp)

    unnormalized = good.copy()
    unnormalized[1, 1] = 0.6
    with pytest.raises(ValueError, match="sum"):
        MarkovChain(labels=labels, matrix=unnormalized,
                    throughput_per_state=thp)

    with pytest.raises(ValueError, match="shape"):
        MarkovChain(labels=labels, matrix=good[:2, :2],
                    throughput_per_state=thp)


def test_markov_chain_cross_sub_transitions_rejected():
    labels = ("best", "sub1", "sub2", "blocked")
    m = np.array([[0.9, 0.0, 0.0, 0.1],
                  [0.1, 0.7, 0.1, 0.1],   # sub1 -> sub2 is illegal
                  [0.2, 0.0, 0.7, 0.1],
                  [0.3, 0.3, 0.3, 0.1]])
    with pytest.raises(ValueError, match="suboptimal state 1"):
        MarkovChain(labels=labels, matrix=m,
                    throughput_per_state=np.zeros(4))


def test_matrix_is_read_only():
    ch = chain_from_rates(2000.0, 500.0, 1.0, (1.0,), (1.0e9, 0.0))
    with pytest.raises(ValueError):
        ch.matrix[0, 0] = 0.5


def test_build_chain_default_scenario():
    sc = validate(ScenarioConfig())
    ch = build_chain(sc)
    assert ch.labels == ("best", "sub1", "sub2", "blocked")
    # mean uptime 10 s / 1 ms slots
    assert ch.matrix[0, 0] == 1.0 - 1.0 / 10_000.0
    # per-state rates: load at best, capacities at the saturated subs
    np.testing.assert_allclose(
        ch.throughput_per_state[:3],
        [2829089856.7501087, 1630760505.11285, 1042175623.3809154], rtol=0)
    # at full load no capacity exceeds the load, so the backlog never
    # drains and the blocked state earns nothing
    assert ch.throughput_per_state[3] == 0.0


def test_build_chain_light_load_credits_blocked_state():
    from mmwlink.scenario import QueueParams
    sc = validate(ScenarioConfig(queue=QueueParams(a_factor=0.2)))
    ch = build_chain(sc)
    assert ch.throughput_per_state[3] > 0.0
    # blocked dwell reflects the drain extension beyond the obstruction
    assert ch.matrix[3, 3] > 1.0 - 1.0 / (sc.block_duration / 1e-3)


def test_stationary_two_state_analytic():
    # hold 100 slots up / 50 slots blocked -> pi = (2/3, 1/3)
    ch = chain_from_rates(100.0, 50.0, 1.0, (1.0,), (1.0e9, 0.0))
    pi = stationary(ch)
    np.testing.assert_allclose(pi, [2.0 / 3.0, 1.0 / 3.0], rtol=1e-12)


def test_stationary_residual_and_normalization():
    for mu_slots in (2.0, 100.0, 10_000.0):
        ch = chain_from_rates(mu_slots, 532.0, 0.7, (0.2, 0.3, 0.5),
                              (3.0e9, 2.0e9, 1.0e9, 1.0e7))
        pi = stationary(ch)
        assert pi.sum() == pytest.approx(1.0, abs=1e-14)
        assert np.all(pi >= 0.0)
        residual = float(np.max(np.abs(pi @ ch.matrix - pi)))
        assert residual <= 1e-10


def test_stationary_unreachable_states_get_zero_mass():
    # recovery never lands on sub2, and sub rows never enter it either
    ch = chain_from_rates(2000.0, 500.0, 1.0, (0.6, 0.4, 0.0),
                          (3.0e9, 2.0e9, 1.0e9, 0.0))
    pi = stationary(ch)
    assert pi[2] == pytest.approx(0.0, abs=1e-15)
    assert pi.sum() == pytest.approx(1.0, abs=1e-14)


def test_build_chain_no_sweeps_equalizes_sector_mass():
    # without sweeps every sector state has the same dwell and uniform
    # recovery, so the stationary sector masses coincide
    sc = validate(ScenarioConfig(sweep=SweepPolicy()))
    pi = stationary(build_chain(sc))
    assert pi[0] == pytest.approx(pi[1], rel=1e-12)
    assert pi[1] == pytest.approx(pi[2], rel=1e-12)


def test_build_chain_respects_blockage_frequency():
    rare = stationary(build_chain(validate(
        ScenarioConfig(blockage=BlockageProcess(mu=20.0)))))
    frequent = stationary(build_chain(validate(
        ScenarioConfig(blockage=BlockageProcess(mu=2.0)))))
    assert frequent[-1] > rare[-1]


def test_transition_csv_shape():
    ch = chain_from_rates(100.0, 50.0, 1.0, (1.0,), (1.0e9, 0.0))
    text = transition_csv(ch)
    lines = text.strip().split("\n")
    assert lines[0] == "state,best,blocked"
    assert len(lines) == 3
    assert lines[1].startswith("best,")
    # round-trips through float parsing
    row = [float(x) for x in lines[1].split(",")[1:]]
    assert row == [0.99, 0.01]
