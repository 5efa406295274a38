import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swarmtwin.pso import (
    AgentState,
    BestRecord,
    PsoCoefficients,
    SwarmState,
    fuse_knowledge,
    fuse_swarm,
    pso_update,
    step,
)


def agent(pos=(0.0, 0.0), est=100.0, pbest=None, nbest=None, i=0, vel=(0.0, 0.0)):
    pos = np.array(pos, dtype=float)
    pbest = pbest or BestRecord(pos.copy(), est)
    nbest = nbest or pbest
    return AgentState(i, pos, np.array(vel, dtype=float), pbest, nbest, est)


class TestCoefficients:
    def test_defaults(self):
        c = PsoCoefficients()
        assert (c.c1, c.c2, c.r_distribution) == (2.0, 2.0, "uniform")

    @pytest.mark.parametrize("kw", [{"c1": -1}, {"c2": -0.5}, {"c1": 0, "c2": 0}, {"r_distribution": "beta"}])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            PsoCoefficients(**kw)

    def test_uniform_draws_in_unit_interval(self, rng):
        r1, r2 = PsoCoefficients().draw(rng, 1000)
        assert 0 <= r1.min() and r2.max() < 1


class TestFuse:
    def test_isolated_agent_uses_own_improvement(self):
        a = agent(pos=(5, 5), est=10.0, pbest=BestRecord(np.zeros(2), 20.0))
        out = fuse_knowledge(a, [])
        assert out.personal_best.est_distance == 10.0
        np.testing.assert_array_equal(out.personal_best.position, (5, 5))
        assert out.neighborhood_best.est_distance == 10.0
        np.testing.assert_array_equal(out.neighborhood_best.position, (5, 5))

    def test_picks_best_report(self):
        pa, pb = np.array([1.0, 2.0]), np.array([3.0, 4.0])
        a = agent(est=70.0, pbest=BestRecord(np.zeros(2), 55.0), nbest=BestRecord(np.ones(2), 50.0))
        out = fuse_knowledge(a, [(1, pa, 40.0), (2, pb, 60.0)])
        # brute force over the fused set {incumbent 50, personal 55, 40, 60}
        assert out.neighborhood_best.est_distance == 40.0
        np.testing.assert_array_equal(out.neighborhood_best.position, pa)

    def test_no_improvement_keeps_incumbent(self):
        inc = BestRecord(np.ones(2), 30.0)
        a = agent(est=80.0, pbest=BestRecord(np.zeros(2), 35.0), nbest=inc)
        out = fuse_knowledge(a, [(1, np.array([9.0, 9.0]), 40.0)])
        assert out.neighborhood_best is inc

    def test_tie_goes_to_lowest_id_then_incumbent(self):
        a = agent(i=5, est=99.0, pbest=BestRecord(np.zeros(2), 90.0), nbest=BestRecord(np.zeros(2), 90.0))
        out = fuse_knowledge(a, [(7, np.array([7.0, 7.0]), 20.0), (3, np.array([3.0, 3.0]), 20.0)])
        np.testing.assert_array_equal(out.neighborhood_best.position, (3, 3))
        again = fuse_knowledge(out, [(1, np.array([1.0, 1.0]), 20.0)])
        np.testing.assert_array_equal(again.neighborhood_best.position, (3, 3))

    @pytest.mark.parametrize("report", [(1, np.array([0.0, 0.0]), -1.0), (1, np.array([np.nan, 0.0]), 3.0)])
    def test_rejects_corrupted_reports(self, report):
        with pytest.raises(ValueError):
            fuse_knowledge(agent(), [report])


class TestStep:
    def test_fixed_point(self, rng):
        a = agent(pos=(7, 8))
        out = step(a, PsoCoefficients(), 5.0, rng)
        np.testing.assert_array_equal(out.velocity, (0, 0))
        np.testing.assert_array_equal(out.position, (7, 8))

    def test_hand_evaluated_update(self):
        # v' = 0 + 1*1*((1,0)-(0,0)) + 1*1*((0,1)-(0,0)) = (1,1)
        c = PsoCoefficients(1.0, 1.0)
        p, v = pso_update((0, 0), (0, 0), np.array([1.0, 0.0]), np.array([0.0, 1.0]), c, 5.0, 1.0, 1.0)
        np.testing.assert_array_equal(v, (1, 1))
        np.testing.assert_array_equal(p, (1, 1))

    def test_hand_evaluated_update_clamped(self):
        c = PsoCoefficients(1.0, 1.0)
        p, v = pso_update((0, 0), (0, 0), np.array([1.0, 0.0]), np.array([0.0, 1.0]), c, 1.0, 1.0, 1.0)
        np.testing.assert_allclose(v, (1 / np.sqrt(2), 1 / np.sqrt(2)), rtol=1e-12)
        np.testing.assert_array_equal(p, v)

    def test_step_consumes_two_draws(self):
        a = agent(pos=(0, 0), pbest=BestRecord(np.array([10.0, 0.0]), 1.0), nbest=BestRecord(np.array([0.0, 10.0]), 1.0))
        c = PsoCoefficients(0.1, 0.1)
        rng = np.random.default_rng(5)
        out = step(a, c, 50.0, rng)
        ref = np.random.default_rng(5)
        r1, r2 = ref.random(), ref.random()
        np.testing.assert_array_equal(out.velocity, (0.1 * r1 * 10.0, 0.1 * r2 * 10.0))
        assert rng.random() == ref.random()

    def test_swarm_update_matches_sequential_steps(self):
        rng = np.random.default_rng(9)
        pos, vel = rng.uniform(0, 600, (6, 2)), rng.uniform(-5, 5, (6, 2))
        pb, nb = rng.uniform(0, 600, (6, 2)), rng.uniform(0, 600, (6, 2))
        c = PsoCoefficients()
        r1, r2 = c.draw(np.random.default_rng(1), 6)
        bp, bv = pso_update(pos, vel, pb, nb, c, 5.0, r1, r2)
        seq = np.random.default_rng(1)
        for i in range(6):
            a = AgentState(i, pos[i], vel[i], BestRecord(pb[i], 1.0), BestRecord(nb[i], 1.0), 1.0)
            out = step(a, c, 5.0, seq)
            np.testing.assert_array_equal(out.position, bp[i])
            np.testing.assert_array_equal(out.velocity, bv[i])


coord = st.floats(0, 640, allow_nan=False)
est = st.floats(0, 900, allow_nan=False)


@st.composite
def swarms(draw):
    n = draw(st.integers(1, 8))
    # small pool of values so ties actually happen
    pool = draw(st.lists(est, min_size=1, max_size=4))
    pick = lambda: draw(st.sampled_from(pool))
    pos = np.array([[draw(coord), draw(coord)] for _ in range(n)])
    s = SwarmState.seeded(pos, [pick() for _ in range(n)])
    s.pbest_est = np.array([pick() for _ in range(n)])
    s.pbest_pos = np.array([[draw(coord), draw(coord)] for _ in range(n)])
    s.nbest_est = np.array([pick() for _ in range(n)])
    s.nbest_pos = np.array([[draw(coord), draw(coord)] for _ in range(n)])
    heard = np.array([[draw(st.booleans()) and i != j for j in range(n)] for i in range(n)], dtype=bool)
    return s, heard


@settings(max_examples=200)
@given(swarms())
def test_swarm_fusion_matches_per_agent(case):
    swarm, heard = case
    fused = fuse_swarm(swarm, heard)
    for i in range(swarm.size):
        reports = [(j, swarm.position[j], float(swarm.estimate[j])) for j in np.flatnonzero(heard[i])]
        ref = fuse_knowledge(swarm.agent(i), reports)
        got = fused.agent(i)
        assert got.personal_best.est_distance == ref.personal_best.est_distance
        np.testing.assert_array_equal(got.personal_best.position, ref.personal_best.position)
        assert got.neighborhood_best.est_distance == ref.neighborhood_best.est_distance
        np.testing.assert_array_equal(got.neighborhood_best.position, ref.neighborhood_best.position)


@given(swarms())
def test_fusion_invariants(case):
    swarm, heard = case
    # start from a consistent state: neighborhood best no worse than personal best
    swarm.nbest_est = np.minimum(swarm.nbest_est, swarm.pbest_est)
    fused = fuse_swarm(swarm, heard)
    assert np.all(fused.pbest_est <= swarm.pbest_est)
    assert np.all(fused.nbest_est <= fused.pbest_est)
    assert np.all(fused.nbest_est <= swarm.nbest_est)


def test_full_knowledge_gives_common_argmin():
    rng = np.random.default_rng(3)
    n = 12
    s = SwarmState.seeded(rng.uniform(0, 600, (n, 2)), rng.uniform(0, 500, n))
    fused = fuse_swarm(s, ~np.eye(n, dtype=bool))
    k = int(np.argmin(s.estimate))
    assert np.all(fused.nbest_est == s.estimate[k])
    assert np.all(fused.nbest_pos == s.position[k])


def test_single_agent_neighborhood_is_personal():
    s = SwarmState.seeded([[1.0, 2.0]], [50.0])
    s.estimate = np.array([40.0])
    s.position = np.array([[3.0, 3.0]])
    fused = fuse_swarm(s, np.zeros((1, 1), dtype=bool))
    assert fused.nbest_est[0] == fused.pbest_est[0] == 40.0
    np.testing.assert_array_equal(fused.nbest_pos, fused.pbest_pos)
