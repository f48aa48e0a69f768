import numpy as np
import pytest

from ctsp.brkga import (
    Action,
    InjectionContext,
    Population,
    StopCriteria,
    crossover,
    evolve_generation,
    inject,
    injection_source,
    perturbation_action,
    population_uniqueness,
    run,
    shake,
    shake_intensity,
    shake_keys,
)
from ctsp.decoder import decode
from ctsp.instance import Instance, generate_instance
from ctsp.local_search import Tag
from ctsp.params import preset
from ctsp.schedule import validate


def _pop(inst, p=40, seed=0):
    rng = np.random.default_rng(seed)
    return Population.from_keys(rng.random((p, inst.n)), inst)


def test_crossover_extremes():
    rng = np.random.default_rng(0)
    e, ne = rng.random(20), rng.random(20)
    assert np.array_equal(crossover(e, ne, 1.0, rng), e)
    assert np.array_equal(crossover(e, ne, 0.0, rng), ne)


def test_crossover_inheritance_rate():
    rng = np.random.default_rng(1)
    e = rng.random(100_000)
    ne = e + 2.0  # disjoint from e, so every key is attributable
    child = crossover(e, ne, 0.78, rng)
    assert abs(np.mean(child == e) - 0.78) <= 0.01


def test_crossover_length_mismatch():
    with pytest.raises(ValueError):
        crossover(np.zeros(3), np.zeros(4), 0.5, np.random.default_rng())


def test_evolve_keeps_elite_and_size():
    inst = generate_instance(12, "M", seed=4)
    params = preset("R").with_overrides({"p": "40"})
    pop = _pop(inst)
    pop.tags[:] = Tag.INELIGIBLE_PERIODIC
    rng = np.random.default_rng(2)
    nxt = evolve_generation(pop, params, rng, inst)
    ne = params.elite_size
    assert nxt.size == pop.size
    assert np.all(np.diff(nxt.fitness) >= 0)
    # every old elite key vector survives with its fitness and tag
    for k, f, t in zip(pop.keys[:ne], pop.fitness[:ne], pop.tags[:ne]):
        hits = np.where((nxt.keys == k).all(axis=1))[0]
        assert len(hits) >= 1
        assert nxt.fitness[hits[0]] == f and nxt.tags[hits[0]] == t
    assert np.array_equal(nxt.fitness, [decode(k, inst)[1] for k in nxt.keys])


@pytest.mark.parametrize("seed", range(3))
def test_best_non_increasing_across_generations(seed):
    inst = generate_instance(15, "SML"[seed], seed=seed)
    params = preset("R").with_overrides({"p": "50"})
    rng = np.random.default_rng(seed)
    pop = _pop(inst, 50, seed)
    best = pop.fitness[0]
    for _ in range(100):
        pop = evolve_generation(pop, params, rng, inst)
        assert pop.fitness[0] <= best
        best = pop.fitness[0]


def test_shake_intensity():
    assert shake_intensity(0.1, 50) == 5
    assert shake_intensity(0.01, 10) == 1
    assert shake_intensity(1.0, 7) == 7
    assert shake_intensity(0.25, 10) == 3  # 2.5 rounds half up


class _ScriptedRng:
    def __init__(self, picks, fresh=0.5):
        self.picks, self.fresh = list(picks), fresh

    def integers(self, n, size=None):
        if size is None:
            return self.picks.pop(0)
        return [self.picks.pop(0) for _ in range(size)]

    def random(self):
        return self.fresh


def test_change_inverts_then_resets():
    x = np.array([0.3, 0.0, 0.9])
    shake_keys(x, 1, "CHANGE", _ScriptedRng([0, 2]))
    assert x[0] == pytest.approx(0.7)
    assert x[2] == 0.5
    shake_keys(x, 1, "CHANGE", _ScriptedRng([1, 0]))
    assert x[1] == 0.0  # 1 - 0 wraps back into [0, 1)


def test_swap_wraps_last_with_first():
    x = np.array([0.1, 0.2, 0.3])
    shake_keys(x, 1, "SWAP", _ScriptedRng([2, 1, 1]))
    assert list(x) == [0.3, 0.2, 0.1]


@pytest.mark.parametrize("s_type", ["CHANGE", "SWAP"])
def test_shake_properties(s_type):
    inst = generate_instance(20, "L", seed=9)
    pop = _pop(inst, 30, 1)
    pop.tags[:] = Tag.INELIGIBLE_IMPROVEMENT
    ne = 6
    rng = np.random.default_rng(3)
    out = shake(pop, 0.1, s_type, rng, inst, ne)
    assert out.size == pop.size
    assert np.all((out.keys >= 0) & (out.keys < 1))
    assert np.all(out.tags == Tag.ELIGIBLE)
    assert np.all(np.diff(out.fitness) >= 0)
    assert np.array_equal(out.fitness, [decode(k, inst)[1] for k in out.keys])
    psi = shake_intensity(0.1, inst.n)
    # each shaken elite stays close to its origin; fresh rows match no one
    origin = {tuple(k) for k in pop.keys}
    close = 0
    for row in out.keys:
        d = np.min(np.sum(pop.keys[:ne] != row, axis=1))
        if d <= 2 * psi * (1 if s_type == "CHANGE" else 2):
            close += 1
        assert tuple(row) not in origin or d == 0
    assert close >= ne


def test_shake_keeps_multiset_under_swap():
    rng = np.random.default_rng(0)
    x = rng.random(10)
    y = x.copy()
    shake_keys(y, 4, "SWAP", rng)
    assert sorted(x) == sorted(y)


def test_shake_rejects_bad_lambda(T1):
    pop = _pop(T1, 4)
    with pytest.raises(ValueError):
        shake(pop, 0.0, "CHANGE", np.random.default_rng(), T1, 1)


def test_inject_better_and_worse(T2):
    keys = np.array([[0.1, 0.9]] * 4)  # sigma (1,2): Cmax 10
    pop = Population.from_keys(keys, T2)
    assert list(pop.fitness) == [10] * 4
    good = inject(pop, np.array([0.7, 0.2]), T2)
    assert good.size == 4 and good.fitness[0] == 9
    assert np.array_equal(good.keys[0], [0.7, 0.2])
    worse = Population.from_keys(np.array([[0.7, 0.2]] * 3 + [[0.6, 0.1]]), T2)
    out = inject(worse, np.array([0.1, 0.9]), T2)
    assert np.array_equal(out.keys[:3], worse.keys[:3])
    assert out.fitness[-1] == 10


def test_perturbation_schedule():
    prm = preset("R-S-LS")
    assert (prm.R, prm.Rstar_mult * prm.R, prm.Rstarstar_mult * prm.R) == (154, 308, 1386)
    assert perturbation_action(154, False, prm) == Action.STRONG
    assert perturbation_action(308, False, prm) == Action.RESET
    assert perturbation_action(100, False, prm) == Action.NONE
    assert perturbation_action(1540, False, prm) == Action.STRONG
    assert perturbation_action(1694, False, prm) == Action.RESET
    assert perturbation_action(0, False, prm) == Action.NONE
    assert perturbation_action(100, True, prm) == Action.WEAK
    # the stronger action wins when conditions coincide
    assert perturbation_action(154, True, prm) == Action.STRONG
    assert perturbation_action(308, True, prm) == Action.RESET


def test_perturbation_without_shake():
    prm = preset("R")
    assert prm.n_nimp == 956
    assert perturbation_action(956, True, prm) == Action.RESET
    assert perturbation_action(1912, False, prm) == Action.RESET
    assert perturbation_action(955, True, prm) == Action.NONE
    assert perturbation_action(154, False, prm) == Action.NONE


def test_injection_sources(T1):
    rng = np.random.default_rng(0)
    prm = preset("R-S-LS")
    cb, ob, bi = np.array([0.1, 0.2]), np.array([0.3, 0.4]), np.array([0.5, 0.6])
    ctx = InjectionContext(T1, prm, rng, cb, ob, bi)
    assert np.array_equal(injection_source("CB", ctx), cb)
    assert np.array_equal(injection_source("OB", ctx), ob)
    assert np.array_equal(injection_source("BI", ctx), bi)
    assert decode(injection_source("BMS", ctx), T1)[1] == 5
    out = injection_source("OB", ctx)
    out[0] = 9
    assert ob[0] == 0.3
    with pytest.raises(ValueError):
        injection_source("XX", ctx)


def test_population_uniqueness(T1):
    keys = np.array([[0.1, 0.9], [0.1, 0.9], [0.2, 0.8], [0.9, 0.1]])
    pop = Population.from_keys(keys, T1)
    assert population_uniqueness(pop) == (75.0, 50.0)


def test_stop_criteria_required():
    with pytest.raises(ValueError):
        StopCriteria(None, None, None)


def test_time_limit_zero_returns_initial_best():
    inst = generate_instance(10, "S", seed=2)
    res = run(inst, preset("R-S-LS"), StopCriteria(time_limit=0), seed=5)
    assert res.iterations == 0
    prm = preset("R-S-LS")
    from ctsp.constructive import multi_start

    rng = np.random.default_rng(5)
    sols = multi_start(inst, prm.n_msi, prm.alpha, rng)
    assert res.makespan <= sols[0].cmax
    assert res.time_to_best <= res.total_time


@pytest.mark.parametrize("variant", ["R", "R-S", "R-LS", "R-S-LS"])
def test_run_deterministic_and_valid(variant):
    inst = generate_instance(15, "M", seed=7)
    stop = StopCriteria(time_limit=None, max_iterations=60)
    a = run(inst, preset(variant), stop, seed=11)
    b = run(inst, preset(variant), stop, seed=11)
    assert a.makespan == b.makespan
    assert (a.iterations, a.restarts, a.weak_shakes, a.strong_shakes, a.ls_calls) == (
        b.iterations, b.restarts, b.weak_shakes, b.strong_shakes, b.ls_calls)
    assert a.events == b.events
    assert a.iterations == 60
    assert validate(a.schedule, inst, complete=True) == []
    assert a.schedule.cmax == a.makespan
    assert decode(a.keys, inst)[1] == a.makespan
    if "LS" not in variant:
        assert a.ls_calls == 0
    if "S" not in variant.replace("LS", ""):
        assert a.weak_shakes == a.strong_shakes == 0


def test_target_stops_early(T2):
    res = run(T2, preset("R-S-LS"), StopCriteria(time_limit=5, target=9), seed=0)
    assert res.makespan == 9
    assert res.total_time < 5


def test_perturbation_clock_under_stagnation():
    # job 1's span is a lower bound the initial heuristic already attains
    inst = Instance.from_triples([(1, 10, 1), (1, 1, 1), (1, 1, 1)])
    trace = []
    res = run(inst, preset("R-S-LS"), StopCriteria(None, 1700), seed=0, trace=trace)
    assert res.makespan == 12
    assert [z for _, z, _, a in trace] == list(range(1, 1701))
    strong = [z for _, z, _, a in trace if a == "strong"]
    reset = [z for _, z, _, a in trace if a == "reset"]
    assert strong == [154, 1540] and reset == [308, 1694]
    assert (res.strong_shakes, res.restarts) == (2, 2)
    first_h = next(t for t in trace if t[2])
    assert first_h[3] == "weak"
    for _, z, h, a in trace:
        if a in ("none", "weak"):
            assert a == ("weak" if h else "none")
