import pytest

from zoo_turnstile.checker import Status, check_trace
from zoo_turnstile.contracts import guard_of
from zoo_turnstile.controller import ControllerConfig, VisitorModel, controller_react, simulate, world_enabled
from zoo_turnstile.model import EventKind, TraceEvent, apply_event, initial_state
from zoo_turnstile.traceio import dump_trace

K = EventKind
DEFAULT = ControllerConfig()


def run(*events):
    state = initial_state()
    for e in events:
        state = apply_event(state, e)
    return state


def test_coin_on_locked_turnstile_unlocks():
    coin = TraceEvent(K.COIN, 100)
    assert controller_react(run(coin), coin, DEFAULT) == [TraceEvent(K.UNLOCK, 101)]


def test_last_coin_push_locks():
    push = TraceEvent(K.PUSH, 200)
    s = run(TraceEvent(K.COIN, 100), TraceEvent(K.UNLOCK, 101), push)
    reaction = controller_react(s, push, DEFAULT)
    assert reaction == [TraceEvent(K.LOCK, 201)]
    assert reaction[0].at - push.at < 760


def test_push_with_coins_left_keeps_unlocked():
    push = TraceEvent(K.PUSH, 200)
    s = run(TraceEvent(K.COIN, 100), TraceEvent(K.UNLOCK, 101), TraceEvent(K.COIN, 150), push)
    assert controller_react(s, push, DEFAULT) == []


def test_enter_and_coin_while_unlocked_emit_nothing():
    enter = TraceEvent(K.ENTER, 300)
    s = run(TraceEvent(K.COIN, 100), TraceEvent(K.UNLOCK, 101), TraceEvent(K.PUSH, 200), TraceEvent(K.LOCK, 201), enter)
    assert controller_react(s, enter, DEFAULT) == []
    coin = TraceEvent(K.COIN, 150)
    s = run(TraceEvent(K.COIN, 100), TraceEvent(K.UNLOCK, 101), coin)
    assert controller_react(s, coin, DEFAULT) == []


def test_latency_configuration():
    coin = TraceEvent(K.COIN, 100)
    assert controller_react(run(coin), coin, ControllerConfig(759))[0].at == 859
    for bad in (0, -1, 760):
        with pytest.raises(ValueError):
            ControllerConfig(bad)


def test_visitor_model_validation():
    with pytest.raises(ValueError):
        VisitorModel(p_coin=0.6, p_push=0.6)
    with pytest.raises(ValueError):
        VisitorModel(p_enter=-0.1)
    assert VisitorModel(p_coin=0.2, p_push=0.2, p_enter=0.2).p_idle == pytest.approx(0.4)


def test_zero_steps():
    t = simulate(VisitorModel(seed=3), DEFAULT, 0)
    assert t.events == () and t.closed_at == 0


def test_simulation_is_deterministic():
    a = simulate(VisitorModel(seed=42), DEFAULT, 100)
    b = simulate(VisitorModel(seed=42), DEFAULT, 100)
    assert dump_trace(a) == dump_trace(b)
    assert dump_trace(a) != dump_trace(simulate(VisitorModel(seed=43), DEFAULT, 100))


def test_seed_42_satisfies_everything():
    t = simulate(VisitorModel(seed=42), DEFAULT, 100)
    report = check_trace(t)
    assert report.admissible
    assert not report.violated
    kinds = {e.kind for e in t.events}
    assert kinds == set(EventKind)


@pytest.mark.parametrize("seed", range(30))
def test_world_events_respect_guards(seed):
    t = simulate(VisitorModel(seed=seed), DEFAULT, 150)
    state = initial_state()
    for event in t.events:
        if event.kind.world_controlled:
            assert world_enabled(state, event.kind)
            assert guard_of(event.kind)(state)
        state = apply_event(state, event)


@pytest.mark.parametrize("seed", range(30))
def test_discharging_locks_are_timely(seed):
    t = simulate(VisitorModel(seed=seed, mean_gap_ms=50), ControllerConfig(300), 150)
    report = check_trace(t)
    assert report.verdict("OPT7").status in (Status.SATISFIED, Status.PENDING)


def test_enter_requires_a_push_in_progress():
    s = run(TraceEvent(K.COIN, 1), TraceEvent(K.UNLOCK, 2))
    assert guard_of(K.ENTER)(s)
    assert not world_enabled(s, K.ENTER)
    s = apply_event(s, TraceEvent(K.PUSH, 3))
    assert world_enabled(s, K.ENTER)
    assert not world_enabled(s, K.LOCK)
