import pytest

import netdes.events as ev
from netdes.events import EventError, EventLabel, parse_spelling


def test_roles_and_spellings():
    assert ev.plant("a1").spell() == "a1"
    assert ev.entry("a1").spell() == "a1_in"
    assert ev.compromised("a1").spell() == "a1#"
    assert ev.exit_("a1").spell() == "a1_out"
    assert ev.command("v1").spell() == "v1"
    assert ev.command_entry("v1").spell() == "v1_in"
    assert ev.command_exit("v1").spell() == "v1_out"
    assert ev.tick.spell() == "tick"
    assert ev.stop.spell() == "stop"


def test_tick_and_stop_carry_no_base():
    with pytest.raises(EventError):
        EventLabel("x", ev.TICK)
    with pytest.raises(EventError):
        EventLabel("x", ev.STOP)
    with pytest.raises(EventError):
        EventLabel(None, ev.PLAIN)
    with pytest.raises(EventError):
        EventLabel("", ev.COMPROMISED)


def test_parse_spelling_round_trip():
    labels = [ev.plant("x"), ev.entry("x"), ev.compromised("x"), ev.exit_("x"),
              ev.command("v"), ev.command_entry("v"), ev.command_exit("v"),
              ev.tick, ev.stop]
    for label in labels:
        assert parse_spelling(label.spell(), label.role) == label


def test_parse_spelling_defaults_to_plant_family():
    assert parse_spelling("x_in") == ev.entry("x")
    assert parse_spelling("v_in", ev.COMMAND_IN) == ev.command_entry("v")
    with pytest.raises(EventError):
        parse_spelling("x", "nonsense")
    with pytest.raises(EventError):
        parse_spelling("x_in", ev.PLAIN)


def test_ordering_is_total_and_stable():
    labels = [ev.stop, ev.tick, ev.plant("b"), ev.compromised("a"),
              ev.plant("a"), ev.entry("a")]
    ordered = ev.sorted_events(labels)
    assert ordered == ev.sorted_events(reversed(labels))
    assert ordered[0].sort_key() <= ordered[1].sort_key()
