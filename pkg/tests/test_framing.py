import random
from datetime import datetime, timedelta

import pytest

from conftest import BASE, make_log, random_log

from highline import ConfigError, DataError, Framing, default_origin, parse_duration, window_set


def seconds(s):
    return BASE + timedelta(seconds=s)


def test_window_of_boundaries():
    f = Framing(BASE, 20.0)
    assert f.window_of(seconds(0)) == 0
    assert f.window_of(seconds(19.999)) == 0
    assert f.window_of(seconds(20)) == 1
    assert f.window_of(seconds(45)) == 2


def test_window_bounds():
    f = Framing(BASE, 20.0)
    assert f.window_bounds(0) == (seconds(0), seconds(20))
    assert f.window_bounds(2) == (seconds(40), seconds(60))
    # the shared boundary point belongs to the later window
    assert f.window_of(f.window_bounds(0)[1]) == 1


def test_window_set_log_t(log_t):
    f = Framing(BASE, 20.0)
    ws = window_set(f, log_t)
    assert (ws.first, ws.last) == (0, 2)
    assert list(ws) == [0, 1, 2]


def test_window_set_single_event():
    log = make_log([("c1", "a", 42, "r1")])
    ws = window_set(Framing(BASE, 20.0), log)
    assert len(ws) == 1


def test_window_set_includes_empty_windows(log_t):
    ws = window_set(Framing(BASE, 5.0), log_t)
    assert (ws.first, ws.last) == (0, 8)


def test_window_set_empty_log():
    from highline import EventLog

    with pytest.raises(DataError, match="no events"):
        window_set(Framing(BASE, 20.0), EventLog([]))


def test_width_must_be_positive():
    with pytest.raises(ConfigError):
        Framing(BASE, 0.0)


def test_window_of_is_monotone():
    rng = random.Random(3)
    f = Framing(BASE, 7.5)
    points = sorted(rng.uniform(-1000, 1000) for _ in range(200))
    indices = [f.window_of(seconds(p)) for p in points]
    assert indices == sorted(indices)


def test_every_event_in_exactly_one_window():
    rng = random.Random(5)
    log = random_log(rng, max_events=60)
    f = Framing(BASE, 13.0)
    ws = window_set(f, log)
    for e in log:
        w = f.window_of(e.timestamp)
        assert w in ws
        start, end = f.window_bounds(w)
        assert start <= e.timestamp < end


def test_doubling_width_never_increases_window_count():
    rng = random.Random(9)
    for _ in range(10):
        log = random_log(rng, max_events=50)
        width = rng.uniform(1, 500)
        narrow = window_set(Framing(BASE, width), log)
        wide = window_set(Framing(BASE, 2 * width), log)
        assert len(wide) <= len(narrow)


def test_window_of_round_trips_through_bounds():
    f = Framing(BASE, 37.0)
    for w in range(-3, 50):
        assert f.window_of(f.window_bounds(w)[0]) == w


def test_default_origin_is_midnight(log_t):
    origin = default_origin(log_t)
    assert origin == datetime(2024, 1, 1)
    late = make_log([("c1", "a", 0, "r1")], base=datetime(2024, 3, 5, 14, 30))
    assert default_origin(late) == datetime(2024, 3, 5)


@pytest.mark.parametrize(
    "text,expected",
    [("90", 90.0), ("90s", 90.0), ("30m", 1800.0), ("1h", 3600.0), ("1d", 86400.0), ("1w", 604800.0), ("1.5h", 5400.0)],
)
def test_parse_duration(text, expected):
    assert parse_duration(text) == expected


@pytest.mark.parametrize("text", ["", "h", "-5m", "5x", "1h30m"])
def test_parse_duration_rejects_junk(text):
    with pytest.raises(ConfigError):
        parse_duration(text)
