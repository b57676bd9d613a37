import random
from collections import Counter
from datetime import timedelta

import pytest

from conftest import BASE

from highline import (
    CascadeAssignment,
    Component,
    ConfigError,
    FeatureId,
    FlattenOrder,
    Framing,
    HighLevelEvent,
    HighLevelLogEntry,
    ThresholdTable,
    View,
    analyze_log,
    build_hlel,
    export_dfg,
    flatten,
    read_hlel_csv,
    summarize,
    write_hlel_csv,
)

F20 = Framing(BASE, 20.0)


def hle(name, w, value=5.0, view=View.WL):
    return HighLevelEvent(FeatureId(view, Component.resource(name)), w, value)


def thresholds_for(*views):
    return ThresholdTable(percentile=0.5, by_view={v: 1.0 for v in views})


def test_build_hlel_empty():
    entries = build_hlel([], CascadeAssignment(ids={}), F20, thresholds_for())
    assert entries == ()


def test_build_hlel_maps_attributes():
    hles = [hle("Jane", 4), hle("Jane", 5), hle("Pete", 5)]
    assignment = CascadeAssignment(ids={h: 1 for h in hles})
    entries = build_hlel(hles, assignment, F20, thresholds_for(View.WL))
    assert len(entries) == 3
    assert {e.case for e in entries} == {1}
    assert [e.timestamp for e in entries] == [
        BASE + timedelta(seconds=80),
        BASE + timedelta(seconds=100),
        BASE + timedelta(seconds=100),
    ]
    assert [e.activity for e in entries] == ["wl-Jane", "wl-Jane", "wl-Pete"]
    assert all(e.threshold == 1.0 for e in entries)
    assert [e.hle_id for e in entries] == [1, 2, 3]


def test_build_hlel_is_bijective():
    rng = random.Random(3)
    hles = [hle(f"r{i}", rng.randint(0, 9), value=float(i)) for i in range(25)]
    assignment = CascadeAssignment(ids={h: 1 + (i % 4) for i, h in enumerate(hles)})
    entries = build_hlel(hles, assignment, F20, thresholds_for(View.WL))
    assert len(entries) == len(hles)
    assert sorted((e.activity, e.window, e.value) for e in entries) == sorted(
        (h.feature.name, h.window, h.value) for h in hles
    )


def test_flatten_orders_within_window():
    hles = [hle("Jane", 3), HighLevelEvent(FeatureId(View.ENTER, Component.segment("report", "answer")), 3, 9.0)]
    assignment = CascadeAssignment(ids={h: 1 for h in hles})
    thresholds = ThresholdTable(0.5, {View.WL: 1.0, View.ENTER: 1.0})
    entries = build_hlel(hles, assignment, F20, thresholds)
    flat = flatten(entries)
    assert [e.activity for e in flat] == ["enter-(report,answer)", "wl-Jane"]
    custom = flatten(entries, FlattenOrder(["wl-Jane", "enter-(report,answer)"]))
    assert [e.activity for e in custom] == ["wl-Jane", "enter-(report,answer)"]


def test_flatten_order_from_file(tmp_path):
    path = tmp_path / "order.txt"
    path.write_text("wl-Jane\nenter-(report,answer)\n\n")
    order = FlattenOrder.from_file(str(path))
    assert order.key("wl-Jane") < order.key("enter-(report,answer)")
    # unlisted names sort after every listed one
    assert order.key("enter-(report,answer)") < order.key("delay-(report,answer)")


def test_flatten_order_rejects_duplicates():
    with pytest.raises(ConfigError):
        FlattenOrder(["x", "x"])


def test_flatten_idempotent_and_stable():
    rng = random.Random(5)
    hles = [hle(f"r{rng.randint(0, 3)}", rng.randint(0, 6), value=float(i)) for i in range(20)]
    assignment = CascadeAssignment(ids={h: 1 + (i % 3) for i, h in enumerate(hles)})
    entries = build_hlel(hles, assignment, F20, thresholds_for(View.WL))
    once = flatten(entries)
    assert flatten(once) == once
    # an already total case stays put
    single = [hle("solo", w, value=float(w)) for w in range(4)]
    assignment = CascadeAssignment(ids={h: 1 for h in single})
    entries = build_hlel(single, assignment, F20, thresholds_for(View.WL))
    assert flatten(entries) == entries


def entry(case, window, activity, eid):
    return HighLevelLogEntry(
        hle_id=eid,
        case=case,
        activity=activity,
        timestamp=BASE + timedelta(seconds=window * 20),
        window=window,
        view="wl",
        component_kind="resource",
        component=activity,
        value=1.0,
        threshold=1.0,
    )


def test_export_dfg_counts_adjacencies():
    entries = [entry(1, 0, "X", 1), entry(1, 1, "Y", 2), entry(1, 2, "X", 3)]
    dot = export_dfg(entries)
    assert '"X" [label="X (2)"];' in dot
    assert '"Y" [label="Y (1)"];' in dot
    assert '"X" -> "Y" [label="1"];' in dot
    assert '"Y" -> "X" [label="1"];' in dot


def test_export_dfg_empty_is_valid_dot():
    dot = export_dfg([])
    assert dot.startswith("digraph")
    assert dot.rstrip().endswith("}")


def test_dfg_edge_total_matches_case_lengths():
    rng = random.Random(7)
    entries = []
    eid = 0
    case_lengths = Counter()
    for case in range(1, 6):
        for w in range(rng.randint(1, 6)):
            eid += 1
            entries.append(entry(case, w, f"act{rng.randint(0, 3)}", eid))
            case_lengths[case] += 1
    flat = flatten(entries)
    dot = export_dfg(flat)
    edge_total = sum(
        int(line.rsplit('label="', 1)[1].rstrip('"];'))
        for line in dot.splitlines()
        if "->" in line
    )
    assert edge_total == sum(n - 1 for n in case_lengths.values())


def test_hlel_csv_round_trip(tmp_path, log_t):
    result = analyze_log(log_t, F20, percentile=0.0, lam=0.0)
    path = tmp_path / "hlel.csv"
    write_hlel_csv(result.entries, str(path))
    back = read_hlel_csv(str(path))
    assert back == result.entries


def test_case_ids_are_cascade_ids(log_t):
    result = analyze_log(log_t, F20, percentile=0.0, lam=0.0)
    for e in result.entries:
        by_hand = {h for h in result.hles if result.assignment.ids[h] == e.case}
        assert e.activity in {h.feature.name for h in by_hand}


# --- summary ---------------------------------------------------------------------


def test_summary_single_row_when_period_covers_log(log_t):
    result = analyze_log(log_t, F20, percentile=0.0, lam=0.0)
    table = summarize(log_t, result.entries, 3600.0, BASE)
    assert len(table.rows) == 1
    assert table.rows[0].events == 6
    assert table.rows[0].hles == len(result.entries)


def test_summary_partitions_hles(log_t):
    result = analyze_log(log_t, F20, percentile=0.0, lam=0.0)
    table = summarize(log_t, result.entries, 20.0, BASE)
    assert sum(r.hles for r in table.rows) == len(result.entries)
    assert sum(r.events for r in table.rows) == len(log_t)


def test_summary_average_recomputes(log_t):
    result = analyze_log(log_t, F20, percentile=0.0, lam=0.0)
    table = summarize(log_t, result.entries, 3600.0, BASE, activities=["delay-(a,b)"])
    row = table.rows[0]
    values = [e.value for e in result.entries if e.activity == "delay-(a,b)"]
    assert row.counts[0] == len(values)
    # delay averages are reported in hours
    assert row.averages[0] == pytest.approx(sum(values) / len(values) / 3600.0)


def test_summary_selects_most_frequent_activities(log_t):
    result = analyze_log(log_t, F20, percentile=0.0, lam=0.0)
    table = summarize(log_t, result.entries, 3600.0, BASE, top=2)
    freq = Counter(e.activity for e in result.entries)
    best = min(table.activities, key=lambda a: (-freq[a], a))
    assert len(table.activities) == 2
    assert freq[best] == max(freq.values())
