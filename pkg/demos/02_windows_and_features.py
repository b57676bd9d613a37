"""Evaluate congestion features over time windows and derive thresholds.

Builds a one-morning log with a visible congestion bump, splits it into
15-minute windows, prints the resulting feature matrix, and shows how the
percentile choice decides which measurements become high-level events.
"""

from datetime import datetime, timedelta

from highline import (
    Event,
    EventLog,
    Framing,
    compute_thresholds,
    evaluate,
    generate_hles,
)

START = datetime(2024, 1, 1, 9, 0)


def build_log():
    """Three calm cases, then a burst of six cases hitting resource bob."""
    rows = []
    minute = 0
    for case in range(1, 4):
        rows.append((f"calm{case}", "submit", minute, "ann"))
        rows.append((f"calm{case}", "check", minute + 4, "bob"))
        minute += 12
    for case in range(1, 7):
        rows.append((f"burst{case}", "submit", 45 + case, "ann"))
        rows.append((f"burst{case}", "check", 58 + 3 * case, "bob"))
    events = [
        Event(i + 1, case, act, START + timedelta(minutes=m), res)
        for i, (case, act, m, res) in enumerate(rows)
    ]
    return EventLog(events)


def main():
    log = build_log()
    framing = Framing(origin=START, width=15 * 60)
    matrix = evaluate(log, framing)

    print("feature matrix (rows: features, columns: 15-minute windows):")
    for fid in matrix.features:
        cells = []
        for w in matrix.windows:
            v = matrix.value(fid, w)
            cells.append("   -" if v is None else f"{v:4.0f}")
        print(f"  {fid.name:<22}" + " ".join(cells))

    for p in (0.5, 0.8, 1.0):
        thresholds = compute_thresholds(matrix, p)
        hles = generate_hles(matrix, thresholds)
        print(f"\npercentile p={p}: {len(hles)} high-level events")
        for h in hles:
            if h.feature.view.value in ("wl", "delay"):
                print(f"  window {h.window}: {h.feature.name} = {h.value:.0f}")


if __name__ == "__main__":
    main()
