"""Correlate high-level events into cascades via component links.

Uses the same bursty log as demo 02, prints the nonzero component link
table derived from its control flow, and shows how the lambda threshold
splits or merges the detected high-level events into cascades.
"""

from datetime import datetime, timedelta

from highline import (
    Event,
    EventLog,
    Framing,
    analyze_log,
    build_link_table,
)

START = datetime(2024, 1, 1, 9, 0)


def build_log():
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
    links = build_link_table(log)
    print("nonzero component links (closeness in [0,1]):")
    for c1, c2, value in links.pairs():
        print(f"  {c1.kind.value:<8} {c1.label:<16} {c2.kind.value:<8} {c2.label:<16} {value:.2f}")

    framing = Framing(origin=START, width=15 * 60)
    # without exclude_zeros the sparse views get a threshold of 0 at this
    # percentile, and zero-valued measurements glue everything together
    for lam in (0.3, 0.8):
        result = analyze_log(log, framing, percentile=0.75, lam=lam, exclude_zeros=True)
        print(f"\nlambda={lam}: {len(result.hles)} high-level events "
              f"in {result.cascade_count} cascades")
        for cid in range(1, result.cascade_count + 1):
            members = result.assignment.members(cid)
            names = ", ".join(f"{h.feature.name}@w{h.window}" for h in members)
            print(f"  cascade {cid}: {names}")
    print("\nthis toy process is fully linked (every value 1.0), so lambda does")
    print("not split anything here; the empty window between the calm phase and")
    print("the burst is what separates the two cascades")


if __name__ == "__main__":
    main()
