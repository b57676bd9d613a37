"""Component closeness, proximity of high-level events, cascades.

Every unordered pair of components gets a link value in [0, 1] derived
from the control flow of the log: directly-follows frequencies for
activity and resource pairs, co-execution for activity-resource pairs,
adjacency for activity-segment pairs, shared steps for resource-segment
pairs, and chained triples for segment pairs.

Two high-level events in adjacent windows are as close as their
components' link value; the same component in adjacent windows has
proximity 1 (congestion persists). Everything else has proximity 0.
High-level events connected by propagation (proximity at or above the
lambda threshold) directly or through intermediaries end up in the same
cascade.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import ConfigError
from .events import Component, ComponentKind, EventLog, Segment
from .features import HighLevelEvent


def _pair(c1: Component, c2: Component) -> tuple[Component, Component]:
    return tuple(sorted((c1, c2), key=Component.sort_key))  # type: ignore[return-value]


class LinkTable:
    """Symmetric map from unordered component pairs to link values.

    Only nonzero entries are stored; lookups of unseen pairs yield 0.
    """

    def __init__(self, links: Mapping[tuple[Component, Component], float]):
        canonical: dict[tuple[Component, Component], float] = {}
        for (c1, c2), v in links.items():
            if v > 0:
                key = _pair(c1, c2)
                canonical[key] = max(canonical.get(key, 0.0), v)
        self._links = dict(sorted(canonical.items(), key=_pair_sort))

    def value(self, c1: Component, c2: Component) -> float:
        if c1 == c2:
            return 1.0
        return self._links.get(_pair(c1, c2), 0.0)

    def pairs(self) -> Iterator[tuple[Component, Component, float]]:
        """Nonzero entries in deterministic order."""
        for (c1, c2), v in self._links.items():
            yield c1, c2, v

    def __len__(self) -> int:
        return len(self._links)


def _pair_sort(item):
    (c1, c2), _ = item
    return (c1.sort_key(), c2.sort_key())


# --- pairwise link values -----------------------------------------------------
#
# Each function computes one pair directly from the log. `build_link_table`
# below derives the whole table from shared counters in one pass; the two
# paths are checked against each other in the tests.


def link_activity_pair(log: EventLog, a1: str, a2: str) -> float:
    """max over both directions of (directly-follows count / source events)."""
    if a1 == a2:
        raise ConfigError("link is defined for distinct components only")
    n1 = len(log.events_by_activity[a1])
    n2 = len(log.events_by_activity[a2])
    forward = sum(1 for s in log.steps if s.first.activity == a1 and s.second.activity == a2)
    backward = sum(1 for s in log.steps if s.first.activity == a2 and s.second.activity == a1)
    return max(forward / n1, backward / n2)


def link_resource_pair(log: EventLog, r1: str, r2: str) -> float:
    """max over both directions of (handover count / handing resource events)."""
    if r1 == r2:
        raise ConfigError("link is defined for distinct components only")
    n1 = len(log.events_by_resource[r1])
    n2 = len(log.events_by_resource[r2])
    forward = sum(1 for s in log.steps if s.first.resource == r1 and s.second.resource == r2)
    backward = sum(1 for s in log.steps if s.first.resource == r2 and s.second.resource == r1)
    return max(forward / n1, backward / n2)


def link_activity_resource(log: EventLog, a: str, r: str) -> float:
    """Co-execution: shared events over either side's event count."""
    a_events = log.events_by_activity[a]
    n_r = len(log.events_by_resource[r])
    both = sum(1 for e in a_events if e.resource == r)
    return max(both / len(a_events), both / n_r)


def link_activity_segment(log: EventLog, a: str, s: Segment) -> float:
    """Nonzero only for the segment's own activities: how often an
    occurrence of the activity moves a case over the segment."""
    if s not in log.segments:
        raise KeyError(f"unknown segment: {s.label}")
    if a not in (s.source, s.target):
        return 0.0
    n_a = len(log.events_by_activity[a])
    forward = len(log.steps_by_segment.get(s, ()))
    backward = len(log.steps_by_segment.get(Segment(s.target, s.source), ()))
    return max(forward, backward) / n_a


def link_resource_segment(log: EventLog, r: str, s: Segment) -> float:
    """How often the resource executes one of the segment's activities.

    Clamped to 1: on self-loop segments a single r-event can sit on both
    sides of two different steps, which would push the event-based ratio
    over 1.
    """
    steps = log.steps_by_segment[s]
    n_r = len(log.events_by_resource[r])
    touching = sum(1 for st in steps if st.first.resource == r or st.second.resource == r)
    return min(1.0, max(touching / n_r, touching / len(steps)))


def link_segment_pair(log: EventLog, s1: Segment, s2: Segment) -> float:
    """Chained segments: the fraction of steps continuing from one segment
    into the other, 0 when the segments cannot be chained."""
    if s1 == s2:
        raise ConfigError("link is defined for distinct components only")
    best = 0.0
    for a, b in ((s1, s2), (s2, s1)):
        if a.target != b.source:
            continue
        triples = 0
        for seq in log.case_sequences.values():
            for e1, e2, e3 in zip(seq, seq[1:], seq[2:]):
                if (e1.activity, e2.activity) == a and (e2.activity, e3.activity) == b:
                    triples += 1
        n_a = len(log.steps_by_segment[a])
        n_b = len(log.steps_by_segment[b])
        best = max(best, triples / n_a, triples / n_b)
    return best


def build_link_table(log: EventLog) -> LinkTable:
    """The full link table of a log, all component kinds combined."""
    act_n = {a: len(es) for a, es in log.events_by_activity.items()}
    res_n = {r: len(es) for r, es in log.events_by_resource.items()}
    seg_n = {s: len(st) for s, st in log.steps_by_segment.items()}

    res_pairs: Counter = Counter()
    act_res: Counter = Counter()
    seg_res: Counter = Counter()
    for st in log.steps:
        res_pairs[(st.first.resource, st.second.resource)] += 1
    for e in log:
        act_res[(e.activity, e.resource)] += 1
    for seg, steps in log.steps_by_segment.items():
        for st in steps:
            for r in {st.first.resource, st.second.resource}:
                seg_res[(seg, r)] += 1
    chains: Counter = Counter()
    for seq in log.case_sequences.values():
        for e1, e2, e3 in zip(seq, seq[1:], seq[2:]):
            s1 = Segment(e1.activity, e2.activity)
            s2 = Segment(e2.activity, e3.activity)
            chains[(s1, s2)] += 1

    links: dict[tuple[Component, Component], float] = {}

    def put(c1: Component, c2: Component, value: float) -> None:
        if value > 0:
            key = _pair(c1, c2)
            links[key] = max(links.get(key, 0.0), min(1.0, value))

    for (a1, a2), count in seg_n.items():
        if a1 != a2:
            put(Component.activity(a1), Component.activity(a2), count / act_n[a1])
    for (r1, r2), count in res_pairs.items():
        if r1 != r2:
            put(Component.resource(r1), Component.resource(r2), count / res_n[r1])
    for (a, r), count in act_res.items():
        put(Component.activity(a), Component.resource(r), max(count / act_n[a], count / res_n[r]))
    for seg in seg_n:
        reverse = seg_n.get(Segment(seg.target, seg.source), 0)
        moved = max(seg_n[seg], reverse)
        comp = Component(ComponentKind.SEGMENT, seg)
        for a in {seg.source, seg.target}:
            put(Component.activity(a), comp, moved / act_n[a])
    for (seg, r), count in seg_res.items():
        put(
            Component.resource(r),
            Component(ComponentKind.SEGMENT, seg),
            max(count / res_n[r], count / seg_n[seg]),
        )
    for (s1, s2), count in chains.items():
        if s1 != s2:
            put(
                Component(ComponentKind.SEGMENT, s1),
                Component(ComponentKind.SEGMENT, s2),
                max(count / seg_n[s1], count / seg_n[s2]),
            )
    return LinkTable(links)


# --- proximity and cascades ----------------------------------------------------


def proximity(hle1: HighLevelEvent, hle2: HighLevelEvent, links: LinkTable) -> float:
    """Closeness of two high-level events.

    Positive only when ``hle2`` sits in the window directly after ``hle1``:
    1 for the same component regardless of view, the components' link value
    otherwise.
    """
    if hle2.window != hle1.window + 1:
        return 0.0
    return links.value(hle1.feature.component, hle2.feature.component)


def propagation_edges(
    hles: Iterable[HighLevelEvent], links: LinkTable, lam: float
) -> tuple[tuple[HighLevelEvent, HighLevelEvent], ...]:
    """All direct propagations among the given high-level events.

    An edge runs from an event to one in the directly following window
    whenever their proximity reaches ``lam``. Ordered deterministically by
    (window, feature name) of both endpoints.
    """
    if not 0 <= lam <= 1:
        raise ConfigError(f"lambda must lie in [0, 1], got {lam}")
    ordered = sorted(set(hles), key=lambda h: (h.window, h.feature.name))
    by_window: dict[int, list[HighLevelEvent]] = {}
    for h in ordered:
        by_window.setdefault(h.window, []).append(h)
    edges = []
    for w, current in by_window.items():
        for h in current:
            for succ in by_window.get(w + 1, ()):
                if proximity(h, succ, links) >= lam:
                    edges.append((h, succ))
    return tuple(edges)


@dataclass(frozen=True)
class CascadeAssignment:
    """Dense cascade ids (1..k) for a set of high-level events."""

    ids: Mapping[HighLevelEvent, int]

    @property
    def count(self) -> int:
        return max(self.ids.values(), default=0)

    def members(self, cascade_id: int) -> tuple[HighLevelEvent, ...]:
        return tuple(h for h, i in self.ids.items() if i == cascade_id)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[rj] = ri


def cascades(
    hles: Iterable[HighLevelEvent], links: LinkTable, lam: float
) -> CascadeAssignment:
    """Partition high-level events into cascades.

    Events end up in the same cascade exactly when they are connected in
    the undirected closure of the propagation relation (proximity >= lam
    between adjacent windows). Ids are dense and deterministic: cascades
    are numbered by their earliest window, ties broken by the smallest
    feature name in that window.
    """
    ordered = sorted(set(hles), key=lambda h: (h.window, h.feature.name))
    index = {h: i for i, h in enumerate(ordered)}

    uf = _UnionFind(len(ordered))
    for h, succ in propagation_edges(ordered, links, lam):
        uf.union(index[h], index[succ])

    groups: dict[int, list[HighLevelEvent]] = {}
    for h in ordered:
        groups.setdefault(uf.find(index[h]), []).append(h)
    # members are already (window, name)-sorted, so the first one keys the group
    keyed = sorted(groups.values(), key=lambda g: (g[0].window, g[0].feature.name))
    ids: dict[HighLevelEvent, int] = {}
    for cid, members in enumerate(keyed, start=1):
        for h in members:
            ids[h] = cid
    return CascadeAssignment(ids={h: ids[h] for h in ordered})
