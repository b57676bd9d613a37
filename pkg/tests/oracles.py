"""Independent brute-force reference implementations used by the tests.

Everything here recomputes results from first principles (set
comprehensions over raw events, breadth-first search over relations) and
deliberately avoids the library's derived structures, so the two routes
can be compared against each other.
"""

from collections import deque
from datetime import datetime, timedelta


def order_key(e):
    return (e.timestamp, e.id)


def oracle_steps(log):
    """Directly-follows pairs by checking each event pair against the
    defining predicate under the (timestamp, id) total order."""
    events = list(log)
    by_case = {}
    for e in events:
        by_case.setdefault(e.case, []).append(e)
    out = set()
    for e1 in events:
        peers = by_case[e1.case]
        for e2 in peers:
            if e2 is e1 or not order_key(e1) < order_key(e2):
                continue
            between = any(
                e is not e1 and e is not e2 and order_key(e1) < order_key(e) < order_key(e2)
                for e in peers
            )
            if not between:
                out.add((e1.id, e2.id))
    return out


def oracle_step_events(log):
    """The oracle steps as (first event, second event) pairs."""
    by_id = {e.id: e for e in log}
    return [(by_id[i], by_id[j]) for i, j in sorted(oracle_steps(log))]


def bounds(origin: datetime, width: float, w: int):
    # the end of window w is exactly the start of window w+1 (half-open tiling)
    start = origin + timedelta(seconds=w * width)
    end = origin + timedelta(seconds=(w + 1) * width)
    return start, end


def oracle_exec(log, origin, width, a, w):
    start, end = bounds(origin, width, w)
    return sum(1 for e in log if e.activity == a and start <= e.timestamp < end)


def oracle_do(log, origin, width, r, w):
    start, end = bounds(origin, width, w)
    return sum(1 for e in log if e.resource == r and start <= e.timestamp < end)


def oracle_todo(steps, origin, width, r, w):
    start, end = bounds(origin, width, w)
    return len(
        {e2.id for e1, e2 in steps if e2.resource == r and start <= e1.timestamp < end}
    )


def trigger_map(steps):
    """first event of the unique step triggering each event, by event id."""
    return {e2.id: e1 for e1, e2 in steps}


def oracle_wl(log, steps, origin, width, r, w, triggers=None):
    start, end = bounds(origin, width, w)
    if triggers is None:
        triggers = trigger_map(steps)
    count = 0
    for e2 in log:
        if e2.resource != r:
            continue
        occurs = start <= e2.timestamp < end
        e1 = triggers.get(e2.id)
        waiting = e1 is not None and e1.timestamp < end and e2.timestamp > start
        if occurs or waiting:
            count += 1
    return count


def _segment_steps(steps, seg):
    return [(e1, e2) for e1, e2 in steps if (e1.activity, e2.activity) == tuple(seg)]


def oracle_enter(steps, origin, width, seg, w):
    start, end = bounds(origin, width, w)
    return sum(1 for e1, _ in _segment_steps(steps, seg) if start <= e1.timestamp < end)


def oracle_exit(steps, origin, width, seg, w):
    start, end = bounds(origin, width, w)
    return sum(1 for _, e2 in _segment_steps(steps, seg) if start <= e2.timestamp < end)


def oracle_progr(steps, origin, width, seg, w):
    start, end = bounds(origin, width, w)
    return sum(
        1
        for e1, e2 in _segment_steps(steps, seg)
        if e1.timestamp < end and e2.timestamp >= start
    )


def oracle_delay(steps, origin, width, seg, w):
    start, end = bounds(origin, width, w)
    crossing = [
        (e1, e2)
        for e1, e2 in _segment_steps(steps, seg)
        if e1.timestamp < end and e2.timestamp >= start
    ]
    if not crossing:
        return None
    total = 0.0
    for e1, e2 in crossing:
        if start <= e2.timestamp < end:
            total += (e2.timestamp - e1.timestamp).total_seconds()
        else:
            total += (end - e1.timestamp).total_seconds()
    return total / len(crossing)


# --- links ---------------------------------------------------------------------


def oracle_link(log, steps, comp1, comp2):
    """The link value of two distinct components, by literal counting."""
    from highline import ComponentKind

    k1, k2 = comp1.kind, comp2.kind
    if k1 == k2 == ComponentKind.ACTIVITY:
        a1, a2 = comp1.key, comp2.key
        n1 = sum(1 for e in log if e.activity == a1)
        n2 = sum(1 for e in log if e.activity == a2)
        f = sum(1 for e1, e2 in steps if (e1.activity, e2.activity) == (a1, a2))
        b = sum(1 for e1, e2 in steps if (e1.activity, e2.activity) == (a2, a1))
        return max(f / n1, b / n2)
    if k1 == k2 == ComponentKind.RESOURCE:
        r1, r2 = comp1.key, comp2.key
        n1 = sum(1 for e in log if e.resource == r1)
        n2 = sum(1 for e in log if e.resource == r2)
        f = sum(1 for e1, e2 in steps if (e1.resource, e2.resource) == (r1, r2))
        b = sum(1 for e1, e2 in steps if (e1.resource, e2.resource) == (r2, r1))
        return max(f / n1, b / n2)
    if k1 == k2 == ComponentKind.SEGMENT:
        best = 0.0
        for sa, sb in ((comp1.key, comp2.key), (comp2.key, comp1.key)):
            if sa[1] != sb[0]:
                continue
            na = len(_segment_steps(steps, sa))
            nb = len(_segment_steps(steps, sb))
            triples = 0
            second_of = {(e1.id): e2 for e1, e2 in steps}
            for e1, e2 in _segment_steps(steps, sa):
                e3 = second_of.get(e2.id)
                if e3 is not None and (e2.activity, e3.activity) == tuple(sb):
                    triples += 1
            best = max(best, triples / na, triples / nb)
        return best
    if {k1, k2} == {ComponentKind.ACTIVITY, ComponentKind.RESOURCE}:
        a = comp1.key if k1 == ComponentKind.ACTIVITY else comp2.key
        r = comp1.key if k1 == ComponentKind.RESOURCE else comp2.key
        n_a = sum(1 for e in log if e.activity == a)
        n_r = sum(1 for e in log if e.resource == r)
        both = sum(1 for e in log if e.activity == a and e.resource == r)
        return max(both / n_a, both / n_r)
    if {k1, k2} == {ComponentKind.ACTIVITY, ComponentKind.SEGMENT}:
        a = comp1.key if k1 == ComponentKind.ACTIVITY else comp2.key
        seg = comp1.key if k1 == ComponentKind.SEGMENT else comp2.key
        if a not in (seg[0], seg[1]):
            return 0.0
        n_a = sum(1 for e in log if e.activity == a)
        f = len(_segment_steps(steps, seg))
        b = len(_segment_steps(steps, (seg[1], seg[0])))
        return max(f, b) / n_a
    # resource-segment, clamped like the library (self-loop corner)
    r = comp1.key if k1 == ComponentKind.RESOURCE else comp2.key
    seg = comp1.key if k1 == ComponentKind.SEGMENT else comp2.key
    seg_steps = _segment_steps(steps, seg)
    touching = sum(1 for e1, e2 in seg_steps if r in (e1.resource, e2.resource))
    n_r = sum(1 for e in log if e.resource == r)
    return min(1.0, max(touching / n_r, touching / len(seg_steps)))


# --- cascades ------------------------------------------------------------------


def oracle_partition(hles, link_value, lam):
    """Connected components of the symmetrized propagation relation.

    ``link_value(c1, c2)`` supplies pairwise component closeness. Returns a
    set of frozensets of high-level events.
    """

    def prox(h1, h2):
        if h2.window != h1.window + 1:
            return 0.0
        if h1.feature.component == h2.feature.component:
            return 1.0
        return link_value(h1.feature.component, h2.feature.component)

    hles = list(hles)
    neighbors = {h: [] for h in hles}
    for h1 in hles:
        for h2 in hles:
            if prox(h1, h2) >= lam or prox(h2, h1) >= lam:
                if h1 is not h2:
                    neighbors[h1].append(h2)
    seen = set()
    blocks = set()
    for h in hles:
        if h in seen:
            continue
        block = set()
        queue = deque([h])
        while queue:
            cur = queue.popleft()
            if cur in block:
                continue
            block.add(cur)
            queue.extend(n for n in neighbors[cur] if n not in block)
        seen |= block
        blocks.add(frozenset(block))
    return blocks


def partition_of(assignment):
    """Turn a cascade assignment into a partition for comparison."""
    groups = {}
    for h, cid in assignment.ids.items():
        groups.setdefault(cid, set()).add(h)
    return {frozenset(g) for g in groups.values()}
