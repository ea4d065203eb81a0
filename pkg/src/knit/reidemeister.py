"""Reidemeister moves on PD diagrams, with admissible-site enumeration.

Faces of the diagram come from the rotation system: a corner state is
(crossing index, slot); the next corner walks the edge at that slot to
its other occurrence and turns one slot clockwise.  Orbits of that map
are the faces, so kinks are 1-corner faces, bigons 2-corner faces and
triangles 3-corner faces.  Site enumeration reads moves straight off
the face list:

- RI-  : a face with one corner (an edge occupying two adjacent slots)
- RII- : a two-corner face whose sides are one all-over and one
         all-under edge with opposite crossing signs
- RIII : a three-corner face with one all-over side, one all-under side
         and one mixed side (the cyclic all-mixed triangle admits no
         slide)
- RI+ / RII+ : creation moves, parameterized by target edges (or a free
         circle for RI+)

Applying a move returns a new diagram; the input is never touched.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import Crossing, LinkDiagram
from .errors import DomainError

__all__ = ["Site", "faces", "reidemeister_sites", "apply_reidemeister", "MOVES"]

MOVES = ("RI+", "RI-", "RII+", "RII-", "RIII")


@dataclass(frozen=True)
class Site:
    """An admissible location for one move, as returned by enumeration."""

    move: str
    data: tuple


def _occurrences(d: LinkDiagram) -> dict[int, list[tuple[int, int]]]:
    occ: dict[int, list[tuple[int, int]]] = {}
    for ci, c in enumerate(d.crossings):
        for si, e in enumerate(c.edges):
            occ.setdefault(e, []).append((ci, si))
    return occ


def faces(d: LinkDiagram) -> list[tuple[tuple[int, int], ...]]:
    """All faces as corner tuples (crossing, slot), canonically rotated."""
    problems = d.validate()
    if problems:
        raise DomainError("invalid diagram: " + "; ".join(problems))
    occ = _occurrences(d)

    def step(ci: int, si: int) -> tuple[int, int]:
        e = d.crossings[ci].edges[si]
        first, second = occ[e]
        cj, sj = second if (ci, si) == first else first
        return cj, (sj - 1) % 4

    seen: set[tuple[int, int]] = set()
    out = []
    for ci in range(len(d.crossings)):
        for si in range(4):
            if (ci, si) in seen:
                continue
            orbit = []
            state = (ci, si)
            while state not in seen:
                seen.add(state)
                orbit.append(state)
                state = step(*state)
            k = orbit.index(min(orbit))
            out.append(tuple(orbit[k:] + orbit[:k]))
    return out


def _in_slots(c: Crossing) -> tuple[int, int]:
    return (0, 1) if c.sign > 0 else (0, 3)


def _out_slots(c: Crossing) -> tuple[int, int]:
    return (2, 3) if c.sign > 0 else (2, 1)


def _is_over_slot(s: int) -> bool:
    return s in (1, 3)


def _head_occurrence(d: LinkDiagram, e: int) -> tuple[int, int]:
    for ci, c in enumerate(d.crossings):
        for si in _in_slots(c):
            if c.edges[si] == e:
                return ci, si
    raise DomainError(f"edge {e} has no incoming end")


def reidemeister_sites(d: LinkDiagram, move: str) -> tuple[Site, ...]:
    """All admissible sites for the move on this diagram, sorted."""
    if move not in MOVES:
        raise DomainError(f"unknown move {move!r}")
    problems = d.validate()
    if problems:
        raise DomainError("invalid diagram: " + "; ".join(problems))

    if move == "RI+":
        sites = []
        for e in d.edges:
            for sign in (1, -1):
                sites.append(Site("RI+", ("edge", e, sign)))
        if d.unknot_count > 0:
            for sign in (1, -1):
                sites.append(Site("RI+", ("circle", 0, sign)))
        return tuple(sorted(sites, key=lambda s: repr(s.data)))

    if move == "RI-":
        sites = []
        for ci, c in enumerate(d.crossings):
            for s in range(4):
                if c.edges[s] == c.edges[(s + 1) % 4]:
                    sites.append(Site("RI-", (ci, s)))
        return tuple(sites)

    if move == "RII+":
        pairs = set()
        for orbit in faces(d):
            along = []
            for ci, si in orbit:
                e = d.crossings[ci].edges[si]
                with_orientation = si in _out_slots(d.crossings[ci])
                along.append((e, with_orientation))
            for e, de in along:
                for f, df in along:
                    if e != f:
                        pairs.add((e, f, de != df))
        return tuple(
            Site("RII+", p) for p in sorted(pairs)
        )

    if move == "RII-":
        sites = []
        for orbit in faces(d):
            if len(orbit) != 2:
                continue
            (c1, s1), (c2, s2) = orbit
            if c1 == c2:
                continue
            x = d.crossings[c1].edges[s1]
            y = d.crossings[c2].edges[s2]
            if x == y:
                continue
            if d.crossings[c1].sign == d.crossings[c2].sign:
                continue
            x_over = _is_over_slot(s1) and _is_over_slot((s2 + 1) % 4)
            x_under = not _is_over_slot(s1) and not _is_over_slot((s2 + 1) % 4)
            y_over = _is_over_slot(s2) and _is_over_slot((s1 + 1) % 4)
            y_under = not _is_over_slot(s2) and not _is_over_slot((s1 + 1) % 4)
            if (x_over and y_under) or (x_under and y_over):
                sites.append(Site("RII-", orbit))
        return tuple(sites)

    sites = []
    for orbit in faces(d):
        if len(orbit) != 3:
            continue
        cs = [ci for ci, _ in orbit]
        if len(set(cs)) != 3:
            continue
        # side k runs from corner k to corner k+1
        side_edges = [d.crossings[ci].edges[si] for ci, si in orbit]
        if len(set(side_edges)) != 3:
            continue
        over_ends = []
        for k in range(3):
            ci, si = orbit[k]
            cj, sj = orbit[(k + 1) % 3]
            ends = int(_is_over_slot(si)) + int(_is_over_slot((sj + 1) % 4))
            over_ends.append(ends)
        if sorted(over_ends) == [0, 1, 2]:
            sites.append(Site("RIII", orbit))
    return tuple(sites)


def _relabel_map(crossings, mapping):
    return tuple(
        Crossing(tuple(mapping.get(e, e) for e in c.edges), c.sign)
        for c in crossings
    )


def _fresh_labels(d: LinkDiagram, count: int) -> list[int]:
    start = max(d.edges, default=0)
    return [start + k + 1 for k in range(count)]


def apply_reidemeister(d: LinkDiagram, move: str, site: Site) -> LinkDiagram:
    """Apply the move at the site; the site must come from enumeration."""
    if site.move != move:
        raise DomainError(f"site is for {site.move!r}, not {move!r}")
    if site not in reidemeister_sites(d, move):
        raise DomainError(f"site {site.data!r} does not admit {move}")

    if move == "RI+":
        kind = site.data[0]
        sign = site.data[-1]
        if kind == "circle":
            e, loop = _fresh_labels(d, 2)
            slots = (e, loop, loop, e) if sign > 0 else (e, e, loop, loop)
            return LinkDiagram(
                d.crossings + (Crossing(slots, sign),), d.unknot_count - 1
            )
        _, e, sign = site.data
        loop, tail = _fresh_labels(d, 2)
        ci, si = _head_occurrence(d, e)
        crossings = list(d.crossings)
        edges = list(crossings[ci].edges)
        edges[si] = tail
        crossings[ci] = Crossing(tuple(edges), crossings[ci].sign)
        slots = (e, loop, loop, tail) if sign > 0 else (e, tail, loop, loop)
        return LinkDiagram(
            tuple(crossings) + (Crossing(slots, sign),), d.unknot_count
        )

    if move == "RI-":
        ci, s = site.data
        c = d.crossings[ci]
        p = c.edges[(s + 2) % 4]
        q = c.edges[(s + 3) % 4]
        rest = tuple(x for k, x in enumerate(d.crossings) if k != ci)
        if p == q:
            return LinkDiagram(rest, d.unknot_count + 1)
        keep, drop = min(p, q), max(p, q)
        merged = _relabel_map(rest, {drop: keep})
        circles = d.unknot_count
        if not any(keep in c2.edges for c2 in merged):
            circles += 1
        return LinkDiagram(merged, circles)

    if move == "RII+":
        e, f, parallel = site.data
        em, e2, fm, f2 = _fresh_labels(d, 4)
        crossings = list(d.crossings)
        for target, new in ((e, e2), (f, f2)):
            ci, si = _head_occurrence(d, target)
            edges = list(crossings[ci].edges)
            edges[si] = new
            crossings[ci] = Crossing(tuple(edges), crossings[ci].sign)
        if parallel:
            k1 = Crossing.from_strands(f, fm, e, em, 1)
            k2 = Crossing.from_strands(fm, f2, em, e2, -1)
        else:
            k1 = Crossing.from_strands(fm, f2, e, em, -1)
            k2 = Crossing.from_strands(f, fm, em, e2, 1)
        return LinkDiagram(tuple(crossings) + (k1, k2), d.unknot_count)

    if move == "RII-":
        (c1, s1), (c2, s2) = site.data
        x = d.crossings[c1].edges[s1]
        over_first = _is_over_slot(s1)
        # outer continuations of the two strands through the bigon
        def other_on_path(ci, over, exclude):
            c = d.crossings[ci]
            slots = (1, 3) if over else (0, 2)
            found = [c.edges[s] for s in slots if s not in exclude]
            return found[0]

        a1 = other_on_path(c1, over_first, {s1})
        a2 = other_on_path(c2, over_first, {(s2 + 1) % 4})
        b1 = other_on_path(c1, not over_first, {(s1 + 1) % 4})
        b2 = other_on_path(c2, not over_first, {s2})
        rest = tuple(
            x for k, x in enumerate(d.crossings) if k not in (c1, c2)
        )
        mapping = {}
        for u, v in ((a1, a2), (b1, b2)):
            ru = mapping.get(u, u)
            rv = mapping.get(v, v)
            keep, drop = min(ru, rv), max(ru, rv)
            for key, val in list(mapping.items()):
                if val == drop:
                    mapping[key] = keep
            if drop != keep:
                mapping[drop] = keep
        merged = _relabel_map(rest, mapping)
        remaining = {e for c in merged for e in c.edges}
        vanished = {mapping.get(z, z) for z in (a1, a2, b1, b2)} - remaining
        return LinkDiagram(merged, d.unknot_count + len(vanished))

    # RIII: flip the triangle by swapping each strand's crossing order
    orbit = site.data
    sides = []
    for k in range(3):
        ci, si = orbit[k]
        cj, sj = orbit[(k + 1) % 3]
        e = d.crossings[ci].edges[si]
        sides.append((e, (ci, si), (cj, (sj + 1) % 4)))
    fresh = _fresh_labels(d, 3)
    tri = {ci for ci, _ in orbit}
    new_ends: dict[tuple[int, bool], tuple[int, int]] = {}
    for k, (e, end_a, end_b) in enumerate(sides):
        # figure out which end is the strand's exit into the side
        ins = []
        outs = []
        for ci, si in (end_a, end_b):
            if si in _in_slots(d.crossings[ci]):
                ins.append((ci, si))
            else:
                outs.append((ci, si))
        (c_first, s_first), (c_second, s_second) = outs[0], ins[0]
        over = _is_over_slot(s_first)
        c = d.crossings[c_first]
        entry = c.edges[
            [s for s in ((1, 3) if over else (0, 2)) if s != s_first][0]
        ]
        c = d.crossings[c_second]
        over2 = _is_over_slot(s_second)
        exit_edge = c.edges[
            [s for s in ((1, 3) if over2 else (0, 2)) if s != s_second][0]
        ]
        mid = fresh[k]
        # after the flip the strand meets its old second crossing first
        new_ends[(c_second, over2)] = (entry, mid)
        new_ends[(c_first, over)] = (mid, exit_edge)

    crossings = list(d.crossings)
    for ci in tri:
        u_in, u_out = new_ends[(ci, False)]
        o_in, o_out = new_ends[(ci, True)]
        crossings[ci] = Crossing.from_strands(
            u_in, u_out, o_in, o_out, d.crossings[ci].sign
        )
    return LinkDiagram(tuple(crossings), d.unknot_count)
