"""Downward-closed element sets over rating semirings.

Sets are stored explicitly, downset closure included, so that rules that
quantify over arbitrary members (idempotents anywhere in the set) stay
trivially complete.  Every insertion enumerates the downset of the new
element and is guarded by the element cap.
"""

from __future__ import annotations

from collections import deque

from .errors import DEFAULT_CAPS, SaturationCapError
from .fa import MonoidMorphism
from .semiring import RatingSet, Semiring


class ImprintSet:
    """Subset of a rating set, closed under downset.

    `tops` holds the explicitly inserted generators; `members` additionally
    holds their downsets.  For sets produced by the saturation engines the
    members form a multiplicative submonoid containing the trivial imprint.
    """

    def __init__(self, semiring: RatingSet, cap: int = DEFAULT_CAPS.max_elements,
                 label: str = "imprint", lifo: bool = False):
        self.semiring = semiring
        self.cap = cap
        self.label = label
        self.lifo = lifo
        self.members: set = set()
        self.tops: list = []
        self.queue: deque = deque()
        self.sweeps = 0

    def pop_pending(self):
        return self.queue.pop() if self.lifo else self.queue.popleft()

    def __contains__(self, r) -> bool:
        return r in self.members

    def __len__(self) -> int:
        return len(self.members)

    def insert(self, r) -> bool:
        """Insert r and its downset; True if r was new."""
        if r in self.members:
            return False
        sr = self.semiring
        members = self.members
        members.add(r)
        if len(members) > self.cap:
            raise SaturationCapError(self.cap, self.label, f"{len(members)} elements")
        for r2 in sr.downset(r):
            if r2 not in members:
                members.add(r2)
                if len(members) > self.cap:
                    raise SaturationCapError(self.cap, self.label, f"{len(members)} elements")
        self.tops.append(r)
        self.queue.append(r)
        return True

    def maximal_elements(self) -> list:
        """Antichain of maximal members (computed over tops; every member is
        below some top)."""
        sr = self.semiring
        out: list = []
        for r in sorted(set(self.tops), key=sr.downset_size, reverse=True):
            if not any(sr.leq(r, m) for m in out):
                out.append(r)
        return out

    def issubset(self, other: "ImprintSet") -> bool:
        return self.members <= other.members

    def __eq__(self, other):
        return isinstance(other, ImprintSet) and self.members == other.members

    def __hash__(self):  # pragma: no cover
        raise TypeError("ImprintSet is unhashable")

    # -- invariant checks (structural, post-hoc) --------------------------------

    def check_downward_closed(self) -> bool:
        """True iff members are downset-closed.

        Every member lies below a maximal element, so checking the downsets
        of the maximal elements is exhaustive.
        """
        for m in self.maximal_elements():
            for r in self.semiring.downset(m):
                if r not in self.members:
                    return False
        return True

    def check_submonoid(self) -> bool:
        """True iff 1 ∈ members and members are closed under multiplication.

        Products are monotone in both arguments, so closure over the maximal
        elements together with downward closure implies full closure.
        """
        sr = self.semiring
        if not isinstance(sr, Semiring):
            return True
        if sr.one not in self.members:
            return False
        maxes = self.maximal_elements()
        for x in maxes:
            for y in maxes:
                if sr.mul(x, y) not in self.members:
                    return False
        return True

    def check_contains(self, elems) -> bool:
        return all(r in self.members for r in elems)


class PointedImprintSet:
    """Subset of M x R, downward closed in the R component only."""

    def __init__(self, monoid: MonoidMorphism, semiring: RatingSet,
                 cap: int = DEFAULT_CAPS.max_elements, label: str = "pointed-imprint",
                 lifo: bool = False):
        self.monoid = monoid
        self.semiring = semiring
        self.cap = cap
        self.label = label
        self.lifo = lifo
        self.members: set = set()
        self.tops: list = []
        self.queue: deque = deque()
        self.sweeps = 0

    def pop_pending(self):
        return self.queue.pop() if self.lifo else self.queue.popleft()

    def __contains__(self, pair) -> bool:
        return pair in self.members

    def __len__(self) -> int:
        return len(self.members)

    def insert(self, pair) -> bool:
        if pair in self.members:
            return False
        m, r = pair
        sr = self.semiring
        members = self.members
        members.add(pair)
        if len(members) > self.cap:
            raise SaturationCapError(self.cap, self.label, f"{len(members)} elements")
        for r2 in sr.downset(r):
            p2 = (m, r2)
            if p2 not in members:
                members.add(p2)
                if len(members) > self.cap:
                    raise SaturationCapError(self.cap, self.label, f"{len(members)} elements")
        self.tops.append(pair)
        self.queue.append(pair)
        return True

    def fiber(self, m) -> set:
        """All r with (m, r) in the set."""
        return {r for (m2, r) in self.members if m2 == m}

    def maximal_elements(self) -> list:
        sr = self.semiring
        by_m: dict = {}
        for (m, r) in set(self.tops):
            by_m.setdefault(m, []).append(r)
        out = []
        for m, rs in by_m.items():
            keep: list = []
            for r in sorted(rs, key=sr.downset_size, reverse=True):
                if not any(sr.leq(r, k) for k in keep):
                    keep.append(r)
            out.extend((m, r) for r in keep)
        return out

    def issubset(self, other: "PointedImprintSet") -> bool:
        return self.members <= other.members

    def __eq__(self, other):
        return isinstance(other, PointedImprintSet) and self.members == other.members

    def __hash__(self):  # pragma: no cover
        raise TypeError("PointedImprintSet is unhashable")

    def check_downward_closed(self) -> bool:
        for (m, r) in self.maximal_elements():
            for r2 in self.semiring.downset(r):
                if (m, r2) not in self.members:
                    return False
        return True

    def check_submonoid(self) -> bool:
        sr = self.semiring
        mon = self.monoid
        if not isinstance(sr, Semiring):
            return True
        if (mon.identity, sr.one) not in self.members:
            return False
        maxes = self.maximal_elements()
        for (m1, r1) in maxes:
            for (m2, r2) in maxes:
                if (mon.product(m1, m2), sr.mul(r1, r2)) not in self.members:
                    return False
        return True

    def check_contains(self, pairs) -> bool:
        return all(p in self.members for p in pairs)
