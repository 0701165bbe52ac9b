"""Hash table with coalesced chains and per-item displacement tracking.

Colliding items occupy regular table cells that are linked into chains; a
chain grows by one formerly-empty cell per collision, and chains "coalesce"
in the sense that a later item may hash straight into the middle of an
existing chain.  Two insertion policies are supported:

* late insertion (LISCH): the new item is appended at the end of the chain
  reached from its hash address;
* early insertion (EISCH): the new item is spliced into the chain
  immediately after its hash address.

The displacement of an item is the number of links followed from its hash
address until the item's cell is reached.  Under late insertion a
displacement never changes once assigned; under early insertion a splice can
push items that sit further down the chain one link away from their own hash
address, so this class re-derives the affected displacements after every
splice (each affected item is re-walked from its own address, which is the
obviously-correct maintenance rule; the compiled kernel uses an incremental
update that is tested to agree with it).

Cell indices and hash addresses are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Policy(str, Enum):
    """Insertion policy, or the unsuccessful-search pseudo-policy ``U``.

    ``U`` is accepted only by search-cost queries (histograms over the costs
    of unsuccessful searches); it is never a valid insertion policy.
    """

    LATE = "L"
    EARLY = "E"
    UNSUCCESSFUL = "U"

    @classmethod
    def from_string(cls, s: str) -> "Policy":
        try:
            return cls(s.upper())
        except ValueError:
            raise ValueError(f"unknown policy {s!r}; expected one of L, E, U") from None


class TableFullError(Exception):
    """All cells are occupied and another cell was requested."""


@dataclass(frozen=True)
class Cell:
    """Read-only view of one table cell.

    ``link`` is ``None`` for a null link; no sentinel index ever leaks out.
    ``item_id`` is the 1-based insertion-order index of the resident item.
    """

    occupied: bool
    link: int | None
    item_id: int | None


@dataclass(frozen=True)
class DisplacementHistogram:
    """Counts ``counts[k]`` of entries with value ``k`` plus derived stats."""

    counts: tuple[int, ...]
    total: int

    @classmethod
    def from_values(cls, values) -> "DisplacementHistogram":
        values = list(values)
        counts = [0] * (max(values) + 1 if values else 1)
        for v in values:
            counts[v] += 1
        return cls(counts=tuple(counts), total=len(values))

    @property
    def probs(self) -> tuple[float, ...]:
        return tuple(c / self.total for c in self.counts)

    @property
    def mean(self) -> float:
        return sum(k * c for k, c in enumerate(self.counts)) / self.total

    @property
    def variance(self) -> float:
        m1 = self.mean
        m2 = sum(k * k * c for k, c in enumerate(self.counts)) / self.total
        return m2 - m1 * m1


class HashTable:
    """Coalesced-chaining table under a fixed insertion policy.

    A plain single-threaded mutable value: it may be handed between threads
    but must not be mutated concurrently.  Read-only queries are safe to run
    concurrently on a table nobody is mutating.
    """

    def __init__(self, m: int, policy: Policy):
        if m < 1:
            raise ValueError(f"table needs at least one cell, got m={m}")
        policy = Policy(policy)
        if policy is Policy.UNSUCCESSFUL:
            raise ValueError("policy U is query-only; tables insert under L or E")
        self.m = m
        self.policy = policy
        # Index 0 of the per-cell arrays is unused; 0 doubles as the internal
        # null-link sentinel and never escapes through the public API.
        self._occ = bytearray(m + 1)
        self._link = [0] * (m + 1)
        self._cell_item = [0] * (m + 1)
        self._rover = m
        # Per-item records, index = item_id - 1.
        self._item_cell: list[int] = []
        self._item_addr: list[int] = []
        self._disp: list[int] = []

    # -- basic queries ------------------------------------------------------

    @property
    def n(self) -> int:
        """Number of items inserted so far."""
        return len(self._item_cell)

    def __len__(self) -> int:
        return self.n

    @property
    def rover(self) -> int:
        """Highest-index candidate for the next empty cell."""
        return self._rover

    def cell(self, j: int) -> Cell:
        self._check_address(j)
        if not self._occ[j]:
            return Cell(occupied=False, link=None, item_id=None)
        link = self._link[j]
        return Cell(occupied=True, link=link or None, item_id=self._cell_item[j])

    def occupied_cells(self) -> set[int]:
        return {j for j in range(1, self.m + 1) if self._occ[j]}

    def displacements(self) -> tuple[int, ...]:
        """Current displacement of every item, in insertion order."""
        return tuple(self._disp)

    def hash_addresses(self) -> tuple[int, ...]:
        return tuple(self._item_addr)

    def item_cells(self) -> tuple[int, ...]:
        return tuple(self._item_cell)

    def chains(self) -> list[tuple[int, ...]]:
        """All chains as cell tuples in link order, sorted by head index."""
        targets = {self._link[j] for j in range(1, self.m + 1) if self._occ[j]}
        heads = [j for j in range(1, self.m + 1) if self._occ[j] and j not in targets]
        out = []
        for head in heads:
            chain = [head]
            c = self._link[head]
            while c:
                chain.append(c)
                c = self._link[c]
            out.append(tuple(chain))
        return out

    # -- mutation -----------------------------------------------------------

    def find_free_cell(self) -> int:
        """Largest-index empty cell.

        The rover only ever moves downward (cells never free up), so the
        total scan cost over a table's lifetime is O(m).
        """
        if self.n >= self.m:
            raise TableFullError(f"all {self.m} cells occupied")
        while self._occ[self._rover]:
            self._rover -= 1
        return self._rover

    def insert(self, h: int) -> int:
        """Insert the next item with hash address ``h``.

        Returns the new item's displacement at insertion time (for late
        insertion this is final; for early insertion it is 0 or 1 and may
        grow as later items splice in front of it).
        """
        self._check_address(h)
        if self.n >= self.m:
            raise TableFullError(f"all {self.m} cells occupied")
        if not self._occ[h]:
            self._place(h, h)
            self._disp.append(0)
            return 0
        j = self.find_free_cell()
        if self.policy is Policy.LATE:
            end = h
            d = 0
            while self._link[end]:
                end = self._link[end]
                d += 1
            self._link[end] = j
            self._place(j, h)
            self._disp.append(d + 1)
            return d + 1
        # Early insertion: splice j right after h.  h's old link (possibly
        # null) moves onto j.
        k = self._link[h]
        self._link[h] = j
        self._link[j] = k
        self._place(j, h)
        self._disp.append(1)
        if k:
            self._rewalk_suffix(k)
        return 1

    def _place(self, j: int, h: int) -> None:
        self._occ[j] = 1
        self._cell_item[j] = self.n + 1
        self._item_cell.append(j)
        self._item_addr.append(h)

    def _rewalk_suffix(self, start: int) -> None:
        # Only items at or past the splice target can have moved further from
        # their own hash address; recompute each of their displacements by
        # walking from that address.
        c = start
        while c:
            item = self._cell_item[c]
            self._disp[item - 1] = self._walk(self._item_addr[item - 1], c)
            c = self._link[c]

    def _walk(self, start: int, target: int) -> int:
        d = 0
        c = start
        while c != target:
            c = self._link[c]
            d += 1
        return d

    # -- search costs and histograms ----------------------------------------

    def unsuccessful_search_cost(self, j: int) -> int:
        """Occupied cells met searching from start address ``j``: 0 if ``j``
        is empty, otherwise 1 + links followed to the chain's end."""
        self._check_address(j)
        if not self._occ[j]:
            return 0
        d = 1
        c = self._link[j]
        while c:
            d += 1
            c = self._link[c]
        return d

    def displacement_of(self, i: int) -> int:
        """Current displacement of item ``i`` (1-based insertion index)."""
        if not 1 <= i <= self.n:
            raise ValueError(f"item index {i} outside 1..{self.n}")
        return self._disp[i - 1]

    def recompute_displacements(self) -> tuple[int, ...]:
        """Every displacement re-derived from scratch by walking the links.

        Independent of the incrementally maintained values; the two must
        always agree.
        """
        return tuple(
            self._walk(self._item_addr[i], self._item_cell[i]) for i in range(self.n)
        )

    def histogram(self, which: Policy) -> DisplacementHistogram:
        """Displacement counts for this table's policy, or unsuccessful-search
        cost counts over all m start addresses for ``Policy.UNSUCCESSFUL``."""
        which = Policy(which)
        if which is Policy.UNSUCCESSFUL:
            costs = [self.unsuccessful_search_cost(j) for j in range(1, self.m + 1)]
            return DisplacementHistogram.from_values(costs)
        if which is not self.policy:
            raise ValueError(
                f"table built under policy {self.policy.value}, not {which.value}"
            )
        if self.n == 0:
            raise ValueError("empty table has no displacement histogram")
        return DisplacementHistogram.from_values(self._disp)

    def _check_address(self, j: int) -> None:
        if not 1 <= j <= self.m:
            raise ValueError(f"cell address {j} outside 1..{self.m}")


def new_table(m: int, policy: Policy) -> HashTable:
    """Fresh table with ``m`` empty cells, null links, rover at ``m``."""
    return HashTable(m, policy)
