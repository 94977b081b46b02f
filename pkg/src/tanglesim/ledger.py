"""Append-only DAG ledger with incremental cumulative-weight maintenance.

Transaction ids are insertion ordinals starting at 0 (the genesis), so id
order equals issue-time order. Ancestry is kept as a boolean matrix; adding
a transaction ORs together its parents' ancestor rows and bumps the
cumulative weight of every distinct ancestor with a single vectorized
increment, which keeps per-insertion cost linear instead of a full reverse
BFS per weight query.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_PARENTS = 8


class TangleError(Exception):
    """Base class for ledger errors."""


class UnknownParent(TangleError):
    """A parent id does not exist in the ledger."""


class UnknownTransaction(TangleError):
    """A queried transaction id does not exist in the ledger."""


class ParentArity(TangleError):
    """Parent count outside the allowed 1..8 range."""


class TimeRegression(TangleError):
    """Issue time earlier than an already-stored transaction."""


@dataclass
class Transaction:
    """One ledger vertex."""

    id: int
    parents: tuple[int, ...]
    issued_at: float
    priority_flag: bool
    confirmed_at: float | None = None


class TangleLedger:
    """The DAG store: transactions, approver adjacency, tips, confirmation."""

    def __init__(self, capacity: int = 1024) -> None:
        capacity = max(capacity, 16)
        self._cap = capacity
        # _anc[i, j] is True iff j is a (strict) ancestor of i.
        self._anc = np.zeros((capacity, capacity), dtype=bool)
        self._cw = np.zeros(capacity, dtype=np.int64)
        self._confirmed_arr = np.zeros(capacity, dtype=bool)
        self._flag = np.zeros(capacity, dtype=bool)
        self._issued = np.zeros(capacity, dtype=np.float64)
        self._n = 0

        self.transactions: dict[int, Transaction] = {}
        self.approvers: dict[int, set[int]] = {}
        self.tip_set: set[int] = set()
        self.confirmed_set: set[int] = set()

        # genesis: no parents, issued at time 0, common class
        self._append(Transaction(0, (), 0.0, False))
        self.genesis = 0

    # -- storage ----------------------------------------------------------

    def _grow(self) -> None:
        new_cap = self._cap * 2
        anc = np.zeros((new_cap, new_cap), dtype=bool)
        anc[: self._cap, : self._cap] = self._anc
        self._anc = anc
        self._cw = np.concatenate([self._cw, np.zeros(self._cap, dtype=np.int64)])
        self._confirmed_arr = np.concatenate(
            [self._confirmed_arr, np.zeros(self._cap, dtype=bool)]
        )
        self._flag = np.concatenate([self._flag, np.zeros(self._cap, dtype=bool)])
        self._issued = np.concatenate(
            [self._issued, np.zeros(self._cap, dtype=np.float64)]
        )
        self._cap = new_cap

    def _append(self, tx: Transaction) -> None:
        if self._n == self._cap:
            self._grow()
        i = tx.id
        self.transactions[i] = tx
        self.approvers[i] = set()
        self.tip_set.add(i)
        self._cw[i] = 1
        self._flag[i] = tx.priority_flag
        self._issued[i] = tx.issued_at
        self._n += 1

    def __len__(self) -> int:
        return self._n

    def __contains__(self, tx_id: int) -> bool:
        return 0 <= tx_id < self._n

    def transaction(self, tx_id: int) -> Transaction:
        try:
            return self.transactions[tx_id]
        except KeyError:
            raise UnknownTransaction(f"transaction {tx_id} does not exist") from None

    # -- mutation ---------------------------------------------------------

    def add_transaction(
        self, parents: list[int], issued_at: float, priority_flag: bool = False
    ) -> int:
        """Store a new transaction approving `parents` and return its id.

        Duplicate parent ids are de-duplicated before edge insertion so each
        approver edge and each cumulative-weight increment is applied once.
        """
        if not 1 <= len(parents) <= MAX_PARENTS:
            raise ParentArity(f"got {len(parents)} parents, need 1..{MAX_PARENTS}")
        for p in parents:
            if p not in self:
                raise UnknownParent(f"parent {p} does not exist")
        last = self._issued[self._n - 1]
        if issued_at < last:
            raise TimeRegression(
                f"issued_at {issued_at} precedes stored time {last}"
            )

        distinct = sorted(set(parents))
        new_id = self._n
        self._append(Transaction(new_id, tuple(distinct), issued_at, priority_flag))

        row = self._anc[new_id]
        for p in distinct:
            row |= self._anc[p]
            row[p] = True
            self.approvers[p].add(new_id)
            self.tip_set.discard(p)
        # every distinct ancestor gains one approving descendant
        n = self._n
        self._cw[:n][row[:n]] += 1
        return new_id

    def confirmation_sweep(self, theta: int, now: float) -> set[int]:
        """Confirm every transaction whose cumulative weight reached `theta`.

        Returns the newly confirmed ids; idempotent at a fixed instant.
        """
        n = self._n
        newly = np.flatnonzero(
            (self._cw[:n] >= theta) & ~self._confirmed_arr[:n]
        )
        out = set()
        for i in newly:
            i = int(i)
            self._confirmed_arr[i] = True
            self.confirmed_set.add(i)
            self.transactions[i].confirmed_at = now
            out.add(i)
        return out

    # -- queries ----------------------------------------------------------

    def tips(self) -> set[int]:
        """Transactions not yet approved by any other transaction."""
        return set(self.tip_set)

    def cumulative_weight(self, tx_id: int) -> int:
        """1 + number of distinct transactions approving `tx_id` transitively."""
        if tx_id not in self:
            raise UnknownTransaction(f"transaction {tx_id} does not exist")
        return int(self._cw[tx_id])

    def past_cone(self, tx_id: int) -> set[int]:
        """All distinct ancestors of `tx_id`, excluding itself."""
        if tx_id not in self:
            raise UnknownTransaction(f"transaction {tx_id} does not exist")
        return {int(i) for i in np.flatnonzero(self._anc[tx_id, : self._n])}

    def future_cone(self, tx_id: int) -> set[int]:
        """All distinct transactions that reach `tx_id` via parent edges."""
        if tx_id not in self:
            raise UnknownTransaction(f"transaction {tx_id} does not exist")
        return {int(i) for i in np.flatnonzero(self._anc[: self._n, tx_id])}

    def is_confirmed(self, tx_id: int) -> bool:
        return tx_id in self.confirmed_set

    # -- selection support -------------------------------------------------

    def visible_count(self, cutoff: float) -> int:
        """Number of transactions with issued_at <= cutoff (a prefix, since
        insertion order is time order)."""
        return int(np.searchsorted(self._issued[: self._n], cutoff, side="right"))

    def priority_candidates(
        self, visible: int, promote_before: float | None
    ) -> list[int]:
        """Unconfirmed transactions among the first `visible` whose flag is
        set, or whose issue time is at or before `promote_before`."""
        k = visible
        m = self._flag[:k].copy()
        if promote_before is not None:
            m |= self._issued[:k] <= promote_before
        m &= ~self._confirmed_arr[:k]
        return [int(i) for i in np.flatnonzero(m)]

    def newest_non_tip(self, visible: int) -> int | None:
        """Most recently issued non-tip among the first `visible`, if any."""
        for i in range(visible - 1, -1, -1):
            if i not in self.tip_set:
                return i
        return None


def init_genesis() -> TangleLedger:
    """Fresh ledger containing only the genesis transaction."""
    return TangleLedger()
