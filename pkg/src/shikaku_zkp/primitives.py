"""Chosen cut, addition in Z/3Z and neighbor selection.

Each subprotocol works on cards already on a :class:`~shikaku_zkp.cards.Table`
and enforces its own format checks: any reveal that breaks the expected
pattern raises :class:`~shikaku_zkp.errors.Rejected`.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

from .cards import ONE_HOT, Card, EncodedInt, Table, negate_mod3
from .errors import ContractError
from .shuffle import ShuffleSource, pile_shifting_shuffle, shift_to_column1


class SelectedHandle:
    """An open chosen cut: the 3 x q matrix and the column of the selected card.

    While open, cards of row 1 are addressed relative to the selected column;
    because shuffles are cyclic, offset ``d`` from the selection is the card
    that sat ``d`` places after the selected one in the original sequence.
    """

    def __init__(self, table: Table, matrix: List[List[Card]], column: int, label: str):
        self.table = table
        self.matrix = matrix
        self.column = column
        self.label = label
        self.closed = False
        self.selector: Optional[List[Card]] = None

    @property
    def q(self) -> int:
        return len(self.matrix[0])

    def col(self, offset: int = 0) -> int:
        return (self.column + offset) % self.q

    @property
    def selected(self) -> Card:
        return self.matrix[0][self.column]

    def card(self, offset: int = 0) -> Card:
        return self.matrix[0][self.col(offset)]

    def reveal(self, label: str, expect=None, offset: int = 0) -> int:
        (value,) = self.table.reveal([self.card(offset)], label, expect, positions=[self.col(offset)])
        return value

    def replace(self, new_value: int, label: str, offset: int = 0) -> Card:
        return self.table.replace(self.matrix[0], self.col(offset), new_value, label)

    def take(self, offset: int) -> Card:
        c = self.matrix[0][self.col(offset)]
        if c is None:
            raise ContractError("slot already empty")
        self.matrix[0][self.col(offset)] = None
        return c

    def put(self, offset: int, card: Card) -> None:
        if self.matrix[0][self.col(offset)] is not None:
            raise ContractError("slot is occupied")
        self.matrix[0][self.col(offset)] = card

    def close(self, src: ShuffleSource, keep_selector: bool = False) -> List[Card]:
        return close_handle(self, src, keep_selector)


def chosen_cut(table: Table, cards: Sequence[Card], selector: Sequence[Card], src: ShuffleSource,
               label: str = "cut") -> SelectedHandle:
    """Open a chosen cut on ``cards`` with the prover's face-down ``selector`` row."""
    q = len(cards)
    if len(selector) != q:
        raise ContractError(f"selector has {len(selector)} cards for a {q}-card cut")
    row3 = table.place_public([1] + [0] * (q - 1), f"{label}.row3")
    matrix = [list(cards), list(selector), row3]
    matrix = pile_shifting_shuffle(matrix, src, table.transcript, f"{label}.open")
    values = table.reveal(matrix[1], f"{label}.row2", ONE_HOT)
    return SelectedHandle(table, matrix, values.index(1), label)


def close_handle(h: SelectedHandle, src: ShuffleSource, keep_selector: bool = False) -> List[Card]:
    """Reshuffle, reveal row 3 and rotate its 1 back to column 1; returns row 1."""
    if h.closed:
        raise ContractError("handle already closed")
    if any(c is None for c in h.matrix[0]):
        raise ContractError("a selected card has not been put back")
    table = h.table
    matrix = pile_shifting_shuffle(h.matrix, src, table.transcript, f"{h.label}.close")
    table.reveal(matrix[2], f"{h.label}.row3", ONE_HOT, keep_up=True)
    matrix = shift_to_column1(matrix, 2, table.transcript, f"{h.label}.restore")
    table.collect(matrix[2], f"{h.label}.row3")
    if keep_selector:
        h.selector = matrix[1]
    else:
        table.collect(matrix[1], f"{h.label}.row2")
    h.matrix = matrix
    h.closed = True
    return matrix[0]


def secret_indicator(table: Table, q: int, position: int, label: str) -> List[Card]:
    """Prover places a face-down 1 at 0-based ``position`` and 0 elsewhere."""
    if not 0 <= position < q:
        raise ContractError(f"position {position} outside a {q}-card cut")
    return table.place_secret([1 if k == position else 0 for k in range(q)], label)


def add_mod3(table: Table, r: EncodedInt, s: EncodedInt, src: ShuffleSource,
             label: str = "add") -> EncodedInt:
    """Face-down encoding of r+s mod 3; the cards of ``s`` are used up."""
    if r.modulus != 3 or s.modulus != 3:
        raise ContractError("addition takes two mod-3 encodings")
    matrix = [negate_mod3(s).cards, list(r.cards)]
    matrix = pile_shifting_shuffle(matrix, src, table.transcript, f"{label}.shuffle")
    table.reveal(matrix[0], f"{label}.row1", ONE_HOT, keep_up=True)
    matrix = shift_to_column1(matrix, 0, table.transcript, f"{label}.shift")
    table.collect(matrix[0], f"{label}.row1")
    return EncodedInt(matrix[1], 3)


def reveal_rightmost_is_zero(table: Table, e: EncodedInt, label: str) -> None:
    """Show the encoded value is not 2."""
    table.reveal([e.cards[2]], label, 0, positions=[2])


def neighbor_selection(table: Table, c0: Card, c1: Card, r2: EncodedInt, src: ShuffleSource,
                       label: str = "neighbor") -> SelectedHandle:
    """Chosen cut over (c0, c1) with the mod-2 encoding ``r2`` as row 2; selects c_r.

    Close with ``keep_selector=True`` to get ``r2``'s cards back on ``handle.selector``.
    """
    if r2.modulus != 2:
        raise ContractError("neighbor selection takes a mod-2 encoding")
    return chosen_cut(table, [c0, c1], r2.cards, src, label)
