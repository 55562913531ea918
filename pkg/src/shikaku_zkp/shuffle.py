"""Pile-shifting shuffle and the deterministic shift that undoes it.

A :class:`ShuffleSource` is the only place randomness enters a protocol run.
Seeded sources draw each offset uniformly from Z/qZ with
``random.Random.randrange``, which rejection-samples over getrandbits and so
has no modulo bias. Scripted sources replay a fixed offset list, which is how
tests enumerate every possible shuffle outcome.
"""

from __future__ import annotations

import random
from typing import List, Optional, Sequence

from .errors import ContractError, FormatViolation
from .transcript import SHIFT, SHUFFLE, Transcript

Matrix = List[List["object"]]


class ScriptExhausted(ContractError):
    pass


class ShuffleSource:
    def __init__(self, seed: Optional[int] = None, script: Optional[Sequence[int]] = None):
        if (seed is None) == (script is None):
            raise ContractError("give exactly one of seed or script")
        self.mode = "seeded" if script is None else "enumerated"
        self.seed = seed
        self._rng = random.Random(seed) if script is None else None
        self._script = list(script) if script is not None else None
        self._pos = 0
        self.drawn: List[int] = []

    @classmethod
    def seeded(cls, seed: int) -> "ShuffleSource":
        return cls(seed=seed)

    @classmethod
    def scripted(cls, offsets: Sequence[int]) -> "ShuffleSource":
        return cls(script=offsets)

    def offset(self, q: int) -> int:
        if q < 1:
            raise ContractError("cannot shuffle a matrix with no columns")
        if self._rng is not None:
            x = self._rng.randrange(q)
        else:
            if self._pos >= len(self._script):
                raise ScriptExhausted(f"scripted source ran out after {self._pos} offsets")
            x = self._script[self._pos]
            self._pos += 1
            if not 0 <= x < q:
                raise ContractError(f"scripted offset {x} outside Z/{q}Z")
        self.drawn.append(x)
        return x

    @property
    def exhausted(self) -> bool:
        return self._script is not None and self._pos == len(self._script)


class ZeroSource(ShuffleSource):
    """Always shifts by 0; for searches where offsets cannot change the verdict."""

    def __init__(self):
        self.mode = "zero"
        self.seed = None
        self.drawn = []

    def offset(self, q: int) -> int:
        return 0


def shift_columns(matrix: Matrix, x: int) -> Matrix:
    """Cyclic shift of the columns to the right by ``x``."""
    out = []
    for row in matrix:
        q = len(row)
        k = x % q
        out.append(row[q - k:] + row[:q - k] if k else list(row))
    return out


def pile_shifting_shuffle(matrix: Matrix, src: ShuffleSource, transcript: Optional[Transcript] = None,
                          label: str = "shuffle") -> Matrix:
    q = len(matrix[0])
    if any(len(row) != q for row in matrix):
        raise ContractError("ragged matrix")
    x = src.offset(q)
    if transcript is not None:
        transcript.log(SHUFFLE, {"offset": x}, label=label, shape=[len(matrix), q])
    return shift_columns(matrix, x)


def shift_to_column1(matrix: Matrix, row: int, transcript: Optional[Transcript] = None,
                     label: str = "shift") -> Matrix:
    """Rotate so the single face-up 1 in ``matrix[row]`` lands in column 1."""
    cards = matrix[row]
    if not all(c.face_up for c in cards):
        raise FormatViolation(label, f"row {row + 1} is not fully face up")
    values = [c.value for c in cards]
    if values.count(1) != 1 or any(v not in (0, 1) for v in values):
        raise FormatViolation(label, f"row {row + 1} must hold exactly one 1, saw {values}")
    q = len(cards)
    amount = (-values.index(1)) % q
    if transcript is not None:
        transcript.log(SHIFT, label=label, amount=amount)
    return shift_columns(matrix, amount)
