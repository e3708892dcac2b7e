"""Free groups of finite rank as implicit Cayley graphs.

Elements are freely reduced words over r generators, stored as tuples of
signed 1-based indices (i for a generator, -i for its inverse).  The word
metric on the Cayley graph is computed algebraically: the product a^-1 b
cancels exactly the longest common prefix of a and b, so

    d(a, b) = |a| + |b| - 2 * lcp(a, b).

Words serialize to strings: generator i is chr('a'+i-1), its inverse the
uppercase form (rank <= 26); higher ranks use space-separated "g3"/"G7"
tokens.  The empty word is spelled "e" up to rank 4; from rank 5 on the
letter e names generator 5, so the empty word is spelled "1" there.  The
serialized string doubles as the vertex id of the Cayley graph, so the
graph layer can order and hash vertices without knowing about words.
"""

from __future__ import annotations

import random
from typing import Iterable, Iterator

from .errors import RankMismatchError
from .graphs import ImplicitGraph


class ReducedWord:
    """A freely reduced word; immutable."""

    __slots__ = ("letters", "rank")

    def __init__(self, rank: int, letters: Iterable[int] = ()):
        if rank < 1:
            raise ValueError("rank must be >= 1")
        letters = tuple(letters)
        for x in letters:
            if x == 0 or abs(x) > rank:
                raise ValueError(f"letter {x} out of range for rank {rank}")
        for a, b in zip(letters, letters[1:]):
            if a == -b:
                raise ValueError("word is not freely reduced")
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "rank", rank)

    def __setattr__(self, name, value):
        raise AttributeError("ReducedWord is immutable")

    def __len__(self) -> int:
        return len(self.letters)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ReducedWord)
            and self.rank == other.rank
            and self.letters == other.letters
        )

    def __hash__(self) -> int:
        return hash((self.rank, self.letters))

    def __repr__(self) -> str:
        return f"ReducedWord(rank={self.rank}, {word_to_str(self)!r})"

    def inverse(self) -> "ReducedWord":
        return _trusted_word(self.rank, tuple(-x for x in reversed(self.letters)))


def _trusted_word(rank: int, letters: tuple) -> ReducedWord:
    # constructor bypass for words that are reduced by construction
    w = object.__new__(ReducedWord)
    object.__setattr__(w, "letters", letters)
    object.__setattr__(w, "rank", rank)
    return w


def identity(rank: int) -> ReducedWord:
    return ReducedWord(rank)


def generator(rank: int, i: int) -> ReducedWord:
    """The i-th generator (1-based); negative i gives the inverse."""
    return ReducedWord(rank, (i,))


def _check_ranks(a: ReducedWord, b: ReducedWord) -> None:
    if a.rank != b.rank:
        raise RankMismatchError(f"rank {a.rank} vs {b.rank}")


def multiply(a: ReducedWord, b: ReducedWord) -> ReducedWord:
    """Freely reduced product ab."""
    _check_ranks(a, b)
    out = list(a.letters)
    for x in b.letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return _trusted_word(a.rank, tuple(out))


def common_prefix_len(a: ReducedWord, b: ReducedWord) -> int:
    la, lb = a.letters, b.letters
    n = min(len(la), len(lb))
    i = 0
    while i < n and la[i] == lb[i]:
        i += 1
    return i


def fg_distance(a: ReducedWord, b: ReducedWord) -> int:
    """Word-metric distance, i.e. the length of a^-1 b."""
    _check_ranks(a, b)
    return len(a) + len(b) - 2 * common_prefix_len(a, b)


def sphere_size(rank: int, length: int) -> int:
    """Number of reduced words of exactly the given length."""
    if rank < 1:
        raise ValueError("rank must be >= 1")
    if length < 0:
        raise ValueError("length must be >= 0")
    if length == 0:
        return 1
    return 2 * rank * (2 * rank - 1) ** (length - 1)


def _letter_alternatives(rank: int) -> dict[int, tuple]:
    # alternatives[x] = every letter except -x; key 0 = no constraint
    everything = tuple(range(-rank, 0)) + tuple(range(1, rank + 1))
    table = {0: everything}
    for x in everything:
        table[x] = tuple(y for y in everything if y != -x)
    return table


_ALT_CACHE: dict[int, dict] = {}


def sample_sphere(rank: int, length: int, rng: random.Random) -> ReducedWord:
    """Uniform draw from the sphere of the given length.

    Built as a no-backtracking chain: first letter uniform over 2r symbols,
    each following letter uniform over the 2r - 1 symbols that do not cancel.
    """
    if length == 0:
        return ReducedWord(rank)
    table = _ALT_CACHE.get(rank)
    if table is None:
        table = _ALT_CACHE[rank] = _letter_alternatives(rank)
    letters = []
    prev = 0
    for _ in range(length):
        choices = table[prev]
        prev = choices[rng.randrange(len(choices))]
        letters.append(prev)
    return _trusted_word(rank, tuple(letters))


def cayley_neighbors(w: ReducedWord) -> list[ReducedWord]:
    """The 2r words at distance one: right multiplication by each generator
    and inverse, one of which shortens w when w is nonempty."""
    out = []
    last = w.letters[-1] if w.letters else 0
    for i in range(1, w.rank + 1):
        for x in (i, -i):
            if last == -x:
                out.append(_trusted_word(w.rank, w.letters[:-1]))
            else:
                out.append(_trusted_word(w.rank, w.letters + (x,)))
    return out


def enumerate_ball(rank: int, radius: int) -> Iterator[ReducedWord]:
    """All reduced words of length <= radius, shortest first."""

    def extend(letters: tuple, remaining: int) -> Iterator[tuple]:
        yield letters
        if remaining == 0:
            return
        last = letters[-1] if letters else 0
        for i in range(1, rank + 1):
            for x in (i, -i):
                if x != -last:
                    yield from extend(letters + (x,), remaining - 1)

    by_length: dict[int, list] = {}
    for letters in extend((), radius):
        by_length.setdefault(len(letters), []).append(letters)
    for n in sorted(by_length):
        for letters in by_length[n]:
            yield ReducedWord(rank, letters)


# -- serialization ----------------------------------------------------------

def empty_spelling(rank: int) -> str:
    return "e" if rank <= 4 else "1"


def word_to_str(w: ReducedWord) -> str:
    if not w.letters:
        return empty_spelling(w.rank)
    if w.rank <= 26:
        return "".join(
            chr(ord("a") + x - 1) if x > 0 else chr(ord("A") - x - 1) for x in w.letters
        )
    return " ".join(f"g{x}" if x > 0 else f"G{-x}" for x in w.letters)


def word_from_str(text: str, rank: int) -> ReducedWord:
    text = text.strip()
    if text == "" or text == "1" or (text == "e" and rank <= 4):
        return ReducedWord(rank)
    if " " in text or (text[0] in "gG" and text[1:].isdigit()):
        letters = []
        for tok in text.split():
            if len(tok) < 2 or tok[0] not in "gG" or not tok[1:].isdigit():
                raise ValueError(f"bad word token {tok!r}")
            i = int(tok[1:])
            letters.append(i if tok[0] == "g" else -i)
        return ReducedWord(rank, letters)
    letters = []
    for ch in text:
        if "a" <= ch <= "z":
            letters.append(ord(ch) - ord("a") + 1)
        elif "A" <= ch <= "Z":
            letters.append(-(ord(ch) - ord("A") + 1))
        else:
            raise ValueError(f"bad word character {ch!r} in {text!r}")
    return ReducedWord(rank, letters)


# -- Cayley graph over serialized ids ---------------------------------------

def _str_lcp(a: str, b: str) -> int:
    """Length of the longest common prefix, via doubling + binary search so
    the comparisons run at C speed (this sits on the hot path of descent)."""
    if a == b:
        return len(a)
    n = min(len(a), len(b))
    lo = 0
    step = 1
    while lo + step <= n and a[: lo + step] == b[: lo + step]:
        lo += step
        step *= 2
    hi = min(n, lo + step - 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if a[:mid] == b[:mid]:
            lo = mid
        else:
            hi = mid - 1
    return lo


_CASE_FLIP = str.maketrans(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ",
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz",
)


class CayleyGraph(ImplicitGraph):
    """Cayley graph of the free group of the given rank.

    Vertex ids are serialized reduced words; for rank <= 26 neighbor and
    distance computations work directly on the strings.  The graph is a
    2r-regular tree.
    """

    def __init__(self, rank: int):
        if rank < 1:
            raise ValueError("rank must be >= 1")
        self.rank = rank
        self.empty_id = empty_spelling(rank)
        if rank <= 26:
            alphabet = [chr(ord("a") + i) for i in range(rank)]
            self._letters = tuple(alphabet + [c.upper() for c in alphabet])
            neighbor_fn = self._string_neighbors
            distance_fn = self._string_distance
        else:
            neighbor_fn = self._word_neighbors
            distance_fn = self._word_distance
        super().__init__(
            neighbor_fn, distance_fn=distance_fn, is_tree=True, name=f"F{rank}"
        )

    def _string_neighbors(self, v: str) -> tuple:
        body = "" if v == self.empty_id else v
        inv_last = body[-1].translate(_CASE_FLIP) if body else ""
        out = []
        for c in self._letters:
            if c == inv_last:
                out.append(body[:-1] or self.empty_id)
            else:
                out.append(body + c)
        return tuple(out)

    def _string_distance(self, a: str, b: str) -> int:
        if a == b:
            return 0
        empty = self.empty_id
        if a == empty:
            return len(b)
        if b == empty:
            return len(a)
        return len(a) + len(b) - 2 * _str_lcp(a, b)

    def _word_neighbors(self, v: str) -> tuple:
        w = word_from_str(v, self.rank)
        return tuple(word_to_str(u) for u in cayley_neighbors(w))

    def _word_distance(self, a: str, b: str) -> int:
        return fg_distance(word_from_str(a, self.rank), word_from_str(b, self.rank))

    def id_of(self, w: ReducedWord) -> str:
        if w.rank != self.rank:
            raise RankMismatchError(f"word rank {w.rank} vs graph rank {self.rank}")
        return word_to_str(w)

    def word_of(self, vid: str) -> ReducedWord:
        return word_from_str(vid, self.rank)
