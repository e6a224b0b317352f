"""Finite words, substitutions and repetition-freeness tests.

Words are plain ``str`` over single-character letters; that is enough for
every alphabet used here and keeps factor tests on the fast C path.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _product


@dataclass(frozen=True)
class Substitution:
    images: dict

    def __post_init__(self):
        for letter, img in self.images.items():
            if len(letter) != 1 or not img:
                raise ValueError(f"bad image for {letter!r}: {img!r}")

    @property
    def alphabet(self) -> str:
        return "".join(sorted(self.images))

    def prolongable(self, letter: str) -> bool:
        return self.images[letter][:1] == letter

    def __call__(self, w: str) -> str:
        return "".join(self.images[c] for c in w)

    def iterate(self, letter: str, n: int) -> str:
        if n < 0:
            raise ValueError("n must be >= 0")
        w = letter
        for _ in range(n):
            w = self(w)
        return w


THUE_MORSE = Substitution({"a": "ab", "b": "ba"})
# the square-free substitution on three letters
SQUARE_FREE = Substitution({"a": "abc", "b": "ac", "c": "b"})


def mu(w: str, n: int = 1) -> str:
    """Apply the Prouhet-Thue-Morse morphism ``n`` times."""
    for _ in range(n):
        w = THUE_MORSE(w)
    return w


def iterate(sub: Substitution, letter: str, n: int) -> str:
    return sub.iterate(letter, n)


def other(c: str) -> str:
    return "b" if c == "a" else "a"


def has_square(w: str) -> bool:
    n = len(w)
    for p in range(1, n // 2 + 1):
        run = 0
        for i in range(n - p):
            run = run + 1 if w[i] == w[i + p] else 0
            if run >= p:
                return True
    return False


def has_cube(w: str) -> bool:
    n = len(w)
    for p in range(1, n // 3 + 1):
        run = 0
        for i in range(n - p):
            run = run + 1 if w[i] == w[i + p] else 0
            if run >= 2 * p:
                return True
    return False


def has_overlap(w: str) -> bool:
    # uvuvu with |u| >= 1 is a factor of length 2p+1 with period p = |uv|
    n = len(w)
    for p in range(1, (n - 1) // 2 + 1):
        run = 0
        for i in range(n - p):
            run = run + 1 if w[i] == w[i + p] else 0
            if run >= p + 1:
                return True
    return False


def is_square_free(w: str) -> bool:
    return not has_square(w)


def is_cube_free(w: str) -> bool:
    return not has_cube(w)


def is_overlap_free(w: str) -> bool:
    return not has_overlap(w)


def factors(w: str, maxlen: int | None = None) -> set:
    """Nonempty contiguous factors of ``w`` of length at most ``maxlen``."""
    top = len(w) if maxlen is None else min(maxlen, len(w))
    return {w[i:i + k] for k in range(1, top + 1) for i in range(len(w) - k + 1)}


def is_factor(u: str, w: str) -> bool:
    return u in w


def is_subword(u: str, w: str) -> bool:
    """Scattered subword test."""
    it = iter(w)
    return all(c in it for c in u)


def all_words(alphabet: str, length: int):
    for t in _product(alphabet, repeat=length):
        yield "".join(t)


def missing_factors(w: str, alphabet: str, maxlen: int) -> set:
    present = factors(w, maxlen)
    return {u for k in range(1, maxlen + 1) for u in all_words(alphabet, k) if u not in present}


def power(w: str, n: int) -> str:
    return w * n


def pretty(w: str) -> str:
    """Run-length display: ``aab`` -> ``a^2 b``."""
    if not w:
        return "1"
    out = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        out.append(w[i] if j - i == 1 else f"{w[i]}^{j - i}")
        i = j
    return " ".join(out)


def read_word(text: str) -> str:
    return "".join(text.split())
