"""
Thue-Morse and square-free words
================================

Iterate the two substitutions and look at which short factors never occur.
"""

from finsemi.words import SQUARE_FREE, THUE_MORSE, is_overlap_free, is_square_free, missing_factors

# mu(a) = ab, mu(b) = ba; the iterates double in length and never contain an overlap
for n in range(6):
    w = THUE_MORSE.iterate("a", n)
    print(f"mu^{n}(a) = {w:<32} overlap-free: {is_overlap_free(w)}")

w = THUE_MORSE.iterate("a", 10)
print("factors of length <= 3 missing from mu^10(a):", sorted(missing_factors(w, "ab", 3)))

# the three-letter substitution produces square-free words
for n in range(4):
    w = SQUARE_FREE.iterate("a", n)
    print(f"phi^{n}(a) = {w[:40]}{'...' if len(w) > 40 else ''}  square-free: {is_square_free(w)}")
