"""Independent combinatorial oracles for moments and tower anchors.

Everything here is deliberately computed by brute-force enumeration, not by
the recursions used in the library, so tests can compare the two routes.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def q_factorial(n, q):
    """[n]_q! as the inversion generating polynomial sum_{s in S_n} q^inv(s)."""
    if n <= 1:
        return 1.0
    total = 0.0
    for perm in itertools.permutations(range(n)):
        inv = sum(
            1
            for i in range(n)
            for j in range(i + 1, n)
            if perm[i] > perm[j]
        )
        total += q ** inv
    return total


def q_factorial_product(n, q):
    """Closed form prod_{j=1..n} (1 - q^j)/(1 - q), a sanity mate for the sum."""
    out = 1.0
    for j in range(1, n + 1):
        if q == 1.0:
            out *= j
        else:
            out *= (1.0 - q ** j) / (1.0 - q)
    return out


def catalan(m):
    return math.comb(2 * m, m) // (m + 1)


def pair_partitions(n):
    """All perfect matchings of {0, ..., n-1}; empty list for odd n."""
    if n % 2 == 1:
        return []
    if n == 0:
        return [[]]
    rest = list(range(1, n))
    out = []
    for idx, b in enumerate(rest):
        others = rest[:idx] + rest[idx + 1:]
        relabel = {v: i for i, v in enumerate(others)}
        for sub in pair_partitions(n - 2):
            inv = {i: v for v, i in relabel.items()}
            out.append([(0, b)] + [(inv[x], inv[y]) for x, y in sub])
    return out


def crossings(pairing):
    """Number of crossing pairs {a,b}, {c,d} with a < c < b < d."""
    cr = 0
    pairs = [tuple(sorted(p)) for p in pairing]
    for (a, b), (c, d) in itertools.combinations(pairs, 2):
        if a < c < b < d or c < a < d < b:
            cr += 1
    return cr


def moment_oracle(q, vectors):
    """sum over pair partitions of q^crossings times the kernel product.

    The kernel is the physics inner product <xi_a, xi_b> = vdot(xi_a, xi_b)
    taken on each pair (a < b).  Valid as a moment formula for the q-twist
    over a scalar tracial base with trivial flow; used only as an oracle.
    """
    n = len(vectors)
    if n % 2 == 1:
        return 0.0 + 0.0j
    vecs = [np.asarray(v, dtype=complex) for v in vectors]
    total = 0.0 + 0.0j
    for pairing in pair_partitions(n):
        term = q ** crossings(pairing)
        for a, b in pairing:
            lo, hi = (a, b) if a < b else (b, a)
            term = term * np.vdot(vecs[lo], vecs[hi])
        total += term
    return total
