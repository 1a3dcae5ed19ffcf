"""Coloured patterns with positive weights, and the bracket pairing between them.

A k-resolution is a finite colour sequence c (values in 1..k) together with
positive rational weights alpha of the same length. The bracket [r, s] is the
maximum over monotone matchings (index pairs strictly increasing in both
coordinates) of sum 2^(c_u - d_v) * alpha_u, taken over matched pairs (u, v).
The symmetric form <r, s> = max([r, s], [s, r]) drives the orthogonality
predicate: r and s are eta-orthogonal when <r, s> < eta.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .caps import load_caps
from .errors import DomainError, SizeError

TWO = Fraction(2)


@dataclass(frozen=True)
class Resolution:
    k: int
    pattern: tuple[int, ...]
    alpha: tuple[Fraction, ...]

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"k must be >= 1, got {self.k}")
        if len(self.pattern) != len(self.alpha):
            raise DomainError("pattern and alpha lengths differ")
        if len(self.pattern) == 0:
            raise DomainError("empty resolution")
        for c in self.pattern:
            if not (1 <= c <= self.k):
                raise DomainError(f"colour {c} outside 1..{self.k}")
        for a in self.alpha:
            if a <= 0:
                raise DomainError("weights must be positive")

    def __len__(self) -> int:
        return len(self.pattern)

    def weight_of_colour(self, j: int) -> Fraction:
        return sum((a for c, a in zip(self.pattern, self.alpha) if c == j), Fraction(0))

    def colour_weights(self) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for c, a in zip(self.pattern, self.alpha):
            out[c] = out.get(c, Fraction(0)) + a
        return out

    def total_weight(self) -> Fraction:
        return sum(self.alpha, Fraction(0))


def pattern_embeds(c: tuple[int, ...], d: tuple[int, ...], k: int, k2: int | None = None) -> bool:
    """Whether c occurs inside d as a colour-preserving subsequence.

    Greedy left-to-right scan; greedily taking the earliest match is complete
    for subsequence containment. Patterns must come from the same colour count.
    """
    if k2 is not None and k2 != k:
        raise DomainError(f"colour counts differ: {k} vs {k2}")
    for col in (*c, *d):
        if not (1 <= col <= k):
            raise DomainError(f"colour {col} outside 1..{k}")
    it = iter(d)
    return all(col in it for col in c)


def longest_chain(patterns: list[tuple[int, ...]], k: int) -> list[int]:
    """Indices of a longest chain under pattern containment, lex-smallest.

    Chain means each selected pattern embeds in the next. Longest path in the
    containment DAG; among maximal chains the lexicographically smallest index
    sequence is returned. Empty input gives an empty chain.
    """
    n = len(patterns)
    if n == 0:
        return []
    emb = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                emb[i][j] = pattern_embeds(patterns[i], patterns[j], k)
    # best[i] = (chain length, lex-smallest continuation) starting at i,
    # computed over successors with larger... containment can relate any pair,
    # so guard against two-cycles (equal patterns embed both ways): break ties
    # by requiring j > i when patterns embed mutually, which keeps the relation
    # acyclic without losing any chain up to reordering equal members.
    order = sorted(range(n), key=lambda i: (len(patterns[i]), i), reverse=True)
    best_len = [1] * n
    best_next: list[int | None] = [None] * n
    for i in order:
        for j in range(n):
            if j == i or not emb[i][j]:
                continue
            if emb[j][i] and j < i:
                continue
            if len(patterns[j]) < len(patterns[i]):
                continue
            cand = 1 + best_len[j]
            if cand > best_len[i]:
                best_len[i] = cand
                best_next[i] = j
    target = max(best_len)
    starts = [i for i in range(n) if best_len[i] == target]
    # lex-smallest full index sequence: among optimal starts walk preferring
    # the smallest next index that preserves optimal length.
    chain: list[int] = []
    cur = min(starts)
    need = target
    while True:
        chain.append(cur)
        need -= 1
        if need == 0:
            break
        nxts = []
        for j in range(n):
            if j == cur or not emb[cur][j]:
                continue
            if emb[j][cur] and j < cur:
                continue
            if best_len[j] >= need:
                nxts.append(j)
        cur = min(nxts)
    return chain


def _gain(r: Resolution, s: Resolution, u: int, v: int) -> Fraction:
    return TWO ** (r.pattern[u] - s.pattern[v]) * r.alpha[u]


def _bracket_dp(r: Resolution, s: Resolution) -> tuple[Fraction, list[tuple[int, int]]]:
    n, m = len(r), len(s)
    # suffix[u][v] = best total over matchings inside r[u:], s[v:]
    suffix = [[Fraction(0)] * (m + 1) for _ in range(n + 1)]
    for u in range(n - 1, -1, -1):
        row = suffix[u]
        below = suffix[u + 1]
        for v in range(m - 1, -1, -1):
            row[v] = max(below[v], row[v + 1], _gain(r, s, u, v) + below[v + 1])
    # lex-first optimal witness: take the smallest (u, v) pair consistent
    # with the optimum, then recurse past it.
    witness: list[tuple[int, int]] = []
    u = v = 0
    while u < n and v < m:
        if suffix[u][v] == suffix[u + 1][v]:
            paired = False
            for v2 in range(v, m):
                if _gain(r, s, u, v2) + suffix[u + 1][v2 + 1] == suffix[u][v]:
                    # pairing u here is also optimal; lex-first prefers the
                    # pair over skipping u only if no earlier arrangement...
                    # skipping u makes every later pair have first index > u,
                    # so pairing at u is lex-smaller whenever it is optimal.
                    witness.append((u + 1, v2 + 1))
                    u, v = u + 1, v2 + 1
                    paired = True
                    break
            if not paired:
                u += 1
        else:
            for v2 in range(v, m):
                if _gain(r, s, u, v2) + suffix[u + 1][v2 + 1] == suffix[u][v]:
                    witness.append((u + 1, v2 + 1))
                    u, v = u + 1, v2 + 1
                    break
            else:
                raise AssertionError("dp table inconsistent")
    return suffix[0][0], witness


def _bracket_brute(r: Resolution, s: Resolution) -> tuple[Fraction, list[tuple[int, int]]]:
    n, m = len(r), len(s)
    best = Fraction(0)
    best_wit: list[tuple[int, int]] = []

    def rec(u: int, v: int, acc: Fraction, pairs: list[tuple[int, int]]):
        nonlocal best, best_wit
        if acc > best or (acc == best and pairs < best_wit):
            best, best_wit = acc, list(pairs)
        for u2 in range(u, n):
            for v2 in range(v, m):
                pairs.append((u2 + 1, v2 + 1))
                rec(u2 + 1, v2 + 1, acc + _gain(r, s, u2, v2), pairs)
                pairs.pop()

    rec(0, 0, Fraction(0), [])
    return best, best_wit


def bracket(r: Resolution, s: Resolution, method: str = "dp") -> tuple[Fraction, list[tuple[int, int]]]:
    """[r, s] with a lex-first optimal matching witness (1-indexed pairs)."""
    if r.k != s.k:
        raise DomainError(f"colour counts differ: {r.k} vs {s.k}")
    if method == "dp":
        return _bracket_dp(r, s)
    if method == "brute":
        cap = load_caps().brute_bracket
        if len(r) > cap or len(s) > cap:
            raise SizeError(f"brute bracket capped at length {cap}")
        return _bracket_brute(r, s)
    raise DomainError(f"unknown bracket method {method!r}")


def mutual_bracket(r: Resolution, s: Resolution, method: str = "dp") -> Fraction:
    return max(bracket(r, s, method)[0], bracket(s, r, method)[0])


def eta_orthogonal(r: Resolution, s: Resolution, eta: Fraction) -> bool:
    if eta <= 0:
        raise DomainError("eta must be positive")
    return mutual_bracket(r, s) < eta


def repeat_resolution(r: Resolution, m: int) -> Resolution:
    """m concatenated copies of r with weights divided by m."""
    if m < 1:
        raise DomainError(f"repeat count must be >= 1, got {m}")
    return Resolution(r.k, r.pattern * m, tuple(a / m for a in r.alpha) * m)


def build_rademacher(k0: int, ns: tuple[int, ...], n: int, l: int = 1) -> Resolution:
    """Level-l Rademacher resolution for colour base k0 and multiplicities ns.

    Base block: colour j*k0 appears n*ns[j-1] times (colours ascending), each
    with weight 1/(n*ns[j-1]*k0), so every used colour carries weight 1/k0.
    Level l repeats the base block k0^(l-1) times with weights scaled down,
    which preserves the colour weights.
    """
    if k0 < 2:
        raise DomainError("k0 must be >= 2")
    if l < 1:
        raise DomainError(f"level must be >= 1, got {l}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if len(ns) != k0:
        raise DomainError(f"need {k0} multiplicities, got {len(ns)}")
    if any(x < 1 for x in ns):
        raise DomainError("multiplicities must be positive")
    k = k0 * k0
    pattern: list[int] = []
    alpha: list[Fraction] = []
    for j in range(1, k0 + 1):
        count = n * ns[j - 1]
        pattern.extend([j * k0] * count)
        alpha.extend([Fraction(1, n * ns[j - 1] * k0)] * count)
    base = Resolution(k, tuple(pattern), tuple(alpha))
    return repeat_resolution(base, k0 ** (l - 1)) if l > 1 else base


def ris_condition(k0: int, ns: tuple[int, ...]) -> bool:
    """Rapidly-increasing multiplicities: sum_{j<j'} ns_j/ns_j' < 2^(-k0^2)."""
    k = k0 * k0
    total = Fraction(0)
    for j in range(k0):
        for j2 in range(j + 1, k0):
            total += Fraction(ns[j], ns[j2])
    return total < TWO ** (-k)


def choose_multiplicities(k0: int) -> tuple[int, ...]:
    """Greedy minimal increasing multiplicities meeting the ris condition.

    n1 = 1; each next value is the least integer keeping the already-fixed
    part of the sum strictly below 2^(-k0^2), leaving room for the remaining
    (arbitrarily large) choices. The known small case: k0=2 gives (1, 17).
    """
    if k0 < 2:
        raise DomainError("k0 must be >= 2")
    bound = TWO ** (-k0 * k0)
    ns: list[int] = [1]
    for _ in range(1, k0):
        fixed = Fraction(0)
        for j in range(len(ns)):
            for j2 in range(j + 1, len(ns)):
                fixed += Fraction(ns[j], ns[j2])
        prev_sum = sum(ns)
        # adding value v contributes prev_sum / v on top of fixed
        # minimal integer v with fixed + prev_sum/v < bound
        room = bound - fixed
        if room <= 0:
            raise DomainError("greedy multiplicities stuck; constraint already violated")
        # prev_sum / v < room  <=>  v > prev_sum / room
        v = prev_sum * room.denominator // room.numerator + 1
        while fixed + Fraction(prev_sum, v) >= bound:
            v += 1
        ns.append(v)
    return tuple(ns)


def rademacher_bound(k0: int, ns: tuple[int, ...], l: int, l2: int) -> Fraction:
    """Certified upper bound for <R_{n,l}, R_{n',l2}> within one class.

    Same level: 1 + 2/k0. Different levels: 2^(-k0) + (1/k0) * sum_{j<j'}
    2^((j'-j)k0) ns_j/ns_j' + 3/k0, which stays below 5/k0 once the ris
    condition holds.
    """
    if l < 1 or l2 < 1:
        raise DomainError("levels must be >= 1")
    if len(ns) != k0:
        raise DomainError(f"need {k0} multiplicities, got {len(ns)}")
    if l == l2:
        return 1 + Fraction(2, k0)
    cross = Fraction(0)
    for j in range(1, k0 + 1):
        for j2 in range(j + 1, k0 + 1):
            cross += TWO ** ((j2 - j) * k0) * Fraction(ns[j - 1], ns[j2 - 1])
    return TWO ** (-k0) + cross / k0 + Fraction(3, k0)


def explore_orthogonal_family(
    family_class: str,
    eta: Fraction,
    budget: int,
    seed: int,
) -> dict:
    """Greedy search for a mutually eta-orthogonal set of resolutions.

    Candidate pool comes from the named class (currently "rademacher" with
    colour base 2 and greedy multiplicities). Every class member has colour
    weights 1/k0 and any two share enough colour positions to force
    <r, s> >= 1/k0, so eta <= 1/k0 cannot support a family of size above 1;
    that case returns immediately with the floor noted.
    """
    if family_class != "rademacher":
        raise DomainError(f"unknown family class {family_class!r}")
    if eta <= 0:
        raise DomainError("eta must be positive")
    caps = load_caps()
    if budget < 1 or budget > caps.orthogonal_budget:
        raise SizeError(f"budget must be in 1..{caps.orthogonal_budget}")
    k0 = 2
    ns = choose_multiplicities(k0)
    floor = Fraction(1, k0)
    if eta <= floor:
        member = build_rademacher(k0, ns, 1, 1)
        return {
            "family": [member],
            "labels": ["R[n=1,l=1]"],
            "pairwise_max": None,
            "note": f"eta <= colour weight floor {floor}; family size capped at 1",
            "evaluations": 0,
        }
    m_top = 3
    pool: list[tuple[str, Resolution]] = []
    for n0 in (1, 2):
        for l in range(1, m_top + 1):
            n = n0 * k0 ** (m_top - l)
            pool.append((f"R[n={n},l={l}]", build_rademacher(k0, ns, n, l)))
    rng = random.Random(seed)
    rng.shuffle(pool)
    family: list[Resolution] = []
    labels: list[str] = []
    pairwise_max: Fraction | None = None
    used = 0
    for label, cand in pool:
        ok = True
        cand_max: Fraction | None = None
        for member in family:
            if used >= budget:
                ok = False
                break
            used += 1
            val = mutual_bracket(cand, member)
            cand_max = val if cand_max is None else max(cand_max, val)
            if val >= eta:
                ok = False
                break
        if ok:
            family.append(cand)
            labels.append(label)
            if cand_max is not None:
                pairwise_max = cand_max if pairwise_max is None else max(pairwise_max, cand_max)
        if used >= budget:
            break
    return {
        "family": family,
        "labels": labels,
        "pairwise_max": pairwise_max,
        "note": "",
        "evaluations": used,
    }
