"""Two-scale layout vectors and the adversarial functional family over them.

A layout places two distinguished coordinates at positions 1 and 2 of the
universe {1..n_slots+2} and tiles the rest with alternating runs: per round,
an I-run of n1*2^(K(m2-m1)) slots then a J-run of n2*2^(K(m2-m1)) slots,
for 2^(K*m1-1) rounds. E1 collects the I-slots (value u1 = 1/(n1*2^(K*m2-1))
each on the canonical functional), E2 the J-slots (value u2 = 1/(n2*2^(K*m2-1))).

The functional family evaluated by max_over_functionals consists of all
shapes (a, b): coefficient 1/2 at coordinate a, 1 at coordinate b, then the
slot value sequence of the (a, b)-shaped tiling assigned to freely chosen
increasing coordinates above b, together with all initial-segment
truncations and negations. Truncations below b appear as the explicit
half-coefficient candidates; truncations inside the slot region are covered
by partial slot placement.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .caps import check_cap, load_caps
from .errors import DomainError, SizeError
from .norms import SparseVector

TWO = Fraction(2)


@dataclass(frozen=True)
class EltonParams:
    n1: int
    n2: int
    K: int
    eps: Fraction
    m1: int = 1
    m2: int = 2

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise DomainError("n1, n2 must be positive")
        if self.K < 1:
            raise DomainError("K must be >= 1")
        if not (0 < self.eps < 1):
            raise DomainError(f"eps must be in (0, 1), got {self.eps}")
        if not (1 <= self.m1 < self.m2):
            raise DomainError("need 1 <= m1 < m2")


def validate_params(p: EltonParams) -> dict:
    """Check the two smallness conditions behind the case bounds."""
    failures = []
    slack = Fraction(p.n1, 2 * p.n2) + TWO ** (-p.K)
    if not slack < p.eps:
        failures.append(f"n1/(2 n2) + 2^-K = {slack} is not < eps = {p.eps}")
    crowd = Fraction(2 * p.n1 + p.n2, p.n1 * 2 ** p.K)
    if not crowd < 1:
        failures.append(f"(2 n1 + n2)/(n1 2^K) = {crowd} is not < 1")
    if not p.n1 < p.n2:
        failures.append(f"need n1 < n2, got {p.n1} >= {p.n2}")
    return {"ok": not failures, "failures": failures}


@dataclass(frozen=True)
class EltonLayout:
    params: EltonParams
    universe: int          # n_slots + 2
    n_slots: int
    rounds: int
    i_len: int
    j_len: int
    u1: Fraction
    u2: Fraction
    e1_size: int
    e2_size: int

    def region(self, c: int) -> str:
        if c == 1:
            return "first"
        if c == 2:
            return "second"
        if not (3 <= c <= self.universe):
            raise DomainError(f"coordinate {c} outside universe 1..{self.universe}")
        offset = (c - 3) % (self.i_len + self.j_len)
        return "E1" if offset < self.i_len else "E2"

    def e_coords(self, which: str):
        for c in range(3, self.universe + 1):
            if self.region(c) == which:
                yield c


def build_layout(p: EltonParams, m1: int | None = None, m2: int | None = None) -> EltonLayout:
    m1 = p.m1 if m1 is None else m1
    m2 = p.m2 if m2 is None else m2
    if not (1 <= m1 < m2):
        raise DomainError("need 1 <= m1 < m2")
    n_slots = (p.n1 + p.n2) * 2 ** (p.K * m2 - 1)
    universe = n_slots + 2
    check_cap(universe, load_caps().layout_universe, "layout universe")
    i_len = p.n1 * 2 ** (p.K * (m2 - m1))
    j_len = p.n2 * 2 ** (p.K * (m2 - m1))
    rounds = 2 ** (p.K * m1 - 1)
    e1_size = p.n1 * 2 ** (p.K * m2 - 1)
    e2_size = p.n2 * 2 ** (p.K * m2 - 1)
    assert rounds * (i_len + j_len) == n_slots
    assert rounds * i_len == e1_size and rounds * j_len == e2_size
    return EltonLayout(
        params=p, universe=universe, n_slots=n_slots, rounds=rounds,
        i_len=i_len, j_len=j_len,
        u1=Fraction(1, p.n1 * 2 ** (p.K * m2 - 1)),
        u2=Fraction(1, p.n2 * 2 ** (p.K * m2 - 1)),
        e1_size=e1_size, e2_size=e2_size,
    )


@dataclass(frozen=True)
class LayoutVector:
    """Vector constant on each layout region."""
    at_first: Fraction
    at_second: Fraction
    on_e1: Fraction
    on_e2: Fraction

    def value(self, layout: EltonLayout, c: int) -> Fraction:
        region = layout.region(c)
        if region == "first":
            return self.at_first
        if region == "second":
            return self.at_second
        return self.on_e1 if region == "E1" else self.on_e2

    def sup_norm(self) -> Fraction:
        return max(abs(self.at_first), abs(self.at_second),
                   abs(self.on_e1), abs(self.on_e2))

    def to_sparse(self, layout: EltonLayout) -> SparseVector:
        pairs = []
        for c in range(1, layout.universe + 1):
            v = self.value(layout, c)
            if v != 0:
                pairs.append((c, v))
        return SparseVector.from_pairs(pairs)


@dataclass(frozen=True)
class StructuredFunctional:
    """The canonical dual vector of a layout: 1/2 and 1 at the distinguished
    pair, u1 on E1, u2 on E2. u1*|E1| = u2*|E2| = 1."""
    u1: Fraction
    u2: Fraction

    def pair_layout_vector(self, layout: EltonLayout, v: LayoutVector) -> Fraction:
        return (Fraction(1, 2) * v.at_first + v.at_second
                + self.u1 * layout.e1_size * v.on_e1
                + self.u2 * layout.e2_size * v.on_e2)

    def pair_sparse(self, layout: EltonLayout, v: SparseVector) -> Fraction:
        total = Fraction(0)
        for c, val in v.entries:
            region = layout.region(c)
            if region == "first":
                total += Fraction(1, 2) * val
            elif region == "second":
                total += val
            elif region == "E1":
                total += self.u1 * val
            else:
                total += self.u2 * val
        return total


@dataclass(frozen=True)
class VectorTriple:
    minus: LayoutVector
    plus: LayoutVector
    functional: StructuredFunctional
    variant: str
    alpha: Fraction | None = None


def build_vectors(layout: EltonLayout, variant: str = "standard",
                  alpha: Fraction | None = None) -> VectorTriple:
    """The distinguished vector, its positive-part companion, and the dual.

    standard: x = -1/2 e_1 + 1/2 e_2 + 1/2 on E1 + 1/4 on E2; the companion
    drops the negative coordinate. quasi(alpha): y = -alpha e_1 + e_2 +
    1 on E1 + 2/3 on E2, companion drops coordinate 1; at alpha < 2/3 the
    companion equals the threshold projection of y at level 2/3.
    """
    f = StructuredFunctional(layout.u1, layout.u2)
    if variant == "standard":
        if alpha is not None:
            raise DomainError("alpha applies to the quasi variant only")
        x = LayoutVector(Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 4))
        xp = LayoutVector(Fraction(0), Fraction(1, 2), Fraction(1, 2), Fraction(1, 4))
        return VectorTriple(x, xp, f, "standard")
    if variant == "quasi":
        if alpha is None:
            raise DomainError("quasi variant needs alpha")
        if not (0 < alpha <= 1):
            raise DomainError(f"alpha must be in (0, 1], got {alpha}")
        y = LayoutVector(-alpha, Fraction(1), Fraction(1), Fraction(2, 3))
        yp = LayoutVector(Fraction(0), Fraction(1), Fraction(1), Fraction(2, 3))
        return VectorTriple(y, yp, f, "quasi", alpha)
    raise DomainError(f"unknown variant {variant!r}")


def case_bounds(p: EltonParams) -> dict:
    """The four shape-case upper bounds for the standard vector's norm.

    Case 1: both distinguished coordinates hit. Case 2: the heavy coordinate
    lands before the second distinguished one. Case 3: it lands beyond.
    Case 4: the light coordinate misses. The maximum is always case 4 under
    valid parameters.
    """
    c1 = 1 + Fraction(p.n1, 2 * p.n2)
    c2 = Fraction(1)
    c3 = Fraction(3, 4) + Fraction(2 * p.n1 + p.n2, 4 * p.n1 * 2 ** p.K)
    c4 = 1 + Fraction(p.n1, 2 * p.n2) + TWO ** (-p.K)
    return {"case1": c1, "case2": c2, "case3": c3, "case4": c4,
            "max": max(c1, c2, c3, c4)}


def quasi_case_bounds(p: EltonParams, alpha: Fraction) -> dict:
    """Norm upper bounds for the quasi variant, same case scheme.

    Both-coordinates shape: pinned part (1 - alpha/2), block mass at most
    1*(1 + n1/n2) on E1-values plus 2/3 on E2-values. Beyond-universe heavy
    coordinate: pinned at most 3/2, slot values at most u1 of level m2+1,
    total coefficient mass (n1 + 2 n2/3) 2^(K m2 - 1) against it.
    """
    q1 = Fraction(8, 3) - alpha / 2 + Fraction(p.n1, p.n2)
    q3 = Fraction(3, 2) + (p.n1 + Fraction(2, 3) * p.n2) / (p.n1 * 2 ** p.K)
    return {"case_both": q1, "case_beyond": q3, "max": max(Fraction(1), q1, q3)}


# ------------------------------------------------------------ slot sequences

def _slot_value_list(p: EltonParams, a: int, b: int, count: int) -> list[Fraction]:
    """First `count` slot values of the (a, b)-shaped tiling."""
    u1 = Fraction(1, p.n1 * 2 ** (p.K * b - 1))
    u2 = Fraction(1, p.n2 * 2 ** (p.K * b - 1))
    i_len = p.n1 * 2 ** (p.K * (b - a))
    j_len = p.n2 * 2 ** (p.K * (b - a))
    total = (p.n1 + p.n2) * 2 ** (p.K * b - 1)
    count = min(count, total)
    out: list[Fraction] = []
    while len(out) < count:
        take = min(i_len, count - len(out))
        out.extend([u1] * take)
        if len(out) >= count:
            break
        take = min(j_len, count - len(out))
        out.extend([u2] * take)
    return out


def _dense_values(layout: EltonLayout, v) -> list[Fraction]:
    if isinstance(v, LayoutVector):
        return [Fraction(0)] + [v.value(layout, c) for c in range(1, layout.universe + 1)]
    if isinstance(v, SparseVector):
        dense = [Fraction(0)] * (layout.universe + 1)
        for c, val in v.entries:
            if c > layout.universe:
                raise DomainError(f"coordinate {c} outside universe 1..{layout.universe}")
            dense[c] = val
        return dense
    raise DomainError("vector must be a LayoutVector or SparseVector")


# ------------------------------------------------------------------- brute

def brute_miniature(layout: EltonLayout, v) -> tuple[Fraction, dict]:
    """Exhaustive family maximum for small universes.

    For every sign, shape (a, b), and subset of coordinates above b, assigns
    the shape's slot values in order to the subset's coordinates (a prefix of
    the slot sequence; shorter subsets are the slot truncations) and takes
    the best total. Half-coefficient-only candidates cover truncations that
    cut before b.
    """
    N = layout.universe
    check_cap(N, load_caps().brute_universe, "brute universe")
    vals = _dense_values(layout, v)
    p = layout.params
    best = Fraction(0)
    best_wit: dict = {"kind": "zero"}
    for sigma in (1, -1):
        sv = [sigma * x for x in vals]
        for a in range(1, N + 1):
            cand = Fraction(1, 2) * sv[a]
            if cand > best:
                best = cand
                best_wit = {"kind": "half_only", "a": a, "sigma": sigma}
        for a in range(1, N + 1):
            for b in range(a + 1, N + 1):
                pinned = Fraction(1, 2) * sv[a] + sv[b]
                coords = list(range(b + 1, N + 1))
                slots = _slot_value_list(p, a, b, len(coords))

                def rec(idx: int, slot_i: int, acc: Fraction):
                    nonlocal best, best_wit
                    if acc > best:
                        best = acc
                        best_wit = {"kind": "shape", "a": a, "b": b,
                                    "sigma": sigma, "slots_used": slot_i}
                    if idx >= len(coords) or slot_i >= len(slots):
                        return
                    rec(idx + 1, slot_i, acc)
                    rec(idx + 1, slot_i + 1, acc + slots[slot_i] * sv[coords[idx]])

                rec(0, 0, pinned)
    return best, best_wit


# ------------------------------------------------------------ structured dp

def _common_denom(slots: list[Fraction], values: list[Fraction]) -> int:
    denoms = {x.denominator for x in slots} | {x.denominator for x in values}
    return lcm(*denoms) if denoms else 1


def _block_max_int(slot_nums: list[int], val_nums: list[int],
                   want_table: bool = False):
    """Max of sum slot_j * value(c_j) over increasing coordinate choices.

    Integer DP: M[j] = best with exactly j slots placed so far; coordinates
    stream left to right, slots consume in order, placement optional.
    """
    n_slots = len(slot_nums)
    M: list[int | None] = [0] + [None] * n_slots
    table: list[list[int | None]] = []
    seen = 0
    for x in val_nums:
        if want_table:
            table.append(list(M))
        seen += 1
        for j in range(min(n_slots, seen), 0, -1):
            prev = M[j - 1]
            if prev is None:
                continue
            cand = prev + slot_nums[j - 1] * x
            cur = M[j]
            if cur is None or cand > cur:
                M[j] = cand
    best = max(m for m in M if m is not None)
    if not want_table:
        return best, M, None
    return best, M, table


def _backtrack_assignment(slot_nums, val_nums, M_final, table, coords_base):
    """Recover one optimal slot->coordinate assignment from the DP table."""
    best = max(m for m in M_final if m is not None)
    j = max(idx for idx, m in enumerate(M_final) if m == best)
    assignment: list[tuple[int, int]] = []  # (slot index 1-based, coordinate)
    cur = best
    for ci in range(len(val_nums) - 1, -1, -1):
        if j == 0:
            break
        before = table[ci][j]
        if before is not None and before == cur:
            continue
        prev = table[ci][j - 1]
        if prev is None or prev + slot_nums[j - 1] * val_nums[ci] != cur:
            raise AssertionError("dp backtrack lost the optimal path")
        assignment.append((j, coords_base + ci))
        cur = prev
        j -= 1
    assignment.reverse()
    return assignment


def _spans_from_assignment(assignment, slot_values):
    """Compress (slot, coord) pairs into (coord_from, coord_to, value) spans."""
    spans = []
    for slot_j, coord in assignment:
        val = slot_values[slot_j - 1]
        if spans and spans[-1][1] == coord - 1 and spans[-1][2] == val:
            spans[-1] = (spans[-1][0], coord, val)
        else:
            spans.append((coord, coord, val))
    return spans


def structured_dp(layout: EltonLayout, v, want_witness: bool = True,
                  cell_budget: int = 30_000_000) -> tuple[Fraction, dict]:
    """Family maximum via per-shape slot-placement DP with sound pruning.

    Shapes are screened by the upper bound 1/2 max_half + pinned_b + tail(b),
    where tail(b) bounds every slot by the shape's largest slot value (the
    sparser side's unit 1/(min(n1,n2) 2^(Kb-1))) against the positive
    coefficient mass above b. Shapes are visited in bound order and
    expansion stops once bounds fall under the incumbent.
    """
    N = layout.universe
    vals = _dense_values(layout, v)
    p = layout.params
    best = Fraction(0)
    best_wit: dict = {"kind": "zero"}
    cells_used = 0

    for sigma in (1, -1):
        sv = [sigma * x for x in vals]
        pos = [x if x > 0 else Fraction(0) for x in sv]
        # suffix positive mass above each coordinate
        tail = [Fraction(0)] * (N + 2)
        for c in range(N, 0, -1):
            tail[c] = tail[c + 1] + pos[c]
        prefmax = [Fraction(0)] * (N + 1)
        run = Fraction(0)
        for c in range(1, N + 1):
            if pos[c] > run:
                run = pos[c]
            prefmax[c] = run
        for a in range(1, N + 1):
            cand = Fraction(1, 2) * sv[a]
            if cand > best:
                best = cand
                best_wit = {"kind": "half_only", "a": a, "sigma": sigma}
        # bound per b, sorted descending; exponents clamped for cheap bounds
        def slot_upper(b: int) -> Fraction:
            # largest slot value of an (a, b) shape; the sparser side's unit
            e = min(p.K * b - 1, 200)
            return Fraction(1, min(p.n1, p.n2) * 2 ** e)

        b_bounds = []
        for b in range(2, N + 1):
            bound = Fraction(1, 2) * prefmax[b - 1] + pos[b] + slot_upper(b) * tail[b + 1]
            b_bounds.append((bound, b))
        b_bounds.sort(key=lambda t: t[0], reverse=True)
        order_by_half = sorted(range(1, N + 1), key=lambda c: pos[c], reverse=True)
        for bound, b in b_bounds:
            if bound <= best:
                break
            tail_term = slot_upper(b) * tail[b + 1]
            for a in order_by_half:
                if a >= b:
                    continue
                shape_bound = Fraction(1, 2) * pos[a] + pos[b] + tail_term
                if shape_bound <= best:
                    break
                # exact DP for shape (a, b)
                coords = list(range(b + 1, N + 1))
                slots = _slot_value_list(p, a, b, len(coords))
                cells_used += len(coords) * max(1, len(slots))
                if cells_used > cell_budget:
                    raise SizeError("structured dp expansion exceeded its cell budget; "
                                    "tighten the vector or raise the budget")
                # slot * value carries denominator denom^2 after scaling
                denom = _common_denom(slots, sv[b + 1:N + 1])
                slot_scaled = [int(x * denom) for x in slots]
                val_scaled = [int(sv[c] * denom) for c in coords]
                blk_int, M_final, _ = _block_max_int(slot_scaled, val_scaled)
                blk = Fraction(blk_int, denom * denom)
                value = Fraction(1, 2) * sv[a] + sv[b] + blk
                if value > best:
                    best = value
                    best_wit = {"kind": "shape", "a": a, "b": b, "sigma": sigma,
                                "block_value": blk}
    if want_witness and best_wit.get("kind") == "shape" and "block_value" in best_wit:
        a, b, sigma = best_wit["a"], best_wit["b"], best_wit["sigma"]
        sv = [sigma * x for x in vals]
        coords = list(range(b + 1, N + 1))
        slots = _slot_value_list(p, a, b, len(coords))
        denom = _common_denom(slots, sv[b + 1:N + 1])
        slot_scaled = [int(x * denom) for x in slots]
        val_scaled = [int(sv[c] * denom) for c in coords]
        _, M_final, table = _block_max_int(slot_scaled, val_scaled, want_table=True)
        assignment = _backtrack_assignment(slot_scaled, val_scaled, M_final, table, b + 1)
        best_wit = dict(best_wit)
        best_wit["assignment_spans"] = _spans_from_assignment(assignment, slots)
    return best, best_wit


def max_over_functionals(layout: EltonLayout, v, method: str = "structured_dp"):
    if method == "structured_dp":
        return structured_dp(layout, v)
    if method == "brute_miniature":
        return brute_miniature(layout, v)
    raise DomainError(f"unknown method {method!r}")


def layout_norm(layout: EltonLayout, v, method: str = "structured_dp") -> Fraction:
    """Instance norm: sup term joined with the family maximum."""
    fam, _ = max_over_functionals(layout, v, method)
    return max(v.sup_norm(), fam)


# ------------------------------------------------------------- certificates

def k_lower_certificate(p: EltonParams) -> dict:
    """Certified ratio ||companion|| / ||vector|| for the standard pair.

    Within the layout cap the exact family DP runs on both vectors and the
    case bounds cross-check the denominator. Beyond the cap the certificate
    is symbolic: the canonical pairing gives the numerator lower bound 5/4
    and the case-bound maximum caps the denominator.
    """
    check = validate_params(p)
    if not check["ok"]:
        raise DomainError("; ".join(check["failures"]))
    bounds = case_bounds(p)
    n_slots = (p.n1 + p.n2) * 2 ** (p.K * p.m2 - 1)
    universe = n_slots + 2
    caps = load_caps()
    out = {
        "params": p,
        "universe": universe,
        "case_bounds": bounds,
        "ratio_case": Fraction(5, 4) / bounds["max"],
    }
    if universe <= caps.layout_universe:
        layout = build_layout(p)
        triple = build_vectors(layout, "standard")
        pairing_plus = triple.functional.pair_layout_vector(layout, triple.plus)
        pairing_minus = triple.functional.pair_layout_vector(layout, triple.minus)
        num, num_wit = max_over_functionals(layout, triple.plus)
        den, den_wit = max_over_functionals(layout, triple.minus)
        norm_plus = max(triple.plus.sup_norm(), num)
        if den > bounds["max"]:
            raise AssertionError("family dp exceeded the case bound; bounds unsound")
        norm_minus_upper = min(bounds["max"], max(triple.minus.sup_norm(), den))
        out.update({
            "verification": "dp",
            "pairing_plus": pairing_plus,
            "pairing_minus": pairing_minus,
            "norm_plus_lower": norm_plus,
            "norm_minus_upper": norm_minus_upper,
            "ratio_exact": norm_plus / max(triple.minus.sup_norm(), den),
            "ratio_lower": norm_plus / norm_minus_upper,
            "witness_plus": num_wit,
            "witness_minus": den_wit,
        })
    else:
        out.update({
            "verification": "symbolic",
            "pairing_plus": Fraction(5, 4),
            "pairing_minus": Fraction(1),
            "norm_plus_lower": Fraction(5, 4),
            "norm_minus_upper": bounds["max"],
            "ratio_lower": Fraction(5, 4) / bounds["max"],
        })
    return out


def quasi_certificate(p: EltonParams, alpha: Fraction) -> dict:
    """Certified ratio for the quasi variant plus the threshold diagnosis.

    Numerator pairing: 1 + 1 + 2/3 = 8/3 against the canonical functional.
    Denominator: derived case bounds (or exact DP within cap). The companion
    equals the level-2/3 threshold projection exactly when alpha < 2/3;
    at alpha = 2/3 the dropped coordinate ties into the threshold set.
    """
    check = validate_params(p)
    if not check["ok"]:
        raise DomainError("; ".join(check["failures"]))
    if not (0 < alpha <= 1):
        raise DomainError(f"alpha must be in (0, 1], got {alpha}")
    qb = quasi_case_bounds(p, alpha)
    eps_instance = Fraction(p.n1, 2 * p.n2) + TWO ** (-p.K)
    target = Fraction(8, 7) - eps_instance
    n_slots = (p.n1 + p.n2) * 2 ** (p.K * p.m2 - 1)
    universe = n_slots + 2
    caps = load_caps()
    tie = alpha == Fraction(2, 3)
    out = {
        "params": p,
        "alpha": alpha,
        "universe": universe,
        "quasi_case_bounds": qb,
        "eps_instance": eps_instance,
        "target": target,
        "threshold_projection_is_plus_vector": alpha < Fraction(2, 3),
        "threshold_tie_at_alpha": tie,
    }
    if universe <= caps.layout_universe:
        layout = build_layout(p)
        triple = build_vectors(layout, "quasi", alpha)
        num, _ = max_over_functionals(layout, triple.plus)
        den, _ = max_over_functionals(layout, triple.minus)
        norm_plus = max(triple.plus.sup_norm(), num)
        if den > qb["max"]:
            raise AssertionError("quasi dp exceeded the derived case bound")
        norm_minus_upper = min(qb["max"], max(triple.minus.sup_norm(), den))
        out.update({
            "verification": "dp",
            "norm_plus_lower": norm_plus,
            "norm_minus_upper": norm_minus_upper,
            "ratio_lower": norm_plus / norm_minus_upper,
        })
    else:
        num = Fraction(8, 3)
        out.update({
            "verification": "symbolic",
            "norm_plus_lower": num,
            "norm_minus_upper": qb["max"],
            "ratio_lower": num / qb["max"],
        })
    out["passes_target"] = out["ratio_lower"] > target
    return out


def elton_ladder() -> list[dict]:
    """Shipped parameter ladder with monotone certified ratios."""
    rungs = [
        EltonParams(1, 8, 4, Fraction(13, 100)),
        EltonParams(1, 16, 6, Fraction(1, 20)),
        EltonParams(1, 64, 8, Fraction(1, 50)),
    ]
    return [k_lower_certificate(p) for p in rungs]
