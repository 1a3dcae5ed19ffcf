"""Projection-constant estimation over exact coefficient lattices and LPs.

Every mode is a supremum of ||numerator|| / ||a|| over a mode-specific
feasible set of pairs (a, E):

  K        sup|a_i| <= 1,  E inside the delta-threshold set of a
  Kprime   ||a|| <= 1,     E inside the delta-threshold set of a
  L        all support coefficients >= delta in size, sup <= 1, E free
  Lprime   same support condition, ||a|| <= 1, E free
  A        feasibility delta * sum_{i in E} |a_i| <= ||P_E a||, E free
  C_uncond no side condition, E free
  quasi_greedy  E is a full threshold set {i: |a_i| >= v}
  BOU      oscillation(a, E) <= D and E splits into blocks of osc <= d
  Kstar    point clouds: numerator is one point row on E, E inside the
           row's delta-large coordinates; denominator is the cloud sup
           (full-support evaluation, no projections)
  schreier E restricted to the order-n Schreier family

The grid method reports a certified lower bound: the exact maximum of the
ratio over the lattice {0, +-step, ..., +-1}^dim intersected with the mode's
constraints, witness attached. The fractional_lp method solves each
(E, sign pattern, numerator piece) cell exactly by Dinkelbach iteration on a
parametric LP whose epigraph variable carries the max-of-linear denominator,
so value_upper == value_lower on convergence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .caps import check_cap, load_caps
from .errors import DomainError
from .norms import Functional, NormInstance, SparseVector, eval_norm
from .schreier import SchreierDecomposition, oscillation, schreier_decompose, schreier_member

MODES = ("K", "Kprime", "L", "Lprime", "A", "C_uncond",
         "quasi_greedy", "BOU", "Kstar", "schreier")
GRID_ONLY = ("quasi_greedy", "BOU")


@dataclass(frozen=True)
class ConstantQuery:
    mode: str
    delta: Fraction | None = None
    D: Fraction | None = None
    d: Fraction | None = None
    order: int | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise DomainError(f"unknown mode {self.mode!r}")
        if self.mode in ("K", "Kprime", "L", "Lprime", "A", "Kstar"):
            if self.delta is None:
                raise DomainError(f"mode {self.mode} needs delta")
            if not (0 < self.delta <= 1):
                raise DomainError(f"delta must be in (0, 1], got {self.delta}")
        if self.mode == "BOU":
            if self.D is None or self.d is None:
                raise DomainError("mode BOU needs D and d")
            if self.D < 1 or self.d < 1:
                raise DomainError("BOU needs D >= 1 and d >= 1")
        if self.mode == "schreier":
            if self.order not in (1, 2):
                raise DomainError("mode schreier needs order 1 or 2")


@dataclass
class ConstantWitness:
    a: SparseVector
    E: tuple[int, ...]
    numerator: Fraction
    denominator: Fraction
    threshold: Fraction | None = None          # quasi_greedy
    decomposition: SchreierDecomposition | None = None  # BOU
    point_index: int | None = None             # Kstar
    piece: tuple[tuple[int, Fraction], ...] | None = None  # lp numerator form


@dataclass
class ConstantReport:
    mode: str
    method: str
    value_lower: Fraction
    value_upper: Fraction | None
    witness: ConstantWitness | None
    details: dict = field(default_factory=dict)


def _subsets(base: tuple[int, ...]):
    # ascending bitmask order over the given base tuple
    n = len(base)
    for mask in range(1 << n):
        yield tuple(base[i] for i in range(n) if mask >> i & 1)


def _kstar_denominator(inst: NormInstance, a: SparseVector) -> Fraction:
    return max((f.apply(a) for f in inst.functionals), default=Fraction(0))


def _grid_points(dim: int, step: Fraction):
    if step <= 0 or step > 1 or (1 / step).denominator != 1:
        raise DomainError(f"grid step must be 1/s for integer s >= 1, got {step}")
    s = int(1 / step)
    values = [Fraction(t, s) for t in range(-s, s + 1)]
    for combo in itertools.product(values, repeat=dim):
        if any(combo):
            yield SparseVector.from_pairs(
                (i + 1, v) for i, v in enumerate(combo) if v != 0)


def _feasible_pairs_grid(inst: NormInstance, query: ConstantQuery, a: SparseVector):
    """Yield per-mode feasible (E, extras) for a fixed lattice point."""
    supp = a.support
    mode = query.mode
    if mode == "C_uncond":
        for E in _subsets(supp):
            yield E, {}
    elif mode in ("K", "Kprime"):
        thr = tuple(i for i in supp if abs(a.get(i)) >= query.delta)
        for E in _subsets(thr):
            yield E, {}
    elif mode in ("L", "Lprime"):
        if all(abs(v) >= query.delta for _, v in a.entries):
            for E in _subsets(supp):
                yield E, {}
    elif mode == "A":
        for E in _subsets(supp):
            yield E, {}
    elif mode == "quasi_greedy":
        levels = sorted({abs(v) for _, v in a.entries}, reverse=True)
        for v in levels:
            E = tuple(i for i in range(1, inst.dim + 1) if abs(a.get(i)) >= v)
            yield E, {"threshold": v}
    elif mode == "BOU":
        for E in _subsets(supp):
            if not E:
                continue
            if oscillation(a, E) > query.D:
                continue
            dec = schreier_decompose(a, E, query.d)
            if dec is None:
                continue
            yield E, {"decomposition": dec}
    elif mode == "schreier":
        for E in _subsets(supp):
            if schreier_member(query.order, E):
                yield E, {}
    elif mode == "Kstar":
        for t, f in enumerate(inst.functionals):
            thr = tuple(i for i, c in f.entries if abs(c) >= query.delta and a.get(i) != 0)
            # all subsets of thr are allowed and the numerator is linear in E,
            # so the best E is the positive part; keep it single-shot.
            E = tuple(i for i in thr if f.get(i) * a.get(i) > 0)
            yield E, {"point_index": t, "kstar_f": f}


def _grid_search(inst: NormInstance, query: ConstantQuery, step: Fraction) -> ConstantReport:
    caps = load_caps()
    check_cap(inst.dim, caps.grid_dim, "grid dim")
    best: Fraction | None = None
    best_wit: ConstantWitness | None = None
    points = 0
    for a in _grid_points(inst.dim, step):
        points += 1
        # lattice points satisfy sup <= 1 by construction (K and L need it)
        den = _kstar_denominator(inst, a) if query.mode == "Kstar" else eval_norm(inst, a)
        if den == 0:
            continue
        if query.mode in ("Kprime", "Lprime") and den > 1:
            continue
        for E, extras in _feasible_pairs_grid(inst, query, a):
            if query.mode == "Kstar":
                num = extras["kstar_f"].apply(a.restrict(E))
            else:
                num = eval_norm(inst, a.restrict(E))
            if query.mode == "A" and query.delta * sum(
                    (abs(a.get(i)) for i in E), Fraction(0)) > num:
                continue
            ratio = num / den
            if best is None or ratio > best:
                best = ratio
                best_wit = ConstantWitness(
                    a=a, E=E, numerator=num, denominator=den,
                    threshold=extras.get("threshold"),
                    decomposition=extras.get("decomposition"),
                    point_index=extras.get("point_index"),
                )
    if best is None:
        best = Fraction(0)
    return ConstantReport(
        mode=query.mode, method=f"grid(step={step})",
        value_lower=best, value_upper=None, witness=best_wit,
        details={"lattice_points": points},
    )


# ---------------------------------------------------------------- LP method

def _linear_pieces(inst: NormInstance) -> list[dict[int, Fraction]]:
    """All linear forms whose max is the instance norm (negations included)."""
    pieces: dict[tuple, dict[int, Fraction]] = {}

    def add(form: dict[int, Fraction]):
        form = {i: c for i, c in form.items() if c != 0}
        key = tuple(sorted(form.items()))
        if key and key not in pieces:
            pieces[key] = form

    for f in inst.functionals:
        if inst.projection_class == "initial_segments":
            for t in range(1, inst.dim + 1):
                add({i: c for i, c in f.entries if i <= t})
        elif inst.projection_class == "intervals":
            for s in range(1, inst.dim + 1):
                for t in range(s, inst.dim + 1):
                    add({i: c for i, c in f.entries if s <= i <= t})
        else:
            for E in _subsets(f.support):
                keep = set(E)
                add({i: c for i, c in f.entries if i in keep})
    if inst.include_sup:
        for i in range(1, inst.dim + 1):
            add({i: Fraction(1)})
            add({i: Fraction(-1)})
    return list(pieces.values())


def _restrict_form(form: dict[int, Fraction], E) -> dict[int, Fraction]:
    keep = set(E)
    return {i: c for i, c in form.items() if i in keep}


def _dedupe_forms(forms) -> list[dict[int, Fraction]]:
    out: dict[tuple, dict[int, Fraction]] = {}
    for form in forms:
        key = tuple(sorted(form.items()))
        if key and key not in out:
            out[key] = form
    return list(out.values())


class _LPSolver:
    """Dinkelbach iterations over sympy's exact simplex."""

    def __init__(self, dim: int):
        import sympy
        from sympy.solvers.simplex import lpmax
        self.sympy = sympy
        self.lpmax = lpmax
        self.dim = dim
        self.syms = sympy.symbols(f"a1:{dim + 1}", real=True)
        self.z = sympy.Symbol("z", real=True)

    def expr(self, form: dict[int, Fraction]):
        S = self.sympy
        total = S.Integer(0)
        for i, c in form.items():
            total += S.Rational(c.numerator, c.denominator) * self.syms[i - 1]
        return total

    def rat(self, x: Fraction):
        return self.sympy.Rational(x.numerator, x.denominator)

    def to_fraction(self, val) -> Fraction:
        r = self.sympy.Rational(val)
        return Fraction(int(r.p), int(r.q))

    def solve(self, objective, constraints):
        from sympy.solvers.simplex import InfeasibleLPError, UnboundedLPError
        try:
            val, point = self.lpmax(objective, constraints)
        except (InfeasibleLPError, UnboundedLPError):
            return None
        return self.to_fraction(val), {s: self.to_fraction(v) for s, v in point.items()}

    def dinkelbach(self, num_form: dict[int, Fraction],
                   den_forms: list[dict[int, Fraction]],
                   extra_constraints) -> tuple[Fraction, dict[int, Fraction]] | None:
        """max num / (max den_forms) over the constraint polytope, exact."""
        num_expr = self.expr(num_form)
        den_exprs = [self.expr(f) for f in den_forms]
        base = list(extra_constraints)
        for e in den_exprs:
            base.append(self.z >= e)
        # keep the polytope bounded in z (pieces are bounded on the box)
        zbound = 1 + max(
            (sum((abs(c) for c in f.values()), Fraction(0)) for f in den_forms),
            default=Fraction(0))
        base.append(self.z <= self.rat(zbound))
        t = Fraction(0)
        best_point: dict[int, Fraction] | None = None
        for _ in range(200):
            objective = num_expr - self.rat(t) * self.z
            res = self.solve(objective, base)
            if res is None:
                return None
            val, point = res
            if val <= 0:
                if best_point is None:
                    return None
                return t, best_point
            a_point = {i: point.get(self.syms[i - 1], Fraction(0)) for i in range(1, self.dim + 1)}
            num_val = sum((c * a_point[i] for i, c in num_form.items()), Fraction(0))
            den_val = max(
                (sum((c * a_point[i] for i, c in f.items()), Fraction(0)) for f in den_forms),
                default=Fraction(0))
            if den_val <= 0:
                raise DomainError("denominator degenerates on the feasible set; "
                                  "instance norm is not definite here")
            t = num_val / den_val
            best_point = a_point
        raise AssertionError("dinkelbach failed to converge")


def _lp_cells(inst: NormInstance, query: ConstantQuery, pieces):
    """Yield (E, constraints-builder data, numerator forms, mode extras)."""
    dim = inst.dim
    universe = tuple(range(1, dim + 1))
    mode = query.mode
    if mode in ("C_uncond", "schreier"):
        for E in _subsets(universe):
            if not E:
                continue
            if mode == "schreier" and not schreier_member(query.order, E):
                continue
            nums = _dedupe_forms(_restrict_form(p, E) for p in pieces)
            yield E, {"signs": None, "support": None}, nums, {}
    elif mode in ("K", "Kprime"):
        for E in _subsets(universe):
            if not E:
                continue
            nums = _dedupe_forms(_restrict_form(p, E) for p in pieces)
            for signs in itertools.product((1, -1), repeat=len(E)):
                yield E, {"signs": dict(zip(E, signs)), "support": None}, nums, {}
    elif mode in ("L", "Lprime"):
        for S in _subsets(universe):
            if not S:
                continue
            for E in _subsets(S):
                if not E:
                    continue
                nums = _dedupe_forms(_restrict_form(p, E) for p in pieces)
                for signs in itertools.product((1, -1), repeat=len(S)):
                    yield E, {"signs": dict(zip(S, signs)), "support": S}, nums, {}
    elif mode == "A":
        for E in _subsets(universe):
            if not E:
                continue
            nums = _dedupe_forms(_restrict_form(p, E) for p in pieces)
            for signs in itertools.product((1, -1), repeat=len(E)):
                for num in nums:
                    yield E, {"signs": dict(zip(E, signs)), "support": None}, [num], {
                        "a_feasibility": num}
    elif mode == "Kstar":
        for t, f in enumerate(inst.functionals):
            thr = tuple(i for i, c in f.entries if abs(c) >= query.delta)
            for E in _subsets(thr):
                if not E:
                    continue
                num = _restrict_form(dict(f.entries), E)
                if not num:
                    continue
                yield E, {"signs": None, "support": None}, [num], {"point_index": t}
    else:
        raise DomainError(f"mode {mode} has no LP method (grid only)")


def _lp_search(inst: NormInstance, query: ConstantQuery) -> ConstantReport:
    caps = load_caps()
    check_cap(inst.dim, caps.lp_dim, "lp dim")
    if query.mode in GRID_ONLY:
        raise DomainError(f"mode {query.mode} supports the grid method only")
    solver = _LPSolver(inst.dim)
    pieces = _linear_pieces(inst)
    den_forms = pieces
    if query.mode == "Kstar":
        den_forms = _dedupe_forms(dict(f.entries) for f in inst.functionals)
    best: Fraction | None = None
    best_wit: ConstantWitness | None = None
    cells = 0
    value_form = query.mode in ("Kprime", "Lprime")
    for E, shape, nums, extras in _lp_cells(inst, query, pieces):
        for num_form in nums:
            cells += 1
            constraints = []
            signs = shape["signs"]
            support = shape["support"]
            if support is not None:
                for i in range(1, inst.dim + 1):
                    if i not in support:
                        constraints.append(solver.syms[i - 1] >= 0)
                        constraints.append(solver.syms[i - 1] <= 0)
            if signs is not None:
                lo = query.delta if query.mode in ("K", "Kprime", "L", "Lprime") else Fraction(0)
                for i, s in signs.items():
                    expr = s * solver.syms[i - 1]
                    constraints.append(expr >= solver.rat(lo))
            if "a_feasibility" in extras:
                # delta * sum_E |a_i| <= piece(P_E a), with |a_i| fixed by signs
                total = sum((signs[i] * solver.syms[i - 1] for i in E), solver.sympy.Integer(0))
                constraints.append(
                    solver.expr(extras["a_feasibility"]) >= solver.rat(query.delta) * total)
            if value_form:
                # ||a|| <= 1 turns the ratio into a plain LP
                for f in den_forms:
                    constraints.append(solver.expr(f) <= 1)
                res = solver.solve(solver.expr(num_form), constraints)
                if res is None:
                    continue
                val, point = res
                ratio = val
                a_point = {i: point.get(solver.syms[i - 1], Fraction(0))
                           for i in range(1, inst.dim + 1)}
            else:
                for i in range(1, inst.dim + 1):
                    constraints.append(solver.syms[i - 1] <= 1)
                    constraints.append(solver.syms[i - 1] >= -1)
                out = solver.dinkelbach(num_form, den_forms, constraints)
                if out is None:
                    continue
                ratio, a_point = out
            if ratio <= 0:
                continue
            if best is None or ratio > best:
                a_vec = SparseVector.from_pairs(
                    (i, v) for i, v in a_point.items() if v != 0)
                den = (_kstar_denominator(inst, a_vec) if query.mode == "Kstar"
                       else eval_norm(inst, a_vec))
                best = ratio
                best_wit = ConstantWitness(
                    a=a_vec, E=E,
                    numerator=sum((c * a_point.get(i, Fraction(0))
                                   for i, c in num_form.items()), Fraction(0)),
                    denominator=den,
                    point_index=extras.get("point_index"),
                    piece=tuple(sorted(num_form.items())),
                )
    if best is None:
        best = Fraction(0)
    return ConstantReport(
        mode=query.mode, method="fractional_lp",
        value_lower=best, value_upper=best, witness=best_wit,
        details={"cells": cells, "converged": True},
    )


def compute_constant(inst: NormInstance, query: ConstantQuery,
                     method: str = "grid", step: Fraction = Fraction(1, 8)) -> ConstantReport:
    if method == "grid":
        return _grid_search(inst, query, step)
    if method == "fractional_lp":
        return _lp_search(inst, query)
    raise DomainError(f"unknown method {method!r}")


def verify_witness(inst: NormInstance, query: ConstantQuery, wit: ConstantWitness) -> Fraction:
    """Recompute the witness ratio from scratch, checking mode feasibility."""
    a, E = wit.a, wit.E
    mode = query.mode
    if mode in ("K", "L") and a.sup_norm() > 1:
        raise DomainError("witness violates sup bound")
    if mode in ("K", "Kprime"):
        if any(abs(a.get(i)) < query.delta for i in E):
            raise DomainError("witness E leaves the threshold set")
    if mode in ("L", "Lprime"):
        if any(abs(v) < query.delta for _, v in a.entries):
            raise DomainError("witness support dips under delta")
    if mode == "quasi_greedy":
        v = wit.threshold
        expect = tuple(i for i in range(1, inst.dim + 1) if abs(a.get(i)) >= v)
        if tuple(sorted(E)) != expect:
            raise DomainError("witness E is not the threshold set")
    if mode == "BOU":
        if oscillation(a, E) > query.D:
            raise DomainError("witness oscillation exceeds D")
        if schreier_decompose(a, E, query.d) is None:
            raise DomainError("witness has no admissible block split")
    if mode == "schreier" and not schreier_member(query.order, E):
        raise DomainError("witness E is not Schreier-admissible")
    if mode == "Kstar":
        f = inst.functionals[wit.point_index]
        if any(abs(f.get(i)) < query.delta for i in E):
            raise DomainError("witness E leaves the point's delta-large set")
        num = f.apply(a.restrict(E))
        den = _kstar_denominator(inst, a)
    else:
        num = eval_norm(inst, a.restrict(E))
        den = eval_norm(inst, a)
    if mode == "A":
        total = sum((abs(a.get(i)) for i in E), Fraction(0))
        if query.delta * total > num:
            raise DomainError("witness fails the A-feasibility inequality")
    if mode in ("Kprime", "Lprime") and den > 1:
        raise DomainError("witness norm exceeds 1")
    if den == 0:
        raise DomainError("witness denominator vanishes")
    return num / den
