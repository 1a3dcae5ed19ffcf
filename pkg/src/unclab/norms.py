"""Finite-dimensional norms given by a functional family and a projection class.

An instance on coordinates 1..dim evaluates

    ||v|| = max( sup_i |v_i|  [when include_sup],
                 max_{f in family} max_{E in class} f(P_E v) )

where the family is closed under negation (closure taken at build time) and
the projection class is one of initial_segments, intervals, all_subsets.
Everything is exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .caps import check_cap, load_caps
from .errors import DomainError, SizeError

PROJECTION_CLASSES = ("initial_segments", "intervals", "all_subsets")


def _canon_entries(entries) -> tuple[tuple[int, Fraction], ...]:
    seen: dict[int, Fraction] = {}
    for i, val in entries:
        if i < 1:
            raise DomainError(f"coordinate {i} must be >= 1")
        if i in seen:
            raise DomainError(f"duplicate coordinate {i}")
        v = Fraction(val)
        if v != 0:
            seen[i] = v
    return tuple(sorted(seen.items()))


@dataclass(frozen=True)
class SparseVector:
    entries: tuple[tuple[int, Fraction], ...]

    @staticmethod
    def from_pairs(pairs) -> "SparseVector":
        return SparseVector(_canon_entries(pairs))

    @staticmethod
    def zero() -> "SparseVector":
        return SparseVector(())

    def get(self, i: int) -> Fraction:
        for j, v in self.entries:
            if j == i:
                return v
        return Fraction(0)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.entries)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def sup_norm(self) -> Fraction:
        return max((abs(v) for _, v in self.entries), default=Fraction(0))

    def restrict(self, keep) -> "SparseVector":
        keep = set(keep)
        return SparseVector(tuple((i, v) for i, v in self.entries if i in keep))

    def scale(self, c) -> "SparseVector":
        c = Fraction(c)
        if c == 0:
            return SparseVector.zero()
        return SparseVector(tuple((i, c * v) for i, v in self.entries))

    def add(self, other: "SparseVector") -> "SparseVector":
        acc = self.as_dict()
        for i, v in other.entries:
            acc[i] = acc.get(i, Fraction(0)) + v
        return SparseVector(tuple(sorted((i, v) for i, v in acc.items() if v != 0)))


@dataclass(frozen=True)
class Functional:
    entries: tuple[tuple[int, Fraction], ...]

    @staticmethod
    def from_pairs(pairs) -> "Functional":
        return Functional(_canon_entries(pairs))

    def get(self, i: int) -> Fraction:
        for j, v in self.entries:
            if j == i:
                return v
        return Fraction(0)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    def negate(self) -> "Functional":
        return Functional(tuple((i, -v) for i, v in self.entries))

    def apply(self, v: SparseVector) -> Fraction:
        vals = v.as_dict()
        return sum((c * vals[i] for i, c in self.entries if i in vals), Fraction(0))

    def one_norm(self) -> Fraction:
        return sum((abs(c) for _, c in self.entries), Fraction(0))


def projected(v: SparseVector, E) -> SparseVector:
    return v.restrict(E)


@dataclass(frozen=True)
class NormInstance:
    dim: int
    functionals: tuple[Functional, ...]
    projection_class: str = "initial_segments"
    include_sup: bool = True
    base_count: int = field(default=0, compare=False)

    @staticmethod
    def build(dim: int, functionals, projection_class: str = "initial_segments",
              include_sup: bool = True) -> "NormInstance":
        if dim < 1:
            raise DomainError(f"dim must be >= 1, got {dim}")
        if projection_class not in PROJECTION_CLASSES:
            raise DomainError(f"unknown projection class {projection_class!r}")
        if projection_class == "all_subsets":
            check_cap(dim, load_caps().all_subsets_dim, "all_subsets dim")
        fams = list(functionals)
        for f in fams:
            for i, _ in f.entries:
                if i > dim:
                    raise DomainError(f"functional touches coordinate {i} > dim {dim}")
        present = {f.entries for f in fams}
        closed = list(fams)
        for f in fams:
            neg = f.negate()
            if neg.entries not in present:
                closed.append(neg)
                present.add(neg.entries)
        return NormInstance(dim, tuple(closed), projection_class, include_sup, len(fams))

    def _check_vector(self, v: SparseVector) -> None:
        for i, _ in v.entries:
            if i > self.dim:
                raise DomainError(f"vector touches coordinate {i} outside universe 1..{self.dim}")


def _dense(v: SparseVector, dim: int) -> list[Fraction]:
    out = [Fraction(0)] * (dim + 1)
    for i, val in v.entries:
        out[i] = val
    return out


def _functional_best(f: Functional, dense: list[Fraction], dim: int, projection_class: str) -> Fraction:
    terms = [Fraction(0)] * (dim + 1)
    for i, c in f.entries:
        terms[i] = c * dense[i]
    if projection_class == "all_subsets":
        return sum((t for t in terms if t > 0), Fraction(0))
    best = Fraction(0)
    if projection_class == "initial_segments":
        run = Fraction(0)
        for i in range(1, dim + 1):
            run += terms[i]
            if run > best:
                best = run
        return best
    # intervals: max over s <= t of sum(terms[s..t]), empty allowed
    run = Fraction(0)
    low = Fraction(0)
    for i in range(1, dim + 1):
        run += terms[i]
        if run - low > best:
            best = run - low
        if run < low:
            low = run
    return best


def eval_norm(inst: NormInstance, v: SparseVector) -> Fraction:
    inst._check_vector(v)
    best = v.sup_norm() if inst.include_sup else Fraction(0)
    dense = _dense(v, inst.dim)
    for f in inst.functionals:
        val = _functional_best(f, dense, inst.dim, inst.projection_class)
        if val > best:
            best = val
    return best


def _enumerate_projections(inst: NormInstance):
    if inst.projection_class == "initial_segments":
        for t in range(0, inst.dim + 1):
            yield tuple(range(1, t + 1))
    elif inst.projection_class == "intervals":
        yield ()
        for s in range(1, inst.dim + 1):
            for t in range(s, inst.dim + 1):
                yield tuple(range(s, t + 1))
    else:
        for mask in range(1 << inst.dim):
            yield tuple(i + 1 for i in range(inst.dim) if mask >> i & 1)


@dataclass(frozen=True)
class Certificate:
    value: Fraction
    kind: str                      # "functional" | "sup" | "zero"
    functional_index: int | None = None
    projection: tuple[int, ...] | None = None
    coordinate: int | None = None


def dual_certificate(inst: NormInstance, v: SparseVector) -> Certificate:
    """First (functional, projection) pair attaining the norm of v.

    Enumeration order: functionals in build order (given family then appended
    negations), projections canonically (segments by right end, intervals by
    (start, end), subsets by ascending bitmask). The sup term is consulted
    only when no functional attains the norm. Zero vector gets a zero
    certificate with no witness.
    """
    inst._check_vector(v)
    if v.is_zero():
        return Certificate(Fraction(0), "zero")
    norm = eval_norm(inst, v)
    dense = _dense(v, inst.dim)
    for fi, f in enumerate(inst.functionals):
        if _functional_best(f, dense, inst.dim, inst.projection_class) != norm:
            continue
        if inst.projection_class == "all_subsets":
            first = tuple(i for i, c in f.entries if c * dense[i] > 0)
            return Certificate(norm, "functional", fi, first)
        for E in _enumerate_projections(inst):
            if f.apply(v.restrict(E)) == norm:
                return Certificate(norm, "functional", fi, E)
        raise AssertionError("functional max not attained by any projection")
    for i, val in v.entries:
        if abs(val) == norm:
            return Certificate(norm, "sup", coordinate=i)
    raise AssertionError("norm not attained")


def build_standard(kind: str, n: int, points: list[list[Fraction]] | None = None) -> NormInstance:
    """Stock instances: l1, linf, summing, pointcloud.

    l1: all sign-pattern functionals over all_subsets (the fully
    unconditional reference). linf: coordinate functionals. summing: partial
    sum functionals over initial segments (the classic conditional example).
    pointcloud: one functional per point row; the instance norm carries no
    sup term so that full-support evaluation is the sup over the cloud.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if kind == "l1":
        if n > 10:
            raise SizeError("l1 builder capped at n <= 10 (2^n functionals)")
        fams = []
        for mask in range(1 << n):
            fams.append(Functional.from_pairs(
                (i + 1, Fraction(1) if mask >> i & 1 else Fraction(-1)) for i in range(n)))
        return NormInstance.build(n, fams, "all_subsets", True)
    if kind == "linf":
        fams = [Functional.from_pairs([(i, Fraction(1))]) for i in range(1, n + 1)]
        return NormInstance.build(n, fams, "initial_segments", True)
    if kind == "summing":
        fams = [Functional.from_pairs((i, Fraction(1)) for i in range(1, m + 1))
                for m in range(1, n + 1)]
        return NormInstance.build(n, fams, "initial_segments", True)
    if kind == "pointcloud":
        if not points:
            raise DomainError("pointcloud needs point rows")
        fams = []
        for row in points:
            if len(row) != n:
                raise DomainError("point row length != n")
            fams.append(Functional.from_pairs(
                (i + 1, Fraction(c)) for i, c in enumerate(row)))
        return NormInstance.build(n, fams, "initial_segments", False)
    raise DomainError(f"unknown standard instance kind {kind!r}")
