"""JSON document loading and canonical dumping.

Canonical emission: sorted keys, two-space indent, rationals as "p/q"
strings in lowest terms with explicit denominator, sets as sorted lists,
trailing newline. Byte-identical across runs for identical inputs.
"""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction
from pathlib import Path

from .elton import EltonParams
from .errors import DomainError, MissingInputError, SchemaError
from .norms import Functional, NormInstance, SparseVector
from .ramsey import (ColourFamily, MatchingWitness, PrefixContinuousMap,
                     make_pattern)
from .rationals import format_rational, parse_rational
from .resolutions import Resolution

_CLASS_ALIASES = {
    "initial": "initial_segments",
    "initial_segments": "initial_segments",
    "interval": "intervals",
    "intervals": "intervals",
    "all": "all_subsets",
    "all_subsets": "all_subsets",
}


def to_jsonable(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, str):
        return obj
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [to_jsonable(x) for x in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if isinstance(obj, float):
        raise DomainError("refusing to serialize a float; use exact rationals")
    return str(obj)


def dump_json(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2,
                      ensure_ascii=False) + "\n"


def read_json_file(path) -> object:
    p = Path(path)
    if not p.exists():
        raise MissingInputError(f"input file not found: {p}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise SchemaError(f"{p}: not valid JSON ({e.msg} at line {e.lineno})")


def _require(data: dict, key: str, where: str):
    if not isinstance(data, dict):
        raise SchemaError(f"{where}: expected an object, got {type(data).__name__}")
    if key not in data:
        raise SchemaError(f"{where}: missing key {key!r}")
    return data[key]


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{where}: expected an integer, got {value!r}")
    return value


def _as_int_list(value, where: str) -> list[int]:
    if not isinstance(value, list):
        raise SchemaError(f"{where}: expected a list")
    return [_as_int(x, where) for x in value]


def load_rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise SchemaError(f"{where}: rationals must be strings or integers")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise SchemaError(f"{where}: expected a rational, got {value!r}")


def load_resolution(data, where: str = "resolution") -> Resolution:
    k = _as_int(_require(data, "k", where), f"{where}.k")
    pattern = _as_int_list(_require(data, "pattern", where), f"{where}.pattern")
    alpha_raw = _require(data, "alpha", where)
    if not isinstance(alpha_raw, list):
        raise SchemaError(f"{where}.alpha: expected a list")
    alpha = [load_rational(x, f"{where}.alpha[{i}]") for i, x in enumerate(alpha_raw)]
    try:
        return Resolution(k, tuple(pattern), tuple(alpha))
    except DomainError as e:
        raise SchemaError(f"{where}: {e}")


def load_resolution_list(data, where: str = "family") -> list[Resolution]:
    if not isinstance(data, list) or not data:
        raise SchemaError(f"{where}: expected a nonempty list")
    return [load_resolution(x, f"{where}[{i}]") for i, x in enumerate(data)]


def load_sparse_vector(data, where: str = "vector") -> SparseVector:
    if isinstance(data, dict):
        data = _require(data, "entries", where)
    if not isinstance(data, list):
        raise SchemaError(f"{where}: expected a list of entries")
    pairs = []
    for i, item in enumerate(data):
        pairs.append((
            _as_int(_require(item, "i", f"{where}[{i}]"), f"{where}[{i}].i"),
            load_rational(_require(item, "v", f"{where}[{i}]"), f"{where}[{i}].v"),
        ))
    try:
        return SparseVector.from_pairs(pairs)
    except DomainError as e:
        raise SchemaError(f"{where}: {e}")


def load_norm_instance(data, where: str = "instance") -> NormInstance:
    dim = _as_int(_require(data, "dim", where), f"{where}.dim")
    raw_class = _require(data, "projection_class", where)
    if raw_class not in _CLASS_ALIASES:
        raise SchemaError(f"{where}.projection_class: unknown class {raw_class!r}")
    include_sup = _require(data, "include_sup", where)
    if not isinstance(include_sup, bool):
        raise SchemaError(f"{where}.include_sup: expected true or false")
    funcs_raw = _require(data, "functionals", where)
    if not isinstance(funcs_raw, list):
        raise SchemaError(f"{where}.functionals: expected a list")
    functionals = []
    for i, entries in enumerate(funcs_raw):
        if not isinstance(entries, list):
            raise SchemaError(f"{where}.functionals[{i}]: expected a list")
        pairs = []
        for j, item in enumerate(entries):
            spot = f"{where}.functionals[{i}][{j}]"
            pairs.append((
                _as_int(_require(item, "i", spot), f"{spot}.i"),
                load_rational(_require(item, "v", spot), f"{spot}.v"),
            ))
        try:
            functionals.append(Functional.from_pairs(pairs))
        except DomainError as e:
            raise SchemaError(f"{where}.functionals[{i}]: {e}")
    try:
        return NormInstance.build(
            dim=dim, functionals=tuple(functionals),
            projection_class=_CLASS_ALIASES[raw_class], include_sup=include_sup)
    except DomainError as e:
        raise SchemaError(f"{where}: {e}")


def load_elton_params(data, where: str = "params") -> EltonParams:
    try:
        return EltonParams(
            n1=_as_int(_require(data, "n1", where), f"{where}.n1"),
            n2=_as_int(_require(data, "n2", where), f"{where}.n2"),
            K=_as_int(_require(data, "K", where), f"{where}.K"),
            eps=load_rational(_require(data, "eps", where), f"{where}.eps"),
            m1=_as_int(data.get("m1", 1), f"{where}.m1"),
            m2=_as_int(data.get("m2", 2), f"{where}.m2"),
        )
    except DomainError as e:
        raise SchemaError(f"{where}: {e}")


def load_prefix_map(data, where: str = "map") -> PrefixContinuousMap:
    """One document per map: {"depth": d, "entries": [{"prefix": [...],
    "F": [[...], ...]}, ...]}. Per-entry shape (components inside the prefix
    and successive) is checked on construction."""
    depth = _as_int(_require(data, "depth", where), f"{where}.depth")
    entries_raw = _require(data, "entries", where)
    if not isinstance(entries_raw, list):
        raise SchemaError(f"{where}.entries: expected a list")
    table = {}
    for i, item in enumerate(entries_raw):
        spot = f"{where}.entries[{i}]"
        prefix = tuple(_as_int_list(_require(item, "prefix", spot), f"{spot}.prefix"))
        F_raw = _require(item, "F", spot)
        if not isinstance(F_raw, list) or not F_raw:
            raise SchemaError(f"{spot}.F: expected a nonempty list of sets")
        F = tuple(frozenset(_as_int_list(x, f"{spot}.F[{j}]"))
                  for j, x in enumerate(F_raw))
        if prefix in table:
            raise SchemaError(f"{spot}: duplicate prefix {prefix}")
        table[prefix] = F
    try:
        return PrefixContinuousMap.from_dict(depth, table)
    except DomainError as e:
        raise SchemaError(f"{where}: {e}")


def load_colour_family(data, where: str = "family") -> ColourFamily:
    k = _as_int(_require(data, "k", where), f"{where}.k")
    universe = _as_int(_require(data, "universe", where), f"{where}.universe")
    members_raw = _require(data, "members", where)
    if not isinstance(members_raw, list):
        raise SchemaError(f"{where}.members: expected a list")
    members = []
    for i, item in enumerate(members_raw):
        spot = f"{where}.members[{i}]"
        if not isinstance(item, list):
            raise SchemaError(f"{spot}: expected a list of [element, colour] pairs")
        try:
            members.append(make_pattern(
                (_as_int(_require(p, "i", f"{spot}[{j}]"), f"{spot}[{j}].i"),
                 _as_int(_require(p, "c", f"{spot}[{j}]"), f"{spot}[{j}].c"))
                for j, p in enumerate(item)))
        except DomainError as e:
            raise SchemaError(f"{spot}: {e}")
    try:
        return ColourFamily(k=k, universe=universe, members=tuple(members))
    except DomainError as e:
        raise SchemaError(f"{where}: {e}")


def load_matching_witness(data, where: str = "witness") -> MatchingWitness:
    L = tuple(_as_int_list(_require(data, "L", where), f"{where}.L"))
    M = tuple(_as_int_list(_require(data, "M", where), f"{where}.M"))
    FL_raw = _require(data, "FL", where)
    FM_raw = _require(data, "FM", where)
    if not isinstance(FL_raw, list) or not isinstance(FM_raw, list):
        raise SchemaError(f"{where}: FL and FM must be lists of sets")
    FL = tuple(frozenset(_as_int_list(x, f"{where}.FL[{i}]"))
               for i, x in enumerate(FL_raw))
    FM = tuple(frozenset(_as_int_list(x, f"{where}.FM[{i}]"))
               for i, x in enumerate(FM_raw))
    return MatchingWitness(L, M, FL, FM)
