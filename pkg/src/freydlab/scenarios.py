"""JSON scenarios, built-in scenarios, and the seeded ghost search."""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .complexes import (
    ChainComplex, ChainMap, ComplexError, cohomology_vs_R, homology, induced_homology_map,
    mapping_cone, random_complex, shift,
)
from .derived import derived_hom, ghost_group, ghost_witnesses, is_ghost, is_nullhomotopic
from .presheaf import (
    counit, flat_homology_implies_iso_probe, freyd_image, identity_in_counit_image, ladder_check,
    pair_report, pf_coequalizer, pf_tensor, random_endomorphism, random_pair_sampler,
)
from .rings import RingError, RingSpec


class ScenarioParseError(ValueError):
    exit_code = 2


class ScenarioValidationError(ValueError):
    exit_code = 3

    def __init__(self, message: str, where: dict | None = None):
        super().__init__(message)
        self.where = where or {}


class TaskError(RuntimeError):
    exit_code = 4


@dataclass
class Scenario:
    ring: RingSpec
    complexes: dict[str, ChainComplex]
    maps: dict[str, ChainMap]
    tasks: list[dict]
    raw: dict = field(repr=False, default_factory=dict)
    name: str = ""

    @property
    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.raw, sort_keys=True).encode()).hexdigest()


def _map_record(f: ChainMap, source: str, target: str) -> dict:
    return {"source": source, "target": target, "components": f.component_record()}


def parse_scenario(raw: Any, name: str = "") -> Scenario:
    if not isinstance(raw, dict):
        raise ScenarioParseError("scenario must be a JSON object")
    try:
        ring = RingSpec.parse(raw["ring"])
    except KeyError:
        raise ScenarioParseError("scenario has no 'ring'") from None
    except RingError as exc:
        raise ScenarioParseError(str(exc)) from None
    tasks = raw.get("tasks", [])
    if not isinstance(tasks, list) or not all(isinstance(t, dict) and "op" in t for t in tasks):
        raise ScenarioParseError("'tasks' must be a list of {op, args} records")

    complexes: dict[str, ChainComplex] = {}
    for cname, rec in raw.get("complexes", {}).items():
        complexes[cname] = _build_complex(ring, cname, rec, complexes, raw.get("maps", {}))
    maps: dict[str, ChainMap] = {}
    for mname, rec in raw.get("maps", {}).items():
        maps[mname] = _build_map(ring, mname, rec, complexes)
    return Scenario(ring, complexes, maps, tasks, raw, name)


def _build_complex(ring, cname, rec, complexes, map_records) -> ChainComplex:
    if not isinstance(rec, dict):
        raise ScenarioParseError(f"complex {cname!r} must be an object")
    if "shift_of" in rec:
        base = rec["shift_of"]
        if base not in complexes:
            raise ScenarioParseError(f"complex {cname!r} shifts unknown complex {base!r}")
        return shift(complexes[base], int(rec.get("by", 1)))
    if "ranks" not in rec:
        raise ScenarioParseError(f"complex {cname!r} has no 'ranks'")
    try:
        return ChainComplex.from_record(ring, rec)
    except ComplexError as exc:
        raise ScenarioValidationError(f"complex {cname!r}: {exc}", {"complex": cname, "degree": exc.degree}) from None
    except (TypeError, ValueError) as exc:
        raise ScenarioParseError(f"complex {cname!r}: {exc}") from None


def _build_map(ring, mname, rec, complexes) -> ChainMap:
    try:
        src, tgt = complexes[rec["source"]], complexes[rec["target"]]
    except (KeyError, TypeError):
        raise ScenarioParseError(f"map {mname!r} needs known 'source' and 'target'") from None
    comps = {int(k): v for k, v in rec.get("components", {}).items()}
    try:
        return ChainMap.build(src, tgt, comps)
    except ComplexError as exc:
        raise ScenarioValidationError(f"map {mname!r}: {exc}", {"map": mname, "degree": exc.degree}) from None
    except (TypeError, ValueError) as exc:
        raise ScenarioParseError(f"map {mname!r}: {exc}") from None


# --------------------------------------------------------------------------
# tasks


def _inv(M) -> dict:
    rec = M.invariants.to_record()
    rec["order"] = M.order
    return rec


def _cx(sc: Scenario, args: dict, key: str) -> ChainComplex:
    try:
        return sc.complexes[args[key]]
    except KeyError:
        raise TaskError(f"unknown or missing complex for {key!r}") from None


def _mp(sc: Scenario, args: dict, key: str = "map") -> ChainMap:
    try:
        return sc.maps[args[key]]
    except KeyError:
        raise TaskError(f"unknown or missing map for {key!r}") from None


def _task_homology(sc, a):
    return _inv(homology(_cx(sc, a, "complex"), int(a["degree"])))


def _task_cohomology(sc, a):
    return _inv(cohomology_vs_R(_cx(sc, a, "complex"), int(a["degree"])))


def _task_freyd_image(sc, a):
    G = freyd_image(_cx(sc, a, "complex"))
    return {str(i): _inv(G[i]) for i in G.support()}


def _task_derived_hom(sc, a):
    return _inv(derived_hom(_cx(sc, a, "source"), _cx(sc, a, "target"), int(a.get("degree", 0))).module)


def _task_is_nullhomotopic(sc, a):
    return is_nullhomotopic(_mp(sc, a))


def _task_is_ghost(sc, a):
    return is_ghost(_mp(sc, a))


def _task_induced_map_is_zero(sc, a):
    return induced_homology_map(_mp(sc, a), int(a["degree"])).is_zero()


def _task_ghost_group(sc, a):
    K, X = _cx(sc, a, "source"), _cx(sc, a, "target")
    G = ghost_group(K, X)
    return {"ghost_order": G.order, "invariants": G.invariants.to_record(),
            "ghost_present": not G.is_zero()}


def _task_pf_tensor(sc, a):
    return _inv(pf_tensor(_cx(sc, a, "X"), _cx(sc, a, "K")).module)


def _task_pf_coequalizer(sc, a):
    return _inv(pf_coequalizer(_cx(sc, a, "X"), _cx(sc, a, "K"), dual=bool(a.get("dual", False))).module)


def _task_counit(sc, a):
    X, K = _cx(sc, a, "X"), _cx(sc, a, "K")
    eps = counit(X, K)
    return {"counit_iso": eps.is_isomorphism(), "image_order": eps.image_order(),
            "source": _inv(eps.source.module), "target": _inv(eps.target.module)}


def _task_identity_in_image(sc, a):
    return identity_in_counit_image(_cx(sc, a, "complex"))


def _task_mapping_cone(sc, a):
    f = _mp(sc, a)
    C, _ = mapping_cone(f)
    name = a.get("name")
    if name:
        sc.complexes[name] = C
    return C.to_record()


def _task_ladder(sc, a):
    _, tri = mapping_cone(_mp(sc, a))
    rep = ladder_check(tri, _cx(sc, a, "X"))
    rec = rep.to_record()
    rec["failures"] = rep.failures
    return rec


def _task_pair_report(sc, a):
    f = sc.maps[a["map"]] if a.get("map") else None
    return pair_report(_cx(sc, a, "X"), _cx(sc, a, "K"), a.get("pair_id", 0), f)


def _task_flat_probe(sc, a):
    sampler = random_pair_sampler(sc.ring, a.get("seed", 0), int(a.get("max_length", 3)), int(a.get("max_rank", 2)))
    return flat_homology_implies_iso_probe(sc.ring, sampler, int(a.get("trials", 50))).to_record()


TASKS: dict[str, Callable[[Scenario, dict], Any]] = {
    "homology": _task_homology,
    "cohomology": _task_cohomology,
    "freyd_image": _task_freyd_image,
    "derived_hom": _task_derived_hom,
    "is_nullhomotopic": _task_is_nullhomotopic,
    "is_ghost": _task_is_ghost,
    "induced_map_is_zero": _task_induced_map_is_zero,
    "ghost_group": _task_ghost_group,
    "pf_tensor": _task_pf_tensor,
    "pf_coequalizer": _task_pf_coequalizer,
    "counit": _task_counit,
    "identity_in_counit_image": _task_identity_in_image,
    "mapping_cone": _task_mapping_cone,
    "ladder_check": _task_ladder,
    "pair_report": _task_pair_report,
    "flat_probe": _task_flat_probe,
}


def run(sc: Scenario, seed: int = 0) -> dict:
    """Execute every task in order and build the report."""
    results = []
    timings = []
    start = time.perf_counter()
    for k, task in enumerate(sc.tasks):
        op = task["op"]
        args = task.get("args", {})
        fn = TASKS.get(op)
        if fn is None:
            raise TaskError(f"task {k}: unknown op {op!r}")
        t0 = time.perf_counter()
        try:
            out = fn(sc, args)
        except TaskError as exc:
            raise TaskError(f"task {k} ({op}): {exc}") from None
        except (KeyError, TypeError, ValueError, ArithmeticError) as exc:
            raise TaskError(f"task {k} ({op}): {type(exc).__name__}: {exc}") from None
        timings.append(round(time.perf_counter() - t0, 6))
        results.append({"op": op, "args": args, "result": out})
    return {
        "tool_version": __version__,
        "scenario": sc.name,
        "scenario_digest": sc.digest,
        "seed": seed,
        "ring": str(sc.ring),
        "results": results,
        "timing": {"total_seconds": round(time.perf_counter() - start, 6), "tasks": timings},
    }


def load_scenario(source: str) -> Scenario:
    """A built-in scenario name or a path to a JSON file."""
    if source in BUILTIN:
        return parse_scenario(json.loads(json.dumps(BUILTIN[source])), source)
    try:
        raw = json.loads(Path(source).read_text())
    except OSError as exc:
        raise ScenarioParseError(f"cannot read {source}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"{source}: invalid JSON: {exc}") from None
    return parse_scenario(raw, Path(source).stem)


def run_scenario(source: str, seed: int = 0) -> dict:
    return run(load_scenario(source), seed)


# --------------------------------------------------------------------------
# built-ins

_MOORE = {"min_degree": 0, "ranks": [1, 1], "differentials": {"1": [[2]]}}
_RING_IN_0 = {"min_degree": 0, "ranks": [1]}

BUILTIN: dict[str, dict] = {
    "zmod4-ghost": {
        "ring": "Zmod:4",
        "complexes": {"R": _RING_IN_0, "K": _MOORE},
        "maps": {
            "two": {"source": "R", "target": "R", "components": {"0": [[2]]}},
            "ghost": {"source": "K", "target": "K", "components": {"0": [[2]], "1": [[0]]}},
        },
        "tasks": [
            {"op": "derived_hom", "args": {"source": "K", "target": "K"}},
            {"op": "ghost_group", "args": {"source": "K", "target": "K"}},
            {"op": "is_ghost", "args": {"map": "ghost"}},
            {"op": "pf_tensor", "args": {"X": "K", "K": "K"}},
            {"op": "pf_coequalizer", "args": {"X": "K", "K": "K"}},
            {"op": "counit", "args": {"X": "K", "K": "K"}},
            {"op": "ladder_check", "args": {"map": "two", "X": "K"}},
            {"op": "pair_report", "args": {"X": "K", "K": "K", "map": "two", "pair_id": "moore-z4"}},
        ],
    },
    "z-moore-ghost": {
        "ring": "Z",
        "complexes": {"K": _MOORE, "SK": {"shift_of": "K", "by": 1}},
        "maps": {"ghost": {"source": "K", "target": "SK", "components": {"1": [[1]]}}},
        "tasks": [
            {"op": "derived_hom", "args": {"source": "K", "target": "K", "degree": 1}},
            {"op": "ghost_group", "args": {"source": "K", "target": "SK"}},
            {"op": "is_ghost", "args": {"map": "ghost"}},
            {"op": "is_nullhomotopic", "args": {"map": "ghost"}},
            {"op": "counit", "args": {"X": "SK", "K": "K"}},
        ],
    },
    "field-sanity": {
        "ring": "Fp:2",
        "complexes": {
            "R": _RING_IN_0,
            "X": {"min_degree": 0, "ranks": [2, 2, 1], "differentials": {"1": [[1, 0], [0, 0]], "2": [[0], [1]]}},
        },
        "maps": {"zero": {"source": "R", "target": "R", "components": {"0": [[0]]}}},
        "tasks": [
            {"op": "freyd_image", "args": {"complex": "X"}},
            {"op": "ghost_group", "args": {"source": "X", "target": "X"}},
            {"op": "counit", "args": {"X": "X", "K": "X"}},
            {"op": "identity_in_counit_image", "args": {"complex": "X"}},
            {"op": "ladder_check", "args": {"map": "zero", "X": "X"}},
            {"op": "flat_probe", "args": {"trials": 20, "seed": 0}},
        ],
    },
    "zmod6-vnr": {
        "ring": "Prod:2x3",
        "complexes": {
            "R": _RING_IN_0,
            "K": {"min_degree": 0, "ranks": [1, 1], "differentials": {"1": [[[0, 1]]]}},
        },
        "maps": {"e": {"source": "R", "target": "R", "components": {"0": [[[1, 0]]]}}},
        "tasks": [
            {"op": "homology", "args": {"complex": "K", "degree": 0}},
            {"op": "ghost_group", "args": {"source": "K", "target": "K"}},
            {"op": "pair_report", "args": {"X": "K", "K": "K", "map": "e", "pair_id": "idempotent-cone"}},
            {"op": "flat_probe", "args": {"trials": 20, "seed": 0}},
        ],
    },
}


# --------------------------------------------------------------------------
# ghost search


# Ghosts need non-free homology, so the search leans towards non-unit entries.
SEARCH_NONUNIT_BIAS = 0.9


def _trial(ring, seed, k, max_length, max_rank, bias):
    K = random_complex(ring, f"{seed}:K:{k}", max_length, max_rank, nonunit_bias=bias)
    X = random_complex(ring, f"{seed}:X:{k}", max_length, max_rank, nonunit_bias=bias)
    G = ghost_group(K, X)
    eps = counit(X, K)
    rng = random.Random(f"{seed}:map:{k}")
    _, tri = mapping_cone(random_endomorphism(K, rng))
    ladder = ladder_check(tri, X)
    return K, X, G, eps.is_isomorphism(), ladder.exact


def witness_scenario(ring: RingSpec, K: ChainComplex, X: ChainComplex, f: ChainMap) -> dict:
    return {
        "ring": str(ring),
        "complexes": {"K": K.to_record(), "X": X.to_record()},
        "maps": {"ghost": _map_record(f, "K", "X")},
        "tasks": [
            {"op": "is_ghost", "args": {"map": "ghost"}},
            {"op": "ghost_group", "args": {"source": "K", "target": "X"}},
        ],
    }


def ghost_search(ring: RingSpec, max_length: int = 4, max_rank: int = 3, trials: int = 50,
                 seed: int = 0, nonunit_bias: float = SEARCH_NONUNIT_BIAS) -> dict:
    if max_length < 1 or max_rank < 1:
        raise ValueError("max_length and max_rank must be >= 1")
    start = time.perf_counter()
    records = []
    witness = None
    ghosts = iso = exact = 0
    for k in range(trials):
        K, X, G, counit_iso, ladder_exact = _trial(ring, seed, k, max_length, max_rank, nonunit_bias)
        order = G.order
        if order != 1:
            ghosts += 1
            if witness is None:
                witness = witness_scenario(ring, K, X, ghost_witnesses(K, X)[0])
        iso += counit_iso
        exact += ladder_exact
        records.append({"pair_id": k, "ghost_order": order, "counit_iso": counit_iso,
                        "ladder_exact": ladder_exact})
    return {
        "tool_version": __version__,
        "ring": str(ring),
        "seed": seed,
        "params": {"max_length": max_length, "max_rank": max_rank, "trials": trials,
                   "nonunit_bias": nonunit_bias},
        "total_ghost_pairs": ghosts,
        "counit_iso_pairs": iso,
        "ladder_exact_pairs": exact,
        "first_witness": witness,
        "trials": records,
        "timing": {"total_seconds": round(time.perf_counter() - start, 6)},
    }
