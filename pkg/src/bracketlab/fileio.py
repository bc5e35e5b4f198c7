"""Reading and writing the toolkit's JSON file formats.

Every persistent object has one canonical JSON shape:

* joint lottery: ``{"space": {"lo1": ..., "hi1": ..., "lo2": ..., "hi2": ...},
  "atoms": [[x, y, p], ...]}``
* marginal lottery: ``{"source": 1, "lo": ..., "hi": ..., "atoms": [[x, p], ...]}``
* utility index / bivariate index: tagged by a ``"kind"`` field
* model: tagged by a ``"family"`` field matching the model's family string
* consumption tree: ``{"c": real, "children": [[p, node], ...]}``

Infinite bounds are written as the strings ``"inf"`` and ``"-inf"``.
Probabilities may be given as plain numbers or as ``[num, den]`` pairs and
are converted to floats at parse time.  Serialization is deterministic
(sorted keys) so identical objects produce byte-identical files.
"""

from __future__ import annotations

import json
import math
from typing import Any

from .indices import (
    AdditiveBivariate,
    Affine,
    BivariateIndex,
    CESCRRABivariate,
    Exponential,
    Linear,
    LossAverseSqrt,
    Power,
    SumBivariate,
    Tabulated,
    TabulatedGridBivariate,
    UtilityIndex,
)
from .lotteries import (
    JointLottery,
    MarginalLottery,
    OutcomeSpace,
    make_joint,
    make_marginal,
)
from .models import (
    BIB,
    BIBCN,
    CRRACESKMBIB,
    EDU,
    EU,
    EUCN,
    FIB,
    FIBCN,
    GBIBCN,
    GFIBCN,
    KM,
    KMBIB,
    NB,
    LambdaMix,
    ModelSpec,
    OpenSet1D,
)
from .temporal import TemporalTree

__all__ = [
    "joint_to_dict",
    "joint_from_dict",
    "marginal_to_dict",
    "marginal_from_dict",
    "index_to_dict",
    "index_from_dict",
    "bivariate_to_dict",
    "bivariate_from_dict",
    "model_to_dict",
    "model_from_dict",
    "tree_to_dict",
    "tree_from_dict",
    "read_joint",
    "write_joint",
    "read_marginal",
    "write_marginal",
    "read_index",
    "write_index",
    "read_model",
    "write_model",
    "read_tree",
    "write_tree",
    "dumps",
    "loads",
]


# ---------------------------------------------------------------------------
# Scalar helpers
# ---------------------------------------------------------------------------


def _bound_out(v: float) -> Any:
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _bound_in(raw: Any, label: str) -> float:
    if raw == "inf":
        return math.inf
    if raw == "-inf":
        return -math.inf
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return float(raw)
    raise ValueError(f"{label}: expected a number, 'inf' or '-inf', got {raw!r}")


def _prob_in(raw: Any, label: str) -> float:
    """Accept a plain number or a [num, den] rational pair."""
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return float(raw)
    if isinstance(raw, list) and len(raw) == 2:
        num, den = raw
        if den == 0:
            raise ValueError(f"{label}: zero denominator in probability pair")
        return float(num) / float(den)
    raise ValueError(f"{label}: expected a probability or [num, den] pair, got {raw!r}")


def _number_in(raw: Any, label: str) -> float:
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return float(raw)
    raise ValueError(f"{label}: expected a number, got {raw!r}")


def _require(d: Any, key: str, context: str) -> Any:
    if not isinstance(d, dict):
        raise ValueError(f"{context}: expected a JSON object, got {type(d).__name__}")
    if key not in d:
        raise ValueError(f"{context}: missing required key {key!r}")
    return d[key]


# ---------------------------------------------------------------------------
# Lotteries
# ---------------------------------------------------------------------------


def joint_to_dict(P: JointLottery) -> dict:
    return {
        "space": {
            "lo1": _bound_out(P.space.lo1),
            "hi1": _bound_out(P.space.hi1),
            "lo2": _bound_out(P.space.lo2),
            "hi2": _bound_out(P.space.hi2),
        },
        "atoms": [[x, y, p] for x, y, p in P.entries],
    }


def joint_from_dict(d: dict) -> JointLottery:
    """Parse a joint-lottery document.

    Raises:
        ValueError: structurally malformed document.
        BracketError: structurally fine but fails lottery validation.
    """
    raw_space = _require(d, "space", "lottery")
    space = OutcomeSpace(
        lo1=_bound_in(_require(raw_space, "lo1", "lottery.space"), "lo1"),
        hi1=_bound_in(_require(raw_space, "hi1", "lottery.space"), "hi1"),
        lo2=_bound_in(_require(raw_space, "lo2", "lottery.space"), "lo2"),
        hi2=_bound_in(_require(raw_space, "hi2", "lottery.space"), "hi2"),
    )
    raw_atoms = _require(d, "atoms", "lottery")
    if not isinstance(raw_atoms, list):
        raise ValueError("lottery.atoms: expected a list")
    entries = []
    for k, atom in enumerate(raw_atoms):
        if not isinstance(atom, list) or len(atom) != 3:
            raise ValueError(f"lottery.atoms[{k}]: expected [x, y, p]")
        x = _number_in(atom[0], f"atoms[{k}].x")
        y = _number_in(atom[1], f"atoms[{k}].y")
        p = _prob_in(atom[2], f"atoms[{k}].p")
        entries.append((x, y, p))
    return make_joint(entries, space=space)


def marginal_to_dict(p: MarginalLottery) -> dict:
    return {
        "source": p.source,
        "lo": _bound_out(p.lo),
        "hi": _bound_out(p.hi),
        "atoms": [[x, w] for x, w in p.entries],
    }


def marginal_from_dict(d: dict) -> MarginalLottery:
    source = _require(d, "source", "marginal")
    if source not in (1, 2):
        raise ValueError(f"marginal.source: expected 1 or 2, got {source!r}")
    lo = _bound_in(_require(d, "lo", "marginal"), "lo")
    hi = _bound_in(_require(d, "hi", "marginal"), "hi")
    raw_atoms = _require(d, "atoms", "marginal")
    if not isinstance(raw_atoms, list):
        raise ValueError("marginal.atoms: expected a list")
    entries = []
    for k, atom in enumerate(raw_atoms):
        if not isinstance(atom, list) or len(atom) != 2:
            raise ValueError(f"marginal.atoms[{k}]: expected [x, p]")
        entries.append(
            (_number_in(atom[0], f"atoms[{k}].x"), _prob_in(atom[1], f"atoms[{k}].p"))
        )
    return make_marginal(entries, source=source, lo=lo, hi=hi)


# ---------------------------------------------------------------------------
# Utility indices
# ---------------------------------------------------------------------------


def index_to_dict(f: UtilityIndex) -> dict:
    if isinstance(f, Power):
        return {"kind": "power", "gamma": f.gamma}
    if isinstance(f, Exponential):
        return {"kind": "exponential", "a": f.a}
    if isinstance(f, Linear):
        return {"kind": "linear", "a": f.a, "b": f.b}
    if isinstance(f, LossAverseSqrt):
        return {"kind": "loss-averse-sqrt", "lam": f.lam}
    if isinstance(f, Tabulated):
        return {"kind": "tabulated", "knots": [[x, y] for x, y in f.knots]}
    if isinstance(f, Affine):
        return {"kind": "affine", "a": f.a, "b": f.b, "base": index_to_dict(f.base)}
    raise ValueError(f"no file format for index type {type(f).__name__}")


def index_from_dict(d: dict) -> UtilityIndex:
    kind = _require(d, "kind", "index")
    if kind == "power":
        return Power(gamma=_number_in(_require(d, "gamma", "power"), "gamma"))
    if kind == "exponential":
        return Exponential(a=_number_in(_require(d, "a", "exponential"), "a"))
    if kind == "linear":
        return Linear(
            a=_number_in(d.get("a", 1.0), "a"), b=_number_in(d.get("b", 0.0), "b")
        )
    if kind == "loss-averse-sqrt":
        return LossAverseSqrt(lam=_number_in(_require(d, "lam", "loss-averse-sqrt"), "lam"))
    if kind == "tabulated":
        raw = _require(d, "knots", "tabulated")
        if not isinstance(raw, list):
            raise ValueError("tabulated.knots: expected a list")
        knots = tuple(
            (_number_in(k[0], "knot.x"), _number_in(k[1], "knot.y"))
            for k in raw
            if isinstance(k, list) and len(k) == 2
        )
        if len(knots) != len(raw):
            raise ValueError("tabulated.knots: every knot must be an [x, f(x)] pair")
        return Tabulated(knots=knots)
    if kind == "affine":
        return Affine(
            base=index_from_dict(_require(d, "base", "affine")),
            a=_number_in(_require(d, "a", "affine"), "a"),
            b=_number_in(_require(d, "b", "affine"), "b"),
        )
    raise ValueError(f"unknown index kind {kind!r}")


def bivariate_to_dict(w: BivariateIndex) -> dict:
    if isinstance(w, AdditiveBivariate):
        return {
            "kind": "additive",
            "u1": index_to_dict(w.u1),
            "u2": index_to_dict(w.u2),
            "beta": w.beta,
        }
    if isinstance(w, SumBivariate):
        return {"kind": "sum", "u": index_to_dict(w.u)}
    if isinstance(w, CESCRRABivariate):
        return {"kind": "ces-crra", "rho": w.rho, "alpha": w.alpha, "beta": w.beta}
    if isinstance(w, TabulatedGridBivariate):
        return {
            "kind": "grid",
            "xs": list(w.xs),
            "ys": list(w.ys),
            "values": [list(row) for row in w.values],
        }
    raise ValueError(f"no file format for bivariate index type {type(w).__name__}")


def bivariate_from_dict(d: dict) -> BivariateIndex:
    kind = _require(d, "kind", "bivariate index")
    if kind == "additive":
        return AdditiveBivariate(
            u1=index_from_dict(_require(d, "u1", "additive")),
            u2=index_from_dict(_require(d, "u2", "additive")),
            beta=_number_in(d.get("beta", 1.0), "beta"),
        )
    if kind == "sum":
        return SumBivariate(u=index_from_dict(_require(d, "u", "sum")))
    if kind == "ces-crra":
        return CESCRRABivariate(
            rho=_number_in(_require(d, "rho", "ces-crra"), "rho"),
            alpha=_number_in(_require(d, "alpha", "ces-crra"), "alpha"),
            beta=_number_in(_require(d, "beta", "ces-crra"), "beta"),
        )
    if kind == "grid":
        xs = _require(d, "xs", "grid")
        ys = _require(d, "ys", "grid")
        values = _require(d, "values", "grid")
        if not (isinstance(xs, list) and isinstance(ys, list) and isinstance(values, list)):
            raise ValueError("grid: xs, ys and values must be lists")
        return TabulatedGridBivariate(
            xs=tuple(_number_in(v, "xs") for v in xs),
            ys=tuple(_number_in(v, "ys") for v in ys),
            values=tuple(
                tuple(_number_in(v, "values") for v in row) for row in values
            ),
        )
    raise ValueError(f"unknown bivariate index kind {kind!r}")


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------


def _open_set_out(H: OpenSet1D) -> list:
    return [[_bound_out(lo), _bound_out(hi)] for lo, hi in H.intervals]


def _open_set_in(raw: Any, label: str) -> OpenSet1D:
    if not isinstance(raw, list):
        raise ValueError(f"{label}: expected a list of [lo, hi] pairs")
    intervals = []
    for k, pair in enumerate(raw):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValueError(f"{label}[{k}]: expected [lo, hi]")
        intervals.append(
            (_bound_in(pair[0], f"{label}[{k}].lo"), _bound_in(pair[1], f"{label}[{k}].hi"))
        )
    return OpenSet1D(intervals=tuple(intervals))


def model_to_dict(model: ModelSpec) -> dict:
    """Serialize a model; the ``family`` field doubles as the format tag."""
    d: dict[str, Any] = {"family": model.family}
    if isinstance(model, (EU, EUCN)):
        d["w"] = bivariate_to_dict(model.w)
    elif isinstance(model, NB):
        d["w"] = bivariate_to_dict(model.w)
        d["v1"] = index_to_dict(model.v1)
        d["v2"] = index_to_dict(model.v2)
    elif isinstance(model, (BIB, BIBCN)):
        d["w"] = bivariate_to_dict(model.w)
        d["v2"] = index_to_dict(model.v2)
    elif isinstance(model, (FIB, FIBCN)):
        d["w"] = bivariate_to_dict(model.w)
        d["v1"] = index_to_dict(model.v1)
    elif isinstance(model, GBIBCN):
        d["w"] = bivariate_to_dict(model.w)
        d["v1"] = index_to_dict(model.v1)
        d["v2"] = index_to_dict(model.v2)
        d["H2"] = _open_set_out(model.H2)
    elif isinstance(model, GFIBCN):
        d["w"] = bivariate_to_dict(model.w)
        d["v1"] = index_to_dict(model.v1)
        d["v2"] = index_to_dict(model.v2)
        d["H1"] = _open_set_out(model.H1)
    elif isinstance(model, EDU):
        d["u"] = index_to_dict(model.u)
        d["beta"] = model.beta
    elif isinstance(model, (KM, KMBIB)):
        d["u"] = index_to_dict(model.u)
        d["beta"] = model.beta
        d["phi"] = index_to_dict(model.phi)
    elif isinstance(model, CRRACESKMBIB):
        d["rho"] = model.rho
        d["alpha"] = model.alpha
        d["beta"] = model.beta
    elif isinstance(model, LambdaMix):
        d["u"] = index_to_dict(model.u)
        d["lam"] = model.lam
    else:
        raise ValueError(f"no file format for model type {type(model).__name__}")
    return d


def model_from_dict(d: dict) -> ModelSpec:
    family = _require(d, "family", "model")
    if family in ("eu", "eu-cn"):
        w = bivariate_from_dict(_require(d, "w", family))
        return EU(w=w) if family == "eu" else EUCN(w=w)
    if family == "nb":
        return NB(
            w=bivariate_from_dict(_require(d, "w", "nb")),
            v1=index_from_dict(_require(d, "v1", "nb")),
            v2=index_from_dict(_require(d, "v2", "nb")),
        )
    if family in ("bib", "bib-cn"):
        w = bivariate_from_dict(_require(d, "w", family))
        v2 = index_from_dict(_require(d, "v2", family))
        return BIB(w=w, v2=v2) if family == "bib" else BIBCN(w=w, v2=v2)
    if family in ("fib", "fib-cn"):
        w = bivariate_from_dict(_require(d, "w", family))
        v1 = index_from_dict(_require(d, "v1", family))
        return FIB(w=w, v1=v1) if family == "fib" else FIBCN(w=w, v1=v1)
    if family == "gbib-cn":
        return GBIBCN(
            w=bivariate_from_dict(_require(d, "w", "gbib-cn")),
            v1=index_from_dict(_require(d, "v1", "gbib-cn")),
            v2=index_from_dict(_require(d, "v2", "gbib-cn")),
            H2=_open_set_in(_require(d, "H2", "gbib-cn"), "H2"),
        )
    if family == "gfib-cn":
        return GFIBCN(
            w=bivariate_from_dict(_require(d, "w", "gfib-cn")),
            v1=index_from_dict(_require(d, "v1", "gfib-cn")),
            v2=index_from_dict(_require(d, "v2", "gfib-cn")),
            H1=_open_set_in(_require(d, "H1", "gfib-cn"), "H1"),
        )
    if family == "edu":
        return EDU(
            u=index_from_dict(_require(d, "u", "edu")),
            beta=_number_in(_require(d, "beta", "edu"), "beta"),
        )
    if family in ("km", "km-bib"):
        u = index_from_dict(_require(d, "u", family))
        beta = _number_in(_require(d, "beta", family), "beta")
        phi = index_from_dict(_require(d, "phi", family))
        if family == "km":
            return KM(u=u, beta=beta, phi=phi)
        return KMBIB(u=u, beta=beta, phi=phi)
    if family == "crra-ces-kmbib":
        return CRRACESKMBIB(
            rho=_number_in(_require(d, "rho", "crra-ces-kmbib"), "rho"),
            alpha=_number_in(_require(d, "alpha", "crra-ces-kmbib"), "alpha"),
            beta=_number_in(_require(d, "beta", "crra-ces-kmbib"), "beta"),
        )
    if family == "lambda-mix":
        return LambdaMix(
            u=index_from_dict(_require(d, "u", "lambda-mix")),
            lam=_number_in(_require(d, "lam", "lambda-mix"), "lam"),
        )
    raise ValueError(f"unknown model family {family!r}")


# ---------------------------------------------------------------------------
# Consumption trees
# ---------------------------------------------------------------------------


def tree_to_dict(tree: TemporalTree) -> dict:
    return {
        "c": tree.c,
        "children": [[p, tree_to_dict(child)] for p, child in tree.children],
    }


def tree_from_dict(d: dict) -> TemporalTree:
    c = _number_in(_require(d, "c", "tree"), "c")
    raw_children = d.get("children", [])
    if not isinstance(raw_children, list):
        raise ValueError("tree.children: expected a list")
    children = []
    for k, pair in enumerate(raw_children):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValueError(f"tree.children[{k}]: expected [p, node]")
        children.append(
            (_prob_in(pair[0], f"children[{k}].p"), tree_from_dict(pair[1]))
        )
    return TemporalTree(c=c, children=tuple(children))


# ---------------------------------------------------------------------------
# File-level wrappers
# ---------------------------------------------------------------------------


def dumps(d: dict) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(d, indent=2, sort_keys=True) + "\n"


def loads(text: str) -> dict:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON: {exc}") from None
    if not isinstance(d, dict):
        raise ValueError("expected a top-level JSON object")
    return d


def _read(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def _write(path, d: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(d))


def read_joint(path) -> JointLottery:
    return joint_from_dict(_read(path))


def write_joint(path, P: JointLottery) -> None:
    _write(path, joint_to_dict(P))


def read_marginal(path) -> MarginalLottery:
    return marginal_from_dict(_read(path))


def write_marginal(path, p: MarginalLottery) -> None:
    _write(path, marginal_to_dict(p))


def read_index(path) -> UtilityIndex:
    return index_from_dict(_read(path))


def write_index(path, f: UtilityIndex) -> None:
    _write(path, index_to_dict(f))


def read_model(path) -> ModelSpec:
    return model_from_dict(_read(path))


def write_model(path, model: ModelSpec) -> None:
    _write(path, model_to_dict(model))


def read_tree(path) -> TemporalTree:
    return tree_from_dict(_read(path))


def write_tree(path, tree: TemporalTree) -> None:
    _write(path, tree_to_dict(tree))
