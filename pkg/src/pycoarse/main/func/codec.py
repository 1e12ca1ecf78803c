# JSON and CSV formats for spaces, kernels, embeddings, operators and map specs
# contributors: smlee

# History
# 2026-10-17 | v1.0.1 - default margin of map documents
# 2026-10-17 | v1.0 - first commit

# Module import
import csv
import json
import hashlib
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union
import numpy as np
from scipy import sparse
from pycoarse.util.spaces import (DiscreteMetricSpace, GraphSpace, GroupBall, ELEMENT_CAP,
                                  space_from_spec)
from pycoarse.util.kernels import Kernel, distance_kernel
from pycoarse.util.embeddings import HilbertEmbedding
from pycoarse.util.roe import BandOperator, Functional, IdentityMap, SchurMultiplier, FiniteRankMap
from pycoarse.util.groupoid import GroupoidKernel

# Main
def read_json(path:Union[str, Path]):
    """Load a JSON document; malformed input raises ValueError"""
    with open(path, "r") as f:
        return json.load(f)


def write_json(path:Union[str, Path], obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")
    return path


def write_csv(path:Union[str, Path], header:Sequence[str], rows:Sequence[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(["" if x is None else repr(float(x)) if isinstance(x, float) else x for x in row])
    return path


def file_digest(path:Union[str, Path]) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# scalars
def encode_value(z) -> Union[float, list]:
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def decode_value(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ValueError(f"Complex entry must be [re, im], got {x!r}")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValueError(f"Kernel entry must be a number or [re, im], got {x!r}")
    return complex(float(x), 0.0)


def encode_matrix(values:np.ndarray) -> list:
    if not np.iscomplexobj(values):
        return np.asarray(values, dtype=float).tolist()
    return [[encode_value(z) for z in row] for row in values]


def decode_matrix(rows) -> np.ndarray:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ValueError("Matrix must be a list of rows")
    values = np.array([[decode_value(x) for x in row] for row in rows], dtype=complex) if rows else np.zeros((0, 0), dtype=complex)
    if values.ndim != 2:
        raise ValueError("Matrix rows must have equal length")
    return values.real.copy() if not values.imag.any() else values


# spaces
def describe_space(space:Union[DiscreteMetricSpace, GroupBall]) -> dict:
    if isinstance(space, GroupBall):
        return space.describe()
    if space.ball is not None:
        return {**space.ball.describe(), "on":"interior" if space.n == space.ball.n_interior else "full"}
    if isinstance(space, GraphSpace):
        return {"kind":"graph", "n":space.n, "edges":[list(e) for e in space.edges]}
    return {"kind":"explicit", "points":list(space.points), "d":np.asarray(space.d).tolist()}


def load_space(spec:dict,
               *,
               margin:Optional[int]=None,
               max_elements:int=ELEMENT_CAP):
    """Space from its JSON spec, group kinds return a GroupBall

    A margin in the spec wins over the margin argument; with neither the
    ball is enumerated without margin.
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("Space spec must be an object with a kind")
    try:
        return space_from_spec(spec, margin=margin or 0, max_elements=max_elements)
    except KeyError as e:
        raise ValueError(f"Space spec is missing field {e}")


def _host(space, n:int) -> DiscreteMetricSpace:
    if isinstance(space, GroupBall):
        if n == space.n_interior:
            return space.space
        elif n == space.n_full:
            return space.full_space
        raise ValueError(f"{n} rows match neither the interior ({space.n_interior}) nor the enumerated ball ({space.n_full})")
    if n != space.n:
        raise ValueError(f"{n} rows do not match the space of {space.n} points")
    return space


# kernels
def load_kernel(obj:dict,
                *,
                margin:Optional[int]=None,
                max_elements:int=ELEMENT_CAP) -> Kernel:
    """{"space": <spec>, "values": [[x or [re, im], ...], ...]}"""
    if not isinstance(obj, dict) or "space" not in obj or "values" not in obj:
        raise ValueError("Kernel document needs space and values")
    values = decode_matrix(obj["values"])
    space = _host(load_space(obj["space"], margin=margin, max_elements=max_elements), values.shape[0])
    if values.shape != (space.n, space.n):
        raise ValueError(f"Kernel values of shape {values.shape} do not match {space.n} points")
    if not np.isfinite(values).all():
        raise ValueError("Kernel values must be finite")
    return Kernel(space, values, meta={"source":"input"})


def dump_kernel(k:Kernel) -> dict:
    return {"space":describe_space(k.space), "values":encode_matrix(k.values), "meta":k.meta}


def load_groupoid_kernel(obj:dict,
                         *,
                         margin:Optional[int]=None,
                         max_elements:int=ELEMENT_CAP) -> GroupoidKernel:
    """{"space": <group spec>, "values": [[...]]} with base rows and arrow columns, null where undefined"""
    if not isinstance(obj, dict) or "space" not in obj or "values" not in obj:
        raise ValueError("Groupoid kernel document needs space and values")
    ball = load_space(obj["space"], margin=margin, max_elements=max_elements)
    if not isinstance(ball, GroupBall):
        raise ValueError("Groupoid kernels need a group space")
    rows = [[0.0 if x is None else x for x in row] for row in obj["values"]]
    values = decode_matrix(rows)
    base = _host(ball, values.shape[0])
    if values.shape != (base.n, ball.n_full):
        raise ValueError(f"Groupoid values of shape {values.shape} do not match ({base.n}, {ball.n_full})")
    return GroupoidKernel(base, values, meta={"source":"input"})


def dump_groupoid_kernel(phi:GroupoidKernel) -> dict:
    values = encode_matrix(phi.values)
    rows = [[v if ok else None for v, ok in zip(row, mask)] for row, mask in zip(values, phi.defined.tolist())]
    return {"space":describe_space(phi.space), "values":rows, "meta":phi.meta}


def dump_embedding(f:HilbertEmbedding) -> dict:
    return {"space":describe_space(f.space), "dim":f.dim, "coords":f.coords.tolist(), "meta":f.meta}


# operators and map specs
def resolve_element(ball:GroupBall, x):
    """Element from an index or a label"""
    if isinstance(x, int) and not isinstance(x, bool):
        if not 0 <= x < ball.n_full:
            raise ValueError(f"Element index {x} outside the enumerated ball")
        return ball.elements[x]
    labels = {ball.label(g):g for g in ball.elements}
    if x not in labels:
        raise ValueError(f"Unknown element {x!r}")
    return labels[x]


def load_band_operator(obj:dict, ball:GroupBall) -> BandOperator:
    """{"entries": [[s_index, t_index, x or [re, im]], ...], "exact_radius": optional}"""
    entries = obj.get("entries") if isinstance(obj, dict) else None
    if not isinstance(entries, list):
        raise ValueError("Band operator document needs an entries list")
    rows, cols, data = [], [], []
    for entry in entries:
        if not isinstance(entry, list) or len(entry) != 3:
            raise ValueError(f"Band operator entry must be [s, t, value], got {entry!r}")
        s, t = resolve_element(ball, entry[0]), resolve_element(ball, entry[1])
        rows.append(ball.index_of(s))
        cols.append(ball.index_of(t))
        data.append(decode_value(entry[2]))
    m = sparse.csr_matrix((np.array(data, dtype=complex), (rows, cols)), shape=(ball.n_full,) * 2)
    return BandOperator(ball, m, exact_radius=obj.get("exact_radius"))


def dump_band_operator(op:BandOperator) -> dict:
    return {"ball":op.ball.describe(), "width":op.width, "bound":op.bound, "exact_radius":op.exact_radius,
            "entries":[[i, j, [z.real, z.imag]] for i, j, z in op.entries()]}


def load_cp_map(obj:dict, ball:GroupBall):
    """One of
    {"kind": "identity"}
    {"kind": "schur", "t": 0.5}                      exp(-t d) on the enumerated ball
    {"kind": "schur", "values": [[...]]}             explicit kernel on the enumerated ball
    {"kind": "finite-rank", "terms": [{"functional": [[x, y, w], ...], "operator": {...}}, ...]}
    """
    kind = obj.get("kind") if isinstance(obj, dict) else None
    if kind == "identity":
        return IdentityMap(ball)
    elif kind == "schur":
        if "t" in obj:
            t = float(obj["t"])
            if not t > 0:
                raise ValueError(f"Schur parameter must be positive, got {t}")
            k = distance_kernel(ball.full_space, lambda d:np.exp(-t * d), meta={"source":"schur", "t":t})
        elif "values" in obj:
            k = Kernel(_host(ball, len(obj["values"])), decode_matrix(obj["values"]))
            if k.n != ball.n_full:
                raise ValueError("Schur kernel must cover the enumerated ball")
        else:
            raise ValueError("Schur map needs t or values")
        return SchurMultiplier(k)
    elif kind == "finite-rank":
        terms = obj.get("terms")
        if not isinstance(terms, list) or not terms:
            raise ValueError("Finite rank map needs a nonempty terms list")
        parsed = []
        for term in terms:
            evaluations = []
            for x, y, w in term["functional"]:
                evaluations.append((ball.index_of(resolve_element(ball, x)), ball.index_of(resolve_element(ball, y)), decode_value(w)))
            parsed.append((Functional(evaluations), load_band_operator(term["operator"], ball)))
        return FiniteRankMap(parsed)
    raise ValueError(f"Unknown map kind: {kind!r}")


def default_margin(radius:int, radii:Sequence[float]=()) -> int:
    """Margin W covering every interior quotient s t^-1 (W = 2N) and the property (iii) radii"""
    need = 2 * int(radius)
    if len(radii):
        need = max(need, int(np.ceil(max(radii))) - 1)
    return max(need, 0)


def _finite_rank_span(maps:Sequence) -> int:
    """Sum of the two largest operator widths in play"""
    widths = sorted((op.width for cp in maps if isinstance(cp, FiniteRankMap) for _, op in cp.terms), reverse=True)
    return int(sum(widths[:2]))


def _load_maps(obj:dict, ball:GroupBall) -> list:
    if "map" in obj:
        return [load_cp_map(obj["map"], ball)]
    schedule = obj.get("schedule")
    if isinstance(schedule, dict) and isinstance(schedule.get("t"), list):
        schedule = [{**schedule, "t":t} for t in schedule["t"]]
    if not isinstance(schedule, list):
        raise ValueError("Map document needs a map or a schedule")
    return [load_cp_map(item, ball) for item in schedule]


def load_cp_document(obj:dict,
                     *,
                     margin:Optional[int]=None,
                     radii:Sequence[float]=(),
                     max_elements:int=ELEMENT_CAP) -> Tuple[GroupBall, list]:
    """{"space": <group spec>, "map": {...}} or {"space": ..., "schedule": [{...}, ...]}

    A schedule may also be given as {"kind": "schur", "t": [t_1, t_2, ...]}.
    Without a margin in the spec or the arguments, W is the larger of
    default_margin(N, radii) and the sum of the two largest finite rank
    operator widths.
    """
    if not isinstance(obj, dict) or not isinstance(obj.get("space"), dict):
        raise ValueError("Map document needs a space")
    auto = margin is None and "margin" not in obj["space"]
    if auto:
        try:
            margin = default_margin(int(obj["space"].get("radius", 0)), radii)
        except (TypeError, ValueError):
            raise ValueError("Group space radius must be an integer")
    ball = load_space(obj["space"], margin=margin, max_elements=max_elements)
    if not isinstance(ball, GroupBall):
        raise ValueError("Completely positive maps need a group space")
    maps = _load_maps(obj, ball)
    span = _finite_rank_span(maps)
    if auto and span > ball.margin:
        # interior prefix order keeps element indices valid in the larger ball
        ball = load_space(obj["space"], margin=span, max_elements=max_elements)
        maps = _load_maps(obj, ball)
    return ball, maps
