"""Unitary fusion category data: loading, validation, quantum dimensions, pentagon.

A category document is a JSON-compatible tree::

    {
      "simples": ["1", "t"],
      "unit": "1",
      "dual": {"1": "1", "t": "t"},
      "fusion": {"a,b,c": N_ab^c, ...},          # absent keys mean 0
      "F": {"a,b,c;d;e,f;m1,m2,m3,m4": [re, im], ...},
      "unitary": true
    }

F values use the splitting-tree convention: with isometric vertices
``V^{xy}_{z,m} : z -> x (x) y``,

    (id_a (x) V^{bc}_{f,m3}) o V^{af}_{d,m4}
        = sum_{e,m1,m2} F[a,b,c;d][(e,m1,m2),(f,m3,m4)]
          (V^{ab}_{e,m1} (x) id_c) o V^{ec}_{d,m2}.

Every key demanded by the fusion rules must be present, and keys containing
the unit label must equal 1 (trivial unitors); both are validated at load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConsistencyError, NumericalError, SchemaError, UnknownLabel

__all__ = [
    "FusionRules",
    "CategoryData",
    "load_category",
    "load_catalog",
    "catalog_names",
    "quantum_dimensions",
    "verify_pentagon",
    "f_unitarity_residual",
    "dimension_residual",
    "corrupt_f_document",
]

_DIM_TOL = 1e-9


@dataclass(frozen=True)
class FusionRules:
    """Fusion multiplicities N[a,b,c] = dim C(a(x)b -> c) and the dual involution."""

    N: np.ndarray
    dual: np.ndarray
    unit: int

    @property
    def size(self) -> int:
        return self.N.shape[0]

    def validate(self) -> None:
        N, unit, k = self.N, self.unit, self.size
        if np.any(N < 0):
            idx = tuple(int(i) for i in np.argwhere(N < 0)[0])
            raise ConsistencyError("negative fusion multiplicity", idx)
        for a in range(k):
            for b in range(k):
                if N[unit, a, b] != (1 if a == b else 0):
                    raise ConsistencyError("unit row violated", (unit, a, b))
                if N[a, unit, b] != (1 if a == b else 0):
                    raise ConsistencyError("unit column violated", (a, unit, b))
                if N[a, b, unit] != (1 if b == self.dual[a] else 0):
                    raise ConsistencyError("dual pairing violated", (a, b, unit))
        if np.any(self.dual[self.dual] != np.arange(k)):
            raise ConsistencyError("dual is not an involution")
        # associativity of the fusion ring: sum_e N_ab^e N_ec^d = sum_f N_bc^f N_af^d
        lhs = np.einsum("abe,ecd->abcd", N, N)
        rhs = np.einsum("bcf,afd->abcd", N, N)
        if np.any(lhs != rhs):
            idx = tuple(int(i) for i in np.argwhere(lhs != rhs)[0])
            raise ConsistencyError("fusion associativity violated", idx)


@dataclass
class CategoryData:
    """A unitary fusion category in skeletal form.

    Immutable after load; safe to share across workers. ``F`` maps
    ``(a, b, c, d)`` label indices to the dense F-block in the row/column
    enumeration of :meth:`f_rows` / :meth:`f_cols`.
    """

    labels: tuple[str, ...]
    rules: FusionRules
    F: dict[tuple[int, int, int, int], np.ndarray]
    dims: np.ndarray
    total_dim_sq: float
    unitary: bool = True
    _index: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    # -- basic accessors -------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def unit(self) -> int:
        return self.rules.unit

    @property
    def N(self) -> np.ndarray:
        return self.rules.N

    @property
    def dual(self) -> np.ndarray:
        return self.rules.dual

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(label) from None

    def f_rows(self, a: int, b: int, c: int, d: int) -> list[tuple[int, int, int]]:
        """Left-tree index triples (e, m1, m2) for the (a,b,c;d) block."""
        N = self.N
        return [
            (e, m1, m2)
            for e in range(self.size)
            for m1 in range(N[a, b, e])
            for m2 in range(N[e, c, d])
        ]

    def f_cols(self, a: int, b: int, c: int, d: int) -> list[tuple[int, int, int]]:
        """Right-tree index triples (f, m3, m4) for the (a,b,c;d) block."""
        N = self.N
        return [
            (f, m3, m4)
            for f in range(self.size)
            for m3 in range(N[b, c, f])
            for m4 in range(N[a, f, d])
        ]

    def f_block(self, a: int, b: int, c: int, d: int) -> np.ndarray:
        key = (a, b, c, d)
        blk = self.F.get(key)
        if blk is None:
            n = len(self.f_rows(a, b, c, d))
            m = len(self.f_cols(a, b, c, d))
            if n != m:
                raise ConsistencyError("F-block is not square", key)
            blk = np.zeros((n, m), dtype=complex)
            self.F[key] = blk
        return blk

    def braiding_block(self, x: int, y: int, u: int) -> np.ndarray:
        raise ConsistencyError("category carries no braiding data")

    @property
    def braided(self) -> bool:
        return False


# -- loading ---------------------------------------------------------------


def _as_document(document) -> dict:
    if isinstance(document, dict):
        return document
    if isinstance(document, (str, Path)):
        text = Path(document).read_text() if Path(str(document)).exists() else str(document)
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
    raise SchemaError(f"unsupported document type {type(document)!r}")


def _parse_f_key(key: str, index: dict[str, int]) -> tuple[tuple[int, int, int, int], tuple[int, int], tuple[int, int]]:
    try:
        abc, d, ef, mults = key.split(";")
        a, b, c = (index[s] for s in abc.split(","))
        dd = index[d]
        e, f = (index[s] for s in ef.split(","))
        m1, m2, m3, m4 = (int(s) for s in mults.split(","))
    except (ValueError, KeyError) as exc:
        raise SchemaError(f"malformed F key {key!r}") from exc
    return (a, b, c, dd), (e, m1, m2), (f, m3, m4)


def load_category(document) -> CategoryData:
    """Parse and fully validate a category document.

    Raises SchemaError on malformed input and ConsistencyError (with the
    offending key) on any violated structural invariant.
    """
    doc = _as_document(document)
    for req in ("simples", "unit", "dual", "fusion", "F"):
        if req not in doc:
            raise SchemaError(f"missing required field {req!r}")
    labels = tuple(doc["simples"])
    if len(set(labels)) != len(labels) or not labels:
        raise SchemaError("simples must be a nonempty list of unique labels")
    index = {lab: i for i, lab in enumerate(labels)}
    if doc["unit"] not in index:
        raise SchemaError(f"unit label {doc['unit']!r} not among simples")
    unit = index[doc["unit"]]

    dual = np.zeros(len(labels), dtype=int)
    try:
        for lab, dlab in doc["dual"].items():
            dual[index[lab]] = index[dlab]
    except KeyError as exc:
        raise SchemaError(f"dual map references unknown label {exc}") from exc
    if set(doc["dual"]) != set(labels):
        raise SchemaError("dual map must cover every simple")

    k = len(labels)
    N = np.zeros((k, k, k), dtype=int)
    for key, val in doc["fusion"].items():
        try:
            a, b, c = (index[s] for s in key.split(","))
        except (ValueError, KeyError) as exc:
            raise SchemaError(f"malformed fusion key {key!r}") from exc
        if not isinstance(val, int) or val < 0:
            raise SchemaError(f"fusion multiplicity {key!r} must be a nonnegative int")
        N[a, b, c] = val

    rules = FusionRules(N=N, dual=dual, unit=unit)
    rules.validate()

    dims, total_sq = quantum_dimensions(rules)

    cat = CategoryData(
        labels=labels,
        rules=rules,
        F={},
        dims=dims,
        total_dim_sq=total_sq,
        unitary=bool(doc.get("unitary", True)),
    )

    # assemble and validate the F-table
    entries: dict[tuple[int, int, int, int], dict[tuple, complex]] = {}
    for key, val in doc["F"].items():
        block_key, row, col = _parse_f_key(key, index)
        try:
            re, im = float(val[0]), float(val[1])
        except (TypeError, ValueError, IndexError) as exc:
            raise SchemaError(f"F value for {key!r} must be [re, im]") from exc
        entries.setdefault(block_key, {})[(row, col)] = complex(re, im)

    for a in range(k):
        for b in range(k):
            for c in range(k):
                for d in range(k):
                    rows = cat.f_rows(a, b, c, d)
                    cols = cat.f_cols(a, b, c, d)
                    if not rows and not cols:
                        continue
                    if len(rows) != len(cols):
                        raise ConsistencyError("F-block not square", (a, b, c, d))
                    blk = np.zeros((len(rows), len(cols)), dtype=complex)
                    got = entries.get((a, b, c, d), {})
                    for i, r in enumerate(rows):
                        for j, col in enumerate(cols):
                            if (r, col) not in got:
                                name = _f_key_name(labels, a, b, c, d, r, col)
                                raise ConsistencyError("missing F entry", name)
                            blk[i, j] = got[(r, col)]
                    if unit in (a, b, c):
                        # trivial unitors: unit-containing blocks are forced to 1
                        if blk.shape != (1, 1) or abs(blk[0, 0] - 1.0) > 1e-12:
                            name = _f_key_name(labels, a, b, c, d, rows[0], cols[0])
                            raise ConsistencyError("unit F entry must equal 1", name)
                    cat.F[(a, b, c, d)] = blk
    return cat


def _f_key_name(labels, a, b, c, d, row, col) -> str:
    (e, m1, m2), (f, m3, m4) = row, col
    return (
        f"{labels[a]},{labels[b]},{labels[c]};{labels[d]};"
        f"{labels[e]},{labels[f]};{m1},{m2},{m3},{m4}"
    )


# -- quantum dimensions ------------------------------------------------------


def quantum_dimensions(rules: FusionRules) -> tuple[np.ndarray, float]:
    """Perron-Frobenius quantum dimensions and squared total dimension.

    d_a is the largest eigenvalue of the matrix (N[a,b,c])_{b,c}; returns
    (d, D^2) and checks the ring homomorphism property d_a d_b = sum N d_c.
    """
    k = rules.size
    dims = np.zeros(k)
    for a in range(k):
        try:
            ev = np.linalg.eigvals(rules.N[a].astype(float))
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"eigendecomposition failed for label {a}") from exc
        d = float(np.max(ev.real))
        if d <= 0 or np.max(np.abs(ev)) > d + 1e-9:
            raise NumericalError(f"no positive Perron-Frobenius eigenvalue for {a}")
        dims[a] = d
    resid = np.max(np.abs(np.outer(dims, dims) - np.einsum("abc,c->ab", rules.N, dims)))
    if resid > _DIM_TOL:
        raise NumericalError(f"quantum dimensions violate fusion ring to {resid:.2e}")
    if abs(dims[rules.unit] - 1.0) > _DIM_TOL:
        raise NumericalError("d_unit differs from 1")
    return dims, float(np.sum(dims**2))


# -- pentagon ----------------------------------------------------------------


def _move_matrix(cat: CategoryData, src_coords, dst_coords, f_args, row_of, col_of, spect):
    """Generic single-F-move matrix between two bracketing coordinate lists.

    ``row_of(sc)``/``col_of(dc)`` project a coordinate tuple onto the F-block
    row/column index; ``spect`` returns the spectator data that must agree.
    """
    M = np.zeros((len(dst_coords), len(src_coords)), dtype=complex)
    dst_pos = {c: i for i, c in enumerate(dst_coords)}
    for j, sc in enumerate(src_coords):
        block = cat.f_block(*f_args(sc))
        rows = cat.f_rows(*f_args(sc))
        col_idx = cat.f_cols(*f_args(sc)).index(col_of(sc))
        for i, r in enumerate(rows):
            dc = row_of(sc, r)
            if dc in dst_pos:
                M[dst_pos[dc], j] = block[i, col_idx]
    return M


def verify_pentagon(cat: CategoryData) -> float:
    """Maximum residual of the pentagon identity over all label 4-tuples.

    Both reassociation paths from a(b(cd)) to ((ab)c)d are evaluated as
    explicit matrices on the 4-leaf tree coordinates; the residual is the
    largest entrywise deviation. Does not mutate ``cat``.
    """
    k, N = cat.size, cat.N
    worst = 0.0
    rng = range(k)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    worst = max(worst, _pentagon_residual(cat, a, b, c, d))
    return worst


def _pentagon_residual(cat: CategoryData, a: int, b: int, c: int, d: int) -> float:
    N, k = cat.N, cat.size
    rng = range(k)
    # coordinate spaces for the five bracketings, root label included
    T1 = [(g, al, h, be, e, ga)
          for g in rng for al in range(N[a, b, g])
          for h in rng for be in range(N[g, c, h])
          for e in rng for ga in range(N[h, d, e])]
    T2 = [(f, al, h, be, e, ga)
          for f in rng for al in range(N[b, c, f])
          for h in rng for be in range(N[a, f, h])
          for e in rng for ga in range(N[h, d, e])]
    T3 = [(f, al, kk, be, e, ga)
          for f in rng for al in range(N[b, c, f])
          for kk in rng for be in range(N[f, d, kk])
          for e in rng for ga in range(N[a, kk, e])]
    T4 = [(l, al, kk, be, e, ga)
          for l in rng for al in range(N[c, d, l])
          for kk in rng for be in range(N[b, l, kk])
          for e in rng for ga in range(N[a, kk, e])]
    T5 = [(g, al, l, be, e, ga)
          for g in rng for al in range(N[a, b, g])
          for l in rng for be in range(N[c, d, l])
          for e in rng for ga in range(N[g, l, e])]
    if not T4 or not T1:
        return 0.0

    # path B: T4 -> T3 -> T2 -> T1
    m43 = _move_matrix(
        cat, T4, T3,
        f_args=lambda sc: (b, c, d, sc[2]),
        row_of=lambda sc, r: (r[0], r[1], sc[2], r[2], sc[4], sc[5]),
        col_of=lambda sc: (sc[0], sc[1], sc[3]),
        spect=None,
    )
    m32 = _move_matrix(
        cat, T3, T2,
        f_args=lambda sc: (a, sc[0], d, sc[4]),
        row_of=lambda sc, r: (sc[0], sc[1], r[0], r[1], sc[4], r[2]),
        col_of=lambda sc: (sc[2], sc[3], sc[5]),
        spect=None,
    )
    m21 = _move_matrix(
        cat, T2, T1,
        f_args=lambda sc: (a, b, c, sc[2]),
        row_of=lambda sc, r: (r[0], r[1], sc[2], r[2], sc[4], sc[5]),
        col_of=lambda sc: (sc[0], sc[1], sc[3]),
        spect=None,
    )
    # path A: T4 -> T5 -> T1
    m45 = _move_matrix(
        cat, T4, T5,
        f_args=lambda sc: (a, b, sc[0], sc[4]),
        row_of=lambda sc, r: (r[0], r[1], sc[0], sc[1], sc[4], r[2]),
        col_of=lambda sc: (sc[2], sc[3], sc[5]),
        spect=None,
    )
    m51 = _move_matrix(
        cat, T5, T1,
        f_args=lambda sc: (sc[0], c, d, sc[4]),
        row_of=lambda sc, r: (sc[0], sc[1], r[0], r[1], sc[4], r[2]),
        col_of=lambda sc: (sc[2], sc[3], sc[5]),
        spect=None,
    )
    diff = m21 @ m32 @ m43 - m51 @ m45
    return float(np.max(np.abs(diff))) if diff.size else 0.0


def f_unitarity_residual(cat: CategoryData) -> float:
    """max ||F^dagger F - 1||_max over all nonempty F-blocks."""
    worst = 0.0
    rng = range(cat.size)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    blk = cat.f_block(a, b, c, d)
                    if blk.size:
                        eye = np.eye(blk.shape[1])
                        worst = max(worst, float(np.max(np.abs(blk.conj().T @ blk - eye))))
    return worst


def dimension_residual(cat: CategoryData) -> float:
    """Cross-check of Perron-Frobenius dims against the F-data.

    Uses d_a * |F[a, abar, a; a][(unit), (unit)]| = 1, the loop-evaluation
    relation, as an F-gauge-insensitive consistency probe.
    """
    worst = 0.0
    unit = cat.unit
    for a in range(cat.size):
        abar = int(cat.dual[a])
        rows = cat.f_rows(a, abar, a, a)
        cols = cat.f_cols(a, abar, a, a)
        r = rows.index((unit, 0, 0))
        c = cols.index((unit, 0, 0))
        val = cat.f_block(a, abar, a, a)[r, c]
        worst = max(worst, abs(cat.dims[a] * abs(val) - 1.0))
    return worst


# -- catalog -----------------------------------------------------------------


def catalog_names() -> list[str]:
    files = resources.files("anyonlab").joinpath("catalog")
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))


def load_catalog(name: str) -> CategoryData:
    path = resources.files("anyonlab").joinpath("catalog").joinpath(f"{name}.json")
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise UnknownLabel(f"no catalog entry named {name!r}; have {catalog_names()}") from None
    return load_category(json.loads(text))


def corrupt_f_document(doc: dict, key: str | None = None) -> dict:
    """Return a copy of the document with one F entry sign-flipped.

    Used by fault-injection tests and the CLI --inject-fault flag. Picks the
    first (sorted) key not involving the unit label when none is given.
    """
    out = json.loads(json.dumps(doc))
    unit = doc["unit"]
    if key is None:
        for cand in sorted(out["F"]):
            head = cand.split(";")[0].split(",")
            if unit not in head and abs(complex(*out["F"][cand])) > 1e-12:
                key = cand
                break
    if key is None or key not in out["F"]:
        raise SchemaError("no corruptible F entry found")
    re, im = out["F"][key]
    out["F"][key] = [-re, -im]
    return out
