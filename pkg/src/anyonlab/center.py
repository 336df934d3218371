"""Drinfeld center assembly: simple objects, fusion spaces, F- and R-symbols.

A center simple is a graded object (seats (a, i) over simples of the input
category) together with half-braiding components Omega_c; fusion spaces are
intertwiner spaces solved numerically in the graded morphism calculus, with
deterministic orthonormal bases fixed once and reused by every downstream
consumer. The resulting SymbolTable satisfies the same fusion-datum protocol
as CategoryData (plus braiding blocks), so the tree calculus runs on the
center unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CoherenceError, ShapeMismatch, UnknownLabel
from .hom_calculus import Calculus, Morphism
from . import fusion_data
from . import tube_algebra

__all__ = [
    "CenterObject",
    "SymbolTable",
    "CenterData",
    "center_simples",
    "center_hom",
    "center_symbols",
    "verify_hexagon",
    "s_matrix_unitarity",
    "table_from_document",
]


@dataclass
class CenterObject:
    """A simple object of Z(C): graded underlying object plus half-braiding."""

    cat: object
    label: int
    seats: list[tuple[int, int]]
    omega: dict[int, dict[tuple, Morphism]]
    dim_value: float

    @classmethod
    def from_components(cls, cat, label, seats, omega, dim_value):
        return cls(cat=cat, label=label, seats=list(seats), omega=omega,
                   dim_value=float(dim_value))

    @property
    def n(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (a, _) in self.seats:
            out[a] = out.get(a, 0) + 1
        return out

    def underlying_dim(self) -> float:
        return float(sum(self.cat.dims[a] for (a, _) in self.seats))

    def omega_block(self, c: int, s_out, s_in) -> Morphism:
        return self.omega[c][(s_out, s_in)]

    def snap_identity_components(self, tol: float = 1e-9) -> float:
        """Force Omega_unit to the exact unit-move; returns the pre-snap residual."""
        calc = _calc(self.cat)
        unit = self.cat.unit
        worst = 0.0
        fixed = {}
        for s_out in self.seats:
            for s_in in self.seats:
                want = _unit_move(calc, s_in[0]) if s_in == s_out else None
                got = self.omega[unit][(s_out, s_in)]
                if want is None:
                    worst = max(worst, got.norm())
                    fixed[(s_out, s_in)] = calc.zero(got.source, got.target)
                else:
                    worst = max(worst, (got - want).norm())
                    fixed[(s_out, s_in)] = want
        self.omega[unit] = fixed
        return worst

    def coherence_residuals(self) -> dict[str, float]:
        """Unit, unitarity and combined naturality/hexagon residuals."""
        cat, calc = self.cat, _calc(self.cat)
        res = {"unit": 0.0, "unitary": 0.0, "hexagon": 0.0}
        unit = cat.unit
        for s_out in self.seats:
            for s_in in self.seats:
                got = self.omega[unit][(s_out, s_in)]
                want = _unit_move(calc, s_in[0]) if s_in == s_out else None
                diff = (got - want) if want is not None else got
                res["unit"] = max(res["unit"], diff.norm())
        for c in range(cat.size):
            for ch, U in self._sigma_channel_matrices(c).items():
                if U.size:
                    eye = np.eye(U.shape[1])
                    res["unitary"] = max(res["unitary"],
                                         float(np.max(np.abs(U.conj().T @ U - eye))))
        res["hexagon"] = self._hexagon_residual()
        return res

    def _sigma_channel_matrices(self, c: int) -> dict[int, np.ndarray]:
        """sigma_c per channel as one matrix over (seat, path) coordinates."""
        cat, calc = self.cat, _calc(self.cat)
        chans: dict[int, tuple[list, list]] = {}
        for si, s_in in enumerate(self.seats):
            a = s_in[0]
            for ch, plist in calc.paths((a, c)).items():
                chans.setdefault(ch, ([], []))[0].extend(
                    (si, p) for p in range(len(plist)))
        for so, s_out in enumerate(self.seats):
            b = s_out[0]
            for ch, plist in calc.paths((c, b)).items():
                if ch in chans:
                    chans[ch][1].extend((so, p) for p in range(len(plist)))
        out = {}
        for ch, (src, tgt) in chans.items():
            U = np.zeros((len(tgt), len(src)), dtype=complex)
            for j, (si, sp) in enumerate(src):
                for i, (so, tp) in enumerate(tgt):
                    mor = self.omega[c][(self.seats[so], self.seats[si])]
                    blk = mor.blocks.get(ch)
                    if blk is not None and blk.size:
                        U[i, j] = blk[tp, sp]
            out[ch] = U
        return out

    def _hexagon_residual(self) -> float:
        """(V (x) id_X) sigma_z = (id_x (x) sigma_y)(sigma_x (x) id_y)(id_X (x) V)."""
        cat, calc = self.cat, _calc(self.cat)
        worst = 0.0
        k = cat.size
        for x in range(k):
            for y in range(k):
                for z in range(k):
                    for gamma in range(cat.N[x, y, z]):
                        V = calc.vertex(x, y, z, gamma)
                        for s_out in self.seats:
                            for s_in in self.seats:
                                a, b = s_in[0], s_out[0]
                                # lhs: (a, z) -> (z, b) -> (x, y, b)
                                lhs = calc.compose(
                                    _loc(calc, (z, b), 0, 1, V),
                                    self.omega[z][(s_out, s_in)])
                                # rhs: (a, z) -> (a, x, y) -> (x, mid, y) -> (x, y, b)
                                rhs = calc.zero((a, z), (x, y, b))
                                base = _loc(calc, (a, z), 1, 2, V)
                                for s_mid in self.seats:
                                    m = s_mid[0]
                                    t1 = _loc(calc, (a, x, y), 0, 2,
                                              self.omega[x][(s_mid, s_in)])
                                    t2 = _loc(calc, (x, m, y), 1, 3,
                                              self.omega[y][(s_out, s_mid)])
                                    rhs = rhs + calc.compose(t2, calc.compose(t1, base))
                                worst = max(worst, (lhs - rhs).norm())
        return worst


def _calc(cat) -> Calculus:
    calc = getattr(cat, "_calculus", None)
    if calc is None:
        calc = Calculus(cat)
        try:
            cat._calculus = calc
        except AttributeError:
            pass
    return calc


def _loc(calc: Calculus, word, i, j, g: Morphism) -> Morphism:
    return Morphism(word, word[:i] + g.target + word[j:],
                    calc.local_matrix(word, i, j, g))


def _unit_move(calc: Calculus, a: int) -> Morphism:
    """Canonical (a, unit) -> (unit, a)."""
    unit = calc.data.unit
    rem = Morphism((unit,), (), {unit: np.array([[1.0 + 0j]])})
    ins = Morphism((), (unit,), {unit: np.array([[1.0 + 0j]])})
    m1 = _loc(calc, (a, unit), 1, 2, rem)
    return calc.compose(_loc(calc, (a,), 0, 0, ins), m1)


# -- graded morphisms over words of center objects ----------------------------


@dataclass
class GMor:
    """Morphism between tensor words of center objects, stored blockwise.

    Keys are tuples of seats (one per factor); each block is a plain Morphism
    between the corresponding simple words.
    """

    src: tuple[int, ...]   # center labels
    tgt: tuple[int, ...]
    blocks: dict[tuple, Morphism] = field(default_factory=dict)

    def add_block(self, tkey, skey, mor: Morphism):
        key = (tkey, skey)
        if key in self.blocks:
            self.blocks[key] = self.blocks[key] + mor
        else:
            self.blocks[key] = mor

    def norm(self) -> float:
        return max((m.norm() for m in self.blocks.values()), default=0.0)

    def __add__(self, other: "GMor") -> "GMor":
        out = GMor(self.src, self.tgt, dict(self.blocks))
        for (t, s), m in other.blocks.items():
            if (t, s) in out.blocks:
                out.blocks[(t, s)] = out.blocks[(t, s)] + m
            else:
                out.blocks[(t, s)] = m
        return out

    def __sub__(self, other: "GMor") -> "GMor":
        return self + (other * (-1.0))

    def __mul__(self, scalar) -> "GMor":
        return GMor(self.src, self.tgt,
                    {k: m * scalar for k, m in self.blocks.items()})

    __rmul__ = __mul__


class CenterData:
    """Center simples of one category plus cached fusion machinery."""

    def __init__(self, cat, seed: int = 0xC0FFEE):
        self.cat = cat
        self.calc = _calc(cat)
        self.seed = seed
        table = tube_algebra.build_tube(cat, _one_point())
        units = tube_algebra.decompose(table, seed=seed)
        objs = [tube_algebra.extract_half_braidings(cat, units, i)
                for i in range(len(units.blocks))]
        self.tube = units
        self.objects = _order_vacuum_first(cat, objs)
        for i, obj in enumerate(self.objects):
            obj.label = i
        for obj in self.objects:
            obj.snap_identity_components()
        _snap_vacuum(cat, self.objects[0])
        self._hom_cache: dict[tuple, list[GMor]] = {}

    # -- structure ---------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.objects)

    def dims(self) -> np.ndarray:
        return np.array([o.dim_value for o in self.objects])

    def seats(self, X: int):
        return self.objects[X].seats

    def word_seats(self, labels: tuple[int, ...]):
        """All seat tuples of a word of center labels."""
        pools = [self.objects[X].seats for X in labels]
        out = [()]
        for pool in pools:
            out = [t + (s,) for t in out for s in pool]
        return out

    def seat_word(self, skey) -> tuple[int, ...]:
        return tuple(s[0] for s in skey)

    def identity_g(self, labels: tuple[int, ...]) -> GMor:
        g = GMor(labels, labels)
        for skey in self.word_seats(labels):
            g.add_block(skey, skey, self.calc.identity(self.seat_word(skey)))
        return g

    def compose_g(self, g: GMor, f: GMor) -> GMor:
        if f.tgt != g.src:
            raise ShapeMismatch("graded composition mismatch")
        out = GMor(f.src, g.tgt)
        by_mid: dict[tuple, list] = {}
        for (t, s), m in f.blocks.items():
            by_mid.setdefault(t, []).append((s, m))
        for (t2, s2), m2 in g.blocks.items():
            for (s, m) in by_mid.get(s2, ()):
                out.add_block(t2, s, self.calc.compose(m2, m))
        return out

    def dagger_g(self, f: GMor) -> GMor:
        out = GMor(f.tgt, f.src)
        for (t, s), m in f.blocks.items():
            out.add_block(s, t, self.calc.dagger(m))
        return out

    def tensor_g(self, f: GMor, g: GMor) -> GMor:
        out = GMor(f.src + g.src, f.tgt + g.tgt)
        for (t1, s1), m1 in f.blocks.items():
            for (t2, s2), m2 in g.blocks.items():
                out.add_block(t1 + t2, s1 + s2, self.calc.tensor(m1, m2))
        return out

    def pair_g(self, f: GMor, g: GMor) -> complex:
        """tr(f^dagger g) over the underlying category."""
        if f.src != g.src or f.tgt != g.tgt:
            raise ShapeMismatch("graded pairing mismatch")
        total = 0.0 + 0.0j
        for key, m in f.blocks.items():
            m2 = g.blocks.get(key)
            if m2 is not None:
                total += self.calc.trace_inner_product(m, m2)
        return complex(total)

    def braiding_g(self, X: int, Y: int) -> GMor:
        """beta_{X,Y} : X (x) Y -> Y (x) X from the half-braiding of X."""
        out = GMor((X, Y), (Y, X))
        oX = self.objects[X]
        for sy in self.objects[Y].seats:
            b = sy[0]
            for s_out in oX.seats:
                for s_in in oX.seats:
                    out.add_block((sy, s_out), (s_in, sy),
                                  oX.omega[b][(s_out, s_in)])
        return out

    # -- fusion spaces -------------------------------------------------------

    def hom_basis(self, X: int, Y: int, W: int) -> list[GMor]:
        """Deterministic orthonormal basis of Z(C)(X (x) Y -> W).

        Basis elements are isometries (f^dagger f = id_W). Unit-containing
        spaces use the canonical unitors, making unit F-blocks exactly 1.
        """
        key = (X, Y, W)
        if key in self._hom_cache:
            return self._hom_cache[key]
        vac = 0
        if X == vac or Y == vac:
            basis = [self._unitor(X, Y)] if (X == vac and Y == W) or (Y == vac and X == W) else []
            self._hom_cache[key] = basis
            return basis
        basis = self._solve_hom(X, Y, W)
        self._hom_cache[key] = basis
        return basis

    def _unitor(self, X: int, Y: int) -> GMor:
        vac = 0
        svac = self.objects[vac].seats[0]
        W = Y if X == vac else X
        out = GMor((X, Y), (W,))
        for sw in self.objects[W].seats:
            a = sw[0]
            if X == vac:
                unit_rm = _loc(self.calc, (svac[0], a), 0, 1,
                               Morphism((self.cat.unit,), (),
                                        {self.cat.unit: np.array([[1.0 + 0j]])}))
                out.add_block((sw,), (svac, sw), unit_rm)
            else:
                unit_rm = _loc(self.calc, (a, svac[0]), 1, 2,
                               Morphism((self.cat.unit,), (),
                                        {self.cat.unit: np.array([[1.0 + 0j]])}))
                out.add_block((sw,), (sw, svac), unit_rm)
        return out

    def _candidate_basis(self, X: int, Y: int, W: int) -> list[GMor]:
        out = []
        for sx in self.objects[X].seats:
            for sy in self.objects[Y].seats:
                src = (sx[0], sy[0])
                for sw in self.objects[W].seats:
                    tgt = (sw[0],)
                    for m in self.calc.basis(src, tgt):
                        g = GMor((X, Y), (W,))
                        g.add_block((sw,), (sx, sy), m)
                        out.append(g)
        return out

    def _intertwine_defect(self, f: GMor, X: int, Y: int, W: int, c: int) -> GMor:
        """(id_c (x) f) o sigma^{X(x)Y}_c - sigma^W_c o (f (x) id_c)."""
        calc = self.calc
        oX, oY, oW = self.objects[X], self.objects[Y], self.objects[W]
        out = GMor((X, Y), (W,))   # scratch container: blocks map (a,b,c)->(c,w)
        for sx in oX.seats:
            for sy in oY.seats:
                a, b = sx[0], sy[0]
                src = (a, b, c)
                for sw in oW.seats:
                    w = sw[0]
                    tgt = (c, w)
                    val = calc.zero(src, tgt)
                    # sigma^{XY}_c = (sigma^X_c (x) id_Y) o (id_X (x) sigma^Y_c)
                    for sy2 in oY.seats:
                        b2 = sy2[0]
                        t1 = _loc(calc, (a, b, c), 1, 3, oY.omega[c][(sy2, sy)])
                        for sx2 in oX.seats:
                            a2 = sx2[0]
                            t2 = _loc(calc, (a, c, b2), 0, 2, oX.omega[c][(sx2, sx)])
                            fb = f.blocks.get(((sw,), (sx2, sy2)))
                            if fb is None:
                                continue
                            t3 = _loc(calc, (c, a2, b2), 1, 3, fb)
                            val = val + calc.compose(t3, calc.compose(t2, t1))
                    # RHS: sigma^W_c o (f (x) id_c)
                    for sw2 in oW.seats:
                        fb = f.blocks.get(((sw2,), (sx, sy)))
                        if fb is None:
                            continue
                        t1 = _loc(calc, (a, b, c), 0, 2, fb)
                        t2 = _loc(calc, (sw2[0], c), 0, 2, oW.omega[c][(sw, sw2)])
                        val = val - calc.compose(t2, t1)
                    out.add_block((sw, c), (sx, sy), val)
        return out

    def _solve_hom(self, X: int, Y: int, W: int) -> list[GMor]:
        cands = self._candidate_basis(X, Y, W)
        if not cands:
            return []
        cols = []
        for f in cands:
            rows = []
            for c in range(self.cat.size):
                defect = self._intertwine_defect(f, X, Y, W, c)
                rows.append(self._flatten(defect))
            cols.append(np.concatenate(rows))
        A = np.array(cols).T
        if not A.size:
            coeffs = np.eye(len(cands))
        else:
            _, s, vh = np.linalg.svd(A)
            smax = s[0] if len(s) else 0.0
            rank = int(np.sum(s > 1e-8 * max(1.0, smax)))
            coeffs = vh[rank:].conj()
        basis = []
        vecs = []
        for row in coeffs:
            g = GMor((X, Y), (W,))
            for coef, cand in zip(row, cands):
                if abs(coef) > 0:
                    for (t, s_), m in cand.blocks.items():
                        g.add_block(t, s_, m * coef)
            vecs.append(g)
        return self._orthonormalize(vecs, W)

    def _flatten(self, g: GMor) -> np.ndarray:
        segs = []
        for key in sorted(g.blocks, key=repr):
            segs.append(self.calc.coordinates(g.blocks[key]))
        return np.concatenate(segs) if segs else np.zeros(0, dtype=complex)

    def _orthonormalize(self, vecs: list[GMor], W: int) -> list[GMor]:
        dW = self.objects[W].dim_value
        out = []
        for g in vecs:
            for h in out:
                g = g - h * (self.pair_g(h, g) / dW)
            nrm = np.sqrt(abs(self.pair_g(g, g)) / dW)
            if nrm < 1e-10:
                continue
            g = g * (1.0 / nrm)
            g = g * self._phase_fix(g)
            out.append(g)
        return out

    def _phase_fix(self, g: GMor) -> complex:
        best, mag = 1.0 + 0j, 0.0
        for key in sorted(g.blocks, key=repr):
            vec = self.calc.coordinates(g.blocks[key])
            for v in vec:
                if abs(v) > mag + 1e-12:
                    mag, best = abs(v), v
        return np.conj(best) / abs(best) if mag > 0 else 1.0 + 0j

    # -- symbols ---------------------------------------------------------------

    def fusion_tensor(self) -> np.ndarray:
        n = self.size
        N = np.zeros((n, n, n), dtype=int)
        for X in range(n):
            for Y in range(n):
                for W in range(n):
                    N[X, Y, W] = len(self.hom_basis(X, Y, W))
        return N


def _one_point():
    from .hom_calculus import ObjectWord
    return ObjectWord(((0, +1),))


def _order_vacuum_first(cat, objs):
    calc = _calc(cat)

    def is_vacuum(o: CenterObject) -> bool:
        if len(o.seats) != 1 or o.seats[0][0] != cat.unit:
            return False
        for c in range(cat.size):
            want = _unit_move_like(calc, c)
            got = o.omega[c][(o.seats[0], o.seats[0])]
            if (got - want).norm() > 1e-7:
                return False
        return True

    vac = [o for o in objs if is_vacuum(o)]
    rest = [o for o in objs if o not in vac]
    if len(vac) != 1:
        raise CoherenceError(f"expected a unique vacuum block, found {len(vac)}")
    return vac + rest


def _snap_vacuum(cat, vac: CenterObject) -> None:
    """Replace vacuum half-braiding components with exact unit moves."""
    calc = _calc(cat)
    seat = vac.seats[0]
    for c in range(cat.size):
        vac.omega[c] = {(seat, seat): _unit_move_like(calc, c)}


def _unit_move_like(calc: Calculus, c: int) -> Morphism:
    """Canonical (unit, c) -> (c, unit)."""
    unit = calc.data.unit
    rem = Morphism((unit,), (), {unit: np.array([[1.0 + 0j]])})
    ins = Morphism((), (unit,), {unit: np.array([[1.0 + 0j]])})
    m1 = _loc(calc, (unit, c), 0, 1, rem)
    return calc.compose(_loc(calc, (c,), 1, 1, ins), m1)


# -- SymbolTable ---------------------------------------------------------------


@dataclass
class SymbolTable:
    """F- and R-symbol tensors of a semisimple braided category.

    Implements the fusion-datum protocol (labels, N, dual, dims, f_block) so
    the tree calculus can run directly on it, plus braiding blocks. R-blocks
    hold post-composition matrices: coordinates of beta_{x,y} o V^{xy}_{u,m}
    in the basis V^{yx}_{u,r}.
    """

    labels: tuple[str, ...]
    N: np.ndarray
    dual: np.ndarray
    dims: np.ndarray
    F: dict[tuple[int, int, int, int], np.ndarray]
    R: dict[tuple[int, int, int], np.ndarray]
    unit: int = 0
    unitary: bool = True

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def total_dim_sq(self) -> float:
        return float(np.sum(self.dims**2))

    @property
    def braided(self) -> bool:
        return True

    def index(self, label: str) -> int:
        try:
            return list(self.labels).index(label)
        except ValueError:
            raise UnknownLabel(label) from None

    def f_rows(self, a, b, c, d):
        N = self.N
        return [(e, m1, m2) for e in range(self.size)
                for m1 in range(N[a, b, e]) for m2 in range(N[e, c, d])]

    def f_cols(self, a, b, c, d):
        N = self.N
        return [(f, m3, m4) for f in range(self.size)
                for m3 in range(N[b, c, f]) for m4 in range(N[a, f, d])]

    def f_block(self, a, b, c, d) -> np.ndarray:
        key = (a, b, c, d)
        blk = self.F.get(key)
        if blk is None:
            blk = np.zeros((len(self.f_rows(*key)), len(self.f_cols(*key))), dtype=complex)
            self.F[key] = blk
        return blk

    def braiding_block(self, x, y, u) -> np.ndarray:
        blk = self.R.get((x, y, u))
        if blk is None:
            blk = np.zeros((self.N[y, x, u], self.N[x, y, u]), dtype=complex)
            self.R[(x, y, u)] = blk
        return blk

    def to_document(self) -> dict:
        doc = {
            "simples": list(self.labels),
            "unit": self.labels[self.unit],
            "dual": {self.labels[a]: self.labels[int(self.dual[a])]
                     for a in range(self.size)},
            "fusion": {},
            "F": {},
            "R": {},
            "dims": {self.labels[a]: float(self.dims[a]) for a in range(self.size)},
            "unitary": self.unitary,
        }
        for a in range(self.size):
            for b in range(self.size):
                for c in range(self.size):
                    if self.N[a, b, c]:
                        doc["fusion"][f"{self.labels[a]},{self.labels[b]},{self.labels[c]}"] = \
                            int(self.N[a, b, c])
        for (a, b, c, d), blk in self.F.items():
            rows = self.f_rows(a, b, c, d)
            cols = self.f_cols(a, b, c, d)
            for i, (e, m1, m2) in enumerate(rows):
                for j, (f, m3, m4) in enumerate(cols):
                    key = (f"{self.labels[a]},{self.labels[b]},{self.labels[c]};"
                           f"{self.labels[d]};{self.labels[e]},{self.labels[f]};"
                           f"{m1},{m2},{m3},{m4}")
                    doc["F"][key] = [float(blk[i, j].real), float(blk[i, j].imag)]
        for (x, y, u), blk in self.R.items():
            for r in range(blk.shape[0]):
                for m in range(blk.shape[1]):
                    key = f"{self.labels[x]},{self.labels[y]};{self.labels[u]};{r},{m}"
                    doc["R"][key] = [float(blk[r, m].real), float(blk[r, m].imag)]
        return doc


def table_from_document(doc: dict) -> SymbolTable:
    """Rebuild a SymbolTable from its serialized document."""
    base = fusion_data.load_category({k: v for k, v in doc.items() if k != "R" and k != "dims"})
    labels = base.labels
    idx = {lab: i for i, lab in enumerate(labels)}
    R: dict[tuple[int, int, int], np.ndarray] = {}
    for key, val in doc.get("R", {}).items():
        xy, u, rm = key.split(";")
        x, y = (idx[s] for s in xy.split(","))
        uu = idx[u]
        r, m = (int(s) for s in rm.split(","))
        blk = R.setdefault((x, y, uu), np.zeros((base.N[y, x, uu], base.N[x, y, uu]),
                                                dtype=complex))
        blk[r, m] = complex(val[0], val[1])
    return SymbolTable(labels=labels, N=base.N.copy(), dual=base.dual.copy(),
                       dims=base.dims.copy(), F=dict(base.F), R=R,
                       unit=base.unit, unitary=base.unitary)


# -- public ops ----------------------------------------------------------------


def center_simples(cat, seed: int = 0xC0FFEE) -> list[CenterObject]:
    """One CenterObject per tube block, vacuum first."""
    return CenterData(cat, seed=seed).objects


def center_hom(center: CenterData, X: int, Y: int, W: int) -> list[GMor]:
    """Orthonormal basis of Z(C)(X (x) Y -> W)."""
    return center.hom_basis(X, Y, W)


def center_symbols(cat_or_center, seed: int = 0xC0FFEE,
                   tol: float = 1e-6) -> SymbolTable:
    """Assemble the full F/R SymbolTable of the Drinfeld center.

    Aborts with CoherenceError if the assembled table fails pentagon or
    hexagon beyond ``tol`` (signals a basis/sign bug upstream).
    """
    cd = cat_or_center if isinstance(cat_or_center, CenterData) else CenterData(cat_or_center, seed=seed)
    n = cd.size
    N = cd.fusion_tensor()
    dims = cd.dims()
    dual = np.zeros(n, dtype=int)
    for X in range(n):
        cands = [W for W in range(n) if N[X, W, 0] == 1]
        if len(cands) != 1:
            raise CoherenceError(f"no unique dual for center simple {X}")
        dual[X] = cands[0]

    labels = tuple(f"Z{i}" for i in range(n))
    table = SymbolTable(labels=labels, N=N, dual=dual, dims=dims, F={}, R={})

    for X in range(n):
        for Y in range(n):
            for Z in range(n):
                for W in range(n):
                    blk = _f_block_from_bases(cd, N, X, Y, Z, W)
                    if blk is not None:
                        table.F[(X, Y, Z, W)] = blk
    for X in range(n):
        for Y in range(n):
            beta = cd.braiding_g(X, Y)
            for U in range(n):
                nxy, nyx = N[X, Y, U], N[Y, X, U]
                if nxy == 0 and nyx == 0:
                    continue
                bx = cd.hom_basis(X, Y, U)
                by = cd.hom_basis(Y, X, U)
                R = np.zeros((nyx, nxy), dtype=complex)
                dU = cd.objects[U].dim_value
                for m, f in enumerate(bx):
                    # coords of beta o f^dagger (a splitting U -> Y (x) X map)
                    # in the splitting basis {g^dagger}
                    moved = cd.compose_g(beta, cd.dagger_g(f))
                    for r, g in enumerate(by):
                        R[r, m] = cd.pair_g(cd.dagger_g(g), moved) / dU
                table.R[(X, Y, U)] = R

    pent = fusion_data.verify_pentagon(table)
    hexr = verify_hexagon(table)
    if max(pent, hexr) > tol:
        raise CoherenceError(f"center table fails coherence: pentagon {pent:.2e}, hexagon {hexr:.2e}")
    return table


def _f_block_from_bases(cd: CenterData, N, X, Y, Z, W):
    rows = [(e, m1, m2) for e in range(cd.size)
            for m1 in range(N[X, Y, e]) for m2 in range(N[e, Z, W])]
    cols = [(f, m3, m4) for f in range(cd.size)
            for m3 in range(N[Y, Z, f]) for m4 in range(N[X, f, W])]
    if not rows or not cols:
        return None
    dW = cd.objects[W].dim_value
    lefts = []
    for (e, m1, m2) in rows:
        eta = cd.hom_basis(X, Y, e)[m1]
        xi = cd.hom_basis(e, Z, W)[m2]
        lefts.append(cd.compose_g(xi, cd.tensor_g(eta, cd.identity_g((Z,)))))
    rights = []
    for (f, m3, m4) in cols:
        delta = cd.hom_basis(Y, Z, f)[m3]
        gamma = cd.hom_basis(X, f, W)[m4]
        rights.append(cd.compose_g(gamma, cd.tensor_g(cd.identity_g((X,)), delta)))
    blk = np.zeros((len(rows), len(cols)), dtype=complex)
    # engine F acts on splitting trees (daggers of these fusion composites),
    # so the coefficient is tr(l o r^dagger)/d_W = conj(tr(l^dagger o r))/d_W
    for i, l in enumerate(lefts):
        for j, r in enumerate(rights):
            blk[i, j] = cd.pair_g(r, l) / dW
    return blk


# -- coherence checks on tables -------------------------------------------------


def verify_hexagon(table: SymbolTable) -> float:
    """Residual of both hexagon axioms via tree moves on 3-leaf words."""
    calc = Calculus(table)
    worst = 0.0
    n = table.size
    for inverse in (False, True):
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    word = (x, y, z)
                    chans = calc.paths(word)
                    # path A: braid(x past y) then braid(x past z)
                    A1 = calc.braid_matrix(word, 0, inverse=inverse)
                    A2 = calc.braid_matrix((y, x, z), 1, inverse=inverse)
                    # path B: fuse (y,z), braid x past the pair, unfuse
                    for c, plist in chans.items():
                        if not plist:
                            continue
                        B = _braid_past_pair(calc, word, c, inverse)
                        Afull = A2[c] @ A1[c]
                        worst = max(worst, float(np.max(np.abs(Afull - B))))
    return worst


def _braid_past_pair(calc: Calculus, word, c, inverse):
    """Matrix on C(c -> (x,y,z)) of braiding x past the fused (y,z) pair."""
    x, y, z = word
    data = calc.data
    src_paths = calc.paths(word)[c]
    tgt_paths = calc.paths((y, z, x))[c]
    M = np.zeros((len(tgt_paths), len(src_paths)), dtype=complex)
    src_idx = {p: i for i, p in enumerate(src_paths)}
    tgt_idx = {p: i for i, p in enumerate(tgt_paths)}
    cols1, G1 = calc.seg_fuse(x, (y, z), c)     # fuse tail of (x,(y,z))
    # source path: ((x,0),(m,mu),(c,nu)) -- tail segment from state x
    for p, pi in src_idx.items():
        segpaths = calc.seg_paths(x, (y, z), c)
        sp = p[1:]
        si = segpaths.index(sp)
        for j, (u, upath, nu) in enumerate(cols1):
            # chain basis expanded in the fused basis: conjugate of G1
            amp = np.conj(G1[si, j])
            if amp == 0:
                continue
            # braid x past u: R-post on the (x,u) vertex with channel c
            R = data.braiding_block(x, u, c)
            R = R.conj().T if inverse else R
            for nu2 in range(data.N[u, x, c]):
                coeff = amp * R[nu2, nu]
                if coeff == 0:
                    continue
                # target path: the (y,z)-tree upath followed by the (u,x->c) vertex
                for q, qi in tgt_idx.items():
                    # q = ((y,0),(m',mu'),(c,nu2')) with segment (y,z) path upath then x
                    if q[-1] != (c, nu2):
                        continue
                    if _path_matches(q, upath):
                        M[qi, pi] += coeff
    return M


def _path_matches(q, upath) -> bool:
    """First two entries of q realize the standalone (y,z) path upath."""
    return q[0] == upath[0] and q[1] == upath[1]


def s_matrix_unitarity(table: SymbolTable) -> float:
    """Unitarity residual of S = S-tilde / D^2 built from monodromy traces."""
    n = table.size
    S = np.zeros((n, n), dtype=complex)
    for X in range(n):
        for Y in range(n):
            val = 0.0 + 0.0j
            for u in range(n):
                Rxy = table.braiding_block(X, Y, u)
                Ryx = table.braiding_block(Y, X, u)
                if Rxy.size:
                    val += table.dims[u] * np.trace(Rxy @ Ryx)
            S[X, Y] = val
    S /= np.sqrt(table.total_dim_sq)
    return float(np.max(np.abs(S.conj().T @ S - np.eye(n))))
