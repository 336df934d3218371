"""Finite-dimensional graphical calculus over a fusion datum.

Hom spaces C(c -> x1 (x) ... (x) xn) are coordinatized by left-nested fusion
trees: a path ((m1,mu1), ..., (mn,mun)) with m0 = unit, mk in fusion of
m_{k-1} and x_k, and mn = c. Vertices are isometry-normalized, so every tree
basis of a hom space is orthogonal with squared trace-norm d_c, all
recoupling matrices are unitary, and a morphism is stored as one complex
matrix per channel c.

The same machinery serves the input category and its computed Drinfeld
center (any object satisfying the FusionDatum accessors, e.g. SymbolTable).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, ShapeMismatch, UnknownLabel

__all__ = [
    "ObjectWord",
    "Morphism",
    "Calculus",
    "hom_dim",
    "compose",
    "tensor",
    "dagger",
    "trace_inner_product",
    "skein_inner_product",
    "dotted_line_expand",
]

Word = tuple  # tuple[int, ...]
Path = tuple  # tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ObjectWord:
    """An ordered list of (simple label index, orientation) pairs.

    Orientation -1 denotes the dual strand; ``effective`` substitutes the
    dual representative so downstream tree machinery sees plain labels.
    """

    entries: tuple[tuple[int, int], ...]

    def effective(self, data) -> Word:
        out = []
        for lab, sign in self.entries:
            if not 0 <= lab < data.size:
                raise UnknownLabel(lab)
            out.append(lab if sign >= 0 else int(data.dual[lab]))
        return tuple(out)

    def __len__(self) -> int:
        return len(self.entries)

    @staticmethod
    def plain(labels) -> "ObjectWord":
        return ObjectWord(tuple((int(l), +1) for l in labels))


@dataclass
class Morphism:
    """Element of C(source -> target) as channel-diagonal coordinate blocks.

    ``blocks[c]`` has shape (dim C(c->target), dim C(c->source)); channels
    with zero-dimensional spaces may be absent.
    """

    source: Word
    target: Word
    blocks: dict[int, np.ndarray]

    def block(self, c: int, calc: "Calculus") -> np.ndarray:
        blk = self.blocks.get(c)
        if blk is None:
            blk = np.zeros((calc.hom_count(c, self.target), calc.hom_count(c, self.source)),
                           dtype=complex)
        return blk

    def norm(self) -> float:
        return max((float(np.max(np.abs(b))) for b in self.blocks.values() if b.size),
                   default=0.0)

    def __add__(self, other: "Morphism") -> "Morphism":
        if self.source != other.source or self.target != other.target:
            raise ShapeMismatch("morphism addition requires equal words")
        out = {c: b.copy() for c, b in self.blocks.items()}
        for c, b in other.blocks.items():
            out[c] = out.get(c, np.zeros_like(b)) + b
        return Morphism(self.source, self.target, out)

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + (other * (-1.0))

    def __mul__(self, scalar) -> "Morphism":
        return Morphism(self.source, self.target,
                        {c: b * scalar for c, b in self.blocks.items()})

    __rmul__ = __mul__


class Calculus:
    """Tree-basis calculus bound to one fusion datum (category or center)."""

    def __init__(self, data):
        self.data = data
        self._paths: dict[Word, dict[int, list[Path]]] = {}
        self._seg: dict = {}
        self._braid: dict = {}
        self._duality = None

    # -- bases ----------------------------------------------------------

    def paths(self, word: Word) -> dict[int, list[Path]]:
        """All fusion paths of a word, grouped by root channel."""
        cached = self._paths.get(word)
        if cached is not None:
            return cached
        N, unit, k = self.data.N, self.data.unit, self.data.size
        states: dict[int, list[Path]] = {unit: [()]}
        for x in word:
            nxt: dict[int, list[Path]] = {}
            for m_prev, plist in states.items():
                for m in range(k):
                    mult = N[m_prev, x, m]
                    for mu in range(mult):
                        step = ((m, mu),)
                        nxt.setdefault(m, []).extend(p + step for p in plist)
            states = nxt
        states = {c: sorted(states[c]) for c in sorted(states)}
        self._paths[word] = states
        return states

    def hom_count(self, c: int, word: Word) -> int:
        return len(self.paths(word).get(c, ()))

    def path_index(self, word: Word) -> dict[int, dict[Path, int]]:
        return {c: {p: i for i, p in enumerate(ps)} for c, ps in self.paths(word).items()}

    # -- elementary morphisms --------------------------------------------

    def identity(self, word: Word) -> Morphism:
        return Morphism(word, word,
                        {c: np.eye(len(ps), dtype=complex)
                         for c, ps in self.paths(word).items() if ps})

    def zero(self, source: Word, target: Word) -> Morphism:
        return Morphism(source, target, {})

    def vertex(self, x: int, y: int, z: int, mu: int = 0) -> Morphism:
        """Elementary splitting vertex V^{xy}_{z,mu} : (z) -> (x, y)."""
        tgt = (x, y)
        ps = self.paths(tgt).get(z, [])
        want = ((x, 0), (z, mu))
        col = np.zeros((len(ps), 1), dtype=complex)
        col[ps.index(want), 0] = 1.0
        return Morphism((z,), tgt, {z: col})

    def basis(self, source: Word, target: Word) -> list[Morphism]:
        """Orthogonal basis of C(source -> target); coordinates are blocks."""
        out = []
        src, tgt = self.paths(source), self.paths(target)
        for c in sorted(set(src) & set(tgt)):
            ns, nt = len(src[c]), len(tgt[c])
            for t in range(nt):
                for s in range(ns):
                    blk = np.zeros((nt, ns), dtype=complex)
                    blk[t, s] = 1.0
                    out.append(Morphism(source, target, {c: blk}))
        return out

    def coordinates(self, mor: Morphism) -> np.ndarray:
        """Flatten blocks in the enumeration order of :meth:`basis`."""
        src, tgt = self.paths(mor.source), self.paths(mor.target)
        segs = []
        for c in sorted(set(src) & set(tgt)):
            segs.append(mor.block(c, self).reshape(-1))
        return np.concatenate(segs) if segs else np.zeros(0, dtype=complex)

    def from_coordinates(self, source: Word, target: Word, vec: np.ndarray) -> Morphism:
        src, tgt = self.paths(source), self.paths(target)
        blocks, off = {}, 0
        for c in sorted(set(src) & set(tgt)):
            ns, nt = len(src[c]), len(tgt[c])
            blocks[c] = np.asarray(vec[off:off + ns * nt], dtype=complex).reshape(nt, ns)
            off += ns * nt
        if off != len(vec):
            raise ShapeMismatch("coordinate vector has wrong length")
        return Morphism(source, target, blocks)

    # -- composition, dagger, tensor, traces ------------------------------

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        if f.target != g.source:
            raise ShapeMismatch(f"cannot compose {g.source} after {f.target}")
        out = {}
        for c in set(f.blocks) & set(g.blocks):
            out[c] = g.blocks[c] @ f.blocks[c]
        return Morphism(f.source, g.target, out)

    def dagger(self, f: Morphism) -> Morphism:
        return Morphism(f.target, f.source,
                        {c: b.conj().T for c, b in f.blocks.items()})

    def trace(self, f: Morphism) -> complex:
        if f.source != f.target:
            raise ShapeMismatch("trace requires an endomorphism")
        dims = self.data.dims
        return complex(sum(dims[c] * np.trace(b) for c, b in f.blocks.items()))

    def trace_inner_product(self, f: Morphism, g: Morphism) -> complex:
        if f.source != g.source or f.target != g.target:
            raise ShapeMismatch("trace inner product requires equal words")
        dims = self.data.dims
        total = 0.0 + 0.0j
        for c in set(f.blocks) | set(g.blocks):
            total += dims[c] * np.sum(f.block(c, self).conj() * g.block(c, self))
        return complex(total)

    def tensor(self, f: Morphism, g: Morphism) -> Morphism:
        src = f.source + g.source
        tgt = f.target + g.target
        S_src = self._pair_splice(f.source, g.source)
        S_tgt = self._pair_splice(f.target, g.target)
        out = {}
        for c in self.paths(src):
            if not self.paths(src)[c] or c not in self.paths(tgt) or not self.paths(tgt)[c]:
                continue
            cols_s, mat_s = S_src[c] if c in S_src else (None, None)
            cols_t, mat_t = S_tgt[c] if c in S_tgt else (None, None)
            if mat_s is None or mat_t is None:
                continue
            mid = np.zeros((len(cols_t), len(cols_s)), dtype=complex)
            for j, (a, ap, b, bp, mu) in enumerate(cols_s):
                fa = f.blocks.get(a)
                gb = g.blocks.get(b)
                if fa is None or gb is None:
                    continue
                for i, (a2, ap2, b2, bp2, mu2) in enumerate(cols_t):
                    if a2 != a or b2 != b or mu2 != mu:
                        continue
                    mid[i, j] = fa[ap2, ap] * gb[bp2, bp]
            out[c] = mat_t @ mid @ mat_s.conj().T
        return Morphism(src, tgt, out)

    def _pair_splice(self, A: Word, B: Word):
        """Per channel c: (columns [(a, apath_idx, b, bpath_idx, mu)], matrix).

        The matrix sends pair coordinates to path coordinates of A+B.
        """
        key = ("pair", A, B)
        cached = self._seg.get(key)
        if cached is not None:
            return cached
        word = A + B
        out = {}
        pA = self.paths(A)
        idx_word = self.path_index(word)
        for c, plist in self.paths(word).items():
            if not plist:
                continue
            cols = []
            entries = []
            bidx = self.path_index(B)
            for a in sorted(pA):
                apaths = pA[a]
                if not apaths:
                    continue
                gcols, G = self.seg_fuse(a, B, c)
                segs = self.seg_paths(a, B, c)
                for ai, ap in enumerate(apaths):
                    for gj, (b, bpath, mu) in enumerate(gcols):
                        bi = bidx[b][bpath]
                        cols.append((a, ai, b, bi, mu))
                        col_vec = np.zeros(len(plist), dtype=complex)
                        for si, seg in enumerate(segs):
                            full = ap + seg
                            col_vec[idx_word[c][full]] = G[si, gj]
                        entries.append(col_vec)
            mat = np.array(entries, dtype=complex).T if entries else np.zeros((len(plist), 0), complex)
            out[c] = (cols, mat)
        self._seg[key] = out
        return out

    # -- segment machinery -------------------------------------------------

    def seg_paths(self, e: int, seg: Word, g: int) -> list[Path]:
        """Absorption chains from state e through seg leaves ending at g."""
        N, k = self.data.N, self.data.size
        chains = [((), e)]
        for x in seg:
            nxt = []
            for (p, m_prev) in chains:
                for m in range(k):
                    for mu in range(N[m_prev, x, m]):
                        nxt.append((p + ((m, mu),), m))
            chains = nxt
        return [p for (p, m) in chains if m == g]

    def seg_fuse(self, e: int, seg: Word, g: int):
        """Unitary from fused coordinates to absorption-chain coordinates.

        Returns (cols, G): cols enumerates (u, upath, nu) with upath a path of
        the standalone segment word with root u and nu in N[e, u, g]; G maps
        those coordinates to the seg_paths(e, seg, g) enumeration.
        """
        key = ("fuse", e, seg, g)
        cached = self._seg.get(key)
        if cached is not None:
            return cached
        N, k = self.data.N, self.data.size
        rows = self.seg_paths(e, seg, g)
        row_pos = {p: i for i, p in enumerate(rows)}
        if len(seg) == 0:
            cols = [(self.data.unit, (), 0)] if e == g else []
            G = np.eye(len(rows), len(cols), dtype=complex)
            self._seg[key] = (cols, G)
            return cols, G
        if len(seg) == 1:
            x = seg[0]
            cols = [(x, ((x, 0),), nu) for nu in range(N[e, x, g])]
            G = np.zeros((len(rows), len(cols)), dtype=complex)
            for j, (x_, up, nu) in enumerate(cols):
                G[row_pos[((g, nu),)], j] = 1.0
            self._seg[key] = (cols, G)
            return cols, G

        head, y = seg[:-1], seg[-1]
        cols = []
        for u in range(k):
            for upath in self.paths(seg).get(u, []):
                for nu in range(N[e, u, g]):
                    cols.append((u, upath, nu))
        G = np.zeros((len(rows), len(cols)), dtype=complex)
        col_pos = {c: i for i, c in enumerate(cols)}
        for h in range(k):
            hcols, Gh = self.seg_fuse(e, head, h)
            hsegs = self.seg_paths(e, head, h)
            for mu in range(N[h, y, g]):
                # left-tree coordinate (h, nu', mu) against Fmat(e, u', y; g)
                for hj, (up, upath_h, nup) in enumerate(hcols):
                    frows = self.data.f_rows(e, up, y, g)
                    fcols = self.data.f_cols(e, up, y, g)
                    blk = self.data.f_block(e, up, y, g)
                    ri = frows.index((h, nup, mu))
                    for cj, (u, rho, nu) in enumerate(fcols):
                        coeff_row = blk[ri, cj]
                        if coeff_row == 0:
                            continue
                        target_upath = upath_h + ((u, rho),)
                        full_col = col_pos[(u, target_upath, nu)]
                        for si, sp in enumerate(hsegs):
                            amp = Gh[si, hj] * coeff_row
                            if amp == 0:
                                continue
                            G[row_pos[sp + ((g, mu),)], full_col] += amp
        self._seg[key] = (cols, G)
        return cols, G

    def local_matrix(self, word: Word, i: int, j: int, gmor: Morphism) -> dict[int, np.ndarray]:
        """Per channel: matrix of id (x) gmor (x) id acting on C(c -> word).

        ``gmor`` maps word[i:j] to its target segment; positions are 0-based,
        the segment is word[i:j].
        """
        seg = word[i:j]
        if gmor.source != seg:
            raise ShapeMismatch(f"segment {seg} vs morphism source {gmor.source}")
        new_word = word[:i] + gmor.target + word[j:]
        out = {}
        src_paths = self.paths(word)
        tgt_paths = self.paths(new_word)
        for c, plist in src_paths.items():
            if not plist:
                continue
            tlist = tgt_paths.get(c, [])
            M = np.zeros((len(tlist), len(plist)), dtype=complex)
            if len(tlist):
                self._fill_local(M, word, new_word, i, j, gmor, c)
            out[c] = M
        return out

    def _fill_local(self, M, word, new_word, i, j, gmor, c):
        src_idx = self.path_index(word)[c]
        tgt_idx = self.path_index(new_word)[c]
        seg, seg2 = word[i:j], gmor.target
        # group source paths by (prefix, suffix) and transform the segment span
        groups: dict[tuple, list] = {}
        for p in src_idx:
            prefix, segpart, suffix = p[:i], p[i:j], p[j:]
            e = prefix[-1][0] if i > 0 else self.data.unit
            g_exit = segpart[-1][0] if j > i else e
            groups.setdefault((prefix, suffix, e, g_exit), []).append(segpart)
        for (prefix, suffix, e, g_exit), segparts in groups.items():
            cols1, G1 = self.seg_fuse(e, seg, g_exit)
            cols2, G2 = self.seg_fuse(e, seg2, g_exit)
            segs1 = self.seg_paths(e, seg, g_exit)
            segs2 = self.seg_paths(e, seg2, g_exit)
            pos1 = {s: k_ for k_, s in enumerate(segs1)}
            # middle: apply gmor channelwise on (u, upath) with nu spectator
            mid = np.zeros((len(cols2), len(cols1)), dtype=complex)
            for jj, (u, upath, nu) in enumerate(cols1):
                B = gmor.blocks.get(u)
                if B is None:
                    continue
                uidx = self.path_index(seg)[u][upath]
                for ii, (u2, upath2, nu2) in enumerate(cols2):
                    if u2 != u or nu2 != nu:
                        continue
                    uidx2 = self.path_index(seg2)[u2][upath2]
                    mid[ii, jj] = B[uidx2, uidx]
            T = G2 @ mid @ G1.conj().T
            for s2i, s2 in enumerate(segs2):
                trow = prefix + s2 + suffix
                ti = tgt_idx.get(trow)
                if ti is None:
                    continue
                for s1 in segparts:
                    M[ti, src_idx[prefix + s1 + suffix]] += T[s2i, pos1[s1]]

    # -- braiding ----------------------------------------------------------

    def braid_matrix(self, word: Word, i: int, inverse: bool = False) -> dict[int, np.ndarray]:
        """Matrix of id (x) beta_{x_i, x_{i+1}}^{(+-1)} (x) id on C(c -> word)."""
        x, y = word[i], word[i + 1]
        bmor = self.braiding_morphism(x, y, inverse=inverse)
        return self.local_matrix(word, i, i + 2, bmor)

    def braiding_morphism(self, x: int, y: int, inverse: bool = False) -> Morphism:
        """beta_{x,y} : (x,y) -> (y,x) from the datum's braiding blocks."""
        blocks = {}
        for u in range(self.data.size):
            nb = self.data.N[x, y, u]
            if nb == 0:
                continue
            R = self.data.braiding_block(x, y, u)
            blocks[u] = R.conj().T if inverse else R
        return Morphism((x, y), (y, x), blocks)

    # -- duality ------------------------------------------------------------

    def duality(self):
        """Calibrated cups/caps; cup_a in C(() -> (a, abar)), zig-zags = kappa_a."""
        if self._duality is not None:
            return self._duality
        k, unit = self.data.size, self.data.unit
        dual, dims = self.data.dual, self.data.dims
        cups: dict[int, Morphism] = {}
        for a in range(k):
            abar = int(dual[a])
            tgt = (a, abar)
            col = np.zeros((self.hom_count(unit, tgt), 1), dtype=complex)
            col[0, 0] = np.sqrt(dims[a])
            cups[a] = Morphism((), tgt, {unit: col})

        def zig(a: int) -> complex:
            abar = int(dual[a])
            lhs = self.tensor(self.identity((a,)), cups[abar])
            rhs = self.tensor(self.dagger(cups[a]), self.identity((a,)))
            comp = self.compose(rhs, lhs)
            return comp.blocks.get(a, np.zeros((1, 1)))[0, 0]

        kappa = {}
        for a in range(k):
            abar = int(dual[a])
            if a == abar:
                z = zig(a)
                kappa[a] = complex(np.sign(z.real))
                if abs(abs(z) - 1.0) > 1e-8:
                    raise ConsistencyError("self-dual zig-zag is not unimodular", a)
            elif a < abar:
                z = zig(a)
                if abs(z) < 1e-12:
                    raise ConsistencyError("vanishing zig-zag", a)
                cups[abar] = cups[abar] * (1.0 / z)
                kappa[a] = 1.0 + 0j
                kappa[abar] = 1.0 + 0j
        # verify the other bending direction closes
        for a in range(k):
            abar = int(dual[a])
            z2 = self._zig2(cups, a)
            if abs(z2 - kappa[a]) > 1e-8:
                raise ConsistencyError("spherical duality calibration failed", (a, complex(z2)))
        caps = {a: self.dagger(c) for a, c in cups.items()}
        self._duality = (cups, caps, kappa)
        return self._duality

    def _zig2(self, cups, a: int) -> complex:
        abar = int(self.data.dual[a])
        lhs = self.tensor(self.identity((abar,)), cups[a])
        rhs = self.tensor(self.dagger(cups[abar]), self.identity((abar,)))
        comp = self.compose(rhs, lhs)
        return comp.blocks.get(abar, np.zeros((1, 1)))[0, 0]


# -- module-level operation wrappers (spec surface) ---------------------------


def _calc(data) -> Calculus:
    calc = getattr(data, "_calculus", None)
    if calc is None:
        calc = Calculus(data)
        try:
            data._calculus = calc
        except AttributeError:
            pass
    return calc


def hom_dim(data, source: ObjectWord | Word, target: ObjectWord | Word) -> int:
    """dim C(source -> target) = sum_c (trees of c->source)(trees of c->target)."""
    calc = _calc(data)
    src = source.effective(data) if isinstance(source, ObjectWord) else tuple(source)
    tgt = target.effective(data) if isinstance(target, ObjectWord) else tuple(target)
    sp, tp = calc.paths(src), calc.paths(tgt)
    return sum(len(sp[c]) * len(tp[c]) for c in set(sp) & set(tp))


def compose(data, g: Morphism, f: Morphism) -> Morphism:
    return _calc(data).compose(g, f)


def tensor(data, f: Morphism, g: Morphism) -> Morphism:
    return _calc(data).tensor(f, g)


def dagger(data, f: Morphism) -> Morphism:
    return _calc(data).dagger(f)


def trace_inner_product(data, f: Morphism, g: Morphism) -> complex:
    return _calc(data).trace_inner_product(f, g)


def skein_inner_product(data, f: Morphism, g: Morphism) -> complex:
    """tr(f^dagger g) / sqrt(d_a d_b d_c d_d) on a C(a(x)b -> c(x)d) block."""
    if len(f.source) != 2 or len(f.target) != 2:
        raise ShapeMismatch("skein inner product needs 2-strand words")
    if f.source != g.source or f.target != g.target:
        raise ShapeMismatch("skein inner product requires matching blocks")
    dims = data.dims
    weight = np.sqrt(np.prod([dims[x] for x in f.source + f.target]))
    return complex(trace_inner_product(data, f, g) / weight)


def dotted_line_expand(data, position: int, word: Word | None = None):
    """Weighted strand family (a, d_a / D^2) inserted at ``position``.

    The weights realize the regular-element line: a closed loop of the family
    evaluates to sum_a d_a^2 / D^2 = 1.
    """
    if word is not None and not 0 <= position <= len(word):
        raise ShapeMismatch(f"insertion position {position} out of range")
    dims, total = data.dims, data.total_dim_sq
    return [(a, float(dims[a] / total)) for a in range(data.size)]
