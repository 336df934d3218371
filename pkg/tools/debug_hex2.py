import numpy as np
from anyonlab import fusion_data as fd, center as ct

cat = fd.load_catalog("fibonacci")
cd = ct.CenterData(cat)
n = cd.size
calc = cd.calc
N = cd.fusion_tensor()
dims = cd.dims()

table = None
import anyonlab.center as c2

# rebuild table without the gate
cdx = cd
table = ct.SymbolTable(labels=tuple(f"Z{i}" for i in range(n)), N=N,
                       dual=np.array([ [W for W in range(n) if N[X, W, 0] == 1][0] for X in range(n)]),
                       dims=dims, F={}, R={})
for X in range(n):
    for Y in range(n):
        for Z in range(n):
            for W in range(n):
                blk = ct._f_block_from_bases(cd, N, X, Y, Z, W)
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
            dU = dims[U]
            for m, f in enumerate(bx):
                moved = cd.compose_g(beta, cd.dagger_g(f))
                for r, g in enumerate(by):
                    R[r, m] = cd.pair_g(cd.dagger_g(g), moved) / dU
            table.R[(X, Y, U)] = R

# Check 1: F defining relation concretely
worst = 0.0
for X in range(n):
    for Y in range(n):
        for Z in range(n):
            for W in range(n):
                rows = [(e, m1, m2) for e in range(n)
                        for m1 in range(N[X, Y, e]) for m2 in range(N[e, Z, W])]
                cols = [(f, m3, m4) for f in range(n)
                        for m3 in range(N[Y, Z, f]) for m4 in range(N[X, f, W])]
                if not rows or not cols:
                    continue
                blk = table.F[(X, Y, Z, W)]
                lefts = []
                for (e, m1, m2) in rows:
                    eta = cd.hom_basis(X, Y, e)[m1]
                    xi = cd.hom_basis(e, Z, W)[m2]
                    lefts.append(cd.dagger_g(cd.compose_g(xi, cd.tensor_g(eta, cd.identity_g((Z,))))))
                for j, (f, m3, m4) in enumerate(cols):
                    delta = cd.hom_basis(Y, Z, f)[m3]
                    gamma = cd.hom_basis(X, f, W)[m4]
                    right = cd.dagger_g(cd.compose_g(gamma, cd.tensor_g(cd.identity_g((X,)), delta)))
                    acc = None
                    for i, l in enumerate(lefts):
                        term = l * blk[i, j]
                        acc = term if acc is None else acc + term
                    worst = max(worst, (right - acc).norm())
print("F split-tree relation residual:", f"{worst:.2e}")

# Check 2: R defining relation concretely
worst = 0.0
for X in range(n):
    for Y in range(n):
        beta = cd.braiding_g(X, Y)
        for U in range(n):
            if N[X, Y, U] == 0:
                continue
            R = table.R[(X, Y, U)]
            by = cd.hom_basis(Y, X, U)
            for m, f in enumerate(cd.hom_basis(X, Y, U)):
                moved = cd.compose_g(beta, cd.dagger_g(f))
                acc = None
                for r, g in enumerate(by):
                    term = cd.dagger_g(g) * R[r, m]
                    acc = term if acc is None else acc + term
                worst = max(worst, (moved - acc).norm())
print("R split-tree relation residual:", f"{worst:.2e}")

print("hexagon:", f"{ct.verify_hexagon(table):.2e}")

# Check 3: naturality of braiding vs fused channel
worst = 0.0
for X in range(n):
    for Y in range(n):
        for Z in range(n):
            bYZ_fused = None
            for U in range(n):
                for m3 in range(N[Y, Z, U]):
                    h = cd.hom_basis(Y, Z, U)[m3]
                    lhs = cd.compose_g(
                        cd.tensor_g(cd.dagger_g(h), cd.identity_g((X,))),
                        cd.braiding_g(X, U))
                    # beta_{X, Y(x)Z} o (id_X (x) h^dagger)
                    bXY = cd.braiding_g(X, Y)
                    bXZ = cd.braiding_g(X, Z)
                    bfull = cd.compose_g(cd.tensor_g(cd.identity_g((Y,)), bXZ),
                                         cd.tensor_g(bXY, cd.identity_g((Z,))))
                    rhs = cd.compose_g(bfull,
                                       cd.tensor_g(cd.identity_g((X,)), cd.dagger_g(h)))
                    worst = max(worst, (lhs - rhs).norm())
print("braiding naturality vs fused channel:", f"{worst:.2e}")
