"""Exact dense linear algebra over a Scalar field (fraction-free-ish Gauss)."""

from __future__ import annotations

from .scalars import ParamRing, Scalar

Vec = list
Mat = list  # list of rows


def zeros(ring: ParamRing, n: int) -> Vec:
    z = ring.zero()
    return [z] * n


def vec_add(a: Vec, b: Vec) -> Vec:
    return [x + y for x, y in zip(a, b)]

def vec_sub(a: Vec, b: Vec) -> Vec:
    return [x - y for x, y in zip(a, b)]

def vec_scale(a: Vec, c: Scalar) -> Vec:
    return [c * x for x in a]

def vec_is_zero(a: Vec) -> bool:
    return not any(a)


def mat_vec(m: Mat, v: Vec, ring: ParamRing) -> Vec:
    out = []
    for row in m:
        acc = ring.zero()
        for c, x in zip(row, v):
            if c and x:
                acc = acc + c * x
        out.append(acc)
    return out


def rref(rows: Mat, ring: ParamRing) -> tuple[Mat, list[int]]:
    """Reduced row echelon form; returns (rref rows, pivot column list)."""
    m = [list(r) for r in rows]
    nrow = len(m)
    ncol = len(m[0]) if nrow else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncol):
        pr = next((i for i in range(r, nrow) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = m[r][c].inv()
        m[r] = [inv * x for x in m[r]]
        for i in range(nrow):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrow:
            break
    return m[:r], pivots


def rank(rows: Mat, ring: ParamRing) -> int:
    if not rows:
        return 0
    return len(rref(rows, ring)[0])


def kernel(rows: Mat, ring: ParamRing, ncols: int) -> list[Vec]:
    """Basis of the right kernel {v : M v = 0}, echelonized, free vars in order."""
    if not rows:
        return [[ring.one() if j == i else ring.zero() for j in range(ncols)]
                for i in range(ncols)]
    red, pivots = rref(rows, ring)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = zeros(ring, ncols)
        v[fc] = ring.one()
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def solve(rows: Mat, rhs: Vec, ring: ParamRing) -> Vec | None:
    """One solution of M x = b (free variables set to zero), or None."""
    if not rows:
        return None
    ncol = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ring)
    if ncol in pivots:
        return None  # inconsistent
    x = zeros(ring, ncol)
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncol]
    return x


def inverse(rows: Mat, ring: ParamRing) -> Mat:
    n = len(rows)
    aug = [list(r) + [ring.one() if j == i else ring.zero() for j in range(n)]
           for i, r in enumerate(rows)]
    red, pivots = rref(aug, ring)
    if pivots[:n] != list(range(n)):
        raise ArithmeticError("singular matrix")
    return [row[n:] for row in red]


def transpose(rows: Mat) -> Mat:
    return [list(col) for col in zip(*rows)]


def in_span(rows: Mat, v: Vec, ring: ParamRing) -> Vec | None:
    """Coefficients expressing v over the row vectors, or None."""
    return solve(transpose(rows), v, ring)
