"""4x4 matrix groups: GSp(4), GU(2,2) and their reductions mod p.

Exact matrices (:class:`GMat`) hold Fractions or QuadElements.  Reductions
mod p are numpy integer arrays; enumeration of GSp(4, F_p) produces them in
batches of shape (n, 4, 4).

The symplectic form is ``J = [[0, I], [-I, 0]]``.  Entry positions in the
docstrings are 1-indexed to match the usual matrix notation; code uses
0-indexed numpy positions.
"""

from __future__ import annotations

import warnings
from fractions import Fraction

import numpy as np

from .exactring import NotIntegral, QuadElement, mod_p, qvp, vp


class NotInGroup(ValueError):
    pass


class GMat:
    """Immutable 4x4 (or 2x2) matrix over Q or Q(sqrt(-d))."""

    __slots__ = ("rows", "n")

    def __init__(self, rows):
        self.rows = tuple(tuple(e if isinstance(e, QuadElement) else Fraction(e)
                                for e in row) for row in rows)
        self.n = len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other):
        n = self.n
        cols = list(zip(*other.rows))
        out = []
        for row in self.rows:
            out_row = []
            for col in cols:
                acc = 0
                for a, b in zip(row, col):
                    if a and b:
                        acc = a * b + acc
                out_row.append(acc)
            out.append(out_row)
        return GMat(out)

    def scale(self, c):
        return GMat([[c * e for e in row] for row in self.rows])

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other):
        return GMat([[a + b for a, b in zip(r1, r2)]
                     for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return self + (-other)

    @property
    def T(self):
        return GMat(list(zip(*self.rows)))

    def conj(self):
        return GMat([[e.conj() if isinstance(e, QuadElement) else e for e in row]
                     for row in self.rows])

    def inv(self):
        n = self.n
        a = [list(row) + [Fraction(int(i == j)) for j in range(n)]
             for i, row in enumerate(self.rows)]
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col] != 0), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            a[col], a[piv] = a[piv], a[col]
            inv_p = 1 / a[col][col]
            a[col] = [inv_p * e for e in a[col]]
            for r in range(n):
                if r != col and a[r][col] != 0:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return GMat([row[n:] for row in a])

    def det(self):
        n = self.n
        a = [list(row) for row in self.rows]
        det = Fraction(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                det = -det
            det = det * a[col][col]
            inv_p = 1 / a[col][col]
            for r in range(col + 1, n):
                if a[r][col] != 0:
                    f = a[r][col] * inv_p
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return det

    def entries(self):
        return [e for row in self.rows for e in row]

    def is_rational(self):
        return all(not isinstance(e, QuadElement) or e.is_rational()
                   for e in self.entries())

    def __eq__(self, other):
        if not isinstance(other, GMat):
            return NotImplemented
        return self.n == other.n and all(
            a == b for a, b in zip(self.entries(), other.entries()))

    def __hash__(self):
        return hash(tuple(self.entries()))

    def to_json(self):
        return [[str(e) for e in row] for row in self.rows]

    def __repr__(self):
        body = ",\n     ".join("[" + ", ".join(str(e) for e in row) + "]"
                               for row in self.rows)
        return f"GMat([{body}])"


def identity(n=4):
    return GMat([[int(i == j) for j in range(n)] for i in range(n)])


def diag(*entries):
    n = len(entries)
    return GMat([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])


J = GMat([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])
J_NP = np.array([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]], dtype=np.int64)


# ---------------------------------------------------------------- similitudes


def _scalar_multiple_of_J(m):
    mu = m[0, 2]
    if mu == 0 or m != J.scale(mu):
        return None
    return mu


def similitude(g):
    """mu with g^T J g = mu J, or None."""
    return _scalar_multiple_of_J(g.T @ J @ g)


def gu_similitude(g):
    """Rational mu with conj(g)^T J g = mu J, or None."""
    mu = _scalar_multiple_of_J(g.conj().T @ J @ g)
    if mu is None:
        return None
    if isinstance(mu, QuadElement):
        if not mu.is_rational():
            return None
        mu = mu.u
    return mu


def is_gsp(g):
    return g.is_rational() and similitude(g) is not None


def is_gu(g):
    return gu_similitude(g) is not None


# ---------------------------------------------------------------- zero patterns

# 0-indexed positions forced to vanish mod p
BOREL_ZEROS = ((0, 1), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2))
UTILDE_ZEROS = ((0, 1), (2, 1), (3, 0), (3, 1), (3, 2))

_BOREL_MASK = np.zeros((4, 4), dtype=bool)
for _i, _j in BOREL_ZEROS:
    _BOREL_MASK[_i, _j] = True


def reduce_mod_p(g, p):
    """Integer array of a p-integral rational matrix mod p."""
    out = np.zeros((g.n, g.n), dtype=np.int64)
    for i in range(g.n):
        for j in range(g.n):
            e = g[i, j]
            if isinstance(e, QuadElement):
                if not e.is_rational():
                    raise NotIntegral("matrix has irrational entries")
                e = e.u
            out[i, j] = mod_p(e, p)
    return out


def reduce_quad_mod_p(g, p):
    """(u, v) integer arrays of a Z_L-integral matrix mod p."""
    u = np.zeros((g.n, g.n), dtype=np.int64)
    v = np.zeros((g.n, g.n), dtype=np.int64)
    for i in range(g.n):
        for j in range(g.n):
            e = g[i, j]
            if not isinstance(e, QuadElement):
                e = QuadElement(e)
            u[i, j] = mod_p(e.u, p)
            v[i, j] = mod_p(e.v, p)
    return u, v


def _omega_batch(x, y):
    return x[..., 0] * y[..., 2] + x[..., 1] * y[..., 3] - x[..., 2] * y[..., 0] - x[..., 3] * y[..., 1]


def fp_similitude(g, p):
    """Batched similitude over F_p: array of mu (0 where g is not in GSp)."""
    g = np.asarray(g) % p
    single = g.ndim == 2
    if single:
        g = g[None]
    cols = [g[:, :, i] for i in range(4)]
    mu = _omega_batch(cols[0], cols[2]) % p
    ok = (mu != 0) & (_omega_batch(cols[1], cols[3]) % p == mu)
    for i, j in ((0, 1), (0, 3), (1, 2), (2, 3)):
        ok &= _omega_batch(cols[i], cols[j]) % p == 0
    mu = np.where(ok, mu, 0)
    return mu[0] if single else mu


def borel_mask(batch):
    """Boolean array: which elements of a (n,4,4) batch fit the Borel pattern."""
    return ~np.any(batch[:, _BOREL_MASK] != 0, axis=1)


def in_borel_fp(g, p):
    g = np.asarray(g) % p
    if fp_similitude(g, p) == 0:
        raise NotInGroup("not a symplectic similitude over F_p")
    return bool(borel_mask(g[None])[0])


def _integral(g, p):
    return all(e == 0 or qvp(e, p) >= 0 for e in g.entries())


def in_iwahori(g, p):
    """Membership in the Iwahori subgroup I_p of GSp(4, Z_p)."""
    if not g.is_rational() or not _integral(g, p):
        return False
    mu = similitude(g)
    if mu is None or vp(mu, p) != 0:
        return False
    red = reduce_mod_p(g, p)
    return all(red[i, j] == 0 for i, j in BOREL_ZEROS)


def _gu_compact(g, p, zeros, rational_reduction):
    if not _integral(g, p):
        return False
    mu = gu_similitude(g)
    if mu is None or vp(mu, p) != 0:
        return False
    u, v = reduce_quad_mod_p(g, p)
    if rational_reduction and np.any(v):
        return False
    return all(u[i, j] == 0 and v[i, j] == 0 for i, j in zeros)


def in_I_prime(g, p):
    """Preimage in GU(2,2)(Z_p) of the Iwahori subgroup of GSp(4, F_p).

    The reduction must have entries in F_p (no sqrt(-d) component) and fit
    the Borel pattern.
    """
    return _gu_compact(g, p, BOREL_ZEROS, rational_reduction=True)


def in_K_prime(g, p):
    """Preimage in GU(2,2)(Z_p) of GSp(4, F_p)."""
    return _gu_compact(g, p, (), rational_reduction=True)


def in_U_tilde(g, p):
    """The level subgroup of GU(2,2)(Z_p) whose reduction has zeros at
    (1,2), (3,2), (4,1), (4,2), (4,3)."""
    return _gu_compact(g, p, UTILDE_ZEROS, rational_reduction=False)


# ---------------------------------------------------------------- standard elements

INF = "inf"


def U(n, q, r):
    return GMat([[1, 0, n, q], [0, 1, q, r], [0, 0, 1, 0], [0, 0, 0, 1]])


def Z(y):
    if y == INF:
        return GMat([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    return GMat([[1, y, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, -y, 1]])


def A(x, y):
    return U(*x) @ J @ Z(y)


def B(x, y):
    return J @ U(*x) @ J @ Z(y)


def D(lam, y):
    if lam == INF:
        base = GMat([[-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]])
    elif lam == 0:
        base = GMat([[0, 0, 0, 1], [-1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
    else:
        li = Fraction(1) / lam
        base = GMat([[-lam, 0, 0, 1], [1, 0, 0, li], [0, 1, li, 0], [0, lam, -1, 0]])
    return base @ Z(y)


def h(l, m, p):
    p = Fraction(p)
    return diag(p ** (2 * m + l), p ** (m + l), 1, p ** m)


def h2(m, p):
    """The 2x2 element diag(p^m, 1)."""
    return diag(Fraction(p) ** m, 1)


def eta(p):
    return GMat([[0, 0, 0, 1], [0, 0, 1, 0], [0, p, 0, 0], [p, 0, 0, 0]])


def R(y):
    if y == INF:
        return GMat([[0, 0, -1, 0], [0, -1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1]])
    return U(y, 0, 0).T


S1 = GMat([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def theta(alpha, m=0, p=1):
    """Theta (m = 0) or its conjugate h(l,m)^-1 Theta h(l,m) = theta(alpha, m, p)."""
    a = alpha * Fraction(p) ** m
    return GMat([[1, 0, 0, 0], [a, 1, 0, 0], [0, 0, 1, -a.conj()], [0, 0, 0, 1]])


def m1(a):
    a_bar_inv = 1 / (a.conj() if isinstance(a, QuadElement) else a)
    return diag(a, 1, a_bar_inv, 1)


def m2(g):
    """Embed a 2x2 matrix on the (2,4) coordinates, similitude det g."""
    (a, b), (c, d) = g.rows
    mu = a * d - b * c
    return GMat([[1, 0, 0, 0], [0, a, 0, b], [0, 0, mu, 0], [0, c, 0, d]])


def embed_gl2(g):
    """g -> diag(g, det(g) g^-T), the Levi embedding of GL(2)."""
    (a, b), (c, d) = g.rows
    mu = a * d - b * c
    gt = g.inv().T.scale(mu)
    return GMat([[a, b, 0, 0], [c, d, 0, 0],
                 [0, 0, gt[0, 0], gt[0, 1]], [0, 0, gt[1, 0], gt[1, 1]]])


# T_m representatives t_1..t_8
T_LABELS = {
    1: ("B", (1, 0, 0), 0),
    2: ("B", (1, 0, 0), INF),
    3: ("B", (0, 0, 1), 0),
    4: ("B", (0, 0, 1), INF),
    5: ("B", (0, 0, 0), 0),
    6: ("B", (0, 0, 0), INF),
    7: ("A", (0, 0, 0), 0),
    8: ("A", (0, 0, 0), INF),
}


def t(i):
    cls, x, y = T_LABELS[i]
    return A(x, y) if cls == "A" else B(x, y)


# ---------------------------------------------------------------- F_p enumeration


def _nullspace_mod_p(rows, p):
    """Basis of {x : rows @ x = 0} over F_p (rows is a list of int lists)."""
    a = [list(r) for r in rows]
    n = len(a[0])
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(a)) if a[i][c] % p), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] % p:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        v = [0] * n
        v[free] = 1
        for i, c in enumerate(pivots):
            v[c] = -a[i][free] % p
        basis.append(v)
    return basis


def _omega(x, y, p):
    return (x[0] * y[2] + x[1] * y[3] - x[2] * y[0] - x[3] * y[1]) % p


def _adapted_basis(c1, p):
    """Symplectic matrix over F_p whose first column is c1."""
    row = [int(x) for x in (np.asarray(c1) @ J_NP) % p]
    j = next(i for i, x in enumerate(row) if x)
    f = [0] * 4
    f[j] = pow(row[j], -1, p)
    w1, w2 = _nullspace_mod_p([row, [int(x) for x in (np.asarray(f) @ J_NP) % p]], p)
    k = _omega(w1, w2, p)
    w2 = [x * pow(k, -1, p) % p for x in w2]
    m = np.array([c1, w1, f, w2], dtype=np.int64).T % p
    return m


def _stabilizer_of_e1(p):
    """All elements of Sp(4, F_p) fixing e1, as an (n,4,4) array."""
    sl2 = np.array([(a, b, c, d)
                    for a in range(p) for b in range(p)
                    for c in range(p) for d in range(p)
                    if (a * d - b * c) % p == 1], dtype=np.int64)
    grid = np.array(np.meshgrid(range(p), range(p), range(p), indexing="ij")).reshape(3, -1).T
    out = np.zeros((len(grid), len(sl2), 4, 4), dtype=np.int64)
    a, x, y = grid[:, 0], grid[:, 1], grid[:, 2]
    out[:, :, 0, 0] = 1
    # third column e3 + a e1 + x e2 + y e4
    out[:, :, 0, 2] = a[:, None]
    out[:, :, 1, 2] = x[:, None]
    out[:, :, 2, 2] = 1
    out[:, :, 3, 2] = y[:, None]
    # complement basis e2 - y e1, e4 + x e1; columns 2, 4 via SL2
    A_, B_, C_, D_ = (sl2[:, i][None, :] for i in range(4))
    e2p = (-y[:, None], 1)
    e4p = (x[:, None], 1)
    out[:, :, 0, 1] = A_ * e2p[0] + C_ * e4p[0]
    out[:, :, 1, 1] = A_
    out[:, :, 3, 1] = C_
    out[:, :, 0, 3] = B_ * e2p[0] + D_ * e4p[0]
    out[:, :, 1, 3] = B_
    out[:, :, 3, 3] = D_
    return out.reshape(-1, 4, 4) % p


def iter_gsp4_fp(p, warn=True):
    """Batches (n,4,4) covering GSp(4, F_p) exactly once.

    Sp(4, F_p) is swept as M(c1) @ Stab(e1) over nonzero first columns c1,
    with the stabilizer pre-scaled by diag(1, 1, mu, mu) for every mu.
    """
    if warn and p > 5:
        warnings.warn(f"enumerating GSp(4, F_{p}) is expensive", stacklevel=2)
    dtype = np.int16 if p < 50 else np.int64
    stab = _stabilizer_of_e1(p)
    scaled = []
    for mu in range(1, p):
        s = stab.copy()
        s[:, :, 2:] = s[:, :, 2:] * mu % p
        scaled.append(s)
    stab_all = np.concatenate(scaled).astype(dtype)
    for idx in range(1, p ** 4):
        c1 = [(idx // p ** k) % p for k in range(4)]
        batch = np.matmul(_adapted_basis(c1, p).astype(dtype), stab_all)
        batch %= p
        yield batch


def enumerate_gsp4_fp(p):
    """Every element of GSp(4, F_p), one 4x4 array at a time."""
    for batch in iter_gsp4_fp(p):
        yield from batch


def gsp4_order(p):
    return p ** 4 * (p - 1) ** 3 * (p + 1) ** 2 * (p ** 2 + 1)


def count_gsp4_fp(p):
    """(total, similitude-one, Borel) counts from the enumeration.

    Every element is re-checked to be a similitude; a failure raises.
    """
    total = sim_one = borel = 0
    for batch in iter_gsp4_fp(p, warn=False):
        mu = fp_similitude(batch, p)
        if np.any(mu == 0):
            raise NotInGroup("enumeration produced a non-similitude")
        total += len(batch)
        sim_one += int(np.count_nonzero(mu == 1))
        borel += int(borel_mask(batch).sum())
    return total, sim_one, borel


def encode_fp(batch, p):
    """Injective integer code of each matrix in a batch (for uniqueness checks)."""
    weights = p ** np.arange(16, dtype=np.int64)
    return (batch.reshape(len(batch), 16).astype(np.int64) * weights).sum(axis=1)
