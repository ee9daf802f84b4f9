"""Volumes of the cells R h(l,m) t I_p.

Two independent routes:

* the closed-form tables, multiples of p^(3l+4m) / ((p+1)(p^2+1));
* the product p^(3(l+m)) / [K_p : I_p] * A_t * V_{t,m}, with A_t and the
  subgroup H_t counted over F_p and V_{t,m} obtained from a unit index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exactring import GeometricFamily, SymPoly
from .report import VerifyReport, timed
from .symplectic import borel_mask, reduce_mod_p, t

GAMMA_UPPER = "Gamma^0"   # lower triangular mod p: (1,2) entry vanishes
GAMMA_LOWER = "Gamma_0"   # upper triangular mod p: (2,1) entry vanishes

H_TAG = {1: GAMMA_UPPER, 2: GAMMA_UPPER, 5: GAMMA_UPPER, 8: GAMMA_UPPER,
         3: GAMMA_LOWER, 4: GAMMA_LOWER, 6: GAMMA_LOWER, 7: GAMMA_LOWER}

# A_t = p^e (p + 1)
A_EXPONENT = {1: 1, 2: 2, 3: 2, 4: 1, 5: 0, 6: 0, 7: 3, 8: 3}

# m > 0: I_t = p^e M_{l,m};  m = 0: I_t = p^(3l + e) / ((p+1)(p^2+1))
TABLE_M_POS = {1: 1, 2: 2, 3: 1, 4: 0, 5: 0, 6: 1, 7: 2, 8: 3}
TABLE_M_ZERO = {1: 1, 2: 2, 5: 0, 7: 3}

# The product route gives p^-1 M_{l,m} for t_6 at m > 0, the table p M_{l,m}.
# Only the table value makes the zeta identity hold, so "corrected" mode
# scales the product route by p^2 there.
PRODUCT_ROUTE_CORRECTION = {6: 2}


@dataclass
class SubgroupProfile:
    p: int
    A: dict = field(default_factory=dict)
    tag: dict = field(default_factory=dict)
    count: dict = field(default_factory=dict)
    h_order: dict = field(default_factory=dict)


def _gl2_fp(p):
    g = np.array([(a, b, c, d) for a in range(p) for b in range(p)
                  for c in range(p) for d in range(p) if (a * d - b * c) % p],
                 dtype=np.int64)
    return g


def _levi_batch(g, p):
    """diag(g, det(g) g^-T) over F_p for a batch of (a, b, c, d)."""
    a, b, c, d = g.T
    out = np.zeros((len(g), 4, 4), dtype=np.int64)
    out[:, 0, 0], out[:, 0, 1], out[:, 1, 0], out[:, 1, 1] = a, b, c, d
    # det(g) g^-T = [[d, -c], [-b, a]]
    out[:, 2, 2], out[:, 2, 3], out[:, 3, 2], out[:, 3, 3] = d, -c, -b, a
    return out % p


def _unipotent_batch(p):
    x = np.array([(n, q, r) for n in range(p) for q in range(p) for r in range(p)],
                 dtype=np.int64)
    out = np.tile(np.eye(4, dtype=np.int64), (len(x), 1, 1))
    out[:, 0, 2], out[:, 0, 3], out[:, 1, 2], out[:, 1, 3] = x[:, 0], x[:, 1], x[:, 1], x[:, 2]
    return out


def compute_At_Ht_by_enumeration(p):
    """Count (u, g) in U(F_p) x GL_2(F_p) with t^-1 u g t in the Borel subgroup."""
    gl2 = _gl2_fp(p)
    levi = _levi_batch(gl2, p)
    unip = _unipotent_batch(p)
    ug = np.matmul(unip[:, None], levi[None, :]) % p
    total = p ** 4 * (p - 1) ** 2 * (p + 1)
    profile = SubgroupProfile(p)
    upper = gl2[:, 1] == 0
    lower = gl2[:, 2] == 0
    for i in range(1, 9):
        ti = reduce_mod_p(t(i), p)
        ti_inv = reduce_mod_p(t(i).inv(), p)
        conj = np.matmul(np.matmul(ti_inv, ug.reshape(-1, 4, 4)), ti) % p
        hits = borel_mask(conj).reshape(ug.shape[:2])
        count = int(hits.sum())
        in_h = hits.any(axis=0)
        profile.count[i] = count
        profile.A[i] = Fraction(total, count)
        profile.h_order[i] = int(in_h.sum())
        if np.array_equal(in_h, upper):
            profile.tag[i] = GAMMA_UPPER
        elif np.array_equal(in_h, lower):
            profile.tag[i] = GAMMA_LOWER
        else:
            profile.tag[i] = None
    return profile


def gamma_orders(p):
    gl2 = _gl2_fp(p)
    return int((gl2[:, 1] == 0).sum()), int((gl2[:, 2] == 0).sum())


# ---------------------------------------------------------------- V_{t,m}


def unit_index_oracle(p, k, K=None, form=None):
    """[ (Z_L/p^K)^x : (Z_p + p^k Z_p xi)^x ] by counting residues.

    Elements x + y*w of Z_L are counted mod p^K; x + y*w is a unit iff its
    norm form is nonzero mod p.  ``form`` is the norm form (1, b, ac) of
    Z_p[w], w = xi + b/2; by default any anisotropic form mod p is used,
    which gives the same counts because p is inert.
    """
    K = k + 1 if K is None else K
    if K < k + 1:
        raise ValueError("need K >= k + 1")
    form = _anisotropic_form(p) if form is None else form
    return _unit_index(p, k, K, tuple(form))


@lru_cache(maxsize=None)
def _unit_index(p, k, K, form):
    q = p ** K
    x = np.arange(q, dtype=np.int64)
    full = sub = 0
    for y in range(q):
        norm = (form[0] * x * x + form[1] * x * y + form[2] * y * y) % p
        n_units = int(np.count_nonzero(norm))
        full += n_units
        if y % p ** k == 0:
            sub += n_units
    return full // sub if full % sub == 0 else Fraction(full, sub)


def _anisotropic_form(p):
    for f in ((1, 0, 1), (1, 1, 1), (1, 0, 2), (1, 0, 3), (1, 1, 2)):
        a, b, c = f
        if all((a * x * x + b * x * y + c * y * y) % p for x in range(p)
               for y in range(p) if (x, y) != (0, 0)):
            return f
    for n in range(1, p):
        if pow(n, (p - 1) // 2, p) == p - 1:
            return (1, 0, n)
    raise ValueError(f"no anisotropic form found mod {p}")


def order_level(t_index, m):
    """k with O_m^t = Z_p + p^k Z_p xi."""
    if m == 0:
        return 1
    return m + 1 if H_TAG[t_index] == GAMMA_UPPER else m


def order_level_from_torus(t_index, m, p, params):
    """Recover k directly: smallest v with h(m)^-1 (1 + p^v xi) h(m) in H_t."""
    tag = H_TAG[t_index]
    for v in range(0, m + 3):
        j = params.torus(1, Fraction(p) ** v)
        pm = Fraction(p) ** m
        e12 = j[0, 1] / pm
        e21 = j[1, 0] * pm
        if any(e.denominator % p == 0 for e in (e12, e21, j[0, 0], j[1, 1])):
            continue
        entry = e12 if tag == GAMMA_UPPER else e21
        if entry.numerator % p == 0:
            return v
    raise ValueError("no level found")


def vt_m(t_index, m, p):
    """V_{t,m} = [GL_2(Z_p) : H_t]^-1 [T(Z_p) : O_m^t]."""
    k = order_level(t_index, m)
    return Fraction(p ** (k - 1) * (p + 1), p + 1)


# ---------------------------------------------------------------- volumes


def _m_lm(l, m, p):
    return Fraction(p) ** (3 * l + 4 * m) / ((p + 1) * (p * p + 1))


def volume(l, m, t_index, p):
    """Closed-form table value of I_t^{l,m}."""
    if m > 0:
        return Fraction(p) ** TABLE_M_POS[t_index] * _m_lm(l, m, p)
    if t_index not in TABLE_M_ZERO:
        raise ValueError(f"t_{t_index} is not in T_0")
    return Fraction(p) ** (3 * l + TABLE_M_ZERO[t_index]) / ((p + 1) * (p * p + 1))


def assembled_volume(l, m, t_index, p, A_t=None, V=None):
    """p^(3(l+m)) / ((p+1)^2 (p^2+1)) * A_t * V_{t,m}."""
    A_t = Fraction(p) ** A_EXPONENT[t_index] * (p + 1) if A_t is None else A_t
    V = vt_m(t_index, m, p) if V is None else V
    return Fraction(p) ** (3 * (l + m)) / ((p + 1) ** 2 * (p * p + 1)) * A_t * V


def volume_family(t_index, m_positive, p):
    """Geometric form of l (and m) -> I_t^{l,m}."""
    base = Fraction(1, (p + 1) * (p * p + 1))
    if m_positive:
        return GeometricFamily.single(base * Fraction(p) ** TABLE_M_POS[t_index],
                                      SymPoly.const(p ** 3), SymPoly.const(p ** 4))
    return GeometricFamily.single(base * Fraction(p) ** TABLE_M_ZERO[t_index],
                                  SymPoly.const(p ** 3))


def volume_table(p, l_range, m_range):
    from .cosets import cells
    return {(l, m, i): volume(l, m, i, p) for m in m_range for l in l_range for i in cells(m)}


def verify_volumes(p, l_range=range(4), m_range=range(4), params=None, mode="printed"):
    """Enumeration oracles against the tables.

    mode "printed" compares the product route with the table as is; "corrected"
    applies PRODUCT_ROUTE_CORRECTION first.
    """
    from .cosets import cells
    if mode not in ("printed", "corrected"):
        raise ValueError(mode)
    report = VerifyReport("volumes", {"p": p, "l": [min(l_range), max(l_range)],
                                      "m": [min(m_range), max(m_range)], "mode": mode})
    with timed(report):
        profile = compute_At_Ht_by_enumeration(p)
        sub = report.add(VerifyReport("volumes.A_t_H_t", {"p": p}))
        for i in range(1, 9):
            want_A = p ** A_EXPONENT[i] * (p + 1)
            if profile.A[i] != want_A or profile.tag[i] != H_TAG[i]:
                sub.fail({"t": i, "A_enumerated": str(profile.A[i]), "A_table": want_A,
                          "H_enumerated": profile.tag[i], "H_table": H_TAG[i]})
        up, low = gamma_orders(p)
        if up != p * (p - 1) ** 2 or low != p * (p - 1) ** 2:
            sub.fail({"gamma_orders": [up, low]})
        units = report.add(VerifyReport("volumes.unit_index", {"p": p}))
        form = None if params is None else (1, params.b, params.a * params.c)
        for k in (1, 2, 3):
            got = unit_index_oracle(p, k, form=form)
            if got != p ** (k - 1) * (p + 1):
                units.fail({"k": k, "index": str(got)})
        if params is not None:
            levels = report.add(VerifyReport("volumes.order_level", {"p": p, **params.as_dict()}))
            for m in m_range:
                for i in cells(m):
                    if order_level_from_torus(i, m, p, params) != order_level(i, m):
                        levels.fail({"t": i, "m": m})
        cells_rep = report.add(VerifyReport("volumes.tables", {"p": p}))
        for m in m_range:
            for l in l_range:
                for i in cells(m):
                    V = Fraction(unit_index_oracle(p, order_level(i, m))) / (p + 1)
                    built = assembled_volume(l, m, i, p, A_t=profile.A[i], V=V)
                    if mode == "corrected" and m > 0 and i in PRODUCT_ROUTE_CORRECTION:
                        built *= p ** PRODUCT_ROUTE_CORRECTION[i]
                    if built != volume(l, m, i, p):
                        cells_rep.fail({"l": l, "m": m, "t": i, "assembled": str(built),
                                        "table": str(volume(l, m, i, p))})
    return report
