"""Local Whittaker values W(Theta h(l,m) t_i) for the three ramified cases.

Values are written in T = p^(-3s-1/2) with normalized Satake symbols
A = alpha(p) p^(-1/2), B = beta(p) p^(-1/2).  The tables live in
:func:`whittaker_value`; :func:`verify_decompositions` audits them against
the factorizations Theta h t = D m2(g) [u] k they come from.

Membership in P.X for a compact open X is read off the third row of g: it
is proportional to the third row of the compact factor, so its reduction
mod p, a point of P^3(F_{p^2}), decides between P.I', P.Theta I', P.s1 I'.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .exactring import ZERO, QuadElement, SymPoly, complete_homogeneous, qvp, \
    quad_reduce_mod_p, sym, vp
from .report import VerifyReport, timed
from .symplectic import S1, GMat, diag, h, identity, in_I_prime, in_U_tilde, m2, t, theta


class CaseTag(enum.Enum):
    UnramPi_StSigma = "unram-st"
    StPi_StSigma = "st-st"
    StPi_UnramSigma = "st-unram"

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        for c in cls:
            if text in (c.value, c.name):
                return c
        raise ValueError(f"unknown case {text!r}")


T = sym("T")
SYM_A, SYM_B = sym("A"), sym("B")


@dataclass(frozen=True)
class WhittakerValue:
    t_exp: int
    coeff: SymPoly

    @property
    def zero(self):
        return self.coeff.is_zero()

    @property
    def poly(self):
        return ZERO if self.zero else self.coeff * T ** self.t_exp

    @classmethod
    def vanishing(cls):
        return cls(0, ZERO)

    def __str__(self):
        return "0" if self.zero else str(self.poly)


def h_l(l, a=SYM_A, b=SYM_B):
    """Complete homogeneous symmetric polynomial of degree l in two symbols."""
    return complete_homogeneous(l, [a, b])


def support(case, m):
    """t-indices with nonzero W(Theta h(l,m) t)."""
    case = CaseTag.parse(case)
    if case is CaseTag.UnramPi_StSigma:
        return (1, 3, 5, 7) if m > 0 else (1, 5)
    if case is CaseTag.StPi_StSigma:
        return (3, 4, 5, 6) if m > 0 else ()
    return (3, 5) if m > 0 else (5,)


def whittaker_value(case, p, l, m, t_index, a_p=1, w_p=1):
    """Table value of W(Theta h(l,m) t_i).

    Cases 1 and 2: (T^2/p^2)^m (T/p^2)^l a_p^l, times -1/p on t_3, t_4, t_7.
    Case 3: (T^2/p^2)^m (T/p)^l h_l(A, B).  w_p does not enter.
    """
    from .cosets import cells
    case = CaseTag.parse(case)
    if l < 0:
        raise ValueError("l must be >= 0")
    if t_index not in cells(m):
        raise ValueError(f"t_{t_index} is not in T_{m}")
    if t_index not in support(case, m):
        return WhittakerValue.vanishing()
    p = Fraction(p)
    if case is CaseTag.StPi_UnramSigma:
        return WhittakerValue(2 * m + l, h_l(l) * p ** (-2 * m - l))
    coeff = SymPoly.const(Fraction(a_p) ** l * p ** (-2 * m - 2 * l))
    if t_index in (3, 4, 7):
        coeff = coeff * (-1 / p)
    return WhittakerValue(2 * m + l, coeff)


def whittaker_family(case, t_index, m_positive, p, a_p=1):
    """Geometric form of l (and m) -> W(Theta h(l,m) t_i) as SymPoly in T."""
    from .exactring import GeometricFamily, SymRatFn
    case = CaseTag.parse(case)
    m_probe = 1 if m_positive else 0
    if t_index not in support(case, m_probe):
        return GeometricFamily()
    p = Fraction(p)
    rm = T * T * (1 / (p * p)) if m_positive else SymPoly.const(1)
    if case is CaseTag.StPi_UnramSigma:
        fam = GeometricFamily.h_sequence(SYM_A, SYM_B, T * (1 / p))
        return fam * GeometricFamily.single(SymRatFn(SymPoly.const(1)), SymPoly.const(1), rm)
    c = SymPoly.const(-1 / p if t_index in (3, 4, 7) else 1)
    return GeometricFamily.single(c, T * (Fraction(a_p) / (p * p)), rm)


# ---------------------------------------------------------------- GL(2) newvectors


class UnsupportedArgument(ValueError):
    pass


def gl2_newvector_value(kind, val_a, weyl=False, p=None, a_p=1):
    """W'(diag(a,1)) or W'(diag(a,1) w) for v_p(a) = val_a.

    steinberg: tau(a)|a| on |a| <= 1, and -p^-1 tau(a)|a| with the Weyl
    element on |a| <= p; tau(p) = a_p.  unramified: |a|^(1/2) times the
    Schur quotient, which in the normalized symbols is h_val_a(A, B); the
    Weyl element lies in GL_2(Z_p) and changes nothing.
    """
    if kind == "unramified":
        return h_l(val_a) if val_a >= 0 else ZERO
    if kind != "steinberg":
        raise ValueError(kind)
    p = Fraction(p)
    base = Fraction(a_p) ** val_a * p ** (-val_a)
    if not weyl:
        return SymPoly.const(base if val_a >= 0 else 0)
    return SymPoly.const(-base / p if val_a >= -1 else 0)


def _psi_is_trivial(x, p):
    x = Fraction(x)
    return x == 0 or vp(x, p) >= 0


def gl2_whittaker(kind, g, p, a_p=1):
    """W' on an arbitrary rational 2x2 matrix via right Gamma_0 (steinberg)
    or GL_2(Z_p) (unramified) invariance, the left N-character and the
    central invariance.  Raises when the N-character is not trivial."""
    (a, b), (c, d) = [[Fraction(x) for x in row] for row in g.rows]
    if kind == "unramified" and c != 0 and (d == 0 or vp(c, p) < vp(d, p)):
        # right multiply by the Weyl element, a unit here
        a, b, c, d = b, -a, d, -c
    if c == 0 or (d != 0 and vp(c, p) > vp(d, p)):
        # g k = [[a', b], [0, d]] with k = [[1, 0], [-c/d, 1]]
        a2 = a - b * c / d
        if not _psi_is_trivial(b / d, p):
            raise UnsupportedArgument("nontrivial additive character")
        return gl2_newvector_value(kind, vp(a2 / d, p), False, p, a_p)
    # steinberg with v(c) <= v(d): g = (-c) n(a/c) diag(det/c^2, 1) w k
    if not _psi_is_trivial(a / c, p):
        raise UnsupportedArgument("nontrivial additive character")
    det = a * d - b * c
    return gl2_newvector_value(kind, vp(det / (c * c), p), True, p, a_p)


# ---------------------------------------------------------------- decompositions


@dataclass
class Decomposition:
    t_index: int
    g: GMat            # 2x2 argument of m2
    u: str             # "1", "s1" or "Theta"
    k: GMat            # compact factor as printed
    source: str        # "printed" or "derived"


def _outer(l, m, p):
    e = Fraction(p) ** (2 * m + l)
    return diag(e, 1, 1 / e, 1)


def printed_decompositions(case, l, m, p, alpha):
    """The factorizations as displayed, keyed by t-index."""
    case = CaseTag.parse(case)
    pm = Fraction(p) ** m
    x = alpha * pm
    xb = x.conj()
    g_diag = GMat([[pm * Fraction(p) ** l, 0], [0, pm]])
    g_low = GMat([[pm * Fraction(p) ** l, 0], [-pm, pm]])
    g_anti = GMat([[0, -pm * Fraction(p) ** l], [-pm, 0]])
    k1 = GMat([[-1, 0, 0, 0], [-x, -1, 0, 0], [1, 0, -1, xb], [0, 0, 0, -1]])
    k3 = GMat([[-1, 0, 0, 0], [-x, -1, 0, 0], [0, -xb, -1, xb], [-x, 0, 0, -1]])
    k5 = GMat([[1, 0, 0, 0], [x, 1, 0, 0], [0, 0, 1, xb], [0, 0, 0, 1]])
    k7 = GMat([[0, 0, 1, 0], [0, 1, 0, 0], [-1, xb, 0, 0], [0, 0, x, 1]])
    k4 = GMat([[1, x, 0, 0], [0, 1, 0, 0], [0, x, 1, 0], [xb, 0, -xb, 1]])
    k6 = GMat([[1, x, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, -xb, 1]])
    if case is CaseTag.UnramPi_StSigma:
        out = {1: Decomposition(1, g_diag, "1", k1, "printed"),
               5: Decomposition(5, g_diag, "1", k5, "printed")}
        if m > 0:
            out[3] = Decomposition(3, g_low, "1", k3, "printed")
            out[7] = Decomposition(7, g_anti, "1", k7, "printed")
        return out
    if m == 0:
        if case is CaseTag.StPi_StSigma:
            return {}
        # t_5 = -1, so Theta h(l,0) t_5 = h(l,0) Theta (-1)
        return {5: Decomposition(5, g_diag, "Theta", identity(4).scale(-1), "derived")}
    out = {3: Decomposition(3, g_low, "1", k3, "printed"),
           5: Decomposition(5, g_diag, "1", k5, "printed")}
    if case is CaseTag.StPi_StSigma:
        out[4] = Decomposition(4, g_low, "s1", k4, "printed")
        out[6] = Decomposition(6, g_diag, "s1", k6, "printed")
    return out


def _u_matrix(u, alpha):
    return {"1": identity(4), "s1": S1, "Theta": theta(alpha)}[u]


def value_from_decomposition(case, dec, l, m, p, a_p=1):
    """W from D m2(g) u k: |N(a)/mu_1(g)|^(3s+3/2) W'(g), here T^e p^-e W'(g)."""
    case = CaseTag.parse(case)
    e = 2 * m + l
    (a, b), (c, d) = dec.g.rows
    mu1 = Fraction(a) * d - Fraction(b) * c
    e = 2 * vp(Fraction(p) ** e, p) - vp(mu1, p)
    kind = "unramified" if case is CaseTag.StPi_UnramSigma else "steinberg"
    coeff = gl2_whittaker(kind, dec.g, p, a_p) * Fraction(p) ** (-e)
    return WhittakerValue(e, coeff)


# ---------------------------------------------------------------- coset criteria


def _fp2_mul(x, y, d, p):
    return ((x[0] * y[0] - d * x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p)


def _fp2_inv(x, d, p):
    n = (x[0] * x[0] + d * x[1] * x[1]) % p
    ni = pow(n, -1, p)
    return (x[0] * ni % p, -x[1] * ni % p)


def third_row_line(g, p, d):
    """Normalized reduction of the primitive third row of g in P^3(F_{p^2})."""
    row = [g[2, j] for j in range(4)]
    vals = [qvp(e, p) for e in row if e != 0]
    shift = Fraction(p) ** (-min(vals))
    red = [quad_reduce_mod_p(e * shift if isinstance(e, QuadElement) else Fraction(e) * shift, p)
           for e in row]
    lead = next(x for x in red if x != (0, 0))
    inv = _fp2_inv(lead, d, p)
    return tuple(_fp2_mul(x, inv, d, p) for x in red)


def coset_label(g, p, d):
    """Which of P.I', P.Theta I', P.s1 I' contains g, or the coarser
    P.K' / P.Theta K' otherwise."""
    line = third_row_line(g, p, d)
    rational = all(v == 0 for _, v in line)
    if line[0] == (0, 0) and line[1] == (0, 0):
        if line[2] == (0, 0):
            return "s1I'"
        return "I'" if line[3][1] == 0 else "ThetaI'"
    return "K'" if rational else "ThetaK'"


def may_lie_in_P_Utilde(g, p, d):
    """Necessary condition for g in P.U~.

    A third row (x, 0, y, z) of U~ mod p must pair with the first row
    (a, 0, b, c) to a unit, so (x, y) != 0 as well.
    """
    line = third_row_line(g, p, d)
    return line[1] == (0, 0) and (line[0], line[2]) != ((0, 0), (0, 0))


def in_P_theta_K_prime(g, p, d):
    """P.K' and P.Theta K' are told apart by rationality of the third row."""
    return any(v for _, v in third_row_line(g, p, d))


SUPPORT_LABELS = {CaseTag.StPi_StSigma: {"I'", "s1I'"},
                  CaseTag.StPi_UnramSigma: {"I'", "ThetaI'"}}


# ---------------------------------------------------------------- audit


def _membership(case, k, p):
    case = CaseTag.parse(case)
    return in_U_tilde(k, p) if case is CaseTag.UnramPi_StSigma else in_I_prime(k, p)


def verify_decompositions(case, p, params, l_range=range(4), m_range=range(4),
                          mode="printed", a_p=1):
    """Audit the factorizations Theta h(l,m) t_i = D m2(g) [u] k.

    mode "printed": the printed k must make the product exact and lie in
    the compact group.  mode "corrected": k is recomputed from the left
    side; it must lie in the compact group and the value it yields must
    equal the table.  Both modes check the support of every cell with the
    third-row criterion.
    """
    case = CaseTag.parse(case)
    from .cosets import cells
    alpha = params.alpha
    report = VerifyReport("whittaker.decompositions",
                          {"case": case.value, "p": p, **params.as_dict(), "mode": mode})
    with timed(report):
        th = theta(alpha)
        for l in l_range:
            for m in m_range:
                decs = printed_decompositions(case, l, m, p, alpha)
                for i in cells(m):
                    lhs = th @ h(l, m, p) @ t(i)
                    child = VerifyReport(f"t_{i}", {"l": l, "m": m})
                    _audit_support(case, lhs, i, m, p, params.d, child)
                    if i in decs:
                        _audit_decomposition(case, decs[i], lhs, l, m, p, alpha, mode, a_p, child)
                    report.add(child)
    return report


def _audit_decomposition(case, dec, lhs, l, m, p, alpha, mode, a_p, child):
    head = _outer(l, m, p) @ m2(dec.g) @ _u_matrix(dec.u, alpha)
    child.params["source"] = dec.source
    if mode == "printed":
        if head @ dec.k != lhs:
            actual = head.inv() @ lhs
            child.fail({"reason": "product differs", "printed_k": dec.k.to_json(),
                        "required_k": actual.to_json(),
                        "required_k_in_compact": _membership(case, actual, p),
                        "required_k_is_minus_printed": actual == -dec.k})
        elif not _membership(case, dec.k, p):
            child.fail({"reason": "k not in compact group", "k": dec.k.to_json()})
        return
    actual = head.inv() @ lhs
    if not _membership(case, actual, p):
        child.fail({"reason": "k not in compact group", "k": actual.to_json()})
    got = value_from_decomposition(case, dec, l, m, p, a_p).poly
    want = whittaker_value(case, p, l, m, dec.t_index, a_p).poly
    if got != want:
        child.fail({"reason": "value differs from table",
                    "from_decomposition": str(got), "table": str(want)})


def _audit_support(case, g, i, m, p, d, child):
    nonzero = i in support(case, m)
    if case is CaseTag.UnramPi_StSigma:
        if not nonzero and may_lie_in_P_Utilde(g, p, d):
            child.fail({"reason": "vanishing cell not excluded from P.U~"})
        return
    label = coset_label(g, p, d)
    child.params["coset"] = label
    if (label in SUPPORT_LABELS[case]) != nonzero:
        child.fail({"reason": "support mismatch", "coset": label, "table_nonzero": nonzero})
    if case is CaseTag.StPi_StSigma and m == 0 and not in_P_theta_K_prime(g, p, d):
        child.fail({"reason": "m = 0 cell not in P.Theta K'", "coset": label})


def whittaker_table(case, p, l_range, m_range, a_p=1, w_p=1):
    from .cosets import cells
    return {(l, m, i): whittaker_value(case, p, l, m, i, a_p, w_p)
            for m in m_range for l in l_range for i in cells(m)}
