"""Newton-polyhedron regions in the (b1, b2, b3) parameter space.

Every region is a finite list of closed half-spaces ``coeffs . b >= rhs``
checked with the slack ``1e-12 * (1 + |rhs|)``.  Writing them this way lets
the same data drive membership tests, vertex enumeration and the CLI export.
"""
from __future__ import annotations

import enum
import itertools
import math
import re
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import CaseUnsupported, InvalidParameter, OrderViolation

HALF = 0.5
VERTEX_LABELS = ("A1", "A2", "A3", "A4", "A5", "A6")
# positions (into the sorted triple) of b1, b2, b3 for each vertex label
_VERTEX_PERMS = {
    "1": (0, 1, 2),
    "2": (1, 0, 2),
    "3": (0, 2, 1),
    "4": (2, 0, 1),
    "5": (1, 2, 0),
    "6": (2, 1, 0),
}


def tol(threshold: float) -> float:
    return 1e-12 * (1.0 + abs(threshold))


class Necessity(enum.Enum):
    OK = "OK"
    VIOLATED_MIN = "VIOLATED_MIN"
    VIOLATED_SUM = "VIOLATED_SUM"


class OneF2Class(enum.Enum):
    STRICT_POSITIVE = "STRICT_POSITIVE"
    NONNEG_BOUNDARY = "NONNEG_BOUNDARY"
    SIGN_CHANGE = "SIGN_CHANGE"
    INDETERMINATE = "INDETERMINATE"


@dataclass(frozen=True)
class Constraint:
    name: str
    coeffs: tuple
    rhs: float

    def slack(self, b) -> float:
        return sum(c * v for c, v in zip(self.coeffs, b)) - self.rhs


@dataclass(frozen=True)
class RegionMembership:
    inside: bool
    active_constraints: tuple
    margin: float

    def __bool__(self) -> bool:
        return self.inside


def pair(a):
    a = tuple(float(v) for v in a)
    if len(a) != 2 or not all(math.isfinite(v) and v > 0 for v in a):
        raise InvalidParameter(f"a must be two positive reals, got {a}")
    return a


def triple(b):
    b = tuple(float(v) for v in b)
    if len(b) != 3 or not all(math.isfinite(v) and v > 0 for v in b):
        raise InvalidParameter(f"b must be three positive reals, got {b}")
    return b


def xi(a):
    a1, a2 = pair(a)
    return tuple(sorted((a2, a1 + HALF, 2 * a1)))


def eta(a):
    a1, a2 = pair(a)
    return tuple(sorted((a1, a2 + HALF, 2 * a2)))


def _label_vertices(prefix, s):
    return {prefix + k: tuple(s[i] for i in perm) for k, perm in _VERTEX_PERMS.items()}


def vertices_A(a) -> dict:
    return _label_vertices("A", xi(a))


def vertices_B(a) -> dict:
    return _label_vertices("B", eta(a))


def vertex_label(a, b, which: str = "A"):
    """Label of the vertex of A (or B) equal to b, or None."""
    verts = vertices_A(a) if which == "A" else vertices_B(a)
    b = triple(b)
    for name, v in verts.items():
        if all(abs(x - y) <= tol(y) for x, y in zip(b, v)):
            return name
    return None


# ---------------------------------------------------------------- parameter sets

def in_lambda(a) -> bool:
    a1, a2 = pair(a)
    low = a1 <= HALF and (a2 <= (3 * a1 + HALF) / 2 or 1 <= a2 <= 2 * a1 + 1)
    high = a1 >= HALF and a2 <= max(a1 + 1.5, 1.5 * (a1 + HALF))
    return low or high


def in_sigma(a) -> bool:
    a1, a2 = pair(a)
    if a1 < HALF:
        return a1 < a2 <= min(2 * a1, HALF)
    return a1 < a2 <= 2 * a1


def in_m1(a) -> bool:
    a1, a2 = pair(a)
    if a1 < HALF:
        return a1 < a2 <= min(2 * a1, HALF)
    return a1 < a2 <= min(2 * a1, 1.5 * (a1 + HALF))


def gamma_ab_case(a) -> str:
    """Which of the three descriptions of Gamma+(A u B) applies; P1 wins at a2 = a1 + 1/2."""
    a1, a2 = pair(a)
    if not in_m1(a):
        raise CaseUnsupported(f"a = {a} lies outside the admissible set for Gamma+(A u B)")
    if HALF <= a1 < a2 <= a1 + HALF <= 2 * a1:
        return "P1"
    if HALF <= a1 and a1 + HALF <= a2 <= 2 * a1:
        return "P2"
    if 0 < a1 < a2 <= min(2 * a1, HALF):
        return "P3"
    raise CaseUnsupported(f"a = {a}: no case of Gamma+(A u B) applies")


# ---------------------------------------------------------------- constraint lists

_E = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
_PAIRS = ((0, 1), (0, 2), (1, 2))


def _unit_constraints(prefix, rhs):
    return [Constraint(f"{prefix}b{i + 1}", _E[i], rhs) for i in range(3)]


def _pair_constraints(prefix, rhs):
    out = []
    for i, j in _PAIRS:
        c = [0.0, 0.0, 0.0]
        c[i] = c[j] = 1.0
        out.append(Constraint(f"{prefix}b{i + 1}+b{j + 1}", tuple(c), rhs))
    return out


def _hull_constraints(s, tag):
    return (
        _unit_constraints(f"{tag}:min:", s[0])
        + _pair_constraints(f"{tag}:pair:", s[0] + s[1])
        + [Constraint(f"{tag}:sum", (1.0, 1.0, 1.0), s[0] + s[1] + s[2])]
    )


def gamma_A_constraints(a):
    return _hull_constraints(xi(a), "A")


def gamma_B_constraints(a):
    a1, a2 = pair(a)
    if not a1 < a2:
        raise OrderViolation("Gamma+(B) needs a1 < a2")
    return _hull_constraints(eta(a), "B")


def gamma_ab_constraints(a):
    a1, a2 = pair(a)
    case = gamma_ab_case(a)
    out = _unit_constraints(f"{case}:min:", a1)
    s = 3 * a1 + a2 + HALF
    if case in ("P1", "P2"):
        out += _pair_constraints(f"{case}:pair:", a1 + a2 + HALF)
        out.append(Constraint(f"{case}:sum", (1.0, 1.0, 1.0), s))
        for k in range(3):
            c = [1.0, 1.0, 1.0]
            if case == "P1":
                c[k] = 3.0
                out.append(Constraint(f"P1:3b{k + 1}", tuple(c), 3 * a1 + 3 * a2 + HALF))
            else:
                # sum(b) + 4(a2 - a1)(b_k - a1) >= a1 + 3 a2 + 1/2
                c[k] += 4 * (a2 - a1)
                rhs = a1 + 3 * a2 + HALF + 4 * (a2 - a1) * a1
                out.append(Constraint(f"P2:tilt{k + 1}", tuple(c), rhs))
    else:
        out += _pair_constraints("P3:pair:", 2 * a1 + a2)
        for i, j in itertools.permutations(range(3), 2):
            c = [0.0, 0.0, 0.0]
            c[i], c[j] = 2.0, 1.0
            out.append(Constraint(f"P3:2b{i + 1}+b{j + 1}", tuple(c), 2 * a1 + 2 * a2))
        out.append(Constraint("P3:sum", (1.0, 1.0, 1.0), s))
        for k in range(3):
            c = [1.0, 1.0, 1.0]
            c[k] = 3.0
            out.append(Constraint(f"P3:3b{k + 1}", tuple(c), 3 * a1 + 3 * a2 + HALF))
    return out


def necessity_constraints(a):
    a1, a2 = sorted(pair(a))
    return _unit_constraints("NC:min:", a1) + [Constraint("NC:sum", (1.0, 1.0, 1.0), 3 * a1 + a2 + HALF)]


def evaluate(constraints, b) -> RegionMembership:
    b = triple(b)
    inside = True
    active = []
    margin = math.inf
    for c in constraints:
        s = c.slack(b)
        t = tol(c.rhs)
        margin = min(margin, s)
        if s < -t:
            inside = False
        elif s <= t:
            active.append(c.name)
    return RegionMembership(inside, tuple(active), margin)


# ---------------------------------------------------------------- membership

def in_gamma_A(a, b) -> RegionMembership:
    return evaluate(gamma_A_constraints(a), b)


def in_gamma_B(a, b) -> RegionMembership:
    return evaluate(gamma_B_constraints(a), b)


def in_gamma_AB(a, b) -> RegionMembership:
    return evaluate(gamma_ab_constraints(a), b)


def in_hexagon(a, b, which: str = "A") -> RegionMembership:
    """Membership in the bottom face H_A (or H_B) on the plane sum(b) = sum(xi)."""
    if which == "A":
        cons = gamma_A_constraints(a)
        plane = sum(xi(a))
    elif which == "B":
        cons = gamma_B_constraints(a)
        plane = sum(eta(a))
    else:
        raise InvalidParameter("which must be 'A' or 'B'")
    m = evaluate(cons, b)
    on_plane = abs(sum(triple(b)) - plane) <= tol(plane)
    return RegionMembership(m.inside and on_plane, m.active_constraints, m.margin if on_plane else -abs(sum(b) - plane))


def necessity(a, b) -> Necessity:
    a1, a2 = sorted(pair(a))
    b = triple(b)
    if min(b) < a1 - tol(a1):
        return Necessity.VIOLATED_MIN
    s = 3 * a1 + a2 + HALF
    if sum(b) < s - tol(s):
        return Necessity.VIOLATED_SUM
    return Necessity.OK


# ---------------------------------------------------------------- side quadrilaterals

def _segment_family(b, lo3, hi3, s_lo, s_hi, low_lo, low_hi, up_lo, up_hi):
    """b on L_lambda: b3 and b1+b2 interpolate, both b1 and b2 lie between the bounds."""
    b1, b2, b3 = b
    d3 = hi3 - lo3
    ds = s_hi - s_lo
    if abs(d3) > 1e-14:
        lam = (b3 - lo3) / d3
    elif abs(ds) > 1e-14:
        lam = (b1 + b2 - s_lo) / ds
    else:
        lam = 0.0
    if lam < -1e-12 or lam > 1 + 1e-12:
        return False
    lam = min(1.0, max(0.0, lam))
    t3 = (1 - lam) * lo3 + lam * hi3
    ts = (1 - lam) * s_lo + lam * s_hi
    low = (1 - lam) * low_lo + lam * low_hi
    up = (1 - lam) * up_lo + lam * up_hi
    if abs(b3 - t3) > tol(t3) or abs(b1 + b2 - ts) > tol(ts):
        return False
    return all(low - tol(low) <= v <= up + tol(up) for v in (b1, b2))


def _s1(a, b):
    x, e = xi(a), eta(a)
    return _segment_family(b, x[2], e[2], x[0] + x[1], e[0] + e[1], x[0], e[0], x[1], e[1])


def _s2(a, b):
    x, e = xi(a), eta(a)
    return _segment_family(b, x[0], e[0], x[1] + x[2], e[1] + e[2], x[1], e[1], x[2], e[2])


# tag -> (base family, permutation applied to b before testing)
QUADRILATERALS = {
    "S_A1A2B2B1": ("S1", (0, 1, 2)),
    "S_A5A6B6B5": ("S2", (0, 1, 2)),
    "S_A4A6B6B4": ("S1", (2, 1, 0)),
    "S_A3A5B5B3": ("S1", (0, 2, 1)),
    "S_A1A3B3B1": ("S2", (2, 1, 0)),
    "S_A2A4B4B2": ("S2", (0, 2, 1)),
}


def side_quadrilaterals(a, b) -> list:
    """All side quadrilaterals (between H_A and H_B) containing b."""
    a1, a2 = pair(a)
    if not a1 < a2:
        raise OrderViolation("side quadrilaterals need a1 < a2")
    b = triple(b)
    out = []
    for tag, (family, perm) in QUADRILATERALS.items():
        pb = tuple(b[i] for i in perm)
        if (_s1 if family == "S1" else _s2)((a1, a2), pb):
            out.append(tag)
    return out


def in_side_quadrilateral(a, b):
    found = side_quadrilaterals(a, b)
    return found[0] if found else None


def quadrilateral_vertices(a, tag: str) -> tuple:
    """The four corner points of a side quadrilateral, in the order of its tag."""
    verts = {**vertices_A(a), **vertices_B(a)}
    return tuple(verts[n] for n in re.findall(r"[AB]\d", tag))


def quadrilateral_shadows(a, b) -> list:
    """Tags of the side quadrilaterals S with b in S + R_+^3.

    Feasibility of sum_i w_i v_i <= b, w >= 0, sum w = 1 over the corners v_i.
    """
    a1, a2 = pair(a)
    if not a1 < a2:
        raise OrderViolation("side quadrilaterals need a1 < a2")
    b = np.asarray(triple(b))
    out = []
    for tag in QUADRILATERALS:
        v = np.array(quadrilateral_vertices((a1, a2), tag)).T
        res = linprog(np.zeros(4), A_ub=v, b_ub=b + np.array([tol(t) for t in b]),
                      A_eq=np.ones((1, 4)), b_eq=[1.0], bounds=[(0, None)] * 4, method="highs")
        if res.status == 0:
            out.append(tag)
    return out


# ---------------------------------------------------------------- 1F2

def one_f_two_classify(a: float, b: float, c: float) -> OneF2Class:
    """Sign class of 1F2(a; b, c; -x^2) for a > 0, b > 0, c > 0."""
    a, b, c = float(a), float(b), float(c)
    if not (a > 0 and b > 0 and c > 0):
        raise InvalidParameter("1F2 parameters must be positive")
    if b <= a or c <= a or b + c < 3 * a + HALF - tol(3 * a + HALF):
        return OneF2Class.SIGN_CHANGE
    for p, q in ((a + HALF, 2 * a), (2 * a, a + HALF)):
        if abs(b - p) <= tol(p) and abs(c - q) <= tol(q):
            return OneF2Class.NONNEG_BOUNDARY
    if _in_pstar(a, b, c) or _in_pstar(a, c, b):
        return OneF2Class.STRICT_POSITIVE
    return OneF2Class.INDETERMINATE


def _in_pstar(a, b, c):
    if not b > a:
        return False
    bound = max(3 * a + HALF - b, a + a / (2 * (b - a)))
    return c >= bound - tol(bound)


# ---------------------------------------------------------------- vertex enumeration

def polyhedron_vertices(constraints, equalities=(), fixed=None):
    """Vertices of {coeffs . b >= rhs} intersected with optional equalities.

    ``fixed`` maps a coordinate index to a value (a slice).  Returns the list
    of vertices in the free coordinates and the recession directions that
    stay inside (unit axis directions, since all regions are upward closed).
    """
    fixed = dict(fixed or {})
    free = [i for i in range(3) if i not in fixed]
    rows = []
    for c in constraints:
        coeffs = [c.coeffs[i] for i in free]
        rhs = c.rhs - sum(c.coeffs[i] * v for i, v in fixed.items())
        rows.append((np.array(coeffs), rhs, False))
    for coeffs, rhs in equalities:
        cf = [coeffs[i] for i in free]
        r = rhs - sum(coeffs[i] * v for i, v in fixed.items())
        rows.append((np.array(cf), r, True))
    dim = len(free)
    eq_rows = [r for r in rows if r[2]]
    ineq_rows = [r for r in rows if not r[2]]
    need = dim - len(eq_rows)
    verts = []
    if need < 0:
        return verts, []
    for combo in itertools.combinations(ineq_rows, need):
        sel = list(combo) + eq_rows
        M = np.array([r[0] for r in sel]).reshape(dim, dim) if dim else np.zeros((0, 0))
        if dim == 0:
            continue
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        p = np.linalg.solve(M, np.array([r[1] for r in sel]))
        ok = all(r[0] @ p - r[1] >= -1e-9 * (1 + abs(r[1])) for r in ineq_rows)
        ok = ok and all(abs(r[0] @ p - r[1]) <= 1e-9 * (1 + abs(r[1])) for r in eq_rows)
        if ok and not any(np.allclose(p, q, atol=1e-10) for q in verts):
            verts.append(p)
    verts.sort(key=lambda v: tuple(v))
    rays = [] if eq_rows else [tuple(1.0 if j == i else 0.0 for j in range(dim)) for i in range(dim)]
    return [tuple(float(t) for t in v) for v in verts], rays
