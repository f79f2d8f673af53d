"""Recursive schemes that raise the order of a commutator formula.

Every builder takes an order-n formula approximating exp(x^2 [A,B]) and
returns a higher-order one for the same target, assembled from scaled
copies and inverses of the input. Gate counts follow the copy count
minus whatever boundary merges fire, and are asserted by tests rather
than assumed here.
"""

from __future__ import annotations

import math
from dataclasses import replace
from enum import Enum

from .bases import s2, s3
from .errors import InvalidInputError
from .formula import ProductFormula, concat
from .solver import solve_sqrt4


def _require_order(f: ProductFormula) -> int:
    if f.claimed_order is None:
        raise InvalidInputError("input formula carries no claimed order")
    return f.claimed_order


def two_copy(f: ProductFormula) -> ProductFormula:
    """f(x/sqrt2) f(-x/sqrt2): raises an even order 2k to 2k+1."""
    n = _require_order(f)
    if n % 2 != 0:
        raise InvalidInputError("the 2-copy step needs an even-order input")
    root = 1.0 / math.sqrt(2.0)
    out = concat([f.scale_argument(root), f.scale_argument(-root)],
                 label=f"two_copy({f.label})", claimed_order=n + 1)
    return out.simplify()


def jean_koseleff(f: ProductFormula, n: int | None = None) -> ProductFormula:
    """Triple-copy step raising order n to n+1, valid for either parity.

    Even n: f(tx) f(sx) f(tx) with t = (2 + 2^(2/(n+1)))^(-1/2) and
    s = -2^(1/(n+1)) t. Odd n: f(ux) f(vx)^(-1) f(ux) with
    u = (2 - 2^(2/(n+1)))^(-1/2) and v = 2^(1/(n+1)) u.
    """
    n = _require_order(f) if n is None else n
    if n != f.claimed_order:
        raise InvalidInputError("order argument disagrees with the formula's claim")
    if n % 2 == 0:
        t = (2.0 + 2.0 ** (2.0 / (n + 1))) ** -0.5
        s = -(2.0 ** (1.0 / (n + 1))) * t
        parts = [f.scale_argument(t), f.scale_argument(s), f.scale_argument(t)]
    else:
        u = (2.0 - 2.0 ** (2.0 / (n + 1))) ** -0.5
        v = (2.0 ** (1.0 / (n + 1))) * u
        parts = [f.scale_argument(u), f.scale_argument(v).inverse(), f.scale_argument(u)]
    out = concat(parts, label=f"jk({f.label})", claimed_order=n + 1)
    return out.simplify()


def childs_wiebe5(f: ProductFormula, n: int | None = None) -> ProductFormula:
    """5-copy step f(vx)^2 f(mx)^(-1) f(vx)^2 raising odd order n to n+1.

    With z = 4^(1/(n+1)), sigma = z^2 / (4 (4 - z^2)), v = sqrt(1/4 + sigma)
    and m = sqrt(4 sigma); then 4 v^2 - m^2 = 1 preserves the commutator
    weight and 4 v^(n+1) - m^(n+1) = 0 cancels the leading error.
    """
    n = _require_order(f) if n is None else n
    if n != f.claimed_order:
        raise InvalidInputError("order argument disagrees with the formula's claim")
    if n % 2 == 0:
        raise InvalidInputError("the 5-copy step needs an odd-order input")
    z2 = 4.0 ** (2.0 / (n + 1))
    sigma = z2 / (4.0 * (4.0 - z2))
    nu = math.sqrt(0.25 + sigma)
    mu = math.sqrt(4.0 * sigma)
    assert abs(4.0 * nu * nu - mu * mu - 1.0) < 1e-12
    assert abs(4.0 * nu ** (n + 1) - mu ** (n + 1)) < 1e-12
    fwd = f.scale_argument(nu)
    parts = [fwd, fwd, f.scale_argument(mu).inverse(), fwd, fwd]
    out = concat(parts, label=f"cw5({f.label})", claimed_order=n + 1)
    return out.simplify()


def build_q(f: ProductFormula, n: int | None = None) -> ProductFormula:
    """4-copy scheme raising order n to n+2 with sqrt(4 n) copies per level.

    f(a x/s) f(b x/s)^(-1) f(c x/s) f(d x/s)^(-1) with (a, b, c, d) from
    the power-condition solve and s = sqrt(|a^2 - b^2 + c^2 - d^2|). A
    negative signed square sum would flip the target to exp(-x^2 [A,B]);
    the result is then tagged in its label and callers wanting the
    positive target take the inverse.
    """
    n = _require_order(f) if n is None else n
    if n != f.claimed_order:
        raise InvalidInputError("order argument disagrees with the formula's claim")
    sol = solve_sqrt4(n)
    scale = 1.0 / math.sqrt(abs(sol.signed_sum))
    parts = [
        f.scale_argument(sol.a * scale),
        f.scale_argument(sol.b * scale).inverse(),
        f.scale_argument(sol.c * scale),
        f.scale_argument(sol.d * scale).inverse(),
    ]
    label = f"q4({f.label})"
    if sol.signed_sum < 0.0:
        label += "[inverse-target]"
    out = concat(parts, label=label, claimed_order=n + 2)
    return out.simplify()


def build_w(f: ProductFormula, n: int | None = None) -> ProductFormula:
    """5-copy scheme raising order n to n+2 with sqrt(5 n) copies per level.

    f(-s'x/r) f(x/r)^(-1) f(sx/r) f(-x/r)^(-1) f(-s'x/r) with
    s = (2 / (1 + 2^(1/(n+2))))^(1/(n+1)), s' = 2^(-1/(n+2)) s and
    r = sqrt(s^2 + 2 s'^2 - 2). The two cancellation identities behind
    the +2 jump hold for odd n, which is every order this package feeds
    it; other n > 1 are accepted and built as printed.
    """
    n = _require_order(f) if n is None else n
    if n != f.claimed_order:
        raise InvalidInputError("order argument disagrees with the formula's claim")
    if n <= 1:
        raise InvalidInputError("the 5-copy squared scheme needs order n > 1")
    s = (2.0 / (1.0 + 2.0 ** (1.0 / (n + 2)))) ** (1.0 / (n + 1))
    s_prime = 2.0 ** (-1.0 / (n + 2)) * s
    r = math.sqrt(s * s + 2.0 * s_prime * s_prime - 2.0)
    outer = f.scale_argument(-s_prime / r)
    parts = [
        outer,
        f.scale_argument(1.0 / r).inverse(),
        f.scale_argument(s / r),
        f.scale_argument(-1.0 / r).inverse(),
        outer,
    ]
    out = concat(parts, label=f"w5({f.label})", claimed_order=n + 2)
    return out.simplify()


def build_v(f: ProductFormula, n: int | None = None) -> ProductFormula:
    """6-copy scheme raising odd order n to n+2: the odd triple-copy step
    at x/sqrt2 composed with its negated-argument twin."""
    n = _require_order(f) if n is None else n
    if n != f.claimed_order:
        raise InvalidInputError("order argument disagrees with the formula's claim")
    if n % 2 == 0:
        raise InvalidInputError("the 6-copy scheme needs an odd-order input")
    out = two_copy(jean_koseleff(f, n))
    return replace(out, label=f"v6({f.label})")


def build_g(f: ProductFormula, n: int | None = None) -> ProductFormula:
    """10-copy scheme raising odd order n to n+2: the 5-copy step followed
    by the 2-copy step."""
    n = _require_order(f) if n is None else n
    if n != f.claimed_order:
        raise InvalidInputError("order argument disagrees with the formula's claim")
    if n % 2 == 0:
        raise InvalidInputError("the 10-copy scheme needs an odd-order input")
    out = two_copy(childs_wiebe5(f, n))
    return replace(out, label=f"g10({f.label})")


def build_cw_sqrt6_baseline(f: ProductFormula | None = None) -> ProductFormula:
    """6-copy baseline raising even order n to n+2: 2-copy then the
    triple-copy step. Applied to the 4-gate base this is the 22-gate
    fourth-order benchmark formula."""
    if f is None:
        f = s2()
    n = _require_order(f)
    if n % 2 != 0:
        raise InvalidInputError("the 6-copy baseline needs an even-order input")
    out = jean_koseleff(two_copy(f))
    return replace(out, label=f"cw6({f.label})")


def sum_comm_step(f: ProductFormula, m: int | None = None) -> ProductFormula:
    """Order-raising step for sum-plus-commutator formulas.

    Even m: f(ax) f(bx)^(-1) f(ax) with a = (2 - 2^(1/(m+1)))^(-1) and
    b = 2^(1/(m+1)) a, so 2a - b = 1. Odd m: f(-x/2)^(-1) f(x/2). The
    step acts on the stored coefficients; the order bookkeeping follows
    the family in which the commutator weight scales linearly with x.
    """
    m = _require_order(f) if m is None else m
    if m != f.claimed_order:
        raise InvalidInputError("order argument disagrees with the formula's claim")
    if m < 1:
        raise InvalidInputError("source order must be a positive integer")
    if m % 2 == 0:
        a = 1.0 / (2.0 - 2.0 ** (1.0 / (m + 1)))
        b = 2.0 ** (1.0 / (m + 1)) * a
        parts = [f.scale_argument(a), f.scale_argument(b).inverse(), f.scale_argument(a)]
    else:
        parts = [f.scale_argument(-0.5).inverse(), f.scale_argument(0.5)]
    out = concat(parts, label=f"sumcomm({f.label})", claimed_order=m + 1)
    return out.simplify()


class SchemeKind(Enum):
    """The order-raising schemes reachable from the command line."""

    TWO_COPY = "two-copy"
    JEAN_KOSELEFF = "jk"
    CHILDS_WIEBE5 = "cw5"
    Q4 = "q4"
    W5 = "w5"
    V6 = "v6"
    G10 = "g10"
    CW_SQRT6 = "cw-sqrt6"
    SUM_COMM = "sum-comm"


_SCHEME_DISPATCH = {
    SchemeKind.TWO_COPY: two_copy,
    SchemeKind.JEAN_KOSELEFF: jean_koseleff,
    SchemeKind.CHILDS_WIEBE5: childs_wiebe5,
    SchemeKind.Q4: build_q,
    SchemeKind.W5: build_w,
    SchemeKind.V6: build_v,
    SchemeKind.G10: build_g,
    SchemeKind.CW_SQRT6: build_cw_sqrt6_baseline,
    SchemeKind.SUM_COMM: sum_comm_step,
}


def apply_scheme(kind: SchemeKind, f: ProductFormula) -> ProductFormula:
    return _SCHEME_DISPATCH[kind](f)


def q5() -> ProductFormula:
    return replace(build_q(s3()), label="Q5")


def w5() -> ProductFormula:
    return replace(build_w(s3()), label="W5")


def v5() -> ProductFormula:
    return replace(build_v(s3()), label="V5")


def g5() -> ProductFormula:
    return replace(build_g(s3()), label="G5")


def v4_tilde() -> ProductFormula:
    return replace(build_cw_sqrt6_baseline(s2()), label="V4t")


def pure_commutator_library() -> dict[str, ProductFormula]:
    """Named formulas shipped with the package, all targeting exp(x^2 [A,B])."""
    return {
        "S2": s2(),
        "S3": s3(),
        "V4t": v4_tilde(),
        "Q5": q5(),
        "W5": w5(),
        "V5": v5(),
        "G5": g5(),
    }
