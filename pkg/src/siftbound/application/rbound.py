"""Upper bounds for the number r of distinct prime factors.

Two evaluations are provided. For beta >= 8 a closed formula in beta; for
small beta an implicit inequality r < F(r, beta) whose largest integer
solution is found by scanning. Both come in two shapes, with the leading
factor (beta + 3) or (2 beta + 1).
"""
import math

from ..errors import DomainError

PRINTED_TABLE = {1: 14, 2: 30, 3: 56, 4: 90, 5: 132, 6: 182, 7: 240}
LOG3 = math.log(3)
SCAN_LIMIT = 10 ** 6


def _factor(beta, form):
    if form == "beta+3":
        return beta + 3
    if form == "2beta+1":
        return 2 * beta + 1
    raise DomainError(f"unknown form {form!r}")


def _largest_below(rhs):
    """Largest integer r with r < rhs."""
    f = math.floor(rhs)
    return f - 1 if f == rhs else f


def direct_rhs(beta, form="beta+3"):
    if beta < 8:
        raise DomainError("closed form needs beta >= 8")
    k = _factor(beta, form)
    return (2 * beta + (math.log(math.log(beta)) + 1.24351) / LOG3) * k + 4


def r_bound_direct(beta, form="beta+3"):
    """Largest r allowed by the closed formula (strict inequality)."""
    return _largest_below(direct_rhs(beta, form))


def implicit_rhs(r, beta, form="2beta+1"):
    """F(r, beta); the constraint is r < F(r, beta)."""
    k = _factor(beta, form)
    ll = math.log(math.log(r))
    main = k * (2 * beta + (ll + 0.24351) / LOG3)
    u = (2 / 3 * (main + ll) + 2.3012) / math.log(2 * beta)
    return 2 + main + max(2.0, u)


def r_bound_iterative(beta, form="2beta+1", limit=SCAN_LIMIT):
    """Largest r in [3, limit] with r < F(r, beta), next to the printed table."""
    if not 1 <= beta <= 7:
        raise DomainError("beta must be in 1..7")
    best = None
    for r in range(3, limit + 1):
        if r < implicit_rhs(r, beta, form):
            best = r
        elif r >= 100:
            # dF/dr < 24/(r log r) < 1 here, so r - F(r) only grows
            break
    printed = PRINTED_TABLE[beta]
    return {"beta": beta, "form": form, "computed_bound": best,
            "printed_value": printed, "agree": best == printed}


def r_table(form="2beta+1"):
    return [r_bound_iterative(b, form) for b in range(1, 8)]
