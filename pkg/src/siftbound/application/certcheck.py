"""Stand-alone checker for chain certificates.

Works on the JSON form only and uses none of the search or factoring code:
products are re-multiplied, primality is re-tested with GMP, valuations
are recomputed by division and minimality of the recorded next prime is
re-established by trial division.
"""
import gmpy2

_TRIAL_MAX = 1 << 22


def _prime(n):
    return n >= 2 and bool(gmpy2.is_prime(n, 40))


def _val(n, r):
    v = 0
    while n % r == 0:
        n //= r
        v += 1
    return v


def _no_p3_below(m, bound):
    """True if m has no prime factor = 1 mod 3 below bound."""
    d = 7
    while d < bound:
        if m % d == 0 and _prime(d):
            return False
        d += 6
    return True


def check_certificate(cert, _depth=0):
    """Return (ok, message) for a certificate given as a dict."""
    p = int(cert["p"])
    if not _prime(p) or p <= 3:
        return False, "start is not a prime > 3"
    if cert.get("status") != "excluded":
        return False, "certificate does not claim exclusion"
    implied = {p}
    seen = set()
    vals = {}
    for k, st in enumerate(cert["steps"]):
        q = int(st["prev"])
        n = int(st["n"])
        if q not in implied:
            return False, f"step {k}: {q} is not implied by earlier steps"
        if q in seen:
            return False, f"step {k}: {q} repeated"
        seen.add(q)
        if n != q * q + q + 1:
            return False, f"step {k}: n != q^2+q+1"
        prod = int(st["cofactor"])
        listed = []
        for ps, e in st["factors"]:
            r = int(ps)
            if not _prime(r):
                return False, f"step {k}: {r} not prime"
            prod *= r ** int(e)
            listed.append(r)
        if prod != n:
            return False, f"step {k}: factors do not multiply to n"
        nxt = st.get("next")
        if isinstance(nxt, int):
            if n % nxt or nxt % 3 != 1 or not _prime(nxt):
                return False, f"step {k}: next {nxt} invalid"
            if any(r % 3 == 1 and r < nxt for r in listed):
                return False, f"step {k}: a smaller 1 mod 3 factor is listed"
            c = int(st["cofactor"])
            if c != 1:
                if nxt > _TRIAL_MAX:
                    return False, f"step {k}: cannot re-establish minimality"
                if not _no_p3_below(c, nxt):
                    return False, f"step {k}: cofactor hides a smaller factor"
        for r in listed:
            if r != 3:
                implied.add(r)
        for r in listed:
            if r != 3:
                vals[r] = vals.get(r, 0) + _val(n, r)
    reason = cert.get("reason")
    t = cert.get("terminal")
    if reason == "smaller":
        t = int(t)
        if t not in implied or not (3 < t < p) or not _prime(t):
            return False, "terminal is not an implied prime below p"
        return True, f"{p}: implies {t} < {p}"
    if reason == "cube":
        r = int(cert["cube_prime"])
        if r == 3 or vals.get(r, 0) < 3:
            return False, "no cube among the sigma values"
        return True, f"{p}: {r}^{vals[r]} divides the product of sigma(q^2)"
    if reason == "via7":
        if 7 not in implied or p == 7:
            return False, "7 not implied"
        dep = cert.get("depends_on")
        if not dep or int(dep["p"]) != 7 or _depth > 2:
            return False, "missing certificate for 7"
        ok, msg = check_certificate(dep, _depth + 1)
        return ok, f"{p}: implies 7; " + msg
    return False, f"unknown reason {reason!r}"
