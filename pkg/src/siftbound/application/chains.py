"""Exclusion chains for the smallest prime factor of N = 3^a (q_1 ... q_k)^2.

If q^2 || N then sigma(q^2) = q^2 + q + 1 divides N, so every prime factor
of q^2+q+1 other than 3 is again one of the q_i. Starting from a candidate
smallest prime p we close this implication under a best-first order
(smallest implied prime first) until either an implied prime below p
appears, or some prime r != 3 occurs in the product of the sigma(q^2) with
total multiplicity >= 3, which is impossible since r^2 || N.
"""
import heapq
import json
import os
from dataclasses import dataclass, field

from ..errors import DomainError
from ..factor import (COMPOSITE, UNKNOWN, FactorBudget, Factorization,
                      _classify, _factor_any, is_prime, small_factors)
from ..primes import enumerate_primes


@dataclass
class ChainLimits:
    # chain primes above 2^max_bits only get the small-prime scan of q^2+q+1
    max_steps: int = 400
    max_bits: int = 128
    budget: FactorBudget = field(default_factory=lambda: FactorBudget(
        trial_bound=100000, rho_iterations=2 ** 16, rho_seeds=3))


@dataclass
class ChainStep:
    prev: int
    n: int
    factorization: Factorization
    next: object  # prime, None, or 'unknown'

    def as_dict(self):
        d = self.factorization.as_dict()
        return {"prev": self.prev, "n": str(self.n), "factors": d["factors"],
                "cofactor": d["cofactor"], "next": self.next if isinstance(self.next, int)
                else self.next}


@dataclass
class ChainCertificate:
    p: int
    status: str                      # excluded | unresolved
    reason: str = None               # smaller | cube | via7
    terminal: int = None
    cube_prime: int = None
    steps: list = field(default_factory=list)
    external_hints_used: list = field(default_factory=list)
    probabilistic: bool = False
    depends_on: object = None        # certificate of 7 for the via7 case
    note: str = ""

    def as_dict(self):
        return {"p": self.p, "status": self.status, "reason": self.reason,
                "terminal": self.terminal, "cube_prime": self.cube_prime,
                "steps": [s.as_dict() for s in self.steps],
                "external_hints_used": [[str(a), str(b)] for a, b in self.external_hints_used],
                "probabilistic": self.probabilistic,
                "depends_on": self.depends_on.as_dict() if self.depends_on else None,
                "note": self.note}

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True)

    def chain_text(self):
        return " ; ".join(f"{s.prev} -> {s.factorization}" for s in self.steps)


def _check_residues(fz):
    for r, _ in fz.factors:
        if r != 3 and r % 3 != 1:
            raise AssertionError(f"prime {r} = 2 mod 3 divides {fz.n}")


def _least_p3(fz, trial_bound):
    c = [r for r, _ in fz.factors if r % 3 == 1]
    best = min(c) if c else None
    if fz.cofactor != 1 and (best is None or best > trial_bound):
        return UNKNOWN
    return best


def chain_step(p, budget=None):
    """(p^2+p+1, its factorization, smallest prime factor = 1 mod 3)."""
    if p <= 3 or is_prime(p) == COMPOSITE:
        raise DomainError("chain_step needs a prime p > 3")
    n = p * p + p + 1
    budget = budget or FactorBudget()
    fz = _factor_any(n, budget)
    _check_residues(fz)
    return n, fz, _least_p3(fz, budget.trial_bound)


def smallest_prime_sanity(p):
    """The cheap filter: (p^2+p+1)/rho(p) must be prime for p to survive."""
    n = p * p + p + 1
    m = n // 3 if p % 3 == 1 else n
    ok = is_prime(m) != COMPOSITE
    return {"p": p, "m": m, "passes": ok}


def _split_small(n, bound):
    """Partial factorization with only the primes <= bound removed."""
    rest = n
    facs = []
    for f in small_factors(n, bound):
        e = 0
        while rest % f == 0:
            rest //= f
            e += 1
        facs.append((f, e))
    return Factorization(n, tuple(facs), rest, {f: "prime" for f, _ in facs})


_SEVEN = {}


def exclude_prime(p, limits=None):
    """Search for a certificate that p is not the smallest prime of N."""
    if p <= 3 or is_prime(p) == COMPOSITE:
        raise DomainError("exclude_prime needs a prime p > 3")
    limits = limits or ChainLimits()
    tb = limits.budget.trial_bound
    heap = [p]
    parent = {p: None}
    steps = {}
    order = []
    val = {}
    found = None
    note = ""
    while heap:
        if len(order) >= limits.max_steps:
            note = "step limit"
            break
        q = heapq.heappop(heap)
        if q == 7 and p != 7:
            found = ("via7", 7, None)
            break
        n = q * q + q + 1
        big = q.bit_length() > limits.max_bits
        below = [f for f in small_factors(n, tb) if f != 3 and f < p]
        if below:
            fz = _split_small(n, tb)
            steps[q] = ChainStep(q, n, fz, min(below))
            order.append(q)
            t = min(below)
            parent.setdefault(t, q)
            found = ("smaller", t, None)
            break
        if big:
            fz = _split_small(n, tb)
            if fz.cofactor > 1 and _classify(fz.cofactor) != COMPOSITE:
                c = fz.cofactor
                fz = Factorization(n, tuple(sorted(fz.factors + ((c, 1),))), 1,
                                   {**fz.prime_status, c: _classify(c)})
            else:
                note = "size limit"
        else:
            fz = _factor_any(n, limits.budget)
        _check_residues(fz)
        steps[q] = ChainStep(q, n, fz, _least_p3(fz, tb))
        order.append(q)
        if fz.cofactor != 1 and not big:
            note = "partial factorization"
        for r, e in fz.factors:
            if r == 3:
                continue
            val.setdefault(r, {})[q] = e
            if sum(val[r].values()) >= 3:
                found = ("cube", r, dict(val[r]))
                break
            if r not in parent:
                parent[r] = q
                heapq.heappush(heap, r)
        if found:
            break
    if not found:
        return ChainCertificate(p, "unresolved", steps=[steps[q] for q in order],
                                note=note or "closure exhausted")
    reason, t, contrib = found
    need = set()

    def climb(q):
        while q is not None and q not in need:
            need.add(q)
            q = parent[q]

    if reason == "cube":
        tot = 0
        for q in order:
            if q in contrib:
                climb(q)
                tot += contrib[q]
                if tot >= 3:
                    break
    else:
        climb(parent[t])
    kept = [steps[q] for q in order if q in need]
    hints = [h for s in kept for h in s.factorization.hints_used]
    prob = any(s.factorization.probabilistic() for s in kept)
    cert = ChainCertificate(p, "excluded", reason, t,
                            t if reason == "cube" else None, kept, hints, prob)
    if reason == "via7":
        if 7 not in _SEVEN:
            _SEVEN[7] = exclude_prime(7, limits)
        cert.depends_on = _SEVEN[7]
        cert.terminal = 7
    return cert


def _worker(args):
    p, limits = args
    return exclude_prime(p, limits)


def verify_range(lo, hi, limits=None, checkpoint=None, sink=None, workers=None,
                 every=10000, prefilter=True):
    """Run exclude_prime over all primes in [lo, hi].

    sink(cert) receives the certificates in ascending order of p. With a
    checkpoint path the state is saved every `every` primes and a rerun
    resumes after the last saved prime.
    """
    if lo < 5 or hi < lo:
        raise DomainError("need 5 <= lo <= hi")
    limits = limits or ChainLimits()
    state = {"lo": lo, "hi": hi, "last": lo - 1, "excluded": 0,
             "prefiltered": 0, "unresolved": []}
    if checkpoint and os.path.exists(checkpoint):
        with open(checkpoint) as fh:
            old = json.load(fh)
        if old.get("lo") == lo and old.get("hi") == hi:
            state = old
    primes = list(enumerate_primes(max(lo, state["last"] + 1), hi))
    workers = int(workers or os.environ.get("SIFTBOUND_THREADS", 1) or 1)
    pool = None
    if workers > 1:
        import multiprocessing as mp
        pool = mp.get_context("fork").Pool(workers)
        results = pool.imap(_worker, [(p, limits) for p in primes], chunksize=64)
    else:
        results = (exclude_prime(p, limits) for p in primes)
    done = 0
    try:
        for p, cert in zip(primes, results):
            if prefilter and not smallest_prime_sanity(p)["passes"]:
                state["prefiltered"] += 1
            if cert.status == "excluded":
                state["excluded"] += 1
            else:
                state["unresolved"].append(p)
            if sink:
                sink(cert)
            state["last"] = p
            done += 1
            if checkpoint and done % every == 0:
                _save(checkpoint, state)
    finally:
        if pool:
            pool.close()
    if checkpoint:
        _save(checkpoint, state)
    return state


def _save(path, state):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(state, fh)
    os.replace(tmp, path)
