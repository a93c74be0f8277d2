import copy
import json

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from siftbound.application.certcheck import check_certificate
from siftbound.application.chains import (chain_step, exclude_prime,
                                          smallest_prime_sanity, verify_range)
from siftbound.errors import DomainError
from siftbound.factor import load_bundled_hints


@pytest.fixture(autouse=True, scope="module")
def hints():
    load_bundled_hints()


def test_seven_ends_in_a_cube():
    c = exclude_prime(7)
    assert c.status == "excluded" and c.reason == "cube" and c.cube_prime == 7
    # 79^2+79+1 = 3 * 7^2 * 43 and 331^2+331+1 = 3 * 7 * 5233
    ns = {s.prev: s.n for s in c.steps}
    assert ns[79] == 3 * 49 * 43 and ns[331] == 3 * 7 * 5233
    assert check_certificate(c.as_dict())[0]


def test_eleven_and_thirteen():
    c = exclude_prime(11)
    assert (c.reason, c.terminal) == ("smaller", 7) and c.steps[0].n == 7 * 19
    c = exclude_prime(13)
    assert c.reason == "smaller" and c.terminal == 7
    chain = [s.prev for s in c.steps]
    assert chain[:6] == [13, 61, 97, 3169, 3348577, 3737657091169]
    assert 181 in chain and not c.probabilistic
    assert check_certificate(c.as_dict())[0]


def test_five_goes_through_seven():
    c = exclude_prime(5)
    assert c.reason == "via7" and c.depends_on.p == 7
    ok, msg = check_certificate(c.as_dict())
    assert ok, msg


@pytest.mark.parametrize("p", [7, 13, 19, 31, 61, 97, 3169])
def test_chain_step_against_sympy(p):
    n, fz, nxt = chain_step(p)
    assert n == p * p + p + 1
    f = sympy.factorint(n)
    assert dict(fz.factors) == f and fz.cofactor == 1
    assert nxt == min(r for r in f if r % 3 == 1)


def test_chain_step_domain():
    for bad in (2, 3, 9, 1):
        with pytest.raises(DomainError):
            chain_step(bad)


@settings(max_examples=60, deadline=None)
@given(st.integers(5, 10 ** 6))
def test_sigma_factors_are_one_mod_three(k):
    p = int(sympy.nextprime(k))
    n, fz, _ = chain_step(p)
    assert all(r == 3 or r % 3 == 1 for r, _ in fz.factors)
    assert n % 9 != 0


def test_sanity_filter():
    assert not smallest_prime_sanity(61)["passes"]     # 61^2+61+1 = 3*13*97
    assert smallest_prime_sanity(7)["passes"] and smallest_prime_sanity(5)["passes"]


def test_range_and_checker():
    bad = []

    def sink(c):
        ok, msg = check_certificate(json.loads(c.to_json()))
        if not ok:
            bad.append((c.p, msg))
    st_ = verify_range(7, 10 ** 4, sink=sink)
    assert st_["unresolved"] == [] and bad == []
    assert st_["excluded"] == sympy.primepi(10 ** 4) - 3


@pytest.mark.long
def test_range_1e5():
    st_ = verify_range(7, 10 ** 5)
    assert st_["unresolved"] == []


def test_checkpoint_resume(tmp_path):
    ck = str(tmp_path / "ck.json")
    seen = []
    full = verify_range(7, 3000, checkpoint=ck, every=50, sink=lambda c: seen.append(c.p))
    # a rerun with the same range picks up after the last prime: nothing to do
    again = []
    st2 = verify_range(7, 3000, checkpoint=ck, sink=lambda c: again.append(c.p))
    assert again == [] and st2["excluded"] == full["excluded"]
    # a partial state resumes from its last prime
    part = dict(full, last=1000, excluded=sum(p <= 1000 for p in seen))
    with open(ck, "w") as fh:
        json.dump(part, fh)
    rest = []
    st3 = verify_range(7, 3000, checkpoint=ck, sink=lambda c: rest.append(c.p))
    assert rest == [p for p in seen if p > 1000] and st3["excluded"] == full["excluded"]


def test_deterministic():
    a = [exclude_prime(p).to_json() for p in (7, 13, 101, 997)]
    b = [exclude_prime(p).to_json() for p in (7, 13, 101, 997)]
    assert a == b


def _tamper(d, f):
    d = copy.deepcopy(d)
    f(d)
    return check_certificate(d)[0]


def test_checker_rejects_tampering():
    d = exclude_prime(13).as_dict()
    assert check_certificate(d)[0]
    assert not _tamper(d, lambda x: x.update(terminal=11))
    assert not _tamper(d, lambda x: x["steps"][1]["factors"].__setitem__(0, ["5", 1]))
    assert not _tamper(d, lambda x: x["steps"].pop(0))
    assert not _tamper(d, lambda x: x["steps"][0].update(n="184"))
    assert not _tamper(d, lambda x: x.update(status="unresolved"))
    assert not _tamper(d, lambda x: x.update(reason="cube", cube_prime=7))
    d7 = exclude_prime(7).as_dict()
    assert not _tamper(d7, lambda x: x["steps"].pop())
    d5 = exclude_prime(5).as_dict()
    assert not _tamper(d5, lambda x: x.update(depends_on=None))
