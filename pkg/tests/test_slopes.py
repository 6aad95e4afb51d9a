import random
from math import gcd

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rightangle import slopes as S


# -- slope basics ------------------------------------------------------------


@given(st.integers(-40, 40), st.integers(-40, 40))
def test_slope_canonicalisation(p, q):
    if p == 0 and q == 0:
        with pytest.raises(S.SlopeError):
            S.Slope.of(p, q)
        return
    s = S.Slope.of(p, q)
    t = S.Slope.of(-p, -q)
    assert s == t
    assert gcd(abs(s.p), abs(s.q)) == 1
    assert s.q > 0 or (s.q == 0 and s.p == 1)


def test_cyclic_order():
    a = S.Slope.of(0, 1)
    b = S.Slope.of(1, 2)
    c = S.Slope.of(1, 0)
    assert S.cyclically_ordered(a, b, c)
    assert not S.cyclically_ordered(a, c, b)
    # wrap through infinity
    d = S.Slope.of(-3, 1)
    assert S.cyclically_ordered(b, c, d)


def test_interval_membership():
    one = S.Slope.of(1, 1)
    inf = S.Slope.of(1, 0)
    iv = S.SlopeInterval(one, inf)
    assert iv.contains(S.Slope.of(3, 2))
    assert iv.contains(one) and iv.contains(inf)
    assert not iv.contains(S.Slope.of(0, 1))
    comp = S.LongitudeComplement(S.Slope.of(0, 1))
    assert not comp.contains(S.Slope.of(0, 1))
    assert comp.contains(S.Slope.of(5, 7))


def test_interval_mediant_oracle():
    # closed arc [1, infinity]: exactly the rationals >= 1 plus infinity
    one = S.Slope.of(1, 1)
    inf = S.Slope.of(1, 0)
    iv = S.SlopeInterval(one, inf)
    rng = random.Random(17)
    for _ in range(200):
        p = rng.randrange(-30, 31)
        q = rng.randrange(0, 12)
        if p == 0 and q == 0:
            continue
        s = S.Slope.of(p, q)
        inside = s.q == 0 or (s.p >= s.q > 0)
        assert iv.contains(s) == inside


# -- longitude ---------------------------------------------------------------


def test_longitude_basic():
    g = S.AbGroup(())
    assert S.longitude(S.IotaMap(g, g.element(1), g.element(0))) \
        == S.Slope.of(0, 1)
    assert S.longitude(S.IotaMap(g, g.element(0), g.element(1))) \
        == S.Slope.of(1, 0)


def test_longitude_with_torsion_brute_force():
    g = S.AbGroup((2,))
    iota = S.IotaMap(g, g.element(2, (1,)), g.element(4, (0,)))
    vec = iota.kernel_vector()
    assert iota.apply(*vec) == g.zero()
    # brute force over |p|, |q| <= 50: the kernel is Z * vec
    kernel = [(p, q) for p in range(-50, 51) for q in range(-50, 51)
              if (p, q) != (0, 0) and iota.apply(p, q) == g.zero()]
    prim = [v for v in kernel if gcd(abs(v[0]), abs(v[1])) == 1]
    assert sorted(prim) == sorted([vec, (-vec[0], -vec[1])])
    assert S.longitude(iota) == S.Slope.of(*vec)


def test_longitude_rejects_rank2_kernel():
    g = S.AbGroup((2,))
    iota = S.IotaMap(g, g.element(0, (1,)), g.element(0, (1,)))
    with pytest.raises(S.SlopeError):
        S.longitude(iota)


def test_longitude_rejects_imprimitive():
    g = S.AbGroup((2,))
    # mu -> torsion only, lambda -> free: kernel generated by (2, 0)
    iota = S.IotaMap(g, g.element(0, (1,)), g.element(1, (0,)))
    with pytest.raises(S.SlopeError, match="imprimitive"):
        S.longitude(iota)


# -- difference set ----------------------------------------------------------


def oracle_d_tau(tau, iota, bound):
    """Direct enumeration of the defining set, with image membership via
    a bounded lattice scan."""
    g = tau.group
    torsion = []
    acc = [()]
    for t in g.factors:
        acc = [pre + (c,) for pre in acc for c in range(t)]
    torsion = acc
    image = set()
    for p in range(-bound, bound + 1):
        for q in range(-bound, bound + 1):
            image.add(iota.apply(p, q))
    out = set()
    hi = tau.horizon + 2
    for fx in range(0, hi + 1):
        for cx in torsion:
            x = (fx, cx)
            if tau.in_support(x):
                continue
            if g.phi(x) < 0:
                continue
            for fy in range(0, hi + 1):
                for cy in torsion:
                    y = (fy, cy)
                    if not tau.in_support(y):
                        continue
                    if not g.phi(x) > g.phi(y):
                        continue
                    d = g.sub(x, y)
                    if d in image:
                        out.add(d)
    return out


def test_d_tau_empty_when_all_one():
    g = S.AbGroup(())
    iota = S.IotaMap(g, g.element(1), g.element(0))
    tau = S.TorsionData(g, frozenset(), 0)
    assert S.d_tau_positive(tau, iota) == []


def test_d_tau_genus_one_pattern():
    g = S.AbGroup(())
    iota = S.IotaMap(g, g.element(1), g.element(0))
    tau = S.TorsionData(g, frozenset({g.element(1)}), 1)
    assert S.d_tau_positive(tau, iota) == [(1, ())]


def test_d_tau_with_torsion_membership():
    g = S.AbGroup((2,))
    # image of iota: all (a, a mod 2)
    iota = S.IotaMap(g, g.element(1, (1,)), g.element(2, (0,)))
    tau = S.TorsionData(g, frozenset({g.element(1, (0,))}), 1)
    d = S.d_tau_positive(tau, iota)
    oracle = oracle_d_tau(tau, iota, 40)
    assert set(d) == oracle


def random_instance(rng):
    factors = () if rng.random() < 0.5 else (rng.randrange(2, 9),)
    g = S.AbGroup(factors)

    def rand_el(lo, hi):
        return g.element(rng.randrange(lo, hi + 1),
                         tuple(rng.randrange(t) for t in factors))

    while True:
        mu = rand_el(-2, 2)
        lam = rand_el(-2, 2)
        if mu[0] == 0 and lam[0] == 0:
            continue
        iota = S.IotaMap(g, mu, lam)
        try:
            iota.kernel_vector()
        except S.SlopeError:
            continue
        break
    horizon = rng.randrange(1, 11)
    zeros = set()
    for _ in range(rng.randrange(0, 6)):
        el = g.element(rng.randrange(0, horizon + 1),
                       tuple(rng.randrange(t) for t in factors))
        if el != g.zero():
            zeros.add(el)
    tau = S.TorsionData(g, frozenset(zeros), horizon)
    lslope = S.longitude(iota)
    while True:
        p, q = rng.randrange(-4, 5), rng.randrange(-4, 5)
        if (p, q) == (0, 0):
            continue
        target = S.Slope.of(p, q)
        if target != lslope:
            break
    if rng.random() < 0.4:
        target = S.Slope.of(1, 0)
        if target == lslope:
            return None
    return tau, iota, target


def oracle_interval_slopes(tau, iota, bound):
    """Slopes of all bounded lattice points mapping into the difference
    set (the set itself computed by direct enumeration)."""
    g = tau.group
    span = np.arange(-bound, bound + 1)
    P, Q = np.meshgrid(span, span, indexing="ij")
    P = P.ravel()
    Q = Q.ravel()
    phi = g.phi(iota.mu) * P + g.phi(iota.lam) * Q
    coords = [(iota.mu[1][i] * P + iota.lam[1][i] * Q) % t
              for i, t in enumerate(g.factors)]
    diffs = oracle_d_tau(tau, iota, bound)
    slopes = set()
    for d in diffs:
        mask = phi == d[0]
        for arr, dv in zip(coords, d[1]):
            mask &= arr == dv
        for p, q in zip(P[mask], Q[mask]):
            if p or q:
                slopes.add(S.Slope.of(int(p), int(q)))
    return diffs, slopes


def oracle_neighbours(slopes, target):
    keys = sorted(s.key() for s in slopes if s != target)
    by_key = {s.key(): s for s in slopes}
    tk = target.key()
    import bisect

    i = bisect.bisect_left(keys, tk)
    prev_s = by_key[keys[(i - 1) % len(keys)]]
    next_s = by_key[keys[i % len(keys)]]
    return prev_s, next_s


@pytest.mark.parametrize("seed", [1, 2])
def test_candidate_intervals_match_oracle(seed):
    rng = random.Random(seed)
    done = 0
    while done < 40:
        inst = random_instance(rng)
        if inst is None:
            continue
        tau, iota, target = inst
        result = S.candidate_intervals(tau, iota, target)
        diffs, slopes = oracle_interval_slopes(tau, iota, 120)
        assert set(S.d_tau_positive(tau, iota)) == diffs
        if isinstance(result, S.LongitudeComplement):
            assert not diffs
            done += 1
            continue
        assert slopes, "nonempty difference set must produce image slopes"
        prev_s, next_s = oracle_neighbours(slopes, target)
        if target in slopes:
            assert len(result) == 2
            assert result[0].start == prev_s and result[0].end == target
            assert result[1].start == target and result[1].end == next_s
        else:
            assert len(result) == 1
            assert result[0].start == prev_s and result[0].end == next_s
        for iv in result:
            assert iv.contains(target)
            for s in slopes:
                assert not iv.strictly_contains(s)
        done += 1


def test_spec_brute_force_example_500():
    # genus-one pattern, the documented 500-bound oracle run once
    g = S.AbGroup(())
    iota = S.IotaMap(g, g.element(1), g.element(0))
    tau = S.TorsionData(g, frozenset({g.element(1)}), 1)
    result = S.candidate_intervals(tau, iota, S.Slope.of(1, 0))
    slopes = set()
    for q in range(-500, 501):
        slopes.add(S.Slope.of(1, q))
    assert len(result) == 2
    assert result[0] == S.SlopeInterval(S.Slope.of(1, 1), S.Slope.of(1, 0))
    assert result[1] == S.SlopeInterval(S.Slope.of(1, 0), S.Slope.of(-1, 1))
    for iv in result:
        for s in slopes:
            assert not iv.strictly_contains(s)


def test_candidate_intervals_stress_self_consistency():
    # adversarial sizes without the box oracle: endpoints must be
    # realised by actual lattice points, the arc must contain the target
    # and exclude the longitude, and reruns must agree exactly
    rng = random.Random(2718)
    done = 0
    while done < 25:
        factors = (rng.choice([2, 4, 8]),)
        g = S.AbGroup(factors)
        mu = g.element(rng.randrange(-6, 7), (rng.randrange(factors[0]),))
        lam = g.element(rng.randrange(-6, 7), (rng.randrange(factors[0]),))
        if mu[0] == 0 and lam[0] == 0:
            continue
        iota = S.IotaMap(g, mu, lam)
        try:
            lvec = iota.kernel_vector()
        except S.SlopeError:
            continue
        horizon = 12
        zeros = set()
        for _ in range(rng.randrange(1, 12)):
            el = g.element(rng.randrange(0, horizon + 1),
                           (rng.randrange(factors[0]),))
            if el != g.zero():
                zeros.add(el)
        tau = S.TorsionData(g, frozenset(zeros), horizon)
        target = S.Slope.of(1, 0)
        if target == S.Slope.of(*lvec):
            continue
        result = S.candidate_intervals(tau, iota, target)
        again = S.candidate_intervals(tau, iota, target)
        assert result == again
        if isinstance(result, S.LongitudeComplement):
            done += 1
            continue
        diffs = S.d_tau_positive(tau, iota)
        point_slopes = set()
        for d in diffs:
            base = S.solve_image(iota, d)
            for m in range(-2000, 2001):
                p = base[0] + m * lvec[0]
                q = base[1] + m * lvec[1]
                point_slopes.add(S.Slope.of(p, q))
        lslope = S.Slope.of(*lvec)
        for iv in result:
            assert iv.start in point_slopes
            assert iv.end in point_slopes
            assert iv.contains(target)
            assert not iv.strictly_contains(lslope)
        done += 1


def test_target_equal_longitude_rejected():
    g = S.AbGroup(())
    iota = S.IotaMap(g, g.element(1), g.element(0))
    tau = S.TorsionData(g, frozenset(), 0)
    with pytest.raises(S.SlopeError):
        S.candidate_intervals(tau, iota, S.Slope.of(0, 1))


def test_torsion_validation():
    g = S.AbGroup(())
    with pytest.raises(S.SlopeError):
        S.TorsionData(g, frozenset({g.element(0)}), 3).validate()
    with pytest.raises(S.SlopeError):
        S.TorsionData(g, frozenset({g.element(5)}), 3).validate()
