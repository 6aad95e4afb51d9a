"""Slope arithmetic on the circle of Dehn-filling coefficients.

Slopes are primitive integer pairs up to global sign, identified with
Q union {infinity}.  A rational homology solid torus is described by the
map iota from the peripheral Z^2 into Z + torsion; its kernel generator
is the homological longitude.  Turaev-simple torsion data is encoded by
the finite zero set of its coefficient sequence, and the positive
difference set cut out by the torsion selects the candidate intervals of
L-space filling slopes around a target slope.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class SlopeError(ValueError):
    pass


@dataclass(frozen=True, order=False)
class Slope:
    p: int
    q: int

    @staticmethod
    def of(p, q):
        if p == 0 and q == 0:
            raise SlopeError("slope (0,0)")
        g = gcd(abs(p), abs(q))
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        return Slope(p, q)

    def key(self):
        """Total-order key on the circle, with infinity as the maximum."""
        if self.q == 0:
            return (1, Fraction(0))
        return (0, Fraction(self.p, self.q))

    def is_infinity(self):
        return self.q == 0

    def __str__(self):
        return f"{self.p}/{self.q}"


INFINITY = Slope(1, 0)


def cyclically_ordered(a, b, c):
    """True iff b lies strictly inside the positive arc from a to c.

    Positive direction: increasing rationals, wrapping through infinity.
    All three slopes must be distinct.
    """
    ka, kb, kc = a.key(), b.key(), c.key()
    if ka == kb or kb == kc or ka == kc:
        raise SlopeError("cyclic order needs distinct slopes")
    return (ka < kb < kc) or (kb < kc < ka) or (kc < ka < kb)


@dataclass(frozen=True)
class SlopeInterval:
    """Closed arc from `start` to `end` in the positive direction."""

    start: Slope
    end: Slope

    def contains(self, s):
        if s.key() == self.start.key() or s.key() == self.end.key():
            return True
        return cyclically_ordered(self.start, s, self.end)

    def strictly_contains(self, s):
        if s.key() == self.start.key() or s.key() == self.end.key():
            return False
        return cyclically_ordered(self.start, s, self.end)

    def __str__(self):
        return f"[{self.start}, {self.end}]"


@dataclass(frozen=True)
class LongitudeComplement:
    """Everything except the longitude slope."""

    longitude: Slope

    def contains(self, s):
        return s.key() != self.longitude.key()

    def __str__(self):
        return f"complement of longitude {self.longitude}"


def _open_arcs_intersect(a1, b1, a2, b2):
    """Do the open positive arcs (a1,b1) and (a2,b2) intersect?"""
    one = SlopeInterval(a1, b1)
    two = SlopeInterval(a2, b2)
    if a1.key() == a2.key() and b1.key() == b2.key():
        return True
    for x in (a2, b2):
        if one.strictly_contains(x):
            return True
    for x in (a1, b1):
        if two.strictly_contains(x):
            return True
    return False


def slope_in_interval(s, interval):
    """Closed-arc membership; complements exclude only the longitude."""
    return interval.contains(s)


# -- the abelian group Z + torsion and the peripheral map -----------------


@dataclass(frozen=True)
class AbGroup:
    """Z + Z/t1 + Z/t2 + ... with t1 | t2 | ... understood but not forced."""

    factors: tuple

    def element(self, m, coords=()):
        coords = tuple(c % t for c, t in zip(coords, self.factors))
        if len(coords) != len(self.factors):
            raise SlopeError("torsion coordinate count mismatch")
        return (int(m), coords)

    def add(self, a, b):
        return (a[0] + b[0],
                tuple((x + y) % t for x, y, t in
                      zip(a[1], b[1], self.factors)))

    def sub(self, a, b):
        return (a[0] - b[0],
                tuple((x - y) % t for x, y, t in
                      zip(a[1], b[1], self.factors)))

    def scale(self, n, a):
        return (n * a[0],
                tuple((n * x) % t for x, t in zip(a[1], self.factors)))

    def zero(self):
        return (0, tuple(0 for _ in self.factors))

    def phi(self, a):
        return a[0]


@dataclass(frozen=True)
class IotaMap:
    """Peripheral map Z^2 -> Z + torsion, columns iota(mu), iota(lambda)."""

    group: AbGroup
    mu: tuple
    lam: tuple

    def apply(self, p, q):
        g = self.group
        return g.add(g.scale(p, self.mu), g.scale(q, self.lam))

    def kernel_vector(self):
        """Primitive generator of the kernel; the QHT condition demands a
        rank-1 kernel generated by a primitive peripheral class."""
        a, b = self.group.phi(self.mu), self.group.phi(self.lam)
        if a == 0 and b == 0:
            raise SlopeError("peripheral image is torsion: kernel rank 2")
        g = gcd(abs(a), abs(b))
        base = (-b // g, a // g)
        # smallest positive multiple matching all torsion congruences
        mult = 1
        for idx, t in enumerate(self.group.factors):
            c = (base[0] * self.mu[1][idx] + base[1] * self.lam[1][idx]) % t
            step = t // gcd(t, c) if c else 1
            mult = mult * step // gcd(mult, step)
        vec = (base[0] * mult, base[1] * mult)
        if self.apply(*vec) != self.group.zero():
            raise SlopeError("kernel solve failed")
        if mult != 1:
            raise SlopeError(
                "kernel generator is imprimitive; not a valid peripheral "
                "map of a rational homology solid torus")
        return vec


def longitude(iota):
    """The homological longitude as a Slope."""
    return Slope.of(*iota.kernel_vector())


@dataclass(frozen=True)
class TorsionData:
    """Turaev-simple torsion: the set of vanishing coefficients.

    `zero_set` holds the group elements with phi >= 0 whose coefficient
    is 0; every other coefficient with phi >= 0 equals 1, and `horizon`
    bounds the phi values of the zeros.
    """

    group: AbGroup
    zero_set: frozenset
    horizon: int

    def validate(self):
        for h in self.zero_set:
            if self.group.phi(h) < 0:
                raise SlopeError("zero-set element with negative grading")
            if self.group.phi(h) > self.horizon:
                raise SlopeError("zero-set element beyond the horizon")
            if h == self.group.zero():
                raise SlopeError("the constant coefficient must not vanish")

    def in_support(self, h):
        return self.group.phi(h) >= 0 and h not in self.zero_set


def _torsion_elements(group):
    out = [()]
    for t in group.factors:
        out = [prefix + (c,) for prefix in out for c in range(t)]
    return out


def d_tau_positive(tau, iota):
    """The finite positive difference set, intersected with the
    peripheral image; exact."""
    tau.validate()
    g = tau.group
    torsion = _torsion_elements(g)
    diffs = set()
    for x in tau.zero_set:
        fx = g.phi(x)
        if fx < 1:
            continue
        for level in range(0, fx):
            for coords in torsion:
                y = (level, coords)
                if y in tau.zero_set:
                    continue
                diffs.add(g.sub(x, y))
    return sorted(d for d in diffs if solve_image(iota, d) is not None)


def _solve_congruence(c, r, t):
    """All n mod t with c*n == r (mod t); returns (n0, step) or None."""
    c %= t
    r %= t
    g = gcd(c, t)
    if r % g:
        return None
    t2 = t // g
    c2 = (c // g) % t2
    r2 = (r // g) % t2
    inv = pow(c2, -1, t2) if t2 > 1 else 0
    return ((r2 * inv) % t2 if t2 > 1 else 0, t2)


def solve_image(iota, d):
    """A peripheral (p, q) with iota(p, q) = d, or None."""
    g = iota.group
    a, b = g.phi(iota.mu), g.phi(iota.lam)
    m = g.phi(d)
    if a == 0 and b == 0:
        raise SlopeError("peripheral image is torsion")
    gg = gcd(abs(a), abs(b))
    if m % gg:
        return None
    # particular solution of p*a + q*b = m via the extended gcd
    x, y = _ext_gcd(a, b)
    p0, q0 = x * (m // gg), y * (m // gg)
    h = (-b // gg, a // gg)  # homogeneous direction
    # fit torsion congruences with p = p0 + n*h0, q = q0 + n*h1
    n0, step = 0, 1
    for idx, t in enumerate(g.factors):
        cmu, clam = iota.mu[1][idx], iota.lam[1][idx]
        base = (p0 * cmu + q0 * clam - d[1][idx]) % t
        coeff = (h[0] * cmu + h[1] * clam) % t
        # need base + coeff * n == 0 (mod t) along n = n0 + step * s
        c2 = (coeff * step) % t
        r2 = (-(base + coeff * n0)) % t
        sol = _solve_congruence(c2, r2, t)
        if sol is None:
            return None
        s0, substep = sol
        n0 = n0 + step * s0
        step = step * substep
    p, q = p0 + n0 * h[0], q0 + n0 * h[1]
    assert iota.apply(p, q) == d
    return (p, q)


def _ext_gcd(a, b):
    """x, y with a*x + b*y = gcd(|a|, |b|) (sign-aware)."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_x, x = x, old_x - qt * x
        old_y, y = y, old_y - qt * y
    if old_r < 0:
        old_x, old_y = -old_x, -old_y
    return old_x, old_y


def _coset_slopes(base, direction, radius):
    """Slopes of base + m * direction for |m| <= radius, plus the tail
    markers f(R-1), f(R), f(-R), f(-R+1)."""
    pts = {}
    for m in range(-radius, radius + 1):
        p = base[0] + m * direction[0]
        q = base[1] + m * direction[1]
        if p == 0 and q == 0:
            continue
        pts[m] = Slope.of(p, q)
    return pts


def candidate_intervals(tau, iota, target):
    """Candidate slope intervals around `target`.

    Empty difference set: the complement of the longitude.  Otherwise the
    arc(s) between consecutive image slopes around the target: one
    interval when the target is not an image slope, two sharing it when
    it is.  Enumeration doubles its radius until the neighbours are
    stable and every unexplored coset tail provably stays outside.
    """
    lvec = iota.kernel_vector()
    lslope = Slope.of(*lvec)
    if target.key() == lslope.key():
        raise SlopeError("target slope equals the longitude")
    diffs = d_tau_positive(tau, iota)
    if not diffs:
        return LongitudeComplement(lslope)
    cosets = []
    for d in diffs:
        base = solve_image(iota, d)
        assert base is not None
        cosets.append(base)

    radius = 32
    previous = None
    while radius <= (1 << 22):
        slope_keys = {}
        tails = []
        for base in cosets:
            pts = _coset_slopes(base, lvec, radius)
            for s in pts.values():
                slope_keys[s.key()] = s
            f_r = pts[radius]
            f_rm = pts[radius - 1]
            f_l = pts[-radius]
            f_lm = pts[-radius + 1]
            tails.append((f_rm, f_r))
            tails.append((f_lm, f_l))
        ordered = [slope_keys[k] for k in sorted(slope_keys)]
        if len(ordered) < 2:
            radius *= 2
            continue
        intervals = _neighbour_intervals(ordered, target)
        stable = previous is not None and previous == [
            (i.start.key(), i.end.key()) for i in intervals]
        previous = [(i.start.key(), i.end.key()) for i in intervals]
        if stable and _tails_clear(intervals, tails, lslope):
            for iv in intervals:
                if iv.strictly_contains(lslope):
                    raise SlopeError(
                        "candidate interval contains the longitude")
            return intervals
        radius *= 2
    raise SlopeError("interval enumeration did not stabilise")


def _neighbour_intervals(ordered, target):
    """Consecutive arcs around target among the circularly ordered
    slopes (sorted by key; the circle closes from the last to the
    first)."""
    keys = [s.key() for s in ordered]
    tk = target.key()
    n = len(ordered)
    if tk in keys:
        i = keys.index(tk)
        prev_s = ordered[(i - 1) % n]
        next_s = ordered[(i + 1) % n]
        return [SlopeInterval(prev_s, target), SlopeInterval(target, next_s)]
    import bisect

    i = bisect.bisect_left(keys, tk)
    prev_s = ordered[(i - 1) % n]
    next_s = ordered[i % n]
    return [SlopeInterval(prev_s, next_s)]


def _tails_clear(intervals, tails, lslope):
    """No unexplored coset point can fall strictly inside an interval.

    Points beyond the enumerated radius lie on the open arc from the last
    enumerated slope towards the longitude, on the side away from the
    previous slope; the slope map along one coset is a degree-one Moebius
    motion, hence circularly monotone."""
    for (before, last) in tails:
        if last.key() == lslope.key() or before.key() == lslope.key():
            return False
        if cyclically_ordered(before, last, lslope):
            arc = (last, lslope)
        else:
            arc = (lslope, last)
        for iv in intervals:
            if iv.start.key() == iv.end.key():
                continue
            if _open_arcs_intersect(arc[0], arc[1], iv.start, iv.end):
                return False
    return True
