"""Hall-Littlewood polynomials, Rogers-Szego polynomials, boundary weights,
Schur specializations, and coefficient-exact identity checks.

Everything here is generic over the coefficient ring: pass Fraction for exact
arithmetic, float for numerics, or qseries.Poly for symbolic checks.  The
ring's one is obtained as q**0, so q must support ** with int exponents.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .partitions import (
    as_partition,
    conjugate,
    horizontal_strips_over,
    horizontal_strips_under,
    is_horizontal_strip,
    multiplicities,
    odd_parts,
    partitions_in_box,
    partitions_of,
    partitions_up_to,
    size,
    vertical_strips_over,
)
from .qseries import Poly, PolyRing


# ---------------------------------------------------------------------------
# q-binomials and Rogers-Szego polynomials
# ---------------------------------------------------------------------------

def q_binomial(b: int, a: int, q):
    """Gaussian binomial coefficient [b choose a]_q.

    Out-of-range a returns the ring zero (standard convention).
    """
    one = q ** 0
    zero = one * 0
    if a < 0 or a > b:
        return zero
    # Pascal recurrence binom(n,k) = binom(n-1,k-1) + q^k binom(n-1,k).
    row = [one]
    for n in range(1, b + 1):
        new = [one]
        for k in range(1, n):
            new.append(row[k - 1] + (q ** k) * row[k])
        new.append(one)
        row = new
    return row[a]


def rogers_szego(n: int, x, q):
    """h_n(x;q) by the three-term recurrence
    h_{n+1} = (1+x) h_n + x (q^n - 1) h_{n-1}, h_0 = 1.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    one = q ** 0
    h_prev = one * 0  # h_{-1}
    h = one
    for m in range(n):
        h, h_prev = (one + x) * h + x * (q ** m - one) * h_prev, h
    return h


def rogers_szego_direct(n: int, x, q):
    """h_n(x;q) = sum_k [n choose k]_q x^k (independent route for testing)."""
    one = q ** 0
    total = one * 0
    for k in range(n + 1):
        total = total + q_binomial(n, k, q) * x ** k
    return total


def q_pochhammer(q, n: int):
    """(q;q)_n in the ring of q."""
    one = q ** 0
    out = one
    for j in range(1, n + 1):
        out = out * (one - q ** j)
    return out


# ---------------------------------------------------------------------------
# boundary weight h_lambda(q,t,nu)
# ---------------------------------------------------------------------------

def _odd_block(m: int, q, t, nu):
    """(-t nu)^m h_m(-1/(nu^2 t); q) expanded as a polynomial in t.

    The expansion sum_k [m,k]_q (-1)^(m+k) nu^(m-2k) t^(m-k) avoids the
    division by t, so t = 0 is fine; nu must be invertible.
    """
    one = q ** 0
    total = one * 0
    for k in range(m + 1):
        sign = one if (m + k) % 2 == 0 else -one
        term = q_binomial(m, k, q) * sign * t ** (m - k)
        e = m - 2 * k
        term = term * nu ** e if e >= 0 else term * (one / nu ** (-e))
        total = total + term
    return total


def h_lambda_weight(lam, q, t, nu):
    """Boundary weight: product of h_m(-t;q) over even part sizes and
    (-t nu)^m h_m(-1/(nu^2 t);q) over odd part sizes, m the multiplicity.
    """
    lam = as_partition(lam)
    if nu == 0:
        raise ValueError("nu must be nonzero")
    one = q ** 0
    out = one
    for i, m in multiplicities(lam).items():
        if i % 2 == 0:
            out = out * rogers_szego(m, -t, q)
        else:
            out = out * _odd_block(m, q, t, nu)
    return out


# ---------------------------------------------------------------------------
# Hall-Littlewood polynomials
# ---------------------------------------------------------------------------

def hl_psi(lam, mu, q):
    """Single-variable branching coefficient for P_{lam/mu}(a;q).

    Nonzero only on horizontal strips; then the product of (1 - q^{m_i(mu)})
    over part sizes i whose multiplicity grew by one going from lam to mu.
    """
    one = q ** 0
    if not is_horizontal_strip(lam, mu):
        return one * 0
    mlam = multiplicities(lam)
    out = one
    for i, m in multiplicities(mu).items():
        if m == mlam.get(i, 0) + 1:
            out = out * (one - q ** m)
    return out


def skew_hl_single(lam, mu, a, q):
    """P_{lam/mu}(a;q) for a single variable: a^{|lam|-|mu|} psi_{lam/mu}(q)."""
    lam, mu = as_partition(lam), as_partition(mu)
    psi = hl_psi(lam, mu, q)
    if not psi:
        return psi
    return a ** (size(lam) - size(mu)) * psi


def hall_littlewood(lam, alphabet, q):
    """P_lam(a_1..a_n;q) by iterated single-variable branching.

    Returns the ring zero when l(lam) exceeds the alphabet size.
    """
    lam = as_partition(lam)
    alphabet = tuple(alphabet)
    one = q ** 0
    cache: dict[tuple, object] = {}

    def rec(nu, n):
        if n == 0:
            return one if not nu else one * 0
        if len(nu) > n:
            return one * 0
        key = (nu, n)
        if key in cache:
            return cache[key]
        total = one * 0
        a = alphabet[n - 1]
        for mu in horizontal_strips_under(nu):
            c = hl_psi(nu, mu, q)
            if not c:
                continue
            sub = rec(mu, n - 1)
            if not sub:
                continue
            total = total + c * a ** (size(nu) - size(mu)) * sub
        cache[key] = total
        return total

    return rec(lam, len(alphabet))


def hall_littlewood_symmetrization(lam, alphabet, q):
    """Symmetrization-formula evaluation of P_lam (oracle; distinct values only).

    P_lam = (1/v_lam) sum_{w in S_n} prod x_{w(i)}^{lam_i}
            prod_{i<j} (x_{w(i)} - q x_{w(j)}) / (x_{w(i)} - x_{w(j)}).
    """
    lam = as_partition(lam)
    a = tuple(alphabet)
    n = len(a)
    if len(lam) > n:
        return q ** 0 * 0
    full = list(lam) + [0] * (n - len(lam))
    one = q ** 0

    def qfact(m):
        out = one
        for j in range(1, m + 1):
            out = out * (one - q ** j) / (one - q)
        return out

    v = qfact(n - len(lam))
    for m in multiplicities(lam).values():
        v = v * qfact(m)

    total = one * 0
    for w in itertools.permutations(range(n)):
        num = one
        for i, wi in enumerate(w):
            num = num * a[wi] ** full[i]
        for i in range(n):
            for j in range(i + 1, n):
                num = num * (a[w[i]] - q * a[w[j]]) / (a[w[i]] - a[w[j]])
        total = total + num
    return total / v


def pi_normalization(alphabet, q, t, nu):
    """Product normalizing the boundary-weighted Hall-Littlewood sum:
    prod_i (1 - a_i nu t)(1 + a_i/nu)/(1 - a_i^2) *
    prod_{i<j} (1 - q a_i a_j)/(1 - a_i a_j).
    """
    a = tuple(alphabet)
    one = q ** 0
    out = one
    for i, ai in enumerate(a):
        denom = one - ai * ai
        if not denom:
            raise ValueError(f"pole: 1 - a_{i+1}^2 = 0")
        out = out * (one - ai * nu * t) * (one + ai / nu) / denom
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            denom = one - a[i] * a[j]
            if not denom:
                raise ValueError(f"pole: 1 - a_{i+1} a_{j+1} = 0")
            out = out * (one - q * a[i] * a[j]) / denom
    return out


def littlewood_sum_truncated(alphabet, q, t, nu, max_part):
    """sum over lam with lam_1 <= max_part, l(lam) <= len(alphabet) of
    h_lambda(q,t,nu) P_lambda(a;q).

    In the positive regime this increases to pi_normalization; the exact
    difference serves as a truncation certificate.
    """
    a = tuple(alphabet)
    one = q ** 0
    total = one * 0
    for lam in partitions_in_box(max_part, len(a)):
        w = h_lambda_weight(lam, q, t, nu)
        if not w:
            continue
        p = hall_littlewood(lam, a, q)
        if not p:
            continue
        total = total + w * p
    return total


# ---------------------------------------------------------------------------
# specializations and Schur functions
# ---------------------------------------------------------------------------

@dataclass
class Specialization:
    """Power-sum data of a specialization, p[k] for 1 <= k <= degree.

    p[0] is unused.  For a finite alphabet, p_k = sum a_i^k exactly.
    """

    p: list
    degree: int
    tail_bound: float = 0.0

    @classmethod
    def from_alphabet(cls, alphabet, degree: int):
        a = tuple(alphabet)
        one = (a[0] ** 0) if a else Fraction(1)
        p = [one * 0] * (degree + 1)
        for k in range(1, degree + 1):
            s = one * 0
            for ai in a:
                s = s + ai ** k
            p[k] = s
        return cls(p=p, degree=degree)

    def hat(self, q) -> "Specialization":
        """p_n -> (-1)^(n-1) (1 - q^n) p_n."""
        one = q ** 0
        out = [self.p[0]] + [
            (one if (n - 1) % 2 == 0 else -one) * (one - q ** n) * self.p[n]
            for n in range(1, self.degree + 1)
        ]
        return Specialization(p=out, degree=self.degree, tail_bound=self.tail_bound)

    def complete_homogeneous(self, deg: int | None = None) -> list:
        """h_0..h_deg via Newton's identity k h_k = sum_{i=1}^{k} p_i h_{k-i}."""
        deg = self.degree if deg is None else deg
        if deg > self.degree:
            raise ValueError("not enough power sums")
        one = self.p[1] ** 0 if self.degree >= 1 else Fraction(1)
        h = [one]
        for k in range(1, deg + 1):
            s = one * 0
            for i in range(1, k + 1):
                s = s + self.p[i] * h[k - i]
            h.append(s / k)
        return h


def _det_expand(mat):
    """Determinant by minor expansion with memo on column subsets (exact)."""
    n = len(mat)
    if n == 0:
        return Fraction(1) if not mat else mat
    one = mat[0][0] ** 0
    cache = {}

    def rec(row, cols):
        if row == n:
            return one
        key = cols
        if key in cache:
            return cache[key]
        total = one * 0
        sign = one
        for idx, c in enumerate(cols):
            entry = mat[row][c]
            if entry:
                total = total + sign * entry * rec(row + 1, cols[:idx] + cols[idx + 1:])
            sign = -sign
        cache[cols] = total
        return total

    return rec(0, tuple(range(n)))


def skew_schur(lam, rho, spec: Specialization):
    """s_{lam/rho} under a specialization, by the Jacobi-Trudi determinant
    over complete homogeneous values.  Zero unless rho subseteq lam.
    """
    lam, rho = as_partition(lam), as_partition(rho)
    n = len(lam)
    if len(rho) > n or any(rho[i] > lam[i] for i in range(len(rho))):
        h1 = spec.complete_homogeneous(0)
        return h1[0] * 0
    if n == 0:
        return spec.complete_homogeneous(0)[0]
    dmax = max(lam[i] - (rho[j] if j < len(rho) else 0) - i + j
               for i in range(n) for j in range(n))
    h = spec.complete_homogeneous(max(dmax, 0))
    zero = h[0] * 0
    rhof = list(rho) + [0] * (n - len(rho))
    mat = [[h[lam[i] - rhof[j] - i + j] if 0 <= lam[i] - rhof[j] - i + j <= dmax else zero
            for j in range(n)] for i in range(n)]
    return _det_expand(mat)


# ---------------------------------------------------------------------------
# coefficient-exact identity checks
# ---------------------------------------------------------------------------

@dataclass
class IdentityReport:
    ok: bool
    k: int
    nvars: int
    xcap: int
    ucap: int
    n_monomials: int
    mismatches: list = field(default_factory=list)

    def __str__(self):
        status = "PASS" if self.ok else "FAIL"
        return (f"[{status}] first-row {self.k}, {self.nvars} vars, "
                f"x-degree <= {self.xcap}, q^(1/2)-order <= {self.ucap}: "
                f"{self.n_monomials} monomials"
                + ("" if self.ok else f", {len(self.mismatches)} mismatches"))


def _hat_alphabet_strip_chain(ring: PolyRing, start_weights, xcap: int, max_part: int):
    """Propagate partition weights through the strip chain realizing the
    twisted alphabet: for each variable x_i, a vertical strip with weight
    x_i^{|strip|} followed by a horizontal strip with weight (-q x_i)^{|strip|}.

    start_weights: dict partition -> Poly.  Returns dict partition -> Poly.
    Growth is capped at xcap boxes total and parts stay <= max_part.
    """
    weights = dict(start_weights)
    budgets = {mu: xcap for mu in weights}

    for xi in range(ring.nx):
        xvar = ring.var(ring.xvars[xi])
        for vertical in (True, False):
            new: dict[tuple, Poly] = {}
            new_budget: dict[tuple, int] = {}
            for mu, wt in weights.items():
                b = budgets[mu]
                gen = (
                    vertical_strips_over(mu, max_size=size(mu) + b, max_part=max_part)
                    if vertical
                    else horizontal_strips_over(mu, max_part=max_part, max_size=size(mu) + b)
                )
                for nu in gen:
                    d = size(nu) - size(mu)
                    fac = xvar ** d
                    if not vertical and d:
                        fac = fac * ring.monomial({"u": 2 * d}, (-1) ** d)
                    w2 = wt * fac
                    if not w2:
                        continue
                    if nu in new:
                        new[nu] = new[nu] + w2
                        new_budget[nu] = max(new_budget[nu], b - d)
                    else:
                        new[nu] = w2
                        new_budget[nu] = b - d
            weights, budgets = new, new_budget
    return weights


def verify_schur_hl_identity(k: int, nvars: int, xcap: int, ucap: int) -> IdentityReport:
    """Coefficient-exact check, modulo q^((ucap+1)/2) and x-degree xcap, that

      sum_l q^l h_l(z^2/sqrt(q);q)/(q;q)_l *
          sum_{lam: lam_1 = k-l} h'_lam(q,z,w) P_{lam'}(x;q)
      =
      sum_{lam, rho: rho subseteq lam, lam_1 = k}
          z^{o(lam')+o(rho')} w^{o(lam')-o(rho')} q^{|rho|/2} s_{lam/rho}(x-hat),

    where h'_lam pairs h_{d_i}(sqrt(q) z^2) on even rows with
    (zw)^{d_i} h_{d_i}(sqrt(q) w^{-2}) on odd rows, d_i = lam_i - lam_{i+1},
    and x-hat is the twist with generating function prod (1+x_i y)/(1+q x_i y).
    Both sides are expanded in Q[x][z, w^{+-1}][[q^(1/2)]] and compared
    monomial by monomial.
    """
    ring = PolyRing(tuple(f"x{i+1}" for i in range(nvars)), xcap=xcap, ucap=ucap)
    q = ring.q()
    xelems = tuple(ring.var(n) for n in ring.xvars)
    z, w, u = ring.var("z"), ring.var("w"), ring.var("u")
    z2_over_sqrtq = ring.monomial({"z": 2, "u": -1})
    sqrtq_z2 = ring.monomial({"z": 2, "u": 1})
    sqrtq_winv2 = ring.monomial({"w": -2, "u": 1})

    # left side
    lhs = ring.zero()
    for l in range(k + 1):
        top = k - l
        if top > nvars:
            continue  # P_{lam'} needs l(lam') = lam_1 = top <= nvars
        pref = ring.monomial({"u": 2 * l}) * rogers_szego(l, z2_over_sqrtq, q)
        pref = pref * q_pochhammer(q, l).inv_unit()
        inner = ring.zero()
        for wgt in range(top, xcap + 1):
            for lam in partitions_of(wgt, max_part=top):
                if top > 0 and (not lam or lam[0] != top):
                    continue
                p_val = hall_littlewood(conjugate(lam), xelems, q)
                if not p_val:
                    continue
                hp = ring.one()
                for i in range(1, len(lam) + 1):
                    d = lam[i - 1] - (lam[i] if i < len(lam) else 0)
                    if i % 2 == 1:
                        hp = hp * (z * w) ** d * rogers_szego(d, sqrtq_winv2, q)
                    else:
                        hp = hp * rogers_szego(d, sqrtq_z2, q)
                inner = inner + hp * p_val
        lhs = lhs + pref * inner

    # right side
    rhs = ring.zero()
    for rho in partitions_in_box(k, ucap):
        if size(rho) > ucap:
            continue
        orho = odd_parts(conjugate(rho))
        start = ring.monomial({"u": size(rho), "z": orho, "w": -orho})
        finals = _hat_alphabet_strip_chain(ring, {rho: start}, xcap, max_part=k)
        for lam, wt in finals.items():
            if (lam[0] if lam else 0) != k:
                continue
            olam = odd_parts(conjugate(lam))
            rhs = rhs + wt * ring.monomial({"z": olam, "w": olam})

    diff = lhs - rhs
    mismatches = sorted(diff.c.items())[:20]
    return IdentityReport(
        ok=not diff,
        k=k,
        nvars=nvars,
        xcap=xcap,
        ucap=ucap,
        n_monomials=max(len(lhs.c), len(rhs.c)),
        mismatches=[(e, str(v)) for e, v in mismatches],
    )


def verify_rogers_szego_expansion(n: int, ucap: int) -> bool:
    """Check sum_{nu: nu_1 = n} q^{|nu|/2} z^{2 o(nu')} =
    q^n h_n(z^2/sqrt(q);q)/(q;q)_n, modulo q^((ucap+1)/2)."""
    ring = PolyRing((), xcap=None, ucap=ucap)
    q = ring.q()
    lhs = ring.zero()
    for m in range(n, ucap + 1):
        for nu in partitions_up_to(m, max_part=n):
            if size(nu) == m and nu and nu[0] == n:
                lhs = lhs + ring.monomial({"u": m, "z": 2 * odd_parts(conjugate(nu))})
    if n == 0:
        lhs = ring.one()
    rhs = ring.monomial({"u": 2 * n}) * rogers_szego(n, ring.monomial({"z": 2, "u": -1}), q)
    rhs = rhs * q_pochhammer(q, n).inv_unit()
    return not (lhs - rhs)
