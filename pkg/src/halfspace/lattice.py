"""Half-space stochastic six-vertex model and the deformed-boson row model.

The six-vertex model lives on the triangle {(i,j): 1 <= i <= j} with arrows
entering from the left on every row; vertices on the diagonal see the mirror
of their own left edge as bottom input and are sampled with the boundary
probabilities.  Path strings and height functions are read off the top edge
row of an n-box.

Vertex in/out states are (left, bottom) -> (top, right) bits.  Single-arrow
inputs resolve as:

    (1,0): continue right with prob p, turn up with prob 1-p
    (0,1): continue up with prob p*qfac, turn right with prob 1-p*qfac

with p the spectral weight and qfac = q off the diagonal, t on it.  This
transcription is pinned by the exact boundary table and certified against
the Hall-Littlewood path-string law in the tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .partitions import as_partition, multiplicities, size
from .symfunc import h_lambda_weight, hl_psi, q_binomial, rogers_szego, skew_hl_single


@dataclass(frozen=True)
class SixVertexParams:
    q: object
    t: object
    nu: object
    a: tuple

    def validate(self):
        if not all(0 < ai < 1 for ai in self.a):
            raise ValueError("rapidities must lie in (0,1)")
        if not (0 <= self.q < 1 and 0 <= self.t < 1):
            raise ValueError("need q, t in [0,1)")
        if not (self.nu > 0 and self.nu * self.t < 1):
            raise ValueError("need nu > 0 and nu*t < 1")
        return self


def spectral_prob(sp, q):
    """Bulk passing probability (1 - sp)/(1 - q sp) at spectral parameter sp."""
    return (1 - sp) / (1 - q * sp)


def boundary_prob(a, q, t, nu):
    """Diagonal passing probability (1 - a^2)/((1 - nu t a)(1 + a/nu))."""
    return (1 - a * a) / ((1 - nu * t * a) * (1 + a / nu))


def vertex_prob(i: int, j: int, params: SixVertexParams):
    """(p, qfac) for the vertex at column i, row j (1-based)."""
    ai, aj = params.a[i - 1], params.a[j - 1]
    if i == j:
        return boundary_prob(ai, params.q, params.t, params.nu), params.t
    return spectral_prob(ai * aj, params.q), params.q


def bulk_weight(i, j, in_state, out_state, params: SixVertexParams):
    """Probability of out_state = (top, right) given in_state = (left, bottom)."""
    l, b = in_state
    tp, r = out_state
    p, qfac = vertex_prob(i, j, params)
    one = (p + 1) ** 0
    if l + b != tp + r:
        return one * 0
    if l + b in (0, 2):
        return one
    if (l, b) == (1, 0):
        return p if (tp, r) == (0, 1) else one - p
    return qfac * p if (tp, r) == (1, 0) else one - qfac * p


@dataclass
class SixVertexConfig:
    n: int
    top: np.ndarray          # top-edge occupancy, top[i-1][j-1] for vertex (i,j), i<=j
    right: np.ndarray        # right-edge occupancy on the triangle
    path_string: tuple
    heights: tuple           # h(i, n) for i = 1..n

    def height(self, i: int, j: int) -> int:
        """Arrows leaving upward at or left of (i,j), for i <= j <= n."""
        return int(sum(self.top[x - 1][j - 1] for x in range(1, i + 1)))

    def to_json(self, params: SixVertexParams | None = None) -> str:
        rows = []
        for j in range(1, self.n + 1):
            bits = 0
            for i in range(1, j + 1):
                bits |= int(self.top[i - 1][j - 1]) << (i - 1)
            rows.append(bits)
        doc = {"n": self.n, "top_row_bitmasks": rows,
               "heights": list(self.heights), "path_string": list(self.path_string)}
        if params is not None:
            doc["params"] = {"q": float(params.q), "t": float(params.t),
                             "nu": float(params.nu), "a": [float(x) for x in params.a]}
        return json.dumps(doc)


def _sweep(n: int, params: SixVertexParams, choose):
    """Run the triangle sweep; choose(i, j, in_state, dist) picks an out-state.

    dist is a list of ((top,right), prob) pairs.  Returns the top/right edge
    arrays.
    """
    top = [[0] * n for _ in range(n)]
    right = [[0] * n for _ in range(n)]
    for s in range(2, 2 * n + 1):          # anti-diagonals i + j = s
        for i in range(1, n + 1):
            j = s - i
            if j < i or j > n:
                continue
            left = 1 if i == 1 else right[i - 2][j - 1]
            if i == j:
                bottom = 1 - left
            else:
                bottom = top[i - 1][j - 2]
            l, b = left, bottom
            if l + b == 0:
                out = (0, 0)
            elif l + b == 2:
                out = (1, 1)
            else:
                p, qfac = vertex_prob(i, j, params)
                if (l, b) == (1, 0):
                    dist = [((0, 1), p), ((1, 0), 1 - p)]
                else:
                    dist = [((1, 0), qfac * p), ((0, 1), 1 - qfac * p)]
                out = choose(i, j, (l, b), dist)
            top[i - 1][j - 1], right[i - 1][j - 1] = out
    return top, right


def sample_sixvertex(n: int, params: SixVertexParams, seed=None, rng=None) -> SixVertexConfig:
    """Sample one configuration (Markovian sweep along anti-diagonals)."""
    params.validate()
    if rng is None:
        rng = np.random.default_rng(seed)

    def choose(i, j, in_state, dist):
        u = rng.random()
        acc = 0.0
        for out, p in dist:
            acc += p
            if u < acc:
                return out
        return dist[-1][0]

    top, right = _sweep(n, params, choose)
    s = tuple(int(top[i - 1][n - 1]) for i in range(1, n + 1))
    heights = tuple(int(sum(s[:i])) for i in range(1, n + 1))
    return SixVertexConfig(n, np.array(top), np.array(right), s, heights)


def sample_heights(n: int, params: SixVertexParams, nsamples: int, seed: int = 0):
    """Batch of h(n,n) samples with per-sample split RNG streams (worker-count
    independent)."""
    out = np.empty(nsamples, dtype=np.int64)
    for k in range(nsamples):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(k,)))
        out[k] = sample_sixvertex(n, params, rng=rng).heights[-1]
    return out


def enumerate_sixvertex(n: int, params: SixVertexParams, max_n: int = 6):
    """Exact path-string distribution by depth-first expansion of the sweep.

    Exact (Fraction) when the parameters are Fractions.  n is capped since
    the state space is 2^(n(n+1)/2)-ish.
    """
    if n > max_n:
        raise ValueError(f"enumeration capped at n = {max_n}")
    params.validate()
    one = (params.q + 1) ** 0
    results: dict[tuple, object] = {}

    # depth-first over the branching choices inside the sweep
    order = [(i, s - i) for s in range(2, 2 * n + 1) for i in range(1, n + 1)
             if i <= s - i <= n]

    def rec(idx, top, right, prob):
        if idx == len(order):
            s = tuple(top[i - 1][n - 1] for i in range(1, n + 1))
            results[s] = results.get(s, one * 0) + prob
            return
        i, j = order[idx]
        left = 1 if i == 1 else right[i - 2][j - 1]
        bottom = (1 - left) if i == j else top[i - 1][j - 2]
        l, b = left, bottom
        if l + b == 0:
            outs = [((0, 0), one)]
        elif l + b == 2:
            outs = [((1, 1), one)]
        else:
            p, qfac = vertex_prob(i, j, params)
            if (l, b) == (1, 0):
                outs = [((0, 1), p), ((1, 0), one - p)]
            else:
                outs = [((1, 0), qfac * p), ((0, 1), one - qfac * p)]
        for out, w in outs:
            if not w:
                continue
            top[i - 1][j - 1], right[i - 1][j - 1] = out
            rec(idx + 1, top, right, prob * w)
        top[i - 1][j - 1] = right[i - 1][j - 1] = 0

    rec(0, [[0] * n for _ in range(n)], [[0] * n for _ in range(n)], one)
    return results


def enumerate_height_joint(n: int, params: SixVertexParams, observable, max_n: int = 6):
    """Expectation of observable(config_top) under exact enumeration.

    observable receives the full n x n top-edge array (list of columns) and
    must return a ring element; useful for off-diagonal height moments.
    """
    if n > max_n:
        raise ValueError(f"enumeration capped at n = {max_n}")
    params.validate()
    one = (params.q + 1) ** 0
    total = one * 0
    order = [(i, s - i) for s in range(2, 2 * n + 1) for i in range(1, n + 1)
             if i <= s - i <= n]

    def rec(idx, top, right, prob):
        nonlocal total
        if idx == len(order):
            total = total + prob * observable(top)
            return
        i, j = order[idx]
        left = 1 if i == 1 else right[i - 2][j - 1]
        bottom = (1 - left) if i == j else top[i - 1][j - 2]
        l, b = left, bottom
        if l + b == 0:
            outs = [((0, 0), one)]
        elif l + b == 2:
            outs = [((1, 1), one)]
        else:
            p, qfac = vertex_prob(i, j, params)
            if (l, b) == (1, 0):
                outs = [((0, 1), p), ((1, 0), one - p)]
            else:
                outs = [((1, 0), qfac * p), ((0, 1), one - qfac * p)]
        for out, w in outs:
            if not w:
                continue
            top[i - 1][j - 1], right[i - 1][j - 1] = out
            rec(idx + 1, top, right, prob * w)
        top[i - 1][j - 1] = right[i - 1][j - 1] = 0

    rec(0, [[0] * n for _ in range(n)], [[0] * n for _ in range(n)], one)
    return total


# ---------------------------------------------------------------------------
# deformed bosons
# ---------------------------------------------------------------------------

def boson_vertex_weight(m: int, e_in: int, n_out: int, e_out: int, a, q, palette: int):
    """Single boson vertex: m arrows below, e_in on the left, n_out above,
    e_out on the right.  Palette 1 weights (1, a, 1-q^{m+1}, a); palette 2
    weights (b, 1, b(1-q^{m+1}), 1) with b the rapidity.
    """
    one = (q + 1) ** 0
    if m + e_in != n_out + e_out or m < 0 or n_out < 0:
        return one * 0
    if e_in == 0 and e_out == 0:
        w = one
        kind = 0
    elif e_in == 0 and e_out == 1:
        w, kind = a * one, 1
    elif e_in == 1 and e_out == 0:
        w, kind = one - q ** (m + 1), 2
    else:
        w, kind = a * one, 3
    if palette == 1:
        return w
    if palette == 2:
        if kind == 0:
            return a * one
        if kind == 1:
            return one
        if kind == 2:
            return a * (one - q ** (m + 1))
        return one
    raise ValueError("palette must be 1 or 2")


def boson_row_weight(bottom, top, left_edge: int, right_edge: int, a, q, palette: int):
    """Weight of one boson row.  Columns are part sizes in decreasing order
    (largest leftmost); bottom/top give occupancies per part size, with index
    0 <-> part size len(bottom).  Horizontal edges are forced by conservation.
    """
    if len(bottom) != len(top):
        raise ValueError("bottom/top must list the same columns")
    one = (q + 1) ** 0
    w = one
    e = left_edge
    for m, nn in zip(bottom, top):
        e_out = m + e - nn
        if e_out not in (0, 1):
            return one * 0
        w = w * boson_vertex_weight(m, e, nn, e_out, a, q, palette)
        if not w:
            return w
        e = e_out
    if e != right_edge:
        return one * 0
    return w


def _col_occupancies(lam, n_cols: int):
    m = multiplicities(as_partition(lam))
    return [m.get(i, 0) for i in range(n_cols, 0, -1)]


def boundary_vertex_prob(arrow_in: int, arrow_out: int, a, q, t, nu):
    """Boundary vertex table (same in both boson palettes and at the
    six-vertex diagonal):

        in=1 -> out=0 : (1-a^2)/D                   in=1 -> out=1 : (a(1-t nu^2)/nu + a^2(1-t))/D
        in=0 -> out=1 : t(1-a^2)/D                  in=0 -> out=0 : (a(1-t nu^2)/nu + (1-t))/D

    with D = (1 - a nu t)(1 + a/nu).
    """
    one = (q + 1) ** 0
    D = (one - a * nu * t) * (one + a / nu)
    if arrow_in == 1 and arrow_out == 0:
        return (one - a * a) / D
    if arrow_in == 1 and arrow_out == 1:
        return (a * (one - t * nu * nu) / nu + a * a * (one - t)) / D
    if arrow_in == 0 and arrow_out == 1:
        return t * (one - a * a) / D
    return (a * (one - t * nu * nu) / nu + (one - t)) / D


# ---------------------------------------------------------------------------
# verifiers
# ---------------------------------------------------------------------------

@dataclass
class VerifyReport:
    name: str
    ok: bool
    n_cases: int
    failures: list = field(default_factory=list)

    def __str__(self):
        s = "PASS" if self.ok else "FAIL"
        extra = "" if self.ok else f" ({len(self.failures)} failures, first: {self.failures[:1]})"
        return f"[{s}] {self.name}: {self.n_cases} cases{extra}"


def verify_row_is_skew_hl(lam, mu, a, q, palette: int = 1) -> VerifyReport:
    """Check that a single boson row reproduces single-variable skew HL values.

    Palette 1, no left arrow: weight(bottom=lam, top=mu, right=j) equals
    P_{lam/mu}(a;q) when l(lam) = l(mu) + j, for j = 0, 1.  Palette 2 with a
    left arrow matches the dual normalization (b_lam/b_mu) P_{lam/mu}(a;q).
    """
    lam, mu = as_partition(lam), as_partition(mu)
    n_cols = max([1] + list(lam[:1]) + list(mu[:1]))
    failures = []
    cases = 0
    one = (q + 1) ** 0
    for j in (0, 1):
        cases += 1
        if palette == 1:
            got = boson_row_weight(_col_occupancies(lam, n_cols),
                                   _col_occupancies(mu, n_cols), 0, j, a, q, 1)
            want = skew_hl_single(lam, mu, a, q) if len(lam) == len(mu) + j else one * 0
        else:
            got = boson_row_weight(_col_occupancies(mu, n_cols),
                                   _col_occupancies(lam, n_cols), 1, j, a, q, 2)
            blam = one
            for m in multiplicities(lam).values():
                for i in range(1, m + 1):
                    blam = blam * (one - q ** i)
            bmu = one
            for m in multiplicities(mu).values():
                for i in range(1, m + 1):
                    bmu = bmu * (one - q ** i)
            target_len = len(mu) + (1 - j)
            want = (blam / bmu) * skew_hl_single(lam, mu, a, q) if len(lam) == target_len else one * 0
        if got != want:
            failures.append({"lam": lam, "mu": mu, "right_edge": j,
                             "got": str(got), "want": str(want)})
    return VerifyReport(f"boson row vs skew HL (palette {palette})",
                        not failures, cases, failures)


def _two_column_row(m1, m2, n1, n2, i_edge, j_edge, a, q, t, nu, palette, bullet_left):
    """Row [boundary?][col size 2][col size 1][boundary?] with bottom (m2, m1)
    and top (n2, n1); the boundary vertex sits left or right of the columns.
    """
    one = (q + 1) ** 0
    total = one * 0
    if bullet_left:
        for e in (0, 1):
            bp = boundary_vertex_prob(i_edge, e, a, q, t, nu)
            w = boson_row_weight([m2, m1], [n2, n1], e, j_edge, a, q, palette)
            total = total + bp * w
    else:
        for e in (0, 1):
            w = boson_row_weight([m2, m1], [n2, n1], i_edge, e, a, q, palette)
            bp = boundary_vertex_prob(e, j_edge, a, q, t, nu)
            total = total + w * bp
    return total


def verify_boundary_exchange(params_rational, n_cap: int = 3, perturb=None) -> VerifyReport:
    """Exact check that the boundary vertex passes through a two-column pair:
    the boundary-weighted sums over (m1, m2) agree between

        [bullet][cols, palette 1] with edges (i, j)   and
        [cols, palette 2][bullet] with edges (i, j),

    weights h_{m2}(-t,q) (-t nu)^{m1} h_{m1}(-1/(nu^2 t), q) on both sides.
    Parameters must be exact rationals; perturb (if given) is added to one
    palette-1 vertex weight as a negative control.
    """
    q, t, nu, a = (Fraction(x) for x in params_rational)
    one = Fraction(1)
    failures = []
    cases = 0
    for i_edge in (0, 1):
        for j_edge in (0, 1):
            for n1 in range(n_cap + 1):
                for n2 in range(n_cap + 1):
                    cases += 1
                    lhs = Fraction(0)
                    rhs = Fraction(0)
                    for m1 in range(max(0, n1 - 1), n1 + 2):
                        for m2 in range(max(0, n2 - 1), n2 + 2):
                            hw = (rogers_szego(m2, -t, q)
                                  * _odd_weight(m1, q, t, nu))
                            l = _two_column_row(m1, m2, n1, n2, i_edge, j_edge,
                                                a, q, t, nu, 1, True)
                            if perturb is not None and (m1, m2) == (n1, n2):
                                l = l + perturb
                            r = _two_column_row(m1, m2, n1, n2, i_edge, j_edge,
                                                a, q, t, nu, 2, False)
                            lhs += hw * l
                            rhs += hw * r
                    if lhs != rhs:
                        failures.append({"i": i_edge, "j": j_edge, "n1": n1, "n2": n2,
                                         "lhs": str(lhs), "rhs": str(rhs)})
    return VerifyReport("boundary vertex exchange", not failures, cases, failures)


def _odd_weight(m, q, t, nu):
    from .symfunc import _odd_block
    return _odd_block(m, q, t, nu)


def _crossing_weight(k1, k2, j1, j2, sp, q):
    """Yang-Baxter crossing with spectral parameter sp: inputs (k1, k2) are
    the upper/lower incoming lines, outputs (j2, j1) upper/lower outgoing.
    Same table as a bulk six-vertex vertex with (left, bottom) = (k1, k2) and
    (top, right) = (j2, j1).
    """
    one = (q + 1) ** 0
    if k1 + k2 != j1 + j2:
        return one * 0
    if k1 + k2 in (0, 2):
        return one
    p = spectral_prob(sp, q)
    if (k1, k2) == (1, 0):
        return p if (j2, j1) == (0, 1) else one - p
    return q * p if (j2, j1) == (1, 0) else one - q * p


def verify_yb_exchange(params_rational, occ_cap: int = 2, n_cols: int = 2) -> VerifyReport:
    """Exact two-row exchange:

    (1-ab)/(1-qab) * [red row b under gray row a, arrow entering the red row]
      = sum over crossing outcomes of [gray row a under red row b, arrow
        entering the red row] * crossing weight at spectral parameter ab.

    Rows extend infinitely to the left through empty columns.  On the left
    side the entering arrow can hop from the red row to the gray row any
    distance out, a geometric series summed here in closed form:
    the window's left boundary sees (red,gray) = (1,0) with weight 1 and
    (0,1) with weight a*b*(1-q)/(1-a*b).  On the right side the arrow rides
    the top (red) row, so the prefix is trivial.  All arithmetic is exact.
    """
    q, a, b = (Fraction(x) for x in params_rational)
    failures = []
    cases = 0
    one = Fraction(1)
    pref = (one - a * b) / (one - q * a * b)
    prefix = {(1, 0): one, (0, 1): a * b * (one - q) / (one - a * b)}

    def row_weight(bottom, top, left, right, rap, palette):
        return boson_row_weight(list(bottom), list(top), left, right, rap, q, palette)

    import itertools
    occs = list(itertools.product(range(occ_cap + 1), repeat=n_cols))
    pvals = list(itertools.product(range(2 * occ_cap + 2), repeat=n_cols))
    for m in occs:
        for n in occs:
            for j1 in (0, 1):
                for j2 in (0, 1):
                    cases += 1
                    lhs = Fraction(0)
                    for (e_red, e_gray), wpre in prefix.items():
                        for p in pvals:
                            w1 = row_weight(m, p, e_red, j1, b, 2)   # bottom row
                            if not w1:
                                continue
                            w2 = row_weight(p, n, e_gray, j2, a, 1)  # top row
                            lhs += wpre * w1 * w2
                    lhs *= pref
                    rhs = Fraction(0)
                    for p in pvals:
                        for k1 in (0, 1):
                            for k2 in (0, 1):
                                w1 = row_weight(m, p, 0, k2, a, 1)   # bottom row
                                if not w1:
                                    continue
                                w2 = row_weight(p, n, 1, k1, b, 2)   # top row
                                if not w2:
                                    continue
                                cw = _crossing_weight(k1, k2, j1, j2, a * b, q)
                                rhs += w1 * w2 * cw
                    if lhs != rhs:
                        failures.append({"m": m, "n": n, "j1": j1, "j2": j2,
                                         "lhs": str(lhs), "rhs": str(rhs)})
    return VerifyReport("two-row Yang-Baxter exchange", not failures, cases, failures)
