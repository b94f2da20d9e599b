"""Exact arithmetic kernel.

Arbitrary-precision rationals, sparse multivariate polynomials over Q with
formal differentiation, and fraction-free (Bareiss) linear algebra over Q
and over Q[x1..xn].  Everything here is exact: no floating point is used
anywhere, so rank decisions are discrete and reproducible.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations

# Exact rational scalar.  fractions.Fraction already maintains the invariants
# we need (denominator > 0, gcd(num, den) = 1 after every operation).
Rat = Fraction

Exponents = tuple


def as_rat(x) -> Fraction:
    """Coerce an int or Fraction to Fraction; reject floats (never exact)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


def enum_key(exps):
    """Graded-lex enumeration key: grade ascending, lex-largest first inside
    each grade (so for two variables: (0,0), (1,0), (0,1), (2,0), ...)."""
    return (sum(exps), tuple(-e for e in exps))


def lead_key(exps):
    """Graded-lex magnitude: max() of this key picks the leading monomial."""
    return (sum(exps), exps)


class MPoly:
    """Sparse multivariate polynomial with exact rational coefficients.

    Terms live in a dict mapping exponent tuples (length ``nvars``,
    nonnegative ints) to nonzero Fractions.  Instances are treated as
    immutable: no method mutates ``terms`` after construction.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=()):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        clean = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for exps, coeff in items:
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent tuple {exps} has wrong length (want {nvars})")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            coeff = as_rat(coeff)
            if coeff:
                acc = clean.get(exps)
                coeff = coeff if acc is None else acc + coeff
                if coeff:
                    clean[exps] = coeff
                elif exps in clean:
                    del clean[exps]
        self.nvars = nvars
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def constant(cls, nvars, value):
        return cls(nvars, {(0,) * nvars: as_rat(value)})

    @classmethod
    def one(cls, nvars):
        return cls.constant(nvars, 1)

    @classmethod
    def variable(cls, nvars, i):
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        exps = tuple(1 if j == i else 0 for j in range(nvars))
        return cls(nvars, {exps: Fraction(1)})

    @classmethod
    def monomial(cls, nvars, exps, coeff=1):
        return cls(nvars, {tuple(exps): as_rat(coeff)})

    # -- basic queries -----------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    def total_degree(self):
        """Max term grade; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def leading(self):
        """(exponents, coefficient) of the graded-lex leading term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exps = max(self.terms, key=lead_key)
        return exps, self.terms[exps]

    def constant_coefficient(self):
        return self.terms.get((0,) * self.nvars, Fraction(0))

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return MPoly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return MPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            c = as_rat(other)
            if not c:
                return MPoly.zero(self.nvars)
            return MPoly(self.nvars, {e: co * c for e, co in self.terms.items()})
        if other.nvars != self.nvars:
            raise ValueError("variable count mismatch")
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial exponent must be a nonnegative integer")
        result = MPoly.one(self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MPoly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- calculus and evaluation -------------------------------------------

    def partial(self, i):
        """Formal partial derivative with respect to variable i."""
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k == 0:
                continue
            e2 = e[:i] + (k - 1,) + e[i + 1:]
            out[e2] = out.get(e2, Fraction(0)) + c * k
        return MPoly(self.nvars, {e: c for e, c in out.items() if c})

    def eval(self, point):
        """Exact value at a rational point (sequence of length nvars)."""
        point = tuple(as_rat(x) for x in point)
        if len(point) != self.nvars:
            raise ValueError(f"point has length {len(point)}, expected {self.nvars}")
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= x ** k
            total += v
        return total

    # -- exact division, content, normal forms ------------------------------

    def exact_div(self, divisor):
        """Quotient self/divisor when the division is exact; raises otherwise."""
        divisor = self._coerce(divisor)
        if divisor.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero:
            return MPoly.zero(self.nvars)
        dlead, dcoeff = divisor.leading()
        rem = dict(self.terms)
        quot = {}
        while rem:
            e = max(rem, key=lead_key)
            q = tuple(a - b for a, b in zip(e, dlead))
            if any(x < 0 for x in q):
                raise ValueError("inexact polynomial division")
            c = rem[e] / dcoeff
            quot[q] = quot.get(q, Fraction(0)) + c
            for de, dc in divisor.terms.items():
                ee = tuple(a + b for a, b in zip(q, de))
                s = rem.get(ee, Fraction(0)) - c * dc
                if s:
                    rem[ee] = s
                elif ee in rem:
                    del rem[ee]
        return MPoly(self.nvars, quot)

    def content(self):
        """Positive rational c with self/c having coprime integer coefficients."""
        if self.is_zero:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self):
        """Normal form: coprime integer coefficients, positive leading coefficient."""
        if self.is_zero:
            return self
        c = self.content()
        if self.leading()[1] < 0:
            c = -c
        return self * (1 / c)

    def degree_in(self, i):
        """Degree in variable i; -1 for the zero polynomial."""
        return max((e[i] for e in self.terms), default=-1)

    # -- presentation --------------------------------------------------------

    def __str__(self):
        from .parsing import format_poly

        return format_poly(self)

    def __repr__(self):
        return f"MPoly({self.nvars}, {self!s})"


def poly_partial(p: MPoly, i: int) -> MPoly:
    """Formal partial derivative of p with respect to variable i."""
    return p.partial(i)


def poly_eval(p: MPoly, point) -> Fraction:
    """Exact value of p at a rational point."""
    return p.eval(point)


# ---------------------------------------------------------------------------
# Exact matrices
# ---------------------------------------------------------------------------


class ExactMatrix:
    """Rectangular matrix with entries that are all Fractions (``scalar``)
    or all MPoly over a common variable count (``symbolic``)."""

    __slots__ = ("rows", "nrows", "ncols", "kind", "nvars")

    def __init__(self, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("matrix rows have unequal lengths")
        symbolic = any(isinstance(x, MPoly) for r in rows for x in r)
        nvars = None
        if symbolic:
            for r in rows:
                for x in r:
                    if isinstance(x, MPoly):
                        nvars = x.nvars
                        break
                if nvars is not None:
                    break
            rows = [
                [x if isinstance(x, MPoly) else MPoly.constant(nvars, x) for x in r]
                for r in rows
            ]
            if any(x.nvars != nvars for r in rows for x in r):
                raise ValueError("symbolic entries disagree on variable count")
        else:
            rows = [[as_rat(x) for x in r] for r in rows]
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols
        self.kind = "symbolic" if symbolic else "scalar"
        self.nvars = nvars

    @classmethod
    def identity(cls, k):
        return cls([[Fraction(int(i == j)) for j in range(k)] for i in range(k)])

    def transpose(self):
        return ExactMatrix([[self.rows[i][j] for i in range(self.nrows)]
                            for j in range(self.ncols)])

    def eval(self, point):
        """Scalar matrix obtained by evaluating symbolic entries at a point."""
        if self.kind == "scalar":
            return self
        return ExactMatrix([[x.eval(point) for x in r] for r in self.rows])

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __repr__(self):
        return f"ExactMatrix({self.nrows}x{self.ncols}, {self.kind})"


def _scaled_integer_rows(rows):
    """Scale each Fraction row by the lcm of its denominators (rank-safe)."""
    out = []
    for r in rows:
        den = 1
        for x in r:
            den = den * x.denominator // math.gcd(den, x.denominator)
        out.append([int(x * den) for x in r])
    return out


def _rank_int_bareiss(rows):
    """Fraction-free rank of an integer matrix (divisions are exact)."""
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if m else 0
    prev = 1
    rank = 0
    for k in range(min(nr, nc)):
        # pick the nonzero pivot of smallest magnitude to limit growth
        best = None
        for i in range(k, nr):
            for j in range(k, nc):
                v = m[i][j]
                if v:
                    key = abs(v)
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            break
        _, pi, pj = best
        if pi != k:
            m[k], m[pi] = m[pi], m[k]
        if pj != k:
            for r in m:
                r[k], r[pj] = r[pj], r[k]
        piv = m[k][k]
        for i in range(k + 1, nr):
            mik = m[i][k]
            for j in range(k + 1, nc):
                m[i][j] = (m[i][j] * piv - mik * m[k][j]) // prev
            m[i][k] = 0
        prev = piv
        rank += 1
    return rank


def _rank_poly_bareiss(rows):
    """Fraction-free rank over Q[x1..xn]; pivots on a lowest-total-degree
    nonzero entry (tie-broken by term count) to limit coefficient swell."""
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if m else 0
    prev = None
    rank = 0
    for k in range(min(nr, nc)):
        best = None
        for i in range(k, nr):
            for j in range(k, nc):
                p = m[i][j]
                if not p.is_zero:
                    key = (p.total_degree(), len(p.terms))
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            break
        _, pi, pj = best
        if pi != k:
            m[k], m[pi] = m[pi], m[k]
        if pj != k:
            for r in m:
                r[k], r[pj] = r[pj], r[k]
        piv = m[k][k]
        for i in range(k + 1, nr):
            mik = m[i][k]
            for j in range(k + 1, nc):
                num = m[i][j] * piv - mik * m[k][j]
                m[i][j] = num if prev is None else num.exact_div(prev)
            m[i][k] = MPoly.zero(piv.nvars)
        prev = piv
        rank += 1
    return rank


def exact_rank(M: ExactMatrix) -> int:
    """Exact rank; over the fraction field Q(x1..xn) for symbolic entries."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    if M.kind == "scalar":
        return _rank_int_bareiss(_scaled_integer_rows(M.rows))
    return _rank_poly_bareiss(M.rows)


def exact_det(M: ExactMatrix):
    """Exact determinant of a square matrix (Fraction or MPoly)."""
    if M.nrows != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    n = M.nrows
    if n == 0:
        return Fraction(1)
    symbolic = M.kind == "symbolic"
    m = [list(r) for r in M.rows]
    sign = 1
    prev = None
    for k in range(n - 1):
        best = None
        for i in range(k, n):
            for j in range(k, n):
                p = m[i][j]
                nonzero = (not p.is_zero) if symbolic else bool(p)
                if nonzero:
                    key = (p.total_degree(), len(p.terms)) if symbolic else abs(p)
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            return MPoly.zero(M.nvars) if symbolic else Fraction(0)
        _, pi, pj = best
        if pi != k:
            m[k], m[pi] = m[pi], m[k]
            sign = -sign
        if pj != k:
            for r in m:
                r[k], r[pj] = r[pj], r[k]
            sign = -sign
        piv = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            for j in range(k + 1, n):
                num = m[i][j] * piv - mik * m[k][j]
                if prev is None:
                    m[i][j] = num
                elif symbolic:
                    m[i][j] = num.exact_div(prev)
                else:
                    m[i][j] = num / prev
        prev = piv
    return m[n - 1][n - 1] * sign


def _normalize_kernel_vector(vec):
    """Scale to coprime integer entries with positive leading (first nonzero)
    entry, so kernel bases are deterministic."""
    den = 1
    for x in vec:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g:
        ints = [v // g for v in ints]
    for v in ints:
        if v:
            if v < 0:
                ints = [-w for w in ints]
            break
    return tuple(Fraction(v) for v in ints)


def right_kernel(M: ExactMatrix):
    """Basis of {c : M c = 0} for a scalar matrix, in canonical form.

    Basis size is ncols - rank; vectors are normalized to coprime integers
    with positive leading entry and ordered by their free column.
    """
    if M.kind != "scalar":
        raise ValueError("right_kernel requires scalar entries")
    nr, nc = M.nrows, M.ncols
    if nc == 0:
        return []
    # Gauss-Jordan over Q; deliberately a separate elimination path from the
    # fraction-free rank so the two can cross-check each other.
    m = [list(r) for r in M.rows]
    pivots = []
    row = 0
    for col in range(nc):
        sel = None
        for i in range(row, nr):
            if m[i][col]:
                sel = i
                break
        if sel is None:
            continue
        m[row], m[sel] = m[sel], m[row]
        piv = m[row][col]
        m[row] = [x / piv for x in m[row]]
        for i in range(nr):
            if i != row and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
        if row == nr:
            break
    pivot_set = set(pivots)
    basis = []
    for free in range(nc):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * nc
        v[free] = Fraction(1)
        for r, col in enumerate(pivots):
            v[col] = -m[r][free]
        basis.append(_normalize_kernel_vector(v))
    return basis


def left_kernel(M: ExactMatrix):
    """Basis of {c : c M = 0}: the right kernel of the transpose."""
    return right_kernel(M.transpose())


def sampled_symbolic_rank(M: ExactMatrix, seed: int, trials: int = 8, box: int = 1000):
    """Randomized cross-check of symbolic rank: the maximum scalar rank over
    ``trials`` integer points drawn from [-box, box]^nvars.

    This is the Schwartz-Zippel style oracle; it never replaces the exact
    elimination, it is exposed separately for testing against it.
    """
    if M.kind != "symbolic":
        return exact_rank(M)
    rng = random.Random(seed)
    best = 0
    for _ in range(max(1, trials)):
        point = tuple(Fraction(rng.randint(-box, box)) for _ in range(M.nvars))
        best = max(best, exact_rank(M.eval(point)))
    return best


# ---------------------------------------------------------------------------
# Polynomial gcd (univariate Euclid, multivariate primitive PRS)
# ---------------------------------------------------------------------------


def _gcd_univariate(f: MPoly, g: MPoly) -> MPoly:
    while not g.is_zero:
        # plain remainder over Q; fine at the sizes this kernel targets
        lead_e, lead_c = g.leading()
        r = f
        while not r.is_zero and r.total_degree() >= g.total_degree():
            e, c = r.leading()
            shift = tuple(a - b for a, b in zip(e, lead_e))
            r = r - g * MPoly.monomial(f.nvars, shift, c / lead_c)
        f, g = g, r
    return f.primitive()


def _split_in_last(f: MPoly):
    """View f in Q[x1..x_{n-1}][x_n]: dict of x_n-degree -> coefficient MPoly."""
    out = {}
    for e, c in f.terms.items():
        k = e[-1]
        out.setdefault(k, {})[e[:-1]] = c
    return {k: MPoly(f.nvars - 1, terms) for k, terms in out.items()}


def _join_in_last(coeffs, nvars):
    terms = {}
    for k, p in coeffs.items():
        for e, c in p.terms.items():
            terms[e + (k,)] = c
    return MPoly(nvars, terms)


def _pseudo_rem(f, g, nvars):
    """Pseudo-remainder of f by g as polynomials in the last variable."""
    fc = _split_in_last(f)
    gc = _split_in_last(g)
    dg = max(gc)
    lc = gc[dg]
    while fc and max(fc) >= dg:
        df = max(fc)
        top = fc[df]
        # multiply through by lc, then cancel the top term with g * top * x^(df-dg)
        fc = {k: p * lc for k, p in fc.items()}
        for k, p in gc.items():
            kk = k + df - dg
            s = fc.get(kk, MPoly.zero(nvars - 1)) - p * top
            if s.is_zero:
                fc.pop(kk, None)
            else:
                fc[kk] = s
        fc = {k: p for k, p in fc.items() if not p.is_zero}
    return _join_in_last(fc, nvars)


def mpoly_gcd(f: MPoly, g: MPoly) -> MPoly:
    """gcd in Q[x1..xn], normalized to primitive integer coefficients with
    positive leading coefficient.  Primitive PRS in the last variable."""
    if f.nvars != g.nvars:
        raise ValueError("variable count mismatch")
    if f.is_zero:
        return g.primitive()
    if g.is_zero:
        return f.primitive()
    n = f.nvars
    if n == 0:
        return MPoly.one(0)
    if n == 1:
        return _gcd_univariate(f, g)
    fd = f.degree_in(n - 1)
    gd = g.degree_in(n - 1)
    if fd == 0 and gd == 0:
        # last variable absent from both: recurse one level down
        drop = lambda p: MPoly(n - 1, {e[:-1]: c for e, c in p.terms.items()})
        lift = mpoly_gcd(drop(f), drop(g))
        return MPoly(n, {e + (0,): c for e, c in lift.terms.items()})

    def content_pp(p):
        coeffs = list(_split_in_last(p).values())
        cont = coeffs[0]
        for q in coeffs[1:]:
            cont = mpoly_gcd(cont, q)
        lifted = MPoly(n, {e + (0,): c for e, c in cont.terms.items()})
        return lifted, p.exact_div(lifted)

    if fd < gd:
        f, g = g, f
    cf, pf = content_pp(f)
    cg, pg = content_pp(g)
    cc = mpoly_gcd(MPoly(n - 1, {e[:-1]: c for e, c in cf.terms.items()}),
                   MPoly(n - 1, {e[:-1]: c for e, c in cg.terms.items()}))
    cc = MPoly(n, {e + (0,): c for e, c in cc.terms.items()})
    while not pg.is_zero:
        r = _pseudo_rem(pf, pg, n)
        pf = pg
        if r.is_zero:
            pg = r
        else:
            _, pg = content_pp(r)
    return (cc * pf).primitive()


def mpoly_gcd_list(polys) -> MPoly:
    """gcd of a nonempty sequence of polynomials."""
    polys = list(polys)
    if not polys:
        raise ValueError("gcd of an empty sequence")
    acc = polys[0]
    for p in polys[1:]:
        acc = mpoly_gcd(acc, p)
        if acc == MPoly.one(acc.nvars):
            break
    return acc.primitive()


def minors(M: ExactMatrix, size: int):
    """All size x size minors of M, as (row index tuple, col index tuple, det)."""
    if size < 0 or size > min(M.nrows, M.ncols):
        return
    for ri in combinations(range(M.nrows), size):
        for ci in combinations(range(M.ncols), size):
            sub = ExactMatrix([[M.rows[i][j] for j in ci] for i in ri])
            yield ri, ci, exact_det(sub)
