"""Exact integer and Z/p^n linear algebra.

Matrices are lists of lists of Python ints (arbitrary precision), acting on
row vectors: a matrix M with shape (m, n) sends x (length m) to x*M (length n).
Lattices in Z^n are given by generator matrices whose rows span them; the
canonical form for a row span is the row Hermite normal form over Z and the
Howell form over Z/p^n.
"""

from dataclasses import dataclass
from math import gcd


class CompositeNonzero(Exception):
    """Consecutive differentials do not compose to zero."""


# ---------------------------------------------------------------------------
# basic matrix helpers


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def identity(n):
    M = zeros(n, n)
    for i in range(n):
        M[i][i] = 1
    return M


def mat_copy(M):
    return [row[:] for row in M]


def mat_mul(A, B):
    if not A:
        return []
    n, k = len(A[0]), len(B[0]) if B else 0
    assert len(B) == n, "shape mismatch"
    out = zeros(len(A), k)
    for i, arow in enumerate(A):
        orow = out[i]
        for t, a in enumerate(arow):
            if a:
                brow = B[t]
                for j in range(k):
                    orow[j] += a * brow[j]
    return out

def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(c, A):
    return [[c * a for a in row] for row in A]


def mat_mod(A, q):
    return [[a % q for a in row] for row in A]


def mat_transpose(A):
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def mat_is_zero(A):
    return all(a == 0 for row in A for a in row)


def row_mul(x, M):
    """Row vector times matrix."""
    out = [0] * (len(M[0]) if M else 0)
    for t, c in enumerate(x):
        if c:
            for j, m in enumerate(M[t]):
                out[j] += c * m
    return out


def mat_stack(*mats):
    out = []
    for M in mats:
        out.extend(mat_copy(M))
    return out


def det_sign(M):
    """Determinant of a small square integer matrix (fraction-free Gauss)."""
    A = mat_copy(M)
    n = len(A)
    det = 1
    for c in range(n):
        piv = None
        for r in range(c, n):
            if A[r][c]:
                piv = r
                break
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        # Bareiss-style would avoid growth; plain elimination over Q via
        # scaled rows is fine at the sizes used here.
        for r in range(c + 1, n):
            while A[r][c]:
                q = A[r][c] // A[c][c]
                if q:
                    A[r] = [a - q * b for a, b in zip(A[r], A[c])]
                if A[r][c]:
                    A[r], A[c] = A[c], A[r]
                    det = -det
        det *= A[c][c]
    return det


# ---------------------------------------------------------------------------
# Hermite form, kernels, lattice arithmetic over Z


def hermite_form(M, transform=False):
    """Row Hermite normal form.

    Returns H (same shape, zero rows dropped) with positive pivots, entries
    above each pivot reduced into [0, pivot). With transform=True also returns
    U unimodular with U*M having the rows of H on top (zero rows below).
    """
    A = mat_copy(M)
    m = len(A)
    n = len(A[0]) if m else 0
    U = identity(m) if transform else None
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if A[i][c]:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        if transform:
            U[r], U[piv] = U[piv], U[r]
        # gcd loop below the pivot
        for i in range(r + 1, m):
            while A[i][c]:
                q = A[r][c] and A[i][c] // A[r][c]
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                if transform:
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                if A[i][c]:
                    A[r], A[i] = A[i], A[r]
                    if transform:
                        U[r], U[i] = U[i], U[r]
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
            if transform:
                U[r] = [-a for a in U[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                if transform:
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    H = [row for row in A[:r]]
    if transform:
        return H, U, A
    return H


def kernel_int(M):
    """Basis (rows, HNF) of {x : x*M = 0} over Z."""
    m = len(M)
    if m == 0:
        return []
    H, U, full = hermite_form(M, transform=True)
    rank = len(H)
    ker = [U[i] for i in range(rank, m)]
    return hermite_form(ker) if ker else []


def solve_left(M, y):
    """One solution x of x*M = y over Z, or None."""
    m = len(M)
    if m == 0:
        return None if any(y) else []
    H, U, _ = hermite_form(M, transform=True)
    x = [0] * m
    rem = list(y)
    for i, row in enumerate(H):
        c = next((j for j, a in enumerate(row) if a), None)
        if c is None:
            continue
        if rem[c] % row[c]:
            return None
        q = rem[c] // row[c]
        if q:
            rem = [a - q * b for a, b in zip(rem, row)]
        x[i] = q
    if any(rem):
        return None
    return row_mul(x, U)


def lattice_contains(L, y):
    return solve_left(L, y) is not None


def lattice_eq(L1, L2):
    return hermite_form(L1) == hermite_form(L2)


def lattice_sum(*Ls):
    return hermite_form(mat_stack(*Ls))


def lattice_index_subset(L1, L2):
    """True if span(L1) is contained in span(L2)."""
    return all(lattice_contains(L2, row) for row in L1)


def preimage_lattice(D, L):
    """Basis of {x : x*D in span(L)}.

    D has shape (m, n), L spans a sublattice of Z^n.  The result is a full
    set of generators (HNF rows) in Z^m.
    """
    m = len(D)
    if m == 0:
        return []
    if L:
        stacked = mat_copy(D) + [[-a for a in row] for row in L]
    else:
        stacked = mat_copy(D)
    ker = kernel_int(stacked)
    proj = [row[:m] for row in ker]
    return hermite_form(proj) if proj else []


def intersect_lattices(L1, L2):
    """Generators of span(L1) ∩ span(L2)."""
    if not L1 or not L2:
        return []
    stacked = mat_stack(L1, [[-a for a in row] for row in L2])
    ker = kernel_int(stacked)
    gens = [row_mul(row[: len(L1)], L1) for row in ker]
    gens = [g for g in gens if any(g)]
    return hermite_form(gens) if gens else []


# ---------------------------------------------------------------------------
# Smith normal form


def smith_form(M):
    """Smith normal form with transforms: U*M*V = D.

    U, V are unimodular; D is diagonal with d_i | d_{i+1}, entries >= 0.
    """
    A = mat_copy(M)
    m = len(A)
    n = len(A[0]) if m else 0
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, q):
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def addmul_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        # pick a nonzero pivot of minimal absolute value
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = A[i][j]
                if a and (best is None or abs(a) < best):
                    best = abs(a)
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                while A[i][t]:
                    q = A[i][t] // A[t][t]
                    addmul_row(i, t, -q)
                    if A[i][t]:
                        swap_rows(i, t)
            for j in range(t + 1, n):
                while A[t][j]:
                    q = A[t][j] // A[t][t]
                    addmul_col(j, t, -q)
                    if A[t][j]:
                        swap_cols(j, t)
                        dirty = True
            if not dirty and all(A[i][t] == 0 for i in range(t + 1, m)):
                break
        # divisibility: pivot must divide the rest of the block
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if A[i][j] % A[t][t]:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            addmul_row(t, bad, 1)
            continue
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return U, A, V


def smith_invariants(M):
    """Nontrivial invariant factors (d > 1) and the rank of M."""
    _, D, _ = smith_form(M)
    diag = [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]
    rank = sum(1 for d in diag if d)
    return [d for d in diag if d > 1], rank


# ---------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True)
class PGroup:
    """Finite abelian p-group plus free rank: (+) Z/p^{e_i} (+) Z^free_rank."""

    p: int
    exponents: tuple
    free_rank: int = 0

    def __post_init__(self):
        assert all(e > 0 for e in self.exponents)
        assert tuple(sorted(self.exponents, reverse=True)) == self.exponents
        assert self.free_rank >= 0

    @classmethod
    def from_invariants(cls, p, invariants, free_rank=0):
        exps = []
        for d in invariants:
            e = 0
            while d % p == 0:
                d //= p
                e += 1
            if e:
                exps.append(e)
        return cls(p, tuple(sorted(exps, reverse=True)), free_rank)

    @classmethod
    def zero(cls, p):
        return cls(p, (), 0)

    def is_zero(self):
        return not self.exponents and self.free_rank == 0

    def order(self):
        assert self.free_rank == 0
        return self.p ** sum(self.exponents)

    def __add__(self, other):
        assert self.p == other.p
        exps = tuple(sorted(self.exponents + other.exponents, reverse=True))
        return PGroup(self.p, exps, self.free_rank + other.free_rank)

    def __str__(self):
        parts = ["Z"] * self.free_rank
        parts += ["Z/%d" % self.p**e for e in self.exponents]
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"free_rank": self.free_rank, "exponents": list(self.exponents)}


def quotient_invariants(L, M):
    """Invariant factors and free rank of span(L)/span(M), M inside L."""
    if not L:
        assert not M or mat_is_zero(M)
        return [], 0
    coords = []
    for row in M:
        x = solve_left(L, row)
        assert x is not None, "relation rows must lie in the generator span"
        coords.append(x)
    if not coords:
        return [], len(L)
    invs, rank = smith_invariants(coords)
    return invs, len(L) - rank


def quotient_group(L, M, p):
    invs, free = quotient_invariants(L, M)
    return PGroup.from_invariants(p, invs, free)


# ---------------------------------------------------------------------------
# cochain complexes of free modules (row convention)


def check_complex(ranks, diffs):
    """diffs[j] has shape (ranks[j], ranks[j+1]); composites must vanish."""
    degs = sorted(ranks)
    for j in degs:
        if j in diffs and (j + 1) in diffs and diffs[j] and diffs[j + 1]:
            comp = mat_mul(diffs[j], diffs[j + 1])
            if not mat_is_zero(comp):
                raise CompositeNonzero("d^2 != 0 between degrees %d..%d" % (j, j + 2))


def _diff_or_zero(ranks, diffs, j):
    if j in diffs:
        return diffs[j]
    return zeros(ranks.get(j, 0), ranks.get(j + 1, 0))


def cohomology_invariants(ranks, diffs, modulus=None):
    """Per-degree (invariant factors, free rank) of a complex of free modules.

    Over Z when modulus is None; over Z/modulus otherwise (the diffs are then
    integer lifts, composites only need to vanish mod modulus).
    """
    out = {}
    degs = sorted(ranks)
    for j in degs:
        r = ranks[j]
        if r == 0:
            out[j] = ([], 0)
            continue
        D = _diff_or_zero(ranks, diffs, j)
        Dprev = _diff_or_zero(ranks, diffs, j - 1)
        if modulus is None:
            if Dprev and D and not mat_is_zero(mat_mul(Dprev, D)):
                raise CompositeNonzero("degree %d" % j)
            K = kernel_int(D) if (D and ranks.get(j + 1, 0)) else identity(r)
            I = [row for row in Dprev if any(row)] if Dprev else []
        else:
            q = modulus
            if Dprev and D:
                comp = mat_mul(Dprev, D)
                if any(a % q for row in comp for a in row):
                    raise CompositeNonzero("degree %d (mod %d)" % (j, q))
            if D and ranks.get(j + 1, 0):
                target = mat_scale(q, identity(ranks[j + 1]))
                K = preimage_lattice(D, target)
            else:
                K = identity(r)
            I = [row for row in Dprev if any(row)] if Dprev else []
            I = I + mat_scale(q, identity(r))
        for row in I:
            assert lattice_contains(K, row), "image not inside kernel"
        out[j] = quotient_invariants(K, I)
    return out


def complex_cohomology(ranks, diffs, p, modulus=None):
    """Cohomology as PGroups at the prime p, degree by degree."""
    inv = cohomology_invariants(ranks, diffs, modulus=modulus)
    return {j: PGroup.from_invariants(p, invs, free) for j, (invs, free) in inv.items()}


# ---------------------------------------------------------------------------
# presented modules and presented complexes (subquotients of Z^n)


def presented_invariants(gens, rels):
    """Invariants of span(gens)/span(rels) without assuming rels ⊆ gens rows."""
    if not gens:
        return [], 0
    rels = [r for r in rels if any(r)]
    return quotient_invariants(gens, rels)


def presented_cocycles_boundaries(terms, maps, j):
    """Ambient cocycle and boundary lattices of a presented complex at j.

    Cocycles: elements of span(gens_j) mapping into span(rels_{j+1});
    boundaries: span(rels_j) + image of span(gens_{j-1}).
    """
    gens, rels = terms[j]
    if not gens:
        return [], []
    D = maps.get(j)
    if D is not None and j + 1 in terms:
        _, rnext = terms[j + 1]
        GD = [row_mul(g, D) for g in gens]
        K = preimage_lattice(GD, rnext) if GD and GD[0] else identity(len(gens))
    else:
        K = identity(len(gens))
    ker_rows = [row_mul(x, gens) for x in K]
    ker_rows = hermite_form([r for r in ker_rows if any(r)])
    denom = [r[:] for r in rels]
    Dprev = maps.get(j - 1)
    if Dprev is not None and j - 1 in terms:
        gprev, _ = terms[j - 1]
        denom += [row_mul(g, Dprev) for g in gprev]
    denom = [r for r in denom if any(r)]
    return ker_rows, denom


def presented_complex_cohomology(terms, maps, p):
    """Cohomology of a complex of presented groups.

    terms[j] = (gens, rels) with span(rels) ⊆ span(gens) in a common ambient
    Z^{n_j}; maps[j] is the ambient matrix from degree j to j+1.
    """
    out = {}
    for j in sorted(terms):
        ker_rows, denom = presented_cocycles_boundaries(terms, maps, j)
        if not ker_rows:
            out[j] = PGroup.zero(p)
            continue
        denom = [r for r in denom if lattice_contains(ker_rows, r)] if denom else []
        invs, free = quotient_invariants(ker_rows, denom)
        out[j] = PGroup.from_invariants(p, invs, free)
    return out


def induced_map_is_iso(src, tgt, Phi, p):
    """Whether the ambient chain map Phi induces an isomorphism of finite
    cohomology groups presented as (cocycles, boundaries) pairs.

    src and tgt are (cocycle rows, boundary rows); both groups must be finite.
    """
    Ksrc, Bsrc = src
    Ktgt, Btgt = tgt
    invs_s, free_s = quotient_invariants(Ksrc, [r for r in Bsrc if lattice_contains(Ksrc, r)]) if Ksrc else ([], 0)
    invs_t, free_t = quotient_invariants(Ktgt, [r for r in Btgt if lattice_contains(Ktgt, r)]) if Ktgt else ([], 0)
    assert free_s == 0 and free_t == 0, "induced-map iso check needs finite groups"
    gs = PGroup.from_invariants(p, invs_s)
    gt = PGroup.from_invariants(p, invs_t)
    if gs.order() != gt.order():
        return False
    images = []
    for row in Ksrc:
        img = row_mul(row, Phi)
        if not Ktgt:
            if any(img):
                return False
            continue
        if not lattice_contains(lattice_sum(Ktgt, Btgt) if Btgt else Ktgt, img):
            return False
        images.append(img)
    # surjectivity: images + boundaries span the target cocycles
    span = lattice_sum(*(x for x in (images, Btgt) if x)) if (images or Btgt) else []
    for row in Ktgt:
        if not lattice_contains(span, row):
            return False
    return True


# ---------------------------------------------------------------------------
# Howell form over Z/p^n


def _vp(x, p):
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def howell_form(M, p, n):
    """Canonical Howell form of the row span of M over Z/p^n.

    Two matrices over Z/p^n have the same row span iff their Howell forms are
    identical.  Pivots are p^v; entries above a pivot are reduced mod p^v.
    Pivoting picks the lowest p-valuation entry in the leftmost column.
    """
    q = p**n
    cols = len(M[0]) if M else 0
    pivots = {}
    work = [[a % q for a in row] for row in M]
    work = [row for row in work if any(row)]
    while work:
        r = work.pop()
        while True:
            c = next((j for j, a in enumerate(r) if a), None)
            if c is None:
                break
            v = _vp(r[c], p)
            if c in pivots:
                piv = pivots[c]
                vp_ = _vp(piv[c], p)
                if v >= vp_:
                    factor = r[c] // piv[c]  # exact: piv[c] = p^{vp}
                    r = [(a - factor * b) % q for a, b in zip(r, piv)]
                    continue
                u = r[c] // p**v
                uinv = pow(u, -1, q)
                r = [(a * uinv) % q for a in r]
                pivots[c] = r
                work.append(piv)
                ann = q // p**v
                if ann > 1:
                    work.append([(ann * a) % q for a in r])
                break
            u = r[c] // p**v
            uinv = pow(u, -1, q)
            r = [(a * uinv) % q for a in r]
            pivots[c] = r
            ann = q // p**v
            if ann > 1:
                work.append([(ann * a) % q for a in r])
            break
    # back-reduce entries above each pivot
    order = sorted(pivots)
    for c in order:
        piv = pivots[c]
        pv = piv[c]
        for c2 in order:
            if c2 >= c:
                break
            row = pivots[c2]
            if row[c] % pv:
                factor = row[c] // pv
            else:
                factor = row[c] // pv
            if factor:
                pivots[c2] = [(a - factor * b) % q for a, b in zip(row, piv)]
    return [pivots[c] for c in sorted(pivots)]


def howell_span_eq(A, B, p, n):
    return howell_form(A, p, n) == howell_form(B, p, n)


def kernel_mod(M, p, n):
    """Howell-canonical generators of {x : x*M = 0 over Z/p^n}."""
    q = p**n
    m = len(M)
    if m == 0:
        return []
    ncols = len(M[0])
    if ncols == 0:
        return howell_form(identity(m), p, n)
    target = mat_scale(q, identity(ncols))
    K = preimage_lattice(M, target)
    return howell_form(K, p, n) if K else []


def module_invariants_mod(gens, p, n):
    """Invariant exponents of the Z/p^n-module spanned by gens in (Z/p^n)^c.

    Computed over Z as (span(gens) + p^n Z^c) / p^n Z^c; Howell pivots alone
    only determine the order, not the isomorphism type.
    """
    q = p**n
    gens = [g for g in gens if any(a % q for a in g)]
    if not gens:
        return ()
    c = len(gens[0])
    L = lattice_sum(gens, mat_scale(q, identity(c)))
    invs, free = quotient_invariants(L, mat_scale(q, identity(c)))
    assert free == 0
    return PGroup.from_invariants(p, invs).exponents
