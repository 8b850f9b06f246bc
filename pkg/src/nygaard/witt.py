"""p-typical Witt vectors over effective base rings.

Arithmetic goes through ghost components on a torsion-free cover: coordinates
are lifted, the ghost vectors combined, and the result recovered by exact
division (the divisions are exact by functoriality of Witt-vector arithmetic
over the cover).  Universal sum/product polynomials are also available for
small (p, n) and serve as an independent route.

The module also builds the two graded-ring presentation squares over a
perfectoid base: the homotopy-style square (phi-linear top map u -> sigma,
v -> xi_tilde * sigma^{-1}, theta-linear left map u -> u, v -> 0) and the
canonical map u -> xi*sigma, v -> sigma^{-1}.
"""

from dataclasses import dataclass
from functools import lru_cache

from .linalg import identity, lattice_contains, mat_scale
from .qbase import QBase


class LengthMismatch(Exception):
    pass


@dataclass(frozen=True)
class WittVector:
    ring: object
    p: int
    coords: tuple

    def __len__(self):
        return len(self.coords)

    def __eq__(self, other):
        return (
            self.p == other.p
            and len(self.coords) == len(other.coords)
            and all(self.ring.eq(a, b) for a, b in zip(self.coords, other.coords))
        )


def witt(ring, p, coords):
    return WittVector(ring, p, tuple(coords))


def witt_zero(ring, p, n):
    return witt(ring, p, [ring.zero] * n)


def witt_one(ring, p, n):
    return witt(ring, p, [ring.one] + [ring.zero] * (n - 1))


def teichmuller(ring, p, a, n):
    return witt(ring, p, [a] + [ring.zero] * (n - 1))


def _int_mul(ring, c, a):
    return ring.mul(ring.from_int(c), a)


def _ring_pow(ring, x, e):
    """x^e by square and multiply."""
    out = ring.one
    base = x
    while e:
        if e & 1:
            out = ring.mul(out, base)
        e >>= 1
        if e:
            base = ring.mul(base, base)
    return out


def ghost(w):
    """Ghost components in the base ring: g_i = sum_{j<=i} p^j w_j^{p^{i-j}}."""
    ring, p = w.ring, w.p
    out = []
    for i in range(len(w.coords)):
        acc = ring.zero
        for j in range(i + 1):
            pw = _ring_pow(ring, w.coords[j], p ** (i - j))
            acc = ring.add(acc, _int_mul(ring, p**j, pw))
        out.append(acc)
    return tuple(out)


def _ghost_cover(w):
    cover = w.ring.cover
    lifted = witt(cover, w.p, [w.ring.lift(c) for c in w.coords])
    return ghost(lifted)


def _from_ghost_cover(ring, p, g):
    """Invert the ghost map over the cover, then reduce to the ring."""
    cover = ring.cover
    coords = []
    for i in range(len(g)):
        acc = g[i]
        for j in range(i):
            pw = _ring_pow(cover, coords[j], p ** (i - j))
            acc = cover.add(acc, cover.neg(_int_mul(cover, p**j, pw)))
        coords.append(cover.exact_div_int(acc, p**i))
    return witt(ring, p, [ring.reduce(c) for c in coords])


def _check_compatible(w, w2):
    if len(w.coords) != len(w2.coords):
        raise LengthMismatch("%d vs %d" % (len(w.coords), len(w2.coords)))
    assert w.p == w2.p and w.ring is w2.ring


def witt_add(w, w2):
    _check_compatible(w, w2)
    g = _ghost_cover(w)
    h = _ghost_cover(w2)
    cover = w.ring.cover
    return _from_ghost_cover(w.ring, w.p, tuple(cover.add(a, b) for a, b in zip(g, h)))


def witt_mul(w, w2):
    _check_compatible(w, w2)
    g = _ghost_cover(w)
    h = _ghost_cover(w2)
    cover = w.ring.cover
    return _from_ghost_cover(w.ring, w.p, tuple(cover.mul(a, b) for a, b in zip(g, h)))


def witt_neg(w):
    g = _ghost_cover(w)
    cover = w.ring.cover
    return _from_ghost_cover(w.ring, w.p, tuple(cover.neg(a) for a in g))


def witt_sub(w, w2):
    return witt_add(w, witt_neg(w2))


def witt_scalar(c, w):
    """Multiplication by the integer c (image of c in W(ring))."""
    g = _ghost_cover(w)
    cover = w.ring.cover
    return _from_ghost_cover(w.ring, w.p, tuple(_int_mul(cover, c, a) for a in g))


def frobenius_W(w):
    """F: W_n -> W_{n-1}, ghost(Fw)_i = ghost(w)_{i+1}."""
    g = _ghost_cover(w)
    return _from_ghost_cover(w.ring, w.p, g[1:])


def verschiebung(w):
    """V: W_n -> W_{n+1}, prepends a zero coordinate."""
    return witt(w.ring, w.p, (w.ring.zero,) + w.coords)


# ---------------------------------------------------------------------------
# universal polynomials (independent route, small p and n only)


def _poly_add(a, b):
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + c
        if not out[e]:
            del out[e]
    return out


def _poly_scale(c0, a):
    return {e: c0 * c for e, c in a.items()} if c0 else {}


def _poly_mul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _poly_pow(a, k):
    nv = len(next(iter(a))) if a else 0
    out = {tuple([0] * nv): 1}
    base = a
    while k:
        if k & 1:
            out = _poly_mul(out, base)
        k >>= 1
        if k:
            base = _poly_mul(base, base)
    return out


def _poly_div_int(a, m):
    out = {}
    for e, c in a.items():
        q, r = divmod(c, m)
        assert r == 0, "universal polynomial division not exact"
        out[e] = q
    return out


@lru_cache(maxsize=None)
def universal_witt_polynomials(p, n, op):
    """Sum ('add') or product ('mul') polynomials S_0..S_{n-1} over Z.

    Variables are x_0..x_{n-1}, y_0..y_{n-1}; exponent tuples have length 2n.
    Computed once by lifting to Z[x, y] and dividing exactly; cached.
    """
    nv = 2 * n

    def var(i):
        e = [0] * nv
        e[i] = 1
        return {tuple(e): 1}

    def ghost_poly(block, i):
        acc = {}
        for j in range(i + 1):
            acc = _poly_add(acc, _poly_scale(p**j, _poly_pow(var(block * n + j), p ** (i - j))))
        return acc

    S = []
    for i in range(n):
        if op == "add":
            g = _poly_add(ghost_poly(0, i), ghost_poly(1, i))
        else:
            g = _poly_mul(ghost_poly(0, i), ghost_poly(1, i))
        acc = g
        for j in range(i):
            acc = _poly_add(acc, _poly_scale(-(p**j), _poly_pow(S[j], p ** (i - j))))
        S.append(_poly_div_int(acc, p**i))
    return tuple(S)


def eval_universal(ring, poly, xs, ys):
    """Evaluate a universal polynomial on ring elements."""
    vals = list(xs) + list(ys)
    acc = ring.zero
    for e, c in poly.items():
        term = ring.from_int(c)
        for i, k in enumerate(e):
            for _ in range(k):
                term = ring.mul(term, vals[i])
        acc = ring.add(acc, term)
    return acc


# ---------------------------------------------------------------------------
# perfectoid presentation squares


class FpSquareModel:
    """A_inf = W(F_p) = Z_p truncated to Z/p^n; xi = xi_tilde = p, phi = id."""

    name = "fp"

    def __init__(self, p, n):
        self.p = p
        self.n = n
        self.xi = p
        self.xi_tilde = p
        self.mu = 0

    def phi(self, a):
        return a

    def base_mul(self, a, b):
        return a * b

    def base_eq(self, a, b):
        return (a - b) % self.p**self.n == 0

    def residue_eq_xi(self, a, b):
        # modulo (xi, p^n) = (p)
        return (a - b) % self.p == 0

    def residue_eq_xi_tilde(self, a, b):
        return (a - b) % self.p == 0

    def one(self):
        return 1

    def xi_pow(self, k):
        return self.p**k


class QSquareModel:
    """A_inf modeled by Z[q]/((q-1)^N) at p-precision n; xi = [p]_q."""

    name = "q"

    def __init__(self, p, n, N):
        self.p = p
        self.n = n
        self.B = QBase(p, N)
        self.xi = self.B.xi
        self.xi_tilde = self.B.xi_tilde
        self.mu = self.B.mu

    def phi(self, a):
        return self.B.phi(a)

    def base_mul(self, a, b):
        return self.B.mul(a, b)

    def base_eq(self, a, b):
        return self.B.eq(a, b, p_prec=self.n)

    def _residue_eq(self, a, b, ideal_gen):
        B = self.B
        lat = B.mult_matrix(ideal_gen) + mat_scale(self.p**self.n, identity(B.N))
        diff = [x - y for x, y in zip(a, b)]
        return lattice_contains(lat, diff)

    def residue_eq_xi(self, a, b):
        return self._residue_eq(a, b, self.xi)

    def residue_eq_xi_tilde(self, a, b):
        return self._residue_eq(a, b, self.xi_tilde)

    def one(self):
        return self.B.one

    def xi_pow(self, k):
        return self.B.pow(self.xi, k)


@dataclass
class PerfectoidPresentation:
    """The square of graded rings and its four maps, as verifiable data.

    Elements of A[u,v]/(uv-xi) and A[sigma^{+-1}] are (weight, coefficient)
    pairs: weight k >= 0 means coefficient * u^k (resp. sigma^k), k < 0 means
    coefficient * v^{-k} (resp. sigma^k).
    """

    model: object

    def mul_uv(self, x, y):
        (k1, c1), (k2, c2) = x, y
        c = self.model.base_mul(c1, c2)
        if k1 * k2 < 0:
            t = min(abs(k1), abs(k2))
            c = self.model.base_mul(c, self.model.xi_pow(t))
        return (k1 + k2, c)

    def mul_sigma(self, x, y):
        (k1, c1), (k2, c2) = x, y
        return (k1 + k2, self.model.base_mul(c1, c2))

    def can(self, x):
        """Canonical map: u -> xi*sigma, v -> sigma^{-1}."""
        k, c = x
        if k >= 0:
            return (k, self.model.base_mul(c, self.model.xi_pow(k)))
        return (k, c)

    def phi_map(self, x):
        """phi-linear map: u -> sigma, v -> xi_tilde*sigma^{-1}."""
        k, c = x
        c = self.model.phi(c)
        if k < 0:
            t = self.model.one()
            for _ in range(-k):
                t = self.model.base_mul(t, self.model.xi_tilde)
            c = self.model.base_mul(c, t)
        return (k, c)

    def theta_map(self, x):
        """theta-linear map to R[u]: u -> u, v -> 0; coefficients mod xi."""
        k, c = x
        if k < 0:
            return None  # zero in R[u]
        return (k, c)

    def bottom_map(self, x):
        """R[u] -> R[sigma^{+-1}], u -> sigma; identity on R is coefficient
        phi in coordinates (theta-route vs theta-tilde-route bookkeeping)."""
        if x is None:
            return None
        k, c = x
        return (k, self.model.phi(c))

    def right_map(self, x):
        """A[sigma^{+-1}] -> R[sigma^{+-1}]: reduce coefficients mod xi_tilde."""
        return x

    def _zero_coeff(self):
        one = self.model.one()
        if isinstance(one, tuple):
            return tuple(0 for _ in one)
        return 0

    def check_all(self):
        """The eight generator relations plus base sanity; all must hold."""
        m = self.model
        u = (1, m.one())
        v = (-1, m.one())
        out = {}
        # (1) uv = xi in the top-left ring
        k, c = self.mul_uv(u, v)
        out["uv_equals_xi"] = k == 0 and m.base_eq(c, m.xi)
        # (2),(3) canonical map on generators
        cu = self.can(u)
        cv = self.can(v)
        out["can_u_is_xi_sigma"] = cu[0] == 1 and m.base_eq(cu[1], m.xi)
        out["can_v_is_sigma_inv"] = cv[0] == -1 and m.base_eq(cv[1], m.one())
        # (4) multiplicativity of can: can(u)can(v) = can(xi)
        prod = self.mul_sigma(cu, cv)
        out["can_multiplicative_on_uv"] = prod[0] == 0 and m.base_eq(prod[1], m.xi)
        # (5),(6) phi-linear map on generators
        pu, pv = self.phi_map(u), self.phi_map(v)
        out["phi_u_is_sigma"] = pu == (1, m.one()) or (pu[0] == 1 and m.base_eq(pu[1], m.one()))
        out["phi_v_is_xitilde_sigma_inv"] = pv[0] == -1 and m.base_eq(pv[1], m.xi_tilde)
        # (7) phi-route multiplicativity: phi(u)phi(v) = phi(xi) = xi_tilde
        prod = self.mul_sigma(pu, pv)
        out["phi_multiplicative_on_uv"] = prod[0] == 0 and m.base_eq(prod[1], m.xi_tilde)
        # (8) square commutes on u and v: right(phi(x)) = bottom(theta(x))
        sq_u = self._square_commutes(u)
        sq_v = self._square_commutes(v)
        out["square_commutes_on_u_and_v"] = sq_u and sq_v
        return out

    def _square_commutes(self, x):
        route1 = self.right_map(self.phi_map(x))
        route2 = self.bottom_map(self.theta_map(x))
        m = self.model
        if route2 is None:
            # bottom-left route gives zero; the other coefficient must lie
            # in (xi_tilde) + p^n
            return m.residue_eq_xi_tilde(route1[1], self._zero_coeff())
        return route1[0] == route2[0] and m.residue_eq_xi_tilde(route1[1], route2[1])


def build_perfectoid_square(model):
    """model: FpSquareModel or QSquareModel."""
    return PerfectoidPresentation(model)
