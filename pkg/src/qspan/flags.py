"""
Complete flags in F_q^n (q prime) with the GL(n, q) action.

Subspaces are canonicalized as reduced-echelon bases (tuples of row
vectors), so equality of subspaces and of flags is syntactic; the group
action re-canonicalizes after each matrix multiplication.  GL(n, q) is
realized as a permutation group on the q^n - 1 nonzero vectors.
"""

from __future__ import annotations

from itertools import product as iproduct

from .groups import GSet, PermGroup, group_closure


class UnsupportedFieldError(ValueError):
    """Only prime q is implemented; prime powers need extension fields."""


class FlagCapError(RuntimeError):
    """Flag enumeration would exceed the configured cap."""


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


# -- vectors and subspaces over F_q ----------------------------------------


def vec_add(u, v, q):
    return tuple((a + b) % q for a, b in zip(u, v))


def vec_scale(c, v, q):
    return tuple((c * a) % q for a in v)


def mat_vec_fq(m, v, q):
    return tuple(sum(mi * vi for mi, vi in zip(row, v)) % q for row in m)


def mat_mul_fq(a, b, q):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) % q
                       for j in range(n)) for i in range(n))


def rref_fq(rows, q):
    "Reduced row echelon form over F_q; returns the nonzero rows."
    rows = [list(r) for r in rows]
    n_cols = len(rows[0]) if rows else 0
    pivot_row = 0
    for col in range(n_cols):
        hit = None
        for r in range(pivot_row, len(rows)):
            if rows[r][col] % q:
                hit = r
                break
        if hit is None:
            continue
        rows[pivot_row], rows[hit] = rows[hit], rows[pivot_row]
        inv = pow(rows[pivot_row][col], q - 2, q)
        rows[pivot_row] = [(x * inv) % q for x in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][col] % q:
                c = rows[r][col]
                rows[r] = [(a - c * b) % q for a, b in zip(rows[r], rows[pivot_row])]
        pivot_row += 1
        if pivot_row == len(rows):
            break
    out = [tuple(r) for r in rows[:pivot_row] if any(r)]
    return tuple(out)


def span_canonical(vectors, q):
    "Canonical (reduced echelon) representation of the span."
    vectors = [v for v in vectors if any(x % q for x in v)]
    if not vectors:
        return ()
    return rref_fq(vectors, q)


def subspace_dim(sub) -> int:
    return len(sub)


def subspace_contains(sub, vec, q) -> bool:
    "Reduce vec against the echelon rows; contained iff it reduces to zero."
    v = list(vec)
    for row in sub:
        lead = next(i for i, x in enumerate(row) if x)
        if v[lead]:
            c = v[lead]
            v = [(a - c * b) % q for a, b in zip(v, row)]
    return not any(x % q for x in v)


def subspace_leq(a, b, q) -> bool:
    return all(subspace_contains(b, row, q) for row in a)


def subspace_sum(a, b, q):
    return span_canonical(list(a) + list(b), q)


def subspace_intersection(a, b, q):
    """Meet of two subspaces: kernel vectors (x, y) of the stacked basis
    matrix give x.A = -y.B in the intersection."""
    if not a or not b:
        return ()
    rows = [list(r) for r in a] + [list(r) for r in b]
    ka = len(a)
    k = len(rows)
    n = len(rows[0])
    # nullspace of rows^T . c = 0 over F_q, i.e. combinations summing to zero
    m = [[rows[r][c] for r in range(k)] for c in range(n)]   # n x k
    basis = _nullspace_fq(m, q)
    out = []
    for c in basis:
        v = [0] * n
        for i in range(ka):
            if c[i]:
                v = [(x + c[i] * y) % q for x, y in zip(v, rows[i])]
        if any(v):
            out.append(tuple(v))
    return span_canonical(out, q)


def _nullspace_fq(m, q):
    "Nullspace basis of an (r x c) matrix over F_q."
    rows = [list(r) for r in m]
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    pivots = []
    pr = 0
    for col in range(n_cols):
        hit = None
        for r in range(pr, n_rows):
            if rows[r][col] % q:
                hit = r
                break
        if hit is None:
            continue
        rows[pr], rows[hit] = rows[hit], rows[pr]
        inv = pow(rows[pr][col], q - 2, q)
        rows[pr] = [(x * inv) % q for x in rows[pr]]
        for r in range(n_rows):
            if r != pr and rows[r][col] % q:
                c = rows[r][col]
                rows[r] = [(a - c * b) % q for a, b in zip(rows[r], rows[pr])]
        pivots.append(col)
        pr += 1
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n_cols
        v[f] = 1
        for i, p in enumerate(pivots):
            v[p] = (-rows[i][f]) % q
        basis.append(tuple(v))
    return basis


def all_subspaces_between(lower, upper_dim, q, n, ambient=None):
    """Subspaces of dimension dim(lower)+1 containing `lower` (and contained
    in `ambient` when given)."""
    seen = set()
    out = []
    vectors = ambient if ambient is not None else list(iproduct(range(q), repeat=n))
    for v in vectors:
        if not any(v) or subspace_contains(lower, v, q):
            continue
        sub = span_canonical(list(lower) + [v], q)
        if sub not in seen:
            seen.add(sub)
            out.append(sub)
    return out


def subspace_vectors(sub, q, n):
    "All vectors of the subspace (including zero)."
    k = len(sub)
    out = []
    for coeffs in iproduct(range(q), repeat=k):
        v = [0] * n
        for c, row in zip(coeffs, sub):
            if c:
                v = [(x + c * y) % q for x, y in zip(v, row)]
        out.append(tuple(v))
    return out


# -- GL(n, q) as a permutation group ---------------------------------------


def gl_order(n: int, q: int) -> int:
    total = 1
    for i in range(n):
        total *= q ** n - q ** i
    return total


def gl_generators(n: int, q: int):
    "Adjacent transvections, the n-cycle, and a primitive-root diagonal."
    def ident():
        return [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    gens = []
    for i in range(n - 1):
        m = ident()
        m[i][i + 1] = 1
        gens.append(tuple(tuple(r) for r in m))
    cyc = [[0] * n for _ in range(n)]
    for i in range(n):
        cyc[(i + 1) % n][i] = 1
    gens.append(tuple(tuple(r) for r in cyc))
    if q > 2:
        r = primitive_root(q)
        m = ident()
        m[0][0] = r
        gens.append(tuple(tuple(r2) for r2 in m))
    return gens


def primitive_root(q: int) -> int:
    for r in range(2, q):
        seen = set()
        x = 1
        for _ in range(q - 1):
            x = (x * r) % q
            seen.add(x)
        if len(seen) == q - 1:
            return r
    raise UnsupportedFieldError("no primitive root; q must be prime")


def nonzero_vectors(n: int, q: int):
    return [v for v in iproduct(range(q), repeat=n) if any(v)]


def gl_group(n: int, q: int, cap: int = 10 ** 7) -> PermGroup:
    "GL(n, q) acting on the q^n - 1 nonzero vectors."
    if not is_prime(q):
        raise UnsupportedFieldError("q = %d is not prime" % q)
    vectors = nonzero_vectors(n, q)
    index = {v: i for i, v in enumerate(vectors)}
    perms = []
    for m in gl_generators(n, q):
        perms.append(tuple(index[mat_vec_fq(m, v, q)] for v in vectors))
    group = PermGroup(len(vectors), perms, cap=cap)
    group.enumerate()
    assert group.order == gl_order(n, q), "generators failed to produce GL(n, q)"
    return group


# -- the flag complex --------------------------------------------------------


class FlagComplex:
    """Complete flags 0 c V_1 c .. c V_{n-1} c F_q^n, as a GL(n, q)-set.

    ``flags[i]`` is a tuple of canonical subspaces; ``gset`` carries the
    permutation action of the matrix generators.
    """

    def __init__(self, n: int, q: int, flags, group: PermGroup, gset: GSet,
                 matrix_generators):
        self.n = n
        self.q = q
        self.flags = flags
        self.flag_index = {f: i for i, f in enumerate(flags)}
        self.group = group
        self.gset = gset
        self.matrix_generators = matrix_generators

    @property
    def size(self) -> int:
        return len(self.flags)

    def apply_matrix(self, m, flag):
        "Transform a flag by a matrix and re-canonicalize each subspace."
        return tuple(span_canonical([mat_vec_fq(m, v, self.q) for v in sub], self.q)
                     for sub in flag)

    def __repr__(self):
        return "FlagComplex(n=%d, q=%d, %d flags)" % (self.n, self.q, self.size)


def flag_complex(n: int, q: int, max_flags: int = 100000,
                 group_cap: int = 10 ** 7) -> FlagComplex:
    "Enumerate all complete flags and the GL(n, q) action on them."
    if not is_prime(q):
        raise UnsupportedFieldError("q = %d is not prime" % q)
    if n < 2:
        raise ValueError("need n >= 2")

    flags = []
    vectors = nonzero_vectors(n, q)

    def extend(chain):
        if len(chain) == n - 1:
            flags.append(tuple(chain))
            if len(flags) > max_flags:
                raise FlagCapError("more than %d flags" % max_flags)
            return
        lower = chain[-1] if chain else ()
        for sub in all_subspaces_between(lower, len(chain) + 1, q, n, ambient=vectors):
            chain.append(sub)
            extend(chain)
            chain.pop()

    extend([])
    flags.sort()
    flags = tuple(flags)
    index = {f: i for i, f in enumerate(flags)}

    group = gl_group(n, q, cap=group_cap)
    mats = gl_generators(n, q)
    action = []
    for m in mats:
        row = []
        for f in flags:
            nf = tuple(span_canonical([mat_vec_fq(m, v, q) for v in sub], q)
                       for sub in f)
            row.append(index[nf])
        action.append(row)
    gset = GSet(group, len(flags), action, labels=flags, check=False)
    return FlagComplex(n, q, flags, group, gset, mats)
