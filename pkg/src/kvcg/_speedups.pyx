# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""C implementations of the hot kernels (winner DP, fraction-free simplex).

Mirrors kvcg._pure exactly: same pivoting rule, same tie-breaks, bit-identical
results. Arithmetic runs in 64-bit integers with 128-bit intermediates; any
pivot result that leaves the 64-bit range raises OverflowError and the caller
falls back to the pure-Python kernels.
"""
from cpython.mem cimport PyMem_Free, PyMem_Malloc

cdef extern from *:
    ctypedef long long i128 "__int128"

ctypedef long long i64

cdef i64 I64_MAX = (<i64>1 << 62) + ((<i64>1 << 62) - 1)

LP_OPTIMAL = 0
LP_INFEASIBLE = 1
LP_UNBOUNDED = 2


cdef i64* _alloc(Py_ssize_t count) except NULL:
    cdef i64* ptr = <i64*> PyMem_Malloc(count * sizeof(i64))
    if ptr == NULL:
        raise MemoryError()
    return ptr


def wd_best(values, ground):
    """Canonical best partition of the goods in `ground`; see kvcg._pure."""
    cdef Py_ssize_t n = len(values)
    cdef Py_ssize_t size = len(values[0]) if n else 1
    cdef i64 g = ground
    cdef i64* vals = _alloc(n * size)
    cdef i64* g_w = _alloc((n + 1) * size)
    cdef i64* g_c = _alloc((n + 1) * size)
    cdef Py_ssize_t k, idx
    cdef i64 s, t, w, c, best_w, best_c, avail, chosen, want_w, want_c
    try:
        for k in range(n):
            row = values[k]
            for idx in range(size):
                vals[k * size + idx] = row[idx]
        for idx in range(size):
            g_w[n * size + idx] = 0
            g_c[n * size + idx] = 0
        for k in range(n - 1, -1, -1):
            s = g
            while True:
                best_w = -1
                best_c = 0
                t = s
                while True:
                    w = vals[k * size + t] + g_w[(k + 1) * size + (s ^ t)]
                    if w >= best_w:
                        c = _popcount(t) + g_c[(k + 1) * size + (s ^ t)]
                        if w > best_w or c < best_c:
                            best_w = w
                            best_c = c
                    if t == 0:
                        break
                    t = (t - 1) & s
                g_w[k * size + s] = best_w
                g_c[k * size + s] = best_c
                if s == 0:
                    break
                s = (s - 1) & g

        masks = []
        avail = g
        for k in range(n):
            want_w = g_w[k * size + avail]
            want_c = g_c[k * size + avail]
            chosen = avail
            t = avail
            while True:
                if (vals[k * size + t] + g_w[(k + 1) * size + (avail ^ t)] == want_w
                        and _popcount(t) + g_c[(k + 1) * size + (avail ^ t)] == want_c):
                    chosen = t
                if t == 0:
                    break
                t = (t - 1) & avail
            masks.append(chosen)
            avail ^= chosen
        return g_w[0 * size + g], g_c[0 * size + g], masks
    finally:
        PyMem_Free(vals)
        PyMem_Free(g_w)
        PyMem_Free(g_c)


cdef inline i64 _popcount(i64 x):
    cdef i64 count = 0
    while x:
        x &= x - 1
        count += 1
    return count


cdef struct LP:
    i64* tab        # (n_rows) x n_cols, row-major
    i64* z          # objective row, n_cols
    i64* basis      # basic variable per row
    i64 den
    Py_ssize_t n_rows
    Py_ssize_t n_cols
    Py_ssize_t n_vars
    Py_ssize_t rhs
    Py_ssize_t art0


cdef inline i64 _checked_update(i64 a, i64 p, i64 f, i64 q, i64 d) except? -9999:
    # (a*p - f*q) / d with 128-bit intermediate; exact by the fraction-free
    # pivot invariant, checked anyway.
    cdef i128 t = <i128> a * p - <i128> f * q
    cdef i128 quo = t / d
    if quo * d != t:
        raise ArithmeticError("fraction-free pivot division was not exact")
    if quo > <i128> I64_MAX or quo < -(<i128> I64_MAX):
        raise OverflowError("simplex tableau entry exceeds 64-bit range")
    return <i64> quo


cdef int _pivot(LP* lp, Py_ssize_t r, Py_ssize_t col) except -1:
    cdef i64 d = lp.den
    cdef i64* prow = lp.tab + r * lp.n_cols
    cdef i64* rptr
    cdef i64 p = prow[col]
    cdef i64 f
    cdef Py_ssize_t i, j
    if p <= 0:
        raise ArithmeticError("pivot element must be positive")
    for i in range(lp.n_rows):
        if i == r:
            continue
        rptr = lp.tab + i * lp.n_cols
        f = rptr[col]
        for j in range(lp.n_cols):
            rptr[j] = _checked_update(rptr[j], p, f, prow[j], d)
    f = lp.z[col]
    for j in range(lp.n_cols):
        lp.z[j] = _checked_update(lp.z[j], p, f, prow[j], d)
    lp.den = p
    lp.basis[r] = col
    return 0


cdef int _bland(LP* lp, Py_ssize_t n_enterable, long pivot_cap) except -1:
    cdef Py_ssize_t enter, leave, i, j
    cdef i64 a, num, best_num, best_den
    cdef long step
    for step in range(pivot_cap):
        enter = -1
        for j in range(n_enterable):
            if lp.z[j] > 0:
                enter = j
                break
        if enter < 0:
            return LP_OPTIMAL
        leave = -1
        best_num = 0
        best_den = 0
        for i in range(lp.n_rows):
            a = lp.tab[i * lp.n_cols + enter]
            if a <= 0:
                continue
            num = lp.tab[i * lp.n_cols + lp.rhs]
            if leave < 0:
                leave = i; best_num = num; best_den = a
                continue
            # compare num/a vs best_num/best_den via 128-bit cross products
            if (<i128> num * best_den < <i128> best_num * a
                    or (<i128> num * best_den == <i128> best_num * a
                        and lp.basis[i] < lp.basis[leave])):
                leave = i; best_num = num; best_den = a
        if leave < 0:
            return LP_UNBOUNDED
        _pivot(lp, leave, enter)
    raise RuntimeError("pivot cap exceeded; possible cycling bug")


def lp_solve(c, rows, b, long pivot_cap=200000):
    """Maximize c.x s.t. rows.x <= b, x >= 0 (ints). Returns
    (status, nums, den): nums = [x_0 .. x_{nvars-1}, objective], all over den.
    """
    cdef Py_ssize_t n_vars = len(c)
    cdef Py_ssize_t n_rows = len(rows)
    cdef Py_ssize_t n_cols = n_vars + 2 * n_rows + 1
    cdef LP lp
    lp.n_rows = n_rows
    lp.n_cols = n_cols
    lp.n_vars = n_vars
    lp.rhs = n_cols - 1
    lp.art0 = n_vars + n_rows
    lp.den = 1
    lp.tab = _alloc(n_rows * n_cols)
    lp.z = _alloc(n_cols)
    lp.basis = _alloc(n_rows if n_rows else 1)
    cdef i64* cvec = _alloc(n_vars if n_vars else 1)
    cdef Py_ssize_t i, j, base
    cdef i64 flip, bi, acc
    cdef bint any_art = 0
    cdef int status
    try:
        for j in range(n_vars):
            cvec[j] = c[j]
        for i in range(n_rows):
            bi = b[i]
            flip = -1 if bi < 0 else 1
            row_obj = rows[i]
            base = i * n_cols
            for j in range(n_cols):
                lp.tab[base + j] = 0
            for j in range(n_vars):
                lp.tab[base + j] = flip * <i64> row_obj[j]
            lp.tab[base + n_vars + i] = flip
            lp.tab[base + lp.rhs] = flip * bi
            if flip < 0:
                lp.tab[base + lp.art0 + i] = 1
                lp.basis[i] = lp.art0 + i
                any_art = 1
            else:
                lp.basis[i] = n_vars + i

        if any_art:
            # Phase I: maximize -(sum artificials), priced out.
            for j in range(n_cols):
                acc = 0
                for i in range(n_rows):
                    if lp.basis[i] >= lp.art0:
                        acc += lp.tab[i * n_cols + j]
                lp.z[j] = acc
            for i in range(n_rows):
                if lp.basis[i] >= lp.art0:
                    lp.z[lp.basis[i]] = 0
            status = _bland(&lp, n_cols - 1, pivot_cap)
            if status != LP_OPTIMAL:
                raise RuntimeError("phase I cannot be unbounded")
            if lp.z[lp.rhs] != 0:
                return LP_INFEASIBLE, [], 1
            _evict_artificials(&lp)

        # Phase II: real objective, artificial columns banned from entering.
        for j in range(n_cols):
            acc = (<i64> cvec[j]) * lp.den if j < n_vars else 0
            for i in range(n_rows):
                if lp.basis[i] < n_vars:
                    acc -= cvec[lp.basis[i]] * lp.tab[i * n_cols + j]
            lp.z[j] = acc
        acc = 0
        for i in range(n_rows):
            if lp.basis[i] < n_vars:
                acc -= cvec[lp.basis[i]] * lp.tab[i * n_cols + lp.rhs]
        lp.z[lp.rhs] = acc
        status = _bland(&lp, lp.art0, pivot_cap)
        if status == LP_UNBOUNDED:
            return LP_UNBOUNDED, [], 1

        nums = [0] * (n_vars + 1)
        for i in range(n_rows):
            if lp.basis[i] < n_vars:
                nums[lp.basis[i]] = lp.tab[i * n_cols + lp.rhs]
        nums[n_vars] = -lp.z[lp.rhs]
        return LP_OPTIMAL, nums, lp.den
    finally:
        PyMem_Free(lp.tab)
        PyMem_Free(lp.z)
        PyMem_Free(lp.basis)
        PyMem_Free(cvec)


cdef int _evict_artificials(LP* lp) except -1:
    cdef Py_ssize_t i, j, col
    for i in range(lp.n_rows):
        if lp.basis[i] < lp.art0:
            continue
        col = -1
        for j in range(lp.art0):
            if lp.tab[i * lp.n_cols + j] != 0:
                col = j
                break
        if col < 0:
            continue  # inert 0 = 0 row
        if lp.tab[i * lp.n_cols + col] < 0:
            for j in range(lp.n_cols):
                lp.tab[i * lp.n_cols + j] = -lp.tab[i * lp.n_cols + j]
        _pivot(lp, i, col)
    return 0
