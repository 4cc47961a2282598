# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: pairwise Zadeh combination and exhaustive metric
enumeration.  Mirrors pure.py bit for bit; see that module for the contract.
"""

from libc.stdlib cimport calloc, free, malloc


cdef union DBits:
    double d
    unsigned long long u


cdef inline double _op(int code, double u, double w) noexcept nogil:
    if code == 0:
        return u if u < w else w
    elif code == 1:
        return u if u > w else w
    elif code == 2:
        return u + w
    elif code == 3:
        return u - w
    return u * w


# --- open-addressing hash map from double keys to running-max double values

cdef struct MaxMap:
    double* keys
    double* vals
    unsigned char* used
    size_t cap      # power of two
    size_t size


cdef inline size_t _slot(double key, size_t mask) noexcept nogil:
    cdef DBits b
    b.d = key
    cdef unsigned long long z = b.u + 0x9E3779B97F4A7C15ULL
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return <size_t>((z ^ (z >> 31)) & mask)


cdef int _map_init(MaxMap* m, size_t cap) noexcept nogil:
    m.keys = <double*>malloc(cap * sizeof(double))
    m.vals = <double*>malloc(cap * sizeof(double))
    m.used = <unsigned char*>calloc(cap, 1)
    m.cap = cap
    m.size = 0
    if m.keys == NULL or m.vals == NULL or m.used == NULL:
        _map_free(m)
        return -1
    return 0


cdef void _map_free(MaxMap* m) noexcept nogil:
    free(m.keys)
    free(m.vals)
    free(m.used)
    m.keys = NULL
    m.vals = NULL
    m.used = NULL


cdef int _map_grow(MaxMap* m) noexcept nogil:
    cdef MaxMap bigger
    cdef size_t i, j, mask
    if _map_init(&bigger, m.cap * 2) != 0:
        return -1
    mask = bigger.cap - 1
    for i in range(m.cap):
        if m.used[i]:
            j = _slot(m.keys[i], mask)
            while bigger.used[j]:
                j = (j + 1) & mask
            bigger.used[j] = 1
            bigger.keys[j] = m.keys[i]
            bigger.vals[j] = m.vals[i]
    bigger.size = m.size
    _map_free(m)
    m[0] = bigger
    return 0


cdef int _map_put_max(MaxMap* m, double key, double val) noexcept nogil:
    cdef size_t mask = m.cap - 1
    cdef size_t j = _slot(key, mask)
    while m.used[j]:
        if m.keys[j] == key:
            if val > m.vals[j]:
                m.vals[j] = val
            return 0
        j = (j + 1) & mask
    m.used[j] = 1
    m.keys[j] = key
    m.vals[j] = val
    m.size += 1
    if m.size * 10 >= m.cap * 7:
        return _map_grow(m)
    return 0


cdef _map_extract(MaxMap* m):
    items = []
    cdef size_t i
    for i in range(m.cap):
        if m.used[i]:
            items.append((m.keys[i], m.vals[i]))
    items.sort()
    return [k for k, _ in items], [v for _, v in items]


def zadeh_pairs(int op, xv, xd, yv, yd):
    cdef Py_ssize_t n = len(xv), mlen = len(yv)
    cdef double* axv = <double*>malloc(n * sizeof(double))
    cdef double* axd = <double*>malloc(n * sizeof(double))
    cdef double* ayv = <double*>malloc(mlen * sizeof(double))
    cdef double* ayd = <double*>malloc(mlen * sizeof(double))
    cdef MaxMap m
    cdef Py_ssize_t i, j
    cdef double z, d
    cdef int status = 0
    if axv == NULL or axd == NULL or ayv == NULL or ayd == NULL:
        free(axv); free(axd); free(ayv); free(ayd)
        raise MemoryError()
    for i in range(n):
        axv[i] = xv[i]
        axd[i] = xd[i]
    for j in range(mlen):
        ayv[j] = yv[j]
        ayd[j] = yd[j]
    if _map_init(&m, 64) != 0:
        free(axv); free(axd); free(ayv); free(ayd)
        raise MemoryError()
    with nogil:
        for i in range(n):
            for j in range(mlen):
                z = _op(op, axv[i], ayv[j]) + 0.0
                d = axd[i] if axd[i] < ayd[j] else ayd[j]
                status = _map_put_max(&m, z, d)
                if status != 0:
                    break
            if status != 0:
                break
    free(axv); free(axd); free(ayv); free(ayd)
    if status != 0:
        _map_free(&m)
        raise MemoryError()
    result = _map_extract(&m)
    _map_free(&m)
    return result


def oracle_accumulate(int or_op, int and_op, supp_values, supp_degrees, attacks):
    cdef Py_ssize_t n_bas = len(supp_values)
    cdef Py_ssize_t n_attacks = len(attacks)
    cdef Py_ssize_t total_vals = 0, total_members = 0
    cdef Py_ssize_t b, i, a, k
    for b in range(n_bas):
        total_vals += len(supp_values[b])
    for a in range(n_attacks):
        total_members += len(attacks[a])

    cdef double* values = <double*>malloc(total_vals * sizeof(double))
    cdef double* degrees = <double*>malloc(total_vals * sizeof(double))
    cdef Py_ssize_t* supp_off = <Py_ssize_t*>malloc((n_bas + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t* sizes = <Py_ssize_t*>malloc(n_bas * sizeof(Py_ssize_t))
    cdef Py_ssize_t* idx = <Py_ssize_t*>calloc(n_bas, sizeof(Py_ssize_t))
    cdef Py_ssize_t* members = <Py_ssize_t*>malloc(total_members * sizeof(Py_ssize_t))
    cdef Py_ssize_t* att_off = <Py_ssize_t*>malloc((n_attacks + 1) * sizeof(Py_ssize_t))
    if (values == NULL or degrees == NULL or supp_off == NULL or sizes == NULL
            or idx == NULL or members == NULL or att_off == NULL):
        free(values); free(degrees); free(supp_off); free(sizes)
        free(idx); free(members); free(att_off)
        raise MemoryError()

    cdef Py_ssize_t pos = 0
    supp_off[0] = 0
    for b in range(n_bas):
        vs = supp_values[b]
        ds = supp_degrees[b]
        sizes[b] = len(vs)
        for i in range(sizes[b]):
            values[pos] = vs[i]
            degrees[pos] = ds[i]
            pos += 1
        supp_off[b + 1] = pos
    pos = 0
    att_off[0] = 0
    for a in range(n_attacks):
        ms = attacks[a]
        for i in range(len(ms)):
            members[pos] = ms[i]
            pos += 1
        att_off[a + 1] = pos

    cdef MaxMap m
    if _map_init(&m, 64) != 0:
        free(values); free(degrees); free(supp_off); free(sizes)
        free(idx); free(members); free(att_off)
        raise MemoryError()

    cdef double deg, metric, acc, d, v
    cdef Py_ssize_t mb
    cdef int status = 0
    cdef unsigned long long count = 0
    cdef bint done = False
    with nogil:
        while not done:
            count += 1
            deg = 1.0
            for b in range(n_bas):
                d = degrees[supp_off[b] + idx[b]]
                if d < deg:
                    deg = d
            metric = 0.0
            for a in range(n_attacks):
                mb = members[att_off[a]]
                acc = values[supp_off[mb] + idx[mb]]
                for k in range(att_off[a] + 1, att_off[a + 1]):
                    mb = members[k]
                    acc = _op(and_op, acc, values[supp_off[mb] + idx[mb]])
                if a == 0:
                    metric = acc
                else:
                    metric = _op(or_op, metric, acc)
            status = _map_put_max(&m, metric + 0.0, deg)
            if status != 0:
                break
            b = n_bas - 1
            while b >= 0:
                idx[b] += 1
                if idx[b] < sizes[b]:
                    break
                idx[b] = 0
                b -= 1
            if b < 0:
                done = True

    free(values); free(degrees); free(supp_off); free(sizes)
    free(idx); free(members); free(att_off)
    if status != 0:
        _map_free(&m)
        raise MemoryError()
    out_values, out_degrees = _map_extract(&m)
    _map_free(&m)
    return out_values, out_degrees, count
