# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled successor kernels; see _pykernels for the contract."""

IMPLEMENTATION = "c"


cdef inline void _fill_min_path(const unsigned char[:, :] rows, Py_ssize_t x,
                                Py_ssize_t y, unsigned char[::1] steps,
                                Py_ssize_t upto) noexcept nogil:
    cdef Py_ssize_t pos
    for pos in range(upto - 1, -1, -1):
        if x == 0:
            steps[pos] = 1
            y -= 1
        elif y == 0:
            steps[pos] = 0
            x -= 1
        elif rows[x, y] == 1:
            steps[pos] = 0
            x -= 1
        else:
            steps[pos] = 1
            y -= 1


cdef inline Py_ssize_t _successor_inplace(const unsigned char[:, :] rows,
                                          unsigned char[::1] steps,
                                          Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, x = 0, y = 0
    cdef unsigned char s
    for i in range(n):
        s = steps[i]
        if s == 0:
            x += 1
        else:
            y += 1
        if x > 0 and y > 0 and s != rows[x, y]:
            steps[i] = 1 - s
            if s == 1:
                _fill_min_path(rows, x - 1, y, steps, i)
            else:
                _fill_min_path(rows, x, y - 1, steps, i)
            return i
    return -1


def min_path(const unsigned char[:, :] bits, Py_ssize_t x, Py_ssize_t y):
    cdef bytearray out = bytearray(x + y)
    cdef unsigned char[::1] steps = out
    _fill_min_path(bits, x, y, steps, x + y)
    return out


def advance_path(const unsigned char[:, :] bits, steps, Py_ssize_t count):
    cdef unsigned char[::1] view = steps
    cdef Py_ssize_t n = view.shape[0]
    cdef Py_ssize_t done = 0
    with nogil:
        while done < count:
            if _successor_inplace(bits, view, n) < 0:
                break
            done += 1
    return done


def column_coding(const unsigned char[:, :] bits, Py_ssize_t x, Py_ssize_t y,
                  Py_ssize_t k):
    if k > 8:
        raise ValueError("k <= 8 for byte-coded symbols")
    cdef Py_ssize_t n = x + y
    cdef Py_ssize_t kk = k if k < n else n
    cdef bytearray path = bytearray(n if n else 1)
    cdef unsigned char[::1] steps = path
    _fill_min_path(bits, x, y, steps, n)
    cdef bytearray out = bytearray()
    cdef Py_ssize_t t
    cdef unsigned int sym
    while True:
        sym = 0
        for t in range(kk):
            sym |= steps[t] << t
        out.append(sym)
        if _successor_inplace(bits, steps, n) < 0:
            return bytes(out)
