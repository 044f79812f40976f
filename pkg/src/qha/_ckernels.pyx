# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse kernels; same signatures and semantics as ``_kernels_py``."""


cpdef void axpy(dict y, object a, dict x):
    cdef object k, c, t
    if not a:
        return
    for k, c in x.items():
        t = y.get(k)
        if t is None:
            y[k] = a * c
        else:
            t = t + a * c
            if t:
                y[k] = t
            else:
                del y[k]


cpdef dict matvec(dict M, dict v):
    cdef dict out = {}
    cdef dict col
    cdef object j, c, i, a, t
    for j, c in v.items():
        col = M.get(j)
        if not col:
            continue
        for i, a in col.items():
            t = out.get(i)
            if t is None:
                out[i] = a * c
            else:
                t = t + a * c
                if t:
                    out[i] = t
                else:
                    del out[i]
    return out


cpdef void reduce_by(dict v, dict rows, object combo, object combos):
    cdef object p, k, c, t, a, s
    cdef dict cmb
    if not rows or not v:
        return
    while True:
        p = None
        for k in v:
            if k in rows and (p is None or k < p):
                p = k
        if p is None:
            return
        c = v[p]
        axpy(v, -c, <dict>rows[p])
        if combo is not None:
            cmb = <dict>combo
            for t, a in (<dict>combos[p]).items():
                s = cmb.get(t)
                s = c * a if s is None else s + c * a
                if s:
                    cmb[t] = s
                else:
                    cmb.pop(t, None)
