"""Pure-Python sparse kernels; the compiled module mirrors these signatures."""


def axpy(y, a, x):
    """In place ``y += a * x`` on sparse dicts, dropping cancelled entries."""
    if not a:
        return
    get = y.get
    for k, c in x.items():
        t = get(k)
        if t is None:
            y[k] = a * c
        else:
            t = t + a * c
            if t:
                y[k] = t
            else:
                del y[k]


def matvec(M, v):
    out = {}
    get = out.get
    for j, c in v.items():
        col = M.get(j)
        if not col:
            continue
        for i, a in col.items():
            t = get(i)
            if t is None:
                out[i] = a * c
            else:
                t = t + a * c
                if t:
                    out[i] = t
                else:
                    del out[i]
    return out


def reduce_by(v, rows, combo, combos):
    """Eliminate pivots of ``rows`` from ``v`` in increasing pivot order.

    Rows are keyed by pivot and only hold indices at or above it, so one
    increasing sweep suffices.  ``combo`` accumulates row provenance.
    """
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
        axpy(v, -c, rows[p])
        if combo is not None:
            for t, a in combos[p].items():
                s = combo.get(t)
                s = c * a if s is None else s + c * a
                if s:
                    combo[t] = s
                else:
                    combo.pop(t, None)
