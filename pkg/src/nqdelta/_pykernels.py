"""Pure-Python kernels, generic over the scalar type.

These run for exact (Fraction) inputs always and for float inputs when the
compiled extension is unavailable.  Row ``a`` and the weight quantities
``u_k = Q_k (1/q_{k+1} - 1/q_k)``, ``v_k = Q_k / q_k`` are plain lists.
"""


def _prefix(a, hi):
    out = []
    total = a[0] - a[0]
    for j in range(hi + 1):
        total = total + a[j]
        out.append(total)
    return out


def printed_profile(a, u, v, m_lo, m_hi):
    """Section values of the dual-norm formula exactly as it is printed.

    ``f(m) = sum_{k<m} |u_k| |P_m - P_k| + |v_m a_m|`` with ``P`` the prefix
    sums of ``a``, for ``m_lo <= m <= m_hi``.
    """
    P = _prefix(a, m_hi)
    au = [abs(x) for x in u[:m_hi]]
    out = []
    for m in range(m_lo, m_hi + 1):
        pm = P[m]
        s = abs(v[m] * a[m])
        for k in range(m):
            s += au[k] * abs(pm - P[k])
        out.append(s)
    return out


def derived_section(a, u, v, m):
    """``sum_k |c_{mk}|`` for the C-matrix row that makes the pairing exact."""
    P = _prefix(a, m)
    pm = P[m]
    s = abs(v[m] * a[m])
    for k in range(m):
        s += abs(u[k] * (pm - P[k]) - v[k] * a[k])
    return s


def derived_profile(a, u, v, m_lo, m_hi):
    P = _prefix(a, m_hi)
    w = [u[k] * P[k] + v[k] * a[k] for k in range(m_hi)]
    out = []
    for m in range(m_lo, m_hi + 1):
        pm = P[m]
        s = abs(v[m] * a[m])
        for k in range(m):
            s += abs(u[k] * pm - w[k])
        out.append(s)
    return out


def forward_substitution(rows):
    """Invert a lower-triangular matrix given as ragged rows ``rows[n][0..n]``.

    Returns ragged rows of the inverse.  Raises ``ZeroDivisionError`` whose
    first argument is the offending diagonal index.
    """
    n_rows = len(rows)
    inv = []
    for n in range(n_rows):
        row = rows[n]
        d = row[n]
        if d == 0:
            raise ZeroDivisionError(n)
        out = [None] * (n + 1)
        out[n] = 1 / d
        nz = [j for j in range(n) if row[j] != 0]
        for k in range(n):
            s = 0
            for j in nz:
                if j >= k:
                    s = s + row[j] * inv[j][k]
            out[k] = -s / d
        inv.append(out)
    return inv
