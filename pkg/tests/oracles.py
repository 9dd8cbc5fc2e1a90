"""Slow, independent reference implementations used to check the library."""

import math
from fractions import Fraction


def pearson_sum(x, y):
    """Two-pass product-moment correlation with exactly rounded sums."""
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = math.fsum((a - mx) ** 2 for a in x)
    syy = math.fsum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def covariance_loops(rows):
    n, d = len(rows), len(rows[0])
    mean = [math.fsum(r[j] for r in rows) / n for j in range(d)]
    return [
        [math.fsum((r[i] - mean[i]) * (r[j] - mean[j]) for r in rows) / (n - 1) for j in range(d)]
        for i in range(d)
    ]


def jacobi_eigen(a, sweeps=100, tol=1e-15):
    """Cyclic Jacobi rotations on a symmetric matrix; returns (values, vectors as columns)."""
    d = len(a)
    a = [row[:] for row in a]
    v = [[float(i == j) for j in range(d)] for i in range(d)]
    for _ in range(sweeps):
        off = math.sqrt(sum(a[i][j] ** 2 for i in range(d) for j in range(d) if i != j))
        if off < tol:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                if abs(a[p][q]) < 1e-300:
                    continue
                theta = (a[q][q] - a[p][p]) / (2 * a[p][q])
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                for k in range(d):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = c * akp - s * akq
                    a[k][q] = s * akp + c * akq
                for k in range(d):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = c * apk - s * aqk
                    a[q][k] = s * apk + c * aqk
                for k in range(d):
                    vkp, vkq = v[k][p], v[k][q]
                    v[k][p] = c * vkp - s * vkq
                    v[k][q] = s * vkp + c * vkq
    return [a[i][i] for i in range(d)], v


def polygon_area(radii):
    """Shoelace area of the polygon with vertices on equally spaced spokes."""
    n = len(radii)
    pts = [(r * math.cos(2 * math.pi * i / n), r * math.sin(2 * math.pi * i / n)) for i, r in enumerate(radii)]
    s = 0.0
    for i in range(n):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return abs(s) / 2


def joint_fractions(thumb):
    """Exact joint shares of the combined angle from the ratio model."""
    if thumb:
        mcp = Fraction(1)
        parts = (mcp, mcp / 2)
    else:
        mcp = Fraction(1)
        parts = (mcp, Fraction(3, 4) * mcp, Fraction(2, 3) * mcp)
    total = sum(parts)
    return tuple(p / total for p in parts)


def entropy(p):
    return -math.fsum(q * math.log(q) for q in p if q > 0)


def central_difference(f, y, h=1e-5):
    """Numerical gradient of scalar f at the flat list/array y (copied)."""
    import numpy as np

    y = np.array(y, dtype=float)
    g = np.zeros_like(y)
    it = np.nditer(y, flags=["multi_index"])
    for _ in it:
        idx = it.multi_index
        old = y[idx]
        y[idx] = old + h
        fp = f(y)
        y[idx] = old - h
        fm = f(y)
        y[idx] = old
        g[idx] = (fp - fm) / (2 * h)
    return g
