"""Pure numpy versions of the compiled kernels, same signatures and results
to rounding."""
import numpy as np

_PIVMIN = 1e-300
_SECTIONS = 63


def _counts(diag, off2, lams):
    lams = np.asarray(lams, dtype=float)
    d = diag[0] - lams
    d = np.where(np.abs(d) < _PIVMIN, -_PIVMIN, d)
    neg = (d < 0).astype(np.int64)
    # a replaced pivot may overflow the next quotient to -inf; the count is still right
    with np.errstate(over="ignore"):
        for i in range(1, diag.shape[0]):
            d = diag[i] - lams - off2[i - 1] / d
            d = np.where(np.abs(d) < _PIVMIN, -_PIVMIN, d)
            neg += d < 0
    return neg


def sturm_count(diag, off2, lam):
    return int(_counts(np.asarray(diag, float), np.asarray(off2, float), [lam])[0])


def lowest_eigenvalues(diag, off2, n_levels, lo, hi, rtol, atol):
    """Multisection: every sweep evaluates the Sturm count at 63 interior
    points of every level's bracket at once, so the O(N) recurrence runs
    about 10 times instead of 60 per level."""
    diag = np.asarray(diag, float)
    off2 = np.asarray(off2, float)
    a = np.full(n_levels, float(lo))
    b = np.full(n_levels, float(hi))
    j = np.arange(n_levels)
    frac = np.arange(1, _SECTIONS + 1) / (_SECTIONS + 1)
    while True:
        width = b - a
        active = width > rtol * (np.abs(a) + np.abs(b)) + atol
        if not np.any(active):
            break
        pts = a[active, None] + width[active, None] * frac[None, :]
        counts = _counts(diag, off2, pts.ravel()).reshape(pts.shape)
        jj = j[active, None]
        below = counts <= jj
        # last point with count <= j becomes the new lower end
        n_below = below.sum(axis=1)
        rows = np.nonzero(active)[0]
        new_a = np.where(n_below > 0, pts[np.arange(len(rows)), np.maximum(n_below - 1, 0)], a[rows])
        new_b = np.where(n_below < _SECTIONS, pts[np.arange(len(rows)), np.minimum(n_below, _SECTIONS - 1)], b[rows])
        stalled = (new_a == a[rows]) & (new_b == b[rows])
        a[rows] = new_a
        b[rows] = new_b
        if np.all(stalled):
            break
    return 0.5 * (a + b)


def oscillating_sum(frac, damp, k_max, cutoff):
    frac = np.asarray(frac, float)
    damp = np.asarray(damp, float)
    out = np.zeros_like(frac)
    k0 = 1
    block = 256
    while k0 <= k_max:
        k = np.arange(k0, min(k0 + block, k_max + 1), dtype=float)
        g = np.exp(-0.5 * (damp[:, None] * k[None, :]) ** 2)
        g[g < cutoff] = 0.0
        if not np.any(g):
            break
        out += np.sum(np.cos(2.0 * np.pi * frac[:, None] * k[None, :]) * g, axis=1)
        k0 += block
    return out
