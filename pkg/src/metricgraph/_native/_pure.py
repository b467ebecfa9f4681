"""Pure numpy fallback kernels.

Same arithmetic as the compiled versions: plain sums and differences of
float64 entries, no reassociation, so the two backends agree to the last
bit on identical inputs.
"""

from __future__ import annotations

import numpy as np


def four_point_delta(D) -> float:
    """Four-point hyperbolicity constant of a finite pseudometric.

    Max over quadruples of (largest pair-sum - second largest)/2. Computed
    over all unordered pairs of point-pairs; quadruples with repeated points
    contribute nothing positive.
    """
    D = np.ascontiguousarray(D, dtype=np.float64)
    n = D.shape[0]
    if n < 4:
        return 0.0
    iu, ju = np.triu_indices(n, k=1)
    s = D[iu, ju]
    m = len(iu)
    best = 0.0
    for a in range(m - 1):
        i, j = int(iu[a]), int(ju[a])
        kk, ll = iu[a + 1:], ju[a + 1:]
        sums = s[a] + s[a + 1:]
        c1 = D[i, kk] + D[j, ll]
        c2 = D[i, ll] + D[j, kk]
        gap = sums - np.maximum(c1, c2)
        g = float(gap.max(initial=0.0))
        if g > best:
            best = g
    return best / 2.0


def relation_distortion(DX, DY, pairs) -> float:
    """Max |d_X(x,x') - d_Y(y,y')| over all pairs of related pairs."""
    DX = np.ascontiguousarray(DX, dtype=np.float64)
    DY = np.ascontiguousarray(DY, dtype=np.float64)
    P = np.ascontiguousarray(pairs, dtype=np.int64)
    if P.size == 0:
        return 0.0
    px, py = P[:, 0], P[:, 1]
    A = DX[np.ix_(px, px)]
    B = DY[np.ix_(py, py)]
    return float(np.abs(A - B).max())
