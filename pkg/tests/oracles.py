"""Independent reference implementations used as test oracles.

Everything here is deliberately written the slow, obvious way (plain Python
loops, math.erf, float interval arithmetic) so it shares no code path with
the package under test.
"""

import math


def brute_znorm(values, epsilon_std=1e-8):
    """Center/reduce with population std via plain Python arithmetic."""
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n
    std = math.sqrt(var)
    if std <= epsilon_std:
        return [0.0] * n
    return [(v - mean) / std for v in values]


def brute_paa(values, w):
    """Segment means for the divisible case, one exactly-summed segment at a time."""
    n = len(values)
    assert n % w == 0
    size = n // w
    return [math.fsum(values[i * size : (i + 1) * size]) / size for i in range(w)]


def frac_paa(values, w):
    """Fractional-weight segment means computed with float interval overlap.

    Sample j occupies [j, j+1); frame i occupies [i*n/w, (i+1)*n/w). Each
    coefficient is the overlap-weighted mean over its frame.
    """
    n = len(values)
    width = n / w
    coeffs = []
    for i in range(w):
        lo, hi = i * width, (i + 1) * width
        terms = []
        mass = 0.0
        for j in range(n):
            overlap = min(hi, j + 1.0) - max(lo, float(j))
            if overlap > 0:
                terms.append(overlap * values[j])
                mass += overlap
        coeffs.append(math.fsum(terms) / mass)
    return coeffs


def frac_reconstruct(coeffs, n):
    """Per-sample blend of frame coefficients, weighted by interval overlap."""
    w = len(coeffs)
    width = n / w
    out = []
    for j in range(n):
        acc = 0.0
        for i in range(w):
            lo, hi = i * width, (i + 1) * width
            overlap = min(hi, j + 1.0) - max(lo, float(j))
            if overlap > 0:
                acc += overlap * coeffs[i]
        out.append(acc)  # overlaps for one sample always sum to 1
    return out


def normal_cdf(x):
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def normal_quantile(p):
    """Invert the standard normal CDF by bisection on erf; |error| < 1e-12."""
    assert 0.0 < p < 1.0
    lo, hi = -40.0, 40.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if normal_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def brute_breakpoints(a):
    return [normal_quantile(k / a) for k in range(1, a)]


def brute_letters(coeffs, a):
    """Map coefficients to letters by scanning the breakpoint list."""
    betas = brute_breakpoints(a)
    word = ""
    for v in coeffs:
        idx = 0
        for b in betas:
            if v >= b:
                idx += 1
        word += chr(ord("a") + idx)
    return word


def step_sax(values, w, a, epsilon_std=1e-8):
    """End-to-end SAX oracle: znorm, fractional PAA, breakpoint scan."""
    return brute_letters(frac_paa(brute_znorm(values, epsilon_std), w), a)


def brute_cell(r, c, a):
    if abs(r - c) <= 1:
        return 0.0
    betas = brute_breakpoints(a)
    return betas[max(r, c) - 1] - betas[min(r, c)]


def brute_mindist(word_u, word_v, n, a):
    w = len(word_u)
    assert len(word_v) == w
    acc = 0.0
    for cu, cv in zip(word_u, word_v):
        acc += brute_cell(ord(cu) - ord("a"), ord(cv) - ord("a"), a) ** 2
    return math.sqrt(n / w) * math.sqrt(acc)


def euclid(x, y):
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(x, y)))


def interp_fill(values, missing):
    """Linear interpolation over interior gaps, constant at the ends."""
    n = len(values)
    good = [j for j in range(n) if not missing[j]]
    assert good, "cannot fill an all-missing series"
    out = list(values)
    for j in range(n):
        if not missing[j]:
            continue
        left = max((g for g in good if g < j), default=None)
        right = min((g for g in good if g > j), default=None)
        if left is None:
            out[j] = values[right]
        elif right is None:
            out[j] = values[left]
        else:
            t = (j - left) / (right - left)
            out[j] = values[left] + t * (values[right] - values[left])
    return out


# Classic alphabet-size -> breakpoint lookup table as printed in the SAX
# literature (two decimals); used only to sanity-check the numeric quantiles.
LITERATURE_BREAKPOINTS = {
    2: [0.0],
    3: [-0.43, 0.43],
    4: [-0.67, 0.0, 0.67],
    5: [-0.84, -0.25, 0.25, 0.84],
    6: [-0.97, -0.43, 0.0, 0.43, 0.97],
    7: [-1.07, -0.57, -0.18, 0.18, 0.57, 1.07],
    8: [-1.15, -0.67, -0.32, 0.0, 0.32, 0.67, 1.15],
    9: [-1.22, -0.76, -0.43, -0.14, 0.14, 0.43, 0.76, 1.22],
    10: [-1.28, -0.84, -0.52, -0.25, 0.0, 0.25, 0.52, 0.84, 1.28],
}
