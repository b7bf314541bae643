"""Brute-force reference computations, deliberately naive and independent of the package internals."""

import math

import numpy as np


def leaf_values(tree):
    """Leaf values by walking every root-to-leaf chain in plain Python."""
    n = tree.depth
    out = []
    for leaf in range(2**n):
        v = 1.0
        for k in range(n):
            j = leaf >> (n - k)
            s = tree.splits[2**k - 1 + j]
            right = (leaf >> (n - k - 1)) & 1
            v *= 2 * (1 - s) if right else 2 * s
        out.append(v)
    return np.array(out)


def intervals(depth):
    for k in range(depth + 1):
        for j in range(2**k):
            yield k, j


def block(values, depth, k, j):
    w = 2 ** (depth - k)
    return values[j * w : (j + 1) * w]


def rhp_brute(tree, p):
    v = leaf_values(tree)
    return max(
        np.mean(block(v, tree.depth, k, j) ** p) ** (1 / p) / np.mean(block(v, tree.depth, k, j))
        for k, j in intervals(tree.depth)
    )


def ap_brute(tree, p):
    v = leaf_values(tree)
    out = 0.0
    for k, j in intervals(tree.depth):
        b = block(v, tree.depth, k, j)
        out = max(out, np.mean(b) * np.mean(b ** (-1 / (p - 1))) ** (p - 1))
    return out


def ainf_brute(tree):
    v = leaf_values(tree)
    return max(
        np.mean(block(v, tree.depth, k, j)) / math.exp(np.mean(np.log(block(v, tree.depth, k, j))))
        for k, j in intervals(tree.depth)
    )


def a1_brute(tree):
    """sup over nested pairs I within J of m_J / m_I, enumerating the pairs."""
    v = leaf_values(tree)
    n = tree.depth
    out = 0.0
    for kj, jj in intervals(n):
        mj = np.mean(block(v, n, kj, jj))
        for ki, ji in intervals(n):
            if ki >= kj and ji >> (ki - kj) == jj:
                out = max(out, mj / np.mean(block(v, n, ki, ji)))
    return out


def coeffs_brute(tree):
    """b_I = <w, h_I> / m_I w from leaf values."""
    v = leaf_values(tree)
    n = tree.depth
    b = np.zeros(2**n - 1)
    for k in range(n):
        for j in range(2**k):
            blk = block(v, n, k, j)
            half = blk.size // 2
            inner = 2.0 ** (k / 2) * (blk[half:].sum() - blk[:half].sum()) * 2.0**-n
            b[2**k - 1 + j] = inner / blk.mean()
    return b


def carleson_brute(b, depth):
    out = 0.0
    for kj, jj in intervals(depth - 1):
        total = 0.0
        for ki, ji in intervals(depth - 1):
            if ki >= kj and ji >> (ki - kj) == jj:
                total += b[2**ki - 1 + ji] ** 2
        out = max(out, total * 2**kj)
    return out


def buckley_terms(tree, b, p, kj, jj):
    """(1/|J|) sum_{I within J} (m_I/m_J)^{-1/(p-1)} b_I^2 for a single J."""
    v = leaf_values(tree)
    n = tree.depth
    mj = np.mean(block(v, n, kj, jj))
    total = 0.0
    for ki, ji in intervals(n - 1):
        if ki >= kj and ji >> (ki - kj) == jj:
            mi = np.mean(block(v, n, ki, ji))
            total += (mi / mj) ** (-1 / (p - 1)) * b[2**ki - 1 + ji] ** 2
    return total * 2**kj


def periodic_sums(s, p, l, depth):
    """(mean of w^p, mean of w) over [0, 2^-l] for the periodic weight, summing c_i to ``depth``
    and lumping the remainder into the last spine leaf."""
    n = len(s)

    def split(i):
        return s[(i - 1) % n]

    def c(i):
        v = 2.0**i
        for k in range(1, i):
            v *= split(k)
        return v * (1 - split(i))

    tail = 2.0**depth
    for k in range(1, depth + 1):
        tail *= split(k)
    sp = math.fsum(c(i) ** p * 2.0**-i for i in range(l + 1, depth + 1)) + tail**p * 2.0**-depth
    s1 = math.fsum(c(i) * 2.0**-i for i in range(l + 1, depth + 1)) + tail * 2.0**-depth
    return sp * 2**l, s1 * 2**l
