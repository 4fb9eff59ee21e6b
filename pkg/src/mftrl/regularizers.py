"""Regularizers over the simplex: psi, the mirror-argmax map, convex
conjugates, and Bregman/KL divergences."""

import numpy as np

from . import _kernels
from ._kernels import ENTROPY, EUCLIDEAN

_NAMES = {"entropy": ENTROPY, "euclidean": EUCLIDEAN}


def regularizer_from_name(name):
    try:
        return _NAMES[name]
    except KeyError:
        raise ValueError(f"unknown regularizer {name!r}")


def regularizer_name(reg):
    return "entropy" if reg == ENTROPY else "euclidean"


def mirror_argmax(reg, z):
    """argmax_{p in simplex} <z, p> - psi(p).

    Entropy: softmax (max-subtracted, overflow safe). Squared Euclidean:
    sort-then-threshold projection of z onto the simplex.
    """
    z = np.asarray(z, dtype=np.float64)
    if not np.all(np.isfinite(z)):
        raise ValueError("scores must be finite")
    out = np.empty_like(z)
    _kernels.mirror_into(reg, z, out)
    return out


def psi(reg, p):
    """Regularizer value: negative entropy sum p ln p, or half squared norm."""
    p = np.asarray(p, dtype=np.float64)
    if reg == ENTROPY:
        pos = p[p > 0]
        return float(np.sum(pos * np.log(pos)))
    return 0.5 * float(np.sum(p * p))


def psi_grad(reg, p):
    """Gradient of psi at an interior point."""
    p = np.asarray(p, dtype=np.float64)
    if reg == ENTROPY:
        return 1.0 + np.log(p)
    return p.copy()


def kl(x, y):
    """Kullback-Leibler divergence sum x ln(x/y), with 0 ln 0 = 0.

    y must carry positive mass wherever x does.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    mask = x > 0
    if np.any(y[mask] <= 0):
        raise ValueError("second argument has a zero where the first is positive")
    v = float(np.sum(x[mask] * np.log(x[mask] / y[mask])))
    # roundoff can leave a tiny negative residue when x == y
    return v if v > 0.0 else 0.0


def profile_kl(p, q):
    """Sum of per-player KL divergences between two strategy profiles."""
    return kl(p[0], q[0]) + kl(p[1], q[1])


def bregman(reg, x, y):
    """D_psi(x, y) = psi(x) - psi(y) - <grad psi(y), x - y>; KL for entropy,
    half squared distance for the Euclidean regularizer."""
    if reg == ENTROPY:
        return kl(x, y)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return 0.5 * float(np.sum((x - y) ** 2))


def profile_bregman(reg, p, q):
    return bregman(reg, p[0], q[0]) + bregman(reg, p[1], q[1])


def conjugate_value(reg, z):
    """max_{p in simplex} <z, p> - psi(p): log-sum-exp for entropy, direct
    evaluation at the projection for the Euclidean regularizer."""
    z = np.asarray(z, dtype=np.float64)
    if not np.all(np.isfinite(z)):
        raise ValueError("scores must be finite")
    if reg == ENTROPY:
        m = float(z.max())
        return m + float(np.log(np.sum(np.exp(z - m))))
    p = mirror_argmax(reg, z)
    return float(z @ p) - psi(reg, p)
