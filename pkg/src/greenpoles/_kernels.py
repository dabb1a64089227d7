"""Array kernels for the hot evaluation paths.

Batched Mobius/Green products feed the circle-quadrature property checks and
the boundary sampling behind disc certification; these inner loops dominate
the harness runtime, so they are numba-jitted when numba is importable.
Set GREENPOLES_NUMBA=0 to force the pure-numpy implementations (the two
paths are equality-tested against each other and against the scalar
evaluators).

Conventions: log values may be -inf (a pole was hit); weights are strictly
positive; collinear weights arrive sorted descending.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "IMPL",
    "mobius_distance_many",
    "disc_log_products",
    "collinear_log_green",
    "poly_eval_many",
    "numpy_impl",
    "numba_impl",
]


# ---------------------------------------------------------------------------
# pure-numpy implementations


def _np_mobius_distance_many(a: complex, zs: np.ndarray) -> np.ndarray:
    zs = np.asarray(zs, dtype=np.complex128)
    return np.abs((zs - a) / (1.0 - np.conj(a) * zs))


def _np_disc_log_products(poles: np.ndarray, weights: np.ndarray, zs: np.ndarray) -> np.ndarray:
    """log prod_i m(a_i, z)^{w_i} for each z; -inf where z hits a pole."""
    poles = np.asarray(poles, dtype=np.complex128)
    weights = np.asarray(weights, dtype=np.float64)
    zs = np.asarray(zs, dtype=np.complex128)
    if poles.size == 0:
        return np.zeros(zs.shape, dtype=np.float64)
    m = np.abs(
        (zs[None, :] - poles[:, None]) / (1.0 - np.conj(poles)[:, None] * zs[None, :])
    )
    with np.errstate(divide="ignore"):
        logm = np.log(m)
    return weights @ logm


def _np_collinear_log_green(
    poles: np.ndarray, weights: np.ndarray, z1s: np.ndarray, rest: np.ndarray
) -> np.ndarray:
    """log of the collinear polydisc Green value at many points.

    poles/weights describe first-axis poles with weights sorted descending;
    z1s are the first coordinates, rest the max modulus of the remaining
    coordinates per point.
    """
    poles = np.asarray(poles, dtype=np.complex128)
    weights = np.asarray(weights, dtype=np.float64)
    z1s = np.asarray(z1s, dtype=np.complex128)
    rest = np.asarray(rest, dtype=np.float64)
    if poles.size == 0:
        return np.zeros(z1s.shape, dtype=np.float64)
    m = np.abs(
        (z1s[None, :] - poles[:, None]) / (1.0 - np.conj(poles)[:, None] * z1s[None, :])
    )
    with np.errstate(divide="ignore"):
        prefix = np.cumsum(np.log(m), axis=0)
    u = np.maximum(np.exp(prefix), rest[None, :])
    dk = weights - np.append(weights[1:], 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_u = np.log(u)
        terms = np.where(dk[:, None] > 0.0, dk[:, None] * log_u, 0.0)
    return np.sum(terms, axis=0)


def _np_poly_eval_many(coeffs: np.ndarray, lams: np.ndarray) -> np.ndarray:
    """Horner evaluation of each coefficient row at every lambda."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    lams = np.asarray(lams, dtype=np.complex128)
    out = np.zeros((coeffs.shape[0], lams.shape[0]), dtype=np.complex128)
    for k in range(coeffs.shape[1] - 1, -1, -1):
        out = out * lams[None, :] + coeffs[:, k][:, None]
    return out


class _Namespace:
    def __init__(self, **funcs):
        self.__dict__.update(funcs)


numpy_impl = _Namespace(
    mobius_distance_many=_np_mobius_distance_many,
    disc_log_products=_np_disc_log_products,
    collinear_log_green=_np_collinear_log_green,
    poly_eval_many=_np_poly_eval_many,
)


# ---------------------------------------------------------------------------
# numba implementations (loop form)

numba_impl = None


def _build_numba_impl():
    from numba import njit

    @njit(cache=True)
    def mobius_distance_many(a, zs):
        out = np.empty(zs.shape[0], dtype=np.float64)
        for i in range(zs.shape[0]):
            out[i] = abs((zs[i] - a) / (1.0 - np.conj(a) * zs[i]))
        return out

    @njit(cache=True)
    def disc_log_products(poles, weights, zs):
        out = np.zeros(zs.shape[0], dtype=np.float64)
        for i in range(zs.shape[0]):
            acc = 0.0
            for j in range(poles.shape[0]):
                m = abs((zs[i] - poles[j]) / (1.0 - np.conj(poles[j]) * zs[i]))
                if m == 0.0:
                    acc = -np.inf
                    break
                acc += weights[j] * np.log(m)
            out[i] = acc
        return out

    @njit(cache=True)
    def collinear_log_green(poles, weights, z1s, rest):
        n_poles = poles.shape[0]
        out = np.zeros(z1s.shape[0], dtype=np.float64)
        for i in range(z1s.shape[0]):
            prefix = 1.0
            acc = 0.0
            for j in range(n_poles):
                prefix *= abs((z1s[i] - poles[j]) / (1.0 - np.conj(poles[j]) * z1s[i]))
                dk = weights[j] - (weights[j + 1] if j + 1 < n_poles else 0.0)
                if dk > 0.0:
                    u = prefix if prefix > rest[i] else rest[i]
                    if u == 0.0:
                        acc = -np.inf
                        break
                    acc += dk * np.log(u)
            out[i] = acc
        return out

    @njit(cache=True)
    def poly_eval_many(coeffs, lams):
        n_coord = coeffs.shape[0]
        deg1 = coeffs.shape[1]
        out = np.empty((n_coord, lams.shape[0]), dtype=np.complex128)
        for c in range(n_coord):
            for i in range(lams.shape[0]):
                acc = 0.0 + 0.0j
                for k in range(deg1 - 1, -1, -1):
                    acc = acc * lams[i] + coeffs[c, k]
                out[c, i] = acc
        return out

    return _Namespace(
        mobius_distance_many=mobius_distance_many,
        disc_log_products=disc_log_products,
        collinear_log_green=collinear_log_green,
        poly_eval_many=poly_eval_many,
    )


_want_numba = os.environ.get("GREENPOLES_NUMBA", "1") != "0"
if _want_numba:
    try:
        numba_impl = _build_numba_impl()
    except ImportError:  # pragma: no cover - exercised only without numba
        numba_impl = None

_active = numba_impl if numba_impl is not None else numpy_impl
IMPL = "numba" if numba_impl is not None else "numpy"


def _as_c128(x) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(x, dtype=np.complex128))


def _as_f64(x) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(x, dtype=np.float64))


def mobius_distance_many(a: complex, zs) -> np.ndarray:
    return _active.mobius_distance_many(complex(a), _as_c128(zs))


def disc_log_products(poles, weights, zs) -> np.ndarray:
    poles = _as_c128(poles)
    if poles.size == 0:
        return np.zeros(np.asarray(zs).shape, dtype=np.float64)
    return _active.disc_log_products(poles, _as_f64(weights), _as_c128(zs))


def collinear_log_green(poles, weights, z1s, rest) -> np.ndarray:
    poles = _as_c128(poles)
    if poles.size == 0:
        return np.zeros(np.asarray(z1s).shape, dtype=np.float64)
    return _active.collinear_log_green(poles, _as_f64(weights), _as_c128(z1s), _as_f64(rest))


def poly_eval_many(coeffs, lams) -> np.ndarray:
    return _active.poly_eval_many(_as_c128(np.atleast_2d(coeffs)), _as_c128(lams))
