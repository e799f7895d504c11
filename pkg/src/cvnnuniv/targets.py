"""Built-in approximation targets, addressable by name from the CLI."""

from __future__ import annotations

import numpy as np


def _as_batch(z):
    z = np.asarray(z, dtype=complex)
    if z.ndim == 1:
        return z.reshape(-1, 1)
    return z


def cone(z):
    """max(0, 1 - |z|) with the Euclidean norm on C^d."""
    z = _as_batch(z)
    return np.maximum(0.0, 1.0 - np.linalg.norm(z, axis=1)) + 0j


def rez(z):
    """Re z_1."""
    return _as_batch(z)[:, 0].real + 0j


def abs2_target(z):
    """|z|^2."""
    z = _as_batch(z)
    return np.linalg.norm(z, axis=1) ** 2 + 0j


def relu_c(z):
    """max(0, Re z_1), the pivot function of the deep construction."""
    return np.maximum(0.0, _as_batch(z)[:, 0].real) + 0j


_BUILTIN = {
    "cone": cone,
    "rez": rez,
    "abs2_target": abs2_target,
    "relu_c": relu_c,
}


def target_names():
    return tuple(_BUILTIN) + ("constant:<re>,<im>",)


def resolve_target(name):
    """Look up a target by name; supports ``constant:<re>,<im>``."""
    if name in _BUILTIN:
        return _BUILTIN[name]
    if name.startswith("constant:"):
        try:
            re_s, im_s = name.split(":", 1)[1].split(",")
            value = complex(float(re_s), float(im_s))
        except ValueError:
            raise KeyError(f"malformed constant target {name!r}") from None

        def const(z, value=value):
            return np.full(_as_batch(z).shape[0], value, dtype=complex)

        return const
    known = ", ".join(target_names())
    raise KeyError(f"unknown target {name!r}; known: {known}")
