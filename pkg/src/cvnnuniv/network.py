"""Complex feedforward networks: representation, evaluation, exact algebra.

A depth-L network is the weight list ((A_0, b_0), ..., (A_L, b_L)) with
N_0 = d inputs and N_{L+1} = 1 output; the activation is applied
componentwise after every layer except the last.  The block constructions
below (sums, compositions, affine reparametrizations) are exact at the level
of network functions, no approximation involved.
"""

from __future__ import annotations

import dataclasses
import json

import numpy as np

from .errors import ActivationSingularityError

FORMAT_TAG = "cvnn-network/1"


@dataclasses.dataclass(frozen=True)
class NetworkWeights:
    """Weights ((A_0, b_0), ..., (A_L, b_L)); layers[j] = (matrix, bias)."""

    layers: tuple

    def __post_init__(self):
        if len(self.layers) < 2:
            raise ValueError("a network needs at least one hidden layer")
        norm = []
        prev = None
        for j, (a, b) in enumerate(self.layers):
            a = np.atleast_2d(np.asarray(a, dtype=complex))
            b = np.atleast_1d(np.asarray(b, dtype=complex))
            if a.shape[0] != b.shape[0]:
                raise ValueError(f"layer {j}: matrix rows and bias length differ")
            if prev is not None and a.shape[1] != prev:
                raise ValueError(f"layer {j}: expected {prev} inputs, got {a.shape[1]}")
            prev = a.shape[0]
            norm.append((a, b))
        if norm[-1][0].shape[0] != 1:
            raise ValueError("output dimension must be 1")
        object.__setattr__(self, "layers", tuple(norm))

    @property
    def input_dim(self):
        return self.layers[0][0].shape[1]

    @property
    def hidden_layers(self):
        return len(self.layers) - 1

    @property
    def widths(self):
        return tuple(a.shape[0] for a, _ in self.layers[:-1])

    @property
    def total_neurons(self):
        return int(sum(self.widths))


def eval_network(theta, sigma, z):
    """The network function at ``z`` (a point or an (n, d) batch).

    Raises ``ActivationSingularityError`` if a pre-activation hits a declared
    singularity of ``sigma``.
    """
    z = np.asarray(z, dtype=complex)
    d = theta.input_dim
    if z.ndim == 0:
        batch = z.reshape(1, 1)
        squeeze = "scalar"
    elif z.ndim == 1:
        if d == 1:
            batch = z.reshape(-1, 1)
            squeeze = "vector"
        else:
            if z.shape[0] != d:
                raise ValueError(f"point has dimension {z.shape[0]}, network expects {d}")
            batch = z.reshape(1, d)
            squeeze = "scalar"
    else:
        if z.shape[1] != d:
            raise ValueError(f"batch has dimension {z.shape[1]}, network expects {d}")
        batch = z
        squeeze = "none"
    cur = batch
    layers = theta.layers
    for a, b in layers[:-1]:
        pre = cur @ a.T + b
        try:
            cur = sigma(pre)
        except ActivationSingularityError:
            raise ActivationSingularityError("activation singularity hit") from None
        if not np.all(np.isfinite(cur)):
            raise ActivationSingularityError("activation singularity hit")
    a, b = layers[-1]
    out = (cur @ a.T + b)[:, 0]
    if squeeze == "scalar":
        return complex(out[0])
    return out


@dataclasses.dataclass(frozen=True)
class ShallowNetwork:
    """One-hidden-layer network c + sum_j a_j sigma(b_j + w_j . z).

    ``terms`` is a sequence of (a_j, w_j, b_j) with w_j a length-d vector.
    """

    c: complex
    terms: tuple
    input_dim: int = 1

    def __post_init__(self):
        norm = []
        for a, w, b in self.terms:
            w = np.atleast_1d(np.asarray(w, dtype=complex))
            if w.shape[0] != self.input_dim:
                raise ValueError("term weight has wrong dimension")
            norm.append((complex(a), w, complex(b)))
        object.__setattr__(self, "terms", tuple(norm))
        object.__setattr__(self, "c", complex(self.c))

    @property
    def width(self):
        return len(self.terms)

    def scaled(self, factor):
        factor = complex(factor)
        return ShallowNetwork(
            c=factor * self.c,
            terms=tuple((factor * a, w, b) for a, w, b in self.terms),
            input_dim=self.input_dim,
        )

    def to_network(self):
        """The equivalent depth-1 :class:`NetworkWeights` (c goes into the output bias)."""
        if not self.terms:
            a0 = np.zeros((1, self.input_dim), dtype=complex)
            b0 = np.zeros(1, dtype=complex)
            a1 = np.zeros((1, 1), dtype=complex)
            return NetworkWeights(((a0, b0), (a1, np.array([self.c]))))
        a0 = np.stack([w for _, w, _ in self.terms])
        b0 = np.array([b for _, _, b in self.terms])
        a1 = np.array([[a for a, _, _ in self.terms]])
        b1 = np.array([self.c])
        return NetworkWeights(((a0, b0), (a1, b1)))


def concat_shallow(parts):
    """Sum of shallow networks over a common input dimension."""
    parts = list(parts)
    if not parts:
        raise ValueError("nothing to concatenate")
    d = parts[0].input_dim
    if any(p.input_dim != d for p in parts):
        raise ValueError("input dimensions differ")
    terms = tuple(t for p in parts for t in p.terms)
    c = sum(p.c for p in parts)
    return ShallowNetwork(c=c, terms=terms, input_dim=d)


def eval_shallow(s, sigma, z):
    """Evaluate a shallow network directly from its term list."""
    z = np.asarray(z, dtype=complex)
    if z.ndim == 0:
        batch = z.reshape(1, 1)
        scalar = True
    elif z.ndim == 1:
        if s.input_dim == 1:
            batch = z.reshape(-1, 1)
            scalar = False
        else:
            batch = z.reshape(1, -1)
            scalar = True
    else:
        batch = z
        scalar = False
    out = np.full(batch.shape[0], s.c, dtype=complex)
    if s.terms:
        w = np.stack([w for _, w, _ in s.terms])
        b = np.array([b for _, _, b in s.terms])
        a = np.array([a for a, _, _ in s.terms])
        pre = batch @ w.T + b
        try:
            vals = sigma(pre)
        except ActivationSingularityError:
            raise ActivationSingularityError("activation singularity hit") from None
        if not np.all(np.isfinite(vals)):
            raise ActivationSingularityError("activation singularity hit")
        out = out + vals @ a
    return complex(out[0]) if scalar else out


def linear_combine(t1, t2, alpha, beta):
    """Network computing alpha*Phi + beta*Psi exactly (equal depth and d)."""
    if t1.input_dim != t2.input_dim:
        raise ValueError("input dimensions differ")
    if t1.hidden_layers != t2.hidden_layers:
        raise ValueError("depths differ")
    big = len(t1.layers) - 1
    layers = []
    for j in range(big + 1):
        a1, b1 = t1.layers[j]
        a2, b2 = t2.layers[j]
        if j == 0:
            a = np.vstack([a1, a2])
            b = np.concatenate([b1, b2])
        elif j == big:
            a = np.hstack([alpha * a1, beta * a2])
            b = alpha * b1 + beta * b2
        else:
            a = np.block(
                [
                    [a1, np.zeros((a1.shape[0], a2.shape[1]), dtype=complex)],
                    [np.zeros((a2.shape[0], a1.shape[1]), dtype=complex), a2],
                ]
            )
            b = np.concatenate([b1, b2])
        layers.append((a, b))
    return NetworkWeights(tuple(layers))


def linear_combine_many(nets, coeffs, constant=0.0):
    """Network computing ``constant + sum_j coeffs[j] * nets[j]`` exactly.

    Iterated pairwise combination in one block construction; all networks
    must share input dimension and depth.
    """
    nets = list(nets)
    coeffs = [complex(c) for c in coeffs]
    if not nets or len(nets) != len(coeffs):
        raise ValueError("need matching nonempty networks and coefficients")
    d = nets[0].input_dim
    big = len(nets[0].layers) - 1
    if any(n.input_dim != d or len(n.layers) - 1 != big for n in nets):
        raise ValueError("networks must share input dimension and depth")
    layers = []
    for j in range(big + 1):
        mats = [n.layers[j][0] for n in nets]
        biases = [n.layers[j][1] for n in nets]
        if j == 0:
            a = np.vstack(mats)
            b = np.concatenate(biases)
        elif j == big:
            a = np.hstack([c * m for c, m in zip(coeffs, mats)])
            b = sum(c * v for c, v in zip(coeffs, biases)) + complex(constant)
        else:
            rows = sum(m.shape[0] for m in mats)
            cols = sum(m.shape[1] for m in mats)
            a = np.zeros((rows, cols), dtype=complex)
            r = c0 = 0
            for m in mats:
                a[r : r + m.shape[0], c0 : c0 + m.shape[1]] = m
                r += m.shape[0]
                c0 += m.shape[1]
            b = np.concatenate(biases)
        layers.append((a, b))
    return NetworkWeights(tuple(layers))


def compose(outer, inner):
    """Network computing outer(inner(z)); outer must take a single input."""
    if outer.input_dim != 1:
        raise ValueError("outer network must have input dimension 1")
    a_in, b_in = inner.layers[-1]
    a_out, b_out = outer.layers[0]
    merged = (a_out @ a_in, b_out + (a_out @ b_in))
    layers = inner.layers[:-1] + (merged,) + outer.layers[1:]
    return NetworkWeights(layers)


def lift_affine(t, a, b):
    """From a 1-input network Phi, the d-input network z -> Phi(b + a . z)."""
    if t.input_dim != 1:
        raise ValueError("lift_affine needs a 1-input network")
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    a0, b0 = t.layers[0]
    new0 = (a0 @ a.reshape(1, -1), b0 + a0[:, 0] * complex(b))
    return NetworkWeights((new0,) + t.layers[1:])


def restrict_line(t, a, b):
    """From a d-input network Phi, the 1-input network z -> Phi(b + z a)."""
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    b = np.atleast_1d(np.asarray(b, dtype=complex))
    if a.shape[0] != t.input_dim or b.shape[0] != t.input_dim:
        raise ValueError("direction/offset dimension mismatch")
    a0, b0 = t.layers[0]
    new0 = ((a0 @ a).reshape(-1, 1), b0 + a0 @ b)
    return NetworkWeights((new0,) + t.layers[1:])


def _pair(x):
    return [float(x.real), float(x.imag)]


def network_to_json_dict(theta):
    """Versioned JSON document; doubles survive a round trip bit-exactly."""
    return {
        "format": FORMAT_TAG,
        "d": theta.input_dim,
        "L": theta.hidden_layers,
        "layers": [
            {
                "A": [[_pair(v) for v in row] for row in a],
                "b": [_pair(v) for v in b],
            }
            for a, b in theta.layers
        ],
    }


def network_from_json_dict(doc):
    if doc.get("format") != FORMAT_TAG:
        raise ValueError(f"unsupported network format {doc.get('format')!r}")
    layers = []
    for layer in doc["layers"]:
        a = np.array([[complex(re, im) for re, im in row] for row in layer["A"]], dtype=complex)
        b = np.array([complex(re, im) for re, im in layer["b"]], dtype=complex)
        layers.append((a.reshape(len(layer["A"]), -1), b))
    theta = NetworkWeights(tuple(layers))
    if theta.input_dim != doc["d"] or theta.hidden_layers != doc["L"]:
        raise ValueError("declared dimensions disagree with the layer shapes")
    return theta


def save_network(theta, path):
    with open(path, "w") as fh:
        json.dump(network_to_json_dict(theta), fh)


def load_network(path):
    with open(path) as fh:
        return network_from_json_dict(json.load(fh))
