"""Built-in target functions, addressed by JSON tags.

A tag is either a bare string (``"zero"``, ``"one"``) or an object with a
``"kind"`` key:

=============  ===============================================  ====================
kind           value                                            extra keys
=============  ===============================================  ====================
zero           0
one            1
coordinate     z_i                                              ``index``
reciprocal     1 / z_i                                          ``index``
exp-sum        exp(z_i + z_j + ...)                             ``indices`` (all)
cauchy         1 / (z_i - w_j)                                  ``z``, ``w``
poly           explicit polynomial in (w, z)                    ``terms``
product        product of sub-targets                           ``factors``
sum            sum of sub-targets                               ``terms``
=============  ===============================================  ====================

``poly`` terms are ``{"w": [...], "z": [...], "c": [re, im]}``. Every target
carries a guard that checks holomorphy near F x T (entire targets always pass).
"""
from __future__ import annotations

import math

import numpy as np

from .compacta import ProductCompact, separated
from .errors import ConfigError
from .series import PolyWZ, TargetFunction

KINDS = ("zero", "one", "coordinate", "reciprocal", "exp-sum", "cauchy", "poly",
         "product", "sum")


def _index(spec, key, limit, where, name):
    try:
        i = int(spec[key])
    except KeyError:
        raise ConfigError(f"missing key {key!r}", where) from None
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be an integer", f"{where}.{key}") from None
    if not 0 <= i < limit:
        raise ConfigError(f"{name} index {i} out of range [0, {limit})", f"{where}.{key}")
    return i


def _always(F, T):
    return True


def _poly_target(spec, r, d, where):
    terms = spec.get("terms")
    if not isinstance(terms, list):
        raise ConfigError("poly needs a list of terms", f"{where}.terms")
    coeffs, exps = [], []
    for n, t in enumerate(terms):
        loc = f"{where}.terms[{n}]"
        try:
            ew = [int(x) for x in t.get("w", [0] * r)]
            ez = [int(x) for x in t["z"]]
            c = t["c"]
            c = complex(float(c[0]), float(c[1])) if isinstance(c, list) else complex(c)
        except (KeyError, TypeError, ValueError, IndexError):
            raise ConfigError("term needs integer lists w, z and coefficient c", loc) from None
        if len(ew) != r or len(ez) != d or min(ew + ez, default=0) < 0:
            raise ConfigError(f"term exponents must have lengths r={r}, d={d}", loc)
        coeffs.append(c)
        exps.append(ew + ez)
    q = PolyWZ.from_flat(r, d, coeffs, np.array(exps, dtype=np.int64).reshape(len(exps), r + d))
    flat_c, flat_e = q.flatten()
    cd = np.array([complex(c) for c in flat_c], dtype=np.complex128)

    def f(W, Z):
        P = np.concatenate([W, Z], axis=1)
        out = np.zeros(P.shape[0], dtype=np.complex128)
        for c, e in zip(cd, flat_e):
            out += c * np.prod(P ** e, axis=1)
        return out

    return TargetFunction(f, _always, "poly"), q


def target_from_config(spec, r: int, d: int, where: str = "target") -> TargetFunction:
    """Build a :class:`TargetFunction` from its tag (see module docstring)."""
    if isinstance(spec, str):
        spec = {"kind": spec}
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("target must be a tag string or an object with 'kind'", where)
    kind = spec["kind"]
    if kind not in KINDS:
        raise ConfigError(f"unknown target kind {kind!r}; expected one of {', '.join(KINDS)}",
                          f"{where}.kind")

    if kind == "zero":
        return TargetFunction(lambda W, Z: np.zeros(Z.shape[0], complex), _always, "zero")
    if kind == "one":
        return TargetFunction(lambda W, Z: np.ones(Z.shape[0], complex), _always, "one")
    if kind == "coordinate":
        i = _index(spec, "index", d, where, "z")
        return TargetFunction(lambda W, Z: Z[:, i].astype(complex), _always, f"z{i}")
    if kind == "reciprocal":
        i = _index(spec, "index", d, where, "z")
        return TargetFunction(lambda W, Z: 1.0 / Z[:, i], lambda F, T: not T.factors[i].contains(0),
                              f"1/z{i}")
    if kind == "exp-sum":
        idx = spec.get("indices", list(range(d)))
        idx = [_index({"i": j}, "i", d, f"{where}.indices", "z") for j in idx]
        return TargetFunction(lambda W, Z: np.exp(Z[:, idx].sum(axis=1)), _always,
                              "exp(" + "+".join(f"z{j}" for j in idx) + ")")
    if kind == "cauchy":
        i = _index(spec, "z", d, where, "z")
        j = _index(spec, "w", r, where, "w")
        return TargetFunction(lambda W, Z: 1.0 / (Z[:, i] - W[:, j]),
                              lambda F, T: separated(F.factors[j], T.factors[i]),
                              f"1/(z{i}-w{j})")
    if kind == "poly":
        return _poly_target(spec, r, d, where)[0]

    key = "factors" if kind == "product" else "terms"
    subs = spec.get(key)
    if not isinstance(subs, list) or not subs:
        raise ConfigError(f"{kind} needs a non-empty list '{key}'", f"{where}.{key}")
    parts = [target_from_config(s, r, d, f"{where}.{key}[{n}]") for n, s in enumerate(subs)]
    combine = math.prod if kind == "product" else sum

    def f(W, Z):
        return combine(p(W, Z) for p in parts)

    def guard(F, T):
        return all(p.holomorphic_on(F, T) for p in parts)

    sep = "*" if kind == "product" else "+"
    return TargetFunction(f, guard, sep.join(p.label for p in parts))
