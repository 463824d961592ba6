"""Character-level coherence for frames from SL2(F_q), q even.

The frames stack the m induced representations rho_chi of degree q+1 (or
the m cuspidal representations of degree q-1) over the group, so inner
products between frame vectors are class functions: one value on the
unipotent class, character sums over the order-2m subgroup A union -A on
the split (resp. nonsplit) torus classes, and zero elsewhere.  No
representation matrices are ever built; everything reduces to sums of
roots of unity mod q -+ 1, which must be prime for the m characters to
exist.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coherence import (
    bound_general_kappa,
    cluster_complex,
    coherence_properties,
    welch_bound,
)
from .errors import (
    InvariantViolation,
    MNotOddDivisor,
    NotEvenPrimePower,
    QMinusOneNotPrime,
    QPlusOneNotPrime,
    ResourceCap,
)
from .gf import build_field, is_prime
from .subgroups import subgroup_of_order

Q_CAP = 2 ** 16


def _check_q(q: int):
    if q < 4 or q & (q - 1) != 0:
        raise NotEvenPrimePower(f"q = {q} must be 2**d with d >= 2")
    if q > Q_CAP:
        raise ResourceCap(f"q = {q} exceeds cap {Q_CAP}")


def admissible_q(mode: str, cap: int = Q_CAP) -> list[int]:
    """All q = 2**d <= cap where the required neighbor of q is prime."""
    if mode not in ("induced", "cuspidal"):
        raise ValueError(f"mode must be induced or cuspidal, got {mode!r}")
    out = []
    q = 4
    while q <= cap:
        neighbor = q - 1 if mode == "induced" else q + 1
        if is_prime(neighbor):
            out.append(q)
        q *= 2
    return out


@dataclass(frozen=True)
class Sl2ClassData:
    """Conjugacy-class census of SL2(F_q): (kind, class count, class size)."""

    q: int
    families: tuple

    @property
    def total(self) -> int:
        return sum(count * size for _, count, size in self.families)


def sl2_class_data(q: int) -> Sl2ClassData:
    """The four class families: identity, unipotent, split and nonsplit
    torus classes, with the standard counts and sizes."""
    _check_q(q)
    fams = (
        ("identity", 1, 1),
        ("unipotent", 1, q * q - 1),
        ("split", (q - 2) // 2, q * (q + 1)),
        ("nonsplit", q // 2, q * (q - 1)),
    )
    data = Sl2ClassData(q=q, families=fams)
    if data.total != q ** 3 - q:
        raise InvariantViolation(f"class mass {data.total} != {q ** 3 - q}")
    return data


def _validate_induced(q: int, m: int):
    _check_q(q)
    if not is_prime(q - 1):
        raise QMinusOneNotPrime(f"q - 1 = {q - 1} is not prime")
    if m < 1 or m % 2 == 0 or (q - 2) % m != 0:
        raise MNotOddDivisor(f"m = {m} must be an odd divisor of {q - 2}")


def _validate_cuspidal(q: int, m: int):
    _check_q(q)
    if not is_prime(q + 1):
        raise QPlusOneNotPrime(f"q + 1 = {q + 1} is not prime")
    if m < 1 or m % 2 == 0 or q % m != 0:
        raise MNotOddDivisor(f"m = {m} must be an odd divisor of {q}")


def a2m_values(p: int, m: int) -> np.ndarray:
    """The order-2m subgroup of (Z/pZ)* as residues, via the field layer."""
    ctx = build_field(p, 1)
    return subgroup_of_order(ctx, 2 * m).element_values.astype(np.int64)


def _char_sums(p: int, values: np.ndarray, count: int) -> np.ndarray:
    # s_l = sum_{a in values} w_p**(l a) for l = 1..count
    roots = np.exp(2j * np.pi * np.arange(p) / p)
    out = np.zeros(count, dtype=np.complex128)
    block = max(1, (2 ** 22) // max(len(values), 1))
    for l0 in range(0, count, block):
        ls = np.arange(l0 + 1, min(l0 + block, count) + 1, dtype=np.int64)
        ex = (ls[:, None] * values[None, :]) % p
        out[l0:l0 + len(ls)] = roots[ex].sum(axis=1)
    return out


def sl2_induced_coherence(q: int, m: int) -> dict:
    """Coherence of the frame stacking the m induced representations.

    The unipotent class pins the inner product 1/(q+1); the split classes
    give |sum_{a in A2m} w**(l a)| / (m(q+1)) for l = 1..q-2; nonsplit
    classes contribute zero.
    """
    _validate_induced(q, m)
    p = q - 1
    sums = _char_sums(p, a2m_values(p, m), q - 2)
    w = np.abs(sums) / (m * (q + 1))
    u = 1.0 / (q + 1)
    return {
        "mu": float(max(u, w.max())) if len(w) else u,
        "u_value": u,
        "w_values": w,
        "n": q ** 3 - q,
        "dim": m * (q + 1) ** 2,
    }


def sl2_induced_bound(q: int, m: int) -> float:
    """Coherence bound (1/(q+1)) max(1, 2 B) where B is the general kappa
    bound at subgroup size 2m and index (q-2)/2m.

    The split-class inner product is (q+1) sum_{a in A2m} w**(l a), i.e.
    (q+1) * 2m * c_l with c_l a size-2m coset sum, and the column norm
    squared is m(q+1)**2; the normalized value is 2|c_l|/(q+1), hence the
    factor 2 in front of the coset-sum bound.
    """
    _validate_induced(q, m)
    kappa = (q - 2) // (2 * m)
    return max(1.0, 2.0 * bound_general_kappa(2 * m, kappa)) / (q + 1)


def sl2_cuspidal_coherence(q: int, m: int) -> dict:
    """Mirror construction from the m cuspidal representations; nonsplit
    classes carry the character sums, split classes vanish."""
    _validate_cuspidal(q, m)
    p = q + 1
    sums = _char_sums(p, a2m_values(p, m), q)
    w = np.abs(sums) / (m * (q - 1))
    u = 1.0 / (q - 1)
    return {
        "mu": float(max(u, w.max())) if len(w) else u,
        "u_value": u,
        "w_values": w,
        "n": q ** 3 - q,
        "dim": m * (q - 1) ** 2,
    }


def sl2_welch(q: int, m: int, mode: str) -> float:
    """Welch bound at the frame shape n = q(q+1)(q-1), dim = m(q+-1)**2."""
    if mode == "induced":
        _validate_induced(q, m)
        dim = m * (q + 1) ** 2
    elif mode == "cuspidal":
        _validate_cuspidal(q, m)
        dim = m * (q - 1) ** 2
    else:
        raise ValueError(f"mode must be induced or cuspidal, got {mode!r}")
    return welch_bound(q ** 3 - q, dim)


def sl2_report(q: int, m: int, mode: str,
               log_base: float | None = None) -> dict:
    """Coherence report dict in the same schema as frame reports.

    The census enumerates the signed class-function inner products with
    ordered-pair multiplicities n * class size.  nu is the exact group
    frame value 1/(n-1) (row sums of the Gram are -1 because all stacked
    characters are nontrivial irreducibles).
    """
    if mode == "induced":
        coh = sl2_induced_coherence(q, m)
        p = q - 1
        deg = q + 1
        sl2_bound = sl2_induced_bound(q, m)
        u_signed = 1.0 / (q + 1)
        carrier, silent = "split", "nonsplit"
    elif mode == "cuspidal":
        coh = sl2_cuspidal_coherence(q, m)
        p = q + 1
        deg = q - 1
        sl2_bound = None
        u_signed = -1.0 / (q - 1)
        carrier, silent = "nonsplit", "split"
    else:
        raise ValueError(f"mode must be induced or cuspidal, got {mode!r}")

    n, dim = coh["n"], coh["dim"]
    nu = 1.0 / (n - 1)
    sums = _char_sums(p, a2m_values(p, m), (p - 1) // 2)
    signed = sums / (m * deg) if mode == "induced" else -sums / (m * deg)

    sizes = {kind: (count, size)
             for kind, count, size in sl2_class_data(q).families}
    values = [u_signed] + signed.tolist() + [0.0]
    weights = [n * (q * q - 1)]
    weights += [n * sizes[carrier][1]] * len(signed)
    weights += [n * sizes[silent][0] * sizes[silent][1]]
    reps, counts = cluster_complex(np.array(values, dtype=np.complex128),
                                   weights=weights)
    census = list(zip(reps.tolist(), counts.tolist()))
    if sum(c for _, c in census) != n * (n - 1):
        raise InvariantViolation("sl2 census multiplicities do not cover "
                                 "all ordered pairs")

    mags, mcounts = cluster_complex(np.abs(np.array(
        [v for v, _ in census])).astype(np.complex128),
        weights=[c for _, c in census])
    welch = sl2_welch(q, m, mode)
    flags = coherence_properties(coh["mu"], nu, n, dim, log_base=log_base)
    flags["equiangular"] = len(mags) == 1
    return {
        "schema_version": 1,
        "mode": f"sl2-{mode}",
        "n": n,
        "m_dim": dim,
        "kappa": None,
        "mu": coh["mu"],
        "nu": nu,
        "welch": welch,
        "bound_general": None,
        "bound_m_odd": None,
        "bound_sqrt_kappa": None,
        "sl2_bound": sl2_bound,
        "u_value": coh["u_value"],
        "w_values": [float(x) for x in coh["w_values"]],
        "random_fourier": None,
        "random_fourier_window_ok": None,
        "tightness_residual": None,
        "gram_offdiag_mean_sq": float(sum(
            c * abs(v) ** 2 for v, c in census) / (n * (n - 1))),
        "distinct_values": [
            {"re": float(v.real), "im": float(v.imag), "count": int(c)}
            for v, c in census],
        "distinct_magnitudes": [
            {"value": float(v.real), "count": int(c)}
            for v, c in zip(mags, mcounts)],
        "property_flags": flags,
        "paths": {"census_source": "class-functions",
                  "nu_source": "group-frame-identity"},
        "provenance": {
            "construction": f"sl2-{mode}",
            "q": q,
            "m": m,
            "character_modulus": p,
            "A2m": [int(v) for v in sorted(a2m_values(p, m).tolist())],
        },
    }
