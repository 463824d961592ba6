"""Coherence analysis: exact character-sum paths, brute force, and bounds.

For frames whose columns run over a whole field and whose rows are
multiplier characters x -> w**Tr(ax), every Gram entry depends only on the
column difference z = x_j - x_i, so the full inner-product census reduces
to the n-1 sums c_z = (1/m) sum_a w**Tr(az).  When the multipliers form a
subgroup A, c is constant on the kappa cosets of A and the census costs
O(n) total.  The brute-force Gram path is kept as an independent oracle
and cross-checked against the exact path whenever both run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadShape,
    KappaOddWithModdP,
    NotNormalized,
    ResourceCap,
)
from .frames import (
    COMPLEX_CELL_CAP,
    ComplexFrame,
    ExponentFrame,
    SignMatrix,
    materialize,
)
from .gf import FieldCtx
from .subgroups import SubgroupSpec

BRUTE_CAP = 4096
CLUSTER_TOL = 1e-9


def roots_of_unity(p: int) -> np.ndarray:
    """The p complex p-th roots of unity; exact +-1 for p = 2."""
    if p == 2:
        return np.array([1.0 + 0.0j, -1.0 + 0.0j])
    return np.exp(2j * np.pi * np.arange(p) / p)


# ---------------------------------------------------------------------------
# closed-form bounds
# ---------------------------------------------------------------------------

def welch_bound(n: int, m_dim: int) -> float:
    """Lower bound sqrt((n - m)/(m(n - 1))) on the coherence of n unit
    vectors in dimension m; zero when an orthonormal set fits."""
    if m_dim < 1 or n < m_dim:
        raise BadShape(f"need 1 <= m_dim <= n, got n={n}, m_dim={m_dim}")
    if n <= 1 or n == m_dim:
        return 0.0
    return math.sqrt((n - m_dim) / (m_dim * (n - 1)))


def _beta(m: int, kappa: int) -> float:
    # common modulus of the nontrivial Fourier coefficients of the
    # coset-sum vector
    return math.sqrt((kappa + 1.0 / m) / m)


def bound_general_kappa(m: int, kappa: int) -> float:
    """Upper bound ((kappa-1) beta + 1/m)/kappa on the largest coset-sum
    modulus, valid for any subgroup size m and index kappa."""
    if m < 1 or kappa < 1:
        raise BadShape(f"need m, kappa >= 1, got m={m}, kappa={kappa}")
    return ((kappa - 1) * _beta(m, kappa) + 1.0 / m) / kappa


def bound_m_odd(m: int, kappa: int) -> float:
    """Sharper bound available when -1 sits in the half-way coset (p and m
    both odd), which forces kappa even; odd kappa is rejected."""
    if m < 1 or kappa < 1:
        raise BadShape(f"need m, kappa >= 1, got m={m}, kappa={kappa}")
    if kappa % 2 != 0:
        raise KappaOddWithModdP(f"kappa = {kappa} must be even")
    b = _beta(m, kappa)
    half = kappa // 2
    return math.sqrt((1.0 / m + (half - 1) * b) ** 2
                     + half * half * b * b) / kappa


def bound_sqrt_kappa(n: int, m_dim: int, kappa_count: int) -> float:
    """Mean-square argument: mu <= sqrt(#distinct values) * welch."""
    if kappa_count < 1:
        raise BadShape(f"kappa_count must be >= 1, got {kappa_count}")
    return math.sqrt(kappa_count) * welch_bound(n, m_dim)


def bound_orbit_min(group_order: int, min_orbit_block: int, n: int,
                    m_dim: int) -> float:
    """Orbit form of the mean-square bound:
    sqrt((|G| - 1)/min block size) * welch."""
    if group_order < 2 or min_orbit_block < 1:
        raise BadShape("need group_order >= 2 and min_orbit_block >= 1")
    return math.sqrt((group_order - 1) / min_orbit_block) \
        * welch_bound(n, m_dim)


def random_fourier_bound(n: int, m_dim: int) -> float:
    """High-probability coherence bound sqrt(118 (n - m) ln n / (m n)) for
    m random rows of an n-point Fourier matrix; see random_fourier_window
    for where it is proven."""
    if m_dim < 1 or n < m_dim:
        raise BadShape(f"need 1 <= m_dim <= n, got n={n}, m_dim={m_dim}")
    if n == m_dim or n < 2:
        return 0.0
    return math.sqrt(118.0 * (n - m_dim) * math.log(n) / (m_dim * n))


def random_fourier_window(n: int, m_dim: int) -> bool:
    """Whether (n, m) sits in the proven window 16 ln n <= m <= n/3."""
    return 16.0 * math.log(n) <= m_dim <= n / 3.0


def coherence_properties(mu: float, nu: float, n: int, m_dim: int,
                         log_base: float | None = None) -> dict:
    """Flags for the two coherence-property thresholds.

    Both require nu <= mu/sqrt(m); the worst-case thresholds are
    0.1/sqrt(2 log n) and 1/(164 log n).  Logs are natural by default;
    pass log_base for base-2/base-10 sensitivity.
    """
    if n < 2:
        raise BadShape(f"need n >= 2, got {n}")
    log_n = math.log(n) if log_base is None else math.log(n, log_base)
    nu_ok = nu <= mu / math.sqrt(m_dim)
    cp_threshold = 0.1 / math.sqrt(2.0 * log_n)
    scp_threshold = 1.0 / (164.0 * log_n)
    return {
        "log_base": "e" if log_base is None else log_base,
        "nu_leq_mu_over_sqrt_dim": bool(nu_ok),
        "cp_mu_threshold": cp_threshold,
        "scp_mu_threshold": scp_threshold,
        "coherence_property": bool(mu <= cp_threshold and nu_ok),
        "strong_coherence_property": bool(mu <= scp_threshold and nu_ok),
    }


# ---------------------------------------------------------------------------
# exact character-sum path
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CosetSums:
    """Normalized sums c_d = (1/m) sum_{a in A} w**Tr(a x**d), d < kappa."""

    m: int
    kappa: int
    p: int
    r: int
    values: np.ndarray = field(repr=False)


def coset_sums(spec: SubgroupSpec) -> CosetSums:
    """All kappa coset sums of the subgroup, by residue histogramming."""
    ctx, m, kappa = spec.ctx, spec.m, spec.kappa
    p, order = ctx.p, ctx.n - 1
    roots = roots_of_unity(p)
    counts = np.zeros((kappa, p), dtype=np.int64)
    block = max(1, (2 ** 22) // max(m, 1))
    for d0 in range(0, kappa, block):
        db = np.arange(d0, min(d0 + block, kappa), dtype=np.int64)
        idx = (spec.element_logs[None, :] + db[:, None]) % order
        tr = ctx.trace_of_exp[idx]
        flat = tr + (np.arange(len(db), dtype=np.int64) * p)[:, None]
        counts[d0:d0 + len(db)] += np.bincount(
            flat.ravel(), minlength=len(db) * p).reshape(len(db), p)
    values = counts @ roots / m
    return CosetSums(m=m, kappa=kappa, p=p, r=ctx.r, values=values)


def coherence_fast(spec: SubgroupSpec) -> float:
    """Frame coherence as the largest coset-sum modulus; O(n) exact path."""
    return float(np.max(np.abs(coset_sums(spec).values)))


def multiplier_sums(ctx: FieldCtx, multiplier_values) -> np.ndarray:
    """c_z = (1/m) sum_a w**Tr(az) for every z != 0, indexed by log z.

    Works for any multiplier list (zero allowed), which covers the random
    baselines; O(n) per multiplier.
    """
    mv = np.asarray(multiplier_values, dtype=np.int64)
    order = ctx.n - 1
    roots = roots_of_unity(ctx.p)
    phases = roots[ctx.trace_of_exp]
    total = np.zeros(order, dtype=np.complex128)
    for v in mv:
        if v == 0:
            total += 1.0
        else:
            total += np.roll(phases, -int(ctx.log_of_value[v]))
    return total / len(mv)


def inner_product_exact(frame: ExponentFrame, i: int, j: int) -> complex:
    """<f_i, f_j> of the normalized frame from the exponent-difference
    histogram: exact integer counts, one complex combination at the end."""
    p = frame.p
    diff = (frame.exps[:, j].astype(np.int64)
            - frame.exps[:, i].astype(np.int64)) % p
    hist = np.bincount(diff, minlength=p)
    return complex(hist @ roots_of_unity(p) / frame.m_rows)


def w_vector_check(cs: CosetSums) -> dict:
    """Fourier transform of the coset-sum vector and its deviation from
    the predicted shape: first entry -1/m, all others of modulus beta."""
    kappa, m = cs.kappa, cs.m
    gamma = np.exp(2j * np.pi * np.arange(kappa) / kappa)
    F = gamma[np.outer(np.arange(kappa), np.arange(kappa)) % kappa]
    w = F @ cs.values
    beta = _beta(m, kappa)
    dev0 = abs(w[0] + 1.0 / m)
    dev_rest = float(np.max(np.abs(np.abs(w[1:]) - beta))) if kappa > 1 else 0.0
    return {
        "w": w,
        "beta": beta,
        "max_violation": float(max(dev0, dev_rest)),
    }


# ---------------------------------------------------------------------------
# brute-force path over a materialized frame
# ---------------------------------------------------------------------------

def _require_normalized(cf: ComplexFrame):
    if not isinstance(cf, ComplexFrame):
        raise BadShape("expected a materialized ComplexFrame")
    if not cf.normalized:
        raise NotNormalized("operation requires unit-norm columns")


def cluster_complex(values, weights=None, tol: float = CLUSTER_TOL):
    """Group complex values that agree to within the tol grid.

    Returns (representatives, counts) sorted by (re, im) of the grid
    point.  The representative of a cluster is the weighted mean of its
    members, not the grid point, so downstream statistics keep full
    precision.  Weights default to 1 per value.
    """
    vals = np.asarray(values, dtype=np.complex128).ravel()
    kr = np.round(vals.real / tol).astype(np.int64)
    ki = np.round(vals.imag / tol).astype(np.int64)
    keys = kr.astype(np.complex128) + 1j * ki.astype(np.complex128)
    uniq, inverse = np.unique(keys, return_inverse=True)
    w = (np.ones(len(vals), dtype=np.int64) if weights is None
         else np.asarray(weights, dtype=np.int64))
    counts = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(counts, inverse, w)
    sums = np.zeros(len(uniq), dtype=np.complex128)
    np.add.at(sums, inverse, vals * w)
    return sums / counts, counts


def coherence_bruteforce(cf: ComplexFrame,
                         cluster_tol: float = CLUSTER_TOL,
                         census: bool = True) -> dict:
    """Full Gram computation: coherence, mean squared off-diagonal, and
    the census of distinct inner products (ordered pairs i != j).

    Pass census=False to skip the distinct-value clustering, which
    dominates the cost on large sweeps; mu and the mean square are
    unaffected.
    """
    _require_normalized(cf)
    n = cf.entries.shape[1]
    if n > BRUTE_CAP:
        raise ResourceCap(f"brute force capped at {BRUTE_CAP} columns")
    if n < 2:
        raise BadShape("need at least two columns")
    gram = cf.entries.conj().T @ cf.entries
    off = ~np.eye(n, dtype=bool)
    offvals = gram[off]
    mags = np.abs(offvals)
    out = {
        "mu": float(mags.max()),
        "gram_offdiag_mean_sq": float((mags ** 2).mean()),
        "distinct_values": None,
    }
    if census:
        reps, counts = cluster_complex(offvals, tol=cluster_tol)
        out["distinct_values"] = list(zip(reps.tolist(), counts.tolist()))
    return out


def average_coherence(cf: ComplexFrame) -> float:
    """nu = max_i |sum_{j != i} <f_i, f_j>| / (n - 1)."""
    _require_normalized(cf)
    n = cf.entries.shape[1]
    if n < 2:
        raise BadShape("need at least two columns")
    s = cf.entries.sum(axis=1)
    row_sums = cf.entries.conj().T @ s - 1.0
    return float(np.max(np.abs(row_sums)) / (n - 1))


def tightness_residual(cf: ComplexFrame) -> float:
    """max |MM* - (n/m) I|; zero(ish) iff the frame is tight."""
    _require_normalized(cf)
    m, n = cf.entries.shape
    R = cf.entries @ cf.entries.conj().T
    R[np.diag_indices(m)] -= n / m
    return float(np.max(np.abs(R)))


# ---------------------------------------------------------------------------
# report orchestration
# ---------------------------------------------------------------------------

@dataclass
class CoherenceReport:
    """Everything the analyzer determined about one frame."""

    n: int
    m_dim: int
    mu: float
    nu: float
    welch: float
    bound_general: float | None
    bound_m_odd: float | None
    bound_sqrt_kappa: float | None
    tightness_residual: float | None
    distinct_values: list
    distinct_magnitudes: list
    gram_offdiag_mean_sq: float
    property_flags: dict
    provenance: dict
    kappa: int | None = None
    random_fourier: float | None = None
    random_fourier_window_ok: bool | None = None
    paths: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "n": self.n,
            "m_dim": self.m_dim,
            "kappa": self.kappa,
            "mu": self.mu,
            "nu": self.nu,
            "welch": self.welch,
            "bound_general": self.bound_general,
            "bound_m_odd": self.bound_m_odd,
            "bound_sqrt_kappa": self.bound_sqrt_kappa,
            "random_fourier": self.random_fourier,
            "random_fourier_window_ok": self.random_fourier_window_ok,
            "tightness_residual": self.tightness_residual,
            "gram_offdiag_mean_sq": self.gram_offdiag_mean_sq,
            "distinct_values": [
                {"re": float(v.real), "im": float(v.imag), "count": int(c)}
                for v, c in self.distinct_values],
            "distinct_magnitudes": [
                {"value": float(v), "count": int(c)}
                for v, c in self.distinct_magnitudes],
            "property_flags": self.property_flags,
            "paths": self.paths,
            "provenance": self.provenance,
        }


def _magnitude_census(distinct_values, tol=CLUSTER_TOL):
    if not distinct_values:
        return []
    mags = np.abs(np.array([v for v, _ in distinct_values]))
    keys = np.round(mags / tol).astype(np.int64)
    uniq, inverse = np.unique(keys, return_inverse=True)
    counts = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(counts, inverse,
              np.array([c for _, c in distinct_values], dtype=np.int64))
    return list(zip((uniq * tol).tolist(), counts.tolist()))


def _census_mean_sq(distinct_values, n: int) -> float:
    total = sum(c * (abs(v) ** 2) for v, c in distinct_values)
    return float(total / (n * (n - 1)))


def analyze(frame, brute: str = "auto", log_base: float | None = None,
            cluster_tol: float = CLUSTER_TOL) -> CoherenceReport:
    """Analyze an exponent frame, sign matrix, or materialized frame.

    brute controls the O(n^2 m) Gram oracle: "on" forces it (error above
    the 4096-column cap), "auto" runs it up to the cap, "off" skips it.
    The exact character-sum path runs whenever the frame carries its
    multiplier structure; nu and the tightness residual additionally use
    the materialized matrix (cheap) whenever it fits in memory.  When two
    paths produce the same quantity their gap is recorded under paths.
    """
    if brute not in ("on", "off", "auto"):
        raise BadShape(f"brute must be on/off/auto, got {brute!r}")

    if isinstance(frame, SignMatrix):
        struct = frame.as_exponent_frame()
        source = frame
    elif isinstance(frame, ExponentFrame):
        struct = frame
        source = frame
    elif isinstance(frame, ComplexFrame):
        struct = None
        source = frame
    else:
        raise BadShape(f"cannot analyze {type(frame).__name__}")

    if struct is not None:
        m_rows, n_cols = struct.exps.shape
        provenance = dict(struct.provenance)
    else:
        m_rows, n_cols = source.entries.shape
        provenance = dict(source.provenance)
    if n_cols < 2:
        raise BadShape("need at least two columns to measure coherence")

    paths: dict = {}
    fast_mu = fast_nu = None
    census = []
    kappa = None

    if struct is not None and struct.ctx is not None and struct.full_columns:
        if struct.subgroup is not None:
            sub = struct.subgroup
            cs = coset_sums(sub)
            kappa = sub.kappa
            fast_mu = float(np.max(np.abs(cs.values)))
            fast_nu = float(abs(cs.values.sum() * sub.m) / (n_cols - 1))
            reps, counts = cluster_complex(cs.values, tol=cluster_tol)
            census = list(zip(reps.tolist(),
                              (counts * n_cols * sub.m).tolist()))
            paths["census_source"] = "coset-sums"
        elif struct.multiplier_values is not None:
            sums = multiplier_sums(struct.ctx, struct.multiplier_values)
            fast_mu = float(np.max(np.abs(sums)))
            fast_nu = float(abs(sums.sum()) / (n_cols - 1))
            reps, counts = cluster_complex(sums, tol=cluster_tol)
            census = list(zip(reps.tolist(), (counts * n_cols).tolist()))
            paths["census_source"] = "multiplier-sums"
        if fast_mu is not None:
            paths["mu_fast"] = fast_mu
            paths["nu_fast"] = fast_nu

    cf = None
    if isinstance(source, ComplexFrame):
        cf = source
    elif m_rows * n_cols <= COMPLEX_CELL_CAP:
        cf = materialize(source, normalize=True)

    tightness = None
    exact_nu = None
    if cf is not None:
        exact_nu = average_coherence(cf)
        tightness = tightness_residual(cf)
        paths["nu_bruteforce"] = exact_nu
        if fast_nu is not None:
            paths["nu_gap"] = abs(fast_nu - exact_nu)

    if brute == "on" and n_cols > BRUTE_CAP:
        raise ResourceCap(f"brute force requested for n = {n_cols} "
                          f"> {BRUTE_CAP}")
    brute_mu = None
    mean_sq = None
    run_brute = brute == "on" or (brute == "auto" and n_cols <= BRUTE_CAP
                                  and cf is not None)
    if run_brute:
        if cf is None:
            raise ResourceCap("frame too large to materialize for brute force")
        bf = coherence_bruteforce(cf, cluster_tol=cluster_tol)
        brute_mu = bf["mu"]
        mean_sq = bf["gram_offdiag_mean_sq"]
        paths["mu_bruteforce"] = brute_mu
        if not census:
            census = bf["distinct_values"]
            paths["census_source"] = "gram"
        if fast_mu is not None:
            paths["mu_gap"] = abs(fast_mu - brute_mu)

    if brute_mu is None and fast_mu is None:
        raise BadShape("no analysis path available: frame carries no "
                       "multiplier structure and brute force did not run")
    mu = brute_mu if brute_mu is not None else fast_mu
    nu = exact_nu if exact_nu is not None else fast_nu
    if mean_sq is None:
        mean_sq = _census_mean_sq(census, n_cols)

    welch = welch_bound(n_cols, m_rows)
    bg = bmo = bsk = None
    if kappa is not None:
        bg = bound_general_kappa(m_rows, kappa)
        bsk = bound_sqrt_kappa(n_cols, m_rows, kappa)
        bmo = bound_m_odd(m_rows, kappa) if kappa % 2 == 0 else None

    magnitudes = _magnitude_census(census, tol=cluster_tol)
    flags = coherence_properties(mu, nu, n_cols, m_rows, log_base=log_base)
    flags["equiangular"] = len(magnitudes) == 1

    return CoherenceReport(
        n=n_cols,
        m_dim=m_rows,
        mu=float(mu),
        nu=float(nu),
        welch=welch,
        bound_general=bg,
        bound_m_odd=bmo,
        bound_sqrt_kappa=bsk,
        tightness_residual=tightness,
        distinct_values=census,
        distinct_magnitudes=magnitudes,
        gram_offdiag_mean_sq=mean_sq,
        property_flags=flags,
        provenance=provenance,
        kappa=kappa,
        random_fourier=random_fourier_bound(n_cols, m_rows),
        random_fourier_window_ok=random_fourier_window(n_cols, m_rows),
        paths=paths,
    )
