"""Frame construction from additive characters of GF(p**r).

A frame here is an m x n matrix whose columns are indexed by the n field
elements (zero first, then ascending powers of the canonical generator)
and whose rows are the characters x -> w**Tr(ax) for a chosen list of
multipliers a, with w the primitive p-th root of unity.  Choosing the
multipliers to be the order-m subgroup of the unit group gives the group
frames; choosing them at random gives the seeded baselines.  Entries are
stored as exponents of w (or as signs when p = 2) and materialized to
complex on demand.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadShape,
    ContextMismatch,
    NotPrime,
    ResourceCap,
    TooManyRows,
)
from .gf import FieldCtx, build_field, is_prime
from .subgroups import SubgroupSpec, subgroup_of_order

EXP_CELL_CAP = 2 ** 28
COMPLEX_CELL_CAP = 2 ** 26

RNG_NAME = "numpy.random.default_rng(PCG64)"


@dataclass
class ExponentFrame:
    """Frame stored as integer exponents of the p-th root of unity."""

    p: int
    exps: np.ndarray = field(repr=False)
    provenance: dict
    ctx: FieldCtx | None = None
    subgroup: SubgroupSpec | None = None
    multiplier_values: np.ndarray | None = field(default=None, repr=False)
    full_columns: bool = False

    @property
    def m_rows(self) -> int:
        return self.exps.shape[0]

    @property
    def n_cols(self) -> int:
        return self.exps.shape[1]


@dataclass
class SignMatrix:
    """p = 2 frame stored as +-1 entries; rows are Hadamard matrix rows."""

    entries: np.ndarray = field(repr=False)
    provenance: dict
    ctx: FieldCtx | None = None
    subgroup: SubgroupSpec | None = None
    multiplier_values: np.ndarray | None = field(default=None, repr=False)
    full_columns: bool = False
    sylvester_rows: list[int] | None = None

    @property
    def m_rows(self) -> int:
        return self.entries.shape[0]

    @property
    def n_cols(self) -> int:
        return self.entries.shape[1]

    def as_exponent_frame(self) -> ExponentFrame:
        exps = ((1 - self.entries.astype(np.int64)) // 2).astype(np.uint8)
        return ExponentFrame(
            p=2, exps=exps, provenance=dict(self.provenance), ctx=self.ctx,
            subgroup=self.subgroup, multiplier_values=self.multiplier_values,
            full_columns=self.full_columns)


@dataclass
class ComplexFrame:
    """Materialized frame; columns have unit norm when normalized."""

    entries: np.ndarray = field(repr=False)
    normalized: bool
    provenance: dict

    @property
    def m_rows(self) -> int:
        return self.entries.shape[0]

    @property
    def n_cols(self) -> int:
        return self.entries.shape[1]


def _check_cells(m: int, n: int, cap: int):
    if m * n > cap:
        raise ResourceCap(f"{m} x {n} matrix exceeds cell cap {cap}")


def _exponent_rows(ctx: FieldCtx, multiplier_values) -> np.ndarray:
    """exps[i][j] = Tr(a_i x_j) with x_0 = 0 and x_j = g**(j-1)."""
    mv = np.asarray(multiplier_values, dtype=np.int64)
    m, n, order = len(mv), ctx.n, ctx.n - 1
    _check_cells(m, n, EXP_CELL_CAP)
    exps = np.zeros((m, n), dtype=ctx.coeff_dtype)
    nonzero = mv != 0
    logs = ctx.log_of_value[mv[nonzero]]
    cols = np.arange(order, dtype=np.int64)
    block = max(1, (2 ** 24) // max(order, 1))
    tgt = np.flatnonzero(nonzero)
    for i0 in range(0, len(logs), block):
        idx = (logs[i0:i0 + block, None] + cols[None, :]) % order
        exps[tgt[i0:i0 + block], 1:] = ctx.trace_of_exp[idx]
    return exps


def _base_provenance(ctx: FieldCtx) -> dict:
    return {
        "p": ctx.p,
        "r": ctx.r,
        "n": ctx.n,
        "modulus": [int(c) for c in ctx.modulus],
        "generator_value": int(ctx.generator.value),
        "column_order": "zero-then-generator-powers",
    }


def _resolve_ctx(p: int, r: int, ctx: FieldCtx | None) -> FieldCtx:
    if ctx is None:
        return build_field(p, r)
    if ctx.p != p or ctx.r != r:
        raise ContextMismatch(f"context {ctx.ctx_id} is not GF({p}^{r})")
    return ctx


def build_field_frame(p: int, r: int, m: int,
                      ctx: FieldCtx | None = None) -> ExponentFrame:
    """Group frame: rows indexed by the order-m unit subgroup."""
    ctx = _resolve_ctx(p, r, ctx)
    spec = subgroup_of_order(ctx, m)
    exps = _exponent_rows(ctx, spec.element_values)
    prov = _base_provenance(ctx)
    prov.update({
        "construction": "field-subgroup",
        "m": m,
        "kappa": spec.kappa,
        "row_order": "subgroup-power-order",
    })
    return ExponentFrame(p=p, exps=exps, provenance=prov, ctx=ctx,
                         subgroup=spec,
                         multiplier_values=spec.element_values,
                         full_columns=True)


def build_harmonic_frame(n: int, m: int) -> ExponentFrame:
    """Prime-field special case: m rows of the n x n DFT matrix."""
    if not is_prime(n):
        raise NotPrime(f"harmonic frames need n prime, got {n}")
    f = build_field_frame(n, 1, m)
    f.provenance["construction"] = "harmonic"
    return f


def _sylvester_row_labels(ctx: FieldCtx, multiplier_values) -> list[int]:
    # row for multiplier a equals the Sylvester-Hadamard row whose index
    # has bit j equal to Tr(a t**j), matching the column relabeling
    # x -> sum x_j 2**j
    order = ctx.n - 1
    mono_logs = np.array([ctx.log_of_value[2 ** j] for j in range(ctx.r)],
                         dtype=np.int64)
    labels = []
    for v in np.asarray(multiplier_values, dtype=np.int64):
        if v == 0:
            labels.append(0)
            continue
        la = int(ctx.log_of_value[v])
        bits = ctx.trace_of_exp[(la + mono_logs) % order]
        labels.append(int(np.sum(bits.astype(np.int64) << np.arange(ctx.r))))
    return labels


def build_hadamard_frame(r: int, m: int,
                         ctx: FieldCtx | None = None) -> SignMatrix:
    """Rows of the 2**r Sylvester-Hadamard matrix picked by the order-m
    subgroup of GF(2**r)*."""
    ef = build_field_frame(2, r, m, ctx=ctx)
    entries = (1 - 2 * ef.exps.astype(np.int64)).astype(np.int8)
    labels = _sylvester_row_labels(ef.ctx, ef.multiplier_values)
    prov = dict(ef.provenance)
    prov.update({"construction": "hadamard-rows", "sylvester_rows": labels})
    return SignMatrix(entries=entries, provenance=prov, ctx=ef.ctx,
                      subgroup=ef.subgroup,
                      multiplier_values=ef.multiplier_values,
                      full_columns=True, sylvester_rows=labels)


def _draw_multipliers(n: int, m: int, seed: int, bernoulli: bool):
    rng = np.random.default_rng(seed)
    if bernoulli:
        mask = rng.random(n) < m / n
        values = np.flatnonzero(mask).astype(np.int64)
        if len(values) == 0:
            raise BadShape("bernoulli draw selected zero rows; use another "
                           "seed or a larger m")
        mode = "bernoulli-rate-m-over-n"
    else:
        if m > n:
            raise TooManyRows(f"cannot draw {m} distinct multipliers from {n}")
        values = rng.choice(n, size=m, replace=False).astype(np.int64)
        mode = "without-replacement-draw-order"
    return values, mode


def build_random_exponent_frame(p: int, r: int, m: int, seed: int,
                                ctx: FieldCtx | None = None,
                                bernoulli: bool = False) -> ExponentFrame:
    """Seeded baseline: m rows of the full character table chosen at
    random (uniform multipliers, zero allowed)."""
    if m < 1:
        raise BadShape(f"need m >= 1, got {m}")
    ctx = _resolve_ctx(p, r, ctx)
    values, mode = _draw_multipliers(ctx.n, m, seed, bernoulli)
    exps = _exponent_rows(ctx, values)
    prov = _base_provenance(ctx)
    prov.update({
        "construction": "random-multipliers",
        "m": int(len(values)),
        "m_requested": m,
        "seed": seed,
        "rng": RNG_NAME,
        "sampling": mode,
        "multiplier_values": [int(v) for v in values],
    })
    return ExponentFrame(p=p, exps=exps, provenance=prov, ctx=ctx,
                         multiplier_values=values, full_columns=True)


def build_random_hadamard_frame(r: int, m: int, seed: int,
                                ctx: FieldCtx | None = None,
                                bernoulli: bool = False) -> SignMatrix:
    """Seeded baseline: random rows of the 2**r Sylvester-Hadamard matrix."""
    ef = build_random_exponent_frame(2, r, m, seed, ctx=ctx,
                                     bernoulli=bernoulli)
    entries = (1 - 2 * ef.exps.astype(np.int64)).astype(np.int8)
    labels = _sylvester_row_labels(ef.ctx, ef.multiplier_values)
    prov = dict(ef.provenance)
    prov.update({"construction": "random-hadamard-rows",
                 "sylvester_rows": labels})
    return SignMatrix(entries=entries, provenance=prov, ctx=ef.ctx,
                      multiplier_values=ef.multiplier_values,
                      full_columns=True, sylvester_rows=labels)


def materialize(frame, normalize: bool = True) -> ComplexFrame:
    """Turn an exponent frame or sign matrix into complex entries,
    scaling columns to unit norm when normalize is set."""
    if isinstance(frame, SignMatrix):
        _check_cells(frame.m_rows, frame.n_cols, COMPLEX_CELL_CAP)
        entries = frame.entries.astype(np.complex128)
    elif isinstance(frame, ExponentFrame):
        _check_cells(frame.m_rows, frame.n_cols, COMPLEX_CELL_CAP)
        if frame.p == 2:
            entries = (1.0 - 2.0 * frame.exps.astype(np.float64)) + 0.0j
        else:
            roots = np.exp(2j * np.pi * np.arange(frame.p) / frame.p)
            entries = roots[frame.exps.astype(np.int64)]
    else:
        raise BadShape(f"cannot materialize {type(frame).__name__}")
    if normalize:
        entries = entries / np.sqrt(frame.m_rows)
    prov = dict(frame.provenance)
    prov["normalized"] = normalize
    return ComplexFrame(entries=entries, normalized=normalize,
                        provenance=prov)


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

def save_exponent_csv(frame: ExponentFrame, path: str) -> None:
    """CSV of integer exponents with a JSON header line (leading '#')."""
    header = {
        "format": "exponent-frame/1",
        "p": frame.p,
        "m_rows": frame.m_rows,
        "n_cols": frame.n_cols,
        "full_columns": frame.full_columns,
    }
    for key in ("r", "modulus", "generator_value", "m", "seed",
                "construction", "column_order"):
        if key in frame.provenance:
            header[key] = frame.provenance[key]
    if frame.multiplier_values is not None:
        header["multiplier_values"] = [int(v) for v in frame.multiplier_values]
    with open(path, "w", newline="\n") as fh:
        fh.write("# " + json.dumps(header, sort_keys=True) + "\n")
        for row in frame.exps:
            fh.write(",".join(str(int(e)) for e in row) + "\n")


def save_sign_csv(sm: SignMatrix, path: str) -> None:
    """Plain CSV of +-1 integers, one row per line."""
    with open(path, "w", newline="\n") as fh:
        for row in sm.entries:
            fh.write(",".join(str(int(e)) for e in row) + "\n")


def save_complex_csv(cf: ComplexFrame, path: str) -> None:
    """CSV with alternating re,im columns at 17 significant digits."""
    with open(path, "w", newline="\n") as fh:
        for row in cf.entries:
            parts = []
            for z in row:
                parts.append(f"{z.real:.17g}")
                parts.append(f"{z.imag:.17g}")
            fh.write(",".join(parts) + "\n")


def load_frame(path: str):
    """Read back an exponent CSV (with header) or a bare sign CSV.

    Exponent frames whose header carries the field parameters are
    reattached to a freshly built context so the exact analysis paths
    work; bare sign matrices only support the brute-force path.
    """
    with open(path) as fh:
        first = fh.readline()
        if first.startswith("#"):
            header = json.loads(first[1:].strip())
            exps = np.loadtxt(fh, delimiter=",", dtype=np.int64, ndmin=2)
            p = int(header["p"])
            ctx = subgroup = None
            mv = None
            if "r" in header:
                ctx = build_field(p, int(header["r"]))
                if "modulus" in header and \
                        list(ctx.modulus) != list(header["modulus"]):
                    raise ContextMismatch("stored modulus does not match "
                                          "canonical construction")
                if header.get("construction") == "field-subgroup" or \
                        header.get("construction") == "harmonic" or \
                        header.get("construction") == "hadamard-rows":
                    subgroup = subgroup_of_order(ctx, int(header["m"]))
                    mv = subgroup.element_values
                elif "multiplier_values" in header:
                    mv = np.array(header["multiplier_values"], dtype=np.int64)
            return ExponentFrame(
                p=p, exps=exps.astype(np.int64), provenance=header, ctx=ctx,
                subgroup=subgroup, multiplier_values=mv,
                full_columns=bool(header.get("full_columns", False)))
    data = np.loadtxt(path, delimiter=",", dtype=np.int64, ndmin=2)
    if not np.all(np.isin(data, (-1, 1))):
        raise BadShape(f"{path}: bare CSV must contain only +-1 entries")
    return SignMatrix(entries=data.astype(np.int8),
                      provenance={"construction": "loaded-sign-csv"})
