"""Frame construction, materialization, and file round trips."""

import json
import os

import numpy as np
import pytest

from groupframes.coherence import inner_product_exact
from groupframes.errors import (
    BadShape,
    ContextMismatch,
    NotPrime,
    TooManyRows,
)
from groupframes.frames import (
    SignMatrix,
    build_field_frame,
    build_hadamard_frame,
    build_harmonic_frame,
    build_random_exponent_frame,
    build_random_hadamard_frame,
    load_frame,
    materialize,
    save_complex_csv,
    save_exponent_csv,
    save_sign_csv,
)
from groupframes.gf import build_field


def test_trivial_prime_field_row():
    f = build_field_frame(3, 1, 1)
    assert f.exps.shape == (1, 3)
    assert f.exps[0].tolist() == [0, 1, 2]


def test_f7_rows_by_hand():
    # columns ordered [0, g^0, g^1, ...] with g = 3; rows are a*x mod 7
    f = build_field_frame(7, 1, 3)
    cols = [0, 1, 3, 2, 6, 4, 5]
    assert f.multiplier_values.tolist() == [1, 2, 4]
    for i, a in enumerate([1, 2, 4]):
        assert f.exps[i].tolist() == [(a * x) % 7 for x in cols]


def test_field_frame_shape_and_range():
    f = build_field_frame(3, 3, 13)
    assert f.exps.shape == (13, 27)
    assert f.exps.min() == 0 and f.exps.max() <= 2
    assert f.provenance["construction"] == "field-subgroup"
    assert f.provenance["kappa"] == 2
    assert f.full_columns


def test_rows_distinct():
    for f in (build_field_frame(3, 3, 13), build_field_frame(7, 1, 3)):
        rows = {tuple(int(e) for e in row) for row in f.exps}
        assert len(rows) == f.m_rows


def test_harmonic_frame():
    f = build_harmonic_frame(499, 166)
    assert f.exps.shape == (166, 499)
    assert f.provenance["construction"] == "harmonic"
    with pytest.raises(NotPrime):
        build_harmonic_frame(500, 100)


def test_hadamard_sylvester_oracle():
    # row labels and column values must index into the Sylvester matrix
    # H[i, j] = (-1)^popcount(i & j)
    for r, m in [(2, 3), (3, 7), (4, 5)]:
        sm = build_hadamard_frame(r, m)
        assert isinstance(sm, SignMatrix)
        labels = sm.provenance["sylvester_rows"]
        ctx = build_field(2, r)
        col_values = np.concatenate([[0], ctx.value_of_exp])
        for i, lab in enumerate(labels):
            expect = [(-1) ** bin(lab & int(v)).count("1")
                      for v in col_values]
            assert sm.entries[i].tolist() == expect


def test_hadamard_rows_nonconstant():
    sm = build_hadamard_frame(2, 3)
    assert sm.entries.shape == (3, 4)
    for row in sm.entries:
        assert row.sum() == 0  # nontrivial characters balance


def test_sign_to_exponent_conversion():
    sm = build_hadamard_frame(3, 7)
    ef = sm.as_exponent_frame()
    assert np.array_equal(1 - 2 * ef.exps.astype(np.int64), sm.entries)
    assert ef.ctx is sm.ctx
    assert ef.subgroup is sm.subgroup


def test_random_frames_reproducible():
    a = build_random_exponent_frame(3, 3, 13, seed=42)
    b = build_random_exponent_frame(3, 3, 13, seed=42)
    c = build_random_exponent_frame(3, 3, 13, seed=43)
    assert np.array_equal(a.exps, b.exps)
    assert a.provenance == b.provenance
    assert not np.array_equal(a.multiplier_values, c.multiplier_values)
    assert a.provenance["sampling"] == "without-replacement-draw-order"
    assert a.provenance["seed"] == 42


def test_random_multipliers_distinct_and_in_range():
    f = build_random_exponent_frame(2, 8, 51, seed=1)
    mv = f.multiplier_values
    assert len(set(int(v) for v in mv)) == 51
    assert mv.min() >= 0 and mv.max() < 256  # zero row is allowed


def test_random_bernoulli_mode():
    f = build_random_exponent_frame(2, 8, 51, seed=5, bernoulli=True)
    assert f.provenance["sampling"] == "bernoulli-rate-m-over-n"
    assert f.provenance["m_requested"] == 51
    assert f.provenance["m"] == f.m_rows
    assert f.m_rows != 0


def test_random_hadamard_sign_entries():
    sm = build_random_hadamard_frame(6, 10, seed=9)
    assert sm.entries.shape == (10, 64)
    assert set(np.unique(sm.entries)) <= {-1, 1}
    assert sm.provenance["construction"] == "random-hadamard-rows"


def test_too_many_rows():
    with pytest.raises(TooManyRows):
        build_random_exponent_frame(3, 1, 4, seed=0)


def test_full_character_table_is_unitary():
    # drawing all n multipliers gives the complete Fourier matrix
    f = build_random_exponent_frame(5, 1, 5, seed=11)
    cf = materialize(f)
    gram = cf.entries.conj().T @ cf.entries
    assert np.max(np.abs(gram - np.eye(5))) < 1e-12


def test_materialize_norms():
    f = build_field_frame(3, 3, 13)
    cf = materialize(f)
    norms = np.linalg.norm(cf.entries, axis=0)
    assert np.max(np.abs(norms - 1.0)) < 1e-12
    raw = materialize(f, normalize=False)
    assert np.max(np.abs(np.linalg.norm(raw.entries, axis=0)
                         - np.sqrt(13))) < 1e-12


def test_materialize_hadamard_exact():
    sm = build_hadamard_frame(3, 7)
    cf = materialize(sm, normalize=False)
    assert np.array_equal(cf.entries.real.astype(np.int8), sm.entries)
    assert np.all(cf.entries.imag == 0)


def test_inner_product_exact_matches_gram():
    f = build_field_frame(3, 3, 13)
    cf = materialize(f)
    gram = cf.entries.conj().T @ cf.entries
    for i, j in [(0, 1), (3, 17), (26, 2), (5, 5)]:
        assert abs(inner_product_exact(f, i, j) - gram[i, j]) < 1e-12


def test_exponent_csv_round_trip(tmp_path):
    f = build_field_frame(3, 3, 13)
    path = str(tmp_path / "f.csv")
    save_exponent_csv(f, path)
    g = load_frame(path)
    assert np.array_equal(g.exps, f.exps)
    assert g.ctx is not None
    assert g.subgroup is not None and g.subgroup.m == 13
    assert g.full_columns


def test_random_exponent_csv_round_trip(tmp_path):
    f = build_random_exponent_frame(3, 3, 13, seed=4)
    path = str(tmp_path / "r.csv")
    save_exponent_csv(f, path)
    g = load_frame(path)
    assert np.array_equal(g.exps, f.exps)
    assert np.array_equal(g.multiplier_values, f.multiplier_values)


def test_sign_csv_round_trip(tmp_path):
    sm = build_hadamard_frame(3, 7)
    path = str(tmp_path / "s.csv")
    save_sign_csv(sm, path)
    g = load_frame(path)
    assert isinstance(g, SignMatrix)
    assert np.array_equal(g.entries, sm.entries)


def test_bare_csv_rejects_non_sign_entries(tmp_path):
    path = str(tmp_path / "bad.csv")
    with open(path, "w") as fh:
        fh.write("1,2\n-1,1\n")
    with pytest.raises(BadShape):
        load_frame(path)


def test_tampered_modulus_rejected(tmp_path):
    f = build_field_frame(3, 3, 13)
    path = str(tmp_path / "f.csv")
    save_exponent_csv(f, path)
    with open(path) as fh:
        lines = fh.readlines()
    header = json.loads(lines[0][1:])
    header["modulus"] = [2, 1, 0, 1]
    lines[0] = "# " + json.dumps(header, sort_keys=True) + "\n"
    with open(path, "w") as fh:
        fh.writelines(lines)
    with pytest.raises(ContextMismatch):
        load_frame(path)


def test_complex_csv_written(tmp_path):
    f = build_field_frame(3, 1, 2)
    cf = materialize(f)
    path = str(tmp_path / "c.csv")
    save_complex_csv(cf, path)
    data = np.loadtxt(path, delimiter=",")
    assert data.shape == (2, 6)  # re,im pairs for 3 columns
    back = data[:, 0::2] + 1j * data[:, 1::2]
    assert np.max(np.abs(back - cf.entries)) < 1e-16
