"""Bounds, character sums, brute-force oracles, and the analyzer."""

import math

import numpy as np
import pytest

from groupframes.coherence import (
    analyze,
    average_coherence,
    bound_general_kappa,
    bound_m_odd,
    bound_orbit_min,
    bound_sqrt_kappa,
    cluster_complex,
    coherence_bruteforce,
    coherence_fast,
    coherence_properties,
    coset_sums,
    multiplier_sums,
    random_fourier_bound,
    random_fourier_window,
    roots_of_unity,
    tightness_residual,
    w_vector_check,
    welch_bound,
)
from groupframes.errors import (
    BadShape,
    KappaOddWithModdP,
    NotNormalized,
    ResourceCap,
)
from groupframes.frames import (
    ComplexFrame,
    build_field_frame,
    build_hadamard_frame,
    build_random_exponent_frame,
    materialize,
)
from groupframes.gf import build_field
from groupframes.subgroups import parity_of_minus_one, subgroup_of_order


def test_roots_of_unity_exact_for_p2():
    r = roots_of_unity(2)
    assert r.tolist() == [1 + 0j, -1 + 0j]
    r5 = roots_of_unity(5)
    assert abs(r5.prod() - 1) < 1e-12
    assert abs(r5.sum()) < 1e-12


def test_welch_bound_values():
    assert abs(welch_bound(1024, 341) - 0.0442482) < 1e-6
    assert abs(welch_bound(27, 13) - 0.2035193) < 1e-6
    assert welch_bound(7, 7) == 0.0
    assert welch_bound(1, 1) == 0.0
    with pytest.raises(BadShape):
        welch_bound(5, 6)
    with pytest.raises(BadShape):
        welch_bound(5, 0)


def test_bound_general_kappa_values():
    assert abs(bound_general_kappa(341, 3) - 0.06354) < 1e-5
    assert bound_general_kappa(2, 1) == 0.5
    # exceeds the measured coherence of the matching group frame
    assert bound_general_kappa(341, 3) > 0.0616
    with pytest.raises(BadShape):
        bound_general_kappa(0, 1)


def test_bound_m_odd_values():
    assert abs(bound_m_odd(13, 2) - 0.20353) < 5e-5
    assert abs(bound_m_odd(1, 2) - 1.0) < 1e-12
    with pytest.raises(KappaOddWithModdP):
        bound_m_odd(5, 3)


def test_bound_m_odd_meets_welch_at_paley():
    # kappa = 2: the refined bound collapses to the Welch bound exactly
    for m in (3, 13, 121, 665):
        n = 2 * m + 1
        assert abs(bound_m_odd(m, 2) - welch_bound(n, m)) < 1e-12


def test_bound_sqrt_kappa():
    assert bound_sqrt_kappa(27, 13, 1) == welch_bound(27, 13)
    assert abs(bound_sqrt_kappa(27, 13, 4)
               - 2 * welch_bound(27, 13)) < 1e-15
    with pytest.raises(BadShape):
        bound_sqrt_kappa(27, 13, 0)


def test_bound_orbit_min():
    got = bound_orbit_min(27, 13, 27, 13)
    assert abs(got - math.sqrt(2) * welch_bound(27, 13)) < 1e-12
    assert abs(got - 0.2878) < 5e-4


def test_random_fourier_bound():
    assert abs(random_fourier_bound(1024, 341) - 1.2649) < 5e-4
    assert random_fourier_bound(16, 16) == 0.0
    assert random_fourier_window(1024, 341)
    assert not random_fourier_window(1024, 10)
    assert not random_fourier_window(1024, 512)


def test_coherence_properties_thresholds():
    flags = coherence_properties(0.0616, 1 / 1023, 1024, 341)
    assert abs(flags["cp_mu_threshold"] - 0.1 / math.sqrt(2 * math.log(1024))) < 1e-12
    assert abs(flags["scp_mu_threshold"] - 1 / (164 * math.log(1024))) < 1e-12
    assert not flags["coherence_property"]
    assert not flags["strong_coherence_property"]
    assert flags["nu_leq_mu_over_sqrt_dim"]
    assert flags["log_base"] == "e"
    base2 = coherence_properties(0.0616, 1 / 1023, 1024, 341, log_base=2)
    assert base2["log_base"] == 2
    assert base2["cp_mu_threshold"] < flags["cp_mu_threshold"]


def test_coset_sum_identity():
    # 1 + m * sum_d c_d = 0 for every subgroup
    for p, r, m in [(3, 3, 13), (7, 1, 3), (2, 8, 51), (5, 2, 8),
                    (13, 1, 6)]:
        spec = subgroup_of_order(build_field(p, r), m)
        cs = coset_sums(spec)
        assert abs(1 + m * cs.values.sum()) < 1e-9


def test_coset_sum_conjugation_symmetry():
    for p, r, m in [(3, 3, 13), (5, 2, 8), (13, 1, 6), (3, 5, 121),
                    (13, 1, 3)]:
        spec = subgroup_of_order(build_field(p, r), m)
        cs = coset_sums(spec)
        if parity_of_minus_one(spec)["in_A"]:
            # -A = A makes every sum real
            assert np.max(np.abs(cs.values.imag)) < 1e-12
        else:
            half = spec.kappa // 2
            paired = np.conj(np.roll(cs.values, -half))
            assert np.max(np.abs(cs.values - paired)) < 1e-12


def test_w_vector_identity():
    for p, r, m in [(3, 3, 13), (2, 8, 51), (7, 1, 3), (11, 1, 5)]:
        spec = subgroup_of_order(build_field(p, r), m)
        res = w_vector_check(coset_sums(spec))
        assert res["max_violation"] < 1e-9
    spec = subgroup_of_order(build_field(3, 3), 13)
    assert abs(w_vector_check(coset_sums(spec))["beta"] - 0.39970) < 5e-5


def test_multiplier_sums_extend_coset_sums():
    ctx = build_field(3, 3)
    spec = subgroup_of_order(ctx, 13)
    cs = coset_sums(spec)
    ms = multiplier_sums(ctx, spec.element_values)
    # sums indexed by log z; constant on cosets (log mod kappa)
    for ell in range(ctx.n - 1):
        assert abs(ms[ell] - cs.values[ell % spec.kappa]) < 1e-12


def test_coherence_fast_equals_bruteforce_small():
    for p, r, m in [(3, 3, 13), (7, 1, 3), (2, 5, 31), (5, 2, 12)]:
        spec = subgroup_of_order(build_field(p, r), m)
        fast = coherence_fast(spec)
        cf = materialize(build_field_frame(p, r, m))
        brute = coherence_bruteforce(cf)["mu"]
        assert abs(fast - brute) < 1e-9


def test_bruteforce_orthonormal_and_duplicates():
    eye = ComplexFrame(entries=np.eye(4, dtype=np.complex128),
                       normalized=True, provenance={})
    res = coherence_bruteforce(eye)
    assert res["mu"] == 0.0
    assert average_coherence(eye) == 0.0
    dup = ComplexFrame(entries=np.ones((3, 2), dtype=np.complex128)
                       / np.sqrt(3), normalized=True, provenance={})
    assert abs(coherence_bruteforce(dup)["mu"] - 1.0) < 1e-12


def test_bruteforce_guards():
    raw = ComplexFrame(entries=np.ones((2, 2), dtype=np.complex128),
                       normalized=False, provenance={})
    with pytest.raises(NotNormalized):
        coherence_bruteforce(raw)
    one = ComplexFrame(entries=np.ones((2, 1), dtype=np.complex128)
                       / np.sqrt(2), normalized=True, provenance={})
    with pytest.raises(BadShape):
        coherence_bruteforce(one)


def test_tightness_residual():
    cf = materialize(build_field_frame(3, 3, 13))
    assert tightness_residual(cf) < 1e-12
    flat = ComplexFrame(entries=np.ones((2, 4), dtype=np.complex128)
                        / np.sqrt(2), normalized=True, provenance={})
    assert tightness_residual(flat) > 1.0


def test_cluster_complex_merges_near_values():
    vals = np.array([0.1 + 0.2j, 0.1 + 0.2j + 1e-12, 0.5])
    reps, counts = cluster_complex(vals, tol=1e-9)
    assert len(reps) == 2
    assert sorted(counts.tolist()) == [1, 2]
    reps2, counts2 = cluster_complex(vals, weights=[2, 3, 4], tol=1e-9)
    assert sorted(counts2.tolist()) == [4, 5]


def test_analyze_census_covers_all_pairs():
    for frame in (build_field_frame(3, 3, 13),
                  build_hadamard_frame(8, 51),
                  build_random_exponent_frame(3, 3, 13, seed=2)):
        rep = analyze(frame, brute="off")
        total = sum(c for _, c in rep.distinct_values)
        assert total == rep.n * (rep.n - 1)


def test_analyze_mean_square_equals_welch_square():
    # tight frames meet the mean-square version of the Welch bound
    for frame in (build_field_frame(3, 3, 13), build_hadamard_frame(8, 85)):
        rep = analyze(frame, brute="off")
        assert abs(rep.gram_offdiag_mean_sq - rep.welch ** 2) < 1e-12


def test_analyze_fast_brute_gaps():
    rep = analyze(build_field_frame(3, 3, 13), brute="on")
    assert rep.paths["mu_gap"] < 1e-9
    assert rep.paths["nu_gap"] < 1e-9
    assert rep.paths["census_source"] == "coset-sums"


def test_analyze_group_frame_invariants():
    rep = analyze(build_field_frame(3, 5, 121), brute="off")
    assert abs(rep.nu - 1 / (rep.n - 1)) < 1e-9
    assert rep.tightness_residual < 1e-9
    assert rep.welch <= rep.mu + 1e-12
    assert rep.kappa == 2
    assert rep.property_flags["equiangular"]


def test_analyze_random_frame_not_tight_label():
    rep = analyze(build_random_exponent_frame(3, 3, 13, seed=8), brute="on")
    assert rep.kappa is None
    assert rep.paths["census_source"] == "multiplier-sums"
    assert rep.paths["mu_gap"] < 1e-9
    assert sum(c for _, c in rep.distinct_values) == rep.n * (rep.n - 1)


def test_analyze_brute_flag_validation():
    f = build_field_frame(3, 3, 13)
    with pytest.raises(BadShape):
        analyze(f, brute="maybe")
    big = build_hadamard_frame(13, 1)  # 8192 columns
    with pytest.raises(ResourceCap):
        analyze(big, brute="on")


def test_analyze_report_dict_schema():
    d = analyze(build_field_frame(3, 3, 13), brute="on").to_dict()
    for key in ("schema_version", "n", "m_dim", "kappa", "mu", "nu",
                "welch", "bound_general", "bound_m_odd", "bound_sqrt_kappa",
                "random_fourier", "random_fourier_window_ok",
                "tightness_residual", "gram_offdiag_mean_sq",
                "distinct_values", "distinct_magnitudes", "property_flags",
                "paths", "provenance"):
        assert key in d
    assert d["schema_version"] == 1
    assert d["distinct_values"][0].keys() == {"re", "im", "count"}
    assert d["distinct_magnitudes"][0].keys() == {"value", "count"}
