"""Tests for dual families, defects, corrections, and reconstruction."""

import numpy as np
import pytest

from kgframes import (
    DimMismatchError,
    GSystem,
    KGSystem,
    NotAFrameError,
    NotApproxDualError,
    NotInRangeError,
    RangeConditionError,
    SubspaceFrameFamily,
    approx_defect,
    canonical_kg_dual,
    corner_projection_system,
    exactify_dual,
    frame_operator,
    is_kg_dual,
    lift_to_vector_frames,
    mixed_operator,
    neumann_reconstruct,
    optimal_bounds,
    perturbed_dual,
    pinv,
    random_frame_family,
    range_projector,
    truncated_neumann_dual,
)
from kgframes.linops import op_norm

from oracles import complex_gaussian, random_instance, random_range_vector


def _zero_candidate(sys: GSystem) -> GSystem:
    return GSystem(sys.ambient_dim, tuple(np.zeros_like(b) for b in sys.blocks))


def test_mixed_operator_requires_matching_shapes():
    a = GSystem(3, (np.zeros((2, 3)),))
    b = GSystem(4, (np.zeros((2, 4)),))
    with pytest.raises(DimMismatchError):
        mixed_operator(a, b)
    c = GSystem(3, (np.zeros((1, 3)),))
    with pytest.raises(DimMismatchError):
        mixed_operator(a, c)


def test_canonical_dual_of_identity_system_is_identity():
    ksys = KGSystem(GSystem(3, (np.eye(3),)), np.eye(3))
    dual = canonical_kg_dual(ksys)
    assert np.allclose(dual.blocks[0], np.eye(3), atol=1e-12)


def test_canonical_dual_of_corner_projection():
    ksys = corner_projection_system(6)
    dual = canonical_kg_dual(ksys)
    expected = np.zeros((3, 6))
    expected[0, 0] = expected[1, 1] = 1.0  # e2 row dies with the projector
    assert np.allclose(dual.blocks[0], expected, atol=1e-12)
    for b in dual.blocks[1:]:
        assert np.linalg.norm(b) == 0.0


def test_canonical_dual_requires_range_condition():
    bad = KGSystem(
        GSystem(2, (np.array([[1.0, 0.0]]),)),
        np.array([[0.0, 0.0], [1.0, 0.0]]),
    )
    with pytest.raises(RangeConditionError):
        canonical_kg_dual(bad)


def test_canonical_dual_reconstructs_on_range_of_k():
    for seed in range(20):
        ksys = random_instance(seed)
        dual = canonical_kg_dual(ksys)
        cert = approx_defect(ksys.system, dual, ksys.k)
        assert cert.defect <= 1e-10
        assert cert.interchange_defect <= 1e-10
        assert cert.is_exact_dual
        assert is_kg_dual(ksys.system, dual, ksys.k)


def test_defect_of_zero_candidate_is_one():
    ksys = random_instance(70)
    cert = approx_defect(ksys.system, _zero_candidate(ksys.system), ksys.k)
    assert abs(cert.defect - 1.0) <= 1e-12
    assert not cert.is_exact_dual


def test_defect_of_scaled_canonical_dual():
    ksys = random_instance(71)
    dual = canonical_kg_dual(ksys)
    for delta in (0.25, 0.5):
        scaled = GSystem(dual.ambient_dim, tuple((1 + delta) * b for b in dual.blocks))
        cert = approx_defect(ksys.system, scaled, ksys.k)
        assert abs(cert.defect - delta) <= 1e-9
        assert abs(cert.interchange_defect - delta) <= 1e-9
        assert cert.is_approx_dual and not cert.is_exact_dual


def test_perturbed_dual_hits_requested_defect():
    for seed, eps in ((0, 0.3), (1, 0.5), (2, 0.8), (3, 0.05)):
        ksys = random_instance(80 + seed)
        cand = perturbed_dual(ksys, eps, seed=seed)
        cert = approx_defect(ksys.system, cand, ksys.k)
        assert abs(cert.defect - eps) <= 1e-12
    assert perturbed_dual(random_instance(80), 0.0, seed=0)  # exact dual back


def test_perturbed_dual_validates_defect():
    ksys = random_instance(81)
    with pytest.raises(ValueError):
        perturbed_dual(ksys, 1.0, seed=0)
    with pytest.raises(ValueError):
        perturbed_dual(ksys, -0.1, seed=0)


def test_exactify_rejects_non_contractive_candidates():
    ksys = random_instance(72)
    with pytest.raises(NotApproxDualError):
        exactify_dual(ksys.system, _zero_candidate(ksys.system), ksys.k)


def test_exactify_recovers_canonical_dual_from_scaling():
    ksys = random_instance(73)
    dual = canonical_kg_dual(ksys)
    shrunk = GSystem(dual.ambient_dim, tuple(0.7 * b for b in dual.blocks))
    fixed = exactify_dual(ksys.system, shrunk, ksys.k)
    p = range_projector(ksys.k)
    for fb, db in zip(fixed.blocks, dual.blocks):
        # agreement after restriction to range(K), where the dual acts
        assert np.allclose(fb @ p, db @ p, atol=1e-10)
    assert approx_defect(ksys.system, fixed, ksys.k).defect <= 1e-10


def test_exactify_drives_defect_below_threshold():
    for seed, eps in ((0, 0.9), (1, 0.5), (2, 0.999), (3, 0.1)):
        ksys = random_instance(90 + seed)
        cand = perturbed_dual(ksys, eps, seed=seed)
        fixed = exactify_dual(ksys.system, cand, ksys.k)
        assert approx_defect(ksys.system, fixed, ksys.k).defect <= 1e-9


def test_truncated_dual_geometric_defect_decay():
    ksys = random_instance(74)
    for eps, terms in ((0.5, 3), (0.8, 10)):
        cand = perturbed_dual(ksys, eps, seed=5)
        trunc = truncated_neumann_dual(ksys.system, cand, ksys.k, terms)
        cert = approx_defect(ksys.system, trunc, ksys.k)
        assert cert.defect <= eps ** (terms + 1) + 1e-9


def test_truncated_dual_defect_is_monotone_in_terms():
    ksys = random_instance(75)
    cand = perturbed_dual(ksys, 0.7, seed=6)
    defects = []
    for terms in range(8):
        trunc = truncated_neumann_dual(ksys.system, cand, ksys.k, terms)
        defects.append(approx_defect(ksys.system, trunc, ksys.k).defect)
    for prev, nxt in zip(defects, defects[1:]):
        assert nxt <= prev + 1e-12


def test_truncated_dual_zero_terms_restricts_candidate():
    ksys = random_instance(76)
    cand = perturbed_dual(ksys, 0.4, seed=7)
    trunc = truncated_neumann_dual(ksys.system, cand, ksys.k, 0)
    p = range_projector(ksys.k)
    for tb, cb in zip(trunc.blocks, cand.blocks):
        assert np.allclose(tb, cb @ p, atol=1e-12)


def test_truncated_dual_validates_input():
    ksys = random_instance(77)
    cand = perturbed_dual(ksys, 0.4, seed=8)
    with pytest.raises(ValueError):
        truncated_neumann_dual(ksys.system, cand, ksys.k, -1)
    with pytest.raises(NotApproxDualError):
        truncated_neumann_dual(ksys.system, _zero_candidate(ksys.system), ksys.k, 2)


def test_reconstruction_with_exact_dual_converges_immediately():
    ksys = random_instance(78)
    dual = canonical_kg_dual(ksys)
    rng = np.random.default_rng(0)
    f = random_range_vector(rng, ksys.k)
    trace = neumann_reconstruct(ksys.system, dual, ksys.k, f)
    assert trace.errors[0] <= 1e-10
    assert len(trace.iterates) == len(trace.errors) == len(trace.predicted_bound)


def test_reconstruction_errors_below_geometric_envelope():
    rng = np.random.default_rng(1)
    for seed, eps in ((0, 0.3), (1, 0.6)):
        ksys = random_instance(95 + seed)
        cand = perturbed_dual(ksys, eps, seed=seed)
        f = random_range_vector(rng, ksys.k)
        trace = neumann_reconstruct(ksys.system, cand, ksys.k, f, num_steps=30)
        f_norm = float(np.linalg.norm(f))
        for step, err in enumerate(trace.errors):
            assert err <= eps ** (step + 1) * f_norm + 1e-9
            assert abs(trace.predicted_bound[step] - eps ** (step + 1) * f_norm) <= 1e-9
        assert trace.errors[-1] <= 1e-10


def test_reconstruction_rejects_vectors_outside_range():
    ksys = corner_projection_system(6)
    f = np.zeros(6)
    f[3] = 1.0  # orthogonal to range(K) = span{e0, e1}
    with pytest.raises(NotInRangeError):
        neumann_reconstruct(ksys.system, canonical_kg_dual(ksys), ksys.k, f)


def test_reconstruction_rejects_non_contractive_candidate():
    ksys = random_instance(79)
    rng = np.random.default_rng(2)
    f = random_range_vector(rng, ksys.k)
    with pytest.raises(NotApproxDualError):
        neumann_reconstruct(ksys.system, _zero_candidate(ksys.system), ksys.k, f)


def test_canonical_dual_bessel_bound_from_factorization():
    for seed in range(10):
        ksys = random_instance(seed + 200)
        dual = canonical_kg_dual(ksys)
        s = frame_operator(ksys.system)
        base = optimal_bounds(ksys)
        dual_bessel = optimal_bounds(KGSystem(dual, ksys.k)).bessel_upper_opt
        cap = base.bessel_upper_opt * op_norm(pinv(s)) ** 2 * op_norm(range_projector(ksys.k)) ** 2
        assert dual_bessel <= cap + 1e-9


def test_lift_flattens_to_equal_mixed_operators():
    for seed in range(10):
        ksys = random_instance(seed + 300)
        dual = canonical_kg_dual(ksys)
        fams = random_frame_family(ksys.system.block_dims, seed=seed)
        lift = lift_to_vector_frames(ksys.system, dual, fams, k=ksys.k)
        assert lift.residual <= 1e-9
        assert lift.restricted_defect is not None and lift.restricted_defect <= 1e-8
        assert abs(lift.operator_defect - lift.vector_defect) <= 1e-9
        assert len(lift.vectors_e) == len(lift.vectors_f)
        assert len(lift.vectors_e) == sum(f.shape[0] for f in fams.families)


def test_lift_with_orthonormal_families_reproduces_block_rows():
    ksys = random_instance(310)
    dual = canonical_kg_dual(ksys)
    fams = SubspaceFrameFamily.from_vectors([np.eye(d) for d in ksys.system.block_dims])
    lift = lift_to_vector_frames(ksys.system, dual, fams)
    assert lift.residual <= 1e-10
    # with orthonormal bases the lifted vectors are exactly the block rows
    idx = 0
    for j, d in enumerate(ksys.system.block_dims):
        for i in range(d):
            assert np.allclose(lift.vectors_e[idx], dual.blocks[j].conj().T[:, i], atol=1e-12)
            assert np.allclose(lift.vectors_f[idx], ksys.system.blocks[j].conj().T[:, i], atol=1e-12)
            idx += 1


def test_lift_rejects_non_spanning_families():
    ksys = random_instance(311)
    dims = ksys.system.block_dims
    families = [complex_gaussian(np.random.default_rng(3), (max(d + 1, 2), d)) for d in dims]
    families[0] = np.zeros_like(families[0])
    fams = SubspaceFrameFamily(tuple(families), 0.0, 1.0)
    with pytest.raises(NotAFrameError):
        lift_to_vector_frames(ksys.system, ksys.system, fams)


def test_lift_validates_family_count():
    ksys = random_instance(312)
    fams = random_frame_family(ksys.system.block_dims + (2,), seed=4)
    with pytest.raises(DimMismatchError):
        lift_to_vector_frames(ksys.system, ksys.system, fams)
