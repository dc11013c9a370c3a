//! Property-based invariants: exact algebra identities, coordinate
//! round-trips, exponential additivity, and Cartan-projection symmetries.

use cartanlab_core::cartan::{
    mu, mu_sl3_mat, opposition_involution, random_compact_sl3, random_compact_so2n,
};
use cartanlab_core::catalog::{h_b, DeformationMatrix, Subalgebra};
use cartanlab_core::classify::{classify_type, hb_iso_invariants};
use cartanlab_core::lie::{
    an_element, bracket, exp_element, form_matrix, ANCoords, AlgElement, GroupElement,
};
use cartanlab_core::rat::{rat, rat_i, Rat, RatMat};
use nalgebra::DMatrix;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-8i64..=8, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn coords_strategy(n: usize) -> impl Strategy<Value = ANCoords> {
    (
        rat_strategy(),
        rat_strategy(),
        rat_strategy(),
        prop::collection::vec(rat_strategy(), n - 2),
        prop::collection::vec(rat_strategy(), n - 2),
        rat_strategy(),
    )
        .prop_map(|(t1, t2, phi, x, y, eta)| ANCoords { t1, t2, phi, x, y, eta })
}

fn element_strategy(n: usize) -> impl Strategy<Value = AlgElement> {
    coords_strategy(n).prop_map(move |c| an_element(n, &c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn algebra_condition_exact(c in coords_strategy(5)) {
        let n = 5;
        let sp = form_matrix(n).unwrap();
        let e = an_element(n, &c).unwrap();
        let lhs = e.mat.transpose().mul(&sp.q).add(&sp.q.mul(&e.mat));
        prop_assert!(lhs.is_zero());
    }

    #[test]
    fn coords_round_trip(c in coords_strategy(4)) {
        let n = 4;
        let e = an_element(n, &c).unwrap();
        let detected = cartanlab_core::lie::detect_an_coords(n, &e.mat).unwrap();
        prop_assert_eq!(detected, c);
    }

    #[test]
    fn bracket_bilinear_antisymmetric_jacobi(
        x in element_strategy(4),
        y in element_strategy(4),
        z in element_strategy(4),
        a in rat_strategy(),
    ) {
        // Antisymmetry, exactly.
        let xy = bracket(&x, &y).unwrap();
        let yx = bracket(&y, &x).unwrap();
        prop_assert!(xy.mat.add(&yx.mat).is_zero());
        // Bilinearity in the first slot, exactly.
        let ax = x.scale(&a);
        let axy = bracket(&ax, &y).unwrap();
        prop_assert!(axy.mat.sub(&xy.mat.scale(&a)).is_zero());
        let xz_sum = bracket(&x.add(&z).unwrap(), &y).unwrap();
        let sep = xy.mat.add(&bracket(&z, &y).unwrap().mat);
        prop_assert!(xz_sum.mat.sub(&sep).is_zero());
        // Jacobi, exactly.
        let j1 = bracket(&xy, &z).unwrap();
        let j2 = bracket(&bracket(&y, &z).unwrap(), &x).unwrap();
        let j3 = bracket(&bracket(&z, &x).unwrap(), &y).unwrap();
        prop_assert!(j1.mat.add(&j2.mat).add(&j3.mat).is_zero());
    }

    #[test]
    fn exp_one_parameter_additivity(c in coords_strategy(4), s in -2.0f64..2.0, t in -2.0f64..2.0) {
        let n = 4;
        let e = an_element(n, &c).unwrap();
        let norm = e.fro_norm_f64();
        if norm < 1e-9 {
            return Ok(());
        }
        // Keep |sX|, |tX| at most 10.
        let scale = 5.0 / norm.max(1.0);
        let (s, t) = (s * scale, t * scale);
        let gs = exp_element(&e, s);
        let gt = exp_element(&e, t);
        let gst = exp_element(&e, s + t);
        let prod = gs.mul(&gt).unwrap();
        let err = (&prod.g - &gst.g).amax();
        let scale_ref = gst.g.amax().max(1.0);
        prop_assert!(err <= 1e-10 * scale_ref, "additivity error {err}");
    }

    #[test]
    fn mu_bi_k_invariance(seed in 0u64..500) {
        let n = 4;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_compact_so2n(n, &mut rng, 1.0);
        let mut c = ANCoords::zero(n);
        c.t1 = rat_i(2);
        c.t2 = rat_i(1);
        c.x[0] = rat(1, 2);
        let e = an_element(n, &c).unwrap();
        let g = exp_element(&e, 1.0);
        let base = mu(&g).unwrap().as_so2n().unwrap();
        let left = GroupElement { ambient: g.ambient, g: &k * &g.g };
        let right = GroupElement { ambient: g.ambient, g: &g.g * &k };
        let cl = mu(&left).unwrap().as_so2n().unwrap();
        let cr = mu(&right).unwrap().as_so2n().unwrap();
        prop_assert!((cl.u1 - base.u1).abs() < 1e-8 && (cl.u2 - base.u2).abs() < 1e-8);
        prop_assert!((cr.u1 - base.u1).abs() < 1e-8 && (cr.u2 - base.u2).abs() < 1e-8);
    }

    #[test]
    fn mu_inverse_is_opposition(seed in 0u64..500) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k1 = random_compact_sl3(&mut rng, 1.0);
        let k2 = random_compact_sl3(&mut rng, 1.0);
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            1.7f64.exp(),
            0.4f64.exp(),
            (-2.1f64).exp(),
        ]));
        let g = &k1 * a * &k2;
        let c = mu_sl3_mat(&g, 1e-7).unwrap();
        let ci = mu_sl3_mat(&g.clone().try_inverse().unwrap(), 1e-7).unwrap();
        let want = opposition_involution(&c);
        prop_assert!((ci.v1 - want.v1).abs() < 1e-8);
        prop_assert!((ci.v2 - want.v2).abs() < 1e-8);
        prop_assert!((ci.v3 - want.v3).abs() < 1e-8);
    }

    #[test]
    fn singular_values_pair_up(seed in 0u64..300) {
        let n = 5;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k1 = random_compact_so2n(n, &mut rng, 1.0);
        let k2 = random_compact_so2n(n, &mut rng, 1.0);
        let a = cartanlab_core::cartan::chamber_matrix_so2n(n, 2.5, 0.7);
        let g = &k1 * a * &k2;
        let sp = form_matrix(n).unwrap();
        let tilde = &sp.p * &g * sp.p.transpose();
        let sv = tilde.svd(false, false).singular_values;
        let size = n + 2;
        for i in 0..size {
            let prod = sv[i] * sv[size - 1 - i];
            prop_assert!((prod - 1.0).abs() < 1e-7 * (1.0 + prod));
        }
        for i in 2..size - 2 {
            prop_assert!((sv[i] - 1.0).abs() < 1e-7);
        }
    }
}

#[test]
fn mu_is_empirically_proper() {
    // Pushing the group element to infinity forces u1 to infinity.
    let n = 3;
    let mut c = ANCoords::zero(n);
    c.t1 = rat_i(3);
    c.t2 = rat_i(1);
    let e = an_element(n, &c).unwrap();
    let mut last = -1.0;
    for t in [1.0, 2.0, 4.0, 8.0] {
        let g = exp_element(&e, t);
        let m = cartanlab_core::cartan::mu_so2n_lenient(n, &g.g).unwrap();
        assert!(m.u1 > last);
        last = m.u1;
    }
    assert!(last > 20.0);
}

#[test]
fn hb_center_matches_kernel_formula() {
    // Independent oracle: the center of the nilradical computed from exact
    // bracket kernels must be 1 + dim ker(B^T - B).
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut done = 0;
    while done < 8 {
        let b = random_skew_dominant(&mut rng, 4);
        let Ok(dm) = DeformationMatrix::new(b.clone()) else { continue };
        let h = h_b(3, &dm).unwrap();
        let nilrad = h.info().h_cap_n.clone();
        let center = center_dim(&nilrad);
        let inv = hb_iso_invariants(&b);
        assert_eq!(center, inv.center_dim, "B = {b:?}");
        done += 1;
    }
}

fn center_dim(nilrad: &[AlgElement]) -> usize {
    // Exact: coefficients c with [sum c_i u_i, u_j] = 0 for all j.
    let k = nilrad.len();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    // Build the linear system row by row: each (j, entry) gives one row.
    let dim = nilrad[0].mat.nrows();
    for j in 0..k {
        for r in 0..dim {
            for cidx in 0..dim {
                let mut row = Vec::with_capacity(k);
                for i in 0..k {
                    let br = bracket(&nilrad[i], &nilrad[j]).unwrap();
                    row.push(br.mat.get(r, cidx).clone());
                }
                if row.iter().any(|v| !v.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return k;
    }
    RatMat::from_rows(rows).nullspace().len()
}

fn random_skew_dominant(rng: &mut ChaCha8Rng, size: usize) -> RatMat {
    use rand::Rng;
    let mut m = RatMat::zeros(size, size);
    for i in 0..size {
        for j in 0..size {
            if i < j {
                let v = rng.gen_range(-3i64..=3);
                m.set(i, j, rat_i(v));
                m.set(j, i, rat_i(-v));
            }
        }
    }
    // Small symmetric perturbation keeps the spectrum off the real axis
    // almost surely while varying ker(B^T - B).
    for i in 0..size {
        for j in i..size {
            if rng.gen_range(0..3) == 0 {
                let v = rat(rng.gen_range(-1i64..=1), 3);
                let cur = m.get(i, j).clone();
                m.set(i, j, cur + v.clone());
                if i != j {
                    let cur = m.get(j, i).clone();
                    m.set(j, i, cur + v);
                }
            }
        }
    }
    m
}

#[test]
fn su_conjugacy_consistent_under_rational_rotation() {
    use cartanlab_core::classify::{su_conjugacy, SuDecision};
    // A rational orthogonal conjugate of the deformation datum produces the
    // deformation subalgebra conjugated inside the group: spans must match
    // exactly after the corresponding block rotation.
    let b = {
        let mut m = cartanlab_core::catalog::standard_j(4).scale(&rat_i(2));
        for i in 0..4 {
            m.set(i, i, rat_i(1));
        }
        m
    };
    let mut s = RatMat::identity(4);
    s.set(1, 1, rat(5, 13));
    s.set(1, 3, rat(12, 13));
    s.set(3, 1, rat(-12, 13));
    s.set(3, 3, rat(5, 13));
    let b_rot = s.transpose().mul(&b).mul(&s);
    // Decision must be preserved by the rotation.
    assert!(matches!(su_conjugacy(&b).unwrap(), SuDecision::Yes(_)));
    assert!(matches!(su_conjugacy(&b_rot).unwrap(), SuDecision::Yes(_)));
    // Span-level consistency: conjugating h_B by the embedded rotation gives
    // exactly h_{S^T B S}.
    let n = 6;
    let m = 3;
    let dm = DeformationMatrix::new(b.clone()).unwrap();
    let h = h_b(m, &dm).unwrap();
    let dm_rot = DeformationMatrix::new(b_rot).unwrap();
    let h_rot = h_b(m, &dm_rot).unwrap();
    // Embed S in the middle block of SO(2,n).
    let size = n + 2;
    let mut g = RatMat::identity(size);
    for i in 0..4 {
        for j in 0..4 {
            g.set(2 + i, 2 + j, s.get(i, j).clone());
        }
    }
    let g_inv = g.transpose(); // orthogonal middle block
    let conj = h.conjugate(&g_inv, &g).unwrap();
    let flat_rot = Subalgebra::flat_basis(&h_rot);
    for v in conj.flat_basis() {
        assert!(cartanlab_core::rat::in_span(&flat_rot, &v));
    }
    assert_eq!(conj.dim(), h_rot.dim());
}

#[test]
fn classify_invariant_under_small_conjugation() {
    use cartanlab_core::classify::normalize_compatible;
    use cartanlab_core::lie::exp_nilpotent_exact;
    let n = 4;
    let h = cartanlab_core::catalog::so1n_an(n).unwrap();
    let mut z = ANCoords::zero(n);
    z.y[1] = rat(1, 2);
    z.phi = rat(-1, 3);
    let zel = an_element(n, &z).unwrap();
    let g = exp_nilpotent_exact(&zel.mat).unwrap();
    let g_inv = exp_nilpotent_exact(&zel.mat.neg()).unwrap();
    let conj = h.conjugate(&g, &g_inv).unwrap();
    let norm = normalize_compatible(&conj);
    assert!(norm.resolved);
    let v = classify_type(&norm.subalgebra).unwrap();
    assert_eq!(v.label, classify_type(&h).unwrap().label);
}

#[test]
fn ck_verdict_monotone_under_window_nesting() {
    use cartanlab_core::catalog::{exemplar, l5_an, ExemplarParams};
    use cartanlab_core::classify::{ck_verdict, CkOutcome};
    // The rate-3/2 subgroup nests inside the [1 log, 2] windows at equal
    // dimension, so its exclusion propagates to those types.
    let inner = l5_an(3).unwrap();
    let inner_v = ck_verdict(&inner, false).unwrap();
    assert_eq!(inner_v.verdict, CkOutcome::NoCompactForm);
    for label in ["T2.9-7", "T2.9-8"] {
        let outer = exemplar(label, 3, &ExemplarParams::default()).unwrap();
        assert_eq!(outer.dim(), inner.dim());
        let outer_v = ck_verdict(&outer, false).unwrap();
        assert_eq!(outer_v.verdict, CkOutcome::NoCompactForm, "{label}");
    }
}

#[test]
fn zero_and_torus_chamber_edge_cases() {
    use cartanlab_core::cartan::{cds_criterion, CdsConfig, CdsOutcome};
    use cartanlab_core::growth::{default_t_grid, sample_orbit};
    // The full a+n fills the chamber; the stabilizer slice does not.
    let full = cartanlab_core::catalog::an_full(3).unwrap();
    let grid = default_t_grid(24.0, 40);
    let s = sample_orbit(&full, &grid, 48, 17).unwrap();
    let out = cds_criterion(&s.points(), &CdsConfig::default()).unwrap();
    assert_eq!(out, CdsOutcome::Fills);
    let so = cartanlab_core::catalog::so1n_an(3).unwrap();
    let s = sample_orbit(&so, &grid, 24, 17).unwrap();
    let out = cds_criterion(&s.points(), &CdsConfig::default()).unwrap();
    assert_eq!(out, CdsOutcome::Thin);
}

/// Random bracket-closed subalgebras: generate a few elements, close the
/// span under brackets, and check that classification succeeds and is stable
/// under conjugation by N followed by normalization.
#[test]
fn classify_stable_on_random_closed_subalgebras() {
    use cartanlab_core::catalog::Subalgebra;
    use cartanlab_core::classify::{classify_type, normalize_compatible, TypeLabel};
    use cartanlab_core::lie::{exp_nilpotent_exact, Ambient};
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(31337);
    let mut seen_labels = std::collections::BTreeSet::new();
    for trial in 0..60 {
        let n = if trial % 2 == 0 { 3 } else { 4 };
        let n_gens = 1 + (trial % 3);
        let mut elements = Vec::new();
        for _ in 0..n_gens {
            let mut c = ANCoords::zero(n);
            // Sparse small-rational generators keep closures varied.
            if rng.gen_range(0..2) == 0 {
                c.t1 = rat_i(rng.gen_range(-2i64..=2));
                c.t2 = rat_i(rng.gen_range(-2i64..=2));
            }
            if rng.gen_range(0..2) == 0 {
                c.phi = rat(rng.gen_range(-2i64..=2), 2);
            }
            if rng.gen_range(0..2) == 0 {
                c.x[rng.gen_range(0..n - 2)] = rat_i(rng.gen_range(-2i64..=2));
            }
            if rng.gen_range(0..2) == 0 {
                c.y[rng.gen_range(0..n - 2)] = rat_i(rng.gen_range(-2i64..=2));
            }
            if rng.gen_range(0..2) == 0 {
                c.eta = rat(rng.gen_range(-2i64..=2), 3);
            }
            elements.push(an_element(n, &c).unwrap());
        }
        // Close the span under the bracket (bounded by dim a+n = 2n).
        loop {
            let trial_sub =
                Subalgebra::from_basis_unchecked(Ambient::So2n { n }, elements.clone()).unwrap();
            if trial_sub.info().closed {
                break;
            }
            let basis = trial_sub.basis.clone();
            let mut grew = false;
            'outer: for i in 0..basis.len() {
                for j in (i + 1)..basis.len() {
                    let br = bracket(&basis[i], &basis[j]).unwrap();
                    let probe = Subalgebra::from_basis_unchecked(
                        Ambient::So2n { n },
                        basis.iter().cloned().chain([br.clone()]).collect(),
                    )
                    .unwrap();
                    if probe.dim() > basis.len() {
                        elements = probe.basis.clone();
                        grew = true;
                        break 'outer;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let h = Subalgebra::new(Ambient::So2n { n }, elements).unwrap();
        let base = classify_type(&normalize_compatible(&h).subalgebra).unwrap().label;
        assert_ne!(base, TypeLabel::IncompatibleUnresolved, "trial {trial} unresolved");
        seen_labels.insert(base.as_str());
        // Conjugation by a random element of N must not change the label.
        let mut z = ANCoords::zero(n);
        z.phi = rat(rng.gen_range(-1i64..=1), 2);
        z.eta = rat(rng.gen_range(-1i64..=1), 2);
        z.x[0] = rat(rng.gen_range(-1i64..=1), 3);
        z.y[0] = rat_i(rng.gen_range(-1i64..=1));
        let zel = an_element(n, &z).unwrap();
        let g = exp_nilpotent_exact(&zel.mat).unwrap();
        let g_inv = exp_nilpotent_exact(&zel.mat.neg()).unwrap();
        let conj = h.conjugate(&g, &g_inv).unwrap();
        let norm = normalize_compatible(&conj);
        assert!(norm.resolved, "trial {trial} failed to normalize");
        let got = classify_type(&norm.subalgebra).unwrap().label;
        assert_eq!(got, base, "trial {trial}: conjugation changed the label");
    }
    // The fuzz actually exercises a spread of types.
    assert!(seen_labels.len() >= 4, "only saw {seen_labels:?}");
}
