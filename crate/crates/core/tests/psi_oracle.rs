use secant_core::coercive::{psi, psi_defect, psi_from_terms};
use secant_core::rng::SplitMix64;
use secant_core::witness::{make_witness, random_terms, WitnessRecipe};
use secant_core::{Covector, Field, Mode, Tensor3};

fn draw3(field: Field, a: usize, rng: &mut SplitMix64) -> [Covector; 3] {
    std::array::from_fn(|_| Covector::random(field, Mode::A, a, rng))
}

#[test]
fn compound_form_matches_decomposition_sum() {
    let cases = [
        (3, [3, 3, 3], 1, 2),
        (2, [3, 3, 3], 1, 1),
        (4, [3, 4, 4], 1, 2),
        (4, [3, 4, 5], 2, 2),
        (5, [2, 4, 4], 1, 3),
        (3, [3, 4, 4], 2, 1),
    ];
    for field in [Field::Rational, Field::default()] {
        for (n, &(r, dims, s, t)) in cases.iter().enumerate() {
            for seed in 0..4u64 {
                let recipe = WitnessRecipe::random_sum(r, dims, 1000 * n as u64 + seed, field);
                let tensor = make_witness(&recipe).unwrap();
                let terms = random_terms(&recipe).unwrap();
                let mut rng = SplitMix64::new(seed);
                let [a, a1, a2] = draw3(field, dims[0], &mut rng);
                let fast = psi(&tensor, s, t, &a, &a1, &a2).unwrap();
                let slow = psi_from_terms(&terms, s, t, &a, &a1, &a2).unwrap();
                assert_eq!(fast, slow, "r={r} dims={dims:?} (s,t)=({s},{t}) seed={seed}");
            }
        }
    }
}

#[test]
fn basis_covectors_cover_all_components() {
    // every basis triple agrees, which pins down psi as a multilinear map
    let field = Field::Rational;
    let recipe = WitnessRecipe::random_sum(3, [3, 3, 3], 77, field);
    let tensor = make_witness(&recipe).unwrap();
    let terms = random_terms(&recipe).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let e = |l| Covector::basis(field, Mode::A, 3, l);
                let fast = psi(&tensor, 1, 2, &e(i), &e(j), &e(k)).unwrap();
                let slow = psi_from_terms(&terms, 1, 2, &e(i), &e(j), &e(k)).unwrap();
                assert_eq!(fast, slow);
            }
        }
    }
}

#[test]
fn psi_degree_in_tensor() {
    // total degree 2s + t in the entries of T
    let field = Field::Rational;
    let mut rng = SplitMix64::new(3);
    let t = Tensor3::from_fn(field, [3, 4, 4], |_, _, _| field.sample(&mut rng, 5));
    let [a, a1, a2] = draw3(field, 3, &mut rng);
    let lambda = field.from_i64(2);
    for (s, tt) in [(1, 1), (1, 2), (2, 2)] {
        let base = psi(&t, s, tt, &a, &a1, &a2).unwrap();
        let scaled = psi(&t.scale(&lambda), s, tt, &a, &a1, &a2).unwrap();
        assert_eq!(scaled, base.scale(&lambda.pow((2 * s + tt) as u32)));
    }
}

#[test]
fn defect_is_nonzero_outside_secant() {
    // a sum of r + 1 terms in (3, r, r) is generically outside sigma_r
    let field = Field::default();
    for (s, t) in [(1, 1), (1, 2), (1, 3), (1, 4)] {
        let r = s + t;
        let w = make_witness(&WitnessRecipe::random_sum(r + 1, [3, r, r], 5, field)).unwrap();
        let mut rng = SplitMix64::new(9);
        let nonzero = (0..10).any(|_| {
            let [a, a1, a2] = draw3(field, 3, &mut rng);
            !psi_defect(&w, s, t, &a, &a1, &a2).unwrap().is_zero()
        });
        assert!(nonzero, "(s,t)=({s},{t})");
    }
}
