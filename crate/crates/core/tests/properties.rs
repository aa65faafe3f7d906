use num_traits::{One, Zero};
use proptest::prelude::*;
use semihier::fields::{check_ergodic, pi_descend, u_descend, u_descent_multiplier};
use semihier::hierarchy::{
    augmented_level_matrix, homomorphism_check, level_action, level_matrix, level_matrix_via_permanents,
};
use semihier::matrix::in_span;
use semihier::measure::convolve;
use semihier::projection::eigenprojection;
use semihier::semigroup::is_stochastic;
use semihier::subset::binomial;
use semihier::transformation::{all_functions, compose};
use semihier::{Analysis, ColorSystem, Matrix, Transformation};

fn function(n: usize) -> impl Strategy<Value = Transformation> {
    proptest::collection::vec(1..=n, n).prop_map(move |v| Transformation::from_oneline(&v, n).unwrap())
}

fn function_pair() -> impl Strategy<Value = (Transformation, Transformation)> {
    (3usize..=5).prop_flat_map(|n| (function(n), function(n)))
}

fn color_system() -> impl Strategy<Value = ColorSystem> {
    (3usize..=5)
        .prop_flat_map(|n| proptest::collection::vec(function(n), 2..=3))
        .prop_map(|c| ColorSystem::new(c).unwrap())
}

/// Random systems whose walk is irreducible and aperiodic and whose
/// semigroup stays small.
fn ergodic_analysis() -> impl Strategy<Value = Analysis> {
    color_system()
        .prop_filter("ergodic", |cs| check_ergodic(cs).is_ok())
        .prop_filter_map("small semigroup", |cs| Analysis::with_cap(cs, 3000).ok())
}

#[test]
fn level_matrices_exhaustive_for_three_points() {
    let all: Vec<Transformation> = all_functions(3).collect();
    for f in &all {
        for level in 1..=3 {
            assert_eq!(level_matrix(f, level).unwrap(), level_matrix_via_permanents(f, level).unwrap());
        }
        for g in &all {
            for level in 1..=3 {
                assert!(homomorphism_check(f, g, level).unwrap());
            }
        }
    }
}

#[test]
fn level_matrix_rank_is_binomial_of_function_rank() {
    for n in 1..=5 {
        for f in all_functions(n) {
            for level in 1..=n {
                let m = level_matrix(&f, level).unwrap().matrix;
                assert_eq!(m.rank(), binomial(f.rank(), level), "{f} at level {level}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative((f, g, h) in (2usize..=6).prop_flat_map(|n| (function(n), function(n), function(n)))) {
        let left = compose(&compose(&f, &g).unwrap(), &h).unwrap();
        let right = compose(&f, &compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn homomorphism_and_permanents_sampled((f, g) in function_pair()) {
        for level in 1..=f.n() {
            prop_assert!(homomorphism_check(&f, &g, level).unwrap());
            prop_assert_eq!(level_matrix(&f, level).unwrap(), level_matrix_via_permanents(&f, level).unwrap());
        }
    }

    #[test]
    fn augmented_matrices_are_stochastic_and_multiplicative((f, g) in function_pair()) {
        for level in 1..f.n() {
            let af = augmented_level_matrix(&f, level).unwrap().matrix;
            let ag = augmented_level_matrix(&g, level).unwrap().matrix;
            let afg = augmented_level_matrix(&compose(&f, &g).unwrap(), level).unwrap().matrix;
            prop_assert!(is_stochastic(&af));
            prop_assert_eq!(af.mul(&ag), afg);
            let action = level_action(&f, level).unwrap();
            prop_assert_eq!(action.matrix(), af);
        }
    }

    #[test]
    fn rank_is_hereditary((f, g) in function_pair()) {
        let fg = compose(&f, &g).unwrap();
        prop_assert!(fg.rank() <= f.rank().min(g.rank()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn projections_on_random_systems(a in ergodic_analysis()) {
        for level in 1..=a.n() {
            let am = a.a_level(level).unwrap();
            let omega = a.omega(level).unwrap();
            prop_assert!(omega.satisfies_projection_identities(&am));
            prop_assert_eq!(&eigenprojection(&am).unwrap().matrix, &omega.matrix);
            let defect = &Matrix::identity(am.rows()) - &am;
            let rows = omega.matrix.to_rows();
            let cols = omega.matrix.transpose().to_rows();
            for v in defect.left_nullspace() {
                prop_assert!(in_span(&rows, &v));
            }
            for v in defect.nullspace() {
                prop_assert!(in_span(&cols, &v));
            }
            for r in &rows {
                prop_assert!(r.iter().all(Zero::is_zero) || am.left_apply(r) == *r);
            }
        }
    }

    #[test]
    fn invariants_on_random_systems(a in ergodic_analysis()) {
        prop_assert!(a.friedman().unwrap().is_clean());
        prop_assert_eq!(a.detect_rank().unwrap().rank, a.rank());
        prop_assert_eq!(a.right_group().unwrap().is_right_group, a.kernel.structural_right_group());
        prop_assert_eq!(&convolve(&a.lambda, &a.lambda, &a.semigroup).unwrap(), &a.lambda);
        let split = a.split_matrix().unwrap();
        let partitions = a.kernel.partitions();
        for i in 1..=a.n() {
            for j in i + 1..=a.n() {
                let never_split = partitions.iter().all(|p| p.iter().any(|b| b.contains(&i) && b.contains(&j)));
                prop_assert_eq!(split.matrix.get(i - 1, j - 1).is_zero(), never_split);
            }
        }
    }

    #[test]
    fn descents_reproduce_level_fields(a in ergodic_analysis()) {
        let pi = a.stationary().unwrap();
        let r = a.rank();
        for level in 1..r {
            let upper_pi = a.pi_field(level + 1).unwrap();
            prop_assert_eq!(&pi_descend(&upper_pi).unwrap().values, &a.pi_field(level).unwrap().values);
            let upper_u = a.u_field(level + 1).unwrap();
            let exact = a.omega(level).unwrap().matrix.row_sums();
            let expected: Vec<_> = exact.iter().map(|v| v * u_descent_multiplier(level, r)).collect();
            prop_assert_eq!(&u_descend(&upper_u, &pi).unwrap().raw, &expected);
        }
        if r >= 1 {
            let top = a.u_field(r).unwrap();
            prop_assert!(top.values.iter().any(One::is_one));
        }
    }
}
