use proptest::prelude::*;

use secant_core::abundance::{binomial, Statement};
use secant_core::field_linalg::SeededRng;
use secant_core::scan::s_end;
use secant_core::segre_veronese::{u_l, PointConstraint, SegreVeronese};
use secant_core::strassen::{seeded_tensor, strassen_matrix, strassen_report};
use secant_core::terracini::{eval_statement, rank_profile, statement_rank_at, CertificateKind};
use secant_core::{DenseMatrix, Fe, PrimeField};

fn field() -> PrimeField {
    PrimeField::default_field()
}

fn random_skew(f: &PrimeField, order: usize, seed: u64) -> DenseMatrix {
    let mut rng = SeededRng::new(seed);
    let mut m = DenseMatrix::zeros(order, order);
    for i in 0..order {
        for j in i + 1..order {
            let x = f.elem(rng.next_coeff());
            m[(i, j)] = x;
            m[(j, i)] = f.neg(x);
        }
    }
    m
}

fn random_matrix(f: &PrimeField, rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let mut rng = SeededRng::new(seed);
    let data = (0..rows * cols).map(|_| f.elem(rng.next_coeff() % 5)).collect();
    DenseMatrix::from_vec(rows, cols, data).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pfaffian_squared_is_determinant(half in 1usize..=6, seed in any::<u64>()) {
        let f = field();
        let m = random_skew(&f, 2 * half, seed);
        let pf = m.pfaffian(&f).unwrap();
        prop_assert_eq!(f.mul(pf, pf), m.det(&f).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rank_is_monotone_in_s(m in 0usize..=4, n in 1usize..=4, t in 0usize..=2, seed in any::<u64>(), trial in 0usize..3) {
        let f = field();
        let base = Statement::new(m, n, 2, 0, t);
        let profile = rank_profile(&f, &base, s_end(m.max(1), n), seed, trial).unwrap();
        for w in profile.windows(2) {
            prop_assert!(w[0] <= w[1], "profile {:?}", profile);
        }
        for (s, &r) in profile.iter().enumerate() {
            prop_assert_eq!(r, statement_rank_at(&f, &base.with_st(s, t), seed, trial).unwrap());
        }
    }

    #[test]
    fn verdict_rank_is_bounded(m in 0usize..=4, n in 1usize..=4, s in 0usize..=8, t in 0usize..=3, seed in any::<u64>()) {
        let st = Statement::new(m, n, 2, s, t);
        let v = eval_statement(&field(), &st, seed, 2).unwrap();
        prop_assert!(v.rank <= v.rows.min(st.ambient_dim()));
        prop_assert!(v.rank <= v.expected);
        prop_assert_eq!(v.rows, s * (m + n + 2) + t * (m + 1));
    }

    #[test]
    fn evaluation_is_reproducible(m in 0usize..=4, n in 1usize..=4, s in 0usize..=8, t in 0usize..=2, seed in any::<u64>()) {
        let st = Statement::new(m, n, 2, s, t);
        let g = PrimeField::cross_check_field();
        prop_assert_eq!(eval_statement(&field(), &st, seed, 2).unwrap(), eval_statement(&field(), &st, seed, 2).unwrap());
        prop_assert_eq!(eval_statement(&g, &st, seed, 2).unwrap(), eval_statement(&g, &st, seed, 2).unwrap());
    }

    #[test]
    fn rank_ignores_row_order_and_dependent_rows(rows in 1usize..10, cols in 1usize..10, seed in any::<u64>(), shift in 0usize..10) {
        let f = field();
        let m = random_matrix(&f, rows, cols, seed);
        let r = m.rank(&f);
        prop_assert!(r <= rows.min(cols));
        let rotated: Vec<Vec<Fe>> = (0..rows).map(|i| m.row((i + shift) % rows).to_vec()).collect();
        prop_assert_eq!(DenseMatrix::from_rows(&rotated).unwrap().rank(&f), r);
        let combo: Vec<Fe> = (0..cols).map(|j| f.add(m[(0, j)], f.mul(f.elem(3), m[(rows - 1, j)]))).collect();
        let mut extended = m.clone();
        extended.push_row(&combo).unwrap();
        prop_assert_eq!(extended.rank(&f), r);
    }

    #[test]
    fn strassen_matrix_is_skew(k in 1usize..=4, seed in any::<u64>()) {
        let f = field();
        let s = strassen_matrix(&f, &seeded_tensor(&f, k, seed));
        prop_assert_eq!(s.skew_violation(&f), None);
        prop_assert_eq!(s.rows(), 3 * (2 * k + 2));
    }
}

#[test]
fn two_primes_agree_on_small_grid() {
    let (f, g) = (PrimeField::default_field(), PrimeField::cross_check_field());
    for m in 1..=4 {
        for n in 1..=4 {
            let base = Statement::secant(m, n, 0);
            let s_max = s_end(m, n);
            for trial in 0..2 {
                assert_eq!(
                    rank_profile(&f, &base, s_max, 0, trial).unwrap(),
                    rank_profile(&g, &base, s_max, 0, trial).unwrap(),
                    "({m},{n}) trial {trial}"
                );
            }
        }
    }
}

#[test]
fn tangent_space_rank() {
    let f = field();
    for m in 1..=6 {
        for n in 1..=6 {
            let model = SegreVeronese::new(f, m, n, 2).unwrap();
            assert_eq!(model.ambient_dim(), (m + 1) * binomial(n + 2, 2));
            let mut rng = SeededRng::new((m * 7 + n) as u64);
            for _ in 0..3 {
                let p = model.sample_point(&mut rng, PointConstraint::Generic).unwrap();
                let rows = model.tangent_rows(&p).unwrap();
                assert_eq!(rows.rows(), m + n + 2);
                assert_eq!(rows.cols(), model.ambient_dim());
                assert_eq!(rows.rank(&f), m + n + 1, "({m},{n})");
            }
        }
    }
}

#[test]
fn tangent_space_on_l_modulo_subspace() {
    let f = field();
    for m in 1..=4 {
        for n in 2..=5 {
            let model = SegreVeronese::new(f, m, n, 2).unwrap();
            let mut rng = SeededRng::new(11);
            let p = model.sample_point(&mut rng, PointConstraint::OnL).unwrap();
            let mut stacked = model.subspace_rows(&u_l(n)).unwrap();
            let base = stacked.rank(&f);
            stacked.stack(&model.tangent_rows(&p).unwrap()).unwrap();
            assert_eq!(stacked.rank(&f) - base, 2, "({m},{n})");
        }
    }
}

#[test]
fn certificate_configurations_have_ambient_columns() {
    let kinds = [
        (CertificateKind::Q, 1..=5, 3..=7),
        (CertificateKind::RUnder, 1..=3, 3..=6),
        (CertificateKind::ROver, 3..=4, 2..=6),
        (CertificateKind::R2n, 2..=2, 3..=7),
    ];
    for (kind, ms, ns) in kinds {
        for m in ms.clone() {
            for n in ns.clone() {
                if let Ok((cfg, expected)) = kind.configuration(m, n) {
                    assert_eq!(cfg.ambient_dim(), (m + 1) * binomial(n + 2, 2));
                    assert!(expected <= cfg.ambient_dim());
                }
            }
        }
    }
}

#[test]
fn strassen_decomposable_bound() {
    let f = field();
    for k in 1..=4 {
        for s in 1..=3 * k + 2 {
            for seed in 0..20 {
                let r = strassen_report(&f, k, s, seed).unwrap();
                assert!(r.within_bound && r.rank <= 2 * s, "k={k} s={s} seed={seed}: {r:?}");
            }
        }
        let generic = strassen_matrix(&f, &seeded_tensor(&f, k, 0));
        assert_eq!(generic.rank(&f), 3 * (2 * k + 2));
    }
}
