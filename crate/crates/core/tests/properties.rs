use proptest::prelude::*;

use secant_core::io::{emit_tensor, parse_tensor};
use secant_core::rep::{decomp_identity, dim_gl, verify_decomp_dims, DecompKind, Partition};
use secant_core::subset::binomial;
use secant_core::{Covector, Field, Matrix, Mode, Tensor3};

const P: u64 = 2_147_483_647;

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(P)), Just(Field::Prime(101))]
}

fn matrix(field: Field, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-6i64..=6, rows * cols)
        .prop_map(move |v| Matrix::from_fn(field, rows, cols, |i, j| field.from_i64(v[i * cols + j])))
}

fn square(max: usize) -> impl Strategy<Value = Matrix> {
    (field_strategy(), 1..=max).prop_flat_map(|(f, n)| matrix(f, n, n))
}

fn tensor(field: Field, dims: [usize; 3]) -> impl Strategy<Value = Tensor3> {
    let n: usize = dims.iter().product();
    prop::collection::vec(-4i64..=4, n).prop_map(move |v| {
        Tensor3::from_fn(field, dims, |i, j, k| {
            field.from_i64(v[(i * dims[1] + j) * dims[2] + k])
        })
    })
}

fn low_rank_matrix(field: Field, n: usize, rank: usize) -> impl Strategy<Value = Matrix> {
    (matrix(field, n, rank), matrix(field, rank, n)).prop_map(|(a, b)| &a * &b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjugate_identity(m in square(5)) {
        let n = m.rows();
        let f = m.field();
        let adj = m.adjugate().unwrap();
        let d = Matrix::identity(f, n).scale(&m.det().unwrap());
        prop_assert_eq!(&m * &adj, d.clone());
        prop_assert_eq!(&adj * &m, d);
    }

    #[test]
    fn adjugate_of_singular(m in (field_strategy(), 2usize..=5, 0usize..=4).prop_flat_map(|(f, n, r)| low_rank_matrix(f, n, r.min(n - 1)))) {
        let adj = m.adjugate().unwrap();
        prop_assert!((&m * &adj).is_zero());
        prop_assert!(m.det().unwrap().is_zero());
    }

    #[test]
    fn det_transpose(m in square(5)) {
        prop_assert_eq!(m.det().unwrap(), m.transpose().det().unwrap());
    }

    #[test]
    fn cauchy_binet(
        (a, b, k) in (field_strategy(), 1usize..=4, 1usize..=4, 1usize..=4)
            .prop_flat_map(|(f, n, m, p)| (matrix(f, n, m), matrix(f, m, p), 0..=n.min(m).min(p).min(3)))
    ) {
        let lhs = (&a * &b).compound(k).unwrap();
        let rhs = &a.compound(k).unwrap() * &b.compound(k).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn compound_rank(
        (m, k) in (field_strategy(), 1usize..=5, 0usize..=5)
            .prop_flat_map(|(f, n, r)| (low_rank_matrix(f, n, r.min(n)), 1..=n))
    ) {
        let r = m.rank();
        prop_assert_eq!(m.compound(k).unwrap().rank(), binomial(r, k));
    }

    #[test]
    fn rank_bounded(m in (field_strategy(), 1usize..=5, 1usize..=5).prop_flat_map(|(f, r, c)| matrix(f, r, c))) {
        prop_assert!(m.rank() <= m.rows().min(m.cols()));
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn slice_linear_in_both(
        (t, u, x, y) in field_strategy().prop_flat_map(|f| (
            tensor(f, [3, 2, 4]),
            tensor(f, [3, 2, 4]),
            prop::collection::vec(-5i64..=5, 3),
            prop::collection::vec(-5i64..=5, 3),
        ))
    ) {
        let f = t.field();
        let cov = |v: &[i64]| Covector::new(Mode::A, v.iter().map(|&x| f.from_i64(x)).collect());
        let sum: Vec<i64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let (cx, cy, cs) = (cov(&x), cov(&y), cov(&sum));
        prop_assert_eq!(t.slice(&cs).unwrap(), &t.slice(&cx).unwrap() + &t.slice(&cy).unwrap());
        let tu = t.add(&u).unwrap();
        prop_assert_eq!(tu.slice(&cx).unwrap(), &t.slice(&cx).unwrap() + &u.slice(&cx).unwrap());
    }

    #[test]
    fn compression_preserves_ranks(t in field_strategy().prop_flat_map(|f| tensor(f, [3, 4, 2]))) {
        let (c, rec) = t.compress();
        prop_assert_eq!(c.dims(), t.multilinear_ranks());
        prop_assert_eq!(c.multilinear_ranks(), t.multilinear_ranks());
        prop_assert_eq!(rec.expand(&c).unwrap(), t);
    }

    #[test]
    fn ranks_invariant_under_change_of_basis(
        (t, g) in (tensor(Field::Prime(P), [3, 3, 4]), matrix(Field::Prime(P), 4, 4))
    ) {
        prop_assume!(g.rank() == 4);
        let moved = t.transform(Mode::C, &g).unwrap();
        prop_assert_eq!(moved.multilinear_ranks(), t.multilinear_ranks());
    }

    #[test]
    fn tensor_document_roundtrip(t in field_strategy().prop_flat_map(|f| tensor(f, [2, 3, 2]))) {
        let text = emit_tensor(&t);
        let back = parse_tensor(&text).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(emit_tensor(&back), text);
    }

    #[test]
    fn conjugation_is_involution(mut parts in prop::collection::vec(1usize..8, 0..7)) {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let p = Partition::new(parts).unwrap();
        prop_assert_eq!(p.conjugate().conjugate(), p.clone());
        prop_assert_eq!(p.conjugate().size(), p.size());
    }

    #[test]
    fn wedge_wedge_dims(a in 0usize..7, b in 0usize..7, n in 1usize..7) {
        let kind = DecompKind::WedgeWedge { a, b };
        prop_assert!(verify_decomp_dims(kind, n).unwrap());
        let parts = decomp_identity(kind, n).unwrap();
        prop_assert!(parts.iter().all(|p| p.size() == a + b && !dim_gl(p, n).to_string().starts_with('-')));
    }
}
