use proptest::prelude::*;
use qudit_bell::lhv::{analytic_bounds, LhvAssignment};
use qudit_bell::linalg::{expi_hermitian, tensor, CMatrix, Complex64};
use qudit_bell::operators::{f_op, PrimeDim};
use qudit_bell::optimizer::scenario_from_frames;
use qudit_bell::quantum::{
    expectation_closed_form, maximally_entangled, paper_settings, paper_state, quantum_expectation,
    NoiseMixture,
};

fn dim(d: u32) -> PrimeDim {
    PrimeDim::new(d).unwrap()
}

fn hermitian_from(n: usize, entries: &[f64]) -> CMatrix {
    let mut it = entries.iter().cycle();
    let mut m = CMatrix::zeros(n, n);
    for r in 0..n {
        m[(r, r)] = Complex64::new(*it.next().unwrap(), 0.0);
        for c in r + 1..n {
            let z = Complex64::new(*it.next().unwrap(), *it.next().unwrap());
            m[(r, c)] = z;
            m[(c, r)] = z.conj();
        }
    }
    m
}

fn random_unitaries(n: usize, count: usize, entries: &[f64]) -> Vec<CMatrix> {
    (0..count)
        .map(|s| {
            let rotated: Vec<f64> = entries
                .iter()
                .cycle()
                .skip(7 * s + 1)
                .take(n * n)
                .copied()
                .collect();
            expi_hermitian(&hermitian_from(n, &rotated)).unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bell_operator_is_hermitian_for_random_settings(
        d in prop::sample::select(vec![2u32, 3, 5]),
        entries in prop::collection::vec(-3.0f64..3.0, 40),
    ) {
        let pd = dim(d);
        let n = pd.size();
        let frames = random_unitaries(n, 2 * n, &entries);
        let op = scenario_from_frames(pd, &frames).unwrap().bell_operator().unwrap();
        prop_assert!(op.hermitian_asymmetry() <= 1e-10);
    }

    #[test]
    fn shift_symmetry_random_assignments(
        d in prop::sample::select(vec![2u32, 3, 5, 7, 11, 13, 17]),
        raw in prop::collection::vec(0u32..1000, 34),
        s in 0i64..17,
    ) {
        let pd = dim(d);
        let n = pd.size();
        let a: Vec<u32> = raw[..n].iter().map(|x| x % d).collect();
        let b: Vec<u32> = raw[n..2 * n].iter().map(|x| x % d).collect();
        let asg = LhvAssignment::new(pd, a, b).unwrap();
        prop_assert_eq!(asg.shifted(s).delta_count(), asg.delta_count());
        let bounds = analytic_bounds(pd);
        let v = asg.bell_value_exact();
        prop_assert!(bounds.min <= v && v <= bounds.max);
    }

    #[test]
    fn mixture_expectation_is_linear_in_weight(
        d in prop::sample::select(vec![2u32, 3, 5]),
        p in 0.0f64..=1.0,
    ) {
        let pd = dim(d);
        let state = paper_state(pd).unwrap();
        let op = paper_settings(pd).unwrap().bell_operator().unwrap();
        let q = state.expectation(&op).re;
        let mixed = NoiseMixture::new(p, state).unwrap().expectation(&op);
        prop_assert!((mixed - p * q).abs() <= 1e-10);
    }
}

#[test]
fn violating_operators_are_traceless() {
    for d in [2, 3, 5, 7] {
        let op = paper_settings(dim(d)).unwrap().bell_operator().unwrap();
        assert!(op.trace().norm() <= 1e-10, "d = {d}");
    }
}

#[test]
fn perfect_correlations_all_supported_dimensions() {
    for pd in PrimeDim::all() {
        let psi0 = maximally_entangled(pd);
        let d = pd.get() as i64;
        for i in 0..d {
            let op = tensor(&f_op(pd, 1, i), &f_op(pd, 1, -i)).unwrap();
            assert!(op.apply(&psi0).distance(&psi0) <= 1e-12, "d = {d}, i = {i}");
        }
    }
}

#[test]
fn two_path_agreement_five_and_seven() {
    for d in [5, 7] {
        let pd = dim(d);
        let matrix =
            quantum_expectation(&paper_state(pd).unwrap(), &paper_settings(pd).unwrap()).unwrap();
        let closed = expectation_closed_form(pd).unwrap();
        assert!(
            (matrix - closed).abs() <= 1e-8,
            "d = {d}: {matrix} vs {closed}"
        );
    }
}

#[test]
fn chsh_reduction_through_general_builder() {
    let pd = dim(2);
    let value =
        quantum_expectation(&paper_state(pd).unwrap(), &paper_settings(pd).unwrap()).unwrap();
    assert!((value - 2.0 * 2f64.sqrt()).abs() <= 1e-12);
}
