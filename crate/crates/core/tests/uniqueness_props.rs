use infmln_core::uniqueness::{check_uniqueness, interaction_sum, oscillation, Verdict};
use infmln_core::{Herbrand, Program};
use proptest::prelude::*;

fn chain(w: f64, extra: &str) -> Herbrand {
    let text = format!(
        "type nat = infinite seed 0\nfunction s(nat) -> nat\npredicate Q(nat)\n{w} forall x Q(x) <=> Q(s(x))\n{extra}"
    );
    Herbrand::new(Program::from_text(&text).unwrap()).unwrap()
}

fn lattice(w: f64, extra: &str) -> Herbrand {
    let text = format!(
        "type nat = infinite seed 0\nfunction s(nat) -> nat\npredicate Q(nat, nat)\n\
         {w} forall x, y Q(x, y) <=> Q(s(x), y)\n{w} forall x, y Q(x, y) <=> Q(x, s(y))\n{extra}"
    );
    Herbrand::new(Program::from_text(&text).unwrap()).unwrap()
}

const CHAIN_ATOMS: [&str; 4] = ["Q(0)", "Q(s(0))", "Q(s(s(0)))", "Q(s(s(s(0))))"];
const LATTICE_ATOMS: [&str; 6] = [
    "Q(0, 0)",
    "Q(0, s(0))",
    "Q(s(0), 0)",
    "Q(s(0), s(0))",
    "Q(s(s(0)), s(0))",
    "Q(s(s(s(0))), s(s(0)))",
];

fn sums(h: &mut Herbrand, atoms: &[&str]) -> Vec<f64> {
    atoms
        .iter()
        .map(|a| {
            let id = h.parse_atom(a).unwrap();
            interaction_sum(h, id).unwrap().sum
        })
        .collect()
}

#[test]
fn chain_sum_is_twice_the_weight() {
    for w in [0.1, 0.9, 1.1, 2.5] {
        let s = sums(&mut chain(w, ""), &CHAIN_ATOMS);
        assert_eq!(s[3], 2.0 * w);
        assert_eq!(s[0], w);
    }
}

#[test]
fn lattice_sum_is_four_times_the_weight() {
    for w in [0.1, 0.4, 0.6] {
        let s = sums(&mut lattice(w, ""), &LATTICE_ATOMS);
        assert!((s[3] - 4.0 * w).abs() < 1e-12);
        assert!((s[0] - 2.0 * w).abs() < 1e-12);
    }
}

#[test]
fn verdict_thresholds() {
    let r = check_uniqueness(&mut chain(0.9, ""), 8, 3).unwrap();
    assert_eq!((r.verdict, r.supremum), (Verdict::UniqueCertified, 1.8));
    assert_eq!(
        check_uniqueness(&mut chain(1.1, ""), 8, 3).unwrap().verdict,
        Verdict::Inconclusive
    );
    let r = check_uniqueness(&mut lattice(0.4, ""), 8, 3).unwrap();
    assert_eq!(r.verdict, Verdict::UniqueCertified);
    assert!((r.supremum - 1.6).abs() < 1e-12);
    assert_eq!(
        check_uniqueness(&mut lattice(0.6, ""), 8, 3).unwrap().verdict,
        Verdict::Inconclusive
    );
}

#[test]
fn boundary_never_dominates_interior() {
    let mut h = chain(0.7, "");
    let s = sums(&mut h, &CHAIN_ATOMS);
    assert!(s[0] <= s[3]);
    let mut h = lattice(0.7, "");
    let s = sums(&mut h, &LATTICE_ATOMS);
    for edge in &s[..3] {
        assert!(*edge <= s[3]);
    }
}

#[test]
fn clause_potential_oscillation_is_weight_magnitude() {
    for (w, lits) in [(1.5f64, 2usize), (-0.75, 3), (2.0, 1)] {
        // A clause of distinct atoms is false on exactly one assignment.
        let values: Vec<f64> = (0..1u32 << lits).map(|x| if x == 0 { 0.0 } else { w }).collect();
        assert_eq!(oscillation(&values).unwrap(), w.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn unit_clauses_do_not_count(u in -10.0f64..10.0, v in -10.0f64..10.0) {
        let extra = format!("{u} forall x Q(x)\n{v} Q(s(0))\n");
        prop_assert_eq!(sums(&mut chain(0.8, ""), &CHAIN_ATOMS), sums(&mut chain(0.8, &extra), &CHAIN_ATOMS));
        let extra = format!("{u} forall x, y Q(x, y)\n{v} !Q(0, s(0))\n");
        prop_assert_eq!(sums(&mut lattice(0.3, ""), &LATTICE_ATOMS), sums(&mut lattice(0.3, &extra), &LATTICE_ATOMS));
    }

    #[test]
    fn sums_scale_with_weight_magnitude(w in 0.01f64..3.0, k in -3i32..4, sign in any::<bool>()) {
        let lambda = if sign { -(2f64.powi(k)) } else { 2f64.powi(k) };
        let base = sums(&mut lattice(w, ""), &LATTICE_ATOMS);
        let scaled = sums(&mut lattice(lambda * w, ""), &LATTICE_ATOMS);
        for (a, b) in base.iter().zip(&scaled) {
            // Powers of two scale exactly.
            prop_assert_eq!(a * lambda.abs(), *b);
        }
    }

    #[test]
    fn sums_scale_with_any_factor(w in 0.01f64..3.0, lambda in -5.0f64..5.0) {
        let base = sums(&mut chain(w, ""), &CHAIN_ATOMS);
        let scaled = sums(&mut chain(lambda * w, ""), &CHAIN_ATOMS);
        for (a, b) in base.iter().zip(&scaled) {
            prop_assert!((a * lambda.abs() - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn depth_maxima_nondecreasing(w in 0.0f64..1.0, depth in 3usize..7) {
        let r = check_uniqueness(&mut lattice(w, "0.5 forall x Q(x, 0)\n"), depth, 2).unwrap();
        prop_assert!(r.depths.windows(2).all(|p| p[0].running_max <= p[1].running_max));
    }
}
