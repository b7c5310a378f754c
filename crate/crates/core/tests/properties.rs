mod common;

use common::params;
use num_rational::BigRational;
use proptest::prelude::*;
use rado_lab::coloring::{lemma1_coloring, linear_infinite_coloring, parity_coloring};
use rado_lab::continuous::{lemma3_interval, map_x1_to_x0};
use rado_lab::formula::{lemma1_lower_bound, rado_main_formula};
use rado_lab::proofs::{generate_case_IIA_chain, generate_case_IIIA3_tuple, verify_chain};
use rado_lab::search::find_valid_coloring;
use rado_lab::{find_mono_solution, Color, Coloring, RadoValue, SearchBudget, SearchOutcome};

fn coloring_strategy(max_n: u64) -> impl Strategy<Value = Coloring> {
    prop::collection::vec(any::<bool>(), 0..=max_n as usize).prop_map(|bits| {
        Coloring::from_fn(bits.len() as u64, |v| if bits[v as usize - 1] { Color::Blue } else { Color::Red })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn formula_meets_lower_bound(m in 2u32..40, c in 1i64..60) {
        match rado_main_formula(m, c).unwrap() {
            RadoValue::Finite(r) => prop_assert_eq!(r, lemma1_lower_bound(m, c, 2).unwrap()),
            RadoValue::Infinite(_) => prop_assert!(m % 2 == 0 && c % 2 == 1),
            other => prop_assert!(false, "{other:?}"),
        }
    }

    #[test]
    fn lemma1_coloring_is_valid(m in 2u32..12, c in 1i64..30, a in 1u32..7) {
        let x = lemma1_coloring(m, c, a).unwrap();
        prop_assert_eq!(x.n() + 1, lemma1_lower_bound(m, c, a).unwrap());
        prop_assert!(find_mono_solution(&x, &params(m, c, a)).is_none());
    }

    #[test]
    fn parity_coloring_blocks_even_m_odd_c(half_m in 1u32..6, c in 0i64..10, n in 1u64..300) {
        let p = params(2 * half_m, 2 * c + 1, 2);
        prop_assert!(find_mono_solution(&parity_coloring(n), &p).is_none());
    }

    #[test]
    fn linear_coloring_is_valid(a in 2u32..7, c in 1i64..40, n in 1u64..400) {
        prop_assume!(c % (a as i64 - 1) != 0);
        let x = linear_infinite_coloring(c, a, n).unwrap();
        prop_assert!(find_mono_solution(&x, &params(1, c, a)).is_none());
    }

    #[test]
    fn coloring_round_trips(x in coloring_strategy(80)) {
        prop_assert_eq!(Coloring::from_compact(&x.to_compact()).unwrap(), x.clone());
        prop_assert_eq!(Coloring::parse(&x.to_json()).unwrap(), x.clone());
        prop_assert_eq!(x.swapped().swapped(), x);
    }

    #[test]
    fn color_swap_is_a_symmetry(x in coloring_strategy(30), m in 1u32..5, c in -2i64..8, a in 1u32..4) {
        let p = params(m, c, a);
        let w = find_mono_solution(&x, &p);
        let ws = find_mono_solution(&x.swapped(), &p);
        prop_assert_eq!(w.is_some(), ws.is_some());
        if let (Some(w), Some(ws)) = (w, ws) {
            prop_assert_eq!((w.x0, w.xs), (ws.x0, ws.xs));
        }
    }

    #[test]
    fn interval_map_advances_one_step(k in 0u32..20, num in 0i64..1000, cn in 1i64..40, cd in 1i64..5, an in 6i64..30) {
        let c = BigRational::new(cn.into(), cd.into());
        let a = BigRational::new(an.into(), 5.into());
        prop_assume!(c >= &a - BigRational::from_integer(1.into()));
        let here = lemma3_interval(k, &c, &a).unwrap();
        prop_assume!(!here.is_empty());
        let t = BigRational::new(num.into(), 1000.into());
        let x = &here.lo + (&here.hi - &here.lo) * t;
        let next = lemma3_interval(k + 1, &c, &a).unwrap();
        prop_assert!(next.contains(&map_x1_to_x0(&x, &c, &a).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn search_is_thread_independent(m in 2u32..6, c in 1i64..8, extra in 0u64..3) {
        let p = params(m, c, 2);
        let n = match rado_main_formula(m, c).unwrap() {
            RadoValue::Finite(r) => r - 1 + extra,
            _ => 40,
        };
        let one = find_valid_coloring(n, &p, &SearchBudget::default());
        let four = find_valid_coloring(n, &p, &SearchBudget::default().with_threads(4));
        prop_assert_eq!(&one, &four);
        if let SearchOutcome::ValidColoring(x) = &one {
            prop_assert!(find_mono_solution(x, &p).is_none());
            prop_assert_eq!(x.color(1), Color::Red);
        }
    }

    #[test]
    fn no_valid_stays_no_valid(m in 1u32..5, c in -2i64..8, a in 1u32..4) {
        let p = params(m, c, a);
        let b = SearchBudget::default();
        let mut seen_none = false;
        for n in 1..=24 {
            let valid = matches!(find_valid_coloring(n, &p, &b), SearchOutcome::ValidColoring(_));
            prop_assert!(!(seen_none && valid), "valid at {} after a refutation", n);
            seen_none |= !valid;
        }
    }
}

#[test]
fn iia_chains_pass_on_full_grid() {
    let mut count = 0;
    for m in (2..=12).step_by(2) {
        for c in (2..=10).step_by(2) {
            let half = (m as u64 + c as u64) / 2;
            let lowest = if m == 2 { 1 } else { 2 };
            for s in lowest..half {
                let chain = generate_case_IIA_chain(m, c, s).unwrap();
                let report = verify_chain(&chain).unwrap();
                assert!(report.passed(), "m={m} c={c} s={s}: {report:?}");
                count += 1;
            }
        }
    }
    assert!(count > 100);
}

#[test]
fn iia_boundary_lands_on_r() {
    for m in (4..=12).step_by(2) {
        for c in (2..=10i64).step_by(2) {
            let s = (m as u64 + c as u64) / 2 - 1;
            let chain = generate_case_IIA_chain(m, c, s).unwrap();
            let r = rado_main_formula(m, c).unwrap().finite().unwrap();
            assert_eq!(chain.steps[1].value, r, "m={m} c={c}");
        }
    }
}

#[test]
fn iiia3_postconditions_on_full_grid() {
    for m in (3..=15u32).step_by(2) {
        for c in 1..=15i64 {
            let r = rado_main_formula(m, c).unwrap().finite().unwrap();
            let (x, y) = generate_case_IIIA3_tuple(m, c, r).unwrap();
            let k = (m - 1) as i64;
            let span = r as i64 - c;
            let (lo, hi) = (span.div_euclid(k), (span + k - 1).div_euclid(k));
            assert_eq!(x + y, (m - 1) as u64);
            assert_eq!(lo * x as i64 + hi * y as i64, span, "m={m} c={c}");
        }
    }
}
