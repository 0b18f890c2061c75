//! Invariants of arrays, designs and the main-effects analysis.

mod common;

use common::rel_close;
use itertools::Itertools;
use proptest::prelude::*;
use taguchi_core::analysis::{analyze, snr, ResultTable as Results};
use taguchi_core::arrays::{get_array, names, verify_orthogonality};
use taguchi_core::design::{Design as GenericDesign, Factor as GenericFactor};
use taguchi_core::evaluators::{fit_surrogate, Evaluator};
use taguchi_core::{Design, Factor, Objective, Rational, ResponseSpec, ResultTable};

fn unit_design(array: &str) -> Design {
    let a = get_array(array).unwrap();
    let factors = (0..a.columns())
        .map(|c| {
            let levels = (0..a.levels(c)).map(|l| l as f64 * 10.0).collect();
            Factor::new(format!("f{c}"), "", levels).unwrap()
        })
        .collect();
    Design::bind(a, factors).unwrap()
}

fn table_from(values: &[f64]) -> ResultTable {
    let mut t = ResultTable::new(vec!["y".into()]).unwrap();
    for (i, &v) in values.iter().enumerate() {
        t.record(i + 1, "y", v).unwrap();
    }
    t
}

fn exact_l9() -> GenericDesign<Rational> {
    let factors = (0..4)
        .map(|c| {
            GenericFactor::new(
                format!("f{c}"),
                "",
                (1..=3).map(Rational::from_integer).collect(),
            )
            .unwrap()
        })
        .collect();
    GenericDesign::bind(get_array("L9").unwrap(), factors).unwrap()
}

fn exact_table(values: &[Rational]) -> Results<Rational> {
    let mut t = Results::new(vec!["y".into()]).unwrap();
    for (i, &v) in values.iter().enumerate() {
        t.record(i + 1, "y", v).unwrap();
    }
    t
}

proptest! {
    #[test]
    fn any_single_cell_mutation_breaks_orthogonality(
        which in 0usize..5,
        run in 0usize..27,
        column in 0usize..15,
        shift in 1usize..3,
    ) {
        let a = get_array(names()[which]).unwrap();
        let (run, column) = (run % a.runs(), column % a.columns());
        let q = a.levels(column);
        let level = (a.cell(run, column) + shift % q.max(2)) % q;
        prop_assume!(level != a.cell(run, column));
        let mutated = a.with_cell(run, column, level).unwrap();
        prop_assert!(!verify_orthogonality(&mutated).passed());
    }

    #[test]
    fn smaller_the_better_snr_is_decreasing(a in 1e-6f64..1e6, b in 1e-6f64..1e6) {
        prop_assume!(a != b);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let obj = Objective::SmallerTheBetter;
        prop_assert!(snr(&[lo], &obj).unwrap() > snr(&[hi], &obj).unwrap());
    }

    #[test]
    fn grand_mean_is_mean_of_each_factor_row(values in prop::collection::vec(0.01f64..100.0, 9)) {
        let d = unit_design("L9");
        let r = analyze(&d, &table_from(&values), &[ResponseSpec::smaller("y", "")]).unwrap();
        let r = &r.responses[0];
        for row in r.level_means.rows() {
            let m = row.iter().sum::<f64>() / row.len() as f64;
            prop_assert!(rel_close(m, r.grand_mean, 1e-9));
        }
    }

    #[test]
    fn predictions_over_runs_average_to_grand_mean(values in prop::collection::vec(0.01f64..100.0, 8)) {
        let d = unit_design("L8");
        let r = analyze(&d, &table_from(&values), &[ResponseSpec::smaller("y", "")]).unwrap();
        let r = &r.responses[0];
        let mean = d.runs().iter().map(|run| r.predict(&run.levels).unwrap()).sum::<f64>()
            / d.run_count() as f64;
        prop_assert!(rel_close(mean, r.grand_mean, 1e-9));
    }

    #[test]
    fn affine_transform_keeps_ranks_and_optima(
        raw in prop::collection::vec(-50i64..50, 9),
        scale_num in 1i64..20,
        scale_den in 1i64..20,
        shift in -100i64..100,
    ) {
        let d = exact_l9();
        let a = Rational::new(scale_num, scale_den);
        let b = Rational::from_integer(shift);
        let y: Vec<Rational> = raw.iter().map(|&v| Rational::from_integer(v)).collect();
        let z: Vec<Rational> = y.iter().map(|&v| a * v + b).collect();
        for objective in [Objective::SmallerTheBetter, Objective::LargerTheBetter] {
            let spec = [ResponseSpec::new("y", "", objective).unwrap()];
            let before = analyze(&d, &exact_table(&y), &spec).unwrap();
            let after = analyze(&d, &exact_table(&z), &spec).unwrap();
            let (before, after) = (&before.responses[0], &after.responses[0]);
            prop_assert_eq!(&before.ranking.ranks, &after.ranking.ranks);
            prop_assert_eq!(&before.optimal, &after.optimal);
            for (x, w) in before.ranking.deltas.iter().zip(&after.ranking.deltas) {
                prop_assert_eq!(a * x, *w);
            }
            prop_assert_eq!(a * before.grand_mean + b, after.grand_mean);
        }
    }

    #[test]
    fn exact_grand_mean_identity(raw in prop::collection::vec(-1000i64..1000, 9)) {
        let d = exact_l9();
        let y: Vec<Rational> = raw.iter().map(|&v| Rational::new(v, 7)).collect();
        let r = analyze(&d, &exact_table(&y), &[ResponseSpec::smaller("y", "")]).unwrap();
        let r = &r.responses[0];
        for row in r.level_means.rows() {
            let sum = row.iter().fold(Rational::from_integer(0), |acc, &m| acc + m);
            prop_assert_eq!(sum / Rational::from_integer(3), r.grand_mean);
        }
    }

    #[test]
    fn surrogate_minimum_is_separable(values in prop::collection::vec(0.01f64..100.0, 9)) {
        let d = unit_design("L9");
        let report = analyze(&d, &table_from(&values), &[ResponseSpec::smaller("y", "")]).unwrap();
        let s = fit_surrogate(&report, "y").unwrap();
        let brute = (0..4)
            .map(|_| 0..3usize)
            .multi_cartesian_product()
            .map(|c| s.evaluate_levels(&c, "y").unwrap())
            .fold(f64::INFINITY, f64::min);
        let (levels, value) = s.argmin();
        prop_assert!(rel_close(value, brute, 1e-9));
        prop_assert_eq!(levels, report.responses[0].optimal.levels.clone());
    }

    #[test]
    fn run_sheet_round_trips(
        steps in prop::collection::vec(prop::collection::vec(0.001f64..1000.0, 2), 3),
        start in -100.0f64..100.0,
    ) {
        let factors: Vec<Factor> = steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let levels = vec![start, start + s[0]];
                Factor::new(format!("factor {i}, \"quoted\""), "u", levels).unwrap()
            })
            .collect();
        let d = Design::bind(get_array("L4").unwrap(), factors.clone()).unwrap();
        prop_assert_eq!(&Design::bind(get_array("L4").unwrap(), factors).unwrap(), &d);
        let back = d.read_run_sheet(d.run_sheet_csv().as_bytes()).unwrap();
        prop_assert_eq!(back.as_slice(), d.runs());
    }

    #[test]
    fn results_csv_round_trips(
        rows in prop::collection::vec((1usize..6, prop::option::of(-1e3f64..1e3), prop::option::of(-1e3f64..1e3)), 1..20),
    ) {
        let mut t = ResultTable::new(vec!["a".into(), "b".into()]).unwrap();
        for (run, a, b) in &rows {
            if let Some(a) = a { t.record(*run, "a", *a).unwrap(); }
            if let Some(b) = b { t.record(*run, "b", *b).unwrap(); }
        }
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let back = ResultTable::read_csv(buf.as_slice()).unwrap();
        for run in 1..6 {
            for c in 0..2 {
                prop_assert_eq!(back.replicates(run, c), t.replicates(run, c));
            }
        }
    }
}

#[test]
fn catalog_arrays_all_verify() {
    for name in names() {
        let report = verify_orthogonality(&get_array(name).unwrap());
        assert!(report.passed(), "{name}: {report}");
    }
}

#[test]
fn level_usage_inherits_balance() {
    for name in names() {
        let d = unit_design(name);
        for (f, factor) in d.factors().iter().enumerate() {
            for &v in factor.levels() {
                let n = d.runs().iter().filter(|r| r.values[f] == v).count();
                assert_eq!(n * factor.level_count(), d.run_count(), "{name} f{f}");
            }
        }
    }
}
