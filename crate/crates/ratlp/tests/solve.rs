use proptest::prelude::*;
use ratlp::{solve, Bounds, FeasOutcome, LinSystem, LpError, Objective, Rat};

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn int(n: i64) -> Rat {
    Rat::from_integer(n)
}

#[test]
fn single_equation_in_unit_box() {
    let mut sys = LinSystem::new();
    let v = sys.add_var("v", Bounds::unit());
    sys.add_row([(v, int(2))], int(1)).unwrap();
    let out = solve(&sys, None).unwrap();
    assert_eq!(out.outcome, FeasOutcome::Feasible(vec![r(1, 2)]));
}

#[test]
fn bound_conflict_has_certificate() {
    let mut sys = LinSystem::new();
    let v = sys.add_var("v", Bounds::unit());
    sys.add_row([(v, int(1))], int(2)).unwrap();
    let out = solve(&sys, None).unwrap();
    match out.outcome {
        FeasOutcome::Infeasible(cert) => {
            assert!(cert.verify(&sys));
            let (coeffs, rhs) = cert.combine(&sys);
            // y * v = 2y while y * v <= y on the box
            assert!(coeffs[0].is_positive());
            assert!(rhs > coeffs[0]);
        }
        other => panic!("expected infeasible, got {other:?}"),
    }
}

#[test]
fn contradictory_free_rows_give_zero_equals_nonzero() {
    let mut sys = LinSystem::new();
    let a = sys.add_var("a", Bounds::free());
    let b = sys.add_var("b", Bounds::free());
    sys.add_row([(a, int(1)), (b, int(1))], int(1)).unwrap();
    sys.add_row([(a, int(2)), (b, int(2))], int(3)).unwrap();
    let FeasOutcome::Infeasible(cert) = solve(&sys, None).unwrap().outcome else {
        panic!("expected infeasible");
    };
    assert!(cert.verify(&sys));
    let (coeffs, rhs) = cert.combine(&sys);
    assert!(coeffs.iter().all(Rat::is_zero));
    assert!(!rhs.is_zero());
}

#[test]
fn maximize_over_unit_simplex() {
    let mut sys = LinSystem::new();
    let v1 = sys.add_var("v1", Bounds::non_negative());
    let v2 = sys.add_var("v2", Bounds::non_negative());
    sys.add_row([(v1, int(1)), (v2, int(1))], int(1)).unwrap();
    let obj = Objective::maximize(vec![(v1, int(1))]);
    let out = solve(&sys, Some(&obj)).unwrap();
    assert_eq!(out.value, Some(int(1)));
    assert_eq!(out.outcome, FeasOutcome::Feasible(vec![int(1), int(0)]));
}

#[test]
fn minimize_with_upper_only_and_free_variables() {
    let mut sys = LinSystem::new();
    let x = sys.add_var(
        "x",
        Bounds {
            lower: None,
            upper: Some(int(3)),
        },
    );
    let y = sys.add_var("y", Bounds::free());
    sys.add_row([(x, int(1)), (y, int(-1))], int(1)).unwrap();
    sys.add_row([(y, int(1))], r(1, 2)).unwrap();
    let obj = Objective::minimize(vec![(x, int(1))]);
    let out = solve(&sys, Some(&obj)).unwrap();
    assert_eq!(out.value, Some(r(3, 2)));
}

#[test]
fn unbounded_objective() {
    let mut sys = LinSystem::new();
    let x = sys.add_var("x", Bounds::non_negative());
    let y = sys.add_var("y", Bounds::non_negative());
    sys.add_row([(x, int(1)), (y, int(-1))], int(0)).unwrap();
    let obj = Objective::maximize(vec![(x, int(1))]);
    assert_eq!(solve(&sys, Some(&obj)), Err(LpError::Unbounded));
}

#[test]
fn undeclared_variable_rejected() {
    let mut sys = LinSystem::new();
    sys.add_var("x", Bounds::free());
    assert_eq!(
        sys.add_row([(3, int(1))], int(0)),
        Err(LpError::UndeclaredVariable(3))
    );
}

#[test]
fn redundant_rows_are_tolerated() {
    let mut sys = LinSystem::new();
    let a = sys.add_var("a", Bounds::unit());
    let b = sys.add_var("b", Bounds::unit());
    sys.add_row([(a, int(1)), (b, int(1))], int(1)).unwrap();
    sys.add_row([(a, int(2)), (b, int(2))], int(2)).unwrap();
    sys.add_row([], int(0)).unwrap();
    sys.fix(a, r(1, 3)).unwrap();
    let out = solve(&sys, None).unwrap();
    assert_eq!(out.outcome, FeasOutcome::Feasible(vec![r(1, 3), r(2, 3)]));
}

/// Solves a square system by Cramer-free elimination; `None` unless unique.
fn unique_solution(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>, n: usize) -> Option<Vec<Rat>> {
    let m = a.len();
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        let p = (row..m).find(|&i| !a[i][col].is_zero())?;
        a.swap(row, p);
        b.swap(row, p);
        let inv = a[row][col].recip();
        for v in a[row].iter_mut() {
            *v = &*v * &inv;
        }
        b[row] = &b[row] * &inv;
        for i in 0..m {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let pr = a[row].clone();
                for (v, pv) in a[i].iter_mut().zip(&pr) {
                    *v = &*v - &(&f * pv);
                }
                let pb = b[row].clone();
                b[i] = &b[i] - &(&f * &pb);
            }
        }
        pivots.push(col);
        row += 1;
    }
    // leftover rows must be consistent
    if (row..m).any(|i| !b[i].is_zero()) {
        return None;
    }
    Some(b[..n].to_vec())
}

/// Brute-force LP optimum over the unit box: enumerate every assignment of
/// "at 0 / at 1 / free" to the variables and keep unique feasible solutions.
fn brute_force_max(rows: &[(Vec<i64>, i64)], obj: &[i64], n: usize) -> Option<Rat> {
    let mut best: Option<Rat> = None;
    for code in 0..3usize.pow(n as u32) {
        let mut a: Vec<Vec<Rat>> = rows
            .iter()
            .map(|(c, _)| c.iter().map(|&v| int(v)).collect())
            .collect();
        let mut b: Vec<Rat> = rows.iter().map(|(_, rhs)| int(*rhs)).collect();
        let mut k = code;
        for j in 0..n {
            let state = k % 3;
            k /= 3;
            if state < 2 {
                let mut unit = vec![int(0); n];
                unit[j] = int(1);
                a.push(unit);
                b.push(int(state as i64));
            }
        }
        if let Some(x) = unique_solution(a, b, n) {
            if x.iter().all(|v| !v.is_negative() && *v <= int(1)) {
                let val: Rat = x.iter().zip(obj).map(|(v, c)| v * &int(*c)).sum();
                best = Some(match best {
                    Some(cur) => cur.max(val),
                    None => val,
                });
            }
        }
    }
    best
}

fn small_system() -> impl Strategy<Value = (usize, Vec<(Vec<i64>, i64)>, Vec<i64>)> {
    (1usize..=3).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((prop::collection::vec(-3i64..=3, n), -3i64..=3), 0..=3),
            prop::collection::vec(-4i64..=4, n),
        )
    })
}

fn build(n: usize, rows: &[(Vec<i64>, i64)]) -> LinSystem {
    let mut sys = LinSystem::new();
    for j in 0..n {
        sys.add_var(format!("v{j}"), Bounds::unit());
    }
    for (coeffs, rhs) in rows {
        sys.add_row(coeffs.iter().enumerate().map(|(j, &c)| (j, int(c))), int(*rhs))
            .unwrap();
    }
    sys
}

proptest! {
    #[test]
    fn outcomes_are_exactly_checkable((n, rows, obj) in small_system()) {
        let sys = build(n, &rows);
        let objective = Objective::maximize(obj.iter().enumerate().map(|(j, &c)| (j, int(c))).collect());
        let out = solve(&sys, Some(&objective)).unwrap();
        match &out.outcome {
            FeasOutcome::Feasible(p) => {
                prop_assert!(sys.residuals(p).iter().all(Rat::is_zero));
                prop_assert!(sys.is_feasible_point(p));
                prop_assert_eq!(out.value.clone(), brute_force_max(&rows, &obj, n));
            }
            FeasOutcome::Infeasible(cert) => {
                prop_assert!(cert.verify(&sys));
                prop_assert_eq!(brute_force_max(&rows, &obj, n), None);
            }
        }
    }

    #[test]
    fn solve_is_deterministic((n, rows, obj) in small_system()) {
        let sys = build(n, &rows);
        let objective = Objective::maximize(obj.iter().enumerate().map(|(j, &c)| (j, int(c))).collect());
        prop_assert_eq!(solve(&sys, Some(&objective)), solve(&sys, Some(&objective)));
        prop_assert_eq!(solve(&sys, None), solve(&sys, None));
    }
}
