//! Frozen end-to-end traces. Step norms and iterates are pure binary64
//! arithmetic and are asserted bitwise; order estimates pass through the
//! libm logarithm and get a 1e-12 window instead.

use nlsys::{
    bvp_problem, coc_estimate, error_norms, lookup, problem1, solve, BvpSpec, Matrix, MethodId,
    NonlinearProblem, NormKind, SolverConfig, SolveStatus, Vector, ALPHA7,
};

fn run(p: &NonlinearProblem, m: MethodId, x0: &Vector) -> nlsys::SolveTrace {
    solve(p, m, x0, &SolverConfig::default())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn problem1_pg6_trace() {
    let p = problem1();
    let t = run(&p, MethodId::Pg6, p.default_start());
    assert_eq!(t.status, SolveStatus::Converged);
    assert_eq!(t.iterations(), 4);
    assert_eq!(t.records[1].x.as_slice(), &[1.0, 2.276866652619244]);
    assert_eq!(t.records[2].x.as_slice(), &[1.0, 1.0411980475199965]);
    assert_eq!(t.records[3].x.as_slice(), &[1.0, 1.0000000008697891]);
    assert_eq!(t.records[4].x.as_slice(), &[1.0, 1.0]);
    assert_eq!(
        t.step_norms(),
        vec![
            1.037619941661004,
            1.2356686050992476,
            0.04119804665020732,
            8.69789129609444e-10,
        ]
    );
    let est = coc_estimate(&t).unwrap();
    assert_eq!(est.valid_count, 1);
    assert!(close(est.p_max, 5.196567854535745, 1e-12));
    let alpha = p.known_solution().unwrap();
    assert_eq!(
        error_norms(&t, alpha, NormKind::L1),
        vec![
            2.0,
            1.276866652619244,
            0.04119804751999645,
            8.69789129609444e-10,
            0.0,
        ]
    );
}

#[test]
fn problem1_newton_trace() {
    let p = problem1();
    let t = run(&p, MethodId::Newton, p.default_start());
    assert_eq!(t.status, SolveStatus::Converged);
    assert_eq!(t.iterations(), 8);
    assert_eq!(t.final_iterate().as_slice(), &[1.0, 1.0]);
    assert_eq!(
        t.step_norms(),
        vec![
            1.0574327697305395,
            0.7205685185185184,
            0.41454474606188696,
            0.17469387350419585,
            0.032840759993148394,
            0.0011008890760071388,
            1.2128447721693192e-6,
            1.4710455076283324e-12,
        ]
    );
    assert!(close(coc_estimate(&t).unwrap().p_max, 2.0316046397285903, 1e-12));
}

#[test]
fn problem1_cordero5_trace() {
    let p = problem1();
    let t = run(&p, MethodId::Cordero5, p.default_start());
    assert_eq!(t.status, SolveStatus::Converged);
    assert_eq!(t.iterations(), 4);
    assert_eq!(t.final_iterate().as_slice(), &[1.0, 1.0]);
    assert_eq!(
        t.step_norms(),
        vec![
            1.079312294606755,
            0.5744148472850792,
            0.019487831607635675,
            6.059156953952538e-9,
        ]
    );
    let est = coc_estimate(&t).unwrap();
    assert_eq!(est.valid_count, 2);
    assert!(close(est.p_max, 5.364538066218797, 1e-12));
}

#[test]
fn problem1_cordero6_trace() {
    // the wide start makes this scheme wander before it locks on, so the
    // order reads low here; its clean sixth-order behavior shows on the
    // boundary problem below
    let p = problem1();
    let t = run(&p, MethodId::Cordero6, p.default_start());
    assert_eq!(t.status, SolveStatus::Converged);
    assert_eq!(t.iterations(), 6);
    assert_eq!(t.final_iterate().as_slice(), &[1.0, 1.0]);
    assert_eq!(
        t.step_norms(),
        vec![
            2.115718767296218,
            7.8966036950392215,
            5.103019773054666,
            1.7038933891500836,
            0.22515156607937326,
            6.426800227621321e-5,
        ]
    );
    let est = coc_estimate(&t).unwrap();
    assert_eq!(est.valid_count, 3);
    assert!(close(est.p_max, 4.032549997881207, 1e-12));
}

#[test]
fn bvp7_pg6_trace() {
    let p = bvp_problem(BvpSpec::new(7).unwrap());
    let t = run(&p, MethodId::Pg6, p.default_start());
    assert_eq!(t.status, SolveStatus::Converged);
    assert_eq!(t.iterations(), 4);
    assert_eq!(
        t.records[1].x.as_slice(),
        &[
            -0.017114396804570053,
            -0.05958033414350239,
            -0.05554150524331258,
            -0.15883785476654722,
            0.023407390755885604,
            -0.5135685124721072,
        ]
    );
    assert_eq!(
        t.step_norms(),
        vec![
            18.08312384928075,
            0.29949347374483115,
            1.7236775954606028e-11,
            4.9065389333867974e-18,
        ]
    );
    for (got, want) in t.final_iterate().as_slice().iter().zip(ALPHA7) {
        assert!((got - want).abs() < 1e-12);
    }
    let est = coc_estimate(&t).unwrap();
    assert_eq!(est.valid_count, 2);
    assert!(close(est.p_max, 5.749908072829334, 1e-12));
    assert!(close(est.p_max, 5.7499, 1e-2));
}

#[test]
fn bvp7_cordero5_trace_ends_with_an_exact_repeat() {
    let p = bvp_problem(BvpSpec::new(7).unwrap());
    let t = run(&p, MethodId::Cordero5, p.default_start());
    assert_eq!(t.status, SolveStatus::Converged);
    assert_eq!(t.iterations(), 4);
    assert_eq!(
        t.step_norms(),
        vec![
            17.644274302704844,
            0.21720468262993733,
            6.478296124115198e-12,
            0.0,
        ]
    );
    // the zero final difference is skipped, not allowed to poison the max
    let est = coc_estimate(&t).unwrap();
    assert_eq!(est.valid_count, 1);
    assert!(close(est.p_max, 5.511450802742434, 1e-12));
}

#[test]
fn bvp7_cordero6_trace() {
    let p = bvp_problem(BvpSpec::new(7).unwrap());
    let t = run(&p, MethodId::Cordero6, p.default_start());
    assert_eq!(t.status, SolveStatus::Converged);
    assert_eq!(t.iterations(), 3);
    assert_eq!(
        t.step_norms(),
        vec![
            17.794443396949315,
            0.028274398173104842,
            1.5922644930580816e-17,
        ]
    );
    assert!(close(coc_estimate(&t).unwrap().p_max, 5.448364352193128, 1e-12));
    // a farther start leaves one more usable triple and reads the order
    // closer to six
    let t = solve(
        &p,
        MethodId::Cordero6,
        &Vector::fill(6, 30.0),
        &SolverConfig::default(),
    );
    assert_eq!(t.iterations(), 4);
    assert_eq!(
        t.step_norms(),
        vec![
            55.08018325840622,
            18.67556384335639,
            0.021211813349290242,
            1.8703665918870363e-17,
        ]
    );
    let est = coc_estimate(&t).unwrap();
    assert_eq!(est.valid_count, 2);
    assert!(close(est.values()[0], 6.269023157905242, 1e-12));
    assert!(close(est.values()[1], 5.1124637110110065, 1e-12));
}

#[test]
fn bvp15_pg6_traces() {
    let p = lookup("bvp:15").unwrap();
    // from the near start the norms collapse to the rounding floor in three
    // steps; the single usable triple reads far below the true order
    let t = solve(&p, MethodId::Pg6, &Vector::fill(14, 0.5), &SolverConfig::default());
    assert_eq!(t.status, SolveStatus::Converged);
    assert_eq!(t.iterations(), 3);
    assert_eq!(
        t.step_norms(),
        vec![
            1.9694657845831194,
            3.5998042358284787e-10,
            6.216327781833222e-17,
        ]
    );
    assert!(close(coc_estimate(&t).unwrap().p_max, 0.6944646408583397, 1e-12));
    // a farther start gives the method room to show its order
    let t = solve(&p, MethodId::Pg6, &Vector::fill(14, 20.0), &SolverConfig::default());
    assert_eq!(t.iterations(), 4);
    assert_eq!(
        t.step_norms(),
        vec![
            77.95303454767625,
            3.174477334760434,
            1.4533284791619838e-8,
            5.55162331963181e-17,
        ]
    );
    assert!(close(coc_estimate(&t).unwrap().p_max, 5.99880853659022, 1e-12));
}

#[test]
fn bvp7_pg6_from_the_solution_itself() {
    // the printed solution is not an exact binary root, so one genuine
    // (tiny) step is taken rather than the exact-root short circuit
    let p = bvp_problem(BvpSpec::new(7).unwrap());
    let t = run(&p, MethodId::Pg6, &Vector::new(ALPHA7.to_vec()));
    assert_eq!(t.status, SolveStatus::Converged);
    assert_eq!(t.iterations(), 1);
    assert_eq!(t.step_norms(), vec![3.9747508192403134e-18]);
}

#[test]
fn scalar_cubic_hits_the_exact_root() {
    let p = NonlinearProblem::new(
        "cubic",
        1,
        Box::new(|x: &Vector| {
            let a = x[0];
            Vector::new(vec![a * a * a - 2.0])
        }),
        Box::new(|x: &Vector| {
            let a = x[0];
            Matrix::from_rows(vec![vec![3.0 * (a * a)]])
        }),
        None,
        Vector::new(vec![1.5]),
    );
    let t = run(&p, MethodId::Pg6, p.default_start());
    // the second iterate cubes to exactly 2.0 in binary64, so the solve
    // stops on the exact root two iterations in
    assert_eq!(t.status, SolveStatus::Converged);
    assert_eq!(t.iterations(), 2);
    assert_eq!(t.records[1].x.as_slice(), &[1.2599286867879331]);
    assert_eq!(t.records[2].x.as_slice(), &[1.2599210498948732]);
    assert_eq!(
        t.step_norms(),
        vec![0.24007131321206687, 7.636893059936867e-6]
    );
    // two full iterations plus the residual check that found the root
    assert_eq!(t.ops.residual_evals, 5);
    let root = t.final_iterate()[0];
    assert_eq!(root * root * root, 2.0);
}
