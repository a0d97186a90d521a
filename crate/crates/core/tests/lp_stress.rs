//! Random systems with a known answer: feasible ones built from a planted
//! nonnegative solution, infeasible ones from a planted Farkas vector.

use polyskel::lp::{int, rat, solve_feasibility, verify_farkas, verify_feasible, FeasibilitySystem, LpVerdict, Rational};
use polyskel::sampling::SplitMix64;

fn small(rng: &mut SplitMix64, lo: i64, hi: i64) -> i64 {
    lo + rng.below((hi - lo + 1) as u64) as i64
}

fn planted_feasible(rng: &mut SplitMix64) -> FeasibilitySystem {
    let m = 1 + rng.below(8) as usize;
    let k = 1 + rng.below(8) as usize;
    let a: Vec<Vec<Rational>> = (0..m).map(|_| (0..k).map(|_| int(small(rng, -3, 3))).collect()).collect();
    // sparse nonnegative rational λ*, often with zeros for degeneracy
    let lambda: Vec<Rational> = (0..k)
        .map(|_| if rng.below(3) == 0 { int(0) } else { rat(small(rng, 0, 5), small(rng, 1, 4)) })
        .collect();
    let b = a.iter().map(|row| row.iter().zip(&lambda).map(|(x, l)| x * l).sum()).collect();
    FeasibilitySystem::new(a, b, k).unwrap()
}

fn planted_infeasible(rng: &mut SplitMix64) -> FeasibilitySystem {
    let m = 1 + rng.below(8) as usize;
    let k = 1 + rng.below(8) as usize;
    let y: Vec<i64> = loop {
        let y: Vec<i64> = (0..m).map(|_| small(rng, -2, 2)).collect();
        if y.iter().any(|&v| v != 0) {
            break y;
        }
    };
    let pivot = rng.below(m as u64) as usize;
    let mut y = y;
    y[pivot] = if rng.below(2) == 0 { 1 } else { -1 };
    // shift one entry of each column so that y·A_j = target <= 0
    let mut a = vec![vec![0i64; k]; m];
    for j in 0..k {
        for row in a.iter_mut() {
            row[j] = small(rng, -3, 3);
        }
        let dot: i64 = (0..m).map(|i| y[i] * a[i][j]).sum();
        let target = -(rng.below(3) as i64);
        a[pivot][j] -= y[pivot] * (dot - target);
    }
    // b with y·b > 0
    let mut b: Vec<i64> = (0..m).map(|_| small(rng, -3, 3)).collect();
    let yb: i64 = (0..m).map(|i| y[i] * b[i]).sum();
    if yb <= 0 {
        b[pivot] += y[pivot].signum() * (1 - yb);
    }
    FeasibilitySystem::from_integers(&a, &b).unwrap()
}

#[test]
fn planted_systems() {
    let mut rng = SplitMix64::new(0x5eed);
    let (mut feasible, mut infeasible) = (0, 0);
    for case in 0..12_000 {
        if case % 2 == 0 {
            let sys = planted_feasible(&mut rng);
            match solve_feasibility(&sys).unwrap() {
                LpVerdict::Feasible(l) => assert!(verify_feasible(&sys, &l), "bad solution for {sys:?}"),
                LpVerdict::Infeasible(y) => panic!("planted feasible system reported infeasible: {sys:?} y={y:?}"),
            }
            feasible += 1;
        } else {
            let sys = planted_infeasible(&mut rng);
            match solve_feasibility(&sys).unwrap() {
                LpVerdict::Infeasible(y) => assert!(verify_farkas(&sys, &y), "bad certificate for {sys:?}"),
                LpVerdict::Feasible(l) => panic!("planted infeasible system reported feasible: {sys:?} λ={l:?}"),
            }
            infeasible += 1;
        }
    }
    assert_eq!(feasible + infeasible, 12_000);
}

#[test]
fn random_systems_always_certify() {
    let mut rng = SplitMix64::new(99);
    for _ in 0..4000 {
        let m = 1 + rng.below(6) as usize;
        let k = 1 + rng.below(6) as usize;
        let a: Vec<Vec<i64>> = (0..m).map(|_| (0..k).map(|_| small(&mut rng, -2, 2)).collect()).collect();
        let b: Vec<i64> = (0..m).map(|_| small(&mut rng, -2, 2)).collect();
        let sys = FeasibilitySystem::from_integers(&a, &b).unwrap();
        match solve_feasibility(&sys).unwrap() {
            LpVerdict::Feasible(l) => assert!(verify_feasible(&sys, &l)),
            LpVerdict::Infeasible(y) => assert!(verify_farkas(&sys, &y)),
        }
    }
}
