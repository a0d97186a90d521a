//! Exact feasibility of `A λ = b, λ >= 0` with a solution or a Farkas vector.

use polyskel::lp::{rat, solve_feasibility, verify_farkas, verify_feasible, FeasibilitySystem, LpVerdict};

fn main() -> polyskel::Result<()> {
    // midpoint of the square's diagonal as a mix of 01 and 10
    let feasible = FeasibilitySystem::from_integers(&[vec![1, 1], vec![-1, 1]], &[1, 0])?;
    // λ1 + λ2 = 1 and λ1 + λ2 = 2 cannot both hold
    let infeasible = FeasibilitySystem::from_integers(&[vec![1, 1], vec![1, 1]], &[1, 2])?;
    for (name, sys) in [("diagonal", &feasible), ("contradiction", &infeasible)] {
        match solve_feasibility(sys)? {
            LpVerdict::Feasible(l) => {
                let shown: Vec<String> = l.iter().map(|v| v.to_string()).collect();
                println!("{name}: feasible λ = {shown:?}, verified = {}", verify_feasible(sys, &l));
            }
            LpVerdict::Infeasible(y) => {
                let shown: Vec<String> = y.iter().map(|v| v.to_string()).collect();
                println!("{name}: infeasible, Farkas y = {shown:?}, verified = {}", verify_farkas(sys, &y));
            }
        }
    }
    let scaled = FeasibilitySystem::new(vec![vec![rat(1, 3), rat(2, 7)]], vec![rat(5, 21)], 2)?;
    println!("rational data: {:?}", solve_feasibility(&scaled)?.is_feasible());
    Ok(())
}
