use std::collections::HashSet;
use std::hash::Hash;

use super::pair::TreePair;
use super::word::{word_to_element, FLetter};
use crate::error::{Error, Result};

/// Default cap on the number of distinct elements a growth count may hold.
pub const DEFAULT_BUDGET: usize = 10_000_000;

/// Ball sizes `γ(0), …, γ(n)` by breadth-first search from `identity`.
/// `step(g, i)` must return the product of generator `i` with `g`, for
/// `i < generators` (inverses included by the caller).
pub fn ball_sizes<T, F>(n: usize, identity: T, generators: usize, budget: usize, mut step: F) -> Result<Vec<u64>>
where
    T: Clone + Eq + Hash,
    F: FnMut(&T, usize) -> Result<T>,
{
    let mut seen: HashSet<T> = HashSet::new();
    seen.insert(identity.clone());
    let mut frontier = vec![identity];
    let mut out = vec![1u64];
    for _ in 0..n {
        let mut next = Vec::new();
        for g in &frontier {
            for i in 0..generators {
                let h = step(g, i)?;
                if !seen.contains(&h) {
                    if seen.len() >= budget {
                        return Err(Error::Resource(format!("growth count exceeded {budget} elements")));
                    }
                    seen.insert(h.clone());
                    next.push(h);
                }
            }
        }
        out.push(seen.len() as u64);
        frontier = next;
    }
    Ok(out)
}

/// `γ(n)` in F for the given generating words and their inverses.
pub fn growth_count(n: usize, generators: &[Vec<FLetter>]) -> Result<u64> {
    Ok(*growth_series(n, generators, DEFAULT_BUDGET)?.last().unwrap())
}

pub fn growth_series(n: usize, generators: &[Vec<FLetter>], budget: usize) -> Result<Vec<u64>> {
    let mut gens: Vec<TreePair> = Vec::with_capacity(2 * generators.len());
    for g in generators {
        let p = word_to_element(g);
        gens.push(p.invert());
        gens.push(p);
    }
    ball_sizes(n, TreePair::identity(), gens.len(), budget, |g, i| Ok(gens[i].multiply(g)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std_gens() -> Vec<Vec<FLetter>> {
        vec![vec![FLetter::x0(true)], vec![FLetter::x1(true)]]
    }

    #[test]
    fn small_balls() {
        assert_eq!(growth_count(0, &std_gens()).unwrap(), 1);
        assert_eq!(growth_count(1, &std_gens()).unwrap(), 5);
        // sphere sizes 1, 4, 12, 36, 108, 314 for F over x0, x1
        assert_eq!(growth_series(5, &std_gens(), 1000).unwrap(), vec![1, 5, 17, 53, 161, 475]);
    }

    #[test]
    fn submultiplicative_and_budgeted() {
        let g = growth_series(6, &std_gens(), DEFAULT_BUDGET).unwrap();
        for n in 1..=3 {
            for m in 1..=3 {
                assert!(g[n + m] <= g[n] * g[m]);
            }
        }
        assert!(g.windows(2).all(|w| w[0] <= w[1]));
        assert!(matches!(growth_series(6, &std_gens(), 100), Err(Error::Resource(_))));
    }
}
