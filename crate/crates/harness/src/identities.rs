//! Fixed identities every correct build satisfies, checked end to end.

use plgroup::extension::{f_relators, format_gword, ExtensionGroup};
use plgroup::groupf::{expand_generator, invert_word, is_identity_f, FWord, TreePair};
use plgroup::groupt::{parse_tword, t_is_identity};
use plgroup::plmap::{phi_to_line, LineMap};
use plgroup::Dyadic;

use crate::error::Result;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

fn check(name: impl Into<String>, pass: bool) -> Check {
    Check { name: name.into(), pass }
}

fn t_word_is_identity(s: &str) -> Result<bool> {
    Ok(t_is_identity(&parse_tword(s)?))
}

fn d(n: i64) -> Dyadic {
    Dyadic::from_int(n)
}

/// `t` for `t <= 0`, `t/2` on `[0, 2]`, `t - 1` for `t >= 2`.
pub fn beta_line() -> LineMap {
    LineMap::new(0, 2, vec![(d(-1), d(-1)), (d(0), d(0)), (d(2), d(1)), (d(3), d(2))]).expect("valid line map")
}

/// `x_k⁻¹ x_n x_k = x_{n+1}` for `0 <= k < n <= max_n`, both through the
/// expansion into `x0, x1` and through the tree pairs of `x_n` directly.
pub fn infinite_presentation_holds(max_n: u32) -> bool {
    (1..=max_n).all(|n| {
        (0..n).all(|k| {
            let xk = expand_generator(k);
            let mut w: FWord = invert_word(&xk);
            w.extend(expand_generator(n));
            w.extend(xk);
            w.extend(invert_word(&expand_generator(n + 1)));
            let by_words = is_identity_f(&w);
            let (pk, pn) = (TreePair::x(k), TreePair::x(n));
            let by_pairs = pk.invert().multiply(&pn).multiply(&pk) == TreePair::x(n + 1);
            by_words && by_pairs
        })
    })
}

pub fn run(group: &ExtensionGroup) -> Result<Vec<Check>> {
    let mut out = vec![
        check("T: C^3 = 1", t_word_is_identity("C^3")?),
        check("T: (AC)^2 = 1", t_word_is_identity("A C A C")?),
        check("T: C != 1", !t_word_is_identity("C")?),
        check("T: AC != 1", !t_word_is_identity("A C")?),
    ];
    let x0 = TreePair::x(0).to_plmap();
    let x1 = TreePair::x(1).to_plmap();
    out.push(check("phi: x0 becomes alpha(t) = t - 1", phi_to_line(&x0) == LineMap::translation(-1)));
    out.push(check("phi: x1 becomes the three-piece beta", phi_to_line(&x1) == beta_line()));
    for r in f_relators() {
        let name = format!("F relator {} = 1", format_gword(&r));
        out.push(check(name, group.is_identity_g(&r)?));
    }
    out.push(check("F: x_k^-1 x_n x_k = x_(n+1), 0 <= k < n <= 6", infinite_presentation_holds(6)));
    let rels = group.presentation().relators();
    let mut all = true;
    for r in &rels {
        all &= group.is_identity_g(r)?;
    }
    out.push(check(format!("extension: all {} relators trivial", rels.len()), all));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_identities_pass_on_the_sample_group() {
        let checks = run(&ExtensionGroup::sample()).unwrap();
        assert!(checks.len() >= 10);
        for c in &checks {
            assert!(c.pass, "{}", c.name);
        }
    }
}
