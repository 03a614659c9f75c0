use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::element::{
    format_gword, invert_gword, parse_gword, push_stable, GElement, GGen, GLetter, GWord,
};
use super::presentation::{PresentationFile, SourcePresentation};
use crate::autf::{hat_generators, AutFMap};
use crate::error::{Error, Result};
use crate::groupf::{ball_sizes, FLetter, NormalForm, TreePair};

/// Default cap on the knot count of a composed automorphism during
/// collection.
pub const DEFAULT_KNOT_BUDGET: usize = 100_000;

pub const BUNDLE_VERSION: u32 = 1;

/// `φ̂_j = R_j(ĉ, d̂)` for each relator, then `â ∘ ĉ` and `b̂ ∘ d̂`.
pub fn build_action_generators(p: &SourcePresentation) -> Vec<AutFMap> {
    let [a, b, c, d] = hat_generators();
    let letters = [c.clone(), d.clone()];
    let inverses = [c.invert(), d.invert()];
    let mut out: Vec<AutFMap> = p
        .relators()
        .iter()
        .map(|r| {
            r.iter().fold(AutFMap::identity(), |acc, l| {
                let m = if l.inv { &inverses[l.gen as usize] } else { &letters[l.gen as usize] };
                acc.compose(m)
            })
        })
        .collect();
    out.push(a.compose(&c));
    out.push(b.compose(&d));
    out
}

fn f_letter_to_g(l: FLetter) -> GLetter {
    match l.gen {
        0 => GLetter { gen: GGen::Alpha, inv: l.inv },
        _ => GLetter { gen: GGen::Beta, inv: l.inv },
    }
}

/// `[αβ⁻¹, α⁻¹βα]` and `[αβ⁻¹, α⁻²βα²]`, the relators of F.
pub fn f_relators() -> [GWord; 2] {
    [
        parse_gword("a B  A b a  b A  A B a").unwrap(),
        parse_gword("a B  A A b a a  b A  A A B a a").unwrap(),
    ]
}

/// Relators of the extension: the two relators of F, then for every `j`
/// the words `t_j⁻¹ α t_j W_{j,α}⁻¹` and `t_j⁻¹ β t_j W_{j,β}⁻¹`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtensionPresentation {
    /// `(W_{j,α}, W_{j,β})` for `j = 1..=n`, as words in α, β.
    pub images: Vec<(GWord, GWord)>,
}

impl ExtensionPresentation {
    pub fn stable_count(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn relators(&self) -> Vec<GWord> {
        let mut out: Vec<GWord> = f_relators().to_vec();
        for (j, (wa, wb)) in self.images.iter().enumerate() {
            let j = j as u32 + 1;
            for (g, img) in [(GLetter::alpha(true), wa), (GLetter::beta(true), wb)] {
                let mut r = vec![GLetter::t(j, false), g, GLetter::t(j, true)];
                r.extend(invert_gword(img));
                out.push(r);
            }
        }
        out
    }
}

/// Which phase of the word-problem solver decided.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WpPhase {
    /// The stable-letter projection was already nontrivial.
    StableProjection,
    /// The word was collected and its F part tested.
    Collection,
}

/// The extension `G = F ⋊ ⟨t₁, …, t_n⟩` built from a source presentation.
#[derive(Clone, Debug)]
pub struct ExtensionGroup {
    source: SourcePresentation,
    phis: Vec<AutFMap>,
    phi_invs: Vec<AutFMap>,
    presentation: ExtensionPresentation,
    alpha: TreePair,
    beta: TreePair,
    knot_budget: usize,
}

/// Bundle file contents.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize, Debug)]
pub struct GroupBundle {
    pub version: u32,
    pub presentation: PresentationFile,
    pub action_generators: Vec<AutFMap>,
    pub relators: Vec<String>,
}

impl ExtensionGroup {
    pub fn build(source: &SourcePresentation) -> Result<Self> {
        let phis = build_action_generators(source);
        Self::from_parts(source.clone(), phis)
    }

    /// The group for the built-in sample presentation.
    pub fn sample() -> Self {
        Self::build(&SourcePresentation::sample()).expect("sample presentation builds")
    }

    fn from_parts(source: SourcePresentation, phis: Vec<AutFMap>) -> Result<Self> {
        if phis.len() != source.relators().len() + 2 {
            return Err(Error::Presentation(format!(
                "{} action generators for {} relators",
                phis.len(),
                source.relators().len()
            )));
        }
        let phi_invs: Vec<AutFMap> = phis.iter().map(|p| p.invert()).collect();
        let alpha = TreePair::x(0);
        let beta = TreePair::x(1);
        let mut images = Vec::with_capacity(phis.len());
        for p in &phis {
            let word = |f: &TreePair| -> Result<GWord> {
                let img = p.act_on_f(f)?;
                Ok(NormalForm::from_treepair(&img).to_word().into_iter().map(f_letter_to_g).collect())
            };
            images.push((word(&alpha)?, word(&beta)?));
        }
        Ok(ExtensionGroup {
            source,
            phis,
            phi_invs,
            presentation: ExtensionPresentation { images },
            alpha,
            beta,
            knot_budget: DEFAULT_KNOT_BUDGET,
        })
    }

    pub fn with_knot_budget(mut self, budget: usize) -> Self {
        self.knot_budget = budget;
        self
    }

    pub fn source(&self) -> &SourcePresentation {
        &self.source
    }

    pub fn action_generators(&self) -> &[AutFMap] {
        &self.phis
    }

    pub fn presentation(&self) -> &ExtensionPresentation {
        &self.presentation
    }

    pub fn stable_count(&self) -> u32 {
        self.phis.len() as u32
    }

    fn phi(&self, s: i32) -> &AutFMap {
        let j = (s.unsigned_abs() - 1) as usize;
        if s > 0 {
            &self.phis[j]
        } else {
            &self.phi_invs[j]
        }
    }

    fn check_index(&self, s: i32) -> Result<()> {
        if s == 0 || s.unsigned_abs() > self.stable_count() {
            return Err(Error::Parse(format!(
                "stable letter t{} outside t1..t{}",
                s.unsigned_abs(),
                self.stable_count()
            )));
        }
        Ok(())
    }

    /// `Φ_w = φ̂_{w1} ∘ … ∘ φ̂_{wk}`.
    fn phi_of_word(&self, w: &[i32]) -> Result<AutFMap> {
        let mut m = AutFMap::identity();
        for &s in w {
            m = m.compose(self.phi(s));
            self.guard(&m)?;
        }
        Ok(m)
    }

    fn guard(&self, m: &AutFMap) -> Result<()> {
        if m.knot_count() > self.knot_budget {
            return Err(Error::Resource(format!(
                "automorphism with {} knots exceeds the budget of {}",
                m.knot_count(),
                self.knot_budget
            )));
        }
        Ok(())
    }

    /// `θ_w(f) = w f w⁻¹`, computed as `Φ_w ∘ f ∘ Φ_w⁻¹`.
    pub fn theta(&self, w: &[i32], f: &TreePair) -> Result<TreePair> {
        if w.is_empty() || f.is_identity() {
            return Ok(f.clone());
        }
        if w.len() == 1 {
            return self.phi(w[0]).conjugate(f);
        }
        self.phi_of_word(w)?.conjugate(f)
    }

    pub fn multiply(&self, g1: &GElement, g2: &GElement) -> Result<GElement> {
        let f = g1.f.multiply(&self.theta(&g1.w, &g2.f)?);
        let mut w = g1.w.clone();
        for &s in &g2.w {
            push_stable(&mut w, s);
        }
        Ok(GElement { f, w })
    }

    pub fn invert(&self, g: &GElement) -> Result<GElement> {
        let wi: Vec<i32> = g.w.iter().rev().map(|s| -s).collect();
        let f = self.theta(&wi, &g.f.invert())?;
        Ok(GElement { f, w: wi })
    }

    /// The product spelled by `word` over `tuple` (`+i` for the `i`-th
    /// element, 1-based, `-i` for its inverse). `Φ` is carried along the
    /// product instead of being rebuilt for every factor.
    pub fn evaluate(&self, tuple: &[GElement], word: &[i32]) -> Result<GElement> {
        let mut phis: Vec<Option<[AutFMap; 2]>> = vec![None; tuple.len()];
        let mut f = TreePair::identity();
        let mut w: Vec<i32> = Vec::new();
        let mut m = AutFMap::identity();
        for &s in word {
            let i = s.unsigned_abs() as usize;
            if i == 0 || i > tuple.len() {
                return Err(Error::LengthMismatch { expected: tuple.len(), got: i });
            }
            let g = &tuple[i - 1];
            if phis[i - 1].is_none() {
                let p = self.phi_of_word(&g.w)?;
                let pi = p.invert();
                phis[i - 1] = Some([p, pi]);
            }
            let [p, pi] = phis[i - 1].as_ref().unwrap();
            if s > 0 {
                // (f, w)(g, v) = (f θ_w(g), wv)
                if !g.f.is_identity() {
                    f = f.multiply(&m.conjugate(&g.f)?);
                }
                m = m.compose(p);
                for &x in &g.w {
                    push_stable(&mut w, x);
                }
            } else {
                // (f, w)(g, v)⁻¹ = (f θ_{wv⁻¹}(g⁻¹), wv⁻¹)
                m = m.compose(pi);
                for &x in g.w.iter().rev() {
                    push_stable(&mut w, -x);
                }
                if !g.f.is_identity() {
                    f = f.multiply(&m.conjugate(&g.f.invert())?);
                }
            }
            self.guard(&m)?;
        }
        Ok(GElement { f, w })
    }

    /// `letter · g`, the step used by breadth-first growth counts.
    pub fn left_multiply(&self, l: GLetter, g: &GElement) -> Result<GElement> {
        match l.gen {
            GGen::Alpha | GGen::Beta => {
                let base = if l.gen == GGen::Alpha { &self.alpha } else { &self.beta };
                let x = if l.inv { base.invert() } else { base.clone() };
                Ok(GElement { f: x.multiply(&g.f), w: g.w.clone() })
            }
            GGen::T(_) => {
                let s = l.stable().unwrap();
                self.check_index(s)?;
                let f = self.theta(&[s], &g.f)?;
                let mut w = Vec::with_capacity(g.w.len() + 1);
                w.push(s);
                for &x in &g.w {
                    push_stable(&mut w, x);
                }
                Ok(GElement { f, w })
            }
        }
    }

    /// Left-to-right collection into `f · w`, caching `Φ` for every prefix
    /// of the current stable word.
    pub fn word_to_canonical(&self, word: &[GLetter]) -> Result<GElement> {
        let mut f = TreePair::identity();
        let mut w: Vec<i32> = Vec::new();
        let mut prefix: Vec<Prefix> = vec![Prefix::new(AutFMap::identity())];
        for &l in word {
            match l.gen {
                GGen::Alpha | GGen::Beta => {
                    let k = usize::from(l.gen == GGen::Beta);
                    let top = prefix.last_mut().unwrap();
                    if top.images[k].is_none() {
                        let base = if k == 0 { &self.alpha } else { &self.beta };
                        let img = if w.is_empty() { base.clone() } else { top.m.conjugate(base)? };
                        let inv = img.invert();
                        top.images[k] = Some((img, inv));
                    }
                    let (img, inv) = top.images[k].as_ref().unwrap();
                    f = f.multiply(if l.inv { inv } else { img });
                }
                GGen::T(_) => {
                    let s = l.stable().unwrap();
                    self.check_index(s)?;
                    if w.last() == Some(&-s) {
                        w.pop();
                        prefix.pop();
                    } else {
                        let next = Prefix::new(prefix.last().unwrap().m.compose(self.phi(s)));
                        self.guard(&next.m)?;
                        w.push(s);
                        prefix.push(next);
                    }
                }
            }
        }
        Ok(GElement { f, w })
    }

    pub fn is_identity_g(&self, word: &[GLetter]) -> Result<bool> {
        Ok(self.is_identity_g_traced(word)?.0)
    }

    /// The decision together with the phase that made it.
    pub fn is_identity_g_traced(&self, word: &[GLetter]) -> Result<(bool, WpPhase)> {
        let mut proj: Vec<i32> = Vec::new();
        for l in word {
            if let Some(s) = l.stable() {
                self.check_index(s)?;
                push_stable(&mut proj, s);
            }
        }
        if !proj.is_empty() {
            return Ok((false, WpPhase::StableProjection));
        }
        Ok((self.word_to_canonical(word)?.f.is_identity(), WpPhase::Collection))
    }

    /// Generators `α, β, t_1, …, t_n` followed by their inverses.
    pub fn generator_letters(&self) -> Vec<GLetter> {
        let mut v = vec![GLetter::alpha(true), GLetter::beta(true)];
        v.extend((1..=self.stable_count()).map(|j| GLetter::t(j, true)));
        let inv: Vec<GLetter> = v.iter().map(|l| l.inverse()).collect();
        v.extend(inv);
        v
    }

    /// Ball sizes `γ_G(0..=n)` over `α, β, t_1, …, t_n`.
    pub fn growth_series(&self, n: usize, budget: usize) -> Result<Vec<u64>> {
        let letters = self.generator_letters();
        // Right multiplication: g·α = (f·θ_w(α), w), so only θ_w of the
        // F generators is needed, once per stable word w.
        let mut images: HashMap<Vec<i32>, [TreePair; 4]> = HashMap::new();
        ball_sizes(n, GElement::identity(), letters.len(), budget, |g, i| {
            let l = letters[i];
            if let Some(s) = l.stable() {
                let mut w = g.w.clone();
                push_stable(&mut w, s);
                return Ok(GElement { f: g.f.clone(), w });
            }
            if !images.contains_key(&g.w) {
                let a = self.theta(&g.w, &self.alpha)?;
                let b = self.theta(&g.w, &self.beta)?;
                let (ai, bi) = (a.invert(), b.invert());
                images.insert(g.w.clone(), [a, ai, b, bi]);
            }
            let im = &images[&g.w];
            let k = match (l.gen, l.inv) {
                (GGen::Alpha, false) => 0,
                (GGen::Alpha, true) => 1,
                (GGen::Beta, false) => 2,
                _ => 3,
            };
            Ok(GElement { f: g.f.multiply(&im[k]), w: g.w.clone() })
        })
    }

    pub fn to_bundle(&self) -> GroupBundle {
        GroupBundle {
            version: BUNDLE_VERSION,
            presentation: self.source.to_file(),
            action_generators: self.phis.clone(),
            relators: self.presentation.relators().iter().map(|r| format_gword(r)).collect(),
        }
    }

    pub fn from_bundle(b: &GroupBundle) -> Result<Self> {
        if b.version != BUNDLE_VERSION {
            return Err(Error::Presentation(format!("unsupported bundle version {}", b.version)));
        }
        let source = SourcePresentation::from_file(&b.presentation)?;
        let g = Self::from_parts(source, b.action_generators.clone())?;
        let rels: Vec<String> = g.presentation.relators().iter().map(|r| format_gword(r)).collect();
        if rels != b.relators {
            return Err(Error::Presentation("bundle relators do not match its action generators".into()));
        }
        Ok(g)
    }

    pub fn bundle_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_bundle()).expect("bundle serializes")
    }

    pub fn from_bundle_json(s: &str) -> Result<Self> {
        let b: GroupBundle =
            serde_json::from_str(s).map_err(|e| Error::Presentation(format!("bad bundle JSON: {e}")))?;
        Self::from_bundle(&b)
    }

    /// SHA-256 of the compact JSON form of the bundle.
    pub fn digest(&self) -> [u8; 32] {
        let bytes = serde_json::to_vec(&self.to_bundle()).expect("bundle serializes");
        Sha256::digest(&bytes).into()
    }
}

/// `Φ` and `Φ⁻¹` for one prefix of the stable word, with the images of
/// `α` and `β` (and their inverses) filled in on first use.
struct Prefix {
    m: AutFMap,
    images: [Option<(TreePair, TreePair)>; 2],
}

impl Prefix {
    fn new(m: AutFMap) -> Self {
        Prefix { m, images: [None, None] }
    }
}
