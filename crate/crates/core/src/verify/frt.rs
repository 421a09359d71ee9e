//! Checks on the coordinate-algebra side: the double and the kernel of ζ′.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{run_check, Bench, CheckReport};
use crate::coorddouble::{
    double_product, iota_theta, relation_ideal_a, word_counit, CoordElement, CoordWord, DoubleElement,
    RForm,
};
use crate::lfun::Lfun;
use crate::linalg::{rational_mod_p, ModSpan, DEFAULT_PRIME};
use crate::rootdata::{make_root_datum, LieType, Weight};
use crate::scalar::{EvalQ, QField, RatFunc};
use num_traits::One;
use crate::uqg::pbw::{PbwElement, PbwMonomial};
use crate::uqg::{Tensor, UElem, Uqg, UqgError};

fn random_word(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> CoordWord {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| (rng.gen_range(0..n) as u8, rng.gen_range(0..n) as u8)).collect()
}

/// Associativity and unit laws of the ⋈ product on generator triples,
/// hat_r in both forms on `quads` random quadruples, and r̄ as the
/// convolution inverse of r.
pub fn check_double<S: QField>(b: &Bench<S>, quads: usize, seed: u64) -> Result<CheckReport, UqgError> {
    run_check("double", &b.name(), None, || {
        let lf = b.lfun()?;
        let rf = RForm::new(&lf.r);
        let n = lf.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gens = Vec::new();
        for i in 0..n as u8 {
            for j in 0..n as u8 {
                gens.push(DoubleElement::pure(vec![(i, j)], vec![]));
                gens.push(DoubleElement::pure(vec![], vec![(i, j)]));
            }
        }
        let one = DoubleElement::one();
        for g in &gens {
            if double_product(&rf, &one, g) != *g || double_product(&rf, g, &one) != *g {
                return Ok(Err(format!("unit law fails on {:?}", g)));
            }
        }
        let total = gens.len().pow(3);
        let exhaustive = total <= 6000;
        let triples: Vec<(usize, usize, usize)> = if exhaustive {
            let m = gens.len();
            (0..total).map(|k| (k / (m * m), (k / m) % m, k % m)).collect()
        } else {
            (0..300).map(|_| (rng.gen_range(0..gens.len()), rng.gen_range(0..gens.len()), rng.gen_range(0..gens.len()))).collect()
        };
        // products of pairs are reused across triples
        let mut pair: HashMap<(usize, usize), DoubleElement<S>> = HashMap::new();
        for &(x, y, z) in &triples {
            let xy = pair.entry((x, y)).or_insert_with(|| double_product(&rf, &gens[x], &gens[y])).clone();
            let yz = pair.entry((y, z)).or_insert_with(|| double_product(&rf, &gens[y], &gens[z])).clone();
            if double_product(&rf, &xy, &gens[z]) != double_product(&rf, &gens[x], &yz) {
                return Ok(Err(format!("associativity fails on {:?}, {:?}, {:?}", gens[x], gens[y], gens[z])));
            }
        }
        let max_len = if n <= 2 { 2 } else { 1 };
        for _ in 0..quads {
            let w: Vec<CoordWord> = (0..4).map(|_| random_word(&mut rng, n, max_len)).collect();
            if rf.hat_r(&w[0], &w[1], &w[2], &w[3]) != rf.hat_r_four(&w[0], &w[1], &w[2], &w[3]) {
                return Ok(Err(format!("hat_r forms disagree on {:?}", w)));
            }
        }
        for _ in 0..quads {
            let a = random_word(&mut rng, n, 2);
            let c = random_word(&mut rng, n, 2);
            let e = if word_counit(&a) && word_counit(&c) { S::one() } else { S::zero() };
            let (x, y) = rf.convolutions(&a, &c);
            if x != e || y != e {
                return Ok(Err(format!("r̄ is not the convolution inverse of r on {:?} ⊗ {:?}", a, c)));
            }
        }
        Ok(Ok(vec![format!(
            "{} generator triples ({}), {} quadruples",
            triples.len(),
            if exhaustive { "all" } else { "sampled" },
            quads
        )]))
    })
}

/// Truncation used for the kernel of ζ′: type A_n, words of length ≤ d,
/// PBW monomials of total degree ≤ dp with Cartan part in [−1, 1]^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainInstance {
    pub n: usize,
    pub d: usize,
    pub dp: u32,
}

fn cartan_box(n: usize) -> Vec<Weight> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v: Vec<i64>| (-1..=1).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out.into_iter().map(|v| Weight::from_slice(&v)).collect()
}

fn exps_up_to(nroots: usize, dp: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..nroots {
        let mut next = Vec::new();
        for v in &out {
            let used: u32 = v.iter().sum();
            for c in 0..=dp - used {
                let mut w = v.clone();
                w.push(c);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Kernel of ζ′ on span{words ≤ d} ⊗ U_{≤dp} equals (relation ideal) ⊗ U_{≤dp}.
///
/// The ideal is shown to lie in the kernel symbolically; the rank of ζ′ on
/// a complement, computed at q² = 2 and reduced modulo a prime, bounds the
/// generic rank from below and so closes the equality.
pub fn check_main(inst: MainInstance) -> Result<CheckReport, UqgError> {
    let MainInstance { n, d, dp } = inst;
    let label = format!("A{}", n);
    let instance = Some(format!("words of length ≤ {}, PBW degree ≤ {}, Cartan part in [-1,1]^{}", d, dp, n));
    run_check("main", &label, instance, || {
        if n == 0 || n > 2 {
            return Err(UqgError::Invalid(format!("the kernel check is for A1 and A2, got A{}", n)));
        }
        let datum = make_root_datum(LieType::A, n).map_err(|e| UqgError::Invalid(e.to_string()))?;
        let u: Arc<Uqg<RatFunc>> = Arc::new(Uqg::new(&datum));
        let lf = Lfun::new(u)?;
        let rf = RForm::new(&lf.r);
        let ideal = relation_ideal_a(&rf, &lf.rep, d)?;
        for rel in &ideal.basis {
            if !iota_theta(&lf, rel)?.is_zero() {
                return Ok(Err(format!("ι∘θ° does not vanish on the relation {}", rel)));
            }
        }
        let pivots = ideal.span.pivots();
        let complement: Vec<CoordWord> =
            ideal.words.iter().enumerate().filter(|(k, _)| pivots.binary_search(k).is_err()).map(|(_, w)| w.clone()).collect();

        let ue: Arc<Uqg<EvalQ>> = Arc::new(Uqg::new(&datum));
        let lfe = Lfun::new(ue.clone())?;
        let nroots = ue.root_vectors()?.roots.len();
        let mut ubasis: Vec<Tensor<EvalQ>> = Vec::new();
        for kappa in cartan_box(n) {
            for fexp in exps_up_to(nroots, dp) {
                let used: u32 = fexp.iter().sum();
                for eexp in exps_up_to(nroots, dp - used) {
                    let mut p = PbwElement { terms: BTreeMap::new() };
                    p.terms.insert(PbwMonomial { kappa: kappa.clone(), fexp: fexp.clone(), eexp }, EvalQ::one());
                    let x: UElem<EvalQ> = ue.from_pbw(&p)?;
                    ubasis.push(ue.coproduct(&x)?);
                }
            }
        }
        let p = DEFAULT_PRIME;
        let mut span = ModSpan::new(p);
        let mut cols: HashMap<crate::uqg::hopf::TensorKey, usize> = HashMap::new();
        for w in &complement {
            let th = iota_theta(&lfe, &CoordElement::word(w.clone()))?;
            for df in &ubasis {
                let z = ue.tensor_mul(&th, df)?;
                let mut row = Vec::with_capacity(z.terms.len());
                for (k, c) in &z.terms {
                    let next = cols.len();
                    let col = *cols.entry(k.clone()).or_insert(next);
                    let v = c
                        .specialize()
                        .and_then(|r| rational_mod_p(&r, p))
                        .ok_or_else(|| UqgError::Integrity("coefficient has no image modulo the prime".into()))?;
                    row.push((col, v));
                }
                span.insert(row);
            }
        }
        let expected = complement.len() * ubasis.len();
        let rank = span.rank();
        let details = vec![
            format!("{} words, ideal dimension {}, quotient dimension {}", ideal.words.len(), ideal.dim(), complement.len()),
            format!("{} PBW basis elements", ubasis.len()),
            format!("rank of ζ′ on the complement: {} of {}", rank, expected),
        ];
        if rank != expected {
            return Ok(Err(format!("kernel exceeds the relation ideal by {} dimensions", expected - rank)));
        }
        Ok(Ok(details))
    })
}
