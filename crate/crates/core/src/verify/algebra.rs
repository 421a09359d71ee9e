//! Checks on U_q(g) alone: graded dimensions, Hopf axioms, braid relations,
//! straightening support and the triangular coproduct.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{run_check, Bench, CheckReport};
use crate::rootdata::{kostant_partitions, nonneg_of_height, RootVec, Weight};
use crate::scalar::QField;
use crate::uqg::graded::word_weight;
use crate::uqg::{Mono, Tensor, UElem, Uqg, UqgError};

fn counit_leg<S: QField>(u: &Uqg<S>, t: &Tensor<S>, leg: usize) -> UElem<S> {
    let mut out = UElem::zero();
    for (k, c) in &t.terms {
        let e = u.counit(&UElem::mono(k[leg].clone(), S::one()));
        if !e.is_zero() {
            out.add_term(k[1 - leg].clone(), c.mul_ref(&e));
        }
    }
    out
}

/// Hopf axioms on one element; the name of the first failed identity.
fn hopf_identities<S: QField>(u: &Uqg<S>, x: &UElem<S>) -> Result<Option<&'static str>, UqgError> {
    let d = u.coproduct(x)?;
    if u.coproduct_leg(&d, 0)? != u.coproduct_leg(&d, 1)? {
        return Ok(Some("coassociativity"));
    }
    if counit_leg(u, &d, 0) != *x || counit_leg(u, &d, 1) != *x {
        return Ok(Some("counit"));
    }
    let eps = u.scalar(u.counit(x));
    let left = u.multiply_legs(&u.map_leg(&d, 0, |m| u.antipode_mono(m))?)?;
    let right = u.multiply_legs(&u.map_leg(&d, 1, |m| u.antipode_mono(m))?)?;
    if left != eps || right != eps {
        return Ok(Some("antipode"));
    }
    Ok(None)
}

fn generator_pool<S: QField>(u: &Uqg<S>) -> Vec<(String, UElem<S>)> {
    let n = u.rank();
    let mut g = Vec::new();
    for i in 0..n {
        let w = Weight::fundamental(n, i);
        g.push((format!("E{}", i + 1), u.e(i)));
        g.push((format!("F{}", i + 1), u.f(i)));
        g.push((format!("K{}", w), u.k(&w)));
        g.push((format!("K{}", w.neg()), u.k(&w.neg())));
    }
    g
}

/// dim U^λ(n_+) against the Kostant partition count, and PBW monomials
/// certified as a basis, for all λ of height ≤ `height`.
pub fn check_pbw_dims<S: QField>(b: &Bench<S>, height: i64) -> Result<CheckReport, UqgError> {
    run_check("pbw_dims", &b.name(), Some(format!("height ≤ {}", height)), || {
        let u = &b.u;
        let roots = u.root_vectors()?.roots.clone();
        let mut count = 0;
        for h in 1..=height {
            for mu in nonneg_of_height(u.rank(), h) {
                let dim = u.graded().dim(&mu)?;
                let kp = kostant_partitions(&roots, &mu) as usize;
                if dim != kp {
                    return Ok(Err(format!("λ = {}: graded dimension {} but Kostant count {}", mu, dim, kp)));
                }
                if dim > 0 {
                    u.pbw_change(&mu, false)?;
                    u.pbw_change(&mu, true)?;
                }
                count += 1;
            }
        }
        Ok(Ok(vec![format!("{} weights checked", count)]))
    })
}

/// Coassociativity, counit and antipode laws on the generators and on
/// `samples` random products of at most three generators; Δ is also checked
/// to be multiplicative on those products.
pub fn check_hopf<S: QField>(b: &Bench<S>, samples: usize, seed: u64) -> Result<CheckReport, UqgError> {
    run_check("hopf_axioms", &b.name(), None, || {
        let u = &b.u;
        let pool = generator_pool(u);
        for (name, g) in &pool {
            if let Some(id) = hopf_identities(u, g)? {
                return Ok(Err(format!("{} fails on {}", id, name)));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let len = rng.gen_range(1..=3);
            let picks: Vec<usize> = (0..len).map(|_| rng.gen_range(0..pool.len())).collect();
            let names: Vec<&str> = picks.iter().map(|&k| pool[k].0.as_str()).collect();
            let mut x = u.one();
            let mut dx = Tensor::pure(&u.one(), &u.one());
            for &k in &picks {
                x = u.mul(&x, &pool[k].1)?;
                dx = u.tensor_mul(&dx, &u.coproduct(&pool[k].1)?)?;
            }
            if u.coproduct(&x)? != dx {
                return Ok(Err(format!("Δ is not multiplicative on {}", names.join("*"))));
            }
            if let Some(id) = hopf_identities(u, &x)? {
                return Ok(Err(format!("{} fails on {}", id, names.join("*"))));
            }
        }
        Ok(Ok(vec![format!("{} generators, {} random products", pool.len(), samples)]))
    })
}

/// Braid relations of the T_i on all generators, T_i∘T_i^{-1} = id, and
/// root vectors in their predicted weight spaces.
pub fn check_braid<S: QField>(b: &Bench<S>) -> Result<CheckReport, UqgError> {
    run_check("braid", &b.name(), None, || {
        let u = &b.u;
        let n = u.rank();
        let cartan = &u.datum().cartan;
        let gens = u.generators();
        for i in 0..n {
            for g in &gens {
                if u.braid_t_inv(i, &u.braid_t(i, g)?)? != *g || u.braid_t(i, &u.braid_t_inv(i, g)?)? != *g {
                    return Ok(Err(format!("T_{} is not inverted by T_{}^-1 on {}", i + 1, i + 1, g)));
                }
            }
            for j in i + 1..n {
                let m = match cartan[i][j] * cartan[j][i] {
                    0 => 2,
                    1 => 3,
                    2 => 4,
                    _ => 6,
                };
                let w1: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { i } else { j }).collect();
                let w2: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { j } else { i }).collect();
                for g in &gens {
                    if u.braid_word(&w1, g)? != u.braid_word(&w2, g)? {
                        return Ok(Err(format!("braid relation of length {} for T_{}, T_{} on {}", m, i + 1, j + 1, g)));
                    }
                }
            }
        }
        let rv = u.root_vectors()?;
        let table_roots: Vec<RootVec> = u.table().ordered().map(|r| r.root.clone()).collect();
        for (k, beta) in rv.roots.iter().enumerate() {
            if *beta != table_roots[k] {
                return Ok(Err(format!("root vector {} has weight {} but the order predicts {}", k + 1, beta, table_roots[k])));
            }
            for (x, sign, tag) in [(&rv.e[k], 1, "E"), (&rv.f[k], -1, "F")] {
                if x.is_zero() || x.degrees(n) != vec![beta.scale(sign)] {
                    return Ok(Err(format!("{}_β{} is not in the weight space {}", tag, k + 1, beta.scale(sign))));
                }
            }
        }
        Ok(Ok(vec![format!("{} generators, {} root vectors", gens.len(), rv.roots.len())]))
    })
}

/// For every i<j (optionally with ht(β_i+β_j) bounded), the straightening
/// of `E_{β_i}E_{β_j} − q^{⟨β_i,β_j⟩}E_{β_j}E_{β_i}` and its F version uses
/// only PBW monomials in strictly intermediate roots of weight β_i+β_j.
pub fn check_soibel<S: QField>(b: &Bench<S>, max_height: Option<i64>) -> Result<CheckReport, UqgError> {
    let inst = max_height.map(|h| format!("pairs with ht(β_i+β_j) ≤ {}", h));
    run_check("soibel", &b.name(), inst, || {
        let u = &b.u;
        let rv = u.root_vectors()?;
        let nr = rv.roots.len();
        let mut pairs = 0;
        for i in 0..nr {
            for j in i + 1..nr {
                let mu = rv.roots[i].add(&rv.roots[j]);
                if max_height.is_some_and(|h| mu.height() > h) {
                    continue;
                }
                pairs += 1;
                for minus in [false, true] {
                    for (ex, c) in u.ls_constants(i, j, minus)? {
                        if c.is_zero() {
                            continue;
                        }
                        let mut wt = RootVec::zero(u.rank());
                        for (k, &x) in ex.iter().enumerate() {
                            wt = wt.add(&rv.roots[k].scale(x as i64));
                        }
                        let outside = ex.iter().enumerate().any(|(k, &x)| x > 0 && (k <= i || k >= j));
                        if outside || wt != mu {
                            return Ok(Err(format!(
                                "({}, {}) {}: monomial {:?} with coefficient {}",
                                i + 1,
                                j + 1,
                                if minus { "F" } else { "E" },
                                ex,
                                c
                            )));
                        }
                    }
                }
            }
        }
        Ok(Ok(vec![format!("{} pairs, E and F", pairs)]))
    })
}

fn pure_e(m: &Mono) -> bool {
    m.k.is_zero() && m.f.is_empty()
}

fn pure_f(m: &Mono) -> bool {
    m.k.is_zero() && m.e.is_empty()
}

/// Triangularity of Δ on U^μ(n_±): for x ∈ U^μ(n_+) every term lies in
/// U^ν(n_+) ⊗ K_ν U^{μ−ν}(n_+), with x⊗K_μ and 1⊗x as the extreme parts;
/// mirrored for n_−.
pub fn check_jantz<S: QField>(b: &Bench<S>, height: i64) -> Result<CheckReport, UqgError> {
    run_check("jantz", &b.name(), Some(format!("height ≤ {}", height)), || {
        let u = &b.u;
        let n = u.rank();
        let datum = u.datum();
        let mut count = 0;
        for h in 1..=height {
            for mu in nonneg_of_height(n, h) {
                for w in u.graded().basis_words(&mu)? {
                    count += 1;
                    let kmu = datum.root_to_weight(&mu);
                    let x = u.e_word(&w)?;
                    let d = u.coproduct(&x)?;
                    let mut top = Tensor::zero(2);
                    let mut bottom = Tensor::zero(2);
                    for (k, c) in &d.terms {
                        let nu = word_weight(n, &k[0].e);
                        let rest = word_weight(n, &k[1].e);
                        let ok = pure_e(&k[0])
                            && k[1].f.is_empty()
                            && k[1].k == datum.root_to_weight(&nu)
                            && nu.add(&rest) == mu;
                        if !ok {
                            return Ok(Err(format!("Δ(E{:?}) has the term {} ⊗ {}", w, k[0], k[1])));
                        }
                        if nu == mu {
                            top.add_term(k.clone(), c.clone());
                        }
                        if nu.is_zero() {
                            bottom.add_term(k.clone(), c.clone());
                        }
                    }
                    if top != Tensor::pure(&x, &u.k(&kmu)) || bottom != Tensor::pure(&u.one(), &x) {
                        return Ok(Err(format!("extreme parts of Δ(E{:?})", w)));
                    }
                    let y = u.f_word(&w)?;
                    let d = u.coproduct(&y)?;
                    let mut top = Tensor::zero(2);
                    let mut bottom = Tensor::zero(2);
                    for (k, c) in &d.terms {
                        let nu = word_weight(n, &k[1].f);
                        let rest = word_weight(n, &k[0].f);
                        let ok = pure_f(&k[1])
                            && k[0].e.is_empty()
                            && k[0].k == datum.root_to_weight(&nu).neg()
                            && nu.add(&rest) == mu;
                        if !ok {
                            return Ok(Err(format!("Δ(F{:?}) has the term {} ⊗ {}", w, k[0], k[1])));
                        }
                        if nu.is_zero() {
                            top.add_term(k.clone(), c.clone());
                        }
                        if nu == mu {
                            bottom.add_term(k.clone(), c.clone());
                        }
                    }
                    if top != Tensor::pure(&y, &u.one()) || bottom != Tensor::pure(&u.k(&kmu.neg()), &y) {
                        return Ok(Err(format!("extreme parts of Δ(F{:?})", w)));
                    }
                }
            }
        }
        Ok(Ok(vec![format!("{} basis elements of each sign", count)]))
    })
}
