//! Checks on R, L^± and the statements derived from them.

use std::collections::BTreeMap;

use super::{run_check, Bench, CheckReport};
use crate::coorddouble::is_homogeneous;
use crate::lfun::lmatrix::f_extract;
use crate::lfun::{LKind, Lfun};
use crate::linalg::{EchelonSpan, Matrix};
use crate::rootdata::{LieType, RootVec};
use crate::scalar::QField;
use crate::uqg::{Mono, Tensor, UElem, UqgError};

/// R·R^{-1} = id, the quantum Yang-Baxter equation and the intertwiner
/// identity for all generators.
pub fn check_rmatrix<S: QField>(b: &Bench<S>) -> Result<CheckReport, UqgError> {
    run_check("rmatrix", &b.name(), None, || {
        let lf = b.lfun()?;
        let r = &lf.r;
        if !r.matrix.mul(&r.inverse).is_identity() || !r.inverse.mul(&r.matrix).is_identity() {
            return Ok(Err("R·R^-1 ≠ id".into()));
        }
        if !r.check_qybe() {
            return Ok(Err("R12 R13 R23 ≠ R23 R13 R12".into()));
        }
        if let Some(g) = r.check_intertwiner(&lf.u, &lf.rep)? {
            return Ok(Err(format!("R·Δ({}) ≠ Δ^op({})·R", g, g)));
        }
        let mut d = vec![format!("dim V = {}", r.dim), format!("Θ order {}", r.order.name())];
        for (o, why) in &lf.rejected {
            d.push(format!("rejected {}: {}", o.name(), why));
        }
        Ok(Ok(d))
    })
}

/// Coalgebra-map identity, diagonal K-form, agreement with R and R^{-1}
/// under ρ, and the recurrence for every admissible (i, k, j).
pub fn check_lbattery<S: QField>(b: &Bench<S>) -> Result<CheckReport, UqgError> {
    run_check("lfun_battery", &b.name(), None, || {
        let lf = b.lfun()?;
        let u = &lf.u;
        let n = lf.dim();
        for (kind, tag) in [(LKind::Plus, "+"), (LKind::Minus, "-")] {
            for i in 0..n {
                for j in 0..n {
                    let lhs = u.coproduct(lf.entry(kind, i, j))?;
                    let mut rhs = Tensor::zero(2);
                    for k in 0..n {
                        rhs.add_assign(&Tensor::pure(lf.entry(kind, i, k), lf.entry(kind, k, j)));
                    }
                    if lhs != rhs {
                        return Ok(Err(format!("Δ(l^{}(u^{}_{})) ≠ Σ_k l^{} ⊗ l^{}", tag, i + 1, j + 1, tag, tag)));
                    }
                }
            }
        }
        for k in 0..n {
            let w = &lf.rep.weights[k];
            if lf.plus[k][k] != u.k(w) || lf.minus[k][k] != u.k(&w.neg()) {
                return Ok(Err(format!("diagonal entry {} is not K_{{±w_{}}}", k + 1, k + 1)));
            }
        }
        for k in 0..n {
            for l in 0..n {
                let p = lf.rep.rho(&lf.plus[k][l]);
                let m = lf.rep.rho(&lf.minus[k][l]);
                for i in 0..n {
                    for j in 0..n {
                        if p[(i, j)] != *lf.r.entry(i, j, k, l) || m[(i, j)] != *lf.r.inv_entry(k, l, i, j) {
                            return Ok(Err(format!("ρ(l^±(u^{}_{})) disagrees with R", k + 1, l + 1)));
                        }
                    }
                }
            }
        }
        let triples = lf.recurrence_triples();
        for &(i, k, j) in &triples {
            if !lf.check_recurrence(i, k, j)? {
                return Ok(Err(format!("recurrence fails at (i,k,j) = ({},{},{})", i, k, j)));
            }
        }
        Ok(Ok(vec![format!("{} recurrence triples", triples.len())]))
    })
}

/// Positions (i, j) where `ρ(x)_ij` vanishes on the whole algebra generated
/// by `gens` (with 1).
fn forced_zero<S: QField>(gens: &[Matrix<S>], n: usize) -> Vec<Vec<bool>> {
    let flat = |m: &Matrix<S>| -> Vec<S> { (0..n).flat_map(|i| m.row(i).to_vec()).collect() };
    let mut span = EchelonSpan::new(n * n);
    let mut basis = vec![Matrix::<S>::identity(n)];
    span.insert(&flat(&basis[0]));
    let mut k = 0;
    while k < basis.len() {
        let m = basis[k].clone();
        for g in gens {
            let p = g.mul(&m);
            if span.insert(&flat(&p)) {
                basis.push(p);
            }
        }
        k += 1;
    }
    let mut zero = vec![vec![true; n]; n];
    for m in &basis {
        for (i, row) in zero.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                if !m[(i, j)].is_zero() {
                    *z = false;
                }
            }
        }
    }
    zero
}

/// Every L^± entry is `f·K_μ` with f in U(n_±), μ = w_i for `(l^+)^i_j` and
/// −w_j for `(l^−)^i_j`, f of weight w_j − w_i; an entry vanishes exactly
/// when u^i_j is zero on ρ(U(n_∓)).
pub fn check_lstru<S: QField>(b: &Bench<S>) -> Result<CheckReport, UqgError> {
    run_check("lstru", &b.name(), Some("vector representation".into()), || {
        let lf = b.lfun()?;
        let u = &lf.u;
        let n = lf.dim();
        let r = u.rank();
        let ws = &lf.rep.weights;
        let zp = forced_zero(&lf.rep.f, n);
        let zm = forced_zero(&lf.rep.e, n);
        let mut nonzero = 0;
        for (kind, tag, forced) in [(LKind::Plus, "+", &zp), (LKind::Minus, "-", &zm)] {
            for i in 0..n {
                for j in 0..n {
                    let x = lf.entry(kind, i, j);
                    if forced[i][j] {
                        if !x.is_zero() {
                            return Ok(Err(format!("l^{}(u^{}_{}) should vanish", tag, i + 1, j + 1)));
                        }
                        continue;
                    }
                    let Some((f, mu)) = f_extract(u, x, kind).ok().flatten() else {
                        return Ok(Err(format!("l^{}(u^{}_{}) is zero or not of the form f·K", tag, i + 1, j + 1)));
                    };
                    let want_mu = if kind == LKind::Plus { ws[i].clone() } else { ws[j].neg() };
                    let want_deg = u.datum().weight_to_root(&ws[j].sub(&ws[i]));
                    if mu != want_mu || want_deg.is_none() || f.degrees(r) != vec![want_deg.unwrap()] {
                        return Ok(Err(format!("l^{}(u^{}_{}) has Cartan factor K{} or the wrong weight", tag, i + 1, j + 1, mu)));
                    }
                    nonzero += 1;
                }
            }
        }
        Ok(Ok(vec![format!("{} nonzero entries", nonzero)]))
    })
}

/// sp_{2N} with j = i′ and i < N; for i = N the entry is the simple root
/// α_N and β_{ii′−1} does not exist.
fn is_sp_exception<S: QField>(lf: &Lfun<S>, i: usize, j: usize) -> bool {
    let t = lf.u.table();
    t.lie_type == LieType::C && j == t.jprime(i) && i < t.rank
}

/// Solve `v = c₁·a + c₂·b` for the scalars.
fn solve2<S: QField>(v: &[S], a: &[S], b: &[S]) -> Option<(S, S)> {
    let rows: Vec<Vec<S>> = (0..v.len()).map(|k| vec![a[k].clone(), b[k].clone()]).collect();
    let sol = Matrix::from_rows(rows).solve(v)?;
    Some((sol[0].clone(), sol[1].clone()))
}

/// For sp_{2N} and the table entry (i, i′): the scalars x, y with
///   (l^+)^i_{i′} ∼ (l^+)^i_i (E_{β_{ii′}} − x E_{β_{ii′−1}} E_i),
///   (l^−)^{i′}_i ∼ (l^−)^i_i (F_{β_{ii′}} − y F_{β_{ii′−1}} F_i).
/// `Ok(None)` when no such scalars exist.
pub fn sp_exception_params<S: QField>(lf: &Lfun<S>, i: usize) -> Result<Option<(S, S)>, UqgError> {
    let u = &lf.u;
    let ip = u.table().jprime(i);
    let (a, b) = lf.table_matrix_index(i, ip)?;
    let (beta, eb) = lf.table_root_vector(i, ip, false)?;
    let (_, fb) = lf.table_root_vector(i, ip, true)?;
    let (_, e1) = lf.table_root_vector(i, ip - 1, false)?;
    let (_, f1) = lf.table_root_vector(i, ip - 1, true)?;
    let mut out = Vec::new();
    for (kind, x, top, low, simple, minus) in [
        (LKind::Plus, &lf.plus[a][b], &eb, &e1, u.e(i - 1), false),
        (LKind::Minus, &lf.minus[b][a], &fb, &f1, u.f(i - 1), true),
    ] {
        let Some((f, mu)) = f_extract(u, x, kind)? else { return Ok(None) };
        let want_mu = if minus { lf.rep.weights[a].neg() } else { lf.rep.weights[a].clone() };
        if mu != want_mu {
            return Ok(None);
        }
        let v = u.pure_coords(&f, &beta, minus)?;
        let c_top = u.pure_coords(top, &beta, minus)?;
        let c_low = u.pure_coords(&u.mul(low, &simple)?, &beta, minus)?;
        let Some((c1, c2)) = solve2(&v, &c_top, &c_low) else { return Ok(None) };
        if c1.is_zero() {
            return Ok(None);
        }
        out.push(-c2.div(&c1)?);
    }
    Ok(Some((out[0].clone(), out[1].clone())))
}

/// Whether `(l^+)^i_{i′} ∼ (l^+)^i_i (E_i E_{β_{ii′−1}} − q^{−2} E_{β_{ii′−1}} E_i)`.
pub fn sp_commutator_form<S: QField>(lf: &Lfun<S>, i: usize) -> Result<bool, UqgError> {
    let u = &lf.u;
    let ip = u.table().jprime(i);
    let (a, b) = lf.table_matrix_index(i, ip)?;
    let (_, e1) = lf.table_root_vector(i, ip - 1, false)?;
    let ei = u.e(i - 1);
    let c = u.mul(&ei, &e1)?.sub(&u.mul(&e1, &ei)?.scale(&u.q(-2)));
    Ok(nonzero_ratio(&lf.plus[a][b], &u.left_mul_k(&lf.rep.weights[a], &c)))
}

fn nonzero_ratio<S: QField>(x: &UElem<S>, y: &UElem<S>) -> bool {
    x.ratio_to(y).is_some_and(|c| !c.is_zero())
}

fn nonzero_tensor_ratio<S: QField>(x: &Tensor<S>, y: &Tensor<S>) -> bool {
    x.ratio_to(y).is_some_and(|c| !c.is_zero())
}

/// `(l^+)^i_j ∼ (l^+)^i_i E_{β_ij}` and `(l^−)^j_i ∼ (l^−)^i_i F_{β_ij}` for
/// every table entry, with the sp_{2N} entries j = i′ solved for x and y.
pub fn check_rootvect<S: QField>(b: &Bench<S>) -> Result<CheckReport, UqgError> {
    run_check("rootvect", &b.name(), None, || {
        let lf = b.lfun()?;
        let u = &lf.u;
        let mut details = Vec::new();
        for te in &u.table().roots {
            let (i, j) = (te.i, te.j);
            if is_sp_exception(&lf, i, j) {
                match sp_exception_params(&lf, i)? {
                    Some((x, y)) => details.push(format!("({},{}): x = {}, y = {}", i, j, x, y)),
                    None => {
                        let note = if sp_commutator_form(&lf, i)? {
                            "; (l^+) is ∼ K·(E_i E' − q^-2 E' E_i) with E' = E_β(i,i′−1), and E_β(i,i′) is not in the span of E_i E', E' E_i"
                        } else {
                            ""
                        };
                        return Ok(Err(format!("({},{}): no x, y solve the exceptional form{}", i, j, note)));
                    }
                }
                continue;
            }
            let (a, bb) = lf.table_matrix_index(i, j)?;
            let wa = &lf.rep.weights[a];
            let (_, e) = lf.table_root_vector(i, j, false)?;
            let (_, f) = lf.table_root_vector(i, j, true)?;
            if !nonzero_ratio(&lf.plus[a][bb], &u.left_mul_k(wa, &e)) {
                return Ok(Err(format!("(l^+) at table entry ({},{}) is not ∼ K·E_β", i, j)));
            }
            if !nonzero_ratio(&lf.minus[bb][a], &u.left_mul_k(&wa.neg(), &f)) {
                return Ok(Err(format!("(l^-) at table entry ({},{}) is not ∼ K·F_β", i, j)));
            }
        }
        details.insert(0, format!("{} table entries", u.table().len()));
        Ok(Ok(details))
    })
}

/// Δ(E_{β_ij}) ∼ ((l^−)^i_i ⊗ (l^−)^i_i) Σ_k (l^+)^i_k ⊗ (l^+)^k_j and the F
/// mirror; for sp_{2N}, j = i′ the left side is Δ(E_{β_{ii′}} − x E_{β_{ii′−1}}E_i).
pub fn check_copr<S: QField>(b: &Bench<S>) -> Result<CheckReport, UqgError> {
    run_check("copr", &b.name(), None, || {
        let lf = b.lfun()?;
        let u = &lf.u;
        let n = lf.dim();
        for te in &u.table().roots {
            let (i, j) = (te.i, te.j);
            let (a, bb) = lf.table_matrix_index(i, j)?;
            let wa = &lf.rep.weights[a];
            let (_, mut e) = lf.table_root_vector(i, j, false)?;
            let (_, mut f) = lf.table_root_vector(i, j, true)?;
            if is_sp_exception(&lf, i, j) {
                let Some((x, y)) = sp_exception_params(&lf, i)? else {
                    return Ok(Err(format!("({},{}): exceptional scalars not found", i, j)));
                };
                let (_, e1) = lf.table_root_vector(i, j - 1, false)?;
                let (_, f1) = lf.table_root_vector(i, j - 1, true)?;
                e = e.sub(&u.mul(&e1, &u.e(i - 1))?.scale(&x));
                f = f.sub(&u.mul(&f1, &u.f(i - 1))?.scale(&y));
            }
            let mut sp = Tensor::zero(2);
            let mut sm = Tensor::zero(2);
            for k in 0..n {
                sp.add_assign(&Tensor::pure(&lf.plus[a][k], &lf.plus[k][bb]));
                sm.add_assign(&Tensor::pure(&lf.minus[bb][k], &lf.minus[k][a]));
            }
            let rp = u.tensor_mul(&u.kk(&wa.neg(), &wa.neg()), &sp)?;
            let rm = u.tensor_mul(&u.kk(wa, wa), &sm)?;
            if !nonzero_tensor_ratio(&u.coproduct(&e)?, &rp) {
                return Ok(Err(format!("Δ(E) at table entry ({},{})", i, j)));
            }
            if !nonzero_tensor_ratio(&u.coproduct(&f)?, &rm) {
                return Ok(Err(format!("Δ(F) at table entry ({},{})", i, j)));
            }
        }
        Ok(Ok(vec![format!("{} table entries, E and F", u.table().len())]))
    })
}

/// `Σ_n f^+((l^+)^1_n) ⊗ f^−((l^−)^n_1)` for the lowest weight index 1,
/// keeping only n = 1 when `control`.
pub fn nogo_element<S: QField>(lf: &Lfun<S>, control: bool) -> Result<Tensor<S>, UqgError> {
    let u = &lf.u;
    let mut t = Tensor::zero(2);
    let top = if control { 1 } else { lf.dim() };
    for k in 0..top {
        let fp = f_extract(u, &lf.plus[0][k], LKind::Plus)?;
        let fm = f_extract(u, &lf.minus[k][0], LKind::Minus)?;
        if let (Some((p, _)), Some((m, _))) = (fp, fm) {
            t.add_assign(&Tensor::pure(&p, &m));
        }
    }
    Ok(t)
}

fn format_bidegrees(d: &[Vec<RootVec>]) -> String {
    d.iter().map(|v| format!("({}, {})", v[0], v[1])).collect::<Vec<_>>().join(", ")
}

/// The element built from the lowest-weight row and column of L^± is
/// Q×Q-inhomogeneous.
pub fn check_nogo<S: QField>(b: &Bench<S>) -> Result<CheckReport, UqgError> {
    run_check("nogo", &b.name(), Some("vector representation".into()), || {
        let lf = b.lfun()?;
        let t = nogo_element(&lf, false)?;
        let (hom, deg) = is_homogeneous(&t, lf.u.rank());
        if hom {
            return Ok(Err(format!("element is homogeneous of bidegree {}", format_bidegrees(&deg))));
        }
        Ok(Ok(vec![format!("bidegrees {}", format_bidegrees(&deg))]))
    })
}

/// Control: the diagonal term alone is the homogeneous element 1⊗1.
pub fn check_nogo_control<S: QField>(b: &Bench<S>) -> Result<CheckReport, UqgError> {
    run_check("nogo_control", &b.name(), None, || {
        let lf = b.lfun()?;
        let u = &lf.u;
        let t = nogo_element(&lf, true)?;
        let (hom, deg) = is_homogeneous(&t, u.rank());
        if !hom || t != Tensor::pure(&u.one(), &u.one()) {
            return Ok(Err(format!("control element has bidegrees {}", format_bidegrees(&deg))));
        }
        Ok(Ok(vec!["1⊗1".into()]))
    })
}

/// E_i, F_i, K_{±w_k} and 1 lie in the span of L^± entries and their
/// pairwise products.
pub fn check_isom<S: QField>(b: &Bench<S>) -> Result<CheckReport, UqgError> {
    run_check("isom", &b.name(), Some("products of at most two entries".into()), || {
        let lf = b.lfun()?;
        let u = &lf.u;
        let n = lf.dim();
        let r = u.rank();
        let mut entries: Vec<(RootVec, UElem<S>)> = Vec::new();
        for kind in [LKind::Plus, LKind::Minus] {
            for i in 0..n {
                for j in 0..n {
                    let x = lf.entry(kind, i, j);
                    if x.is_zero() {
                        continue;
                    }
                    let d = x.degrees(r);
                    if d.len() != 1 {
                        return Ok(Err(format!("entry ({},{}) is inhomogeneous", i + 1, j + 1)));
                    }
                    entries.push((d[0].clone(), x.clone()));
                }
            }
        }
        let mut targets: Vec<(String, UElem<S>)> = vec![("1".into(), u.one())];
        for i in 0..r {
            targets.push((format!("E{}", i + 1), u.e(i)));
            targets.push((format!("F{}", i + 1), u.f(i)));
        }
        for (k, w) in lf.rep.weights.iter().enumerate() {
            targets.push((format!("K_w{}", k + 1), u.k(w)));
            targets.push((format!("K_-w{}", k + 1), u.k(&w.neg())));
        }
        for (name, t) in &targets {
            let deg = t.degrees(r)[0].clone();
            let mut cands: Vec<UElem<S>> = Vec::new();
            for (d, x) in &entries {
                if *d == deg {
                    cands.push(x.clone());
                }
            }
            for (d1, x) in &entries {
                for (d2, y) in &entries {
                    if d1.add(d2) == deg {
                        cands.push(u.mul(x, y)?);
                    }
                }
            }
            let mut index: BTreeMap<Mono, usize> = BTreeMap::new();
            for c in cands.iter().chain(std::iter::once(t)) {
                for m in c.terms.keys() {
                    let k = index.len();
                    index.entry(m.clone()).or_insert(k);
                }
            }
            let coords = |x: &UElem<S>| -> Vec<S> {
                let mut v = vec![S::zero(); index.len()];
                for (m, c) in &x.terms {
                    v[index[m]] = c.clone();
                }
                v
            };
            let mut span = EchelonSpan::new(index.len());
            for c in &cands {
                span.insert(&coords(c));
            }
            if !span.contains(&coords(t)) {
                return Ok(Err(format!("{} is not generated", name)));
            }
        }
        Ok(Ok(vec![format!("{} targets, {} entries", targets.len(), entries.len())]))
    })
}
