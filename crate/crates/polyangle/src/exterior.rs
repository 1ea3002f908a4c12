//! Dense exterior algebra over R^n.
//!
//! Multivectors hold one real coefficient per sorted k-subset of coordinate
//! indices. Bigraded forms are constant-coefficient (a+b)-forms on R^n + R^n,
//! stored as a dense block of coefficients over pairs (base a-subset, fiber
//! b-subset). Contraction acts on the base slot, filling the leading argument
//! positions; the sign convention is fixed by the composition identity
//! `contract(u, contract(v, w)) == contract(v ^ u, w)`.

use serde::{Deserialize, Serialize};

use crate::comb::{binomial, k_subsets, merge_sign, merge_subsets, subset_mask, subset_rank};
use crate::error::{Error, Result};

/// Dense grade-k element of the exterior algebra of R^n.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiVector {
    n: usize,
    k: usize,
    coeffs: Vec<f64>,
}

impl MultiVector {
    pub fn zero(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::GradeOverflow(format!("grade {k} exceeds dimension {n}")));
        }
        Ok(MultiVector { n, k, coeffs: vec![0.0; binomial(n, k)] })
    }

    /// Scalar (grade 0) element.
    pub fn scalar(n: usize, value: f64) -> Self {
        MultiVector { n, k: 0, coeffs: vec![value] }
    }

    /// Basis vector e_i (0-based index).
    pub fn basis_vector(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::invalid(format!("basis index {i} out of range for R^{n}")));
        }
        let mut mv = MultiVector::zero(n, 1)?;
        mv.coeffs[i] = 1.0;
        Ok(mv)
    }

    /// Grade-1 element with the given coordinates.
    pub fn from_vector(v: &[f64]) -> Self {
        MultiVector { n: v.len(), k: 1, coeffs: v.to_vec() }
    }

    /// Basis multivector e_{i1} ^ ... ^ e_{ik} for a sorted subset (0-based).
    pub fn basis(n: usize, subset: &[usize]) -> Result<Self> {
        let mut mv = MultiVector::zero(n, subset.len())?;
        for w in subset.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::invalid("basis subset must be strictly increasing"));
            }
        }
        if let Some(&last) = subset.last() {
            if last >= n {
                return Err(Error::invalid("basis subset index out of range"));
            }
        }
        let r = subset_rank(n, subset);
        mv.coeffs[r] = 1.0;
        Ok(mv)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.k
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn coeff(&self, subset: &[usize]) -> f64 {
        self.coeffs[subset_rank(self.n, subset)]
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= s;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::dim("multivector addition requires equal n and grade"));
        }
        let mut out = self.clone();
        for (c, o) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *c += o;
        }
        Ok(out)
    }

    /// Exterior product. Bilinear, associative, graded-anticommutative.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::dim(format!(
                "wedge of elements over R^{} and R^{}",
                self.n, other.n
            )));
        }
        if self.k + other.k > self.n {
            return Err(Error::GradeOverflow(format!(
                "wedge grade {} + {} exceeds dimension {}",
                self.k, other.k, self.n
            )));
        }
        let n = self.n;
        let mut out = MultiVector::zero(n, self.k + other.k)?;
        let subs_a = k_subsets(n, self.k);
        let subs_b = k_subsets(n, other.k);
        for (ia, sa) in subs_a.iter().enumerate() {
            let ca = self.coeffs[ia];
            if ca == 0.0 {
                continue;
            }
            let ma = subset_mask(sa);
            for (ib, sb) in subs_b.iter().enumerate() {
                let cb = other.coeffs[ib];
                if cb == 0.0 {
                    continue;
                }
                let mb = subset_mask(sb);
                if ma & mb != 0 {
                    continue;
                }
                let sign = merge_sign(ma, mb);
                let union = merge_subsets(sa, sb);
                out.coeffs[subset_rank(n, &union)] += sign * ca * cb;
            }
        }
        Ok(out)
    }
}

/// Ordered list of k vectors in R^n.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    n: usize,
    vectors: Vec<Vec<f64>>,
}

impl Frame {
    pub fn new(n: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != n) {
            return Err(Error::dim("frame vectors must all have length n"));
        }
        Ok(Frame { n, vectors })
    }

    /// Frame of standard basis vectors for a sorted index subset.
    pub fn standard(n: usize, subset: &[usize]) -> Result<Self> {
        let mut vectors = Vec::with_capacity(subset.len());
        for &i in subset {
            if i >= n {
                return Err(Error::invalid("standard frame index out of range"));
            }
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            vectors.push(v);
        }
        Ok(Frame { n, vectors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    /// Max deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    pub fn is_orthonormal(&self, tol: f64) -> bool {
        self.orthonormality_defect() <= tol
    }

    /// Determinant of the Gram matrix (squared k-volume of the spanned
    /// parallelepiped).
    pub fn gram_det(&self) -> f64 {
        let k = self.k();
        if k == 0 {
            return 1.0;
        }
        let mut g = nalgebra::DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                g[(i, j)] = self.vectors[i].iter().zip(&self.vectors[j]).map(|(x, y)| x * y).sum();
            }
        }
        g.determinant()
    }
}

/// Plücker coordinates of the span of a frame: the wedge of its vectors.
///
/// For an orthonormal frame the result has unit Euclidean norm in
/// coefficient space.
pub fn plucker(frame: &Frame) -> Result<MultiVector> {
    let gd = frame.gram_det();
    if gd < 1e-12 {
        return Err(Error::RankDeficientFrame(gd));
    }
    let mut acc = MultiVector::scalar(frame.n, 1.0);
    for v in &frame.vectors {
        acc = acc.wedge(&MultiVector::from_vector(v))?;
    }
    Ok(acc)
}

/// Constant-coefficient form of bidegree (a, b) on R^n + R^n.
///
/// Coefficient layout: the slot for (base subset I, fiber subset J) is at
/// index `rank(I) * C(n,b) + rank(J)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiGradedForm {
    n: usize,
    base: usize,
    fiber: usize,
    coeffs: Vec<f64>,
}

impl BiGradedForm {
    pub fn zero(n: usize, base: usize, fiber: usize) -> Result<Self> {
        if base > n || fiber > n {
            return Err(Error::GradeOverflow(format!(
                "bidegree ({base},{fiber}) exceeds dimension {n}"
            )));
        }
        Ok(BiGradedForm {
            n,
            base,
            fiber,
            coeffs: vec![0.0; binomial(n, base) * binomial(n, fiber)],
        })
    }

    /// Form with a single unit term dx_I (x) dy_J (0-based sorted subsets).
    pub fn monomial(n: usize, base_idx: &[usize], fiber_idx: &[usize]) -> Result<Self> {
        let mut f = BiGradedForm::zero(n, base_idx.len(), fiber_idx.len())?;
        f.add_term(base_idx, fiber_idx, 1.0);
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base_grade(&self) -> usize {
        self.base
    }

    pub fn fiber_grade(&self) -> usize {
        self.fiber
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn add_term(&mut self, base_idx: &[usize], fiber_idx: &[usize], coef: f64) {
        let fb = binomial(self.n, self.fiber);
        let r = subset_rank(self.n, base_idx) * fb + subset_rank(self.n, fiber_idx);
        self.coeffs[r] += coef;
    }

    pub fn coeff(&self, base_idx: &[usize], fiber_idx: &[usize]) -> f64 {
        let fb = binomial(self.n, self.fiber);
        self.coeffs[subset_rank(self.n, base_idx) * fb + subset_rank(self.n, fiber_idx)]
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// When the base grade is zero, the form is a plain fiber covector;
    /// return it as a multivector of coefficients in the dual basis.
    pub fn fiber_covector(&self) -> Result<MultiVector> {
        if self.base != 0 {
            return Err(Error::invalid("fiber_covector requires base grade 0"));
        }
        let mut mv = MultiVector::zero(self.n, self.fiber)?;
        mv.coeffs_mut().copy_from_slice(&self.coeffs);
        Ok(mv)
    }
}

/// Interior product of a grade-k multivector into the base slot of a
/// bigraded form: fills the leading base arguments.
pub fn contract(u: &MultiVector, form: &BiGradedForm) -> Result<BiGradedForm> {
    if u.n() != form.n {
        return Err(Error::dim("contract: mismatched ambient dimensions"));
    }
    if u.grade() > form.base {
        return Err(Error::GradeOverflow(format!(
            "contract: grade {} into base grade {}",
            u.grade(),
            form.base
        )));
    }
    let n = form.n;
    let k = u.grade();
    let mut out = BiGradedForm::zero(n, form.base - k, form.fiber)?;
    let fb = binomial(n, form.fiber);
    let rb = binomial(n, form.base - k);
    let subs_u = k_subsets(n, k);
    let subs_base = k_subsets(n, form.base);
    for (ib, sb) in subs_base.iter().enumerate() {
        let mb = subset_mask(sb);
        for (iu, su) in subs_u.iter().enumerate() {
            let cu = u.coeffs()[iu];
            if cu == 0.0 {
                continue;
            }
            let mu = subset_mask(su);
            if mu & mb != mu {
                continue; // u's subset not contained in the base subset
            }
            let rest: Vec<usize> = sb.iter().copied().filter(|i| !su.contains(i)).collect();
            // sign of rearranging (su, rest) into sb
            let sign = merge_sign(mu, mb & !mu);
            let rrest = subset_rank(n, &rest);
            debug_assert!(rrest < rb);
            for jf in 0..fb {
                let c = form.coeffs[ib * fb + jf];
                if c != 0.0 {
                    out.coeffs[rrest * fb + jf] += sign * cu * c;
                }
            }
        }
    }
    Ok(out)
}

/// Interior product of a grade-k multivector into a plain m-form
/// (a covector array stored as a `MultiVector` in the dual basis).
pub fn contract_form(u: &MultiVector, form: &MultiVector) -> Result<MultiVector> {
    if u.n() != form.n() {
        return Err(Error::dim("contract_form: mismatched ambient dimensions"));
    }
    if u.grade() > form.grade() {
        return Err(Error::GradeOverflow(format!(
            "contract_form: grade {} into form grade {}",
            u.grade(),
            form.grade()
        )));
    }
    let n = form.n();
    let k = u.grade();
    let mut out = MultiVector::zero(n, form.grade() - k)?;
    let subs_u = k_subsets(n, k);
    let subs_f = k_subsets(n, form.grade());
    for (ifo, sf) in subs_f.iter().enumerate() {
        let cf = form.coeffs()[ifo];
        if cf == 0.0 {
            continue;
        }
        let mf = subset_mask(sf);
        for (iu, su) in subs_u.iter().enumerate() {
            let cu = u.coeffs()[iu];
            if cu == 0.0 {
                continue;
            }
            let mu = subset_mask(su);
            if mu & mf != mu {
                continue;
            }
            let rest: Vec<usize> = sf.iter().copied().filter(|i| !su.contains(i)).collect();
            let sign = merge_sign(mu, mf & !mu);
            out.coeffs_mut()[subset_rank(n, &rest)] += sign * cu * cf;
        }
    }
    Ok(out)
}

/// Orthonormal frame of the orthogonal complement of an orthonormal k-frame,
/// oriented so that the concatenated n-frame is positively oriented.
///
/// Householder QR of [frame | identity] keeps the complement orthonormal to
/// machine precision even for badly aligned frames.
pub fn oriented_complement(frame: &Frame) -> Result<Frame> {
    let n = frame.n();
    let k = frame.k();
    if !frame.is_orthonormal(1e-10) {
        return Err(Error::invalid("oriented_complement requires an orthonormal frame"));
    }
    if k == n {
        return Frame::new(n, Vec::new());
    }
    let mut m = nalgebra::DMatrix::<f64>::zeros(n, k + n);
    for (c, v) in frame.vectors().iter().enumerate() {
        for (r, &x) in v.iter().enumerate() {
            m[(r, c)] = x;
        }
    }
    for i in 0..n {
        m[(i, k + i)] = 1.0;
    }
    let q = m.qr().q();
    debug_assert_eq!(q.ncols(), n);
    let mut complement: Vec<Vec<f64>> = (k..n)
        .map(|c| (0..n).map(|r| q[(r, c)]).collect())
        .collect();
    let mut full = nalgebra::DMatrix::<f64>::zeros(n, n);
    for (i, v) in frame.vectors().iter().chain(complement.iter()).enumerate() {
        for (j, &x) in v.iter().enumerate() {
            full[(i, j)] = x;
        }
    }
    if full.determinant() < 0.0 {
        if let Some(last) = complement.last_mut() {
            for x in last.iter_mut() {
                *x = -*x;
            }
        }
    }
    Frame::new(n, complement)
}

// ---------------------------------------------------------------------------
// JSON representation
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct BiGradedFormJson {
    n: usize,
    base: usize,
    fiber: usize,
    terms: Vec<FormTermJson>,
}

#[derive(Serialize, Deserialize)]
struct FormTermJson {
    base_idx: Vec<usize>,
    fiber_idx: Vec<usize>,
    coef: f64,
}

impl BiGradedForm {
    /// Parse the JSON schema {"n","base","fiber","terms":[{"base_idx",
    /// "fiber_idx","coef"}]} with 1-based strictly increasing indices.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: BiGradedFormJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: "$".into(),
            message: e.to_string(),
        })?;
        let mut form = BiGradedForm::zero(raw.n, raw.base, raw.fiber)?;
        for (t, term) in raw.terms.iter().enumerate() {
            let conv = |idx: &[usize], len: usize, what: &str| -> Result<Vec<usize>> {
                if idx.len() != len {
                    return Err(Error::Parse {
                        path: format!("$.terms[{t}].{what}"),
                        message: format!("expected {len} indices, got {}", idx.len()),
                    });
                }
                let mut out = Vec::with_capacity(idx.len());
                let mut prev = 0usize;
                for &i in idx {
                    if i < 1 || i > raw.n || i <= prev {
                        return Err(Error::Parse {
                            path: format!("$.terms[{t}].{what}"),
                            message: "indices must be 1-based and strictly increasing".into(),
                        });
                    }
                    out.push(i - 1);
                    prev = i;
                }
                Ok(out)
            };
            let bi = conv(&term.base_idx, raw.base, "base_idx")?;
            let fi = conv(&term.fiber_idx, raw.fiber, "fiber_idx")?;
            form.add_term(&bi, &fi, term.coef);
        }
        Ok(form)
    }

    pub fn to_json(&self) -> String {
        let fbsubs = k_subsets(self.n, self.fiber);
        let bsubs = k_subsets(self.n, self.base);
        let fb = fbsubs.len();
        let mut terms = Vec::new();
        for (ib, sb) in bsubs.iter().enumerate() {
            for (jf, sf) in fbsubs.iter().enumerate() {
                let c = self.coeffs[ib * fb + jf];
                if c != 0.0 {
                    terms.push(FormTermJson {
                        base_idx: sb.iter().map(|i| i + 1).collect(),
                        fiber_idx: sf.iter().map(|i| i + 1).collect(),
                        coef: c,
                    });
                }
            }
        }
        serde_json::to_string(&BiGradedFormJson {
            n: self.n,
            base: self.base,
            fiber: self.fiber,
            terms,
        })
        .expect("serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn random_multivector(n: usize, k: usize, rng: &mut impl Rng) -> MultiVector {
        let mut mv = MultiVector::zero(n, k).unwrap();
        for c in mv.coeffs_mut() {
            *c = rng.gen_range(-1.0..1.0);
        }
        mv
    }

    #[test]
    fn wedge_basis_cases() {
        let e1 = MultiVector::basis_vector(3, 0).unwrap();
        let e2 = MultiVector::basis_vector(3, 1).unwrap();
        let w = e1.wedge(&e2).unwrap();
        assert_eq!(w.coeff(&[0, 1]), 1.0);
        assert_eq!(w.coeff(&[0, 2]), 0.0);

        let zero = e1.wedge(&e1).unwrap();
        assert!(zero.norm() == 0.0);

        // (e1+e2) ^ e2 = e1 ^ e2
        let s = e1.add(&e2).unwrap();
        let w2 = s.wedge(&e2).unwrap();
        assert_eq!(w2.coeff(&[0, 1]), 1.0);
        assert_eq!(w2.norm(), 1.0);
    }

    #[test]
    fn wedge_errors() {
        let e1 = MultiVector::basis_vector(3, 0).unwrap();
        let f = MultiVector::basis_vector(4, 0).unwrap();
        assert!(e1.wedge(&f).is_err());
        let top = MultiVector::basis(3, &[0, 1, 2]).unwrap();
        assert!(top.wedge(&e1).is_err());
    }

    #[test]
    fn plucker_examples() {
        // frame (e1, e3) in R^4
        let f = Frame::standard(4, &[0, 2]).unwrap();
        let p = plucker(&f).unwrap();
        assert_eq!(p.coeff(&[0, 2]), 1.0);
        assert!((p.norm() - 1.0).abs() < 1e-14);

        // ((e1+e2)/sqrt2, e3) in R^3 -> 1/sqrt2 on {1,3} and {2,3}
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let f = Frame::new(3, vec![vec![s, s, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let p = plucker(&f).unwrap();
        assert!((p.coeff(&[0, 2]) - s).abs() < 1e-14);
        assert!((p.coeff(&[1, 2]) - s).abs() < 1e-14);

        // reversed frame negates
        let f = Frame::standard(4, &[0, 2]).unwrap();
        let rev = Frame::new(4, vec![f.vectors()[1].clone(), f.vectors()[0].clone()]).unwrap();
        let p = plucker(&rev).unwrap();
        assert_eq!(p.coeff(&[0, 2]), -1.0);
    }

    #[test]
    fn plucker_rejects_rank_deficient() {
        let f = Frame::new(3, vec![vec![1.0, 0.0, 0.0], vec![1.0, 1e-9, 0.0]]).unwrap();
        assert!(matches!(plucker(&f), Err(Error::RankDeficientFrame(_))));
    }

    #[test]
    fn plucker_norm_rotation_invariant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = 4;
            let q = crate::mc::random_rotation(n, &mut rng);
            let f = Frame::new(
                n,
                vec![
                    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                ],
            )
            .unwrap();
            if f.gram_det() < 1e-6 {
                continue;
            }
            let rotated: Vec<Vec<f64>> = f
                .vectors()
                .iter()
                .map(|v| {
                    (0..n)
                        .map(|i| (0..n).map(|j| q[(i, j)] * v[j]).sum::<f64>())
                        .collect()
                })
                .collect();
            let fr = Frame::new(n, rotated).unwrap();
            let a = plucker(&f).unwrap().norm();
            let b = plucker(&fr).unwrap().norm();
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn contract_examples() {
        // (e1^e2) -| (dx1^dx2 (x) dy3) in R^3 -> scalar (x) dy3 with value 1
        let u = MultiVector::basis(3, &[0, 1]).unwrap();
        let w = BiGradedForm::monomial(3, &[0, 1], &[2]).unwrap();
        let c = contract(&u, &w).unwrap();
        assert_eq!(c.base_grade(), 0);
        assert_eq!(c.coeff(&[], &[2]), 1.0);

        // e1 -| (dx2 (x) dy1) = 0
        let u = MultiVector::basis_vector(3, 0).unwrap();
        let w = BiGradedForm::monomial(3, &[1], &[0]).unwrap();
        let c = contract(&u, &w).unwrap();
        assert_eq!(c.norm(), 0.0);

        // e1 -| (dx1^dx2 (x) 1) = dx2 (x) 1
        let u = MultiVector::basis_vector(3, 0).unwrap();
        let w = BiGradedForm::monomial(3, &[0, 1], &[]).unwrap();
        let c = contract(&u, &w).unwrap();
        assert_eq!(c.coeff(&[1], &[]), 1.0);
        assert_eq!(c.coeff(&[0], &[]), 0.0);
        assert_eq!(c.coeff(&[2], &[]), 0.0);
    }

    #[test]
    fn contract_plain_forms() {
        // (e1^e2) -| (dx1^dx2^dx3) = dx3
        let u = MultiVector::basis(3, &[0, 1]).unwrap();
        let form = MultiVector::basis(3, &[0, 1, 2]).unwrap();
        let c = contract_form(&u, &form).unwrap();
        assert_eq!(c.coeff(&[2]), 1.0);
        // e2 -| (dx1^dx2) = -dx1
        let u = MultiVector::basis_vector(3, 1).unwrap();
        let form = MultiVector::basis(3, &[0, 1]).unwrap();
        let c = contract_form(&u, &form).unwrap();
        assert_eq!(c.coeff(&[0]), -1.0);
    }

    #[test]
    fn contraction_composition_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = 5;
            let kv = rng.gen_range(0..=2usize);
            let ku = rng.gen_range(0..=(3 - kv));
            let base = rng.gen_range((kv + ku)..=n.min(kv + ku + 2));
            let fiber = rng.gen_range(0..=(n - base).min(2));
            let v = random_multivector(n, kv, &mut rng);
            let u = random_multivector(n, ku, &mut rng);
            let mut w = BiGradedForm::zero(n, base, fiber).unwrap();
            for c in w.coeffs_mut() {
                *c = rng.gen_range(-1.0..1.0);
            }
            let lhs = contract(&u, &contract(&v, &w).unwrap()).unwrap();
            let vu = v.wedge(&u).unwrap();
            let rhs = contract(&vu, &w).unwrap();
            let diff: f64 = lhs
                .coeffs()
                .iter()
                .zip(rhs.coeffs())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(diff < 1e-12, "composition identity violated: {diff}");
        }
    }

    #[test]
    fn oriented_complement_examples() {
        // span(e1) in R^2 -> (e2)
        let f = Frame::standard(2, &[0]).unwrap();
        let c = oriented_complement(&f).unwrap();
        assert!((c.vectors()[0][1] - 1.0).abs() < 1e-14);

        // span(e2) in R^2 -> (-e1)
        let f = Frame::standard(2, &[1]).unwrap();
        let c = oriented_complement(&f).unwrap();
        assert!((c.vectors()[0][0] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn oriented_complement_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let q = crate::mc::random_rotation(4, &mut rng);
            let f = Frame::new(
                4,
                vec![q.column(0).iter().copied().collect(), q.column(1).iter().copied().collect()],
            )
            .unwrap();
            let c = oriented_complement(&f).unwrap();
            assert!(c.is_orthonormal(1e-10));
            let mut m = nalgebra::DMatrix::<f64>::zeros(4, 4);
            for (i, v) in f.vectors().iter().chain(c.vectors().iter()).enumerate() {
                for (j, &x) in v.iter().enumerate() {
                    m[(i, j)] = x;
                }
            }
            assert!((m.determinant() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn bigraded_json_roundtrip() {
        let text = r#"{"n":3,"base":1,"fiber":2,"terms":[{"base_idx":[1],"fiber_idx":[2,3],"coef":2.5}]}"#;
        let f = BiGradedForm::from_json(text).unwrap();
        assert_eq!(f.coeff(&[0], &[1, 2]), 2.5);
        let f2 = BiGradedForm::from_json(&f.to_json()).unwrap();
        assert_eq!(f, f2);
    }

    #[test]
    fn bigraded_json_rejects_bad_indices() {
        let text = r#"{"n":3,"base":1,"fiber":2,"terms":[{"base_idx":[0],"fiber_idx":[2,3],"coef":1.0}]}"#;
        assert!(BiGradedForm::from_json(text).is_err());
        let text = r#"{"n":3,"base":1,"fiber":2,"terms":[{"base_idx":[1],"fiber_idx":[3,2],"coef":1.0}]}"#;
        assert!(BiGradedForm::from_json(text).is_err());
    }

    proptest! {
        #[test]
        fn wedge_graded_anticommutative(seed in 0u64..1000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = 5usize;
            let ka = rng.gen_range(0..=2usize);
            let kb = rng.gen_range(0..=(n - ka).min(2));
            let a = random_multivector(n, ka, &mut rng);
            let b = random_multivector(n, kb, &mut rng);
            let ab = a.wedge(&b).unwrap();
            let ba = b.wedge(&a).unwrap();
            let sign = if (ka * kb) % 2 == 0 { 1.0 } else { -1.0 };
            for (x, y) in ab.coeffs().iter().zip(ba.coeffs()) {
                prop_assert!((x - sign * y).abs() < 1e-12);
            }
        }

        #[test]
        fn wedge_bilinear(seed in 0u64..300) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31).wrapping_add(5));
            let n = 4usize;
            let a = random_multivector(n, 1, &mut rng);
            let b = random_multivector(n, 1, &mut rng);
            let c = random_multivector(n, 2, &mut rng);
            let s = rng.gen_range(-2.0..2.0);
            let lhs = a.scale(s).add(&b).unwrap().wedge(&c).unwrap();
            let rhs = a.wedge(&c).unwrap().scale(s).add(&b.wedge(&c).unwrap()).unwrap();
            for (x, y) in lhs.coeffs().iter().zip(rhs.coeffs()) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
    }
}
