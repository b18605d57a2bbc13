//! Floating-point reduction of a generic dual element to the transversal
//! normal form (A, B, torus angles).
//!
//! The reduction composes four coadjoint moves: a rotation sending x* to
//! A e_1 and the x*-orthogonal part of v* to B e_2, a time shift clearing the
//! remaining first component of v*, a combined boost-translation clearing t*
//! and the first two rows of K*, and finally a block rotation conjugating the
//! untouched lower (n-2) block of K* into a maximal torus. Each step is a
//! genuine group element and is applied through the same conjugate-and-project
//! coadjoint as the exact code path, so the trace can be recomposed and
//! checked. Steps that would do nothing are skipped, which makes the
//! reduction idempotent: feeding the output back in yields an empty trace.

use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use serde_json::{json, Value};

/// Float mirror of a dual vector. K* is re-skewed on construction so later
/// steps can rely on exact antisymmetry.
#[derive(Clone, Debug)]
pub struct FloatDual {
    n: usize,
    kstar: DMatrix<f64>,
    vstar: DVector<f64>,
    xstar: DVector<f64>,
    tstar: f64,
}

impl FloatDual {
    pub fn new(
        kstar: DMatrix<f64>,
        vstar: DVector<f64>,
        xstar: DVector<f64>,
        tstar: f64,
    ) -> Result<Self> {
        let n = kstar.nrows();
        if kstar.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: kstar.ncols() });
        }
        if vstar.len() != n || xstar.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: vstar.len().min(xstar.len()),
            });
        }
        let skew = (&kstar - kstar.transpose()) * 0.5;
        Ok(FloatDual { n, kstar: skew, vstar, xstar, tstar })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kstar(&self) -> &DMatrix<f64> {
        &self.kstar
    }

    pub fn vstar(&self) -> &DVector<f64> {
        &self.vstar
    }

    pub fn xstar(&self) -> &DVector<f64> {
        &self.xstar
    }

    pub fn tstar(&self) -> f64 {
        self.tstar
    }

    /// Largest absolute entry; used to scale tolerances.
    pub fn scale(&self) -> f64 {
        let mut s: f64 = 1.0;
        for v in self.kstar.iter() {
            s = s.max(v.abs());
        }
        for v in self.vstar.iter().chain(self.xstar.iter()) {
            s = s.max(v.abs());
        }
        s.max(self.tstar.abs())
    }

    /// Canonical matrix representative, (n+2) x (n+2).
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.n;
        let mut m = DMatrix::zeros(n + 2, n + 2);
        m.view_mut((0, 0), (n, n)).copy_from(&self.kstar);
        for i in 0..n {
            m[(i, n)] = self.vstar[i];
            m[(i, n + 1)] = self.xstar[i];
        }
        m[(n, n + 1)] = self.tstar;
        m
    }

    pub fn from_matrix(m: &DMatrix<f64>) -> Result<Self> {
        let size = m.nrows();
        if m.ncols() != size || size < 3 {
            return Err(Error::DimensionMismatch { expected: size, got: m.ncols() });
        }
        let n = size - 2;
        let kstar = m.view((0, 0), (n, n)).into_owned();
        let vstar = DVector::from_fn(n, |i, _| m[(i, n)]);
        let xstar = DVector::from_fn(n, |i, _| m[(i, n + 1)]);
        FloatDual::new(kstar, vstar, xstar, m[(n, n + 1)])
    }

    /// Coordinates in variable order, for polynomial evaluation.
    pub fn to_point(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * (n - 1) / 2 + 2 * n + 1);
        for i in 0..n {
            for j in i + 1..n {
                out.push(self.kstar[(i, j)]);
            }
        }
        out.extend(self.vstar.iter().copied());
        out.extend(self.xstar.iter().copied());
        out.push(self.tstar);
        out
    }

    pub fn to_json(&self) -> Value {
        let k: Vec<Vec<f64>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.kstar[(i, j)]).collect())
            .collect();
        json!({
            "n": self.n,
            "Kstar": k,
            "vstar": self.vstar.iter().copied().collect::<Vec<f64>>(),
            "xstar": self.xstar.iter().copied().collect::<Vec<f64>>(),
            "tstar": self.tstar,
        })
    }

    /// Accepts numbers or rational strings like "3/4" in every slot, so the
    /// exact and float JSON shapes share one loader.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::BadInput("dual vector must be a JSON object".into()))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::BadInput("dual vector needs integer \"n\"".into()))?
            as usize;
        if n < 1 {
            return Err(Error::BadInput("dual vector needs n >= 1".into()));
        }
        let krows = obj
            .get("Kstar")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::BadInput("missing array field \"Kstar\"".into()))?;
        if krows.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: krows.len() });
        }
        let mut kstar = DMatrix::zeros(n, n);
        for (i, row) in krows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| Error::BadInput("\"Kstar\" rows must be arrays".into()))?;
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            for (j, cell) in row.iter().enumerate() {
                kstar[(i, j)] = float_cell(cell)?;
            }
        }
        let vstar = float_vec(obj.get("vstar"), n, "vstar")?;
        let xstar = float_vec(obj.get("xstar"), n, "xstar")?;
        let tstar = float_cell(
            obj.get("tstar")
                .ok_or_else(|| Error::BadInput("missing field \"tstar\"".into()))?,
        )?;
        FloatDual::new(kstar, DVector::from_vec(vstar), DVector::from_vec(xstar), tstar)
    }
}

fn float_cell(v: &Value) -> Result<f64> {
    if let Some(x) = v.as_f64() {
        if !x.is_finite() {
            return Err(Error::BadInput("entries must be finite".into()));
        }
        return Ok(x);
    }
    if let Some(s) = v.as_str() {
        let r = crate::ratmat::parse_rat(s)?;
        let num: f64 = r.numer().to_string().parse().map_err(|_| Error::BadRational(s.into()))?;
        let den: f64 = r.denom().to_string().parse().map_err(|_| Error::BadRational(s.into()))?;
        return Ok(num / den);
    }
    Err(Error::BadInput("entries must be numbers or rational strings".into()))
}

fn float_vec(v: Option<&Value>, len: usize, what: &str) -> Result<Vec<f64>> {
    let arr = v
        .and_then(Value::as_array)
        .ok_or_else(|| Error::BadInput(format!("missing array field {:?}", what)))?;
    if arr.len() != len {
        return Err(Error::DimensionMismatch { expected: len, got: arr.len() });
    }
    arr.iter().map(float_cell).collect()
}

/// Coadjoint action in floating point: (g M^T g^{-1})^T reduced to canonical
/// form. The inverse is taken blockwise, which is exact for the rotation
/// block and avoids LU noise.
pub fn coadjoint_float(g: &DMatrix<f64>, xi: &FloatDual) -> Result<FloatDual> {
    let n = xi.n();
    if g.nrows() != n + 2 || g.ncols() != n + 2 {
        return Err(Error::DimensionMismatch { expected: n + 2, got: g.nrows() });
    }
    let ginv = group_inverse_float(g, n);
    let moved = (g * xi.to_matrix().transpose() * ginv).transpose();
    FloatDual::from_matrix(&moved)
}

/// Blockwise inverse of a Galilean group matrix.
fn group_inverse_float(g: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
    let rho = g.view((0, 0), (n, n)).into_owned();
    let v = DVector::from_fn(n, |i, _| g[(i, n)]);
    let x = DVector::from_fn(n, |i, _| g[(i, n + 1)]);
    let x0 = g[(n, n + 1)];
    let rt = rho.transpose();
    let mut inv = DMatrix::zeros(n + 2, n + 2);
    inv.view_mut((0, 0), (n, n)).copy_from(&rt);
    let minus_rtv = -(&rt * &v);
    let last = &rt * (&v * x0 - &x);
    for i in 0..n {
        inv[(i, n)] = minus_rtv[i];
        inv[(i, n + 1)] = last[i];
    }
    inv[(n, n)] = 1.0;
    inv[(n, n + 1)] = -x0;
    inv[(n + 1, n + 1)] = 1.0;
    inv
}

/// The normal form living on the transversal subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct TransversalForm {
    pub a: f64,
    pub b: f64,
    pub thetas: Vec<f64>,
    pub degenerate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepLabel {
    Rotation,
    TimeShift,
    BoostTranslation,
    TorusRotation,
}

impl StepLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            StepLabel::Rotation => "rotation",
            StepLabel::TimeShift => "time-shift",
            StepLabel::BoostTranslation => "boost-translation",
            StepLabel::TorusRotation => "torus-rotation",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReductionStep {
    pub label: StepLabel,
    pub matrix: DMatrix<f64>,
}

/// The group moves applied, in application order.
#[derive(Clone, Debug, Default)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

impl ReductionTrace {
    /// Single group element equal to the whole move sequence: later steps
    /// multiply on the left, matching the left coadjoint action.
    pub fn composed(&self, n: usize) -> DMatrix<f64> {
        let mut g = DMatrix::identity(n + 2, n + 2);
        for step in &self.steps {
            g = &step.matrix * g;
        }
        g
    }

    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Everything `reduce` produces: the normal form, the moves, the reduced
/// dual element, and the off-pattern residual (None when degenerate).
#[derive(Clone, Debug)]
pub struct Reduction {
    pub form: TransversalForm,
    pub trace: ReductionTrace,
    pub reduced: FloatDual,
    pub residual: Option<f64>,
}

fn embed_rotation(rho: &DMatrix<f64>) -> DMatrix<f64> {
    let n = rho.nrows();
    let mut g = DMatrix::identity(n + 2, n + 2);
    g.view_mut((0, 0), (n, n)).copy_from(rho);
    g
}

fn time_shift_matrix(n: usize, x0: f64) -> DMatrix<f64> {
    let mut g = DMatrix::identity(n + 2, n + 2);
    g[(n, n + 1)] = x0;
    g
}

fn boost_translation_matrix(v: &DVector<f64>, x: &DVector<f64>) -> DMatrix<f64> {
    let n = v.len();
    let mut g = DMatrix::identity(n + 2, n + 2);
    for i in 0..n {
        g[(i, n)] = v[i];
        g[(i, n + 1)] = x[i];
    }
    g
}

/// Reduces a dual element to the transversal normal form. `tol` is the
/// degeneracy threshold on norms, scaled by the input magnitude; pass the
/// CLI default 1e-9 unless there is a reason not to.
pub fn reduce(xi: &FloatDual, tol: f64) -> Reduction {
    let n = xi.n();
    let scale = xi.scale();
    let skip_tol = 1e-12 * scale;
    let mut trace = ReductionTrace::default();
    let mut cur = xi.clone();

    let degenerate = |form_a: f64, form_b: f64, trace: ReductionTrace, cur: FloatDual| Reduction {
        form: TransversalForm { a: form_a, b: form_b, thetas: Vec::new(), degenerate: true },
        trace,
        reduced: cur,
        residual: None,
    };

    // Step 1: rotate x* onto A e_1 and the x*-orthogonal part of v* onto
    // B e_2. Skipped when the vectors already sit in that pattern.
    let a = cur.xstar().norm();
    if a <= tol * scale {
        return degenerate(a, 0.0, trace, cur);
    }
    let u1 = cur.xstar() / a;
    let vproj = cur.vstar() - u1.scale(u1.dot(cur.vstar()));
    let b = vproj.norm();
    if b <= tol * scale {
        return degenerate(a, b, trace, cur);
    }
    // Both norms survived the gates above, which forces n >= 2.
    let already_rotated = (cur.xstar()[0] - a).abs() <= skip_tol
        && (1..n).all(|i| cur.xstar()[i].abs() <= skip_tol)
        && (cur.vstar()[1] - b).abs() <= skip_tol
        && (2..n).all(|i| cur.vstar()[i].abs() <= skip_tol);
    if !already_rotated {
        let u2 = &vproj / b;
        let mut basis: Vec<DVector<f64>> = vec![u1.clone(), u2.clone()];
        for i in 0..n {
            if basis.len() == n {
                break;
            }
            let mut w = DVector::zeros(n);
            w[i] = 1.0;
            for c in &basis {
                let d = c.dot(&w);
                w -= c.scale(d);
            }
            let norm = w.norm();
            if norm > 1e-8 {
                basis.push(w / norm);
            }
        }
        debug_assert_eq!(basis.len(), n);
        let mut rho = DMatrix::zeros(n, n);
        for (r, c) in basis.iter().enumerate() {
            for j in 0..n {
                rho[(r, j)] = c[j];
            }
        }
        let g = embed_rotation(&rho);
        cur = coadjoint_float(&g, &cur).expect("matched dimensions");
        trace.steps.push(ReductionStep { label: StepLabel::Rotation, matrix: g });
    }

    // Step 2: a time shift adds x0 x* to v*; x0 = -v*_1/A clears the first
    // component.
    let c1 = cur.vstar()[0];
    if c1.abs() > skip_tol {
        let g = time_shift_matrix(n, -c1 / a);
        cur = coadjoint_float(&g, &cur).expect("matched dimensions");
        trace.steps.push(ReductionStep { label: StepLabel::TimeShift, matrix: g });
    }

    // Step 3: a boost-translation fixes v* and x* but shifts
    // K* by (v* v^T - v v*^T)/2 + (x* x^T - x x*^T)/2 and t* by -v.x*.
    // With x* = A e_1 and v* = B e_2 the clearing conditions solve to the
    // parameters below.
    let k = cur.kstar().clone();
    let needs_clearing = cur.tstar().abs() > skip_tol
        || k[(0, 1)].abs() > skip_tol
        || (2..n).any(|j| k[(0, j)].abs() > skip_tol || k[(1, j)].abs() > skip_tol);
    if needs_clearing {
        let mut v = DVector::zeros(n);
        let mut x = DVector::zeros(n);
        v[0] = cur.tstar() / a;
        for j in 2..n {
            x[j] = -2.0 * k[(0, j)] / a;
            v[j] = -2.0 * k[(1, j)] / b;
        }
        x[1] = (b * v[0] - 2.0 * k[(0, 1)]) / a;
        let g = boost_translation_matrix(&v, &x);
        cur = coadjoint_float(&g, &cur).expect("matched dimensions");
        trace.steps.push(ReductionStep { label: StepLabel::BoostTranslation, matrix: g });
    }

    // Step 4: conjugate the untouched lower (n-2) block of K* into the
    // maximal torus.
    let m = n.saturating_sub(2);
    let mut thetas = Vec::new();
    if m >= 1 {
        let block = cur.kstar().view((2, 2), (m, m)).into_owned();
        let (q, th) = skew_canonical(&block, tol * scale);
        thetas = th;
        if !is_torus_pattern(&block, &thetas, skip_tol) {
            let mut rho = DMatrix::identity(n, n);
            rho.view_mut((2, 2), (m, m)).copy_from(&q.transpose());
            let g = embed_rotation(&rho);
            cur = coadjoint_float(&g, &cur).expect("matched dimensions");
            trace.steps.push(ReductionStep { label: StepLabel::TorusRotation, matrix: g });
            // Read the angles back from the conjugated block so the reported
            // values match the reduced element bit for bit.
            for (j, t) in thetas.iter_mut().enumerate() {
                *t = cur.kstar()[(2 + 2 * j, 3 + 2 * j)];
            }
        }
    }

    let form = TransversalForm { a, b, thetas, degenerate: false };
    let residual = off_pattern_residual(&cur, &form);
    Reduction { form, trace, reduced: cur, residual: Some(residual) }
}

/// True when the lower block already carries the canonical 2x2 pattern with
/// the given angles, so the torus step can be skipped.
fn is_torus_pattern(block: &DMatrix<f64>, thetas: &[f64], tol: f64) -> bool {
    let m = block.nrows();
    for i in 0..m {
        for j in i + 1..m {
            let expect = if j == i + 1 && i % 2 == 0 && i / 2 < thetas.len() {
                thetas[i / 2]
            } else {
                0.0
            };
            if (block[(i, j)] - expect).abs() > tol {
                return false;
            }
        }
    }
    true
}

/// Largest entry of the reduced element lying outside the transversal
/// pattern (x* = A e_1, v* = B e_2, t* = 0, K* supported on the torus
/// blocks of its lower (n-2)x(n-2) corner).
fn off_pattern_residual(xi: &FloatDual, form: &TransversalForm) -> f64 {
    let n = xi.n();
    let mut r: f64 = 0.0;
    for i in 1..n {
        r = r.max(xi.xstar()[i].abs());
    }
    r = r.max(xi.vstar()[0].abs());
    for i in 2..n {
        r = r.max(xi.vstar()[i].abs());
    }
    r = r.max(xi.tstar().abs());
    for i in 0..n {
        for j in i + 1..n {
            let on_pattern = i >= 2
                && j == i + 1
                && (i - 2) % 2 == 0
                && (i - 2) / 2 < form.thetas.len();
            if !on_pattern {
                r = r.max(xi.kstar()[(i, j)].abs());
            }
        }
    }
    r
}

/// Cyclic Jacobi diagonalization of a symmetric matrix. Returns the
/// eigenvalues and the matrix of eigenvectors as columns.
///
/// The blocks handled here are tiny (at most n - 2 rows), and reductions
/// feed their own output back in, so the solver must stay accurate on
/// nearly diagonal input. The tridiagonalize-then-iterate solver in
/// nalgebra loses several digits exactly there (observed eigenvector
/// residuals around 5e-2 on a 5x5 canonical block with 1e-14 noise);
/// Jacobi rotations have no such failure mode.
fn jacobi_eigen(s: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let m = s.nrows();
    let mut a = s.clone();
    let mut v = DMatrix::identity(m, m);
    let scale = s.iter().fold(0.0f64, |acc, x| acc.max(x.abs())).max(f64::MIN_POSITIVE);
    for _sweep in 0..60 {
        let mut off: f64 = 0.0;
        for i in 0..m {
            for j in i + 1..m {
                off = off.max(a[(i, j)].abs());
            }
        }
        if off <= f64::EPSILON * scale {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let tau = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;
                for k in 0..m {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                for k in 0..m {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }
    ((0..m).map(|i| a[(i, i)]).collect(), v)
}

/// Orthogonal congruence of a skew matrix to its torus form: Q^T K Q is
/// block diagonal with blocks [[0, theta], [-theta, 0]] (theta >= 0, sorted
/// descending) and a zero tail. Built from the symmetric eigenproblem of
/// -K^2: if u is a unit eigenvector with K u != 0, then (u, -K u / |K u|)
/// spans an invariant plane in canonical position.
pub fn skew_canonical(k: &DMatrix<f64>, theta_tol: f64) -> (DMatrix<f64>, Vec<f64>) {
    let m = k.nrows();
    assert_eq!(m, k.ncols(), "skew_canonical needs a square matrix");
    if m == 0 {
        return (DMatrix::identity(0, 0), Vec::new());
    }
    let s = -(k * k);
    let (eigenvalues, eigenvectors) = jacobi_eigen(&s);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        eigenvalues[b]
            .partial_cmp(&eigenvalues[a])
            .expect("eigenvalues of a real symmetric matrix are finite")
            .then(a.cmp(&b))
    });
    let mut pairs: Vec<DVector<f64>> = Vec::with_capacity(m);
    let mut kernel: Vec<DVector<f64>> = Vec::new();
    let mut thetas = Vec::new();
    for &idx in &order {
        let mut w: DVector<f64> = eigenvectors.column(idx).into_owned();
        for c in pairs.iter().chain(kernel.iter()) {
            let d = c.dot(&w);
            w -= c.scale(d);
        }
        let norm = w.norm();
        if norm < 0.3 {
            // Already consumed as some earlier vector's partner.
            continue;
        }
        let u = w / norm;
        let mut q2 = -(k * &u);
        // Orthogonalize the partner against everything accepted so far,
        // including u. For a small angle next to a large one the raw K u
        // carries cross-plane noise amplified by the angle ratio; removing
        // it here keeps the canonical form clean for any spectrum.
        for c in pairs.iter().chain(kernel.iter()) {
            let d = c.dot(&q2);
            q2 -= c.scale(d);
        }
        let du = u.dot(&q2);
        q2 -= u.scale(du);
        let theta = q2.norm();
        if theta > theta_tol {
            q2 /= theta;
            pairs.push(u);
            pairs.push(q2);
            thetas.push(theta);
        } else {
            kernel.push(u);
        }
    }
    debug_assert_eq!(pairs.len() + kernel.len(), m);
    let mut q = DMatrix::zeros(m, m);
    for (col, vec) in pairs.iter().chain(kernel.iter()).enumerate() {
        for i in 0..m {
            q[(i, col)] = vec[i];
        }
    }
    // Pad so the caller always sees floor(m/2) angles.
    while thetas.len() < m / 2 {
        thetas.push(0.0);
    }
    (q, thetas)
}

/// [A^2, A^2 B^2, A^2 B^2 e_1(theta^2), ...]: the generator values a
/// transversal element takes, in generator order.
pub fn closed_form_invariants(form: &TransversalForm) -> Result<Vec<f64>> {
    if form.degenerate {
        return Err(Error::BadInput(
            "degenerate form has no closed-form invariant values".into(),
        ));
    }
    let a2 = form.a * form.a;
    let b2 = form.b * form.b;
    let mut out = vec![a2, a2 * b2];
    // Elementary symmetric polynomials of the squared angles, by the
    // product expansion prod_j (1 + theta_j^2 z).
    let mut esym = vec![1.0];
    for &t in &form.thetas {
        let t2 = t * t;
        let mut next = esym.clone();
        next.push(0.0);
        for i in 0..esym.len() {
            next[i + 1] += esym[i] * t2;
        }
        esym = next;
    }
    for e in esym.iter().skip(1) {
        out.push(a2 * b2 * e);
    }
    Ok(out)
}

/// Random dual element with entries uniform in [-1, 1].
pub fn random_float_dual<R: rand::Rng>(n: usize, rng: &mut R) -> FloatDual {
    let mut kstar = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(-1.0..=1.0);
            kstar[(i, j)] = v;
            kstar[(j, i)] = -v;
        }
    }
    let vstar = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..=1.0));
    let xstar = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..=1.0));
    FloatDual::new(kstar, vstar, xstar, rng.gen_range(-1.0..=1.0)).expect("square and sized")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{generator_count, generator_set};
    use crate::polyring::VarTable;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-9;

    fn fixture_n2() -> FloatDual {
        FloatDual::new(
            DMatrix::zeros(2, 2),
            DVector::from_vec(vec![4.0, 3.0]),
            DVector::from_vec(vec![3.0, 4.0]),
            11.0,
        )
        .unwrap()
    }

    #[test]
    fn fixture_reduces_to_known_a_and_b() {
        let red = reduce(&fixture_n2(), TOL);
        assert!(!red.form.degenerate);
        assert!((red.form.a - 5.0).abs() < 1e-14);
        assert!((red.form.b - 1.4).abs() < 1e-14);
        assert!(red.form.thetas.is_empty());
        assert!(red.residual.unwrap() < 1e-13);
        let closed = closed_form_invariants(&red.form).unwrap();
        assert!((closed[0] - 25.0).abs() < 1e-12);
        assert!((closed[1] - 49.0).abs() < 1e-12);
    }

    #[test]
    fn trace_recomposes_to_the_reduction() {
        let xi = fixture_n2();
        let red = reduce(&xi, TOL);
        let g = red.trace.composed(2);
        // The composed move must be a group element...
        let rho = g.view((0, 0), (2, 2)).into_owned();
        let defect = (&rho.transpose() * &rho - DMatrix::identity(2, 2)).norm();
        assert!(defect < 1e-12, "rotation block defect {}", defect);
        // ...and one application of it must reproduce the reduced element.
        let moved = coadjoint_float(&g, &xi).unwrap();
        let diff = (moved.to_matrix() - red.reduced.to_matrix()).norm();
        assert!(diff < 1e-12, "recomposition defect {}", diff);
    }

    #[test]
    fn reduce_is_idempotent_with_identity_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 2..=5 {
            let xi = random_float_dual(n, &mut rng);
            let first = reduce(&xi, TOL);
            let second = reduce(&first.reduced, TOL);
            assert!(second.trace.is_identity(), "n={} second trace not empty", n);
            assert!((second.form.a - first.form.a).abs() < 1e-12);
            assert!((second.form.b - first.form.b).abs() < 1e-12);
            for (x, y) in second.form.thetas.iter().zip(&first.form.thetas) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_inputs_are_flagged_not_reduced() {
        // x* = 0.
        let xi = FloatDual::new(
            DMatrix::zeros(2, 2),
            DVector::from_vec(vec![1.0, 0.0]),
            DVector::from_vec(vec![0.0, 0.0]),
            0.0,
        )
        .unwrap();
        let red = reduce(&xi, TOL);
        assert!(red.form.degenerate);
        assert!(red.trace.is_identity());
        assert!(red.residual.is_none());
        assert!(closed_form_invariants(&red.form).is_err());
        // v* parallel to x*.
        let xi = FloatDual::new(
            DMatrix::zeros(2, 2),
            DVector::from_vec(vec![2.0, 2.0]),
            DVector::from_vec(vec![1.0, 1.0]),
            0.5,
        )
        .unwrap();
        let red = reduce(&xi, TOL);
        assert!(red.form.degenerate);
    }

    #[test]
    fn skew_canonical_handles_trivial_and_known_blocks() {
        let (q, th) = skew_canonical(&DMatrix::zeros(3, 3), 1e-9);
        assert_eq!(th, vec![0.0]);
        assert!((q.transpose() * q - DMatrix::identity(3, 3)).norm() < 1e-12);
        let mut k = DMatrix::zeros(2, 2);
        k[(0, 1)] = 5.0;
        k[(1, 0)] = -5.0;
        let (q, th) = skew_canonical(&k, 1e-9);
        assert_eq!(th.len(), 1);
        assert!((th[0] - 5.0).abs() < 1e-12);
        let canon = q.transpose() * &k * &q;
        assert!((canon[(0, 1)] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn skew_canonical_matches_eigenvalue_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for m in [4usize, 5, 6] {
            let mut k = DMatrix::zeros(m, m);
            for i in 0..m {
                for j in i + 1..m {
                    let v = rng.gen_range(-1.0..=1.0);
                    k[(i, j)] = v;
                    k[(j, i)] = -v;
                }
            }
            let (q, th) = skew_canonical(&k, 1e-9);
            // Orthogonality.
            assert!((q.transpose() * &q - DMatrix::identity(m, m)).norm() < 1e-12);
            // Canonical pattern.
            let canon = q.transpose() * &k * &q;
            for i in 0..m {
                for j in i + 1..m {
                    let expect = if j == i + 1 && i % 2 == 0 && i / 2 < th.len() {
                        th[i / 2]
                    } else {
                        0.0
                    };
                    assert!(
                        (canon[(i, j)] - expect).abs() < 1e-10,
                        "m={} entry ({},{})",
                        m,
                        i,
                        j
                    );
                }
            }
            // Angles descending and >= 0.
            for w in th.windows(2) {
                assert!(w[0] >= w[1] - 1e-12);
            }
            assert!(th.iter().all(|&t| t >= 0.0));
            // theta^2 against the symmetric eigenvalue oracle.
            let eig = nalgebra::SymmetricEigen::new(-(&k * &k));
            let mut lams: Vec<f64> = eig.eigenvalues.iter().copied().collect();
            lams.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (i, t) in th.iter().enumerate() {
                assert!((t * t - lams[2 * i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn skew_canonical_survives_equal_angles() {
        // Two planes with the same angle: a 4-dimensional eigenspace of -K^2.
        let mut k = DMatrix::zeros(4, 4);
        k[(0, 1)] = 2.0;
        k[(1, 0)] = -2.0;
        k[(2, 3)] = 2.0;
        k[(3, 2)] = -2.0;
        // Mix it with a rotation so the eigenspace is not axis-aligned.
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let mut s = DMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in i + 1..4 {
                let v = rng.gen_range(-0.5..=0.5);
                s[(i, j)] = v;
                s[(j, i)] = -v;
            }
        }
        let q0 = (DMatrix::identity(4, 4) - &s)
            .try_inverse()
            .unwrap()
            * (DMatrix::identity(4, 4) + &s);
        let mixed = &q0 * &k * q0.transpose();
        let skew = (&mixed - mixed.transpose()) * 0.5;
        let (q, th) = skew_canonical(&skew, 1e-9);
        assert!((q.transpose() * &q - DMatrix::identity(4, 4)).norm() < 1e-12);
        assert!((th[0] - 2.0).abs() < 1e-10);
        assert!((th[1] - 2.0).abs() < 1e-10);
        let canon = q.transpose() * &skew * &q;
        assert!((canon[(0, 1)] - 2.0).abs() < 1e-10);
        assert!((canon[(2, 3)] - 2.0).abs() < 1e-10);
        assert!(canon[(0, 2)].abs() < 1e-10 && canon[(1, 3)].abs() < 1e-10);
    }

    #[test]
    fn closed_forms_match_generator_evaluations() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for n in 2..=6 {
            let table = VarTable::new(n);
            let gens = generator_set(&table);
            for _ in 0..10 {
                let xi = random_float_dual(n, &mut rng);
                let red = reduce(&xi, TOL);
                if red.form.degenerate {
                    continue;
                }
                assert!(red.residual.unwrap() < 1e-10 * xi.scale());
                let closed = closed_form_invariants(&red.form).unwrap();
                assert_eq!(closed.len(), gens.len());
                let before = xi.to_point();
                let after = red.reduced.to_point();
                for (g, c) in gens.iter().zip(&closed) {
                    let vb = g.evaluate_f64(&before).unwrap();
                    let va = g.evaluate_f64(&after).unwrap();
                    let scale = 1.0f64.max(vb.abs()).max(c.abs());
                    assert!((vb - c).abs() <= 1e-8 * scale, "n={} before {} vs {}", n, vb, c);
                    assert!((va - c).abs() <= 1e-8 * scale, "n={} after {} vs {}", n, va, c);
                }
            }
        }
    }

    #[test]
    fn closed_form_values_for_the_known_transversal() {
        let form = TransversalForm { a: 2.0, b: 3.0, thetas: vec![5.0], degenerate: false };
        let vals = closed_form_invariants(&form).unwrap();
        assert_eq!(vals, vec![4.0, 36.0, 900.0]);
    }

    #[test]
    fn transversal_input_needs_no_moves() {
        let mut k = DMatrix::zeros(4, 4);
        k[(2, 3)] = 5.0;
        k[(3, 2)] = -5.0;
        let xi = FloatDual::new(
            k,
            DVector::from_vec(vec![0.0, 3.0, 0.0, 0.0]),
            DVector::from_vec(vec![2.0, 0.0, 0.0, 0.0]),
            0.0,
        )
        .unwrap();
        let red = reduce(&xi, TOL);
        assert!(red.trace.is_identity());
        assert_eq!(red.form.a, 2.0);
        assert_eq!(red.form.b, 3.0);
        assert_eq!(red.form.thetas, vec![5.0]);
        assert_eq!(red.residual, Some(0.0));
    }

    #[test]
    fn json_roundtrip_and_rational_strings() {
        let xi = fixture_n2();
        let v = xi.to_json();
        let back = FloatDual::from_json(&v).unwrap();
        assert!((back.to_matrix() - xi.to_matrix()).norm() < 1e-15);
        let mixed: Value = serde_json::from_str(
            r#"{"n":1,"Kstar":[[0]],"vstar":["1/2"],"xstar":[0.25],"tstar":"-3/4"}"#,
        )
        .unwrap();
        let d = FloatDual::from_json(&mixed).unwrap();
        assert_eq!(d.vstar()[0], 0.5);
        assert_eq!(d.xstar()[0], 0.25);
        assert_eq!(d.tstar(), -0.75);
        // A non-square K* must be rejected.
        let bad: Value =
            serde_json::from_str(r#"{"n":2,"Kstar":[[0,1]],"vstar":[0,0],"xstar":[1,0],"tstar":0}"#)
                .unwrap();
        assert!(FloatDual::from_json(&bad).is_err());
    }

    #[test]
    fn loader_symmetrizes_kstar() {
        let mut k = DMatrix::zeros(2, 2);
        k[(0, 1)] = 1.0;
        k[(1, 0)] = -1.0 + 1e-13;
        let xi = FloatDual::new(
            k,
            DVector::zeros(2),
            DVector::from_vec(vec![1.0, 0.0]),
            0.0,
        )
        .unwrap();
        assert!((xi.kstar()[(0, 1)] + xi.kstar()[(1, 0)]).abs() == 0.0);
    }

    #[test]
    fn generator_count_matches_closed_form_length() {
        for n in 2..=8 {
            let len = (n - 2) / 2;
            assert_eq!(2 + len, generator_count(n));
        }
    }
}
