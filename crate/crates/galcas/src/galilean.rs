//! The Galilean group Gal(n), its Lie algebra gal(n), and the coadjoint
//! action on the dual space.
//!
//! Elements of both the group and the algebra are (n+2)x(n+2) rational
//! matrices: an orthogonal (resp. skew) n x n block, a boost column, a
//! translation column, and a time-shift slot. The dual space is realized as
//! matrices modulo the annihilator of gal(n); `project_dual` maps a matrix to
//! the canonical representative (skew K* block, v*/x* columns, t* slot).
//!
//! Coordinates on the dual are the entries of that canonical representative.
//! They are the dual-basis coefficients of the rescaled basis
//! {E(i,j)/2, B(i), P(i), H} because the trace pairing gives
//! <E(i,j), K*> = 2 K*_{i,j}; the Lie-Poisson bracket therefore uses the
//! structure constants of that rescaled basis (`BasisScale::CoordinateDual`),
//! while `structure_constants` reports the plain matrix basis.

use crate::polyring::{MultiPoly, VarKind, VarTable};
use crate::ratmat::{fmt_rat, parse_rat, Rat, RatMat};
use crate::{Error, Result};
use num_traits::{One, Zero};
use rand::Rng;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Basis element of gal(n), in the same order as the variables of `VarTable`:
/// rotations E(i,j) (1-based, i < j, lexicographic), boosts B(i),
/// translations P(i), then the time shift H.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisLabel {
    E(usize, usize),
    B(usize),
    P(usize),
    H,
}

impl BasisLabel {
    /// All basis labels for gal(n), aligned with variable indices.
    pub fn all(n: usize) -> Vec<BasisLabel> {
        let table = VarTable::new(n);
        (0..table.dim())
            .map(|i| match table.kind(i) {
                VarKind::K(a, b) => BasisLabel::E(a, b),
                VarKind::V(a) => BasisLabel::B(a),
                VarKind::X(a) => BasisLabel::P(a),
                VarKind::T => BasisLabel::H,
            })
            .collect()
    }

    pub fn display(&self) -> String {
        match self {
            BasisLabel::E(i, j) => format!("E_{{{},{}}}", i, j),
            BasisLabel::B(i) => format!("B_{}", i),
            BasisLabel::P(i) => format!("P_{}", i),
            BasisLabel::H => "H".to_string(),
        }
    }
}

/// Matrix of a basis element inside (n+2)x(n+2).
///
/// E(i,j) -> e_i e_j^T - e_j e_i^T in the spatial block; B(i) -> 1 at
/// (i, n+1); P(i) -> 1 at (i, n+2); H -> 1 at (n+1, n+2) (all 1-based).
pub fn basis_matrix(n: usize, label: BasisLabel) -> RatMat {
    let mut m = RatMat::zeros(n + 2, n + 2);
    let one = Rat::one();
    match label {
        BasisLabel::E(i, j) => {
            assert!(1 <= i && i < j && j <= n, "E({},{}) out of range for n={}", i, j, n);
            m[(i - 1, j - 1)] = one.clone();
            m[(j - 1, i - 1)] = -one;
        }
        BasisLabel::B(i) => {
            assert!(1 <= i && i <= n);
            m[(i - 1, n)] = one;
        }
        BasisLabel::P(i) => {
            assert!(1 <= i && i <= n);
            m[(i - 1, n + 1)] = one;
        }
        BasisLabel::H => {
            m[(n, n + 1)] = one;
        }
    }
    m
}

/// An element of the Galilean group Gal(n) as an exact (n+2)x(n+2) matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    n: usize,
    mat: RatMat,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        GroupElement {
            n,
            mat: RatMat::identity(n + 2),
        }
    }

    /// Builds an element from its blocks: orthogonal rho, boost column v,
    /// translation column x, time shift x0.
    pub fn from_parts(rho: RatMat, v: &[Rat], x: &[Rat], x0: Rat) -> Result<Self> {
        let n = rho.nrows();
        if rho.ncols() != n {
            return Err(Error::InvalidGroupElement("rotation block must be square".into()));
        }
        if v.len() != n || x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len().max(x.len()) });
        }
        let mut m = RatMat::identity(n + 2);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = rho[(i, j)].clone();
            }
            m[(i, n)] = v[i].clone();
            m[(i, n + 1)] = x[i].clone();
        }
        m[(n, n + 1)] = x0;
        let g = GroupElement { n, mat: m };
        g.validate()?;
        Ok(g)
    }

    /// Pure rotation (or reflection) block element.
    pub fn rotation(rho: RatMat) -> Result<Self> {
        let n = rho.nrows();
        GroupElement::from_parts(rho, &vec![Rat::zero(); n], &vec![Rat::zero(); n], Rat::zero())
    }

    /// Boosts, translations and time shift with identity rotation block.
    pub fn boost_translation(v: &[Rat], x: &[Rat], x0: Rat) -> Result<Self> {
        let n = v.len();
        GroupElement::from_parts(RatMat::identity(n), v, x, x0)
    }

    pub fn time_shift(n: usize, x0: Rat) -> Result<Self> {
        GroupElement::boost_translation(&vec![Rat::zero(); n], &vec![Rat::zero(); n], x0)
    }

    /// Checks the block shape: orthogonal spatial block, unipotent lower-right
    /// 2x2, zero lower-left.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let m = &self.mat;
        if m.nrows() != n + 2 || m.ncols() != n + 2 {
            return Err(Error::InvalidGroupElement("matrix size must be n+2".into()));
        }
        let mut rho = RatMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                rho[(i, j)] = m[(i, j)].clone();
            }
        }
        if rho.transpose().mul(&rho) != RatMat::identity(n) {
            return Err(Error::InvalidGroupElement(
                "spatial block is not orthogonal".into(),
            ));
        }
        // Row n+1 must be (0,...,0, 1, x0) and row n+2 must be (0,...,0, 0, 1).
        for j in 0..n {
            if !m[(n, j)].is_zero() || !m[(n + 1, j)].is_zero() {
                return Err(Error::InvalidGroupElement("lower-left block must vanish".into()));
            }
        }
        if !m[(n, n)].is_one()
            || !m[(n + 1, n + 1)].is_one()
            || !m[(n + 1, n)].is_zero()
        {
            return Err(Error::InvalidGroupElement(
                "lower-right block must be unit upper triangular".into(),
            ));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RatMat {
        &self.mat
    }

    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.n != other.n {
            return Err(Error::VarTableMismatch(self.n, other.n));
        }
        Ok(GroupElement {
            n: self.n,
            mat: self.mat.mul(&other.mat),
        })
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            n: self.n,
            // Group elements have determinant +-1, so this never fails.
            mat: self.mat.inverse().expect("group elements are invertible"),
        }
    }

    pub fn rho(&self) -> RatMat {
        let mut rho = RatMat::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                rho[(i, j)] = self.mat[(i, j)].clone();
            }
        }
        rho
    }

    pub fn boost_column(&self) -> Vec<Rat> {
        (0..self.n).map(|i| self.mat[(i, self.n)].clone()).collect()
    }

    pub fn translation_column(&self) -> Vec<Rat> {
        (0..self.n).map(|i| self.mat[(i, self.n + 1)].clone()).collect()
    }

    pub fn x0(&self) -> Rat {
        self.mat[(self.n, self.n + 1)].clone()
    }

    /// JSON with the full matrix plus declared block fields.
    pub fn to_json(&self) -> Value {
        let mat: Vec<Vec<String>> = (0..self.n + 2)
            .map(|i| (0..self.n + 2).map(|j| fmt_rat(&self.mat[(i, j)])).collect())
            .collect();
        let rho: Vec<Vec<String>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| fmt_rat(&self.mat[(i, j)])).collect())
            .collect();
        json!({
            "schema": "v1",
            "n": self.n,
            "matrix": mat,
            "rho": rho,
            "v": self.boost_column().iter().map(fmt_rat).collect::<Vec<_>>(),
            "x": self.translation_column().iter().map(fmt_rat).collect::<Vec<_>>(),
            "x0": fmt_rat(&self.x0()),
        })
    }

    pub fn from_json(v: &Value) -> Result<GroupElement> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::BadInput("group element must be a JSON object".into()))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::BadInput("group element needs integer \"n\"".into()))?
            as usize;
        let mat = parse_rat_matrix(obj.get("matrix"), n + 2, "matrix")?;
        let g = GroupElement { n, mat };
        g.validate()?;
        // Declared blocks must agree with the matrix.
        if let Some(rv) = obj.get("rho") {
            let rho = parse_rat_matrix(Some(rv), n, "rho")?;
            if rho != g.rho() {
                return Err(Error::BadInput("declared rho disagrees with matrix".into()));
            }
        }
        if let Some(vv) = obj.get("v") {
            if parse_rat_vec(Some(vv), n, "v")? != g.boost_column() {
                return Err(Error::BadInput("declared v disagrees with matrix".into()));
            }
        }
        if let Some(xv) = obj.get("x") {
            if parse_rat_vec(Some(xv), n, "x")? != g.translation_column() {
                return Err(Error::BadInput("declared x disagrees with matrix".into()));
            }
        }
        if let Some(x0) = obj.get("x0") {
            let x0 = x0
                .as_str()
                .ok_or_else(|| Error::BadInput("x0 must be a rational string".into()))?;
            if parse_rat(x0)? != g.x0() {
                return Err(Error::BadInput("declared x0 disagrees with matrix".into()));
            }
        }
        Ok(g)
    }
}

fn parse_rat_matrix(v: Option<&Value>, size: usize, what: &str) -> Result<RatMat> {
    let rows = v
        .and_then(Value::as_array)
        .ok_or_else(|| Error::BadInput(format!("missing array field {:?}", what)))?;
    if rows.len() != size {
        return Err(Error::DimensionMismatch { expected: size, got: rows.len() });
    }
    let mut out = RatMat::zeros(size, size);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::BadInput(format!("{:?} rows must be arrays", what)))?;
        if row.len() != size {
            return Err(Error::DimensionMismatch { expected: size, got: row.len() });
        }
        for (j, cell) in row.iter().enumerate() {
            let s = cell
                .as_str()
                .ok_or_else(|| Error::BadInput(format!("{:?} entries must be rational strings", what)))?;
            out[(i, j)] = parse_rat(s)?;
        }
    }
    Ok(out)
}

fn parse_rat_vec(v: Option<&Value>, len: usize, what: &str) -> Result<Vec<Rat>> {
    let arr = v
        .and_then(Value::as_array)
        .ok_or_else(|| Error::BadInput(format!("missing array field {:?}", what)))?;
    if arr.len() != len {
        return Err(Error::DimensionMismatch { expected: len, got: arr.len() });
    }
    arr.iter()
        .map(|cell| {
            let s = cell
                .as_str()
                .ok_or_else(|| Error::BadInput(format!("{:?} entries must be rational strings", what)))?;
            parse_rat(s)
        })
        .collect()
}

/// A point of gal(n)^*: canonical representative with skew K*, boost/translation
/// rows v*, x*, and time slot t*.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualVector {
    n: usize,
    kstar: RatMat,
    vstar: Vec<Rat>,
    xstar: Vec<Rat>,
    tstar: Rat,
}

impl DualVector {
    pub fn new(kstar: RatMat, vstar: Vec<Rat>, xstar: Vec<Rat>, tstar: Rat) -> Result<Self> {
        let n = kstar.nrows();
        if kstar.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: kstar.ncols() });
        }
        for i in 0..n {
            for j in i..n {
                if kstar[(i, j)] != -kstar[(j, i)].clone() {
                    return Err(Error::NotSkew(i + 1, j + 1));
                }
            }
        }
        if vstar.len() != n || xstar.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: vstar.len().min(xstar.len()) });
        }
        Ok(DualVector { n, kstar, vstar, xstar, tstar })
    }

    pub fn zero(n: usize) -> Self {
        DualVector {
            n,
            kstar: RatMat::zeros(n, n),
            vstar: vec![Rat::zero(); n],
            xstar: vec![Rat::zero(); n],
            tstar: Rat::zero(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kstar(&self) -> &RatMat {
        &self.kstar
    }

    pub fn vstar(&self) -> &[Rat] {
        &self.vstar
    }

    pub fn xstar(&self) -> &[Rat] {
        &self.xstar
    }

    pub fn tstar(&self) -> &Rat {
        &self.tstar
    }

    /// The canonical matrix representative inside (n+2)x(n+2).
    pub fn to_matrix(&self) -> RatMat {
        let n = self.n;
        let mut m = RatMat::zeros(n + 2, n + 2);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.kstar[(i, j)].clone();
            }
            m[(i, n)] = self.vstar[i].clone();
            m[(i, n + 1)] = self.xstar[i].clone();
        }
        m[(n, n + 1)] = self.tstar.clone();
        m
    }

    /// Coordinate vector in variable order (K block row-major above the
    /// diagonal, then v*, x*, t*). Matches `VarTable::new(n)`.
    pub fn to_point(&self) -> Vec<Rat> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * (n - 1) / 2 + 2 * n + 1);
        for i in 0..n {
            for j in i + 1..n {
                out.push(self.kstar[(i, j)].clone());
            }
        }
        out.extend(self.vstar.iter().cloned());
        out.extend(self.xstar.iter().cloned());
        out.push(self.tstar.clone());
        out
    }

    pub fn from_point(n: usize, point: &[Rat]) -> Result<Self> {
        let dim = n * (n - 1) / 2 + 2 * n + 1;
        if point.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: point.len() });
        }
        let mut kstar = RatMat::zeros(n, n);
        let mut it = point.iter().cloned();
        for i in 0..n {
            for j in i + 1..n {
                let v = it.next().unwrap();
                kstar[(j, i)] = -v.clone();
                kstar[(i, j)] = v;
            }
        }
        let vstar: Vec<Rat> = (0..n).map(|_| it.next().unwrap()).collect();
        let xstar: Vec<Rat> = (0..n).map(|_| it.next().unwrap()).collect();
        let tstar = it.next().unwrap();
        DualVector::new(kstar, vstar, xstar, tstar)
    }

    pub fn to_json(&self) -> Value {
        let k: Vec<Vec<String>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| fmt_rat(&self.kstar[(i, j)])).collect())
            .collect();
        json!({
            "n": self.n,
            "Kstar": k,
            "vstar": self.vstar.iter().map(fmt_rat).collect::<Vec<_>>(),
            "xstar": self.xstar.iter().map(fmt_rat).collect::<Vec<_>>(),
            "tstar": fmt_rat(&self.tstar),
        })
    }

    pub fn from_json(v: &Value) -> Result<DualVector> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::BadInput("dual vector must be a JSON object".into()))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::BadInput("dual vector needs integer \"n\"".into()))? as usize;
        if n < 1 {
            return Err(Error::BadInput("dual vector needs n >= 1".into()));
        }
        let kstar = parse_rat_matrix(obj.get("Kstar"), n, "Kstar")?;
        let vstar = parse_rat_vec(obj.get("vstar"), n, "vstar")?;
        let xstar = parse_rat_vec(obj.get("xstar"), n, "xstar")?;
        let tstar = obj
            .get("tstar")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::BadInput("tstar must be a rational string".into()))?;
        DualVector::new(kstar, vstar, xstar, parse_rat(tstar)?)
    }
}

/// Canonical representative of a matrix modulo the annihilator of gal(n):
/// keep the skew part of the spatial block, the two upper-right columns and
/// the (n+1, n+2) slot; drop everything else.
pub fn project_dual(m: &RatMat) -> Result<DualVector> {
    let size = m.nrows();
    if m.ncols() != size || size < 3 {
        return Err(Error::DimensionMismatch { expected: size, got: m.ncols() });
    }
    let n = size - 2;
    let mut ul = RatMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            ul[(i, j)] = m[(i, j)].clone();
        }
    }
    let kstar = ul.skew_part();
    let vstar: Vec<Rat> = (0..n).map(|i| m[(i, n)].clone()).collect();
    let xstar: Vec<Rat> = (0..n).map(|i| m[(i, n + 1)].clone()).collect();
    DualVector::new(kstar, vstar, xstar, m[(n, n + 1)].clone())
}

/// Coadjoint action: Ad*(g) xi is represented by (g M^T g^{-1})^T reduced to
/// canonical form, where M is the representative of xi.
pub fn coadjoint(g: &GroupElement, xi: &DualVector) -> Result<DualVector> {
    if g.n() != xi.n() {
        return Err(Error::VarTableMismatch(g.n(), xi.n()));
    }
    let mt = xi.to_matrix().transpose();
    let moved = g.matrix().mul(&mt).mul(g.inverse().matrix()).transpose();
    project_dual(&moved)
}

/// The orientation-reversing element diag(-1, 1, ..., 1) of O(n) < Gal(n).
pub fn reflection(n: usize) -> GroupElement {
    let mut rho = RatMat::identity(n);
    rho[(0, 0)] = -Rat::one();
    GroupElement::rotation(rho).expect("reflection is orthogonal")
}

/// Signs of the (diagonal) coadjoint pullback of `reflection(n)` on the dual
/// coordinates: K_{1,j}, V_1 and X_1 flip, everything else is fixed.
pub fn reflection_signs(table: &VarTable) -> Vec<i8> {
    (0..table.dim())
        .map(|idx| match table.kind(idx) {
            VarKind::K(1, _) => -1,
            VarKind::V(1) | VarKind::X(1) => -1,
            _ => 1,
        })
        .collect()
}

/// Exact rotation from a skew matrix via the Cayley transform
/// (I - S)^{-1} (I + S); always lands in SO(n).
pub fn cayley_rotation(s: &RatMat) -> Result<RatMat> {
    if !s.is_skew() {
        return Err(Error::NotSkew(0, 0));
    }
    let n = s.nrows();
    let id = RatMat::identity(n);
    // I - S is invertible for every real skew S (its determinant is a product
    // of factors 1 + lambda^2 >= 1).
    let inv = id.sub(s).inverse().expect("I - S invertible for skew S");
    Ok(inv.mul(&id.add(s)))
}

/// Which basis the structure constants are expanded in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisScale {
    /// The literal matrices E(i,j), B(i), P(i), H.
    Plain,
    /// {E(i,j)/2, B(i), P(i), H}: the basis whose dual coordinates are the
    /// canonical-representative matrix entries. The Lie-Poisson bracket must
    /// use these constants for coordinate polynomials.
    CoordinateDual,
}

/// Structure constants c_{ab}^c of gal(n), expanded from matrix commutators.
#[derive(Debug)]
pub struct StructureConstants {
    n: usize,
    scale: BasisScale,
    labels: Vec<BasisLabel>,
    table: Arc<VarTable>,
    // Key (a, b) with a < b; value: sparse expansion of [Z_a, Z_b].
    brackets: BTreeMap<(u16, u16), Vec<(u16, Rat)>>,
}

impl StructureConstants {
    pub fn new(n: usize) -> Result<Self> {
        Self::build(n, BasisScale::Plain)
    }

    pub fn coordinate_dual(n: usize) -> Result<Self> {
        Self::build(n, BasisScale::CoordinateDual)
    }

    fn build(n: usize, scale: BasisScale) -> Result<Self> {
        let labels = BasisLabel::all(n);
        let table = VarTable::new(n);
        let d = labels.len();
        let mats: Vec<RatMat> = labels
            .iter()
            .map(|&l| {
                let m = basis_matrix(n, l);
                match (scale, l) {
                    (BasisScale::CoordinateDual, BasisLabel::E(_, _)) => {
                        m.scale(&Rat::new(1.into(), 2.into()))
                    }
                    _ => m,
                }
            })
            .collect();
        let mut brackets = BTreeMap::new();
        for a in 0..d {
            for b in a + 1..d {
                let comm = mats[a].mul(&mats[b]).sub(&mats[b].mul(&mats[a]));
                let coeffs = expand_in_basis(&comm, n, scale)?;
                if !coeffs.is_empty() {
                    brackets.insert((a as u16, b as u16), coeffs);
                }
            }
        }
        let sc = StructureConstants { n, scale, labels, table, brackets };
        sc.check_jacobi()?;
        Ok(sc)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> BasisScale {
        self.scale
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn var_table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Sparse expansion of [Z_a, Z_b] for any index pair (antisymmetry built in).
    pub fn bracket(&self, a: usize, b: usize) -> Vec<(usize, Rat)> {
        use std::cmp::Ordering;
        let (key, flip) = match a.cmp(&b) {
            Ordering::Less => ((a as u16, b as u16), false),
            Ordering::Greater => ((b as u16, a as u16), true),
            Ordering::Equal => return Vec::new(),
        };
        match self.brackets.get(&key) {
            None => Vec::new(),
            Some(v) => v
                .iter()
                .map(|(c, r)| (*c as usize, if flip { -r.clone() } else { r.clone() }))
                .collect(),
        }
    }

    /// Iterates over stored pairs (a < b) with their expansions.
    pub fn pairs(&self) -> impl Iterator<Item = ((usize, usize), &[(u16, Rat)])> {
        self.brackets
            .iter()
            .map(|(&(a, b), v)| ((a as usize, b as usize), v.as_slice()))
    }

    fn check_jacobi(&self) -> Result<()> {
        let d = self.dim();
        // [[a,b],c] + [[b,c],a] + [[c,a],b] accumulated densely.
        let mut acc = vec![Rat::zero(); d];
        for a in 0..d {
            for b in a + 1..d {
                for c in b + 1..d {
                    for x in acc.iter_mut() {
                        if !x.is_zero() {
                            *x = Rat::zero();
                        }
                    }
                    self.add_nested(a, b, c, &mut acc);
                    self.add_nested(b, c, a, &mut acc);
                    self.add_nested(c, a, b, &mut acc);
                    if acc.iter().any(|x| !x.is_zero()) {
                        return Err(Error::JacobiViolation(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    /// acc += [[a,b],c]
    fn add_nested(&self, a: usize, b: usize, c: usize, acc: &mut [Rat]) {
        for (m, coeff) in self.bracket(a, b) {
            for (t, inner) in self.bracket(m, c) {
                acc[t] += coeff.clone() * inner;
            }
        }
    }

    /// Lie-Poisson bracket {f, g}(xi) = sum c_{ab}^c xi_c (df/da dg/db - df/db dg/da).
    ///
    /// Meaningful for coordinate polynomials only with `CoordinateDual` scale;
    /// the plain-scale bracket is still the Lie-Poisson bracket of gal(n) but
    /// in coordinates rescaled on the K block.
    pub fn poisson_bracket(&self, f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly> {
        if f.n() != self.n || g.n() != self.n {
            return Err(Error::VarTableMismatch(f.n(), self.n));
        }
        let table = f.table();
        let mut df: Vec<Option<MultiPoly>> = vec![None; self.dim()];
        let mut dg: Vec<Option<MultiPoly>> = vec![None; self.dim()];
        let mut out = MultiPoly::zero(table);
        let pairs: Vec<_> = self.pairs().map(|(ab, v)| (ab, v.to_vec())).collect();
        for ((a, b), coeffs) in pairs {
            let fa = cached_partial(&mut df, f, a)?.clone();
            let fb = cached_partial(&mut df, f, b)?.clone();
            if fa.is_zero() && fb.is_zero() {
                continue;
            }
            let ga = cached_partial(&mut dg, g, a)?.clone();
            let gb = cached_partial(&mut dg, g, b)?.clone();
            let combo = fa.mul(&gb)?.sub(&fb.mul(&ga)?)?;
            if combo.is_zero() {
                continue;
            }
            for (c, coeff) in coeffs {
                let xc = MultiPoly::var(table, c as usize);
                out = out.add(&combo.mul(&xc)?.scale(&coeff))?;
            }
        }
        Ok(out)
    }
}

fn cached_partial<'a>(
    cache: &'a mut [Option<MultiPoly>],
    p: &MultiPoly,
    idx: usize,
) -> Result<&'a MultiPoly> {
    if cache[idx].is_none() {
        cache[idx] = Some(p.partial(idx)?);
    }
    Ok(cache[idx].as_ref().unwrap())
}

/// Expands a matrix known to lie in span(basis) and errors if it does not.
fn expand_in_basis(m: &RatMat, n: usize, scale: BasisScale) -> Result<Vec<(u16, Rat)>> {
    let table = VarTable::new(n);
    let mut coeffs: Vec<(u16, Rat)> = Vec::new();
    let mut push = |idx: usize, c: Rat| {
        if !c.is_zero() {
            coeffs.push((idx as u16, c));
        }
    };
    // Spatial block must be skew for a clean expansion.
    for i in 0..n {
        for j in i + 1..n {
            let c = m[(i, j)].clone();
            if m[(j, i)] != -c.clone() {
                return Err(Error::NotClosed);
            }
            let c = match scale {
                BasisScale::Plain => c,
                BasisScale::CoordinateDual => c * Rat::from_integer(2.into()),
            };
            push(table.k_index(i + 1, j + 1), c);
        }
        if !m[(i, i)].is_zero() {
            return Err(Error::NotClosed);
        }
    }
    for i in 0..n {
        push(table.v_index(i + 1), m[(i, n)].clone());
        push(table.x_index(i + 1), m[(i, n + 1)].clone());
    }
    push(table.t_index(), m[(n, n + 1)].clone());
    coeffs.sort_unstable_by_key(|&(i, _)| i);
    // Reconstruct and compare so nothing outside the span slips through.
    let labels = BasisLabel::all(n);
    let mut rebuilt = RatMat::zeros(n + 2, n + 2);
    for &(idx, ref c) in &coeffs {
        let mut bm = basis_matrix(n, labels[idx as usize]);
        if scale == BasisScale::CoordinateDual {
            if let BasisLabel::E(_, _) = labels[idx as usize] {
                bm = bm.scale(&Rat::new(1.into(), 2.into()));
            }
        }
        rebuilt = rebuilt.add(&bm.scale(c));
    }
    if &rebuilt != m {
        return Err(Error::NotClosed);
    }
    Ok(coeffs)
}

/// Plain-basis structure constants of gal(n).
pub fn structure_constants(n: usize) -> Result<StructureConstants> {
    StructureConstants::new(n)
}

/// Lie-Poisson bracket of two coordinate polynomials on gal(n)^*.
pub fn lie_poisson_bracket(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly> {
    if f.n() != g.n() {
        return Err(Error::VarTableMismatch(f.n(), g.n()));
    }
    StructureConstants::coordinate_dual(f.n())?.poisson_bracket(f, g)
}

// ---------------------------------------------------------------------------
// deterministic sampling of exact group elements and dual vectors
// ---------------------------------------------------------------------------

/// Random rational with numerator in [-20, 20] and denominator in [1, 10].
pub fn random_rat<R: Rng>(rng: &mut R) -> Rat {
    let p: i64 = rng.gen_range(-20..=20);
    let q: i64 = rng.gen_range(1..=10);
    Rat::new(p.into(), q.into())
}

pub fn random_skew<R: Rng>(n: usize, rng: &mut R) -> RatMat {
    let mut s = RatMat::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let r = random_rat(rng);
            s[(j, i)] = -r.clone();
            s[(i, j)] = r;
        }
    }
    s
}

/// Exact random rotation via the Cayley transform of a random skew matrix.
pub fn random_rotation<R: Rng>(n: usize, rng: &mut R) -> RatMat {
    cayley_rotation(&random_skew(n, rng)).expect("random skew matrix is skew")
}

/// Random group element: rotation x (boost, translation, time shift), with a
/// reflection mixed in half the time so both O(n) components get exercised.
pub fn random_group_element<R: Rng>(n: usize, rng: &mut R) -> GroupElement {
    let rho = random_rotation(n, rng);
    let rot = GroupElement::rotation(rho).expect("cayley rotation is orthogonal");
    let v: Vec<Rat> = (0..n).map(|_| random_rat(rng)).collect();
    let x: Vec<Rat> = (0..n).map(|_| random_rat(rng)).collect();
    let tau = GroupElement::boost_translation(&v, &x, random_rat(rng)).expect("valid translation part");
    let mut g = rot.compose(&tau).expect("same n");
    if rng.gen_bool(0.5) {
        g = reflection(n).compose(&g).expect("same n");
    }
    g
}

pub fn random_dual<R: Rng>(n: usize, rng: &mut R) -> DualVector {
    let kstar = random_skew(n, rng);
    let vstar: Vec<Rat> = (0..n).map(|_| random_rat(rng)).collect();
    let xstar: Vec<Rat> = (0..n).map(|_| random_rat(rng)).collect();
    DualVector::new(kstar, vstar, xstar, random_rat(rng)).expect("random dual is well formed")
}
