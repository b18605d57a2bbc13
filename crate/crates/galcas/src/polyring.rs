//! Sparse multivariate polynomials over exact rationals.
//!
//! Variables are fixed per dimension n by `VarTable`: the rotation coordinates
//! K_{i,j} (1 <= i < j <= n, lexicographic), then boosts V_1..V_n, then
//! translations X_1..X_n, then the time coordinate T. Polynomials store a
//! canonical map from monomials to nonzero coefficients, so equality is
//! structural and serialization is byte-deterministic.

use crate::ratmat::{fmt_rat, parse_rat, Rat};
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// What a variable denotes on the dual space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    /// Rotation coordinate K_{i,j}, 1-based i < j.
    K(usize, usize),
    /// Boost coordinate V_i, 1-based.
    V(usize),
    /// Translation coordinate X_i, 1-based.
    X(usize),
    /// Time coordinate T.
    T,
}

/// Ordered variable set for gal(n)^*.
#[derive(Debug)]
pub struct VarTable {
    n: usize,
    kinds: Vec<VarKind>,
    names: Vec<String>,
}

impl VarTable {
    pub fn new(n: usize) -> Arc<VarTable> {
        assert!(n >= 1, "dimension must be at least 1");
        let mut kinds = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                kinds.push(VarKind::K(i, j));
            }
        }
        for i in 1..=n {
            kinds.push(VarKind::V(i));
        }
        for i in 1..=n {
            kinds.push(VarKind::X(i));
        }
        kinds.push(VarKind::T);
        let names = kinds
            .iter()
            .map(|k| match k {
                VarKind::K(i, j) => format!("K_{{{},{}}}", i, j),
                VarKind::V(i) => format!("V_{}", i),
                VarKind::X(i) => format!("X_{}", i),
                VarKind::T => "T".to_string(),
            })
            .collect();
        Arc::new(VarTable { n, kinds, names })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of variables: n(n-1)/2 + 2n + 1.
    pub fn dim(&self) -> usize {
        self.kinds.len()
    }

    pub fn kind(&self, idx: usize) -> VarKind {
        self.kinds[idx]
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn index_of_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    /// Index of K_{i,j} for 1-based i < j.
    pub fn k_index(&self, i: usize, j: usize) -> usize {
        assert!(1 <= i && i < j && j <= self.n);
        // K-block is ordered (1,2),(1,3),...,(1,n),(2,3),...: row i starts after
        // (i-1) rows of lengths n-1, n-2, ...
        let before: usize = (1..i).map(|r| self.n - r).sum();
        before + (j - i - 1)
    }

    pub fn v_index(&self, i: usize) -> usize {
        assert!(1 <= i && i <= self.n);
        self.n * (self.n - 1) / 2 + (i - 1)
    }

    pub fn x_index(&self, i: usize) -> usize {
        assert!(1 <= i && i <= self.n);
        self.n * (self.n - 1) / 2 + self.n + (i - 1)
    }

    pub fn t_index(&self) -> usize {
        self.dim() - 1
    }
}

/// A monomial as a sorted, duplicate-free list of (variable index, exponent > 0).
///
/// The derived lexicographic order on the underlying vector gives the canonical
/// term order used everywhere (maps, display, serialization).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(u16, u16)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(idx: usize) -> Self {
        Monomial(vec![(idx as u16, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(u16, u16)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable();
        let mut out: Vec<(u16, u16)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn pairs(&self) -> &[(u16, u16)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn exponent_of(&self, idx: usize) -> u16 {
        self.0
            .iter()
            .find(|&&(v, _)| v as usize == idx)
            .map_or(0, |&(_, e)| e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => {
                    if va < vb {
                        out.push((va, ea));
                        a.next();
                    } else if vb < va {
                        out.push((vb, eb));
                        b.next();
                    } else {
                        out.push((va, ea + eb));
                        a.next();
                        b.next();
                    }
                }
                (Some(&&p), None) => {
                    out.push(p);
                    a.next();
                }
                (None, Some(&&p)) => {
                    out.push(p);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial(out)
    }

    /// Divides out one power of the variable; None if absent.
    fn without_one(&self, idx: u16) -> Option<Monomial> {
        let pos = self.0.iter().position(|&(v, _)| v == idx)?;
        let mut out = self.0.clone();
        if out[pos].1 == 1 {
            out.remove(pos);
        } else {
            out[pos].1 -= 1;
        }
        Some(Monomial(out))
    }
}

/// Sparse exact polynomial over a fixed variable table.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    table: Arc<VarTable>,
    terms: BTreeMap<Monomial, Rat>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.table.n() == other.table.n() && self.terms == other.terms
    }
}
impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(table: &Arc<VarTable>) -> Self {
        MultiPoly {
            table: Arc::clone(table),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(table: &Arc<VarTable>, c: Rat) -> Self {
        let mut p = MultiPoly::zero(table);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(table: &Arc<VarTable>, idx: usize) -> Self {
        assert!(idx < table.dim(), "variable index out of range");
        let mut p = MultiPoly::zero(table);
        p.terms.insert(Monomial::var(idx), Rat::one());
        p
    }

    pub fn from_terms(table: &Arc<VarTable>, terms: Vec<(Monomial, Rat)>) -> Self {
        let mut p = MultiPoly::zero(table);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn n(&self) -> usize {
        self.table.n()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// True if every term has the same total degree (vacuously true for 0).
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_table(&self, other: &MultiPoly) -> Result<()> {
        if self.table.n() != other.table.n() {
            return Err(Error::VarTableMismatch(self.table.n(), other.table.n()));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.table);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_table(other)?;
        let mut out = MultiPoly::zero(&self.table);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut out = MultiPoly::constant(&self.table, Rat::one());
        for _ in 0..k {
            out = out.mul(self).expect("same table");
        }
        out
    }

    /// Partial derivative with respect to the variable at `idx`.
    pub fn partial(&self, idx: usize) -> Result<MultiPoly> {
        if idx >= self.table.dim() {
            return Err(Error::OutOfRange {
                what: "variable index",
                got: idx.to_string(),
                allowed: "< dim",
            });
        }
        let mut out = MultiPoly::zero(&self.table);
        let v = idx as u16;
        for (m, c) in &self.terms {
            let e = m.exponent_of(idx);
            if e > 0 {
                let lowered = m.without_one(v).expect("exponent positive");
                out.add_term(lowered, c * Rat::from_integer(e.into()));
            }
        }
        Ok(out)
    }

    /// Exact evaluation at a full coordinate vector (length = dim).
    pub fn evaluate(&self, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.table.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.table.dim(),
                got: point.len(),
            });
        }
        // Per-variable power tables avoid repeated bigint exponentiation.
        let mut max_exp = vec![0u16; self.table.dim()];
        for m in self.terms.keys() {
            for &(v, e) in m.pairs() {
                max_exp[v as usize] = max_exp[v as usize].max(e);
            }
        }
        let powers: Vec<Vec<Rat>> = max_exp
            .iter()
            .enumerate()
            .map(|(v, &top)| {
                let mut row = Vec::with_capacity(top as usize + 1);
                row.push(Rat::one());
                for _ in 0..top {
                    row.push(row.last().unwrap() * &point[v]);
                }
                row
            })
            .collect();
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.pairs() {
                t *= &powers[v as usize][e as usize];
            }
            acc += t;
        }
        Ok(acc)
    }

    /// IEEE double evaluation by direct term summation in canonical term order.
    pub fn evaluate_f64(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.table.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.table.dim(),
                got: point.len(),
            });
        }
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = rat_to_f64(c);
            for &(v, e) in m.pairs() {
                t *= point[v as usize].powi(e as i32);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Pullback along the diagonal map x_i -> signs[i] * x_i (signs are +-1).
    pub fn apply_diag_signs(&self, signs: &[i8]) -> Result<MultiPoly> {
        if signs.len() != self.table.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.table.dim(),
                got: signs.len(),
            });
        }
        let mut out = MultiPoly::zero(&self.table);
        for (m, c) in &self.terms {
            let mut flip = false;
            for &(v, e) in m.pairs() {
                if signs[v as usize] < 0 && e % 2 == 1 {
                    flip = !flip;
                }
            }
            let coeff = if flip { -c.clone() } else { c.clone() };
            out.add_term(m.clone(), coeff);
        }
        Ok(out)
    }

    /// JSON value in the interchange format
    /// `{"n": n, "terms": [{"coeff": "p/q", "exps": {"X_1": 2, ...}}, ...]}`.
    ///
    /// Terms appear in canonical order and exponent keys in variable order, so
    /// the encoding of a given polynomial is unique.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = Map::new();
                for &(v, e) in m.pairs() {
                    exps.insert(self.table.name(v as usize).to_string(), json!(e));
                }
                json!({"coeff": fmt_rat(c), "exps": Value::Object(exps)})
            })
            .collect();
        json!({"n": self.table.n(), "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<MultiPoly> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::BadInput("polynomial must be a JSON object".into()))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::BadInput("polynomial needs integer field \"n\"".into()))?
            as usize;
        if n < 1 {
            return Err(Error::BadInput("polynomial field \"n\" must be >= 1".into()));
        }
        let table = VarTable::new(n);
        let mut p = MultiPoly::zero(&table);
        let terms = obj
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::BadInput("polynomial needs array field \"terms\"".into()))?;
        for t in terms {
            let coeff = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::BadInput("term needs string field \"coeff\"".into()))?;
            let c = parse_rat(coeff)?;
            let exps = t
                .get("exps")
                .and_then(Value::as_object)
                .ok_or_else(|| Error::BadInput("term needs object field \"exps\"".into()))?;
            let mut pairs = Vec::with_capacity(exps.len());
            for (name, e) in exps {
                let idx = table
                    .index_of_name(name)
                    .ok_or_else(|| Error::BadInput(format!("unknown variable {:?} for n={}", name, n)))?;
                let e = e
                    .as_u64()
                    .filter(|&e| e > 0 && e <= u16::MAX as u64)
                    .ok_or_else(|| Error::BadInput(format!("bad exponent for {:?}", name)))?;
                pairs.push((idx as u16, e as u16));
            }
            p.add_term(Monomial::from_pairs(pairs), c);
        }
        Ok(p)
    }

    /// LaTeX rendering; variable names are already LaTeX-ready (K_{1,2} etc).
    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff = if abs.is_integer() {
                abs.numer().to_string()
            } else {
                format!("\\frac{{{}}}{{{}}}", abs.numer(), abs.denom())
            };
            let show_coeff = m.pairs().is_empty() || coeff != "1";
            if show_coeff {
                out.push_str(&coeff);
            }
            for (k, &(v, e)) in m.pairs().iter().enumerate() {
                if show_coeff || k > 0 {
                    out.push(' ');
                }
                out.push_str(self.table.name(v as usize));
                if e > 1 {
                    out.push_str(&format!("^{{{}}}", e));
                }
            }
        }
        out
    }
}

fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for MultiPoly {
    /// Plain-text form: `X_1^2 - 2*X_1*V_1 + 5/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let coeff = if abs.is_integer() {
                abs.numer().to_string()
            } else {
                format!("{}/{}", abs.numer(), abs.denom())
            };
            let mut wrote_factor = false;
            if m.pairs().is_empty() || coeff != "1" {
                write!(f, "{}", coeff)?;
                wrote_factor = true;
            }
            for &(v, e) in m.pairs() {
                if wrote_factor {
                    write!(f, "*")?;
                }
                write!(f, "{}", self.table.name(v as usize))?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
                wrote_factor = true;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(p.into(), q.into())
    }

    #[test]
    fn vartable_order_n2() {
        let t = VarTable::new(2);
        assert_eq!(t.dim(), 6);
        let names: Vec<_> = (0..t.dim()).map(|i| t.name(i).to_string()).collect();
        assert_eq!(names, ["K_{1,2}", "V_1", "V_2", "X_1", "X_2", "T"]);
        assert_eq!(t.k_index(1, 2), 0);
        assert_eq!(t.v_index(1), 1);
        assert_eq!(t.x_index(2), 4);
        assert_eq!(t.t_index(), 5);
    }

    #[test]
    fn vartable_order_n3_k_block_lexicographic() {
        let t = VarTable::new(3);
        assert_eq!(t.dim(), 3 + 6 + 1);
        assert_eq!(t.name(0), "K_{1,2}");
        assert_eq!(t.name(1), "K_{1,3}");
        assert_eq!(t.name(2), "K_{2,3}");
        assert_eq!(t.k_index(2, 3), 2);
        assert_eq!(t.name(t.v_index(1)), "V_1");
        assert_eq!(t.name(t.x_index(3)), "X_3");
        assert_eq!(t.name(t.t_index()), "T");
    }

    #[test]
    fn vartable_dim_formula() {
        for n in 1..=8 {
            let t = VarTable::new(n);
            assert_eq!(t.dim(), n * (n - 1) / 2 + 2 * n + 1);
        }
    }

    fn q1_n2() -> MultiPoly {
        let t = VarTable::new(2);
        let x1 = MultiPoly::var(&t, t.x_index(1));
        let x2 = MultiPoly::var(&t, t.x_index(2));
        x1.pow(2).add(&x2.pow(2)).unwrap()
    }

    #[test]
    fn evaluate_sum_of_squares() {
        let t = VarTable::new(2);
        let p = q1_n2();
        let mut point = vec![Rat::zero(); t.dim()];
        point[t.x_index(1)] = r(3, 1);
        point[t.x_index(2)] = r(4, 1);
        assert_eq!(p.evaluate(&point).unwrap(), r(25, 1));
    }

    #[test]
    fn evaluate_rational_point() {
        let t = VarTable::new(2);
        let p = MultiPoly::var(&t, t.x_index(1))
            .mul(&MultiPoly::var(&t, t.v_index(1)))
            .unwrap();
        let mut point = vec![Rat::zero(); t.dim()];
        point[t.x_index(1)] = r(1, 2);
        point[t.v_index(1)] = r(2, 3);
        assert_eq!(p.evaluate(&point).unwrap(), r(1, 3));
    }

    #[test]
    fn evaluate_f64_matches_exact_on_integers() {
        let p = q1_n2();
        let t = p.table().clone();
        let mut point = vec![0.0; t.dim()];
        point[t.x_index(1)] = 3.0;
        point[t.x_index(2)] = 4.0;
        assert_eq!(p.evaluate_f64(&point).unwrap(), 25.0);
    }

    #[test]
    fn partial_derivative() {
        let t = VarTable::new(2);
        let x1 = MultiPoly::var(&t, t.x_index(1));
        let v2 = MultiPoly::var(&t, t.v_index(2));
        let p = x1.pow(2).mul(&v2).unwrap();
        let d = p.partial(t.x_index(1)).unwrap();
        let expect = x1.mul(&v2).unwrap().scale(&r(2, 1));
        assert_eq!(d, expect);
        // d/dT of a T-free polynomial is zero
        assert!(p.partial(t.t_index()).unwrap().is_zero());
    }

    #[test]
    fn canceling_terms_are_dropped() {
        let t = VarTable::new(1);
        let x = MultiPoly::var(&t, t.x_index(1));
        let z = x.sub(&x).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
    }

    #[test]
    fn table_mismatch_is_an_error() {
        let a = MultiPoly::var(&VarTable::new(1), 0);
        let b = MultiPoly::var(&VarTable::new(2), 0);
        assert!(matches!(a.add(&b), Err(Error::VarTableMismatch(1, 2))));
    }

    #[test]
    fn evaluate_length_mismatch_is_an_error() {
        let p = q1_n2();
        assert!(p.evaluate(&vec![Rat::zero(); 3]).is_err());
    }

    #[test]
    fn json_roundtrip_is_byte_identical() {
        let t = VarTable::new(2);
        let p = q1_n2()
            .add(
                &MultiPoly::var(&t, t.k_index(1, 2))
                    .mul(&MultiPoly::var(&t, t.v_index(2)))
                    .unwrap()
                    .scale(&r(-7, 3)),
            )
            .unwrap();
        let s1 = serde_json::to_string(&p.to_json()).unwrap();
        let q = MultiPoly::from_json(&serde_json::from_str(&s1).unwrap()).unwrap();
        let s2 = serde_json::to_string(&q.to_json()).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(p, q);
    }

    #[test]
    fn json_shape_matches_interchange_format() {
        let t = VarTable::new(2);
        let p = MultiPoly::var(&t, t.x_index(1)).pow(2);
        let v = p.to_json();
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"n":2,"terms":[{"coeff":"1/1","exps":{"X_1":2}}]}"#
        );
    }

    #[test]
    fn display_and_latex() {
        let t = VarTable::new(2);
        let p = q1_n2();
        assert_eq!(p.to_string(), "X_1^2 + X_2^2");
        assert_eq!(p.to_latex(), "X_1^{2} + X_2^{2}");
        let q = MultiPoly::var(&t, t.k_index(1, 2)).scale(&r(-3, 2));
        assert_eq!(q.to_string(), "-3/2*K_{1,2}");
        assert_eq!(q.to_latex(), "-\\frac{3}{2} K_{1,2}");
        assert_eq!(MultiPoly::zero(&t).to_string(), "0");
    }

    #[test]
    fn diag_signs_pullback() {
        let t = VarTable::new(2);
        let mut signs = vec![1i8; t.dim()];
        signs[t.x_index(1)] = -1;
        let x1 = MultiPoly::var(&t, t.x_index(1));
        assert_eq!(x1.apply_diag_signs(&signs).unwrap(), x1.neg());
        assert_eq!(x1.pow(2).apply_diag_signs(&signs).unwrap(), x1.pow(2));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        /// Random small polynomial over up to 5 of the n=2 variables.
        fn arb_poly() -> impl Strategy<Value = MultiPoly> {
            let term = (
                prop::collection::vec((0u16..5, 1u16..3), 0..3),
                -9i64..10,
                1i64..5,
            );
            prop::collection::vec(term, 0..6).prop_map(|terms| {
                let t = VarTable::new(2);
                let mut p = MultiPoly::zero(&t);
                for (pairs, num, den) in terms {
                    p.add_term(Monomial::from_pairs(pairs), Rat::new(num.into(), den.into()));
                }
                p
            })
        }

        fn arb_point() -> impl Strategy<Value = Vec<Rat>> {
            prop::collection::vec((-6i64..7, 1i64..4), 6)
                .prop_map(|v| v.into_iter().map(|(p, q)| Rat::new(p.into(), q.into())).collect())
        }

        proptest! {
            #[test]
            fn add_commutes(a in arb_poly(), b in arb_poly()) {
                prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            }

            #[test]
            fn mul_commutes(a in arb_poly(), b in arb_poly()) {
                prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            }

            #[test]
            fn mul_associates(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
                let left = a.mul(&b).unwrap().mul(&c).unwrap();
                let right = a.mul(&b.mul(&c).unwrap()).unwrap();
                prop_assert_eq!(left, right);
            }

            #[test]
            fn mul_distributes(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
                let left = a.mul(&b.add(&c).unwrap()).unwrap();
                let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
                prop_assert_eq!(left, right);
            }

            #[test]
            fn evaluation_is_a_ring_morphism(a in arb_poly(), b in arb_poly(), pt in arb_point()) {
                let sum = a.add(&b).unwrap().evaluate(&pt).unwrap();
                prop_assert_eq!(sum, a.evaluate(&pt).unwrap() + b.evaluate(&pt).unwrap());
                let prod = a.mul(&b).unwrap().evaluate(&pt).unwrap();
                prop_assert_eq!(prod, a.evaluate(&pt).unwrap() * b.evaluate(&pt).unwrap());
            }

            #[test]
            fn json_roundtrip(a in arb_poly()) {
                let s1 = serde_json::to_string(&a.to_json()).unwrap();
                let back = MultiPoly::from_json(&serde_json::from_str(&s1).unwrap()).unwrap();
                prop_assert_eq!(&back, &a);
                let s2 = serde_json::to_string(&back.to_json()).unwrap();
                prop_assert_eq!(s1, s2);
            }

            #[test]
            fn partial_satisfies_leibniz(a in arb_poly(), b in arb_poly()) {
                let idx = 3usize; // X_1
                let left = a.mul(&b).unwrap().partial(idx).unwrap();
                let right = a.partial(idx).unwrap().mul(&b).unwrap()
                    .add(&a.mul(&b.partial(idx).unwrap()).unwrap()).unwrap();
                prop_assert_eq!(left, right);
            }
        }
    }
}
