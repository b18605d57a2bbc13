//! The universal enveloping algebra of gal(n) in its PBW basis.
//!
//! Elements are rational combinations of normal-ordered monomials
//! Z_1^{e_1} ... Z_d^{e_d} in the fixed basis order shared with `VarTable`.
//! Products are computed by bubble rewriting: an out-of-order adjacent pair
//! Z_a Z_b (a > b) becomes Z_b Z_a + [Z_a, Z_b], and the correction term has
//! lower degree, so the rewriting terminates. Words repeat enormously during
//! symmetrization, so both the rewriter and the symmetrization map memoize.

use crate::galilean::{BasisLabel, StructureConstants};
use crate::polyring::{Monomial, MultiPoly, VarTable};
use crate::ratmat::Rat;
use crate::{Error, Result};
use dashmap::DashMap;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// An element of U(gal(n)) written in the PBW basis. The key monomial's
/// exponent vector is read as the normal-ordered word.
#[derive(Clone, Debug)]
pub struct UEAElement {
    table: Arc<VarTable>,
    terms: BTreeMap<Monomial, Rat>,
}

impl PartialEq for UEAElement {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.terms == other.terms
    }
}

impl Eq for UEAElement {}

impl UEAElement {
    pub fn zero(table: &Arc<VarTable>) -> Self {
        UEAElement {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(table: &Arc<VarTable>) -> Self {
        let mut u = UEAElement::zero(table);
        u.add_term(Monomial::one(), Rat::one());
        u
    }

    /// The generator Z_idx as a degree-1 element.
    pub fn letter(table: &Arc<VarTable>, idx: usize) -> Self {
        let mut u = UEAElement::zero(table);
        u.add_term(Monomial::var(idx), Rat::one());
        u
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

    /// Maximum total degree, or None for the zero element.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
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

    pub fn add(&self, other: &UEAElement) -> Result<UEAElement> {
        if self.n() != other.n() {
            return Err(Error::VarTableMismatch(self.n(), other.n()));
        }
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &UEAElement) -> Result<UEAElement> {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> UEAElement {
        if c.is_zero() {
            return UEAElement::zero(&self.table);
        }
        UEAElement {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, r)| (m.clone(), r * c))
                .collect(),
        }
    }
}

impl fmt::Display for UEAElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let labels = BasisLabel::all(self.n());
        let mut first = true;
        for (m, c) in &self.terms {
            let word: Vec<String> = m
                .pairs()
                .iter()
                .map(|&(idx, e)| {
                    let name = labels[idx as usize].display();
                    if e == 1 {
                        name
                    } else {
                        format!("{}^{}", name, e)
                    }
                })
                .collect();
            let body = if word.is_empty() {
                "1".to_string()
            } else {
                word.join("*")
            };
            if first {
                first = false;
                if c.is_one() {
                    write!(f, "{}", body)?;
                } else {
                    write!(f, "{}*{}", c, body)?;
                }
            } else if c.is_one() {
                write!(f, " + {}", body)?;
            } else if (-c.clone()).is_one() {
                write!(f, " - {}", body)?;
            } else if c.numer().sign() == num_bigint::Sign::Minus {
                write!(f, " - {}*{}", -c.clone(), body)?;
            } else {
                write!(f, " + {}*{}", c, body)?;
            }
        }
        Ok(())
    }
}

/// The enveloping algebra with its rewriting caches. One instance per n;
/// the caches are safe to share across threads.
pub struct Envelope {
    constants: StructureConstants,
    table: Arc<VarTable>,
    order_memo: DashMap<Vec<u16>, Arc<UEAElement>>,
    sym_memo: DashMap<Monomial, Arc<UEAElement>>,
}

impl Envelope {
    pub fn new(n: usize) -> Result<Envelope> {
        let constants = StructureConstants::new(n)?;
        let table = constants.var_table().clone();
        Ok(Envelope {
            constants,
            table,
            order_memo: DashMap::new(),
            sym_memo: DashMap::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.table.n()
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    /// Normal-orders an arbitrary word of basis letters.
    pub fn normal_order(&self, word: &[usize]) -> Result<UEAElement> {
        let dim = self.table.dim();
        let mut w = Vec::with_capacity(word.len());
        for &l in word {
            if l >= dim {
                return Err(Error::OutOfRange {
                    what: "basis letter",
                    got: l.to_string(),
                    allowed: "0..dim-1",
                });
            }
            w.push(l as u16);
        }
        Ok((*self.order_word(&w)).clone())
    }

    fn order_word(&self, word: &[u16]) -> Arc<UEAElement> {
        // Already sorted words are their own normal form; skip the cache.
        if word.windows(2).all(|p| p[0] <= p[1]) {
            let mut u = UEAElement::zero(&self.table);
            u.add_term(word_to_monomial(word), Rat::one());
            return Arc::new(u);
        }
        if let Some(hit) = self.order_memo.get(word) {
            return hit.clone();
        }
        // First descent: rewrite Z_a Z_b = Z_b Z_a + [Z_a, Z_b].
        let i = word
            .windows(2)
            .position(|p| p[0] > p[1])
            .expect("unsorted word has a descent");
        let (a, b) = (word[i], word[i + 1]);
        let mut swapped = word.to_vec();
        swapped.swap(i, i + 1);
        let mut acc = (*self.order_word(&swapped)).clone();
        for (c, coeff) in self.constants.bracket(a as usize, b as usize) {
            let mut shorter = Vec::with_capacity(word.len() - 1);
            shorter.extend_from_slice(&word[..i]);
            shorter.push(c as u16);
            shorter.extend_from_slice(&word[i + 2..]);
            let sub = self.order_word(&shorter);
            for (m, r) in sub.terms() {
                acc.add_term(m.clone(), r * &coeff);
            }
        }
        let out = Arc::new(acc);
        self.order_memo.insert(word.to_vec(), out.clone());
        out
    }

    pub fn multiply(&self, a: &UEAElement, b: &UEAElement) -> Result<UEAElement> {
        if a.n() != self.n() || b.n() != self.n() {
            return Err(Error::VarTableMismatch(a.n(), b.n()));
        }
        let mut out = UEAElement::zero(&self.table);
        for (ma, ca) in a.terms() {
            let wa = monomial_to_word(ma);
            for (mb, cb) in b.terms() {
                let mut word = wa.clone();
                word.extend(monomial_to_word(mb));
                let ordered = self.order_word(&word);
                let c = ca * cb;
                for (m, r) in ordered.terms() {
                    out.add_term(m.clone(), r * &c);
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, a: &UEAElement, b: &UEAElement) -> Result<UEAElement> {
        self.multiply(a, b)?.sub(&self.multiply(b, a)?)
    }

    /// Symmetrization: a monomial maps to the average of all distinct
    /// arrangements of its letters, each normal-ordered; extended linearly.
    ///
    /// Computed by the first-letter recursion
    /// lambda(m) = (1/deg m) * sum_z mult_z(m) * Z_z * lambda(m / z),
    /// which equals the arrangement average: grouping the arrangements of m
    /// by their first letter z gives mult_z(m)/deg(m) of them, ordered as z
    /// times an arrangement of m/z.
    pub fn symmetrize(&self, p: &MultiPoly) -> Result<UEAElement> {
        if p.n() != self.n() {
            return Err(Error::VarTableMismatch(p.n(), self.n()));
        }
        let mut out = UEAElement::zero(&self.table);
        for (m, c) in p.terms() {
            let sym = self.sym_monomial(m);
            for (w, r) in sym.terms() {
                out.add_term(w.clone(), r * c);
            }
        }
        Ok(out)
    }

    fn sym_monomial(&self, m: &Monomial) -> Arc<UEAElement> {
        let deg = m.degree();
        if deg <= 1 {
            let mut u = UEAElement::zero(&self.table);
            u.add_term(m.clone(), Rat::one());
            return Arc::new(u);
        }
        if let Some(hit) = self.sym_memo.get(m) {
            return hit.clone();
        }
        let mut acc = UEAElement::zero(&self.table);
        for &(z, e) in m.pairs() {
            let rest = divide_once(m, z);
            let sub = self.sym_monomial(&rest);
            // Left-multiply by the letter z and weight by its multiplicity.
            let mult = Rat::from_integer((e as i64).into());
            for (w, r) in sub.terms() {
                let mut word = vec![z];
                word.extend(monomial_to_word(w));
                let ordered = self.order_word(&word);
                let c = r * &mult;
                for (om, or) in ordered.terms() {
                    acc.add_term(om.clone(), or * &c);
                }
            }
        }
        let out = Arc::new(acc.scale(&Rat::new(1.into(), (deg as i64).into())));
        self.sym_memo.insert(m.clone(), out.clone());
        out
    }

    /// True iff u commutes with every basis letter; on failure also returns
    /// the first offending letter and the nonzero commutator.
    pub fn is_central(&self, u: &UEAElement) -> Result<(bool, Option<(usize, UEAElement)>)> {
        if u.n() != self.n() {
            return Err(Error::VarTableMismatch(u.n(), self.n()));
        }
        for z in 0..self.table.dim() {
            let lz = UEAElement::letter(&self.table, z);
            let comm = self.commutator(u, &lz)?;
            if !comm.is_zero() {
                return Ok((false, Some((z, comm))));
            }
        }
        Ok((true, None))
    }

    /// Checks deg(lambda(pq) - lambda(p) lambda(q)) < deg p + deg q, the
    /// filtration drop of the symmetrization defect (vacuously true when the
    /// defect is zero).
    pub fn degree_drop_check(&self, p: &MultiPoly, q: &MultiPoly) -> Result<bool> {
        let pq = p.mul(q)?;
        let diff = self.symmetrize(&pq)?.sub(&self.multiply(
            &self.symmetrize(p)?,
            &self.symmetrize(q)?,
        )?)?;
        let (dp, dq) = match (p.degree(), q.degree()) {
            (Some(a), Some(b)) => (a, b),
            // A zero factor makes both sides zero.
            _ => return Ok(diff.is_zero()),
        };
        Ok(match diff.degree() {
            None => true,
            Some(d) => d < dp + dq,
        })
    }
}

fn word_to_monomial(word: &[u16]) -> Monomial {
    Monomial::from_pairs(word.iter().map(|&l| (l, 1)).collect())
}

fn monomial_to_word(m: &Monomial) -> Vec<u16> {
    let mut w = Vec::with_capacity(m.degree() as usize);
    for &(idx, e) in m.pairs() {
        for _ in 0..e {
            w.push(idx);
        }
    }
    w
}

fn divide_once(m: &Monomial, z: u16) -> Monomial {
    let pairs: Vec<(u16, u16)> = m
        .pairs()
        .iter()
        .filter_map(|&(idx, e)| {
            if idx == z {
                if e > 1 {
                    Some((idx, e - 1))
                } else {
                    None
                }
            } else {
                Some((idx, e))
            }
        })
        .collect();
    Monomial::from_pairs(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(p.into(), q.into())
    }

    fn elem(table: &Arc<VarTable>, terms: Vec<(Vec<(u16, u16)>, Rat)>) -> UEAElement {
        let mut u = UEAElement::zero(table);
        for (pairs, c) in terms {
            u.add_term(Monomial::from_pairs(pairs), c);
        }
        u
    }

    #[test]
    fn empty_word_is_the_unit() {
        let env = Envelope::new(1).unwrap();
        assert_eq!(env.normal_order(&[]).unwrap(), UEAElement::unit(env.table()));
    }

    #[test]
    fn normal_order_applies_bracket_corrections() {
        // In gal(1) the letters are B_1=0, P_1=1, H=2.
        let env = Envelope::new(1).unwrap();
        let t = env.table().clone();
        // H * B_1 = B_1 H - P_1 since [B_1, H] = P_1.
        let got = env.normal_order(&[2, 0]).unwrap();
        let expect = elem(&t, vec![
            (vec![(0, 1), (2, 1)], r(1, 1)),
            (vec![(1, 1)], r(-1, 1)),
        ]);
        assert_eq!(got, expect);
        // P_1 * B_1 needs only the swap: [B_1, P_1] = 0.
        let got = env.normal_order(&[1, 0]).unwrap();
        let expect = elem(&t, vec![(vec![(0, 1), (1, 1)], r(1, 1))]);
        assert_eq!(got, expect);
    }

    #[test]
    fn normal_order_rejects_bad_letters() {
        let env = Envelope::new(1).unwrap();
        assert!(env.normal_order(&[3]).is_err());
    }

    #[test]
    fn commutator_of_boost_and_time_shift() {
        let env = Envelope::new(1).unwrap();
        let t = env.table().clone();
        let b1 = UEAElement::letter(&t, 0);
        let h = UEAElement::letter(&t, 2);
        let got = env.commutator(&b1, &h).unwrap();
        assert_eq!(got, UEAElement::letter(&t, 1));
        assert!(env.commutator(&b1, &b1).unwrap().is_zero());
    }

    #[test]
    fn unit_is_neutral_for_multiplication() {
        let env = Envelope::new(2).unwrap();
        let t = env.table().clone();
        let a = elem(&t, vec![
            (vec![(0, 2), (3, 1)], r(3, 2)),
            (vec![(5, 1)], r(-1, 3)),
        ]);
        let one = UEAElement::unit(&t);
        assert_eq!(env.multiply(&one, &a).unwrap(), a);
        assert_eq!(env.multiply(&a, &one).unwrap(), a);
    }

    /// Straightens a word by randomly chosen admissible swaps, with no
    /// memoization: an independent oracle for confluence.
    fn straighten_randomly(
        env: &Envelope,
        word: &[u16],
        coeff: &Rat,
        rng: &mut ChaCha8Rng,
        out: &mut UEAElement,
    ) {
        let descents: Vec<usize> = word
            .windows(2)
            .enumerate()
            .filter_map(|(i, p)| if p[0] > p[1] { Some(i) } else { None })
            .collect();
        if descents.is_empty() {
            out.add_term(word_to_monomial(word), coeff.clone());
            return;
        }
        let i = descents[rng.gen_range(0..descents.len())];
        let mut swapped = word.to_vec();
        swapped.swap(i, i + 1);
        straighten_randomly(env, &swapped, coeff, rng, out);
        for (c, k) in env.constants.bracket(word[i] as usize, word[i + 1] as usize) {
            let mut shorter = word[..i].to_vec();
            shorter.push(c as u16);
            shorter.extend_from_slice(&word[i + 2..]);
            straighten_randomly(env, &shorter, &(coeff * &k), rng, out);
        }
    }

    #[test]
    fn normal_order_is_confluent_under_random_swap_choices() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for n in 1..=3 {
            let env = Envelope::new(n).unwrap();
            let dim = env.table().dim();
            for _ in 0..10 {
                let len = rng.gen_range(2..=5);
                let word: Vec<u16> = (0..len).map(|_| rng.gen_range(0..dim) as u16).collect();
                let fast = env
                    .normal_order(&word.iter().map(|&l| l as usize).collect::<Vec<_>>())
                    .unwrap();
                let mut slow = UEAElement::zero(env.table());
                straighten_randomly(&env, &word, &Rat::one(), &mut rng, &mut slow);
                assert_eq!(fast, slow, "word {:?}", word);
            }
        }
    }

    #[test]
    fn multiplication_is_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let env = Envelope::new(2).unwrap();
        let t = env.table().clone();
        let dim = t.dim();
        let rand_elem = |rng: &mut ChaCha8Rng| {
            let mut u = UEAElement::zero(&t);
            for _ in 0..3 {
                let len = rng.gen_range(0..=2);
                let pairs: Vec<(u16, u16)> =
                    (0..len).map(|_| (rng.gen_range(0..dim) as u16, 1)).collect();
                u.add_term(
                    Monomial::from_pairs(pairs),
                    r(rng.gen_range(-3..=3), rng.gen_range(1..=2)),
                );
            }
            u
        };
        for _ in 0..5 {
            let a = rand_elem(&mut rng);
            let b = rand_elem(&mut rng);
            let c = rand_elem(&mut rng);
            let left = env.multiply(&env.multiply(&a, &b).unwrap(), &c).unwrap();
            let right = env.multiply(&a, &env.multiply(&b, &c).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn symmetrize_fixes_letters_and_squares() {
        let env = Envelope::new(1).unwrap();
        let t = env.table().clone();
        // lambda(X_1) = P_1.
        let x1 = MultiPoly::var(&t, 1);
        assert_eq!(env.symmetrize(&x1).unwrap(), UEAElement::letter(&t, 1));
        // lambda(X_1^2) = P_1^2.
        let sq = x1.mul(&x1).unwrap();
        assert_eq!(
            env.symmetrize(&sq).unwrap(),
            elem(&t, vec![(vec![(1, 2)], r(1, 1))])
        );
    }

    #[test]
    fn symmetrize_averages_mixed_products() {
        let env = Envelope::new(1).unwrap();
        let t = env.table().clone();
        // lambda(V_1 X_1) = (B_1 P_1 + P_1 B_1)/2 = B_1 P_1 since [B,P] = 0.
        let p = MultiPoly::var(&t, 0).mul(&MultiPoly::var(&t, 1)).unwrap();
        assert_eq!(
            env.symmetrize(&p).unwrap(),
            elem(&t, vec![(vec![(0, 1), (1, 1)], r(1, 1))])
        );
        // lambda(V_1 T) = (B_1 H + H B_1)/2 = B_1 H - P_1/2.
        let p = MultiPoly::var(&t, 0).mul(&MultiPoly::var(&t, 2)).unwrap();
        assert_eq!(
            env.symmetrize(&p).unwrap(),
            elem(&t, vec![
                (vec![(0, 1), (2, 1)], r(1, 1)),
                (vec![(1, 1)], r(-1, 2)),
            ])
        );
    }

    /// Brute-force arrangement enumeration: the definitional oracle.
    fn symmetrize_by_enumeration(env: &Envelope, m: &Monomial) -> UEAElement {
        fn arrangements(word: &mut Vec<u16>, remaining: &mut BTreeMap<u16, u16>, out: &mut Vec<Vec<u16>>) {
            if remaining.values().all(|&e| e == 0) {
                out.push(word.clone());
                return;
            }
            let letters: Vec<u16> = remaining
                .iter()
                .filter_map(|(&l, &e)| if e > 0 { Some(l) } else { None })
                .collect();
            for l in letters {
                *remaining.get_mut(&l).unwrap() -= 1;
                word.push(l);
                arrangements(word, remaining, out);
                word.pop();
                *remaining.get_mut(&l).unwrap() += 1;
            }
        }
        let mut remaining: BTreeMap<u16, u16> = m.pairs().iter().copied().collect();
        let mut all = Vec::new();
        arrangements(&mut Vec::new(), &mut remaining, &mut all);
        let count = all.len() as i64;
        let mut acc = UEAElement::zero(env.table());
        for w in all {
            let ordered = env
                .normal_order(&w.iter().map(|&l| l as usize).collect::<Vec<_>>())
                .unwrap();
            for (om, oc) in ordered.terms() {
                acc.add_term(om.clone(), oc.clone());
            }
        }
        acc.scale(&Rat::new(1.into(), count.into()))
    }

    #[test]
    fn symmetrize_matches_arrangement_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let env = Envelope::new(2).unwrap();
        let dim = env.table().dim();
        for _ in 0..8 {
            let deg = rng.gen_range(2..=4);
            let word: Vec<u16> = (0..deg).map(|_| rng.gen_range(0..dim) as u16).collect();
            let m = Monomial::from_pairs(word.iter().map(|&l| (l, 1)).collect());
            let mut p = MultiPoly::zero(env.table());
            p.add_term(m.clone(), Rat::one());
            let fast = env.symmetrize(&p).unwrap();
            let slow = symmetrize_by_enumeration(&env, &m);
            assert_eq!(fast, slow, "monomial {:?}", m);
        }
    }

    #[test]
    fn symmetrize_preserves_degree() {
        let env = Envelope::new(2).unwrap();
        let t = env.table().clone();
        let q2 = crate::invariants::q2(&t);
        let lam = env.symmetrize(&q2).unwrap();
        assert_eq!(lam.degree(), Some(4));
    }

    #[test]
    fn centrality_of_symmetrized_generators_small() {
        for n in 1..=2 {
            let env = Envelope::new(n).unwrap();
            for q in crate::invariants::generator_set(env.table()) {
                let lam = env.symmetrize(&q).unwrap();
                let (central, witness) = env.is_central(&lam).unwrap();
                assert!(central, "n={} witness {:?}", n, witness.map(|(z, c)| (z, c.to_string())));
            }
        }
    }

    #[test]
    fn boost_is_not_central_with_witness() {
        let env = Envelope::new(1).unwrap();
        let t = env.table().clone();
        let b1 = UEAElement::letter(&t, 0);
        let (central, witness) = env.is_central(&b1).unwrap();
        assert!(!central);
        let (z, residue) = witness.unwrap();
        // The offending letter is H, and [B_1, H] = P_1.
        assert_eq!(z, t.t_index());
        assert_eq!(residue, UEAElement::letter(&t, 1));
        // The unit is central.
        assert!(env.is_central(&UEAElement::unit(&t)).unwrap().0);
    }

    #[test]
    fn degree_drop_holds_on_small_examples() {
        let env = Envelope::new(1).unwrap();
        let t = env.table().clone();
        let x1 = MultiPoly::var(&t, 1);
        // lambda(X_1^2) - lambda(X_1)^2 = 0.
        assert!(env.degree_drop_check(&x1, &x1).unwrap());
        let diff = env
            .symmetrize(&x1.mul(&x1).unwrap())
            .unwrap()
            .sub(
                &env.multiply(
                    &env.symmetrize(&x1).unwrap(),
                    &env.symmetrize(&x1).unwrap(),
                )
                .unwrap(),
            )
            .unwrap();
        assert!(diff.is_zero());
        // lambda(V_1 T) - lambda(V_1) lambda(T) = -P_1/2: degree 1 < 2.
        let v1 = MultiPoly::var(&t, 0);
        let tt = MultiPoly::var(&t, 2);
        assert!(env.degree_drop_check(&v1, &tt).unwrap());
        let diff = env
            .symmetrize(&v1.mul(&tt).unwrap())
            .unwrap()
            .sub(
                &env.multiply(&env.symmetrize(&v1).unwrap(), &env.symmetrize(&tt).unwrap())
                    .unwrap(),
            )
            .unwrap();
        assert_eq!(diff, elem(&t, vec![(vec![(1, 1)], r(-1, 2))]));
    }

    #[test]
    fn display_uses_basis_labels() {
        let env = Envelope::new(1).unwrap();
        let t = env.table().clone();
        let u = elem(&t, vec![
            (vec![(0, 1), (2, 1)], r(1, 1)),
            (vec![(1, 1)], r(-1, 2)),
        ]);
        assert_eq!(u.to_string(), "B_1*H - 1/2*P_1");
    }
}
