//! Buchberger's algorithm over `F_p` with the Gebauer–Möller pair criteria
//! (product and chain) and the normal selection strategy.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ring::{Monomial, Polynomial, Ring};

/// Normal form of `f` modulo monic `reducers`, reducing every term.
///
/// Among divisors of a term, the reducer with the smallest index wins.
pub fn normal_form(f: &Polynomial, reducers: &[&Polynomial]) -> Polynomial {
    let ring = f.ring().clone();
    let p = ring.p();
    let mut work = f.clone();
    let mut remainder: Vec<(Monomial, u32)> = Vec::new();
    let mut offset = 0;
    while let Some(&(m, c)) = work.terms().get(offset) {
        let divisor = reducers
            .iter()
            .find(|g| g.leading_monomial().is_some_and(|lm| lm.divides(&m)));
        match divisor {
            Some(g) => {
                let lm = g.leading_monomial().unwrap();
                let rest = Polynomial::from_sorted_terms(&ring, work.terms()[offset..].to_vec());
                work = rest.add_scaled(p - c, &lm.quotient_of(&m), g);
                offset = 0;
            }
            None => {
                remainder.push((m, c));
                offset += 1;
            }
        }
    }
    Polynomial::from_sorted_terms(&ring, remainder)
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct State<'b> {
    ring: Ring,
    polys: Vec<Polynomial>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    processed: usize,
    budget: &'b Budget,
}

impl State<'_> {
    fn lm(&self, i: usize) -> Monomial {
        self.polys[i].leading_monomial().expect("nonzero basis element")
    }

    fn reducers(&self) -> Vec<&Polynomial> {
        self.polys
            .iter()
            .zip(self.active.iter())
            .filter(|(_, a)| **a)
            .map(|(p, _)| p)
            .collect()
    }

    /// Gebauer–Möller update after adding `h` to the basis.
    fn insert(&mut self, h: Polynomial) -> Result<()> {
        let deg = h.degree().unwrap_or(0);
        if deg > self.budget.max_degree {
            return Err(Error::Budget(format!(
                "Gröbner basis element of degree {deg} exceeds the degree limit {}",
                self.budget.max_degree
            )));
        }
        let hi = self.polys.len();
        let lh = h.leading_monomial().unwrap();
        self.polys.push(h);
        self.active.push(true);

        let mut candidates: Vec<Pair> = (0..hi)
            .filter(|&g| self.active[g])
            .map(|g| Pair { i: g, j: hi, lcm: self.lm(g).lcm(&lh) })
            .collect();
        let mut kept: Vec<Pair> = Vec::new();
        while let Some(pair) = candidates.pop() {
            let coprime = self.lm(pair.i).is_coprime(&lh);
            let dominated = candidates
                .iter()
                .chain(kept.iter())
                .any(|other| other.lcm.divides(&pair.lcm));
            if coprime || !dominated {
                kept.push(pair);
            }
        }
        kept.retain(|pair| !self.lm(pair.i).is_coprime(&lh));

        let old = std::mem::take(&mut self.pairs);
        self.pairs = old
            .into_iter()
            .filter(|pair| {
                let li = self.lm(pair.i);
                let lj = self.lm(pair.j);
                !(lh.divides(&pair.lcm) && li.lcm(&lh) != pair.lcm && lj.lcm(&lh) != pair.lcm)
            })
            .collect();
        self.pairs.extend(kept);

        for g in 0..hi {
            if self.active[g] && lh.divides(&self.lm(g)) {
                self.active[g] = false;
            }
        }
        Ok(())
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let idx = (0..self.pairs.len()).min_by(|&a, &b| {
            let (pa, pb) = (&self.pairs[a], &self.pairs[b]);
            pa.lcm
                .degree()
                .cmp(&pb.lcm.degree())
                .then(pa.lcm.cmp(&pb.lcm))
                .then((pa.i, pa.j).cmp(&(pb.i, pb.j)))
        })?;
        Some(self.pairs.swap_remove(idx))
    }

    fn s_polynomial(&self, pair: &Pair) -> Polynomial {
        let (f, g) = (&self.polys[pair.i], &self.polys[pair.j]);
        let uf = self.lm(pair.i).quotient_of(&pair.lcm);
        let ug = self.lm(pair.j).quotient_of(&pair.lcm);
        // both monic
        f.mul_monomial(&uf).add_scaled(self.ring.p() - 1, &ug, g)
    }
}

/// Reduced grevlex Gröbner basis, monic, sorted by descending leading monomial.
pub fn reduced_basis(ring: &Ring, generators: &[Polynomial], budget: &Budget) -> Result<Vec<Polynomial>> {
    let mut gens: Vec<Polynomial> = generators.iter().filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
    if gens.iter().any(|g| g.is_constant()) {
        return Ok(vec![Polynomial::one(ring)]);
    }
    gens.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()).then(a.len().cmp(&b.len())));
    gens.dedup();
    if gens.is_empty() {
        return Ok(Vec::new());
    }

    let mut state = State {
        ring: ring.clone(),
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        processed: 0,
        budget,
    };
    for g in gens {
        let r = normal_form(&g, &state.reducers());
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(vec![Polynomial::one(ring)]);
        }
        state.insert(r.monic())?;
    }
    while let Some(pair) = state.next_pair() {
        state.processed += 1;
        if state.processed > budget.max_pairs {
            return Err(Error::Budget(format!(
                "Gröbner computation exceeded {} S-pairs",
                budget.max_pairs
            )));
        }
        let s = state.s_polynomial(&pair);
        let r = normal_form(&s, &state.reducers());
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(vec![Polynomial::one(ring)]);
        }
        state.insert(r.monic())?;
    }

    // minimal basis: active elements already have pairwise non-dividing leading terms
    let mut minimal: Vec<Polynomial> = state
        .polys
        .into_iter()
        .zip(state.active)
        .filter(|(_, a)| *a)
        .map(|(p, _)| p)
        .collect();
    minimal.sort_by_key(|g| std::cmp::Reverse(g.leading_monomial()));
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<&Polynomial> =
            minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g).collect();
        let g = &minimal[i];
        let (lm, lc) = *g.leading().unwrap();
        let tail = Polynomial::from_sorted_terms(ring, g.terms()[1..].to_vec());
        let tail = normal_form(&tail, &others);
        let lead = Polynomial::monomial(ring, lm, lc as i64);
        reduced.push(lead.add(&tail));
    }
    Ok(reduced)
}
