use std::fmt;

use rustc_hash::FxHashMap;

use crate::scalars::Scalar;

use super::{join_signed, monomial_weight, signed_term, AlgebraSpec, Monomial};

/// A finite linear combination of canonical PBW monomials, sorted by
/// monomial with no zero coefficients. The empty monomial is the vacuum.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct State {
    terms: Vec<(Monomial, Scalar)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateWeight {
    Zero,
    Homogeneous(i64),
    Inhomogeneous,
}

impl State {
    pub fn zero() -> Self {
        State::default()
    }

    pub fn vacuum() -> Self {
        State::from_monomial(Monomial::new())
    }

    pub fn from_monomial(m: Monomial) -> Self {
        State { terms: vec![(m, Scalar::one())] }
    }

    pub fn monomial_with(m: Monomial, c: Scalar) -> Self {
        if c.is_zero() {
            return State::zero();
        }
        State { terms: vec![(m, c)] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter().map(|(m, c)| (m, c))
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        match self.terms.binary_search_by(|(k, _)| k.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> State {
        if c.is_zero() {
            return State::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).filter(|(_, x)| !x.is_zero()).collect();
        State { terms }
    }

    pub fn add(&self, other: &State) -> State {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &State) -> State {
        self.merge(other, true)
    }

    pub fn neg(&self) -> State {
        State { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    fn merge(&self, other: &State, negate: bool) -> State {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let flip = |c: &Scalar| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b[j].0.clone(), flip(&b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), flip(c))));
        State { terms: out }
    }

    pub fn weight(&self) -> StateWeight {
        let mut it = self.terms.iter().map(|(m, _)| monomial_weight(m));
        let Some(w) = it.next() else {
            return StateWeight::Zero;
        };
        if it.all(|v| v == w) {
            StateWeight::Homogeneous(w)
        } else {
            StateWeight::Inhomogeneous
        }
    }

    /// Largest weight among the components; `None` for the zero state.
    pub fn max_weight(&self) -> Option<i64> {
        self.terms.iter().map(|(m, _)| monomial_weight(m)).max()
    }

    pub fn display<'a>(&'a self, spec: &'a AlgebraSpec) -> StateDisplay<'a> {
        StateDisplay { state: self, spec }
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self
            .terms
            .iter()
            .map(|(m, c)| {
                let body: String = m.iter().map(|x| format!("g{}[{}]", x.gen.0, x.n)).collect();
                signed_term(c, &format!("{body}vac"))
            })
            .collect();
        f.write_str(&join_signed(parts))
    }
}

/// Renders a state with generator labels, e.g. `2*h[-1]vac - (1/3)*h[-2]vac`.
pub struct StateDisplay<'a> {
    state: &'a State,
    spec: &'a AlgebraSpec,
}

impl fmt::Display for StateDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self
            .state
            .terms
            .iter()
            .map(|(m, c)| {
                let body: String = m.iter().map(|x| self.spec.display_mode(*x)).collect();
                signed_term(c, &format!("{body}vac"))
            })
            .collect();
        f.write_str(&join_signed(parts))
    }
}

/// Hash-based accumulator for sums of many states.
#[derive(Default)]
pub struct StateBuilder {
    terms: FxHashMap<Monomial, Scalar>,
}

impl StateBuilder {
    pub fn new() -> Self {
        StateBuilder::default()
    }

    pub fn add_term(&mut self, m: &Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(m) {
            Some(slot) => *slot += c,
            None => {
                self.terms.insert(m.clone(), c.clone());
            }
        }
    }

    pub fn add_state(&mut self, s: &State) {
        for (m, c) in s.terms() {
            self.add_term(m, c);
        }
    }

    pub fn add_scaled(&mut self, s: &State, k: &Scalar) {
        if k.is_one() {
            return self.add_state(s);
        }
        for (m, c) in s.terms() {
            self.add_term(m, &(c * k));
        }
    }

    pub fn finish(self) -> State {
        let mut terms: Vec<_> = self.terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        State { terms }
    }
}
