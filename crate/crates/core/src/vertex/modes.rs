use std::collections::BTreeMap;

use thiserror::Error;

use crate::liealg::{Bracket, Mode, State};
use crate::newton::binomial;
use crate::scalars::{Rational, Scalar};

use super::VertexAlgebraHandle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{product} is not a combination of vac and single modes")]
pub struct NotLinear {
    pub product: String,
}

impl VertexAlgebraHandle {
    /// `[x_m, y_n]` read off from the commutator formula
    /// `Σ_i C(m,i) (x_i y)_{m+n-i}` in field indices. Each product `x_i y`
    /// with `i >= 0` must be `c·vac` (a central term, since `Id_k = δ_{k,-1}`)
    /// or a sum of `g_{-j-1} vac`, whose field `∂^(j) g` has modes
    /// `(-1)^j C(k,j) g_{k-j}`.
    pub fn commutator_modes(&self, x: Mode, y: Mode) -> Result<Bracket, NotLinear> {
        let spec = self.spec();
        let states = self.generator_states();
        let (a, b) = (&states[x.gen.0 as usize], &states[y.gen.0 as usize]);
        let fm = spec.field_index(x.gen, x.n as i64);
        let fn_ = spec.field_index(y.gen, y.n as i64);
        let top = a.max_weight().unwrap_or(0) + b.max_weight().unwrap_or(0);
        let mut modes = BTreeMap::<Mode, Scalar>::new();
        let mut central = Scalar::zero();
        for i in 0..top {
            let c = binomial(fm, i as u32);
            let product = self.state_mode(a, i, b);
            if c.is_zero() || product.is_zero() {
                continue;
            }
            let k = fm + fn_ - i;
            for (mono, coeff) in product.terms() {
                match mono.as_slice() {
                    [] => {
                        if k == -1 {
                            central += &coeff.scale(&c);
                        }
                    }
                    [g] => {
                        let j = -spec.field_index(g.gen, g.n as i64) - 1;
                        let weight = &(&c * &Rational::from_integer(if j % 2 == 0 { 1 } else { -1 })) * &binomial(k, j as u32);
                        if weight.is_zero() {
                            continue;
                        }
                        let target = Mode::new(g.gen, spec.lie_index(g.gen, k - j) as i32);
                        *modes.entry(target).or_default() += &coeff.scale(&weight);
                    }
                    _ => return Err(NotLinear { product: State::from_monomial(mono.clone()).display(spec).to_string() }),
                }
            }
        }
        let modes = modes.into_iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (c, m)).collect();
        Ok(Bracket { modes, central })
    }

    /// `[x_m, y_n] v` from a bracket, for comparisons on states.
    pub fn apply_bracket(&self, br: &Bracket, v: &State) -> State {
        let mut out = v.scale(&br.central);
        for (c, z) in &br.modes {
            out = out.add(&self.module().mode_act(z.gen, z.n as i64, v).scale(c));
        }
        out
    }
}
