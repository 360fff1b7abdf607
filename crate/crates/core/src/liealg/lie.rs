use thiserror::Error;

use crate::scalars::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("structure table has wrong shape for dimension {0}")]
    Shape(usize),
    #[error("bracket is not antisymmetric on ({0}, {1})")]
    Antisymmetry(String, String),
    #[error("Jacobi identity fails on ({0}, {1}, {2})")]
    Jacobi(String, String, String),
    #[error("bilinear form is not symmetric on ({0}, {1})")]
    FormAsymmetric(String, String),
    #[error("bilinear form is not invariant on ({0}, {1}, {2})")]
    FormNotInvariant(String, String, String),
}

/// A finite-dimensional Lie algebra with an invariant symmetric form.
///
/// Construction verifies antisymmetry, the Jacobi identity, symmetry of the
/// form and `<[a,b],c> = <a,[b,c]>` on every basis triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLieAlgebra {
    name: String,
    labels: Vec<String>,
    // structure[a][b][d] = c_ab^d
    structure: Vec<Vec<Vec<Rational>>>,
    form: Vec<Vec<Rational>>,
}

impl FiniteLieAlgebra {
    pub fn new(
        name: &str,
        labels: Vec<String>,
        structure: Vec<Vec<Vec<Rational>>>,
        form: Vec<Vec<Rational>>,
    ) -> Result<Self, LieError> {
        let d = labels.len();
        let shaped = structure.len() == d
            && structure.iter().all(|row| row.len() == d && row.iter().all(|v| v.len() == d))
            && form.len() == d
            && form.iter().all(|row| row.len() == d);
        if !shaped {
            return Err(LieError::Shape(d));
        }
        let alg = FiniteLieAlgebra { name: name.to_string(), labels, structure, form };
        alg.validate()?;
        Ok(alg)
    }

    /// `sl2` on the basis `e, f, h` with `[e,f] = h`, `[h,e] = 2e`,
    /// `[h,f] = -2f` and the trace form of the fundamental representation.
    pub fn sl2() -> Self {
        let z = Rational::zero;
        let r = Rational::from_integer;
        let mut structure = vec![vec![vec![z(); 3]; 3]; 3];
        let (e, f, h) = (0, 1, 2);
        structure[e][f][h] = r(1);
        structure[f][e][h] = r(-1);
        structure[h][e][e] = r(2);
        structure[e][h][e] = r(-2);
        structure[h][f][f] = r(-2);
        structure[f][h][f] = r(2);
        let mut form = vec![vec![z(); 3]; 3];
        form[e][f] = r(1);
        form[f][e] = r(1);
        form[h][h] = r(2);
        FiniteLieAlgebra::new("sl2", ["e", "f", "h"].map(String::from).to_vec(), structure, form)
            .expect("sl2 tables are valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `[a, b]` as `(basis index, coefficient)` pairs.
    pub fn bracket(&self, a: usize, b: usize) -> impl Iterator<Item = (usize, &Rational)> {
        self.structure[a][b].iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn form(&self, a: usize, b: usize) -> &Rational {
        &self.form[a][b]
    }

    fn bracket_vec(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim()];
        for (a, ua) in u.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, vb) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let uv = ua * vb;
                for (d, c) in self.bracket(a, b) {
                    out[d] += &(&uv * c);
                }
            }
        }
        out
    }

    fn form_vec(&self, u: &[Rational], v: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (a, ua) in u.iter().enumerate() {
            for (b, vb) in v.iter().enumerate() {
                acc += &(&(ua * vb) * &self.form[a][b]);
            }
        }
        acc
    }

    fn unit(&self, a: usize) -> Vec<Rational> {
        (0..self.dim()).map(|i| if i == a { Rational::one() } else { Rational::zero() }).collect()
    }

    fn validate(&self) -> Result<(), LieError> {
        let n = self.dim();
        let l = |i: usize| self.labels[i].clone();
        for a in 0..n {
            for b in 0..n {
                if (0..n).any(|d| self.structure[a][b][d] != -&self.structure[b][a][d]) {
                    return Err(LieError::Antisymmetry(l(a), l(b)));
                }
                if self.form[a][b] != self.form[b][a] {
                    return Err(LieError::FormAsymmetric(l(a), l(b)));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (u, v, w) = (self.unit(a), self.unit(b), self.unit(c));
                    let uv_w = self.bracket_vec(&self.bracket_vec(&u, &v), &w);
                    let vw_u = self.bracket_vec(&self.bracket_vec(&v, &w), &u);
                    let wu_v = self.bracket_vec(&self.bracket_vec(&w, &u), &v);
                    if (0..n).any(|d| !(&(&uv_w[d] + &vw_u[d]) + &wu_v[d]).is_zero()) {
                        return Err(LieError::Jacobi(l(a), l(b), l(c)));
                    }
                    let lhs = self.form_vec(&self.bracket_vec(&u, &v), &w);
                    let rhs = self.form_vec(&u, &self.bracket_vec(&v, &w));
                    if lhs != rhs {
                        return Err(LieError::FormNotInvariant(l(a), l(b), l(c)));
                    }
                }
            }
        }
        Ok(())
    }
}
