use crate::algebra::{AlgebraError, ChartPoly, GaussRational};

use super::{OrderingSpec, WeylElement, WeylError, WeylForm};

/// Polynomial Christoffel symbols `Γ^k_{il}` of a chart connection, stored as
/// `gamma[k][i][l]` with 0-based indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    dim: usize,
    gamma: Vec<Vec<Vec<ChartPoly>>>,
}

/// A matrix of chart polynomials.
pub type PolyMatrix = Vec<Vec<ChartPoly>>;

fn zero_matrix(dim: usize) -> PolyMatrix {
    vec![vec![ChartPoly::zero(dim); dim]; dim]
}

fn mat_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let n = a.len();
    let dim = a[0][0].dim();
    let mut out = zero_matrix(dim);
    for r in 0..n {
        for c in 0..n {
            for k in 0..n {
                if a[r][k].is_zero() || b[k][c].is_zero() {
                    continue;
                }
                out[r][c].add_assign_poly(&(&a[r][k] * &b[k][c]));
            }
        }
    }
    out
}

impl Connection {
    pub fn flat(dim: usize) -> Self {
        Self {
            dim,
            gamma: vec![vec![vec![ChartPoly::zero(dim); dim]; dim]; dim],
        }
    }

    pub fn new(dim: usize, gamma: Vec<Vec<Vec<ChartPoly>>>) -> Result<Self, AlgebraError> {
        for row in gamma.iter().flatten().flatten() {
            if row.dim() != dim {
                return Err(AlgebraError::DimensionMismatch {
                    left: dim,
                    right: row.dim(),
                });
            }
        }
        if gamma.len() != dim || gamma.iter().any(|g| g.len() != dim || g.iter().any(|h| h.len() != dim)) {
            return Err(AlgebraError::DimensionMismatch {
                left: dim,
                right: gamma.len(),
            });
        }
        Ok(Self { dim, gamma })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Γ^k_{il}`.
    pub fn symbol(&self, k: usize, i: usize, l: usize) -> &ChartPoly {
        &self.gamma[k][i][l]
    }

    pub fn is_flat(&self) -> bool {
        self.gamma.iter().flatten().flatten().all(ChartPoly::is_zero)
    }

    /// The matrix `(G_i)^k_l = Γ^k_{il}`.
    pub fn matrix(&self, i: usize) -> PolyMatrix {
        (0..self.dim)
            .map(|k| (0..self.dim).map(|l| self.gamma[k][i][l].clone()).collect())
            .collect()
    }

    /// Curvature matrix `K_ij = ∂_j G_i − ∂_i G_j + G_j G_i − G_i G_j`, so that
    /// `[∇_i, ∇_j]` acts on fibers as `V_{K_ij}`.
    pub fn curvature_matrix(&self, i: usize, j: usize) -> PolyMatrix {
        let gi = self.matrix(i);
        let gj = self.matrix(j);
        let gjgi = mat_mul(&gj, &gi);
        let gigj = mat_mul(&gi, &gj);
        let mut out = zero_matrix(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                let mut e = gi[r][c].diff(j).expect("axis in range");
                e.sub_assign_poly(&gj[r][c].diff(i).expect("axis in range"));
                e.add_assign_poly(&gjgi[r][c]);
                e.sub_assign_poly(&gigj[r][c]);
                out[r][c] = e;
            }
        }
        out
    }

    /// `V_A(a) = A^k_l ξ^l ∂a/∂ξ^k`.
    pub fn linear_field(a_mat: &PolyMatrix, a: &WeylElement) -> WeylElement {
        let dim = a.dim();
        let mut out = WeylElement::zero(dim, a.budget());
        for k in 0..dim {
            let dk = a.xi_diff(k);
            if dk.is_zero() {
                continue;
            }
            for l in 0..dim {
                let c = &a_mat[k][l];
                if c.is_zero() {
                    continue;
                }
                out.add_assign_unchecked(&dk.xi_mul(l).mul_poly(c));
            }
        }
        out
    }

    /// `∇_i a = ∂_{x^i} a − Γ^k_{il} ξ^l ∂a/∂ξ^k`.
    pub fn nabla_i(&self, i: usize, a: &WeylElement) -> WeylElement {
        let mut out = a.x_diff(i);
        let g = self.matrix(i);
        out.add_scaled_unchecked(&Self::linear_field(&g, a), &GaussRational::from_int(-1));
        out
    }

    /// Exterior covariant derivative `∇ = Σ_i dx^i ∧ ∇_i`.
    pub fn nabla(&self, form: &WeylForm) -> Result<WeylForm, WeylError> {
        if form.dim() != self.dim {
            return Err(WeylError::DimensionMismatch {
                left: self.dim,
                right: form.dim(),
            });
        }
        let mats: Vec<PolyMatrix> = (0..self.dim).map(|i| self.matrix(i)).collect();
        form.d_with(|i, a| {
            let mut out = a.x_diff(i);
            out.add_scaled_unchecked(&Self::linear_field(&mats[i], a), &GaussRational::from_int(-1));
            out
        })
    }

    /// The covariant derivative `D` adapted to the fiber ordering: `∇` in Weyl
    /// mode, and `E ∇ E⁻¹` otherwise, so that `D` is a derivation of `∗`.
    pub fn covariant_d(&self, form: &WeylForm, ord: &OrderingSpec) -> Result<WeylForm, WeylError> {
        if ord.is_weyl_like() {
            return self.nabla(form);
        }
        let pulled = form.map(|a| ord.weyl_to_ordered(a, true));
        let d = self.nabla(&pulled)?;
        Ok(d.map(|a| ord.weyl_to_ordered(a, false)))
    }
}
