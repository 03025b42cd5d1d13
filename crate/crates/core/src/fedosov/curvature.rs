use crate::algebra::{ChartPoly, GaussRational};
use crate::geometry::QuantizationSetup;
use crate::weyl::{WeylElement, WeylForm, WeylKey};

/// Curvature 2-form `R = Σ_{i<j} R_ij dx^i ∧ dx^j` in the setup's fiber
/// ordering, normalized so that `D² = −(i/λ) ad R`.
///
/// In Weyl form `R_ij = −½ c_ab ξ^a ξ^b` with `c_ab = (K_ij)^l_a ω'_{lb}`,
/// where `K_ij` is the curvature matrix of the connection and `ω' = π⁻¹`
/// lowers indices.
pub fn compute_curvature(setup: &QuantizationSetup, budget: u32) -> WeylForm {
    let d = setup.dim();
    let conn = setup.connection();
    let lower: Vec<Vec<GaussRational>> = setup.omega().iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    let half = GaussRational::from_frac(-1, 2);
    let mut out = WeylForm::zero(d, budget, 2).expect("dim ≥ 2");
    if conn.is_flat() {
        return out;
    }
    for i in 0..d {
        for j in i + 1..d {
            let k = conn.curvature_matrix(i, j);
            let mut r = WeylElement::zero(d, budget);
            for a in 0..d {
                for b in 0..d {
                    let mut c = ChartPoly::zero(d);
                    for l in 0..d {
                        if !lower[l][b].is_zero() {
                            c.add_scaled(&k[l][a], &lower[l][b]);
                        }
                    }
                    if c.is_zero() {
                        continue;
                    }
                    let mut xi = vec![0; d];
                    xi[a] += 1;
                    xi[b] += 1;
                    r.add_term(WeylKey::new(xi, 0), c.scale(&half));
                }
            }
            let r = setup.ordering().weyl_to_ordered(&r, false);
            out.add_component(vec![i, j], &r);
        }
    }
    out
}
