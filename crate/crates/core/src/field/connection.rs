//! Levi-Civita connection of a circulant metric field and the covariant
//! derivative of `q`.

use super::{fd_gradient, FieldBundle, Point};
use crate::circulant::{AffinorPower, SymCirc4};
use crate::error::{Error, Result};
use crate::positivity::ensure_positive_definite;

/// `Γᵏᵢⱼ`, stored as `gamma[k][i][j]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Christoffel {
    pub gamma: [[[f64; 4]; 4]; 4],
}

fn ensure_regular(g: &SymCirc4) -> Result<()> {
    ensure_positive_definite(g)?;
    let det = g.det();
    if det.abs() < 1e-12 * g.max_abs().powi(4) {
        return Err(Error::SingularMetric { det });
    }
    Ok(())
}

/// `Γᵏᵢⱼ = ½ gᵏˡ (∂ᵢ g_lj + ∂ⱼ g_li − ∂_l g_ij)` with finite-difference
/// metric derivatives and the circulant inverse.
pub fn christoffel(bundle: &FieldBundle, p: &Point) -> Result<Christoffel> {
    let g = bundle.metric_at(p)?;
    ensure_regular(&g)?;
    let inv = g.inverse().ok_or(Error::SingularMetric { det: g.det() })?;

    let (da, db, dc) = (
        fd_gradient(&bundle.a, p)?,
        fd_gradient(&bundle.b, p)?,
        fd_gradient(&bundle.c, p)?,
    );
    // dg[l] = ∂_l g, itself symmetric circulant.
    let dg: [SymCirc4; 4] =
        std::array::from_fn(|l| SymCirc4::from_parts(da.0[l], db.0[l], dc.0[l]));

    let mut gamma = [[[0.0; 4]; 4]; 4];
    for (k, gk) in gamma.iter_mut().enumerate() {
        for (i, gki) in gk.iter_mut().enumerate() {
            for (j, slot) in gki.iter_mut().enumerate() {
                let mut s = 0.0;
                for (l, dgl) in dg.iter().enumerate() {
                    let lower = dg[i].entry(l, j) + dg[j].entry(l, i) - dgl.entry(i, j);
                    s += inv.entry(k, l) * lower;
                }
                *slot = 0.5 * s;
            }
        }
    }
    Ok(Christoffel { gamma })
}

/// `(∇ᵢ q)ⱼᵏ = Γᵏᵢₗ qⱼˡ − Γˡᵢⱼ q_lᵏ`, stored as `[i][j][k]`. The `∂q` term
/// vanishes because `q` has constant coordinates.
pub fn nabla_q(bundle: &FieldBundle, p: &Point) -> Result<[[[f64; 4]; 4]; 4]> {
    let Christoffel { gamma } = christoffel(bundle, p)?;
    let q = AffinorPower::Q.matrix();
    let mut out = [[[0.0; 4]; 4]; 4];
    for (i, oi) in out.iter_mut().enumerate() {
        for (j, oij) in oi.iter_mut().enumerate() {
            for (k, slot) in oij.iter_mut().enumerate() {
                let mut s = 0.0;
                for l in 0..4 {
                    s += gamma[k][i][l] * q[j][l] - gamma[l][i][j] * q[l][k];
                }
                *slot = s;
            }
        }
    }
    Ok(out)
}

/// Max-norm of `∇q` over all 64 components.
pub fn nabla_q_residual(bundle: &FieldBundle, p: &Point) -> Result<f64> {
    let t = nabla_q(bundle, p)?;
    Ok(t.iter()
        .flatten()
        .flatten()
        .fold(0.0, |m, x| m.max(x.abs())))
}
