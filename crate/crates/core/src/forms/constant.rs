//! Congruence diagonalization and Sylvester signatures of constant forms.

use super::ConstantForm;
use crate::field_arith::{embeddings_g0, twisted_sign, CyclotomicNumber, Embedding};
use crate::linalg;
use crate::{Error, Result, Settings};

/// Diagonal entries `d_i` of a form congruent to `form`; each satisfies
/// `conj(d_i) = epsilon * d_i`, and the number of zeros is the rank defect.
///
/// Skew-hermitian forms over `Q` have no skew unit to pivot with; those are
/// lifted to `Q(i)` first, so the entries may live in conductor `lcm(m, 4)`.
pub fn diagonalize_constant(form: &ConstantForm) -> Result<Vec<CyclotomicNumber>> {
    let form = lift_if_needed(form)?;
    Ok(linalg::diagonalize(form.gram())?.diagonal)
}

fn lift_if_needed(form: &ConstantForm) -> Result<ConstantForm> {
    if form.conductor() <= 2 && form.epsilon() < 0 {
        return form.lift(4);
    }
    Ok(form.clone())
}

/// `sum_i sign(rho(d_i))`, computed on `i * form` when `epsilon = -1`.
pub fn signature_constant(form: &ConstantForm, rho: &Embedding) -> Result<i64> {
    signature_constant_with(form, rho, &Settings::default())
}

pub fn signature_constant_with(form: &ConstantForm, rho: &Embedding, settings: &Settings) -> Result<i64> {
    if rho.conductor() != form.conductor() {
        return Err(Error::ConductorMismatch {
            left: form.conductor(),
            right: rho.conductor(),
        });
    }
    let lifted = lift_if_needed(form)?;
    let rho = if lifted.conductor() == form.conductor() {
        *rho
    } else {
        Embedding::identity(lifted.conductor())
    };
    let diag = linalg::diagonalize(lifted.gram())?.diagonal;
    let mut sig = 0i64;
    for d in &diag {
        if d.is_zero() {
            return Err(Error::Singular { summand: None });
        }
        sig += twisted_sign(d, &rho, form.epsilon() < 0, settings)? as i64;
    }
    Ok(sig)
}

/// Signatures at every embedding of `G0(Q(zeta_m))`, in order.
pub fn signature_vector(form: &ConstantForm) -> Result<Vec<(Embedding, i64)>> {
    embeddings_g0(form.conductor())
        .into_iter()
        .map(|rho| Ok((rho, signature_constant(form, &rho)?)))
        .collect()
}
