//! Constant forms, signature vectors, and the trace round trip through
//! forms over R[t, 1/t] / p.

use wittsig::field_arith::{ntheory, Embedding};
use wittsig::forms::{
    make_random_diagonal, mu_component, sigma_component, signature_constant, signature_vector, trace_form_rp,
    triple_to_fp_form, FpPolynomial,
};

fn main() -> wittsig::Result<()> {
    let d = 8;
    let p = FpPolynomial::cyclotomic(d)?;
    let form = make_random_diagonal(d, 3, 1, 2)?;
    let diag: Vec<String> = (0..form.gram().len()).map(|i| form.gram()[i][i].to_string()).collect();
    println!("diagonal form over Q(zeta_{d}): <{}>", diag.join(", "));
    for (rho, s) in signature_vector(&form)? {
        println!("  signature under {rho}: {s}");
    }

    let triple = trace_form_rp(&form, &p)?;
    let back = triple_to_fp_form(&triple, &p)?;
    println!("round trip keeps signatures: {}", signature_vector(&back)? == signature_vector(&form)?);

    let base = Embedding::identity(1);
    for j in ntheory::units(d) {
        let mu = mu_component(&form, &p, &base, d, j)?;
        let sigma = sigma_component(&form, &p, &base, d, j)?;
        println!(
            "z = zeta_{d}^{j}: eigenspace signature {}, evaluated signature {}",
            sigma.signature()?,
            signature_constant(&mu, &Embedding::identity(d))?
        );
    }
    Ok(())
}
