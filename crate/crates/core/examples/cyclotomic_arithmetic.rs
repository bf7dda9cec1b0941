//! Exact arithmetic in Q(zeta_m) and its complex embeddings.

use wittsig::field_arith::{embed_numeric, embeddings_g0, real_sign, CyclotomicNumber, Embedding};

fn main() -> wittsig::Result<()> {
    let m = 5;
    let z = CyclotomicNumber::zeta_power(m, 1);
    let phi = &z + &z.conjugate();
    println!("phi = {phi}");
    println!("phi^2 + phi - 1 = {}", &(&(&phi * &phi) + &phi) - &CyclotomicNumber::one(m));
    println!("1 / phi = {}", phi.inv()?);

    for rho in embeddings_g0(m) {
        let (re, _) = embed_numeric(&phi, &rho, 64).mid_f64();
        println!("{rho}: phi -> {re:.6}, sign {}", real_sign(&phi, &rho)?);
    }
    let i = CyclotomicNumber::imaginary_unit(12)?;
    println!("i = {i} in Q(zeta_12); z -> z^7 sends it to {}", i.apply_galois(7));
    println!("{}", Embedding::new(12, 2).unwrap_err());
    Ok(())
}
