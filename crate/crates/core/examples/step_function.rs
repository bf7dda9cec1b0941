//! The signature step function of a split block and of a class with a pole.

use wittsig::field_arith::Embedding;
use wittsig::forms::{make_canonical, CanonicalBlock, HermitianForm, WittElement};
use wittsig::funcfield::parse_expression;
use wittsig::rational::int;
use wittsig::sigfunc::signature_step_function;

fn main() -> wittsig::Result<()> {
    let w = make_canonical(&int(0), &[CanonicalBlock { n: 4, j: 1, r: int(1) }])?;
    let s = signature_step_function(&w, &Embedding::identity(4))?;
    println!("candidates: {}", s.candidates().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "));
    for (lo, hi, v) in s.arcs() {
        println!("  ({lo}, {hi}) turns: {v}");
    }
    for (p, jump) in s.jumps() {
        println!("  jump {jump} at {p}");
    }

    let x = parse_expression(1, "3*t - 2 + 3*t^-1")?;
    let w = WittElement::from_form(HermitianForm::diagonal(1, 1, &[x])?);
    let s = signature_step_function(&w, &Embedding::identity(1))?;
    println!("3t - 2 + 3/t:");
    print!("{}", s.to_csv());
    Ok(())
}
