//! Deciding vanishing in the rationalized Witt group.

use wittsig::field_arith::CyclotomicNumber;
use wittsig::forms::{extend_constant, make_canonical, make_metabolic, CanonicalBlock, ConstantForm, WittElement};
use wittsig::rational::int;
use wittsig::witt_decide::{decide_batch, is_trivial};

fn main() -> wittsig::Result<()> {
    let metabolic = WittElement::from_form(make_metabolic(4, 2, 1, 7)?);
    let block = make_canonical(&int(1), &[CanonicalBlock { n: 3, j: 1, r: int(2) }])?;
    let phi = &CyclotomicNumber::zeta_power(5, 1) + &CyclotomicNumber::zeta_power(5, 4);
    let golden = WittElement::from_form(extend_constant(&ConstantForm::diagonal(5, 1, &[phi])?));
    let cancel = block.direct_sum(&block.scale(&int(-1)))?;

    for (name, d) in ["metabolic", "canonical", "golden", "w - w"]
        .iter()
        .zip(decide_batch(&[metabolic, block.clone(), golden, cancel]))
    {
        let d = d?;
        println!("{name}: trivial = {}, {} witnesses", d.trivial, d.witnesses.len());
    }
    println!("{}", serde_json::to_string_pretty(&is_trivial(&block)?).unwrap());
    Ok(())
}
