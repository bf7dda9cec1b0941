//! Parsing, the involution t -> 1/t, and evaluation at roots of unity.

use wittsig::funcfield::parse_expression;

fn main() -> wittsig::Result<()> {
    let f = parse_expression(4, "(i*t + 1) / (t^2 - 3)")?;
    println!("f       = {f}");
    println!("bar f   = {}", f.bar());
    println!("f bar f = {}", f.checked_mul(&f.bar())?);

    let h = parse_expression(4, "(1 - i)*t + (1 + i)*t^-1 + 3")?;
    println!("h is hermitian: {}", h.bar() == h);
    for (n, j) in [(1, 0), (2, 1), (4, 1), (8, 3)] {
        println!("h(zeta_{n}^{j}) = {}", h.eval_root_of_unity(n, j)?);
    }
    match parse_expression(1, "1 / (t^2 + 1)")?.eval_root_of_unity(4, 1) {
        Ok(v) => println!("unexpected value {v}"),
        Err(e) => println!("at i: {e}"),
    }
    Ok(())
}
