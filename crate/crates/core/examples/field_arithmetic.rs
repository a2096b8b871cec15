//! GF(2^m) arithmetic: build a field, multiply, invert and walk the powers of
//! the generator.
//!
//! ```bash
//! cargo run -p nps2 --example field_arithmetic
//! ```

use nps2::field::{FieldElement, FieldSpec};

fn main() -> Result<(), nps2::FieldError> {
    // GF(8) with x^3 + x + 1
    let gf8 = FieldSpec::new(3, 0b1011, 0b010)?;
    println!("{gf8:?}");

    let a = gf8.element(0b011)?;
    let b = gf8.element(0b101)?;
    println!("{a} + {b} = {}", gf8.add(a, b));
    println!("{a} * {b} = {}", gf8.mul(a, b));
    println!("inv({a}) = {}", gf8.inv(a)?);

    print!("powers of {}:", gf8.generator());
    for e in 0..gf8.group_order() {
        print!(" {}", gf8.generator_pow(e.into()));
    }
    println!();

    // A non-primitive generator is rejected at construction.
    match FieldSpec::new(8, 0x11B, 0x02) {
        Ok(_) => unreachable!(),
        Err(e) => println!("0x11b with generator 2: {e}"),
    }

    let gf256 = FieldSpec::default();
    let x = FieldElement::from_raw(0x53);
    println!(
        "GF(256): {x} * inv({x}) = {}",
        gf256.mul(x, gf256.inv(x)?)
    );
    Ok(())
}
