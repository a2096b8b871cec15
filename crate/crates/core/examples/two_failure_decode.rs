//! Encode one round, erase two data symbols and recover them from the two
//! protection symbols.
//!
//! ```bash
//! cargo run -p nps2 --example two_failure_decode
//! ```

use nps2::codec::{CoefficientRows, RecoveryProblem, Row};
use nps2::{FieldElement, FieldSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let field = FieldSpec::default();
    let data: Vec<FieldElement> = [0x10, 0xa7, 0x3c, 0xff, 0x42, 0x09]
        .into_iter()
        .map(FieldElement::from_raw)
        .collect();
    let rows = CoefficientRows::build(data.len(), &field)?;
    let (y_sum, y_weighted) = rows.encode_pair(&field, &data)?;
    println!("data {:02x?}", data.iter().map(|d| d.value()).collect::<Vec<_>>());
    println!("protection: sum {y_sum}, weighted {y_weighted}");

    let lost = [1usize, 3];
    let known: Vec<_> = (0..data.len())
        .filter(|r| !lost.contains(r))
        .map(|r| (r, data[r]))
        .collect();
    let rs = rows.residualize(&field, y_sum, &known, Row::Sum)?;
    let rw = rows.residualize(&field, y_weighted, &known, Row::Weighted)?;
    println!("residuals after removing known symbols: {rs}, {rw}");

    let problem = RecoveryProblem::new(lost.to_vec(), Some(rs), Some(rw))?;
    let (a, b) = rows.solve_two(&field, &problem)?;
    println!("recovered ranks {lost:?}: {a}, {b}");
    assert_eq!((a, b), (data[1], data[3]));

    // Lose a data symbol and the sum symbol: the weighted symbol alone suffices.
    let known: Vec<_> = (0..data.len()).filter(|&r| r != 4).map(|r| (r, data[r])).collect();
    let rw = rows.residualize(&field, y_weighted, &known, Row::Weighted)?;
    let x = rows.solve_one(&field, &RecoveryProblem::new(vec![4], None, Some(rw))?)?;
    println!("rank 4 from the weighted symbol only: {x}");
    assert_eq!(x, data[4]);
    Ok(())
}
