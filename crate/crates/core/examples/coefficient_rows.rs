//! The two coefficient rows and the 2x2 decode matrices they induce.
//!
//! ```bash
//! cargo run -p nps2 --example coefficient_rows -- 6
//! ```

use nps2::codec::{CoefficientRows, Row};
use nps2::FieldSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let width: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(4);
    let field = FieldSpec::default();
    let rows = CoefficientRows::build(width, &field)?;

    let hex = |r: &[nps2::FieldElement]| r.iter().map(|&e| field.to_hex(e)).collect::<Vec<_>>().join(" ");
    println!("width {width} over GF(2^{})", field.degree());
    println!("sum      [{}]", hex(rows.row_sum()));
    println!("weighted [{}]", hex(rows.row_weighted().unwrap()));

    // Ranks 1 and 3 carry alpha and alpha^3.
    if width >= 4 {
        let c1 = rows.coefficient(Row::Weighted, 1)?;
        let c3 = rows.coefficient(Row::Weighted, 3)?;
        println!("decode matrix for ranks 1,3: [[1, 1], [{c1}, {c3}]], det {}", field.add(c1, c3));
    }

    let mut smallest = None;
    for t1 in 0..width {
        for t2 in t1 + 1..width {
            let det = field.add(rows.row_weighted().unwrap()[t1], rows.row_weighted().unwrap()[t2]);
            assert!(!det.is_zero());
            smallest = Some(smallest.map_or(det, |s: nps2::FieldElement| s.min(det)));
        }
    }
    println!("all {} minors invertible (smallest det {:?})", width * (width.saturating_sub(1)) / 2, smallest);

    match CoefficientRows::build(256, &field) {
        Err(e) => println!("width 256: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
