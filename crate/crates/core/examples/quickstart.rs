use std::sync::Arc;

use eii_codes::gf::Gf2Poly;
use eii_codes::layout::iterative_decode;
use eii_codes::{Field, Profile, TableEiiCode, TableField};

fn main() -> eii_codes::Result<()> {
    // GF(8) with modulus x^3 + x + 1
    let field = Arc::new(TableField::new(&Gf2Poly::from_u64(0b1011))?);
    let profile: Profile = "C(7,[1,2,3,5])".parse()?;
    let code = TableEiiCode::new(field.clone(), profile)?;
    println!("k = {}, d = {}", code.dimension(), code.min_distance());

    let data: Vec<u16> = (0..code.dimension() as u16).map(|k| k % 8).collect();
    let mut grid = code.encode(&data)?;
    for (i, cols) in [vec![0, 3, 5, 6], vec![1, 3], vec![2], vec![0, 1, 5, 6]].iter().enumerate() {
        for &j in cols {
            grid.erase(i, j);
        }
    }

    let rows_only = code.decode_rows(&grid);
    println!("rows only: {:?}, {} cells left", rows_only.status, rows_only.residual.len());
    let both = iterative_decode(&code, &grid, 8);
    println!("iterative: {:?} after {} passes", both.status, both.passes);
    assert!(code.is_codeword(&both.grid)?);
    assert_eq!(field.degree(), 3);
    Ok(())
}
