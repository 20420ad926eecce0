//! Sparse array layouts and their difference coarrays.
//!
//! ```text
//! cargo run --example geometry_coarray
//! ```

use coarray_doa::geometry::{ArrayGeometry, GeometryKind};

pub fn run() -> coarray_doa::Result<()> {
    println!("{:<6} {:<34} {:>4} {:>4} {:>6}", "kind", "positions", "ap", "dof", "holes");
    for kind in [GeometryKind::Ula, GeometryKind::Naq2, GeometryKind::Snaq2, GeometryKind::Mra, GeometryKind::Mha] {
        let g = ArrayGeometry::build(kind, 8)?;
        let c = g.coarray();
        let span = 2 * g.aperture() as usize + 1;
        println!(
            "{:<6} {:<34} {:>4} {:>4} {:>6}",
            kind.to_string(),
            format!("{:?}", g.positions()),
            g.aperture(),
            c.dof(),
            span - c.dof()
        );
    }

    // any strictly increasing integer layout works, e.g. read from a file
    let custom = ArrayGeometry::parse("# coprime-like pair\n0\n3\n5\n6\n9\n10\n12\n15\n")?;
    let c = custom.coarray();
    println!(
        "custom: dof {}, contiguous lags -{m}..{m}",
        c.dof(),
        m = c.contiguous_half_width()
    );

    // where each lag comes from in vec(C)
    let g = ArrayGeometry::build(GeometryKind::Snaq2, 8)?;
    let c = g.coarray();
    for k in [0, c.center(), c.dof() - 1] {
        let (r, col) = c.covariance_entry(k);
        println!("lag {:>3} <- C[{r}, {col}]", c.lags()[k]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
