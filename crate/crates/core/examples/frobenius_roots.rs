//! Frobenius roots and twisted Cartier images of a few ideals.

use cartier_lab::frobenius::{bracket_power, cartier_image, pe_root, root_components, FrobeniusLevel};
use cartier_lab::prelude::*;

fn main() -> Result<()> {
    let budget = Budget::default();
    let ring = RingSpec::new(7, &["x", "y"])?;
    let level = FrobeniusLevel::new(1, &ring, &budget)?;

    let h = Polynomial::parse("(x^2 + y^3)^5", &ring)?;
    let comps = root_components(&h, level.q());
    println!("(x^2+y^3)^5 splits into {} components over the 7-basis", comps.len());

    let root = pe_root(&Ideal::principal(&h), level);
    println!("root: {root}");
    let back = bracket_power(&root, level);
    println!("root^[7] contains h: {}", back.member(&h, &budget)?);

    // The twist x^{p^e - 1} in one variable makes every image the unit ideal.
    let line = RingSpec::new(2, &["x"])?;
    let module = CartierModule::parse(&line, "x", None, false)?;
    for e in 1..=4 {
        let lvl = FrobeniusLevel::new(e, &line, &budget)?;
        let image = cartier_image(&module, &Polynomial::one(&line), &Ideal::unit(&line), lvl, &budget)?;
        println!("e = {e}: κ^e(x^(2^e-1)) = {image}");
    }
    Ok(())
}
