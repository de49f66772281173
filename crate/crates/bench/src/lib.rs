//! Inputs shared by the benchmarks.

use baut_core::format::parse;
use baut_core::SullivanModel;

/// `∧(x₁, …, x_k; 0)` on odd spheres of degrees 3, 5, 7, …
pub fn odd_spheres(k: usize) -> SullivanModel {
    let mut text = String::from("model spheres {\n");
    for i in 0..k {
        text.push_str(&format!("  gen x{i} : {};\n", 2 * i + 3));
    }
    text.push_str("}\n");
    parse(&text).unwrap().primary_model().unwrap().model.clone()
}

#[cfg(test)]
mod tests {
    #[test]
    fn odd_spheres_have_odd_degrees() {
        let m = super::odd_spheres(3);
        let degs: Vec<u32> = m.algebra.generators().iter().map(|g| g.degree).collect();
        assert_eq!(degs, [3, 5, 7]);
    }
}
