//! Standard fixture algebras and pinching specs shared by tests, the
//! self-check and the acceptance run.

use crate::algebra::LocalAlgebra;
use crate::field::Field;

pub const NODE: &str = r#"{"p":2,"branches":[[{"kind":"point"},{"kind":"point"}]]}"#;
pub const CUSP: &str = r#"{"p":2,"branches":[[{"kind":"truncated_poly","order":2}]]}"#;
pub const TACNODE: &str = r#"{"p":2,"branches":[[{"kind":"truncated_poly","order":4}]]}"#;
pub const MIXED: &str = r#"{"p":2,"branches":[[{"kind":"point"},{"kind":"point"}],[{"kind":"truncated_poly","order":2}]]}"#;

/// `(spec text, expected rendering)`.
pub const PIPELINE_FIXTURES: [(&str, &str); 4] = [
    (NODE, "Zhat"),
    (CUSP, "NW(1)"),
    (TACNODE, "NW(1) * NW(2)"),
    (MIXED, "Zhat * NW(1)"),
];

/// `k[t]/(t^{m+1})` for `m ≤ 7`, square-zero of dimension `≤ 3`, and
/// `k[x, y]/(x², y²)`.
pub fn fixture_algebras(field: &Field) -> Vec<(String, LocalAlgebra)> {
    let mut out = Vec::new();
    for order in 2..=8 {
        out.push((
            format!("k[t]/t^{order}"),
            LocalAlgebra::truncated_poly(field, order).unwrap(),
        ));
    }
    for r in 1..=3 {
        out.push((
            format!("square-zero({r})"),
            LocalAlgebra::square_zero(field, r),
        ));
    }
    out.push((
        "k[x,y]/(x^2,y^2)".to_string(),
        LocalAlgebra::monomial_quotient(field, 2, &[vec![2, 0], vec![0, 2]]).unwrap(),
    ));
    out
}
