//! Cross-oracle invariant suite behind `pi1 check`.

use std::fmt;

use crate::field::{make_field, Fe, Field};
use crate::fixtures::PIPELINE_FIXTURES;
use crate::leibniz::{
    is_homogeneous, is_p_power, leibniz_presentation, lower_letters_only, minimal_curve,
    minimality_holds,
};
use crate::ncpoly::NcPoly;
use crate::newman::{decompose_sigma, truncated_counts_oracle};
use crate::pipeline::{compute_pi1, parse_spec, render_text};
use crate::rep::unit_group_dim1;
use crate::witt::{
    all_witt_vectors, ghost_additive, witt_add_with, witt_addition_polys, IntPoly, WittError,
    WittVector,
};
use crate::LocalAlgebra;

pub type WittTable = fn(u64, usize) -> Result<Vec<IntPoly>, WittError>;

/// Injectable inputs; the default uses the real addition polynomials.
#[derive(Clone, Copy)]
pub struct SelfCheck {
    pub witt_table: WittTable,
}

impl Default for SelfCheck {
    fn default() -> Self {
        Self {
            witt_table: witt_addition_polys,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfCheckReport {
    pub results: Vec<CheckResult>,
}

impl SelfCheckReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| !r.passed)
    }
}

impl fmt::Display for SelfCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            if r.passed {
                writeln!(f, "PASS {}", r.name)?;
            } else {
                writeln!(f, "FAIL {}: {}", r.name, r.detail)?;
            }
        }
        let n = self.results.iter().filter(|r| r.passed).count();
        writeln!(f, "{n}/{} checks passed", self.results.len())
    }
}

type Outcome = Result<(), String>;

type Check<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

impl SelfCheck {
    pub fn run(&self) -> SelfCheckReport {
        let checks: [Check<'_>; 11] = [
            ("field.axioms", Box::new(field_axioms)),
            ("hopf.leibniz_axioms", Box::new(leibniz_axioms)),
            ("hopf.verschiebung", Box::new(verschiebung)),
            ("leibniz.minimal_curve", Box::new(curve_properties)),
            ("witt.ghost_additivity", Box::new(|| self.ghost())),
            ("witt.w2_f2_cyclic", Box::new(|| self.cyclic())),
            ("witt.group_laws", Box::new(|| self.group_laws())),
            ("newman.floor_oracle", Box::new(floor_oracle)),
            ("newman.height_law", Box::new(height_law)),
            ("rep.unit_group", Box::new(unit_group)),
            ("pipeline.fixtures", Box::new(pipeline_fixtures)),
        ];
        let results = checks
            .iter()
            .map(|(name, check)| {
                let outcome = check();
                CheckResult {
                    name,
                    passed: outcome.is_ok(),
                    detail: outcome.err().unwrap_or_default(),
                }
            })
            .collect();
        SelfCheckReport { results }
    }

    fn table(&self, p: u64, len: usize) -> Result<Vec<IntPoly>, String> {
        (self.witt_table)(p, len).map_err(|e| e.to_string())
    }

    fn ghost(&self) -> Outcome {
        for p in [2, 3] {
            let s = self.table(p, 3)?;
            ensure(ghost_additive(p, &s, 3), || {
                format!("ghost components not additive for p = {p}")
            })?;
        }
        Ok(())
    }

    fn add(
        &self,
        s: &[IntPoly],
        u: &WittVector,
        v: &WittVector,
        f: &Field,
    ) -> Result<WittVector, String> {
        witt_add_with(s, u, v, f).map_err(|e| e.to_string())
    }

    fn cyclic(&self) -> Outcome {
        let f = Field::prime(2).unwrap();
        let s = self.table(2, 2)?;
        let one = WittVector::new(2, vec![Fe::ONE, Fe::ZERO]);
        let two = self.add(&s, &one, &one, &f)?;
        ensure(two.components == [Fe::ZERO, Fe::ONE], || {
            format!("(1,0)+(1,0) = {:?}", two.components)
        })?;
        let mut x = one.clone();
        let mut order = 1;
        while x != WittVector::zero(2, 2) && order <= 4 {
            x = self.add(&s, &x, &one, &f)?;
            order += 1;
        }
        ensure(order == 4 && all_witt_vectors(&f, 2).len() == 4, || {
            format!("(1,0) has order {order}, expected 4")
        })
    }

    fn group_laws(&self) -> Outcome {
        for p in [2, 3] {
            let f = Field::prime(p).unwrap();
            let s = self.table(p, 2)?;
            let all = all_witt_vectors(&f, 2);
            for u in &all {
                for v in &all {
                    let uv = self.add(&s, u, v, &f)?;
                    ensure(uv == self.add(&s, v, u, &f)?, || {
                        format!("commutativity fails over F{p}")
                    })?;
                    for w in &all {
                        let l = self.add(&s, &uv, w, &f)?;
                        let r = self.add(&s, u, &self.add(&s, v, w, &f)?, &f)?;
                        ensure(l == r, || format!("associativity fails over F{p}"))?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Runs the default suite.
pub fn self_check() -> SelfCheckReport {
    SelfCheck::default().run()
}

fn field_axioms() -> Outcome {
    for (p, n) in [(2, 2), (3, 2), (5, 1)] {
        let f = make_field(p, n, None).map_err(|e| e.to_string())?;
        let el: Vec<Fe> = f.elements().collect();
        for &a in &el {
            if !a.is_zero() {
                ensure(f.mul(a, f.inv(a).unwrap()) == f.one(), || {
                    format!("inverse fails in F{}", f.size())
                })?;
            }
            for &b in &el {
                for &c in &el {
                    let l = f.mul(a, f.add(b, c));
                    let r = f.add(f.mul(a, b), f.mul(a, c));
                    ensure(l == r, || format!("distributivity fails in F{}", f.size()))?;
                }
            }
        }
    }
    Ok(())
}

fn leibniz_axioms() -> Outcome {
    let z = leibniz_presentation(4, &Field::prime(2).unwrap());
    let report = z.check_axioms(4);
    ensure(report.passed(), || format!("{:?}", report.failure))
}

fn verschiebung() -> Outcome {
    let f = Field::prime(2).unwrap();
    let z = leibniz_presentation(8, &f);
    for h in 1..=8u16 {
        let expect = if h % 2 == 0 {
            NcPoly::letter(h / 2 - 1)
        } else {
            NcPoly::zero()
        };
        ensure(z.verschiebung(&NcPoly::letter(h - 1)) == expect, || {
            format!("Ver(Z{h}) is wrong")
        })?;
    }
    Ok(())
}

fn curve_properties() -> Outcome {
    for (p, n) in [(2u64, 6usize), (3, 4)] {
        let f = Field::prime(p).unwrap();
        let pres = leibniz_presentation(n, &f);
        let c = minimal_curve(p, n, &f).map_err(|e| e.to_string())?;
        ensure(c.first_violation(&pres).is_none(), || {
            format!("curve identity fails for p = {p}")
        })?;
        for i in 1..=n {
            ensure(is_homogeneous(&c.get(i), i), || {
                format!("E{i} not homogeneous for p = {p}")
            })?;
            ensure(minimality_holds(&pres, &c, p, i), || {
                format!("E{i} not minimal for p = {p}")
            })?;
            if is_p_power(p, i) {
                ensure(lower_letters_only(&c, i, &f), || {
                    format!("E{i} uses heavy letters for p = {p}")
                })?;
            }
        }
    }
    Ok(())
}

fn floor_oracle() -> Outcome {
    for p in [2, 3, 5] {
        let f = Field::prime(p).unwrap();
        for m in 1..=20u64 {
            let a = LocalAlgebra::truncated_poly(&f, m as usize + 1).map_err(|e| e.to_string())?;
            let d = decompose_sigma(&a).map_err(|e| e.to_string())?;
            ensure(d.counts == truncated_counts_oracle(p, m), || {
                format!("p = {p}, m = {m}")
            })?;
            ensure(d.weighted_total() as u64 == m, || {
                format!("weighted total wrong for p = {p}, m = {m}")
            })?;
        }
    }
    Ok(())
}

fn height_law() -> Outcome {
    for p in [2u64, 3, 5] {
        let f = Field::prime(p).unwrap();
        for m in 1..=20u64 {
            let a = LocalAlgebra::truncated_poly(&f, m as usize + 1).map_err(|e| e.to_string())?;
            let expected = (0..).find(|&h| p.pow(h) > m).unwrap();
            ensure(a.height() == expected, || {
                format!("height wrong for p = {p}, m = {m}")
            })?;
            let d = decompose_sigma(&a).map_err(|e| e.to_string())?;
            ensure(d.max_length() == expected, || {
                format!("max length wrong for p = {p}, m = {m}")
            })?;
        }
    }
    Ok(())
}

fn unit_group() -> Outcome {
    let a = LocalAlgebra::truncated_poly(&Field::prime(2).unwrap(), 4).unwrap();
    let g = unit_group_dim1(&a);
    ensure(g.order() == 8 && g.exponent() == 4, || {
        format!("order {}, exponent {}", g.order(), g.exponent())
    })?;
    ensure(g.is_group() && g.matches_units(), || {
        "table is not the unit group".into()
    })
}

fn pipeline_fixtures() -> Outcome {
    for (text, expected) in PIPELINE_FIXTURES {
        let spec = parse_spec(text).map_err(|e| e.to_string())?;
        let got = render_text(&compute_pi1(&spec).map_err(|e| e.to_string())?);
        ensure(got == expected, || {
            format!("expected {expected}, got {got}")
        })?;
    }
    Ok(())
}
