//! Double Butcher tableaux for the IMEX-RK driver: an explicit tableau
//! paired with a diagonally implicit one, loaded from plain-text data files
//! and validated for row sums, stiff accuracy, and order conditions.

use crate::error::{Result, SolverError};

#[derive(Debug, Clone, PartialEq)]
pub struct ButcherPair {
    pub name: String,
    pub s: usize,
    pub a_ex: Vec<Vec<f64>>,
    pub b_ex: Vec<f64>,
    pub c_ex: Vec<f64>,
    pub a_im: Vec<Vec<f64>>,
    pub b_im: Vec<f64>,
    pub c_im: Vec<f64>,
}

/// Validation outcome; `violations` lists every failed check.
#[derive(Debug, Clone)]
pub struct TableauReport {
    pub structure_ok: bool,
    pub stiffly_accurate: bool,
    /// Highest classical order whose full condition set passed (0..=3).
    pub order: u8,
    pub violations: Vec<String>,
}

impl TableauReport {
    pub fn satisfies(&self, required_order: u8) -> bool {
        self.structure_ok && self.stiffly_accurate && self.order >= required_order
    }
}

const TOL: f64 = 1e-14;

impl ButcherPair {
    /// Forward/backward Euler pair: the first-order IMEX scheme.
    pub fn imex1() -> Self {
        ButcherPair {
            name: "imex1".into(),
            s: 1,
            a_ex: vec![vec![0.0]],
            b_ex: vec![1.0],
            c_ex: vec![0.0],
            a_im: vec![vec![1.0]],
            b_im: vec![1.0],
            c_im: vec![1.0],
        }
    }

    /// Shipped third-order stiffly accurate pair (ARS(4,4,3)).
    pub fn imex3() -> Self {
        let text = include_str!("../data/imex3_ars443.txt");
        let mut pair = Self::parse(text).expect("builtin tableau parses");
        pair.name = "imex3".into();
        pair
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| SolverError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        let mut pair = Self::parse(&text)?;
        pair.name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "custom".into());
        Ok(pair)
    }

    /// Parse the plain-text layout: `stage_count s`, then row-major
    /// A_tilde, b_tilde, c_tilde, A, b, c. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("");
            for tok in line.split_whitespace() {
                tokens.push(tok.to_string());
            }
        }
        let mut it = tokens.into_iter();
        let first = it
            .next()
            .ok_or_else(|| SolverError::Tableau("empty tableau file".into()))?;
        let s: usize = if first == "stage_count" {
            it.next()
                .ok_or_else(|| SolverError::Tableau("missing stage count".into()))?
                .parse()
                .map_err(|_| SolverError::Tableau("bad stage count".into()))?
        } else {
            first
                .parse()
                .map_err(|_| SolverError::Tableau("bad stage count".into()))?
        };
        if s == 0 || s > 16 {
            return Err(SolverError::Tableau(format!("unreasonable stage count {s}")));
        }
        let mut take = |n: usize| -> Result<Vec<f64>> {
            let mut out = Vec::with_capacity(n);
            for _ in 0..n {
                let tok = it
                    .next()
                    .ok_or_else(|| SolverError::Tableau("tableau file truncated".into()))?;
                out.push(
                    tok.parse::<f64>()
                        .map_err(|_| SolverError::Tableau(format!("bad literal '{tok}'")))?,
                );
            }
            Ok(out)
        };
        let a_ex_flat = take(s * s)?;
        let b_ex = take(s)?;
        let c_ex = take(s)?;
        let a_im_flat = take(s * s)?;
        let b_im = take(s)?;
        let c_im = take(s)?;
        if it.next().is_some() {
            return Err(SolverError::Tableau("trailing tokens in tableau file".into()));
        }
        let to_rows = |flat: Vec<f64>| -> Vec<Vec<f64>> {
            flat.chunks(s).map(|c| c.to_vec()).collect()
        };
        Ok(ButcherPair {
            name: "custom".into(),
            s,
            a_ex: to_rows(a_ex_flat),
            b_ex,
            c_ex,
            a_im: to_rows(a_im_flat),
            b_im,
            c_im,
        })
    }
}

fn sum_bc(b: &[f64], c: &[f64], pow: i32) -> f64 {
    b.iter().zip(c).map(|(bi, ci)| bi * ci.powi(pow)).sum()
}

fn sum_bac(b: &[f64], a: &[Vec<f64>], c: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (i, bi) in b.iter().enumerate() {
        let mut inner = 0.0;
        for (j, cj) in c.iter().enumerate() {
            inner += a[i][j] * cj;
        }
        acc += bi * inner;
    }
    acc
}

/// Check triangularity, row sums, stiff accuracy, and the classical plus
/// coupled order conditions up to order 3.
pub fn validate_tableau(pair: &ButcherPair) -> TableauReport {
    let s = pair.s;
    let mut violations = Vec::new();
    let mut structure_ok = true;

    for i in 0..s {
        for j in 0..s {
            if j >= i && pair.a_ex[i][j] != 0.0 {
                violations
                    .push(format!("explicit tableau not strictly lower triangular at ({i},{j})"));
                structure_ok = false;
            }
            if j > i && pair.a_im[i][j] != 0.0 {
                violations.push(format!("implicit tableau not lower triangular at ({i},{j})"));
                structure_ok = false;
            }
        }
        let row_ex: f64 = pair.a_ex[i].iter().sum();
        if (row_ex - pair.c_ex[i]).abs() > TOL {
            violations.push(format!("explicit row {i} sum {} != c~ {}", row_ex, pair.c_ex[i]));
            structure_ok = false;
        }
        let row_im: f64 = pair.a_im[i].iter().sum();
        if (row_im - pair.c_im[i]).abs() > TOL {
            violations.push(format!("implicit row {i} sum {} != c {}", row_im, pair.c_im[i]));
            structure_ok = false;
        }
    }

    let mut stiffly_accurate = true;
    for j in 0..s {
        if (pair.b_im[j] - pair.a_im[s - 1][j]).abs() > TOL {
            stiffly_accurate = false;
        }
    }
    if !stiffly_accurate {
        violations.push("implicit tableau is not stiffly accurate (b^T != e_s^T A)".into());
    }

    // Order conditions, explicit/implicit plus every coupling.
    let bs = [&pair.b_ex, &pair.b_im];
    let cs = [&pair.c_ex, &pair.c_im];
    let mats = [&pair.a_ex, &pair.a_im];
    let names_b = ["b~", "b"];
    let names_c = ["c~", "c"];
    let names_a = ["A~", "A"];

    let mut order = 0u8;
    let mut ord1 = true;
    for (k, b) in bs.iter().enumerate() {
        let v: f64 = b.iter().sum();
        if (v - 1.0).abs() > TOL {
            violations.push(format!("sum {} = {} != 1", names_b[k], v));
            ord1 = false;
        }
    }
    if ord1 {
        order = 1;
        let mut ord2 = true;
        for (kb, b) in bs.iter().enumerate() {
            for (kc, c) in cs.iter().enumerate() {
                let v = sum_bc(b, c, 1);
                if (v - 0.5).abs() > TOL {
                    violations.push(format!("{}.{} = {} != 1/2", names_b[kb], names_c[kc], v));
                    ord2 = false;
                }
            }
        }
        if ord2 {
            order = 2;
            let mut ord3 = true;
            for (kb, b) in bs.iter().enumerate() {
                for (kc, c) in cs.iter().enumerate() {
                    let v = sum_bc(b, c, 2);
                    if (v - 1.0 / 3.0).abs() > TOL {
                        violations
                            .push(format!("{}.{}^2 = {} != 1/3", names_b[kb], names_c[kc], v));
                        ord3 = false;
                    }
                }
                for (ka, a) in mats.iter().enumerate() {
                    for (kc, c) in cs.iter().enumerate() {
                        let v = sum_bac(b, a, c);
                        if (v - 1.0 / 6.0).abs() > TOL {
                            violations.push(format!(
                                "{}.{}.{} = {} != 1/6",
                                names_b[kb], names_a[ka], names_c[kc], v
                            ));
                            ord3 = false;
                        }
                    }
                }
            }
            if ord3 {
                order = 3;
            }
        }
    }

    TableauReport { structure_ok, stiffly_accurate, order, violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_pair_is_first_order_only() {
        let pair = ButcherPair::imex1();
        let rep = validate_tableau(&pair);
        assert!(rep.structure_ok);
        assert!(rep.stiffly_accurate);
        assert_eq!(rep.order, 1);
        assert!(rep.satisfies(1));
        assert!(!rep.satisfies(3));
        // The order-2 failure is reported, not silent.
        assert!(rep.violations.iter().any(|v| v.contains("1/2")));
    }

    #[test]
    fn shipped_third_order_pair_passes_all_conditions() {
        let pair = ButcherPair::imex3();
        assert_eq!(pair.s, 5);
        let rep = validate_tableau(&pair);
        assert!(rep.structure_ok, "{:?}", rep.violations);
        assert!(rep.stiffly_accurate);
        assert_eq!(rep.order, 3, "{:?}", rep.violations);
        assert!(rep.satisfies(3));
        // First implicit stage is explicit (a11 = 0), later stages carry 1/2.
        assert_eq!(pair.a_im[0][0], 0.0);
        assert_eq!(pair.a_im[4][4], 0.5);
    }

    #[test]
    fn tampered_weights_are_flagged() {
        let mut pair = ButcherPair::imex3();
        pair.b_ex[0] += 1e-3;
        let rep = validate_tableau(&pair);
        assert!(rep.violations.iter().any(|v| v.contains("sum b~")));
        assert!(!rep.satisfies(3));
    }

    #[test]
    fn parser_rejects_truncated_files() {
        assert!(ButcherPair::parse("stage_count 2\n0 0 1 0").is_err());
        assert!(ButcherPair::parse("").is_err());
        assert!(ButcherPair::parse("stage_count x").is_err());
    }

    #[test]
    fn parse_roundtrips_through_rendered_text() {
        let pair = ButcherPair::imex3();
        let mut text = format!("stage_count {}\n", pair.s);
        let push_mat = |text: &mut String, m: &Vec<Vec<f64>>| {
            for row in m {
                for v in row {
                    text.push_str(&format!("{v:?} "));
                }
                text.push('\n');
            }
        };
        let push_vec = |text: &mut String, m: &Vec<f64>| {
            for v in m {
                text.push_str(&format!("{v:?} "));
            }
            text.push('\n');
        };
        push_mat(&mut text, &pair.a_ex);
        push_vec(&mut text, &pair.b_ex);
        push_vec(&mut text, &pair.c_ex);
        push_mat(&mut text, &pair.a_im);
        push_vec(&mut text, &pair.b_im);
        push_vec(&mut text, &pair.c_im);
        let back = ButcherPair::parse(&text).unwrap();
        assert_eq!(back.a_ex, pair.a_ex);
        assert_eq!(back.b_im, pair.b_im);
    }
}
