//! Deterministic girth-8 constructions with an arithmetic second row.
//!
//! Both constructions first build the girth-8 matrix over the integers and
//! then read it at any lifting degree `p >= p_min`. Row headers are
//! `a_i = i * d`. Column headers `nb_i = -b_i` are:
//!
//! * `d = 1`: `nb_i = (L + 1) i` for `1 <= i <= h` and
//!   `nb_i = (L + 2)(L - 1 - i) + 1` above, where `h = floor((L - 1) / 2)`.
//! * `d >= 2`, `L = 2qd + r`: the first `qd` headers form `q` complete residue
//!   systems mod `d`, the last `qd` mirror them through
//!   `nb_{L-1-i} = nb_i + (i + 1) d`, and the `r` middle headers depend on
//!   whether `r = 0`, `1 <= r <= d` or `d < r < 2d`.
//!
//! Each result is checked with [`check_m8_validity`] before it is returned.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::{ExponentMatrix, Girth8Matrix, Modulus};
use crate::girth::check_m8_validity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PermutationPolicy {
    /// Identity within each residue group, with one transposition where a
    /// group must place residue 1 at a given slot.
    IdentityMinTransposition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    D1,
    D2CaseI,
    D2CaseIi,
    D2CaseIii,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub l: usize,
    pub d: u64,
    /// `L = 2qd + r`; only meaningful for `d >= 2`.
    pub q: usize,
    pub r: usize,
    pub policy: PermutationPolicy,
}

impl ConstructionParams {
    pub fn new(l: usize, d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InfeasibleConstraint(0));
        }
        if l < 2 || (d >= 2 && (l as u64) < 2 * d) {
            return Err(Error::LTooSmall { l, d });
        }
        let dd = d as usize;
        let (q, r) = if d == 1 {
            (0, 0)
        } else {
            (l / (2 * dd), l % (2 * dd))
        };
        Ok(Self {
            l,
            d,
            q,
            r,
            policy: PermutationPolicy::IdentityMinTransposition,
        })
    }

    pub fn case(&self) -> CaseTag {
        let d = self.d as usize;
        match self.d {
            1 => CaseTag::D1,
            _ if self.r == 0 => CaseTag::D2CaseI,
            _ if self.r <= d => CaseTag::D2CaseIi,
            _ => CaseTag::D2CaseIii,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionResult {
    pub params: ConstructionParams,
    pub case: CaseTag,
    /// Girth-8 matrix over the integers.
    pub m8: Girth8Matrix,
    pub p_min: u64,
    pub e_min: ExponentMatrix,
    pub notes: Vec<String>,
}

impl ConstructionResult {
    /// Exponent matrix at lifting degree `p >= p_min`, with `b_i = (p - nb_i) mod p`.
    pub fn emit_for_p(&self, p: u64) -> Result<ExponentMatrix> {
        if p < self.p_min {
            return Err(Error::PTooSmall {
                p,
                p_min: self.p_min,
            });
        }
        self.m8.to_exponent(p)
    }

    /// Whether the headers give a valid girth-8 matrix mod `p` (any `p >= 2`).
    pub fn valid_at(&self, p: u64) -> bool {
        p >= 2
            && self
                .m8
                .at_modulus(p)
                .is_ok_and(|m| check_m8_validity(&m).valid)
    }
}

/// Minimal lifting degree of the construction for `(L, d)`, without building it.
pub fn p_min(l: usize, d: u64) -> Result<u64> {
    let params = ConstructionParams::new(l, d)?;
    let (l, d, r) = (l as u64, d, params.r as u64);
    // twice the threshold, then ceiling
    let twice = match params.case() {
        CaseTag::D1 => return Ok((l * l + l) / 2 + (l - 1) / 2),
        CaseTag::D2CaseI => l * l + l + l * d + 4 - 4 * d,
        CaseTag::D2CaseIi => l * l + l + (2 * d - r) * (l - 1),
        CaseTag::D2CaseIii => l * l + l + (2 * d - r) * (l - 1 - d) + d * l + 4 - 2 * r,
    };
    Ok(twice.div_ceil(2))
}

pub fn construct(l: usize, d: u64) -> Result<ConstructionResult> {
    if d == 1 {
        construct_d1(l)
    } else {
        construct_d2(l, d)
    }
}

pub fn construct_d1(l: usize) -> Result<ConstructionResult> {
    let params = ConstructionParams::new(l, 1)?;
    let h = (l - 1) / 2;
    let lu = l as u64;
    let a: Vec<u64> = (0..lu).collect();
    let nb: Vec<u64> = (0..l)
        .map(|i| {
            let i = i as u64;
            match i {
                0 => 0,
                _ if i <= h as u64 => (lu + 1) * i,
                _ => (lu + 2) * (lu - 1 - i) + 1,
            }
        })
        .collect();
    finish(params, a, nb, Vec::new())
}

/// Identity on `0..n` with value 1 moved to `slot` by one transposition.
fn residue_permutation(n: usize, one_at: Option<usize>) -> Vec<u64> {
    let mut perm: Vec<u64> = (0..n as u64).collect();
    if let Some(slot) = one_at {
        perm.swap(slot, 1);
    }
    perm
}

pub fn construct_d2(l: usize, d: u64) -> Result<ConstructionResult> {
    if d < 2 {
        return Err(Error::InfeasibleConstraint(d));
    }
    let params = ConstructionParams::new(l, d)?;
    let (q, r, du) = (params.q, params.r, d as usize);
    let lu = l as u64;
    let case = params.case();
    let mut notes = Vec::new();
    let mut nb = vec![0u64; l];

    for j in 0..q {
        let constrained = case == CaseTag::D2CaseI && j == q - 1;
        let perm = residue_permutation(du, constrained.then_some(du - 1));
        let base = j as u64 * d * (lu + 1);
        for k in 0..du {
            nb[j * du + k] = perm[k] + base;
        }
    }
    if case == CaseTag::D2CaseI && q == 1 {
        notes.push(
            "case i with q = 1: residue 1 placed at slot d-1 of the first group, whose slot 0 stays 0"
                .into(),
        );
    }
    for i in 0..q * du {
        nb[l - 1 - i] = nb[i] + (i as u64 + 1) * d;
    }

    let middle = q * du;
    let base = middle as u64 * (lu + 1);
    match case {
        CaseTag::D2CaseIi => {
            let perm = residue_permutation(r, None);
            for k in 0..r {
                nb[middle + k] = perm[k] + base;
            }
        }
        CaseTag::D2CaseIii => {
            let perm = residue_permutation(du, Some(r - du - 1));
            for k in 0..du {
                nb[middle + k] = perm[k] + base;
            }
            for t in 0..r - du {
                let i = middle + t;
                nb[l - 1 - i] = nb[i] + (i as u64 + 1) * d;
            }
        }
        _ => {}
    }

    let a = (0..lu).map(|i| i * d).collect();
    finish(params, a, nb, notes)
}

fn finish(
    params: ConstructionParams,
    a: Vec<u64>,
    nb: Vec<u64>,
    notes: Vec<String>,
) -> Result<ConstructionResult> {
    let p_min = p_min(params.l, params.d)?;
    let m8 = Girth8Matrix::new(a, nb, Modulus::Unbounded)?;
    let report = check_m8_validity(&m8);
    if !report.valid {
        return Err(Error::ConstructionInvalid(format!(
            "{:?} over the integers",
            report.violation
        )));
    }
    let max = m8.max_entry();
    if max + 1 > p_min {
        return Err(Error::ConstructionInvalid(format!(
            "largest entry {max} does not fit below p_min = {p_min}"
        )));
    }
    let e_min = m8.to_exponent(p_min)?;
    let at_min = check_m8_validity(&e_min.to_m8()?);
    if !at_min.valid {
        return Err(Error::ConstructionInvalid(format!(
            "{:?} at p = {p_min}",
            at_min.violation
        )));
    }
    Ok(ConstructionResult {
        case: params.case(),
        params,
        m8,
        p_min,
        e_min,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d1_l5_is_e1() {
        let r = construct_d1(5).unwrap();
        assert_eq!(r.p_min, 17);
        assert_eq!(r.m8.col_headers(), &[0, 6, 12, 8, 1]);
        assert_eq!(r.e_min.row(2), &[0, 11, 5, 9, 16]);
        assert_eq!(r.case, CaseTag::D1);
    }

    #[test]
    fn d1_l6_is_e2() {
        let r = construct_d1(6).unwrap();
        assert_eq!(r.p_min, 23);
        assert_eq!(r.e_min.row(1), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(r.e_min.row(2), &[0, 16, 9, 6, 14, 22]);
    }

    #[test]
    fn d1_l4() {
        let r = construct_d1(4).unwrap();
        assert_eq!(r.p_min, 11);
        assert_eq!(r.m8.col_headers(), &[0, 5, 7, 1]);
        assert!(r.valid_at(11));
    }

    #[test]
    fn d2_case_ii() {
        let r = construct_d2(5, 2).unwrap();
        assert_eq!((r.params.q, r.params.r), (1, 1));
        assert_eq!(r.case, CaseTag::D2CaseIi);
        assert_eq!(r.m8.row_headers(), &[0, 2, 4, 6, 8]);
        assert_eq!(r.m8.col_headers(), &[0, 1, 12, 5, 2]);
        assert_eq!(r.p_min, 21);
        assert!(r.valid_at(21));
    }

    #[test]
    fn d2_case_i_single_group() {
        let r = construct_d2(4, 2).unwrap();
        assert_eq!(r.case, CaseTag::D2CaseI);
        assert_eq!(r.m8.col_headers()[1], 1);
        assert_eq!(r.p_min, 12);
        assert_eq!(r.notes.len(), 1);
        // d = 3: the transposition is visible
        let r = construct_d2(6, 3).unwrap();
        assert_eq!(&r.m8.col_headers()[..3], &[0, 2, 1]);
    }

    #[test]
    fn d2_case_iii() {
        let r = construct_d2(7, 2).unwrap();
        assert_eq!((r.params.q, r.params.r), (1, 3));
        assert_eq!(r.case, CaseTag::D2CaseIii);
        assert_eq!(r.p_min, 36);
    }

    #[test]
    fn p_min_values() {
        assert_eq!(p_min(7, 1), Ok(31));
        assert_eq!(p_min(12, 1), Ok(83));
        assert_eq!(p_min(5, 2), Ok(21));
        assert_eq!(p_min(7, 2), Ok(36));
        assert_eq!(p_min(4, 2), Ok(12));
    }

    #[test]
    fn emit() {
        let r = construct_d1(6).unwrap();
        assert_eq!(r.emit_for_p(27).unwrap().row(2), &[0, 20, 13, 10, 18, 26]);
        let r5 = construct_d1(5).unwrap();
        assert_eq!(r5.emit_for_p(17).unwrap(), r5.e_min);
        assert_eq!(
            r5.emit_for_p(16),
            Err(Error::PTooSmall { p: 16, p_min: 17 })
        );
    }

    #[test]
    fn rejects_bad_params() {
        assert_eq!(
            construct_d1(1).unwrap_err(),
            Error::LTooSmall { l: 1, d: 1 }
        );
        assert_eq!(
            construct_d2(3, 2).unwrap_err(),
            Error::LTooSmall { l: 3, d: 2 }
        );
        assert_eq!(
            construct_d2(9, 1).unwrap_err(),
            Error::InfeasibleConstraint(1)
        );
        assert_eq!(p_min(5, 0), Err(Error::InfeasibleConstraint(0)));
    }

    #[test]
    fn qr_decomposition() {
        for d in 2..6u64 {
            for l in 2 * d as usize..40 {
                let p = ConstructionParams::new(l, d).unwrap();
                assert_eq!(l, 2 * p.q * d as usize + p.r);
                assert!(p.r < 2 * d as usize && p.q >= 1);
            }
        }
    }
}
