//! Closed-form bounds on `tw([H]_2)`, their applicability, and a report that
//! brackets exactly computed widths.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::derivations::two_section;
use crate::hypergraph::{Hypergraph, HypergraphError};
use crate::solvers::{exact_limit, exact_treewidth_with_limit, supertree_width_with_limit};
use crate::{format_rational, rat, strict_ceil, Rational};

pub mod appendix;
pub mod lemmas;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("inapplicable: {0}")]
    Inapplicable(String),
    #[error("hypergraph is not minimal")]
    NotMinimal,
    #[error("decomposition is not in leaf-based form: {0}")]
    InvalidDecomposition(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("outside the domain: {0}")]
    DomainError(String),
    #[error("enumeration bounds exceeded: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

fn inapplicable<T>(msg: impl Into<String>) -> Result<T, BoundsError> {
    Err(BoundsError::Inapplicable(msg.into()))
}

fn frac(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

/// `tw([H]_2) ≥ r − 1`.
pub fn eq1_lower(rank: usize) -> Rational {
    rat(rank as i64 - 1)
}

/// `tw([H]_2) ≥ stw/Δ − 1`.
pub fn eq2_lower(stw: usize, max_degree: usize) -> Rational {
    frac(stw as i64, max_degree as i64) - 1
}

/// `tw([H]_2) ≤ r·stw − 1`.
pub fn eq3_upper(stw: usize, rank: usize) -> Rational {
    rat((rank * stw) as i64 - 1)
}

/// `tw([H]_2) ≥ (stw − 1)/(Δ − 1) − 1`, for `Δ ≥ 2`.
pub fn lemma_2_3_lower(stw: usize, max_degree: usize) -> Result<Rational, BoundsError> {
    if max_degree < 2 {
        return inapplicable("needs maximum degree at least 2");
    }
    Ok(frac(stw as i64 - 1, max_degree as i64 - 1) - 1)
}

/// The two formulas of the average-rank bound, told apart by
/// `δ² − δ ≤ Δ − 2Δ/l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AverageRankBound {
    /// `tw` is strictly greater than this.
    pub value: Rational,
    pub branch: u8,
}

pub fn thm_1_1_lower(min_degree: usize, max_degree: usize, avg_rank: Rational) -> Result<AverageRankBound, BoundsError> {
    let (d, big) = (min_degree as i64, max_degree as i64);
    if d < 2 || big < d {
        return inapplicable(format!("needs Δ ≥ δ ≥ 2 (δ = {d}, Δ = {big})"));
    }
    if big > 2 * d * d - 2 * d {
        return inapplicable(format!("needs Δ ≤ 2δ² − 2δ = {} (Δ = {big})", 2 * d * d - 2 * d));
    }
    let l = avg_rank;
    let denom = rat(4 * big * d * (d - 1));
    let lead = rat(2 * d * d - 2 * d - big) * l * l;
    let first = rat(d * d - d) <= rat(big) - rat(2 * big) / l;
    let (num, branch) = if first {
        (lead + rat(2 * big + 4 * d * d - 4 * d) * l, 1)
    } else {
        (lead + rat(6 * big) * l - rat(8 * big), 2)
    };
    Ok(AverageRankBound { value: num / denom - 1, branch })
}

/// Strict lower bound for `h`-regular linear hypergraphs.
pub fn cor_3_4_lower(h: usize, avg_rank: Rational) -> Result<Rational, BoundsError> {
    if h < 2 {
        return inapplicable("needs regularity h ≥ 2");
    }
    let h = h as i64;
    let l = avg_rank;
    Ok((rat(2 * h - 3) * l * l + rat(6) * l - rat(8)) / rat(4 * h * (h - 1)) - 1)
}

/// Anti-rank bound for minimum degree at least 3.
pub fn thm_1_2_lower(s: usize) -> Rational {
    let s = rat(s as i64);
    if *s.numer() % 2 == 0 {
        frac(3, 8) * s * s + frac(3, 4) * s - 1
    } else {
        frac(3, 8) * s * s + frac(1, 2) * s - frac(7, 8)
    }
}

/// Anti-rank bound for minimum degree exactly 2.
pub fn thm_1_3_lower(s: usize) -> Rational {
    let s = rat(s as i64);
    if *s.numer() % 2 == 0 {
        frac(1, 4) * s * s + s - 1
    } else {
        frac(1, 4) * s * s + s - frac(5, 4)
    }
}

/// [`thm_1_2_lower`] or [`thm_1_3_lower`], whichever the minimum degree of a
/// linear `h` selects.
pub fn anti_rank_lower(h: &Hypergraph) -> Result<(Rational, &'static str), BoundsError> {
    if !h.is_linear() {
        return inapplicable("anti-rank bounds need a linear hypergraph");
    }
    match h.min_degree() {
        2 => Ok((thm_1_3_lower(h.anti_rank()), "thm13")),
        d if d >= 3 => Ok((thm_1_2_lower(h.anti_rank()), "thm12")),
        d => inapplicable(format!("minimum degree {d} is below 2")),
    }
}

/// `(2/3)·stw·r + (1/3)(stw − 1)² + (1/3)r − 1`.
pub fn thm_1_4_upper(stw: usize, rank: usize) -> Rational {
    let (k, r) = (rat(stw as i64), rat(rank as i64));
    frac(2, 3) * k * r + frac(1, 3) * (k - 1) * (k - 1) + frac(1, 3) * r - 1
}

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

/// One bound value. `rounded` is the integer consequence: the least width a
/// lower bound allows, or the greatest an upper bound allows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bound {
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
    pub side: Side,
    pub strict: bool,
    pub rounded: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<u8>,
}

impl Bound {
    pub fn lower(value: Rational) -> Self {
        Bound { value, side: Side::Lower, strict: false, rounded: value.ceil().to_integer(), branch: None }
    }

    pub fn strict_lower(value: Rational) -> Self {
        Bound { value, side: Side::Lower, strict: true, rounded: strict_ceil(&value), branch: None }
    }

    pub fn upper(value: Rational) -> Self {
        Bound { value, side: Side::Upper, strict: false, rounded: value.floor().to_integer(), branch: None }
    }

    /// Whether an exact width is consistent with this bound.
    pub fn admits(&self, width: usize) -> bool {
        let w = rat(width as i64);
        match (self.side, self.strict) {
            (Side::Lower, true) => w > self.value,
            (Side::Lower, false) => w >= self.value,
            (Side::Upper, _) => w <= self.value,
        }
    }
}

/// Eqs (1)–(3) and the supertree-width lower bound, where inputs permit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ElementaryBounds {
    pub eq1: Option<Bound>,
    pub eq2: Option<Bound>,
    pub eq3: Option<Bound>,
    pub lemma23: Option<Bound>,
    pub notes: BTreeMap<String, String>,
}

pub fn elementary_bounds(h: &Hypergraph, stw: Option<usize>) -> ElementaryBounds {
    let mut out = ElementaryBounds { eq1: Some(Bound::lower(eq1_lower(h.rank()))), ..Default::default() };
    let Some(stw) = stw else {
        out.notes.insert("stw".into(), "supertree width unknown; eq2, eq3, lemma23, thm14 omitted".into());
        return out;
    };
    out.eq2 = Some(Bound::lower(eq2_lower(stw, h.max_degree())));
    out.eq3 = Some(Bound::upper(eq3_upper(stw, h.rank())));
    match lemma_2_3_lower(stw, h.max_degree()) {
        Ok(v) => out.lemma23 = Some(Bound::lower(v)),
        Err(e) => {
            out.notes.insert("lemma23".into(), e.to_string());
        }
    }
    out
}

/// Every applicable bound for one hypergraph, with exact widths when asked
/// for and small enough.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub m: usize,
    pub rank: usize,
    pub anti_rank: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    #[serde(serialize_with = "ser_rational")]
    pub avg_rank: Rational,
    pub is_linear: bool,
    pub bounds: BTreeMap<String, Bound>,
    pub exact_tw: Option<usize>,
    pub exact_stw: Option<usize>,
    pub notes: BTreeMap<String, String>,
}

impl BoundsReport {
    pub fn get(&self, name: &str) -> Option<&Bound> {
        self.bounds.get(name)
    }

    /// Largest integer lower bound.
    pub fn best_lower(&self) -> i64 {
        self.bounds.values().filter(|b| b.side == Side::Lower).map(|b| b.rounded).max().unwrap_or(0)
    }

    pub fn best_upper(&self) -> Option<i64> {
        self.bounds.values().filter(|b| b.side == Side::Upper).map(|b| b.rounded).min()
    }

    /// Names of bounds the exact treewidth violates.
    pub fn violations(&self) -> Vec<String> {
        let Some(tw) = self.exact_tw else {
            return Vec::new();
        };
        self.bounds.iter().filter(|(_, b)| !b.admits(tw)).map(|(k, _)| k.clone()).collect()
    }

    /// Names of bounds whose integer consequence equals the exact treewidth.
    pub fn tight(&self) -> Vec<String> {
        let Some(tw) = self.exact_tw else {
            return Vec::new();
        };
        self.bounds.iter().filter(|(_, b)| b.rounded == tw as i64).map(|(k, _)| k.clone()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(tw) = self.exact_tw {
            v["sandwich_ok"] = self.violations().is_empty().into();
            v["tight"] = self.tight().into();
            v["equal"] = (self.best_lower() == tw as i64).into();
        }
        v
    }
}

/// Fills every bound whose hypotheses `h` meets; the rest get a note.
pub fn bounds_report_with(h: &Hypergraph, exact_tw: Option<usize>, exact_stw: Option<usize>) -> BoundsReport {
    let stats = h.stats();
    let mut bounds = BTreeMap::new();
    let elem = elementary_bounds(h, exact_stw);
    let mut notes = elem.notes;
    for (name, b) in [("eq1", elem.eq1), ("eq2", elem.eq2), ("eq3", elem.eq3), ("lemma23", elem.lemma23)] {
        if let Some(b) = b {
            bounds.insert(name.to_string(), b);
        }
    }
    if stats.is_linear {
        match thm_1_1_lower(stats.min_degree, stats.max_degree, stats.avg_rank) {
            Ok(t) => {
                bounds.insert("thm11".into(), Bound { branch: Some(t.branch), ..Bound::strict_lower(t.value) });
            }
            Err(e) => {
                notes.insert("thm11".into(), e.to_string());
            }
        }
        match anti_rank_lower(h) {
            Ok((v, name)) => {
                bounds.insert(name.into(), Bound::lower(v));
            }
            Err(e) => {
                notes.insert("thm12_13".into(), e.to_string());
            }
        }
        match stats.regular {
            Some(k) if k >= 2 => {
                bounds.insert("cor34".into(), Bound::strict_lower(cor_3_4_lower(k, stats.avg_rank).expect("k >= 2")));
            }
            _ => {
                notes.insert("cor34".into(), "needs an h-regular hypergraph with h ≥ 2".into());
            }
        }
        if let Some(stw) = exact_stw {
            bounds.insert("thm14".into(), Bound::upper(thm_1_4_upper(stw, stats.rank)));
            if stats.rank + 1 < stw {
                notes.insert("thm14".into(), "r < stw − 1: Eq (3) is the sharper upper bound".into());
            }
        }
    } else {
        notes.insert("linear".into(), "not linear: theorem bounds omitted".into());
    }
    BoundsReport {
        n: stats.n,
        m: stats.m,
        rank: stats.rank,
        anti_rank: stats.anti_rank,
        min_degree: stats.min_degree,
        max_degree: stats.max_degree,
        avg_rank: stats.avg_rank,
        is_linear: stats.is_linear,
        bounds,
        exact_tw,
        exact_stw,
        notes,
    }
}

/// [`bounds_report_with`] after computing `tw([H]_2)` and `stw(H)` exactly
/// when `compute_exact` is set and both fit under the solver limit.
pub fn bounds_report(h: &Hypergraph, compute_exact: bool) -> BoundsReport {
    let limit = exact_limit();
    let (mut tw, mut stw) = (None, None);
    let mut skipped = Vec::new();
    if compute_exact {
        match exact_treewidth_with_limit(&two_section(h), None, limit) {
            Ok(r) => tw = Some(r.width),
            Err(e) => skipped.push(format!("tw: {e}")),
        }
        match supertree_width_with_limit(h, limit) {
            Ok(r) => stw = Some(r.width),
            Err(e) => skipped.push(format!("stw: {e}")),
        }
    }
    let mut report = bounds_report_with(h, tw, stw);
    if !skipped.is_empty() {
        report.notes.insert("exact".into(), skipped.join("; "));
    }
    report
}
