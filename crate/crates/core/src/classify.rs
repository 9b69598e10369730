//! Membership verdicts of β_{a,b}^{-s} in the classes 𝓜, 𝓗, 𝓔𝓛𝓟₋, 𝓢, 𝓘 and 𝓖.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::betapower::Params;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Member,
    NonMember,
    Unknown,
}

impl Status {
    /// One-letter code used in region grids.
    pub fn code(self) -> char {
        match self {
            Status::Member => 'M',
            Status::NonMember => 'N',
            Status::Unknown => 'U',
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Member => "Member",
            Status::NonMember => "NonMember",
            Status::Unknown => "Unknown",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub reason: String,
}

impl Verdict {
    fn new(status: Status, reason: impl Into<String>) -> Self {
        Self { status, reason: reason.into() }
    }

    pub fn is_member(&self) -> bool {
        self.status == Status::Member
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub params: Params,
    pub m_class: Verdict,
    pub hcm_class: Verdict,
    pub elp_class: Verdict,
    pub sd_class: Verdict,
    pub id_class: Verdict,
    pub ggc_class: Verdict,
    pub c1: f64,
    pub c2: f64,
}

#[derive(Serialize)]
struct ParamsJson {
    a: f64,
    b: f64,
    s: f64,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    params: ParamsJson,
    m: Status,
    hcm: Status,
    elp: Status,
    sd: Status,
    id: Status,
    ggc: Status,
    reasons: BTreeMap<&'static str, &'a str>,
    c1: f64,
    c2: f64,
}

impl Serialize for ClassificationReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let reasons = self.verdicts().into_iter().map(|(k, v)| (k, v.reason.as_str())).collect();
        ReportJson {
            params: ParamsJson { a: self.params.a(), b: self.params.b(), s: self.params.s() },
            m: self.m_class.status,
            hcm: self.hcm_class.status,
            elp: self.elp_class.status,
            sd: self.sd_class.status,
            id: self.id_class.status,
            ggc: self.ggc_class.status,
            reasons,
            c1: self.c1,
            c2: self.c2,
        }
        .serialize(serializer)
    }
}

impl ClassificationReport {
    /// The six verdicts keyed by their JSON names.
    pub fn verdicts(&self) -> [(&'static str, &Verdict); 6] {
        [
            ("m", &self.m_class),
            ("hcm", &self.hcm_class),
            ("elp", &self.elp_class),
            ("sd", &self.sd_class),
            ("id", &self.id_class),
            ("ggc", &self.ggc_class),
        ]
    }

    /// Violated inclusions of the class lattice; empty for a consistent report.
    pub fn lattice_violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        let implies = |x: &Verdict, y: &Verdict| !x.is_member() || y.is_member();
        if !implies(&self.hcm_class, &self.ggc_class) {
            v.push("hcm => ggc");
        }
        if !implies(&self.m_class, &self.id_class) {
            v.push("m => id");
        }
        if !implies(&self.elp_class, &self.sd_class) {
            v.push("elp => sd");
        }
        if !implies(&self.sd_class, &self.id_class) {
            v.push("sd => id");
        }
        if !implies(&self.ggc_class, &self.sd_class) {
            v.push("ggc => sd");
        }
        if !self.id_class.is_member() {
            v.push("id always");
        }
        v
    }
}

/// Some(n) when v is within 1e-12·max(1, v) of a positive integer n.
pub fn natural_number(v: f64) -> Option<u64> {
    let r = v.round();
    if r >= 1.0 && (v - r).abs() <= 1e-12 * v.max(1.0) {
        Some(r as u64)
    } else {
        None
    }
}

/// b∧s ≤ 1 ≤ 2a + b + s + bs.
pub fn in_elp_region(p: Params) -> bool {
    p.b().min(p.s()) <= 1.0 && p.sd_index() >= 1.0
}

/// C₁ = ½((1−2a)/s − 1) − (b/2)(1/s + 1) and C₂ = 1 + a/s + ((b−1)/12)(1/s + 1)(1/s + 5).
pub fn c1_c2(p: Params) -> (f64, f64) {
    let (a, b, s) = (p.a(), p.b(), p.s());
    let c1 = 0.5 * ((1.0 - 2.0 * a) / s - 1.0) - 0.5 * b * (1.0 / s + 1.0);
    let c2 = 1.0 + a / s + (b - 1.0) / 12.0 * (1.0 / s + 1.0) * (1.0 / s + 5.0);
    (c1, c2)
}

/// −log β_{a,b} is self-decomposable iff 2a + b ≥ 1.
pub fn logbeta_sd_check(p: Params) -> bool {
    2.0 * p.a() + p.b() >= 1.0
}

fn m_verdict(p: Params) -> Verdict {
    if p.b() <= 1.0 {
        Verdict::new(Status::Member, "b <= 1: the density of the perpetuity is log-convex")
    } else {
        Verdict::new(Status::NonMember, "b > 1: the density is not log-convex near the origin")
    }
}

fn hcm_verdict(p: Params) -> Verdict {
    let (a, b, s) = (p.a(), p.b(), p.s());
    if b.min(s) > 1.0 {
        Verdict::new(Status::Member, "b ∧ s > 1")
    } else if b == 1.0 || s == 1.0 {
        Verdict::new(Status::Member, "b = 1 or s = 1")
    } else if b < 1.0 && (0.5..1.0).contains(&s) && a + b + s >= 1.0 {
        Verdict::new(Status::Member, "b < 1, 1/2 <= s < 1 and a + b + s >= 1")
    } else {
        Verdict::new(
            Status::NonMember,
            "none of: b ∧ s > 1; b = 1 or s = 1; b < 1, 1/2 <= s < 1, a + b + s >= 1",
        )
    }
}

fn elp_verdict(p: Params) -> Verdict {
    if in_elp_region(p) {
        Verdict::new(Status::Member, "b ∧ s <= 1 <= 2a + b + s + bs")
    } else if p.b().min(p.s()) > 1.0 {
        Verdict::new(Status::NonMember, "b ∧ s > 1")
    } else {
        Verdict::new(Status::NonMember, "2a + b + s + bs < 1")
    }
}

fn sd_verdict(p: Params) -> Verdict {
    if p.sd_index() >= 1.0 {
        Verdict::new(Status::Member, "2a + b + s + bs >= 1")
    } else {
        Verdict::new(Status::NonMember, "2a + b + s + bs < 1")
    }
}

const GGC_CONJECTURE: &str =
    "membership conjectured at least when b ∨ s >= 1; not decided by the available criteria";

fn ggc_verdict(p: Params, hcm: &Verdict, c2: f64) -> Verdict {
    if hcm.is_member() {
        Verdict::new(Status::Member, "hyperbolically completely monotone, and 𝓗 ⊂ 𝓖")
    } else if natural_number(p.b()).is_some() {
        Verdict::new(Status::Member, "b is a positive integer")
    } else if c2 < 0.0 {
        Verdict::new(Status::NonMember, "C₂ < 0: g is not log-convex, hence not completely monotone")
    } else {
        Verdict::new(Status::Unknown, GGC_CONJECTURE)
    }
}

pub fn classify(p: Params) -> ClassificationReport {
    let (c1, c2) = c1_c2(p);
    let hcm_class = hcm_verdict(p);
    let ggc_class = ggc_verdict(p, &hcm_class, c2);
    ClassificationReport {
        params: p,
        m_class: m_verdict(p),
        elp_class: elp_verdict(p),
        sd_class: sd_verdict(p),
        id_class: Verdict::new(Status::Member, "β^{-s} is infinitely divisible for all a, b, s > 0"),
        hcm_class,
        ggc_class,
        c1,
        c2,
    }
}

/// One cell of a verdict grid over (s, b) at fixed a.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionCell {
    pub s: f64,
    pub b: f64,
    pub report: ClassificationReport,
}

/// Verdicts at the centres of a resolution × resolution grid on (0, s_max] × (0, b_max],
/// ordered by s then b.
pub fn region_grid(a: f64, b_max: f64, s_max: f64, resolution: usize) -> crate::Result<Vec<RegionCell>> {
    let mut cells = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        let s = s_max * (i as f64 + 0.5) / resolution as f64;
        for j in 0..resolution {
            let b = b_max * (j as f64 + 0.5) / resolution as f64;
            cells.push(RegionCell { s, b, report: classify(Params::new(a, b, s)?) });
        }
    }
    Ok(cells)
}
