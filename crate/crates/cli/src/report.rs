//! Text and JSON rendering of reports.

use std::io::{self, Write};

use rrcyclic::codes::{span_basis, CyclicCode};
use rrcyclic::torsion::Trace;
use rrcyclic::weights::{min_weights, Basis, Metric, WeightReport};
use serde::Serialize;

use crate::codefile::{format_code_file, format_generator};
use crate::Trial;

const DEGREE_NAMES: [&str; 4] = ["r", "r1", "r2", "r3"];

/// Present generator degrees, e.g. `r=3;r1=2`.
pub fn degrees_field(code: &CyclicCode) -> String {
    code.ideal_type()
        .levels()
        .map(|l| format!("{}={}", DEGREE_NAMES[l], code.degree(l).expect("present")))
        .collect::<Vec<_>>()
        .join(";")
}

#[derive(Debug, Clone, Serialize)]
pub struct SBasisMinima {
    pub min_sp: Option<usize>,
    pub min_rt: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

pub fn s_basis_minima(code: &CyclicCode, cap: u64) -> SBasisMinima {
    let basis = span_basis(code);
    match min_weights(&basis, &[Metric::SymbolPair, Metric::Rt], Basis::SBasis, cap) {
        Ok(m) => SBasisMinima {
            min_sp: Some(m[0]),
            min_rt: Some(m[1]),
            skipped: None,
        },
        Err(e) => SBasisMinima {
            min_sp: None,
            min_rt: None,
            skipped: Some(e.to_string()),
        },
    }
}

#[derive(Serialize)]
struct GeneratorJson {
    level: usize,
    expr: String,
}

#[derive(Serialize)]
struct AnalyzeJson<'a> {
    t3: usize,
    wt_sp: usize,
    wt_rt: usize,
    ideal_type: String,
    p: u32,
    m: u32,
    k: u32,
    n: usize,
    generators: Vec<GeneratorJson>,
    basis_used: Basis,
    verified: &'a Option<rrcyclic::weights::Verification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s_basis: Option<&'a SBasisMinima>,
    trace: &'a Trace,
}

pub fn write_analyze_json(
    out: &mut dyn Write,
    code: &CyclicCode,
    report: &WeightReport,
    s_minima: Option<&SBasisMinima>,
) -> io::Result<()> {
    let doc = AnalyzeJson {
        t3: report.t3,
        wt_sp: report.wt_sp,
        wt_rt: report.wt_rt,
        ideal_type: code.ideal_type().to_string(),
        p: code.p(),
        m: code.field().degree(),
        k: code.k(),
        n: code.n(),
        generators: code
            .ideal_type()
            .levels()
            .map(|level| GeneratorJson {
                level,
                expr: format_generator(code, level).expect("present"),
            })
            .collect(),
        basis_used: report.basis_used,
        verified: &report.verified,
        s_basis: s_minima,
        trace: &report.trace,
    };
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)
}

fn write_trace(out: &mut dyn Write, trace: &Trace, depth: usize) -> io::Result<()> {
    let pad = "  ".repeat(depth);
    writeln!(out, "{pad}case: {}", trace.case)?;
    for e in &trace.set {
        let fmt = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
        writeln!(
            out,
            "{pad}  {}: {}  (omega {}, omega~ {})",
            e.source,
            e.element,
            fmt(e.omega),
            fmt(e.omega_tilde)
        )?;
    }
    if let Some(nu) = trace.nu {
        writeln!(out, "{pad}  nu = {nu}")?;
    }
    for t in &trace.taus {
        match t.value {
            Some(v) => writeln!(out, "{pad}  {} = {v}", t.label)?,
            None => writeln!(out, "{pad}  {} vanishes", t.label)?,
        }
    }
    if let Some(sub) = &trace.sub {
        write_trace(out, sub, depth + 1)?;
    }
    let cands: Vec<String> = trace.candidates.iter().map(|c| format!("{}={}", c.label, c.value)).collect();
    writeln!(out, "{pad}  min{{{}}}", cands.join(", "))?;
    if !trace.dropped.is_empty() {
        let dropped: Vec<String> = trace.dropped.iter().map(|c| format!("{}={}", c.label, c.value)).collect();
        writeln!(out, "{pad}  dropped (>= n): {}", dropped.join(", "))?;
    }
    Ok(())
}

pub fn write_analyze_text(
    out: &mut dyn Write,
    code: &CyclicCode,
    report: &WeightReport,
    s_minima: Option<&SBasisMinima>,
) -> io::Result<()> {
    writeln!(
        out,
        "code {} over F_{} (p={} m={}), k={}, n={}",
        code.ideal_type(),
        code.field().order(),
        code.p(),
        code.field().degree(),
        code.k(),
        code.n()
    )?;
    for line in format_code_file(code).lines().skip(2) {
        writeln!(out, "  {line}")?;
    }
    writeln!(out, "t3 = {}", report.t3)?;
    write_trace(out, &report.trace, 1)?;
    writeln!(out, "wt_sp = {}", report.wt_sp)?;
    writeln!(out, "wt_rt = {}", report.wt_rt)?;
    if let Some(v) = &report.verified {
        let t = v.oracle_t;
        writeln!(out, "oracle t0..t3 = {} {} {} {}", t[0], t[1], t[2], t[3])?;
        writeln!(
            out,
            "t3 formula==oracle: {}",
            if v.t3_agrees { "yes" } else { "NO" }
        )?;
        match (&v.enumeration, &v.enumeration_skipped) {
            (Some(e), _) => writeln!(
                out,
                "enumeration (rank {}): min_sp {} [{}], min_rt {} [{}], min_hamming {}",
                e.rank,
                e.min_sp,
                if e.sp_agrees { "ok" } else { "MISMATCH" },
                e.min_rt,
                if e.rt_agrees { "ok" } else { "MISMATCH" },
                e.min_hamming
            )?,
            (None, Some(reason)) => writeln!(out, "enumeration skipped: {reason}")?,
            (None, None) => {}
        }
        writeln!(out, "verdict: {}", if v.agrees() { "pass" } else { "FAIL" })?;
    }
    if let Some(s) = s_minima {
        match (s.min_sp, s.min_rt) {
            (Some(sp), Some(rt)) => writeln!(out, "s-basis minima: min_sp {sp}, min_rt {rt}")?,
            _ => writeln!(out, "s-basis minima skipped: {}", s.skipped.as_deref().unwrap_or(""))?,
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub trial: usize,
    pub ideal_type: String,
    pub code: String,
    pub t3_formula: usize,
    pub t3_oracle: Option<usize>,
    pub wt_sp: usize,
    pub wt_rt: usize,
    pub min_sp: Option<usize>,
    pub min_rt: Option<usize>,
}

impl Mismatch {
    pub fn of(t: &Trial) -> Mismatch {
        let v = t.report.verified.as_ref();
        let e = v.and_then(|v| v.enumeration.as_ref());
        Mismatch {
            trial: t.index,
            ideal_type: t.code.ideal_type().to_string(),
            code: format_code_file(&t.code),
            t3_formula: t.report.t3,
            t3_oracle: v.map(|v| v.oracle_t[3]),
            wt_sp: t.report.wt_sp,
            wt_rt: t.report.wt_rt,
            min_sp: e.map(|e| e.min_sp),
            min_rt: e.map(|e| e.min_rt),
        }
    }

    pub fn line(&self) -> String {
        let gens: Vec<&str> = self.code.lines().skip(2).collect();
        format!(
            "mismatch trial {} {}: t3 formula {} oracle {:?}; wt_sp {} enum {:?}; wt_rt {} enum {:?}; {}",
            self.trial,
            self.ideal_type,
            self.t3_formula,
            self.t3_oracle,
            self.wt_sp,
            self.min_sp,
            self.wt_rt,
            self.min_rt,
            gens.join("; ")
        )
    }
}
