//! Deterministic run reports: a flat structured-text document plus
//! per-probe CSV exports, with an exact emit/parse round trip.
//!
//! Everything written to disk is a pure function of (config, seed);
//! wall-clock time is deliberately kept out of the file so two runs of
//! the same scenario produce byte-identical output.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;

use crate::dynamics::{ProbeReport, Verdict};
use crate::error::{OpdynError, Result};

pub const REPORT_VERSION: u32 = 1;

/// Canonical complex formatting: `re±imi`, both parts in shortest
/// round-trip decimal.
pub fn format_c64(z: C64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Inverse of [`format_c64`]; also accepts a bare real.
pub fn parse_c64(s: &str) -> Result<C64> {
    let bad = || OpdynError::Config(format!("malformed complex value `{s}`"));
    let s = s.trim();
    if let Some(body) = s.strip_suffix('i') {
        // split at the sign of the imaginary part: the last +/- that is
        // not a leading sign and not part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let c = bytes[k];
            if (c == b'+' || c == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let k = split.ok_or_else(bad)?;
        let re: f64 = body[..k].parse().map_err(|_| bad())?;
        let sign = if bytes[k] == b'-' { -1.0 } else { 1.0 };
        let im: f64 = body[k + 1..].parse().map_err(|_| bad())?;
        Ok(C64::new(re, sign * im))
    } else {
        let re: f64 = s.parse().map_err(|_| bad())?;
        Ok(C64::new(re, 0.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateSummary {
    pub kind: String,
    pub eigenvalue: Option<C64>,
    pub residual: Option<f64>,
    pub component: Option<Vec<C64>>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSummary {
    pub name: String,
    pub verdict: String,
    pub truncation_evidence_only: bool,
    pub params: Vec<(String, String)>,
    pub flags: Vec<String>,
    pub certificate: Option<CertificateSummary>,
    pub steps: Vec<(u64, f64, f64)>,
}

impl ProbeSummary {
    pub fn from_probe(p: &ProbeReport) -> Self {
        ProbeSummary {
            name: p.probe.clone(),
            verdict: p.verdict().as_str().to_string(),
            truncation_evidence_only: p.truncation_evidence_only,
            params: p.params.clone(),
            flags: p.flags.clone(),
            certificate: p.certificate().map(|c| CertificateSummary {
                kind: c.kind.clone(),
                eigenvalue: c.eigenvalue,
                residual: c.residual,
                component: c.component.clone(),
                detail: c.detail.clone(),
            }),
            steps: p.steps.iter().map(|s| (s.n, s.score, s.residual)).collect(),
        }
    }

    /// Tabular export: header plus one row per step, LF line endings.
    pub fn tabular(&self) -> String {
        let mut out = String::from("n,score,residual\n");
        for (n, score, residual) in &self.steps {
            let _ = writeln!(out, "{n},{score},{residual}");
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub version: u32,
    pub scenario: String,
    pub anchor: String,
    /// Headline verdict; "no-op" when the probe list is empty.
    pub verdict: String,
    /// Config echo, sorted by key.
    pub config: Vec<(String, String)>,
    pub probes: Vec<ProbeSummary>,
}

impl RunReport {
    pub fn new(
        scenario: &str,
        anchor: &str,
        config: Vec<(String, String)>,
        probes: Vec<ProbeSummary>,
    ) -> Self {
        let verdict = headline(&probes);
        RunReport {
            version: REPORT_VERSION,
            scenario: scenario.to_string(),
            anchor: anchor.to_string(),
            verdict,
            config,
            probes,
        }
    }
}

/// Aggregate verdict: an obstruction certificate anywhere wins, then
/// positive evidence, then inconclusive; no probes at all is a no-op.
fn headline(probes: &[ProbeSummary]) -> String {
    if probes.is_empty() {
        return "no-op".into();
    }
    let any = |v: Verdict| probes.iter().any(|p| p.verdict == v.as_str());
    if any(Verdict::Obstructed) {
        "obstructed".into()
    } else if any(Verdict::EvidenceFor) {
        "evidence-for".into()
    } else {
        "inconclusive".into()
    }
}

pub fn emit_report(r: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "opdyn_report_version: {}", r.version);
    let _ = writeln!(out, "scenario: {}", r.scenario);
    let _ = writeln!(out, "anchor: {}", r.anchor);
    let _ = writeln!(out, "verdict: {}", r.verdict);
    let _ = writeln!(out, "config_count: {}", r.config.len());
    for (k, v) in &r.config {
        let _ = writeln!(out, "config.{k}: {v}");
    }
    let _ = writeln!(out, "probe_count: {}", r.probes.len());
    for (i, p) in r.probes.iter().enumerate() {
        let _ = writeln!(out, "probe.{i}.name: {}", p.name);
        let _ = writeln!(out, "probe.{i}.verdict: {}", p.verdict);
        let _ = writeln!(
            out,
            "probe.{i}.truncation_evidence_only: {}",
            p.truncation_evidence_only
        );
        let _ = writeln!(out, "probe.{i}.param_count: {}", p.params.len());
        for (j, (k, v)) in p.params.iter().enumerate() {
            let _ = writeln!(out, "probe.{i}.param.{j}: {k}={v}");
        }
        let _ = writeln!(out, "probe.{i}.flag_count: {}", p.flags.len());
        for (j, f) in p.flags.iter().enumerate() {
            let _ = writeln!(out, "probe.{i}.flag.{j}: {f}");
        }
        match &p.certificate {
            None => {
                let _ = writeln!(out, "probe.{i}.certificate: none");
            }
            Some(c) => {
                let _ = writeln!(out, "probe.{i}.certificate: present");
                let _ = writeln!(out, "probe.{i}.certificate.kind: {}", c.kind);
                if let Some(z) = c.eigenvalue {
                    let _ = writeln!(
                        out,
                        "probe.{i}.certificate.eigenvalue: {}",
                        format_c64(z)
                    );
                }
                if let Some(res) = c.residual {
                    let _ = writeln!(out, "probe.{i}.certificate.residual: {res}");
                }
                if let Some(pts) = &c.component {
                    let joined: Vec<String> =
                        pts.iter().map(|z| format_c64(*z)).collect();
                    let _ = writeln!(
                        out,
                        "probe.{i}.certificate.component: {}",
                        joined.join(";")
                    );
                }
                let _ = writeln!(out, "probe.{i}.certificate.detail: {}", c.detail);
            }
        }
        let _ = writeln!(out, "probe.{i}.step_count: {}", p.steps.len());
        for (j, (n, score, residual)) in p.steps.iter().enumerate() {
            let _ = writeln!(out, "probe.{i}.step.{j}: {n},{score},{residual}");
        }
    }
    out
}

struct LineReader<'a> {
    lines: std::iter::Peekable<std::str::Lines<'a>>,
    lineno: usize,
}

impl<'a> LineReader<'a> {
    fn new(text: &'a str) -> Self {
        LineReader { lines: text.lines().peekable(), lineno: 0 }
    }

    /// Consume the next line, which must carry exactly `key`.
    fn expect(&mut self, key: &str) -> Result<String> {
        let (k, v) = self.next_kv()?;
        if k != key {
            return Err(OpdynError::Config(format!(
                "report line {}: expected key `{key}`, found `{k}`",
                self.lineno
            )));
        }
        Ok(v)
    }

    /// Consume the next line only if its key matches.
    fn take_if(&mut self, key: &str) -> Option<String> {
        let line = *self.lines.peek()?;
        let (k, v) = split_kv(line)?;
        if k == key {
            self.lines.next();
            self.lineno += 1;
            Some(v.to_string())
        } else {
            None
        }
    }

    fn next_kv(&mut self) -> Result<(String, String)> {
        let line = self.lines.next().ok_or_else(|| {
            OpdynError::Config(format!(
                "report truncated after line {}",
                self.lineno
            ))
        })?;
        self.lineno += 1;
        let (k, v) = split_kv(line).ok_or_else(|| {
            OpdynError::Config(format!(
                "report line {}: missing `: ` separator",
                self.lineno
            ))
        })?;
        Ok((k.to_string(), v.to_string()))
    }
}

fn split_kv(line: &str) -> Option<(&str, &str)> {
    let idx = line.find(": ")?;
    Some((&line[..idx], &line[idx + 2..]))
}

fn parse_count(v: &str, what: &str) -> Result<usize> {
    v.parse()
        .map_err(|_| OpdynError::Config(format!("malformed {what} count `{v}`")))
}

fn parse_f64(v: &str, what: &str) -> Result<f64> {
    v.parse()
        .map_err(|_| OpdynError::Config(format!("malformed {what} `{v}`")))
}

pub fn parse_report(text: &str) -> Result<RunReport> {
    let mut r = LineReader::new(text);
    let version: u32 = r
        .expect("opdyn_report_version")?
        .parse()
        .map_err(|_| OpdynError::Config("malformed report version".into()))?;
    let scenario = r.expect("scenario")?;
    let anchor = r.expect("anchor")?;
    let verdict = r.expect("verdict")?;

    let n_config = parse_count(&r.expect("config_count")?, "config")?;
    let mut config = Vec::with_capacity(n_config);
    for _ in 0..n_config {
        let (k, v) = r.next_kv()?;
        let key = k.strip_prefix("config.").ok_or_else(|| {
            OpdynError::Config(format!("expected a config.* line, found `{k}`"))
        })?;
        config.push((key.to_string(), v));
    }

    let n_probes = parse_count(&r.expect("probe_count")?, "probe")?;
    let mut probes = Vec::with_capacity(n_probes);
    for i in 0..n_probes {
        let p = format!("probe.{i}");
        let name = r.expect(&format!("{p}.name"))?;
        let verdict = r.expect(&format!("{p}.verdict"))?;
        let teo = r.expect(&format!("{p}.truncation_evidence_only"))? == "true";

        let n_params = parse_count(&r.expect(&format!("{p}.param_count"))?, "param")?;
        let mut params = Vec::with_capacity(n_params);
        for j in 0..n_params {
            let line = r.expect(&format!("{p}.param.{j}"))?;
            let (k, v) = line.split_once('=').ok_or_else(|| {
                OpdynError::Config(format!("malformed param line `{line}`"))
            })?;
            params.push((k.to_string(), v.to_string()));
        }

        let n_flags = parse_count(&r.expect(&format!("{p}.flag_count"))?, "flag")?;
        let mut flags = Vec::with_capacity(n_flags);
        for j in 0..n_flags {
            flags.push(r.expect(&format!("{p}.flag.{j}"))?);
        }

        let certificate = match r.expect(&format!("{p}.certificate"))?.as_str() {
            "none" => None,
            "present" => {
                let kind = r.expect(&format!("{p}.certificate.kind"))?;
                let eigenvalue = r
                    .take_if(&format!("{p}.certificate.eigenvalue"))
                    .map(|v| parse_c64(&v))
                    .transpose()?;
                let residual = r
                    .take_if(&format!("{p}.certificate.residual"))
                    .map(|v| parse_f64(&v, "certificate residual"))
                    .transpose()?;
                let component = r
                    .take_if(&format!("{p}.certificate.component"))
                    .map(|v| {
                        v.split(';')
                            .map(parse_c64)
                            .collect::<Result<Vec<C64>>>()
                    })
                    .transpose()?;
                let detail = r.expect(&format!("{p}.certificate.detail"))?;
                Some(CertificateSummary { kind, eigenvalue, residual, component, detail })
            }
            other => {
                return Err(OpdynError::Config(format!(
                    "malformed certificate marker `{other}`"
                )))
            }
        };

        let n_steps = parse_count(&r.expect(&format!("{p}.step_count"))?, "step")?;
        let mut steps = Vec::with_capacity(n_steps);
        for j in 0..n_steps {
            let line = r.expect(&format!("{p}.step.{j}"))?;
            let mut parts = line.split(',');
            let step = (|| -> Option<(u64, f64, f64)> {
                let n = parts.next()?.parse().ok()?;
                let score = parts.next()?.parse().ok()?;
                let residual = parts.next()?.parse().ok()?;
                if parts.next().is_some() {
                    return None;
                }
                Some((n, score, residual))
            })()
            .ok_or_else(|| {
                OpdynError::Config(format!("malformed step line `{line}`"))
            })?;
            steps.push(step);
        }

        probes.push(ProbeSummary {
            name,
            verdict,
            truncation_evidence_only: teo,
            params,
            flags,
            certificate,
            steps,
        });
    }

    Ok(RunReport { version, scenario, anchor, verdict, config, probes })
}

/// Atomic write: the content lands under a temporary name first and is
/// renamed into place, so readers never observe a half-written file.
fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, content.as_bytes())?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Write the structured-text report plus one CSV per probe into `dir`.
/// Returns the paths written, report first.
pub fn write_report_files(report: &RunReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    let report_path = dir.join(format!("{}_report.txt", report.scenario));
    write_atomic(&report_path, &emit_report(report))?;
    written.push(report_path);

    for (i, p) in report.probes.iter().enumerate() {
        let csv_path = dir.join(format!("{}_probe{}_{}.csv", report.scenario, i, p.name));
        write_atomic(&csv_path, &p.tabular())?;
        written.push(csv_path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn complex_format_round_trip() {
        for z in [
            c(0.0, 0.0),
            c(1.5, -0.25),
            c(-3.0, 2.0),
            c(1e-15, -1e30),
            c(0.1 + 0.2, -1.0 / 3.0),
        ] {
            let s = format_c64(z);
            assert!(s.ends_with('i') && (s.contains('+') || s.matches('-').count() >= 1));
            assert_eq!(parse_c64(&s).unwrap(), z);
        }
        assert_eq!(parse_c64("2.5").unwrap(), c(2.5, 0.0));
        assert!(parse_c64("nonsense").is_err());
    }

    #[test]
    fn empty_probe_list_is_no_op() {
        let r = RunReport::new("demo", "anchor text", vec![], vec![]);
        assert_eq!(r.verdict, "no-op");
        let text = emit_report(&r);
        assert_eq!(parse_report(&text).unwrap(), r);
    }

    #[test]
    fn full_round_trip() {
        let probe = ProbeSummary {
            name: "hcc".into(),
            verdict: "evidence-for".into(),
            truncation_evidence_only: true,
            params: vec![
                ("eta".into(), "0.1".into()),
                ("seed".into(), "7".into()),
            ],
            flags: vec!["2 expansion candidates failed reconstruction and were dropped".into()],
            certificate: Some(CertificateSummary {
                kind: "eigenpair".into(),
                eigenvalue: Some(c(1.0625, 0.0)),
                residual: Some(1.2e-4),
                component: Some(vec![c(0.0, 0.0), c(0.1, -0.2)]),
                detail: "worked example".into(),
            }),
            steps: vec![(1, 0.5, 1e-3), (2, 0.25, 2e-3), (4, 0.0625, 1.0 / 3.0)],
        };
        let r = RunReport::new(
            "ex2_1",
            "left-multiplier shift derivation",
            vec![("d".into(), "8".into()), ("seed".into(), "7".into())],
            vec![probe],
        );
        assert_eq!(r.verdict, "evidence-for");
        let text = emit_report(&r);
        assert_eq!(parse_report(&text).unwrap(), r);
        // emission is LF-only and stable
        assert!(!text.contains('\r'));
        assert_eq!(text, emit_report(&parse_report(&text).unwrap()));
    }

    #[test]
    fn tabular_has_header_and_rows() {
        let probe = ProbeSummary {
            name: "transitivity".into(),
            verdict: "inconclusive".into(),
            truncation_evidence_only: true,
            params: vec![],
            flags: vec![],
            certificate: None,
            steps: vec![(1, 0.9, 0.1), (2, 0.8, 0.2)],
        };
        let csv = probe.tabular();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,score,residual");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn headline_priority() {
        let mk = |verdict: &str| ProbeSummary {
            name: "p".into(),
            verdict: verdict.into(),
            truncation_evidence_only: true,
            params: vec![],
            flags: vec![],
            certificate: None,
            steps: vec![],
        };
        let r = RunReport::new("s", "a", vec![], vec![mk("evidence-for"), mk("obstructed")]);
        assert_eq!(r.verdict, "obstructed");
        let r = RunReport::new("s", "a", vec![], vec![mk("inconclusive"), mk("evidence-for")]);
        assert_eq!(r.verdict, "evidence-for");
        let r = RunReport::new("s", "a", vec![], vec![mk("inconclusive")]);
        assert_eq!(r.verdict, "inconclusive");
    }
}
