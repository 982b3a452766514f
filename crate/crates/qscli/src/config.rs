//! Run configuration: a flat key/value text format with array literals,
//! overridable by CLI flags. Parsing is dependency-free on purpose.

use anyhow::{anyhow, bail, Result};
use qschur_core::exactla::FieldKind;
use qschur_core::{FieldSpec, Poset};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PosetChoice {
    PTilde,
    PartitionsOnly,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: u32,
    pub r: usize,
    pub m: Vec<u32>,
    pub field: String, // "Fp" | "Q"
    pub p: u64,
    pub q: String,
    pub qq: Vec<String>,
    pub poset: PosetChoice,
    pub seed: u64,
    pub cache_dir: Option<String>,
    pub checks: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 2,
            r: 2,
            m: vec![2, 2],
            field: "Fp".into(),
            p: 5,
            q: "2".into(),
            qq: vec!["1".into(), "3".into()],
            poset: PosetChoice::PTilde,
            seed: 1,
            cache_dir: None,
            checks: Vec::new(),
        }
    }
}

impl RunConfig {
    /// Shipped desk-scale presets.
    pub fn preset(name: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        match name {
            "n2r2p5" => {}
            "n3r2p7" => {
                cfg.n = 3;
                cfg.m = vec![3, 3];
                cfg.p = 7;
                cfg.q = "2".into();
                cfg.qq = vec!["q^0".into(), "q^1".into()];
            }
            "n3r1p5" => {
                cfg.n = 3;
                cfg.r = 1;
                cfg.m = vec![3];
                cfg.p = 5;
                cfg.q = "2".into(); // q^2 has order 2: the classical e = 2 case
                cfg.qq = vec!["1".into()];
            }
            other => bail!("unknown preset {other:?}"),
        }
        Ok(cfg)
    }

    pub fn parse_file(text: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        let mut seen_m = false;
        let mut seen_qq = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key = value", lineno + 1))?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "n" => cfg.n = value.parse()?,
                "r" => cfg.r = value.parse()?,
                "m" => {
                    cfg.m = parse_array(value)?
                        .iter()
                        .map(|s| s.parse::<u32>().map_err(|e| anyhow!("m: {e}")))
                        .collect::<Result<_>>()?;
                    seen_m = true;
                }
                "field" => cfg.field = value.to_string(),
                "p" => cfg.p = value.parse()?,
                "q" => cfg.q = value.to_string(),
                "Q" => {
                    cfg.qq = parse_array(value)?;
                    seen_qq = true;
                }
                "poset" => {
                    cfg.poset = match value {
                        "ptilde" => PosetChoice::PTilde,
                        "partitions-only" => PosetChoice::PartitionsOnly,
                        other => bail!("unknown poset choice {other:?}"),
                    }
                }
                "seed" => cfg.seed = value.parse()?,
                "cache-dir" => cfg.cache_dir = Some(value.to_string()),
                "checks" => cfg.checks = parse_array(value)?,
                other => bail!("unknown config key {other:?}"),
            }
        }
        // keep m and Q consistent with r when they were not given explicitly
        if !seen_m && cfg.m.len() != cfg.r {
            cfg.m = vec![cfg.n; cfg.r];
        }
        if !seen_qq && cfg.qq.len() != cfg.r {
            cfg.qq = (0..cfg.r).map(|i| format!("q^{i}")).collect();
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.r < 1 {
            bail!("n and r must be positive");
        }
        if self.m.len() != self.r {
            bail!("m must have exactly r entries, got {}", self.m.len());
        }
        if self.qq.len() != self.r {
            bail!("Q must have exactly r entries, got {}", self.qq.len());
        }
        match self.field.as_str() {
            "Fp" | "Q" => {}
            other => bail!("field must be Fp or Q, got {other:?}"),
        }
        if self.n > 4 || self.r > 3 {
            bail!("desk-scale contract: n <= 4 and r <= 3");
        }
        Ok(())
    }

    /// Build the field from the configuration (q-power shorthand allowed).
    pub fn field_spec(&self) -> Result<FieldSpec> {
        let spec = match self.field.as_str() {
            "Fp" => {
                let q: i64 = self.q.parse().map_err(|e| anyhow!("q: {e}"))?;
                let base = FieldSpec::prime(self.p, q, &[])?;
                let qq: Vec<i64> = self
                    .qq
                    .iter()
                    .map(|s| {
                        let v = base.parse_scalar(s)?;
                        Ok::<i64, anyhow::Error>(v.serialize().parse::<i64>()?)
                    })
                    .collect::<Result<_>>()?;
                FieldSpec::prime(self.p, q, &qq)?
            }
            "Q" => {
                let parse_frac = |s: &str| -> Result<(i64, i64)> {
                    match s.split_once('/') {
                        Some((a, b)) => Ok((a.parse()?, b.parse()?)),
                        None => Ok((s.parse()?, 1)),
                    }
                };
                let q = parse_frac(&self.q)?;
                let base = FieldSpec::rational(q, &[])?;
                let qq: Vec<(i64, i64)> = self
                    .qq
                    .iter()
                    .map(|s| {
                        let v = base.parse_scalar(s)?;
                        parse_frac(&v.serialize())
                    })
                    .collect::<Result<_>>()?;
                FieldSpec::rational(q, &qq)?
            }
            _ => unreachable!("validated"),
        };
        if spec.level() != self.r {
            bail!("field has {} cyclotomic parameters, expected {}", spec.level(), self.r);
        }
        Ok(spec)
    }

    pub fn build_poset(&self) -> Poset {
        match self.poset {
            PosetChoice::PTilde => Poset::enumerate_lambda(self.n, self.r, &self.m),
            PosetChoice::PartitionsOnly => Poset::partitions_only(self.n, self.r),
        }
    }

    /// Canonical echo for reports and cache keys.
    pub fn echo(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "r": self.r,
            "m": self.m,
            "field": self.field,
            "p": if self.field == "Fp" { serde_json::json!(self.p) } else { serde_json::Value::Null },
            "q": self.q,
            "Q": self.qq,
            "poset": match self.poset {
                PosetChoice::PTilde => "ptilde",
                PosetChoice::PartitionsOnly => "partitions-only",
            },
            "seed": self.seed,
        })
    }

    pub fn is_prime_field(&self) -> bool {
        self.field == "Fp"
    }

    pub fn spec_kind(&self) -> Result<FieldKind> {
        Ok(self.field_spec()?.kind())
    }
}

fn parse_array(value: &str) -> Result<Vec<String>> {
    let v = value.trim();
    if !v.starts_with('[') || !v.ends_with(']') {
        bail!("expected an array literal [..], got {v:?}");
    }
    let inner = &v[1..v.len() - 1];
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    Ok(inner.split(',').map(|s| s.trim().to_string()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_round_trip() {
        let text = "
# a comment
n = 3
r = 2
m = [3, 3]
field = Fp
p = 7
q = 2
Q = [q^0, q^1]
poset = ptilde
seed = 9
checks = [pn, forms]
";
        let cfg = RunConfig::parse_file(text).unwrap();
        assert_eq!(cfg.n, 3);
        assert_eq!(cfg.m, vec![3, 3]);
        assert_eq!(cfg.checks, vec!["pn", "forms"]);
        cfg.validate().unwrap();
        let spec = cfg.field_spec().unwrap();
        assert_eq!(spec.qq(2).serialize(), "2");
    }

    #[test]
    fn bad_configs_rejected() {
        assert!(RunConfig::parse_file("bogus = 1").is_err());
        let mut cfg = RunConfig::default();
        cfg.m = vec![2];
        assert!(cfg.validate().is_err());
        cfg = RunConfig::default();
        cfg.field = "R".into();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn presets_validate() {
        for name in ["n2r2p5", "n3r2p7", "n3r1p5"] {
            let cfg = RunConfig::preset(name).unwrap();
            cfg.validate().unwrap();
            cfg.field_spec().unwrap();
        }
        assert!(RunConfig::preset("nope").is_err());
    }
}
