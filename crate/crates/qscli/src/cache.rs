//! Disk cache for structure constants. Every file carries a header key and a
//! payload hash; any mismatch is treated as a miss (and reported by the
//! cache integrity check).

use anyhow::{anyhow, bail, Result};
use qschur_core::repkit::fnv1a;
use qschur_core::schuralg::SchurCtx;
use qschur_core::Scalar;
use std::fs;
use std::path::{Path, PathBuf};

const FORMAT: &str = "qschur-structconst v1";

/// Cache key: everything the table depends on.
pub fn cache_key(ctx: &SchurCtx) -> String {
    let mut desc = String::new();
    desc.push_str(&format!("n={} r={} ", ctx.h.n, ctx.h.r));
    desc.push_str(&ctx.h.spec.describe());
    desc.push(' ');
    for e in &ctx.poset.elements {
        desc.push_str(&e.serialize());
        desc.push(';');
    }
    format!("{:016x}", fnv1a(desc.as_bytes()))
}

pub fn cache_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("structconst-{key}.qsc"))
}

/// Serialize the memoized structure constants.
pub fn save(ctx: &SchurCtx, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let key = cache_key(ctx);
    let mut snapshot = ctx.memo_snapshot();
    snapshot.sort_by_key(|(k, _)| *k);
    let mut payload = String::new();
    for ((i, j), terms) in &snapshot {
        payload.push_str(&format!("{i} {j} :"));
        for (k, c) in terms {
            payload.push_str(&format!(" {k}={}", c.serialize()));
        }
        payload.push('\n');
    }
    let body = format!(
        "{FORMAT}\nkey={key}\nfield={}\nrecords={}\n{payload}payload-fnv={:016x}\n",
        ctx.h.spec.describe(),
        snapshot.len(),
        fnv1a(payload.as_bytes()),
    );
    let path = cache_path(dir, &key);
    fs::write(&path, body)?;
    Ok(path)
}

/// Load a cache file into the context memo. Returns the number of records,
/// or an error on key/checksum mismatch.
pub fn load(ctx: &SchurCtx, dir: &Path) -> Result<usize> {
    let key = cache_key(ctx);
    let path = cache_path(dir, &key);
    if !path.exists() {
        return Ok(0);
    }
    let text = fs::read_to_string(&path)?;
    let records = parse_records(&text, &key, |s| {
        ctx.h.spec.parse_scalar(s).map_err(|e| anyhow!("{e}"))
    })?;
    let count = records.len();
    ctx.memo_inject(records);
    Ok(count)
}

fn parse_records<F>(
    text: &str,
    expect_key: &str,
    parse_scalar: F,
) -> Result<Vec<((u32, u32), Vec<(u32, Scalar)>)>>
where
    F: Fn(&str) -> Result<Scalar>,
{
    let mut lines = text.lines();
    if lines.next() != Some(FORMAT) {
        bail!("cache checksum error: bad format line");
    }
    let key_line = lines.next().unwrap_or("");
    let key = key_line.strip_prefix("key=").ok_or_else(|| anyhow!("cache: missing key"))?;
    if key != expect_key {
        bail!("cache key mismatch (different configuration)");
    }
    let _field = lines.next().unwrap_or("");
    let rec_line = lines.next().unwrap_or("");
    let expect: usize = rec_line
        .strip_prefix("records=")
        .ok_or_else(|| anyhow!("cache: missing record count"))?
        .parse()?;
    let mut payload = String::new();
    let mut records = Vec::new();
    let mut footer = None;
    for line in lines {
        if let Some(h) = line.strip_prefix("payload-fnv=") {
            footer = Some(h.to_string());
            break;
        }
        payload.push_str(line);
        payload.push('\n');
        let (idx, terms) = line
            .split_once(" :")
            .ok_or_else(|| anyhow!("cache checksum error: bad record line"))?;
        let mut it = idx.split_whitespace();
        let i: u32 = it.next().ok_or_else(|| anyhow!("cache: bad index"))?.parse()?;
        let j: u32 = it.next().ok_or_else(|| anyhow!("cache: bad index"))?.parse()?;
        let mut parsed = Vec::new();
        for term in terms.split_whitespace() {
            let (k, c) = term
                .split_once('=')
                .ok_or_else(|| anyhow!("cache checksum error: bad term"))?;
            parsed.push((k.parse::<u32>()?, parse_scalar(c)?));
        }
        records.push(((i, j), parsed));
    }
    let footer = footer.ok_or_else(|| anyhow!("cache checksum error: missing footer"))?;
    let actual = format!("{:016x}", fnv1a(payload.as_bytes()));
    if footer != actual {
        bail!("cache checksum error: payload hash mismatch");
    }
    if records.len() != expect {
        bail!("cache checksum error: record count mismatch");
    }
    Ok(records)
}

/// Remove every cache file under the directory.
pub fn clear(dir: &Path) -> Result<usize> {
    let mut removed = 0usize;
    if dir.exists() {
        for entry in fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "qsc") {
                fs::remove_file(path)?;
                removed += 1;
            }
        }
    }
    Ok(removed)
}

/// Integrity scan: (file name, records-or-error) per cache file.
pub fn stat(dir: &Path) -> Result<Vec<(String, Result<usize>)>> {
    let mut out = Vec::new();
    if !dir.exists() {
        return Ok(out);
    }
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "qsc"))
        .collect();
    paths.sort();
    for path in paths {
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let status = (|| -> Result<usize> {
            let text = fs::read_to_string(&path)?;
            // verify structure and payload hash without a context: extract
            // the embedded key and re-parse with a permissive scalar reader
            let key = text
                .lines()
                .nth(1)
                .and_then(|l| l.strip_prefix("key="))
                .ok_or_else(|| anyhow!("cache checksum error: missing key"))?
                .to_string();
            let recs = parse_records(&text, &key, |s| {
                // scalars are opaque strings for the integrity scan
                if s.is_empty() {
                    bail!("empty scalar")
                } else {
                    Ok(Scalar::Fp { v: 0, p: 3 })
                }
            })?;
            Ok(recs.len())
        })();
        out.push((name, status));
    }
    Ok(out)
}
