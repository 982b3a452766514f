//! The verification driver: strings the core engines into named check
//! suites and assembles machine-readable outcomes.

use crate::config::{PosetChoice, RunConfig};
use anyhow::Result;
use qschur_core::exactla::{pn_value, FieldKind, RowSpace};
use qschur_core::heckealg::{specht_module, HeckeCtx, HeckeElt};
use qschur_core::modflat::{flat_iso_check, product_formula_check, FlatCtx, FlatSchurCtx};
use qschur_core::multicomb::semistandard_tableaux;
use qschur_core::repkit::{DecompMatrix, SplitMix64};
use qschur_core::schuralg::{
    character_decomp, schur_decomp, schur_dim_counts, SchurCtx, SchurElt, SchurIdx,
};
use qschur_core::subquot::{
    bar_decomp, h_lambda_check, restriction_embedding_check, s0_s0star_span_check,
    tensor_check, z_character_decomp, z_choice_independence_check, z_decomp, BarCtx, C0Ctx,
    Check,
};
use std::path::Path;

/// Driver failure classes, mapped to process exit codes by the CLI.
#[derive(Debug, thiserror::Error)]
pub enum DriverError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl From<qschur_core::schuralg::SchurError> for DriverError {
    fn from(e: qschur_core::schuralg::SchurError) -> Self {
        DriverError::Other(anyhow::anyhow!("{e}"))
    }
}

impl From<qschur_core::modflat::FlatError> for DriverError {
    fn from(e: qschur_core::modflat::FlatError) -> Self {
        DriverError::Other(anyhow::anyhow!("{e}"))
    }
}

pub const ALL_CHECKS: &[&str] = &[
    "pn",
    "hecke-relations",
    "hecke-basis",
    "flat-relations",
    "flat-basis",
    "schur-basis",
    "c0-closure",
    "standardly-based",
    "ideal-quotient",
    "forms",
    "tensor",
    "embedding",
    "flat-iso",
    "decomp",
    "product-formula",
    "semisimple",
    "cache",
];

/// The default suite for a configuration: everything applicable.
pub fn default_checks(cfg: &RunConfig) -> Vec<String> {
    let spec = cfg.field_spec().expect("validated");
    let star_ok = spec.separation_weak();
    let ptilde_big =
        cfg.poset == PosetChoice::PTilde && cfg.m.iter().all(|&mi| mi >= cfg.n);
    let mut out: Vec<&str> = vec![
        "pn",
        "hecke-relations",
        "hecke-basis",
        "schur-basis",
        "c0-closure",
        "standardly-based",
        "ideal-quotient",
        "forms",
        "embedding",
    ];
    if cfg.n <= 2 {
        out.push("tensor");
    }
    if star_ok {
        out.push("flat-relations");
        out.push("flat-basis");
        if ptilde_big {
            out.push("flat-iso");
        }
    }
    if cfg.is_prime_field() {
        out.push("decomp");
        if ptilde_big && star_ok {
            out.push("product-formula");
        }
    } else {
        out.push("semisimple");
    }
    if cfg.cache_dir.is_some() {
        out.push("cache");
    }
    out.into_iter().map(String::from).collect()
}

/// Everything a command run produces besides the raw report fields.
#[derive(Default)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub matrices: Vec<(String, DecompMatrix)>,
}

/// Dimension summary used by `basis` and echoed in reports.
pub fn dims_json(cfg: &RunConfig) -> Result<serde_json::Value, DriverError> {
    let poset = cfg.build_poset();
    let hecke_dim: u64 =
        (1..=cfg.n as u64).product::<u64>() * (cfg.r as u64).pow(cfg.n);
    let (schur_dim, per_shape) = schur_dim_counts(&poset);
    // |C0| and dim bar S0 by direct counting over the omega cells
    let mut c0 = 0usize;
    let mut bar = 0usize;
    for lam in poset.partitions() {
        let a_lam = lam.avec();
        let mut plus = 0usize;
        let mut strict = 0usize;
        let mut total = 0usize;
        for mu in &poset.elements {
            let cnt = semistandard_tableaux(&lam, mu).len();
            total += cnt;
            if mu.avec() == a_lam {
                plus += cnt;
            } else {
                strict += cnt;
            }
        }
        c0 += plus * plus; // the eps = 0 box
        if strict > 0 {
            c0 += strict * total; // the eps = 1 box I x J
        }
        bar += plus * plus;
    }
    Ok(serde_json::json!({
        "hecke": hecke_dim,
        "lambda": poset.len(),
        "lambda_plus": poset.plus.len(),
        "schur": schur_dim,
        "c0": c0,
        "bar_schur": bar,
        "saturated": poset.saturated,
        "per_shape": per_shape
            .iter()
            .map(|(l, c)| serde_json::json!({"shape": l.serialize(), "t0": c}))
            .collect::<Vec<_>>(),
    }))
}

/// Run the named checks. Unknown ids are usage errors.
pub fn run_checks(
    cfg: &RunConfig,
    ids: &[String],
    cache_dir: Option<&Path>,
) -> Result<Outcome, DriverError> {
    for id in ids {
        if !ALL_CHECKS.contains(&id.as_str()) {
            return Err(DriverError::Usage(format!("unknown check id {id:?}")));
        }
    }
    let spec = cfg.field_spec().map_err(|e| DriverError::Usage(e.to_string()))?;
    let needs_flat = ids.iter().any(|i| i.starts_with("flat"));
    if needs_flat && !spec.separation_weak() {
        return Err(DriverError::Usage(
            "flat checks need pairwise distinct invertible Q_i - Q_j".into(),
        ));
    }
    let needs_ptilde = ids.iter().any(|i| i == "flat-iso" || i == "product-formula");
    if needs_ptilde
        && !(cfg.poset == PosetChoice::PTilde && cfg.m.iter().all(|&mi| mi >= cfg.n))
    {
        return Err(DriverError::Usage(
            "flat-iso and product-formula need the ptilde poset with m_i >= n".into(),
        ));
    }
    if ids.iter().any(|i| i == "decomp") && !cfg.is_prime_field() {
        return Err(DriverError::Usage("decomp needs a prime field".into()));
    }
    if ids.iter().any(|i| i == "semisimple") && cfg.is_prime_field() {
        return Err(DriverError::Usage("semisimple checks need rational parameters".into()));
    }

    let exhaustive = cfg.n <= 2;
    let sample = |count: usize| -> Option<(usize, u64)> {
        if exhaustive {
            None
        } else {
            Some((count, cfg.seed))
        }
    };
    let poset = cfg.build_poset();
    let h = HeckeCtx::new(cfg.n as usize, cfg.r, spec.clone());
    let mut out = Outcome::default();

    for id in ids {
        match id.as_str() {
            "pn" => {
                let (v, inv) = pn_value(&spec, cfg.n as usize);
                out.checks.push(Check::pass(
                    "pn",
                    &format!("n = {}", cfg.n),
                    &format!("P_n = {} ({})", v.serialize(), if inv { "invertible" } else { "zero" }),
                ));
            }
            "hecke-relations" => out.checks.extend(hecke_relations(&h, cfg.seed)),
            "hecke-basis" => out.checks.extend(hecke_basis(&h, cfg.seed)),
            "flat-relations" => {
                let f = FlatCtx::new(cfg.n as usize, cfg.r, spec.clone())?;
                out.checks.extend(flat_relations(&f, cfg.seed));
            }
            "flat-basis" => {
                let f = FlatCtx::new(cfg.n as usize, cfg.r, spec.clone())?;
                let data = f.flat_murphy();
                out.checks.push(if data.full_rank {
                    Check::pass("flat-basis", "rank", &format!("n! r^n = {}", f.dim()))
                } else {
                    Check::fail("flat-basis", "rank", "flat Murphy matrix is singular")
                });
            }
            "schur-basis" => {
                let s = ctx(&h, &poset)?;
                out.checks.extend(schur_basis(&s, sample(200))?);
            }
            "c0-closure" => {
                let s = ctx(&h, &poset)?;
                let c0 = C0Ctx::new(&s);
                out.checks.push(c0.c0_partition_check());
                out.checks.extend(c0.closure_check(sample(300))?);
            }
            "standardly-based" => {
                let s = ctx(&h, &poset)?;
                let c0 = C0Ctx::new(&s);
                out.checks.extend(c0.standardly_based_check(sample(20))?);
            }
            "ideal-quotient" => {
                let s = ctx(&h, &poset)?;
                let c0 = C0Ctx::new(&s);
                let bar = BarCtx::new(&c0);
                out.checks.push(bar.ideal_check(sample(150))?);
                out.checks.extend(bar.antihom_check(sample(150))?);
                out.checks.extend(h_lambda_check(&c0, &bar)?);
                out.checks.extend(z_choice_independence_check(&c0, 32)?);
            }
            "forms" => {
                let s = ctx(&h, &poset)?;
                let c0 = C0Ctx::new(&s);
                let bar = BarCtx::new(&c0);
                out.checks.extend(forms_checks(&h, &s, &c0, &bar)?);
            }
            "tensor" => {
                let s = ctx(&h, &poset)?;
                let c0 = C0Ctx::new(&s);
                for li in 0..s.shapes.len() {
                    let zdim = s.t0_plus[li].iter().filter(|&&b| b).count();
                    if zdim * s.dim() > 50_000 {
                        return Err(DriverError::Resource(format!(
                            "tensor at shape {}: {} coordinates",
                            s.shapes[li],
                            zdim * s.dim()
                        )));
                    }
                    out.checks.push(tensor_check(&c0, li, 50_000)?);
                }
            }
            "embedding" => {
                let s = ctx(&h, &poset)?;
                let c0 = C0Ctx::new(&s);
                out.checks.push(s0_s0star_span_check(&c0)?);
                for li in 0..s.shapes.len() {
                    out.checks.extend(restriction_embedding_check(&c0, li)?);
                }
            }
            "flat-iso" => {
                let s = ctx(&h, &poset)?;
                let c0 = C0Ctx::new(&s);
                let bar = BarCtx::new(&c0);
                let f = FlatCtx::new(cfg.n as usize, cfg.r, spec.clone())?;
                let flat = FlatSchurCtx::new(&f, &poset)?;
                if exhaustive {
                    out.checks.extend(flat_iso_check(&bar, &flat)?);
                } else {
                    out.checks.extend(flat_iso_sampled(&bar, &flat, 200, cfg.seed)?);
                }
            }
            "decomp" => {
                let s = ctx(&h, &poset)?;
                let c0 = C0Ctx::new(&s);
                let bar = BarCtx::new(&c0);
                let (checks, mats) = decomp_identities(&s, &c0, &bar, cfg.seed)?;
                out.checks.extend(checks);
                if let Some(dir) = cache_dir {
                    match crate::cache::save(&s, dir) {
                        Ok(path) => eprintln!("cache saved: {}", path.display()),
                        Err(e) => eprintln!("cache save failed: {e}"),
                    }
                }
                out.matrices.extend(mats);
            }
            "product-formula" => {
                let s = ctx(&h, &poset)?;
                let d_s = if cfg.is_prime_field() {
                    schur_decomp(&s, cfg.seed)?
                } else {
                    character_decomp(&s)?
                };
                out.checks.extend(product_formula_check(&d_s, &cfg.m, &spec, cfg.seed)?);
            }
            "semisimple" => {
                let s = ctx(&h, &poset)?;
                let c0 = C0Ctx::new(&s);
                let bar = BarCtx::new(&c0);
                out.checks.extend(semisimple_checks(cfg, &spec, &h, &s, &c0, &bar)?);
            }
            "cache" => {
                let dir = cache_dir.ok_or_else(|| {
                    DriverError::Usage("cache check needs --cache-dir".into())
                })?;
                match crate::cache::stat(dir) {
                    Ok(files) => {
                        for (name, status) in files {
                            out.checks.push(match status {
                                Ok(n) => {
                                    Check::pass("cache", &name, &format!("{n} records"))
                                }
                                Err(e) => Check::fail("cache", &name, &e.to_string()),
                            });
                        }
                    }
                    Err(e) => out.checks.push(Check::fail("cache", "scan", &e.to_string())),
                }
            }
            _ => unreachable!("validated above"),
        }
    }
    Ok(out)
}

fn ctx<'a>(
    h: &'a HeckeCtx,
    poset: &'a qschur_core::Poset,
) -> Result<SchurCtx<'a>, DriverError> {
    SchurCtx::new(h, poset).map_err(|e| DriverError::Usage(e.to_string()))
}

fn hecke_relations(h: &HeckeCtx, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let n = h.n;
    let qd = h.spec.q_diff();
    let mut ok = true;
    let mut witness = String::new();
    // quadratic, braid, commutation, length-4 braid with the cyclotomic
    // generator, cyclotomic polynomial for L_1
    for j in 1..n {
        let t = h.gen_t(j);
        let mut expect = h.one();
        expect.add_scaled(&t, &qd);
        if h.mul(&t, &t) != expect {
            ok = false;
            witness = format!("quadratic at T_{}", j + 1);
        }
    }
    for j in 1..n.saturating_sub(1) {
        let a = h.gen_t(j);
        let b = h.gen_t(j + 1);
        if h.mul(&h.mul(&a, &b), &a) != h.mul(&h.mul(&b, &a), &b) {
            ok = false;
            witness = format!("braid at {}", j + 1);
        }
    }
    let l0 = h.gen_l(0);
    if n >= 2 {
        let t = h.gen_t(1);
        let lhs = h.mul(&h.mul(&h.mul(&l0, &t), &l0), &t);
        let rhs = h.mul(&h.mul(&h.mul(&t, &l0), &t), &l0);
        if lhs != rhs {
            ok = false;
            witness = "length-4 braid".into();
        }
    }
    let mut cyc = h.one();
    for i in 1..=h.r {
        let f = l0.sub(&h.scalar(h.spec.qq(i)));
        cyc = h.mul(&cyc, &f);
    }
    if !cyc.is_zero() {
        ok = false;
        witness = "cyclotomic relation".into();
    }
    out.push(if ok {
        Check::pass("hecke-relations", "defining relations", "all identities hold")
    } else {
        Check::fail("hecke-relations", "defining relations", &witness)
    });
    // T_w independence of the reduced word under commuting swaps
    let mut rng = SplitMix64::new(seed);
    let mut ok = true;
    for w in qschur_core::multicomb::all_perms(n) {
        let word = w.reduced_word();
        let mut a = h.one();
        for &j in &word {
            a = h.mul(&a, &h.gen_t(j));
        }
        let mut alt = word.clone();
        for _ in 0..8 {
            if alt.len() >= 2 {
                let i = rng.below(alt.len() - 1);
                if alt[i].abs_diff(alt[i + 1]) >= 2 {
                    alt.swap(i, i + 1);
                }
            }
        }
        let mut b = h.one();
        for &j in &alt {
            b = h.mul(&b, &h.gen_t(j));
        }
        if a != b {
            ok = false;
        }
    }
    out.push(if ok {
        Check::pass("hecke-relations", "T_w words", "independent of the reduced word")
    } else {
        Check::fail("hecke-relations", "T_w words", "reduced-word dependence detected")
    });
    // associativity on random monomial triples
    let mons = h.monomials();
    let mut ok = true;
    for _ in 0..120 {
        let pick = |rng: &mut SplitMix64| {
            let mut e = HeckeElt::zero();
            e.add_term(mons[rng.below(mons.len())].clone(), h.spec.one());
            e
        };
        let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        if h.mul(&h.mul(&x, &y), &z) != h.mul(&x, &h.mul(&y, &z)) {
            ok = false;
            break;
        }
    }
    out.push(if ok {
        Check::pass("hecke-relations", "associativity", "120 random triples")
    } else {
        Check::fail("hecke-relations", "associativity", "violation found")
    });
    out
}

fn hecke_basis(h: &HeckeCtx, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let data = h.murphy();
    out.push(if data.coords.full_column_rank() {
        Check::pass("hecke-basis", "murphy rank", &format!("n! r^n = {}", h.dim()))
    } else {
        Check::fail("hecke-basis", "murphy rank", "Murphy matrix is singular")
    });
    let mut ok = true;
    let mut rng = SplitMix64::new(seed);
    for _ in 0..40.min(data.elements.len()) {
        let k = rng.below(data.elements.len());
        let (si, s, t) = data.rows[k];
        let star = h.star(&data.elements[k]);
        let flip = data.row_of[&(si, t, s)];
        if star != data.elements[flip] {
            ok = false;
        }
    }
    out.push(if ok {
        Check::pass("hecke-basis", "star", "star swaps Murphy indices")
    } else {
        Check::fail("hecke-basis", "star", "star does not swap indices")
    });
    out
}

fn flat_relations(f: &FlatCtx, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let n = f.n;
    let mut ok = true;
    let mut witness = String::from("all identities hold");
    let xs: Vec<_> = (0..n).map(|k| f.gen_xi(k)).collect();
    for a in 0..n {
        for b in 0..n {
            if f.mul(&xs[a], &xs[b]) != f.mul(&xs[b], &xs[a]) {
                ok = false;
                witness = "xi commutation".into();
            }
        }
        let mut cyc = f.one();
        for i in 1..=f.r {
            cyc = f.mul(&cyc, &xs[a].sub(&f.scalar(f.spec.qq(i))));
        }
        if !cyc.is_zero() {
            ok = false;
            witness = format!("cyclotomic at xi_{}", a + 1);
        }
    }
    for j in 1..n {
        let tj = f.gen_t(j);
        // distant commutation (the corrected reading)
        for k in 0..n {
            if k + 1 == j || k == j {
                continue;
            }
            if f.mul(&tj, &xs[k]) != f.mul(&xs[k], &tj) {
                ok = false;
                witness = format!("distant commutation t_{j} xi_{k}");
            }
        }
    }
    out.push(if ok {
        Check::pass("flat-relations", "defining relations", &witness)
    } else {
        Check::fail("flat-relations", "defining relations", &witness)
    });
    // associativity sample
    let mons = f.monomials();
    let mut rng = SplitMix64::new(seed);
    let mut ok = true;
    for _ in 0..100 {
        let pick = |rng: &mut SplitMix64| {
            let mut e = qschur_core::modflat::FlatElt::zero();
            e.add_term(mons[rng.below(mons.len())].clone(), f.spec.one());
            e
        };
        let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        if f.mul(&f.mul(&x, &y), &z) != f.mul(&x, &f.mul(&y, &z)) {
            ok = false;
            break;
        }
    }
    out.push(if ok {
        Check::pass("flat-relations", "associativity", "100 random triples")
    } else {
        Check::fail("flat-relations", "associativity", "violation found")
    });
    out
}

fn schur_basis(s: &SchurCtx, sample: Option<(usize, u64)>) -> Result<Vec<Check>, DriverError> {
    let mut out = Vec::new();
    out.push(Check::pass(
        "schur-basis",
        "dims",
        &format!("dim S(Lambda) = {}", s.dim()),
    ));
    // phi_{S T^lam} phi_{T^lam T} = phi_{ST}
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    match sample {
        None => {
            for li in 0..s.shapes.len() {
                for sp in 0..s.t0[li].len() {
                    for tp in 0..s.t0[li].len() {
                        pairs.push((li, sp, tp));
                    }
                }
            }
        }
        Some((count, seed)) => {
            let mut rng = SplitMix64::new(seed);
            for _ in 0..count {
                let li = rng.below(s.shapes.len());
                let sp = rng.below(s.t0[li].len());
                let tp = rng.below(s.t0[li].len());
                pairs.push((li, sp, tp));
            }
        }
    }
    for (li, sp, tp) in pairs {
        let canon = s.tcanon[li];
        let a = s.idx_of(SchurIdx { lam: li, s: sp, t: canon });
        let b = s.idx_of(SchurIdx { lam: li, s: canon, t: tp });
        let prod = s.compose(a, b)?;
        let expect = SchurElt::single(s.idx_of(SchurIdx { lam: li, s: sp, t: tp }), s.h.spec.one());
        if *prod != expect {
            out.push(Check::fail(
                "schur-basis",
                "cell factorization",
                &format!("fails at shape {li} pair ({sp},{tp})"),
            ));
            return Ok(out);
        }
    }
    out.push(Check::pass("schur-basis", "cell factorization", "phi_{ST^l} phi_{T^l T} = phi_{ST}"));
    // identity decomposition acts as the unit on a sample of basis elements
    let one = s.one_elt()?;
    let mut rng = SplitMix64::new(sample.map(|(_, s)| s).unwrap_or(23));
    let tries = 40.min(s.dim());
    for _ in 0..tries {
        let bi = rng.below(s.dim()) as u32;
        let e = SchurElt::single(bi, s.h.spec.one());
        if s.mul_elts(&one, &e)? != e || s.mul_elts(&e, &one)? != e {
            out.push(Check::fail("schur-basis", "identity", "1 does not act as the unit"));
            return Ok(out);
        }
    }
    out.push(Check::pass("schur-basis", "identity", "sum of projectors is the unit"));
    // star anti-multiplicativity sample
    for _ in 0..tries {
        let i = rng.below(s.dim()) as u32;
        let j = rng.below(s.dim()) as u32;
        let x = SchurElt::single(i, s.h.spec.one());
        let y = SchurElt::single(j, s.h.spec.one());
        let lhs = s.star_elt(&s.mul_elts(&x, &y)?);
        let rhs = s.mul_elts(&s.star_elt(&y), &s.star_elt(&x))?;
        if lhs != rhs {
            out.push(Check::fail("schur-basis", "star", "not anti-multiplicative"));
            return Ok(out);
        }
    }
    out.push(Check::pass("schur-basis", "star", "anti-automorphism on sampled pairs"));
    Ok(out)
}

fn forms_checks(
    h: &HeckeCtx,
    s: &SchurCtx,
    c0: &C0Ctx,
    bar: &BarCtx,
) -> Result<Vec<Check>, DriverError> {
    let mut out = Vec::new();
    for li in 0..s.shapes.len() {
        let name = s.shapes[li].serialize();
        let w = s.weyl_module(li)?;
        let canon = s.tcanon[li];
        let mut ok = w.gram.is_symmetric() && w.gram.get(canon, canon).is_one();
        let (dim_l, _) = s.simple_head(&w); // asserts radical stability
        ok &= dim_l >= 1;
        let z = c0.z_module((li, 0), canon)?;
        let gram0 = z.gram0.as_ref().unwrap();
        for (a, &pa) in z.basis.iter().enumerate() {
            for (b, &pb) in z.basis.iter().enumerate() {
                ok &= gram0.get(a, b) == w.gram.get(pa, pb);
            }
        }
        let (dim_l0, _) = c0.z_simple_head(&z);
        ok &= dim_l0 >= 1;
        let zb = bar.bar_weyl(li)?;
        let cb = zb.basis.iter().position(|&p| p == canon).unwrap();
        let bgram = zb.gram0.as_ref().unwrap();
        ok &= bgram.get(cb, cb).is_one();
        let rank_bar = bgram.rank();
        ok &= rank_bar >= 1;
        out.push(if ok {
            Check::pass(
                "forms",
                &name,
                &format!("dim L = {dim_l}, dim L0 = {dim_l0}, dim bar L = {rank_bar}"),
            )
        } else {
            Check::fail("forms", &name, "a form identity failed")
        });
    }
    // Specht forms: symmetric with radical of the complementary rank
    for shape in qschur_core::multicomb::all_r_partitions(h.n as u32, h.r) {
        let sp = specht_module(h, &shape);
        let rank = sp.gram.rank();
        let rad = sp.gram.left_nullspace().len();
        if !sp.gram.is_symmetric() || rank + rad != sp.rep.dim {
            out.push(Check::fail("forms", &format!("Specht {shape}"), "form defect"));
            return Ok(out);
        }
    }
    out.push(Check::pass("forms", "Specht family", "symmetric forms, rank + radical = dim"));
    Ok(out)
}

fn flat_iso_sampled(
    bar: &BarCtx,
    flat: &FlatSchurCtx,
    count: usize,
    seed: u64,
) -> Result<Vec<Check>, DriverError> {
    let s = bar.c0.s;
    if bar.dim() != flat.dim() {
        return Ok(vec![Check::fail("flat-iso", "dims", "dimension mismatch")]);
    }
    let mut map = Vec::with_capacity(bar.dim());
    for &bi in &bar.basis {
        let ix = s.basis[bi as usize];
        let stab = &s.t0[ix.lam][ix.s];
        let ttab = &s.t0[ix.lam][ix.t];
        let fl = flat.shapes.iter().position(|sh| sh == &s.shapes[ix.lam]).unwrap();
        let fs = flat.t0p[fl].iter().position(|t| t == stab).unwrap();
        let ft = flat.t0p[fl].iter().position(|t| t == ttab).unwrap();
        map.push(flat.idx_of((fl, fs, ft)));
    }
    let inv: std::collections::HashMap<u32, usize> =
        map.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut rng = SplitMix64::new(seed);
    for _ in 0..count {
        let i = rng.below(bar.dim());
        let j = rng.below(bar.dim());
        let lhs = bar.bar_mul(i, j)?;
        let rhs = flat.compose(map[i], map[j])?;
        let mut lhs_m: std::collections::BTreeMap<usize, String> = Default::default();
        for (p, c) in lhs.iter() {
            lhs_m.insert(*p, c.serialize());
        }
        let mut rhs_m: std::collections::BTreeMap<usize, String> = Default::default();
        for (k, c) in rhs.iter() {
            rhs_m.insert(inv[k], c.serialize());
        }
        if lhs_m != rhs_m {
            return Ok(vec![Check::fail(
                "flat-iso",
                &format!("sampled ({i},{j})"),
                "structure constants differ",
            )]);
        }
    }
    Ok(vec![Check::pass("flat-iso", "sampled", &format!("{count} products agree"))])
}

/// The three decomposition matrices with every cross identity, plus the
/// two-seed reproducibility comparison.
pub fn decomp_identities(
    s: &SchurCtx,
    c0: &C0Ctx,
    bar: &BarCtx,
    seed: u64,
) -> Result<(Vec<Check>, Vec<(String, DecompMatrix)>), DriverError> {
    let mut checks = Vec::new();
    let d_s = schur_decomp(s, seed)?;
    let d_z = z_decomp(c0, seed)?;
    let d_bar = bar_decomp(bar, seed)?;
    // reproducibility: a different seed yields the same matrices
    let again = schur_decomp(s, seed ^ 0x5bd1e995)?;
    checks.push(if again == d_s {
        Check::pass("decomp", "seeds", "two seeds agree")
    } else {
        Check::fail("decomp", "seeds", "seed dependence detected")
    });
    // independent oracles
    let oracle_s = character_decomp(s)?;
    let oracle_z = z_character_decomp(c0)?;
    checks.push(if d_s == oracle_s && d_z == oracle_z {
        Check::pass("decomp", "character oracle", "chop = characters for S and Z")
    } else {
        Check::fail("decomp", "character oracle", "chop and characters disagree")
    });
    // (a) bar = Z
    checks.push(if d_bar == d_z {
        Check::pass("decomp", "bar = Z", "entrywise equal")
    } else {
        Check::fail("decomp", "bar = Z", "matrices differ")
    });
    // (b)-(d)
    let mut ok_le = true;
    let mut ok_eq = true;
    let mut ok_off = true;
    for i in 0..s.shapes.len() {
        for j in 0..s.shapes.len() {
            ok_le &= d_z.get(i, j) <= d_s.get(i, j);
            if s.shapes[i].type_alpha() == s.shapes[j].type_alpha() {
                ok_eq &= d_z.get(i, j) == d_s.get(i, j);
            } else {
                ok_off &= d_bar.get(i, j) == 0;
            }
        }
    }
    checks.push(if ok_le {
        Check::pass("decomp", "Z <= S", "entrywise")
    } else {
        Check::fail("decomp", "Z <= S", "violated")
    });
    checks.push(if ok_eq {
        Check::pass("decomp", "alpha-diagonal equality", "Z = S when alpha matches")
    } else {
        Check::fail("decomp", "alpha-diagonal equality", "violated")
    });
    checks.push(if ok_off {
        Check::pass("decomp", "bar off-diagonal", "zero when alpha differs")
    } else {
        Check::fail("decomp", "bar off-diagonal", "violated")
    });
    // (e) unitriangularity
    checks.push(
        if d_s.is_unitriangular() && d_z.is_unitriangular() && d_bar.is_unitriangular() {
            Check::pass("decomp", "unitriangular", "unit diagonal, dominance support")
        } else {
            Check::fail("decomp", "unitriangular", "violated")
        },
    );
    Ok((
        checks,
        vec![("d_s".into(), d_s), ("d_z".into(), d_z), ("d_bar".into(), d_bar)],
    ))
}

fn semisimple_checks(
    cfg: &RunConfig,
    spec: &qschur_core::FieldSpec,
    h: &HeckeCtx,
    s: &SchurCtx,
    c0: &C0Ctx,
    bar: &BarCtx,
) -> Result<Vec<Check>, DriverError> {
    let mut out = Vec::new();
    let (pn, inv) = pn_value(spec, cfg.n as usize);
    if !inv {
        out.push(Check::fail(
            "semisimple",
            "pn",
            &format!("P_n = {} is not invertible", pn.serialize()),
        ));
        return Ok(out);
    }
    let mut ok = true;
    for shape in qschur_core::multicomb::all_r_partitions(cfg.n, cfg.r) {
        let sp = specht_module(h, &shape);
        ok &= sp.gram.rank() == sp.rep.dim && !sp.gram.det().is_zero();
    }
    for li in 0..s.shapes.len() {
        let w = s.weyl_module(li)?;
        ok &= w.gram.rank() == w.rep.dim;
        let z = c0.z_module((li, 0), s.tcanon[li])?;
        ok &= z.gram0.as_ref().unwrap().rank() == z.rep.dim;
        let zb = bar.bar_weyl(li)?;
        ok &= zb.gram0.as_ref().unwrap().rank() == zb.rep.dim;
    }
    if spec.separation_weak() && cfg.poset == PosetChoice::PTilde {
        let f = FlatCtx::new(cfg.n as usize, cfg.r, spec.clone())?;
        let flat = FlatSchurCtx::new(&f, &cfg.build_poset())?;
        for li in 0..flat.shapes.len() {
            let (rep, gram) = flat.weyl_module(li)?;
            ok &= gram.rank() == rep.dim;
        }
    }
    out.push(if ok {
        Check::pass("semisimple", "grams", "all Gram matrices nonsingular")
    } else {
        Check::fail("semisimple", "grams", "a singular Gram matrix appeared")
    });
    let d = character_decomp(s)?;
    out.push(if d == DecompMatrix::identity(&s.shapes) {
        Check::pass("semisimple", "decomp", "identity decomposition matrix")
    } else {
        Check::fail("semisimple", "decomp", "non-identity decomposition matrix")
    });
    Ok(out)
}

/// Pass/fail rollup used for exit codes.
pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

/// Span check is pulled in through subquot; re-exported here for the CLI.
pub fn row_space_probe() -> RowSpace {
    RowSpace::new(1)
}
