use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use ringcover::catalog;
use ringcover::classify::classify_good_rings;
use ringcover::covering::{
    analyze_tuple, is_good_tuple, sigma_exact, theorem2_decide, two_cover, RingCertificate,
};
use ringcover::matring::{
    brute_force_sigma, build_cover, check_unbeatable, field_ring, prime_divisors, sigma_formula,
    verify_cover_certificate, CoverCertificate, MatRing, UnbeatabilityMode, Verification,
};
use ringcover::{Budget, Error, FiniteRing};

#[derive(Parser)]
#[command(
    name = "ringcover",
    version,
    about = "Finite rings covered by proper subrings, and covering numbers of matrix rings"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Omit the timestamp line from reports.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify good rings of order 4 or 8 and match them with the catalog.
    Classify {
        #[arg(long)]
        order: usize,
        /// Directory for ring files and tuple certificates.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Covering number of a ring file or of M_n(q).
    Sigma {
        #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
        ring: Option<PathBuf>,
        #[arg(long, num_args = 2, value_names = ["N", "Q"])]
        matrix: Option<Vec<u64>>,
        /// Write a certificate for the computed cover.
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Run a verification suite: examples, section6, theorem2, unbeatable N Q, cover N Q.
    Verify {
        #[arg(long, num_args = 1..=3, value_names = ["SUITE", "N", "Q"])]
        suite: Vec<String>,
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Re-check a stored certificate.
    VerifyCert { file: PathBuf },
    /// Print catalog entries; with --id, dump that ring.
    Catalog {
        #[arg(long)]
        id: Option<u8>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Lines of a report and whether every check passed.
struct Report {
    text: String,
    ok: bool,
}

impl Report {
    fn new() -> Report {
        Report {
            text: String::new(),
            ok: true,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn check(&mut self, name: impl AsRef<str>, passed: bool) {
        self.ok &= passed;
        self.line(format!("{}: {}", name.as_ref(), verdict(passed)));
    }
}

fn verdict(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn is_usage_error(e: &anyhow::Error) -> bool {
    match e.downcast_ref::<Error>() {
        Some(Error::AnalysisContradiction(_)) => false,
        Some(_) | None => true,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let budget = Budget::from_env();
    let mut report = Report::new();
    if !cli.no_timestamp {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        report.line(format!("timestamp: {secs}"));
    }
    let result = match cli.command {
        Command::Classify { order, out } => classify(&mut report, order, out.as_deref()),
        Command::Sigma {
            ring,
            matrix,
            cert_out,
        } => match (ring, matrix) {
            (Some(path), _) => sigma_ring(&mut report, &path, budget, cert_out.as_deref()),
            (None, Some(nq)) => {
                sigma_matrix(&mut report, nq[0], nq[1], budget, cert_out.as_deref())
            }
            (None, None) => Err(anyhow::anyhow!("either --ring or --matrix is required")),
        },
        Command::Verify { suite, cert_out } => {
            verify(&mut report, &suite, budget, cert_out.as_deref())
        }
        Command::VerifyCert { file } => verify_cert(&mut report, &file, budget),
        Command::Catalog { id, out } => catalog_cmd(&mut report, id, out.as_deref()),
    };
    print!("{}", report.text);
    match result {
        Ok(()) if report.ok => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage_error(&e) { 2 } else { 1 })
        }
    }
}

fn id_range(ids: &[u8]) -> String {
    let contiguous = ids.windows(2).all(|w| w[1] == w[0] + 1);
    match (ids.first(), ids.last()) {
        (Some(a), Some(b)) if contiguous && a != b => format!("2.{a}\u{2013}2.{b}"),
        _ => ids
            .iter()
            .map(|i| format!("2.{i}"))
            .collect::<Vec<_>>()
            .join(", "),
    }
}

fn classify(r: &mut Report, order: usize, out: Option<&Path>) -> anyhow::Result<()> {
    if order != 4 && order != 8 {
        bail!("order must be 4 or 8, got {order}");
    }
    let rep = classify_good_rings(order)?;
    let mut ids: Vec<u8> = rep.matched_ids().into_iter().flatten().collect();
    ids.sort_unstable();
    let expected: Vec<u8> = if order == 4 {
        (1..=4).collect()
    } else {
        (5..=9).collect()
    };
    r.line(format!(
        "{} classes, matched catalog {}",
        rep.classes.len(),
        id_range(&ids)
    ));
    for (i, c) in rep.classes.iter().enumerate() {
        let parts: Vec<String> = c
            .tuple
            .sorted_members()
            .iter()
            .map(|s| format!("{:?}", s.to_vec()))
            .collect();
        let label = c
            .catalog
            .map_or("unmatched".to_string(), |id| format!("2.{id}"));
        r.line(format!(
            "class {}: moduli {:?}, tables {}, tuple {}, catalog {label}",
            i + 1,
            c.ring.moduli(),
            c.tables,
            parts.join(" ")
        ));
    }
    r.line(format!(
        "search: {} nodes, {} associative tables, {} ring classes",
        rep.nodes, rep.associative_tables, rep.ring_classes
    ));
    for g in &rep.other_groups {
        r.line(format!(
            "additive group {:?}: {} tables, {} rings in {} classes, {} good",
            g.moduli,
            g.tables_tried,
            g.rings,
            g.classes.len(),
            g.good
        ));
    }
    r.check(
        "bijective with catalog",
        ids == expected && rep.classes.len() == expected.len(),
    );
    r.check(
        "bitmask and generic goodness tests agree",
        rep.fast_check_agrees,
    );
    r.check(
        "index-two search agrees with all-subrings search",
        rep.index_two_agrees,
    );
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (i, c) in rep.classes.iter().enumerate() {
            let stem = format!("good-{order}-{}", i + 1);
            write_file(&dir.join(format!("{stem}.ring.json")), &c.ring.to_json())?;
            write_file(
                &dir.join(format!("{stem}.cert.json")),
                &RingCertificate::for_tuple(&c.ring, &c.tuple).to_json(),
            )?;
        }
        r.line(format!(
            "wrote {} ring files to {}",
            rep.classes.len(),
            dir.display()
        ));
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read_ring(path: &Path) -> anyhow::Result<FiniteRing> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(FiniteRing::from_json(&text)?)
}

fn sigma_ring(
    r: &mut Report,
    path: &Path,
    budget: Budget,
    cert_out: Option<&Path>,
) -> anyhow::Result<()> {
    let ring = read_ring(path)?;
    match sigma_exact(&ring, budget.ring_order) {
        Ok(sol) => {
            r.line(format!("sigma {}", sol.size()));
            for rec in &sol.log {
                let what = if rec.feasible { "found" } else { "none" };
                r.line(format!("size {}: {what} ({} nodes)", rec.size, rec.nodes));
            }
            for (i, m) in sol.members.iter().enumerate() {
                r.line(format!("member {}: {:?}", i + 1, m.members().to_vec()));
            }
            if let Some(p) = cert_out {
                write_file(p, &RingCertificate::for_cover(&ring, &sol).to_json())?;
            }
        }
        Err(Error::NotCoverable(x)) => r.line(format!(
            "NotCoverable (element {} lies in no proper subring)",
            ring.format_elem(x)
        )),
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn matring(n: u64, q: u64, budget: Budget) -> anyhow::Result<MatRing> {
    if n < 2 {
        bail!("n must be at least 2");
    }
    let n = usize::try_from(n).context("n too large")?;
    if n > 64 {
        bail!("n must be at most 64");
    }
    Ok(MatRing::new(n, q, budget)?)
}

fn sigma_matrix(
    r: &mut Report,
    n: u64,
    q: u64,
    budget: Budget,
    cert_out: Option<&Path>,
) -> anyhow::Result<()> {
    let mr = matring(n, q, budget)?;
    let formula = sigma_formula(n as u32, q);
    match brute_force_sigma(&mr) {
        Ok(c) => {
            let agree = formula == c.size().into();
            r.line(format!(
                "formula {formula}, brute-force {}, {}",
                c.size(),
                if agree { "AGREE" } else { "DISAGREE" }
            ));
            r.line(format!(
                "candidates {}, elements {}",
                c.candidates, c.elements
            ));
            r.ok &= agree;
        }
        Err(Error::BudgetExceeded(_)) => {
            r.line(format!("formula {formula}, brute-force skipped (budget)"))
        }
        Err(e) => return Err(e.into()),
    }
    if let Some(p) = cert_out {
        let cert = build_cover(&mr)?;
        write_file(p, &cert.to_json())?;
        r.line(format!("certificate written, verified {}", cert.verified));
    }
    Ok(())
}

fn suite_nq(suite: &[String]) -> anyhow::Result<(u64, u64)> {
    match suite {
        [_, n, q] => Ok((
            n.parse().context("parsing N")?,
            q.parse().context("parsing Q")?,
        )),
        _ => bail!("suite {} takes N and Q", suite[0]),
    }
}

fn verify(
    r: &mut Report,
    suite: &[String],
    budget: Budget,
    cert_out: Option<&Path>,
) -> anyhow::Result<()> {
    let Some(name) = suite.first() else {
        bail!("missing suite name")
    };
    match name.as_str() {
        "examples" => verify_examples(r, budget),
        "section6" => {
            let claims = catalog::verify_section6();
            r.line(format!("{} claims", claims.len()));
            for c in claims {
                r.check(format!("{} ({})", c.name, c.detail), c.passed);
            }
            Ok(())
        }
        "theorem2" => verify_theorem2(r, budget),
        "unbeatable" => {
            let (n, q) = suite_nq(suite)?;
            verify_unbeatable(r, n, q, budget)
        }
        "cover" => {
            let (n, q) = suite_nq(suite)?;
            verify_cover(r, n, q, budget, cert_out)
        }
        other => bail!("unknown suite {other}"),
    }
}

fn verify_examples(r: &mut Report, budget: Budget) -> anyhow::Result<()> {
    for e in catalog::all() {
        let sets = e.tuple.sorted_members();
        let good = is_good_tuple(&e.ring, [&sets[0], &sets[1], &sets[2]]);
        let analysis = good
            .as_ref()
            .ok()
            .map(|t| analyze_tuple(&e.ring, t).is_ok())
            .unwrap_or(false);
        let no_two = two_cover(&e.ring, budget.ring_order)?.is_none();
        let mut line = String::new();
        write!(
            line,
            "{} in {}, order {}: good tuple {}",
            e.label(),
            e.ambient,
            e.ring.order(),
            verdict(good.is_ok())
        )?;
        if let Err(f) = &good {
            write!(line, " ({f})")?;
        }
        write!(
            line,
            ", analysis {}, no 2-cover {}",
            verdict(analysis),
            verdict(no_two)
        )?;
        r.ok &= good.is_ok() && analysis && no_two;
        r.line(line);
    }
    Ok(())
}

fn theorem2_corpus() -> anyhow::Result<Vec<(String, FiniteRing)>> {
    let mut corpus: Vec<(String, FiniteRing)> = catalog::all()
        .iter()
        .map(|e| (e.label(), e.ring.clone()))
        .collect();
    for q in [2, 4, 8] {
        corpus.push((format!("GF({q})"), field_ring(q)?));
    }
    corpus.push((
        "GF(2)+GF(2)".into(),
        field_ring(2)?.direct_sum(&field_ring(2)?),
    ));
    corpus.push((
        "GF(4)+GF(2)".into(),
        field_ring(4)?.direct_sum(&field_ring(2)?),
    ));
    corpus.push((
        "M_2(2)".into(),
        MatRing::new(2, 2, Budget::default())?.to_finite_ring()?,
    ));
    Ok(corpus)
}

fn verify_theorem2(r: &mut Report, budget: Budget) -> anyhow::Result<()> {
    for (name, ring) in theorem2_corpus()? {
        let v = theorem2_decide(&ring, budget.ring_order)?;
        let via = v.via_quotient.as_ref().map_or("none".to_string(), |w| {
            format!("2.{} (ideal of order {})", w.example, w.ideal.len())
        });
        r.check(
            format!(
                "{name}: three-cover {}, good quotient {via}",
                if v.coverable() { "yes" } else { "no" }
            ),
            v.agree(),
        );
    }
    Ok(())
}

fn verify_unbeatable(r: &mut Report, n: u64, q: u64, budget: Budget) -> anyhow::Result<()> {
    let mr = matring(n, q, budget)?;
    let mode = if prime_divisors(n as u32).len() >= 2 {
        UnbeatabilityMode::Counting
    } else {
        UnbeatabilityMode::Elementwise
    };
    let rep = check_unbeatable(&mr, mode.clone())?;
    r.line(format!(
        "mode: {}",
        if mode == UnbeatabilityMode::Counting {
            "counting"
        } else {
            "elementwise"
        }
    ));
    for c in &rep.conditions {
        r.check(format!("condition ({}) {}", c.index, c.detail), c.passed);
    }
    for i in &rep.inequalities {
        r.check(
            format!("inequality for {}: {} < {}", i.shape, i.lhs, i.rhs),
            i.holds,
        );
    }
    for (name, ok) in &rep.checks {
        r.check(name, *ok);
    }
    Ok(())
}

fn describe_verification(v: &Verification) -> String {
    match v {
        Verification::FullScan { checked, covered } => format!("full scan, {covered}/{checked} elements covered"),
        Verification::CharPoly { classes, by_stabilizer, by_subfield, classes_complete } => format!(
            "similarity classes, {classes} classes ({by_stabilizer} by invariant subspace, {by_subfield} by subfield), class sizes complete {classes_complete}"
        ),
        Verification::Unverified { reason } => format!("unverified ({reason})"),
    }
}

fn verify_cover(
    r: &mut Report,
    n: u64,
    q: u64,
    budget: Budget,
    cert_out: Option<&Path>,
) -> anyhow::Result<()> {
    let mr = matring(n, q, budget)?;
    let cert = build_cover(&mr)?;
    r.line(format!("size {}, formula {}", cert.size, cert.formula));
    r.line(describe_verification(&cert.verification));
    if let Some(m) = &cert.uncovered {
        r.line(format!("uncovered matrix {m:?}"));
    }
    r.check("certificate verified", cert.verified);
    let reloaded = CoverCertificate::from_json(&cert.to_json())?;
    for (name, ok) in verify_cover_certificate(&reloaded, budget)? {
        r.check(format!("recheck {name}"), ok);
    }
    if let Some(p) = cert_out {
        write_file(p, &cert.to_json())?;
    }
    Ok(())
}

fn verify_cert(r: &mut Report, path: &Path, budget: Budget) -> anyhow::Result<()> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if let Ok(cert) = CoverCertificate::from_json(&text) {
        r.line(format!("cover certificate for M_{}({})", cert.n, cert.q));
        for (name, ok) in verify_cover_certificate(&cert, budget)? {
            r.check(name, ok);
        }
        return Ok(());
    }
    let cert = RingCertificate::from_json(&text)
        .context("file is neither a cover nor a ring certificate")?;
    r.line(format!(
        "ring certificate ({:?}), {} subrings",
        cert.kind,
        cert.subrings.len()
    ));
    let checks = cert.reverify()?;
    for (name, ok) in &checks {
        r.check(name, *ok);
    }
    let stored: Vec<bool> = cert.checks.iter().map(|(_, ok)| *ok).collect();
    let fresh: Vec<bool> = checks.iter().map(|(_, ok)| *ok).collect();
    r.check("stored results match", stored == fresh);
    Ok(())
}

fn catalog_cmd(r: &mut Report, id: Option<u8>, out: Option<&Path>) -> anyhow::Result<()> {
    let Some(id) = id else {
        for e in catalog::all() {
            r.line(format!(
                "{}: order {}, {}, {}",
                e.label(),
                e.ring.order(),
                e.ambient,
                e.description
            ));
        }
        return Ok(());
    };
    let e = catalog::example(id).with_context(|| format!("no catalog entry {id}"))?;
    r.line(format!("{}: {}", e.label(), e.ambient));
    r.line(e.description);
    r.line(format!(
        "order {}, unital {}, commutative {}",
        e.ring.order(),
        e.unital,
        e.commutative
    ));
    for (i, s) in e.tuple.sorted_members().iter().enumerate() {
        r.line(format!("S{}: {:?}", i + 1, s.to_vec()));
    }
    match out {
        Some(p) => {
            write_file(p, &e.ring.to_json())?;
            r.line(format!("wrote {}", p.display()));
        }
        None => r.text.push_str(&e.ring.to_json()),
    }
    Ok(())
}
