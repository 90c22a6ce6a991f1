use std::fmt::Write as _;

use rspsim::protocols::{
    fidelity_sweep, run_monte_carlo, sweep_to_csv, BranchStatus, ChannelFamily, EmpiricalReport,
    ProtocolOutcome, ProtocolSpec,
};
use rspsim::qcore::TargetQubit;
use rspsim::resources::{
    appendix_a_depth, appendix_b_depth, greedy_compress, greedy_compress_strict, improved1_depth,
    sweep_curve, AccuracyModel, CompressionPlan, ResourceKind,
};

use crate::args::{
    CompressArgs, DepthArgs, FamilyArg, KindArg, Mode, ProtocolArg, ResourcesArgs, RunArgs,
    RunFormat, SweepArgs, TableFormat,
};

#[derive(Debug)]
pub enum CliError {
    /// Arguments parse but do not fit together.
    Usage(String),
    Domain(rspsim::Error),
}

impl From<rspsim::Error> for CliError {
    fn from(e: rspsim::Error) -> Self {
        CliError::Domain(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Usage(msg.into()))
}

fn depth_from(protocol: ProtocolArg, q: f64, d: &DepthArgs) -> Result<usize> {
    let real = match (d.depth, d.m, d.f_min) {
        (Some(n), _, _) => return Ok(n),
        (_, Some(m), _) => appendix_a_depth(q, m)?,
        (_, _, Some(f)) if protocol == ProtocolArg::AppendixB => appendix_b_depth(q, f)?,
        (_, _, Some(f)) => improved1_depth(q, f)?,
        _ => return usage("one of --depth, --m or --f-min is required"),
    };
    Ok((real.ceil() as usize).max(1))
}

fn build_spec(
    protocol: ProtocolArg,
    q: Option<f64>,
    depth: &DepthArgs,
    p: Option<f64>,
    family: FamilyArg,
) -> Result<ProtocolSpec> {
    if protocol == ProtocolArg::Ghz {
        return Ok(ProtocolSpec::Ghz);
    }
    let Some(q) = q else {
        return usage("--q is required for this protocol");
    };
    let depth = depth_from(protocol, q, depth)?;
    Ok(match protocol {
        ProtocolArg::Explicit => ProtocolSpec::Explicit {
            q,
            depth,
            family: match family {
                FamilyArg::PerHalf => ChannelFamily::PerHalf,
                FamilyArg::LowerOnly => ChannelFamily::LowerOnly,
            },
        },
        ProtocolArg::Improved1 => ProtocolSpec::Improved1 { q, depth },
        ProtocolArg::AppendixB => ProtocolSpec::AppendixB { q, depth },
        ProtocolArg::Improved2 => {
            let Some(p) = p else {
                return usage("--p is required for improved2");
            };
            ProtocolSpec::Improved2 {
                plan: greedy_compress(q, depth, p)?,
            }
        }
        ProtocolArg::Ghz => unreachable!(),
    })
}

pub fn run(args: &RunArgs) -> Result<String> {
    let (theta, phi) = if args.degrees {
        (args.theta.to_radians(), args.phi.to_radians())
    } else {
        (args.theta, args.phi)
    };
    let target = TargetQubit::new(theta, phi)?;
    let spec = build_spec(args.protocol, args.q, &args.depth, args.p, args.family)?;
    match args.mode {
        Mode::Exact => {
            let outcome = spec.run(&target)?;
            match args.format {
                RunFormat::Text => Ok(render_outcome(&target, &outcome)),
                RunFormat::Csv => Ok(outcome_csv(&outcome)),
            }
        }
        Mode::Montecarlo => {
            let (Some(trials), Some(seed)) = (args.trials, args.seed) else {
                return usage("--mode montecarlo needs --trials and --seed");
            };
            let report = run_monte_carlo(&spec, &target, trials, seed)?;
            match args.format {
                RunFormat::Text => Ok(render_empirical(&report)),
                RunFormat::Csv => Ok(report.to_csv()?),
            }
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into())
}

fn render_outcome(target: &TargetQubit, out: &ProtocolOutcome) -> String {
    let r = &out.report;
    let mut s = String::new();
    let _ = writeln!(s, "protocol            {}", out.protocol);
    let _ = writeln!(s, "theta               {:.6}", target.theta());
    let _ = writeln!(s, "phi                 {:.6}", target.phi());
    if let Some(region) = out.region {
        let _ = writeln!(s, "region              {} {}", region.half, region.n);
    }
    let _ = writeln!(s, "convention          {}", r.convention);
    let _ = writeln!(s);
    let _ = writeln!(s, "{:<12} {:>5} {:>12} {:>10}  status", "branch", "cbits", "probability", "fidelity");
    for b in &r.branches {
        let _ = writeln!(
            s,
            "{:<12} {:>5} {:>12.6} {:>10}  {}",
            b.label,
            b.classical_bits,
            b.probability,
            opt(b.fidelity),
            b.status
        );
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "simulated_F         {:.6}", r.simulated_fidelity);
    let _ = writeln!(s, "mean_F              {:.6}", r.mean_fidelity);
    let _ = writeln!(s, "analytic_F          {}", opt(r.analytic_fidelity));
    if let Some(d) = r.abs_diff() {
        let _ = writeln!(s, "abs_diff            {d:.6e}");
    }
    if let Some(chi) = r.chi {
        let _ = writeln!(s, "chi                 {chi:.6}");
        let _ = writeln!(s, "simulated_chi       {}", opt(r.simulated_chi));
    }
    if let Some(c2) = r.off_diagonal {
        let _ = writeln!(s, "off_diagonal        {c2:.6e}");
    }
    let _ = writeln!(s, "fidelity_floor      {}", opt(r.fidelity_floor));
    let _ = writeln!(s, "success_probability {:.6}", out.success_probability);
    if let Some(p) = out.analytic_success_probability {
        let _ = writeln!(s, "analytic_success    {p:.6}");
    }
    if let Some(p) = out.success_floor {
        let _ = writeln!(s, "success_floor       {p:.6}");
    }
    s
}

fn csv_string(rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.write_record(&row)
            .map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn outcome_csv(out: &ProtocolOutcome) -> String {
    let header = ["branch", "cbits", "probability", "fidelity", "status", "convention"]
        .map(String::from)
        .to_vec();
    let rows = out.report.branches.iter().map(|b| {
        vec![
            b.label.clone(),
            b.classical_bits.to_string(),
            format!("{:.6}", b.probability),
            b.fidelity.map(|f| format!("{f:.6}")).unwrap_or_default(),
            b.status.to_string(),
            out.report.convention.to_string(),
        ]
    });
    csv_string(std::iter::once(header).chain(rows)).expect("in-memory csv")
}

fn render_empirical(r: &EmpiricalReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "protocol            {}", r.protocol);
    let _ = writeln!(s, "trials              {}", r.trials);
    let _ = writeln!(s, "seed                {}", r.seed);
    let _ = writeln!(s);
    let _ = writeln!(s, "{:<12} {:>10} {:>10} {:>8} {:>7}", "branch", "exact", "empirical", "count", "z");
    for b in &r.branches {
        let sd = b.std_dev(r.trials);
        let z = if sd > 0.0 {
            format!("{:.2}", (b.frequency(r.trials) - b.exact_probability) / sd)
        } else {
            "-".into()
        };
        let _ = writeln!(
            s,
            "{:<12} {:>10.6} {:>10.6} {:>8} {:>7}",
            b.label,
            b.exact_probability,
            b.frequency(r.trials),
            b.count,
            z
        );
    }
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "success             exact {:.6}  empirical {:.6}",
        r.exact_success_probability,
        r.empirical_success_probability()
    );
    let _ = writeln!(
        s,
        "projection          exact {:.6}  empirical {:.6}",
        r.exact_projection,
        r.empirical_projection()
    );
    let failed = r.branches.iter().filter(|b| b.status == BranchStatus::Failed).count();
    if failed > 0 {
        let _ = writeln!(s, "failure branches    {failed}");
    }
    s
}

pub fn sweep(args: &SweepArgs) -> Result<String> {
    let spec = build_spec(args.protocol, args.q, &args.depth, args.p, args.family)?;
    let rows = fidelity_sweep(&spec, args.grid as usize, args.phi)?;
    Ok(sweep_to_csv(&rows)?)
}

fn parse_range(s: &str) -> Result<(f64, f64)> {
    let bad = || CliError::Usage(format!("--q-range expects LO:HI, got '{s}'"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    Ok((
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    ))
}

pub fn resources(args: &ResourcesArgs) -> Result<String> {
    let kind = match (args.kind, args.m, args.f_min) {
        (KindArg::AppendixA, Some(m), None) => ResourceKind::AppendixA { m },
        (KindArg::AppendixA, _, _) => return usage("appendixA takes --m (and not --f-min)"),
        (KindArg::Improved1, None, Some(f_min)) => ResourceKind::Improved1 { f_min },
        (KindArg::AppendixB, None, Some(f_min)) => ResourceKind::AppendixB { f_min },
        _ => return usage("improved1 and appendixB take --f-min (and not --m)"),
    };
    let points: Vec<(f64, f64)> = match (&args.q_range, args.q.is_empty()) {
        (Some(range), _) => {
            let (lo, hi) = parse_range(range)?;
            sweep_curve(kind, lo, hi, args.samples)?
                .into_iter()
                .map(|p| (p.q, p.n))
                .collect()
        }
        (None, false) => args
            .q
            .iter()
            .map(|&q| kind.depth(q).map(|n| (q, n)))
            .collect::<rspsim::Result<_>>()?,
        (None, true) => return usage("give --q values or --q-range"),
    };
    let extra = kind.adds_central_channel();
    match args.format {
        TableFormat::Csv => {
            let mut header = vec!["q".to_string(), "N".to_string()];
            if extra {
                header.push("N_plus_1".into());
            }
            let rows = points.iter().map(|&(q, n)| {
                let mut row = vec![format!("{q:.6}"), format!("{n:.6}")];
                if extra {
                    row.push(format!("{:.6}", n + 1.0));
                }
                row
            });
            csv_string(std::iter::once(header).chain(rows))
        }
        TableFormat::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "# {kind}");
            if let ResourceKind::AppendixA { m } = kind {
                let w = AccuracyModel::new(m)?.gap_half_width();
                let _ = writeln!(s, "# A_N = {w:.5e}");
            }
            let _ = write!(s, "{:>8} {:>10}", "q", "N");
            if extra {
                let _ = write!(s, " {:>10}", "N+1");
            }
            let _ = writeln!(s);
            for (q, n) in points {
                let _ = write!(s, "{q:>8.4} {n:>10.2}");
                if extra {
                    let _ = write!(s, " {:>10.2}", n + 1.0);
                }
                let _ = writeln!(s);
            }
            Ok(s)
        }
    }
}

pub fn compress(args: &CompressArgs) -> Result<(String, Vec<String>)> {
    let n = match (args.n, args.m) {
        (Some(n), _) => n,
        (None, Some(m)) => (appendix_a_depth(args.q, m)?.ceil() as usize).max(1),
        (None, None) => return usage("one of --n or --m is required"),
    };
    let plan = if args.strict {
        greedy_compress_strict(args.q, n, args.p)?
    } else {
        greedy_compress(args.q, n, args.p)?
    };
    let warnings = plan
        .floor_violations()
        .into_iter()
        .map(|h| format!("warning: P = {} is below the filter floor 1/(B^2+1) of head {h}", args.p))
        .collect();
    Ok((render_plan(&plan)?, warnings))
}

fn render_plan(plan: &CompressionPlan) -> Result<String> {
    let mut s = String::new();
    let _ = writeln!(s, "M={}", plan.m());
    for h in plan.heads() {
        let _ = writeln!(s, "{h}");
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "# q={} N={} P={}", plan.q(), plan.n_channels(), plan.p());
    let _ = writeln!(s, "# head channels B lower_theta upper_theta");
    for sec in plan.sections() {
        let [(_, llo, lhi), (_, ulo, uhi)] = plan.theta_intervals(sec)?;
        let _ = writeln!(
            s,
            "{} {}..{} {:.6} [{:.6}, {:.6}] [{:.6}, {:.6}]",
            sec.head, sec.lowest, sec.head, sec.b, llo, lhi, ulo, uhi
        );
    }
    Ok(s)
}
