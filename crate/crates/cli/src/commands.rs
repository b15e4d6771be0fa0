use std::f64::consts::FRAC_PI_2;

use circulant_core::multiplicity::divides_sum_of_squares;
use circulant_core::oracle::{check_classes, cluster_eigenvalues, MATCH_TOL};
use circulant_core::{
    admissible_primes, analytic_eigenvalue, audited_clusters, cubic_density_bound, fourier_basis,
    full_spectrum, index_classes, jacobi_eigenvalues, real_canonical_basis, rotated_basis,
    witness_limit, BasisRule, CirculantSpec, EigvecSelector, IndexClassPartition, JacobiOptions,
    SubsetRule, SweepConfig, ThetaSchedule,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::output::{Cell, Table};
use crate::{
    BasisArg, BasisCheckArgs, CliError, GlobalOpts, GraphArgs, MatrixArgs, OracleArgs, Report,
    SubsetArg, SweepArgs,
};

/// Closed-form values closer than this are treated as one eigenvalue when no
/// exact classification is available.
const TIE_TOL: f64 = 1e-9;

fn build_spec(graph: &GraphArgs, g: &GlobalOpts) -> Result<CirculantSpec, CliError> {
    g.limits().check_order(graph.n)?;
    Ok(CirculantSpec::new(graph.n, graph.a.clone())?)
}

fn join(members: &[usize]) -> String {
    members
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn spec_meta(t: &mut Table, spec: &CirculantSpec) {
    t.meta("n", spec.n())
        .meta("offsets", spec.offsets().to_vec())
        .meta("degree", spec.degree())
        .meta("connected", spec.is_connected());
}

/// Groups indices whose values agree to `TIE_TOL`.
fn tie_classes(values: &[f64]) -> IndexClassPartition {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&x, &y| values[x].total_cmp(&values[y]).then(x.cmp(&y)));
    let sorted: Vec<f64> = order.iter().map(|&j| values[j]).collect();
    let groups = cluster_eigenvalues(&sorted, TIE_TOL)
        .iter()
        .map(|c| order[c.start..c.start + c.len].to_vec())
        .collect();
    IndexClassPartition::from_groups(values.len(), groups).expect("clusters cover every index")
}

pub fn adjacency(args: &MatrixArgs, g: &GlobalOpts) -> Result<Table, CliError> {
    let spec = build_spec(&args.graph, g)?;
    g.limits().check_oracle_order(spec.n())?;
    let m = if args.laplacian {
        spec.laplacian_matrix()
    } else {
        spec.adjacency_matrix()
    };
    let n = spec.n();
    let headers: Vec<String> = std::iter::once("row".to_string())
        .chain((0..n).map(|j| format!("c{j}")))
        .collect();
    let mut t = Table::new(&headers);
    spec_meta(&mut t, &spec);
    t.meta(
        "matrix",
        if args.laplacian {
            "laplacian"
        } else {
            "adjacency"
        },
    );
    for i in 0..n {
        let mut row = vec![Cell::from(i)];
        row.extend(m.row(i).iter().map(|&x| Cell::Int(x as i64)));
        t.push(row);
    }
    Ok(t)
}

pub fn spectrum(args: &MatrixArgs, g: &GlobalOpts) -> Result<Table, CliError> {
    let spec = build_spec(&args.graph, g)?;
    let table = full_spectrum(&spec);
    let (classes, source) = match table.classes {
        Some(c) => (c, "exact"),
        None => (tie_classes(&table.values), "tolerance"),
    };
    let ids = classes.class_ids();
    let d = spec.degree() as f64;
    let mut t = Table::new(&["index", "lambda", "class"]);
    spec_meta(&mut t, &spec);
    t.meta(
        "matrix",
        if args.laplacian {
            "laplacian"
        } else {
            "adjacency"
        },
    )
    .meta("class_source", source)
    .meta("distinct", classes.len());
    for (j, &l) in table.values.iter().enumerate() {
        let value = if args.laplacian { d - l } else { l };
        t.push(vec![j.into(), value.into(), ids[j].into()]);
    }
    Ok(t)
}

fn pair(graph: &GraphArgs) -> Result<(u64, u64, u64), CliError> {
    match graph.a[..] {
        [a1, a2] => Ok((graph.n as u64, a1 as u64, a2 as u64)),
        _ => Err(CliError::Invalid(format!(
            "exactly two offsets are required, got {:?}",
            graph.a
        ))),
    }
}

pub fn classes(args: &GraphArgs, g: &GlobalOpts) -> Result<Table, CliError> {
    g.limits().check_order(args.n)?;
    let (n, a1, a2) = pair(args)?;
    let partition = index_classes(n, a1, a2)?;
    let divides = divides_sum_of_squares(n, a1, a2)?;
    let mut t = Table::new(&["class", "size", "members", "divides_sum_of_squares"]);
    t.meta("n", n)
        .meta("offsets", vec![a1, a2])
        .meta("divides_sum_of_squares", divides)
        .meta("classes", partition.len())
        .meta("max_multiplicity", partition.max_class_size());
    for (id, class) in partition.classes().iter().enumerate() {
        t.push(vec![
            id.into(),
            class.len().into(),
            join(class).into(),
            divides.into(),
        ]);
    }
    Ok(t)
}

pub fn oracle_compare(args: &OracleArgs, g: &GlobalOpts) -> Result<Report, CliError> {
    if !(args.gap_tol > 0.0 && args.gap_tol.is_finite()) {
        return Err(CliError::Invalid(format!(
            "--gap-tol must be positive, got {}",
            args.gap_tol
        )));
    }
    let spec = build_spec(&args.graph, g)?;
    g.limits().check_oracle_order(spec.n())?;
    let opts = JacobiOptions {
        max_order: g.oracle_max_n,
        ..JacobiOptions::default()
    };
    let numeric = jacobi_eigenvalues(&spec.adjacency_matrix(), &opts)?;
    let schedule: Vec<f64> = (0..5).map(|k| args.gap_tol / 10f64.powi(k)).collect();
    let clustering = audited_clusters(&numeric.values, &schedule)?;

    let table = full_spectrum(&spec);
    let analytic = &table.values;
    let (expected, source) = match &table.classes {
        Some(c) => (c.clone(), "exact"),
        None => (tie_classes(analytic), "tolerance"),
    };
    let check = check_classes(analytic, &clustering.clusters, &expected);

    // Position of each index in ascending closed-form order, which is where
    // its numeric counterpart sits in the sorted Jacobi output.
    let mut order: Vec<usize> = (0..analytic.len()).collect();
    order.sort_by(|&x, &y| analytic[x].total_cmp(&analytic[y]).then(x.cmp(&y)));
    let mut position = vec![0; order.len()];
    for (pos, &j) in order.iter().enumerate() {
        position[j] = pos;
    }

    let mut t = Table::new(&[
        "kind",
        "class",
        "size",
        "members",
        "lambda_analytic",
        "lambda_numeric",
        "deviation",
        "status",
    ]);
    spec_meta(&mut t, &spec);
    let mut worst = 0.0f64;
    for (id, class) in expected.classes().iter().enumerate() {
        let k = class.len() as f64;
        let mean_a = class.iter().map(|&j| analytic[j]).sum::<f64>() / k;
        let mean_n = class
            .iter()
            .map(|&j| numeric.values[position[j]])
            .sum::<f64>()
            / k;
        let dev = class
            .iter()
            .map(|&j| (analytic[j] - numeric.values[position[j]]).abs())
            .fold(0.0, f64::max);
        worst = worst.max(dev);
        let status = if dev <= MATCH_TOL { "PASS" } else { "FAIL" };
        t.push(vec![
            "class".into(),
            id.into(),
            class.len().into(),
            join(class).into(),
            mean_a.into(),
            mean_n.into(),
            dev.into(),
            status.into(),
        ]);
    }
    let passed = check.matches && worst <= MATCH_TOL;
    let verdict = if passed { "PASS" } else { "FAIL" };
    t.push(vec![
        "summary".into(),
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        worst.into(),
        verdict.into(),
    ]);
    t.meta("class_source", source)
        .meta("gap_tol", clustering.audit.gap_tol)
        .meta(
            "min_distinct_gap",
            finite_or_null(clustering.audit.min_distinct_gap),
        )
        .meta("max_spread", clustering.audit.max_spread)
        .meta("numeric_classes", check.numeric_classes.len())
        .meta("iterations", numeric.iterations)
        .meta("offdiag_norm", numeric.offdiag_norm)
        .meta("max_deviation", worst)
        .meta("tolerance", MATCH_TOL)
        .meta("status", verdict);
    let failure = (!passed).then(|| {
        format!(
            "closed-form classes disagree with the oracle (max deviation {worst:e}, partition match {})",
            check.matches
        )
    });
    Ok(Report { table: t, failure })
}

fn finite_or_null(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        serde_json::Value::Null
    }
}

fn sweep_orders(args: &SweepArgs, g: &GlobalOpts) -> Result<Vec<usize>, CliError> {
    let src = &args.orders;
    let orders = if let Some(limit) = src.primes_for {
        match args.a[..] {
            [a1, a2] => admissible_primes(a1 as u64, a2 as u64, limit)?
                .into_iter()
                .map(|p| p as usize)
                .collect(),
            _ => {
                return Err(CliError::Invalid(
                    "--primes-for needs exactly two offsets".into(),
                ))
            }
        }
    } else if let Some(list) = &src.orders {
        list.clone()
    } else {
        let limit = src.odd_up_to.expect("clap enforces one order source");
        let amax = args.a.iter().copied().max().unwrap_or(1);
        ((2 * amax + 1).max(3)..=limit).step_by(2).collect()
    };
    if orders.is_empty() {
        return Err(CliError::Invalid("no orders to sweep".into()));
    }
    for &n in &orders {
        g.limits().check_order(n)?;
    }
    Ok(orders)
}

fn theta_schedule(
    args: &SweepArgs,
    g: &GlobalOpts,
    orders: usize,
) -> (ThetaSchedule, &'static str) {
    let th = &args.theta;
    if let Some(t) = th.theta_rad {
        (ThetaSchedule::Constant(t), "constant")
    } else if let Some(list) = &th.theta_list {
        (ThetaSchedule::PerOrder(list.clone()), "list")
    } else if th.theta_random {
        let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
        let draws = (0..orders)
            .map(|_| rng.gen_range(0.0..=FRAC_PI_2))
            .collect();
        (ThetaSchedule::PerOrder(draws), "random")
    } else {
        (ThetaSchedule::Zero, "zero")
    }
}

fn describe(selector: EigvecSelector) -> String {
    match selector {
        EigvecSelector::Witness => "witness".into(),
        EigvecSelector::Constant => "v0".into(),
        EigvecSelector::Fourier(j) => format!("v:{j}"),
        EigvecSelector::Cosine(j) => format!("c:{j}"),
        EigvecSelector::Sine(j) => format!("s:{j}"),
    }
}

pub fn dque_sweep(args: &SweepArgs, g: &GlobalOpts) -> Result<Table, CliError> {
    let orders = sweep_orders(args, g)?;
    let (schedule, schedule_kind) = theta_schedule(args, g, orders.len());
    let uses_theta = args.basis == BasisArg::Rotated || args.subset == SubsetArg::ShiftedArc;
    if !uses_theta && schedule_kind != "zero" {
        return Err(CliError::Invalid(
            "an angle was given but neither --basis rotated nor --subset shifted-arc uses it"
                .into(),
        ));
    }
    let basis = match args.basis {
        BasisArg::Fourier => BasisRule::Fourier,
        BasisArg::Canonical => BasisRule::Canonical,
        BasisArg::Rotated => BasisRule::Rotated(schedule.clone()),
    };
    let need_p = || {
        args.p
            .ok_or_else(|| CliError::Invalid("--p is required for arc subsets".into()))
    };
    let subset = match args.subset {
        SubsetArg::Arc => SubsetRule::SymmetricArc { p: need_p()? },
        SubsetArg::ShiftedArc => SubsetRule::ShiftedArc {
            p: need_p()?,
            theta: schedule.clone(),
        },
        SubsetArg::Custom => {
            if args.members.is_empty() {
                return Err(CliError::Invalid(
                    "--members is required for custom subsets".into(),
                ));
            }
            SubsetRule::Custom(args.members.clone())
        }
    };
    let cfg = SweepConfig {
        offsets: args.a.clone(),
        orders: orders.clone(),
        basis,
        eigvec: args.eigvec,
        subset,
        jobs: g.jobs,
    };
    let series = circulant_core::dque_sweep(&cfg)?;

    let angle_at = |k: usize| -> Option<f64> {
        uses_theta.then(|| match &schedule {
            ThetaSchedule::Zero => 0.0,
            ThetaSchedule::Constant(t) => *t,
            ThetaSchedule::PerOrder(ts) => ts[k],
        })
    };
    let mut t = Table::new(&[
        "kind",
        "n",
        "subset_size",
        "density",
        "y",
        "eigvec_label",
        "theta_rad",
    ]);
    t.meta("offsets", args.a.clone())
        .meta("orders", orders.len())
        .meta("basis", series.family.to_string())
        .meta("subset", series.subset_rule.to_string())
        .meta("eigvec", describe(args.eigvec))
        .meta("theta_schedule", schedule_kind)
        .meta("seed", g.seed)
        .meta("target_p", series.target_p);
    for (k, r) in series.records.iter().enumerate() {
        t.push(vec![
            "record".into(),
            r.n.into(),
            r.subset_size.into(),
            r.density.into(),
            r.y.into(),
            r.eigvec_label.to_string().into(),
            r.theta_used.or(angle_at(k)).into(),
        ]);
    }
    if let Some(p) = series.target_p {
        let mut trailer = |kind: &str, value: f64| {
            t.push(vec![
                kind.into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                value.into(),
                Cell::Empty,
                Cell::Empty,
            ]);
        };
        trailer("target_p", p);
        if let Ok(b) = cubic_density_bound(p) {
            trailer("cubic_bound", b);
        }
        trailer("witness_limit", witness_limit(p)?);
    }
    Ok(t)
}

pub fn basis_check(args: &BasisCheckArgs, g: &GlobalOpts) -> Result<Report, CliError> {
    if args.n_max < 5 {
        return Err(CliError::Invalid(format!(
            "--n-max must be at least 5, got {}",
            args.n_max
        )));
    }
    g.limits().check_oracle_order(args.n_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut t = Table::new(&[
        "draw",
        "n",
        "a1",
        "a2",
        "gram_deviation",
        "adjacency_residual",
        "laplacian_residual",
    ]);
    let (mut gram_max, mut a_max, mut l_max) = (0.0f64, 0.0f64, 0.0f64);
    for draw in 0..args.draws {
        let n = 2 * rng.gen_range(2..=(args.n_max - 1) / 2) + 1;
        let h = (n - 1) / 2;
        let a1 = rng.gen_range(1..h);
        let a2 = rng.gen_range(a1 + 1..=h);
        let spec = CirculantSpec::new(n, [a1, a2])?;
        let basis = match args.basis {
            BasisArg::Fourier => fourier_basis(n)?,
            BasisArg::Canonical => real_canonical_basis(n)?,
            BasisArg::Rotated => {
                let thetas: Vec<f64> = (0..h).map(|_| rng.gen_range(0.0..=FRAC_PI_2)).collect();
                rotated_basis(n, &thetas)?
            }
        };
        let lambda = |l: circulant_core::BasisLabel| {
            analytic_eigenvalue(&spec, l.eigen_index()).expect("label index below n")
        };
        let d = spec.degree() as f64;
        let gram = basis.gram_deviation();
        let ra = basis.max_residual(&spec.adjacency_matrix(), lambda)?;
        let rl = basis.max_residual(&spec.laplacian_matrix(), |l| d - lambda(l))?;
        gram_max = gram_max.max(gram);
        a_max = a_max.max(ra);
        l_max = l_max.max(rl);
        t.push(vec![
            draw.into(),
            n.into(),
            a1.into(),
            a2.into(),
            gram.into(),
            ra.into(),
            rl.into(),
        ]);
    }
    let passed = gram_max < 1e-12 && a_max < 1e-9 && l_max < 1e-9;
    t.meta("seed", g.seed)
        .meta("draws", args.draws)
        .meta("basis", format!("{:?}", args.basis).to_lowercase())
        .meta("max_gram_deviation", gram_max)
        .meta("max_adjacency_residual", a_max)
        .meta("max_laplacian_residual", l_max)
        .meta("status", if passed { "PASS" } else { "FAIL" });
    let failure = (!passed)
        .then(|| format!("basis check failed: Gram {gram_max:e}, residuals {a_max:e} / {l_max:e}"));
    Ok(Report { table: t, failure })
}
