use polyadic::density::{
    buck_cover_bound, exact_density, measurability_gap, prefix_density, DensityEstimate, SetSpec,
};
use polyadic::distribution::{
    cdf_value, convolve, empirical_cdf_range, independence_test, ks_distance, ClosedFormCdf,
};
use polyadic::moments::{
    chebyshev_check, clt_experiment, clt_experiment_with_chains, dispersion, mean_prefix, mean_modulus,
    moment_product_check, weighted_mean, Averaging, CltOptions, MomentReport,
};
use polyadic::rational::format_rational;
use polyadic::sequence::{vdc, Transform};
use polyadic::{
    decompose, distance_limit, polyadic_distance, DivisibilityChain, Error, IndexSequence, PeriodicSet, Result,
    SequenceSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::*;
use crate::emit::{Output, Table};

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn to_json(v: &impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn output(results: Value, table: Table) -> Output {
    Output { results, table, warnings: Vec::new() }
}

/// `start:stop:step` (inclusive) or a comma list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let number = |t: &str| t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad grid value {t:?}")));
    let parts: Vec<&str> = s.split(':').collect();
    let values = match parts.as_slice() {
        [single] => single.split(',').map(number).collect::<Result<Vec<_>>>()?,
        [a, b, h] => {
            let (a, b, h) = (number(a)?, number(b)?, number(h)?);
            if !(h > 0.0) || b < a {
                return Err(Error::Parse(format!("grid {s:?} needs start <= stop and a positive step")));
            }
            let count = ((b - a) / h + 1e-9).floor() as usize + 1;
            if count > 1 << 20 {
                return Err(Error::Parse(format!("grid {s:?} has too many points")));
            }
            (0..count).map(|i| ((a + i as f64 * h) * 1e12).round() / 1e12).collect()
        }
        _ => return Err(Error::Parse(format!("grid {s:?} must be start:stop:step or a comma list"))),
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Parse(format!("grid {s:?} contains a non-finite value")));
    }
    Ok(values)
}

pub fn run(command: &Command) -> Result<Output> {
    match command {
        Command::Digits(a) => digits(a),
        Command::Metric(a) => metric(a),
        Command::Vdc(a) => vdc_values(a),
        Command::Edf(a) => edf(a),
        Command::Ks(a) => ks(a),
        Command::Density(a) => density(a),
        Command::Buck(a) => buck(a),
        Command::Gap(a) => gap(a),
        Command::Convolve(a) => convolution(a),
        Command::Independence(a) => independence(a),
        Command::Mean(a) => mean(a),
        Command::Dispersion(a) => dispersions(a),
        Command::WeightedMean(a) => weighted(a),
        Command::Chebyshev(a) => chebyshev(a),
        Command::Products(a) => products(a),
        Command::Clt(a) => clt(a),
    }
}

fn digits(a: &DigitsArgs) -> Result<Output> {
    let chain: DivisibilityChain = a.chain.parse()?;
    let d = decompose(a.n, &chain)?;
    let value = vdc(a.n, &chain)?;
    let mut t = Table::new(&["position", "digit", "radix"]);
    for (j, (digit, radix)) in d.digits().iter().zip(chain.radices()).enumerate() {
        t.push(vec![j.to_string(), digit.to_string(), radix.to_string()]);
    }
    let results = json!({
        "n": a.n,
        "chain": chain.to_string(),
        "digits": d.digits(),
        "radices": &chain.radices()[..d.digits().len()],
        "vdc": format_rational(&value),
    });
    Ok(output(results, t))
}

fn metric(a: &MetricArgs) -> Result<Output> {
    if a.a.len() != a.b.len() {
        return Err(bad(format!("--a has {} values but --b has {}", a.a.len(), a.b.len())));
    }
    let mut t = Table::new(&["a", "b", "n_max", "partial", "tail_bound", "limit"]);
    let mut rows = Vec::new();
    for (&x, &y) in a.a.iter().zip(&a.b) {
        let d = polyadic_distance(x, y, a.n_max)?;
        let limit = distance_limit(x, y).ok().map(|l| format_rational(&l));
        t.push(vec![
            x.to_string(),
            y.to_string(),
            a.n_max.to_string(),
            format_rational(&d.value),
            format_rational(&d.tail_bound),
            limit.clone().unwrap_or_default(),
        ]);
        rows.push(json!({
            "a": x,
            "b": y,
            "n_max": a.n_max,
            "partial": format_rational(&d.value),
            "tail_bound": format_rational(&d.tail_bound),
            "limit": limit,
        }));
    }
    Ok(output(json!({ "distances": rows }), t))
}

fn vdc_values(a: &VdcArgs) -> Result<Output> {
    let chain: DivisibilityChain = a.chain.parse()?;
    let ns: Vec<u64> = match (a.from, a.to) {
        (Some(lo), Some(hi)) if hi > lo => (lo..hi).collect(),
        (Some(_), Some(_)) => return Err(bad("--to must exceed --from")),
        _ if a.n.is_empty() => return Err(bad("give --n or --from/--to")),
        _ => a.n.clone(),
    };
    let mut t = Table::new(&["n", "value", "exact"]);
    let mut rows = Vec::new();
    for n in ns {
        let exact = vdc(n, &chain)?;
        let value = polyadic::rational::to_f64(&exact);
        t.push(vec![n.to_string(), num(value), format_rational(&exact)]);
        rows.push(json!({ "n": n, "value": value, "exact": format_rational(&exact) }));
    }
    Ok(output(json!({ "chain": chain.to_string(), "values": rows }), t))
}

fn window(from: u64, n: u64) -> Result<(u64, u64)> {
    if n == 0 {
        return Err(bad("--n must be positive"));
    }
    Ok((from, from.checked_add(n).ok_or_else(|| bad("window end overflows"))?))
}

fn edf(a: &EdfArgs) -> Result<Output> {
    let spec: SequenceSpec = a.seq.parse()?;
    let (lo, hi) = window(a.from, a.n)?;
    let edf = empirical_cdf_range(&spec, lo, hi)?;
    let n = edf.len() as f64;
    let mut t = Table::new(&["x", "F"]);
    let mut points = Vec::new();
    for (x, _, through) in edf.jumps() {
        let f = through as f64 / n;
        t.push(vec![num(x), num(f)]);
        points.push([x, f]);
    }
    let results = json!({ "N": a.n, "from": a.from, "distinct": points.len(), "points": points });
    Ok(output(results, t))
}

fn ks(a: &KsArgs) -> Result<Output> {
    let spec: SequenceSpec = a.seq.parse()?;
    let reference: ClosedFormCdf = a.against.parse()?;
    let (lo, hi) = window(a.from, a.n)?;
    let edf = empirical_cdf_range(&spec, lo, hi)?;
    let report = ks_distance(&edf, &reference);
    let mut t = Table::new(&["statistic", "argmax_x", "N"]);
    t.push(vec![num(report.statistic), num(report.argmax_x), a.n.to_string()]);
    let mut results = to_json(&report);
    if !a.at.is_empty() {
        let values: Vec<Value> = a.at.iter().map(|&x| json!({ "x": x, "F": cdf_value(&reference, x) })).collect();
        results["reference_values"] = Value::Array(values);
    }
    Ok(output(results, t))
}

fn density_row(t: &mut Table, d: &DensityEstimate) {
    t.push(vec![d.method_name().to_string(), format_rational(&d.value), d.params()]);
}

fn density_json(d: &DensityEstimate) -> Value {
    let mut v = to_json(d);
    v["value_f64"] = json!(d.value_f64());
    v
}

fn density(a: &DensityArgs) -> Result<Output> {
    let set: SetSpec = a.set.parse()?;
    let d = match a.n {
        Some(n) => prefix_density(&set, n)?,
        None => exact_density(&set)
            .ok_or_else(|| bad(format!("{} is not periodic; give a prefix window with --n", a.set)))?,
    };
    let mut t = Table::new(&["method", "value", "params"]);
    density_row(&mut t, &d);
    Ok(output(density_json(&d), t))
}

fn buck(a: &BuckArgs) -> Result<Output> {
    if let Some(trials) = a.random {
        return buck_random(a, trials);
    }
    let set: SetSpec = a.set.as_deref().expect("clap requires --set").parse()?;
    let n = a.n.unwrap_or(a.max_modulus.saturating_mul(10));
    let (d, cert) = buck_cover_bound(&set, a.max_modulus, n)?;
    let mut t = Table::new(&["method", "value", "params"]);
    density_row(&mut t, &d);
    let mut results = density_json(&d);
    results["certificate"] = to_json(&cert);
    Ok(output(results, t))
}

fn buck_random(a: &BuckArgs, trials: usize) -> Result<Output> {
    if a.max_modulus == 0 {
        return Err(bad("--max-modulus must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut t = Table::new(&["trial", "set", "density", "bound", "gap", "prefix", "agree"]);
    let mut rows = Vec::new();
    let mut all = true;
    for trial in 0..trials {
        let m = rng.random_range(1..=a.max_modulus);
        let p: f64 = rng.random_range(0.0..=1.0);
        let residues: Vec<i64> = (0..m as i64).filter(|_| rng.random_bool(p)).collect();
        let periodic = PeriodicSet::new(m, residues)?;
        let want = periodic.density();
        let label = periodic.to_string();
        let set = SetSpec::Periodic(periodic);
        let n = a.n.unwrap_or(10 * m);
        let (bound, _) = buck_cover_bound(&set, m, n)?;
        let gap = measurability_gap(&set, m, n)?;
        let prefix = prefix_density(&set, n)?.value;
        let agree = bound.value == want && gap == 0.into() && prefix == want;
        all &= agree;
        let cells = [want, bound.value, gap, prefix].map(|r| format_rational(&r));
        t.push(vec![
            trial.to_string(),
            label.clone(),
            cells[0].clone(),
            cells[1].clone(),
            cells[2].clone(),
            cells[3].clone(),
            agree.to_string(),
        ]);
        rows.push(json!({
            "trial": trial, "set": label, "modulus": m, "window": n, "density": cells[0],
            "bound": cells[1], "gap": cells[2], "prefix": cells[3], "agree": agree,
        }));
    }
    Ok(output(json!({ "trials": rows, "all_agree": all }), t))
}

fn gap(a: &GapArgs) -> Result<Output> {
    let set: SetSpec = a.set.parse()?;
    let n = a.n.unwrap_or(a.max_modulus.saturating_mul(10));
    let (inner, _) = buck_cover_bound(&set, a.max_modulus, n)?;
    let (outer, _) = buck_cover_bound(&set.clone().complement(), a.max_modulus, n)?;
    let gap = measurability_gap(&set, a.max_modulus, n)?;
    let cells = [&gap, &inner.value, &outer.value].map(format_rational);
    let mut t = Table::new(&["gap", "bound", "complement_bound"]);
    t.push(cells.to_vec());
    let results = json!({
        "gap": cells[0], "bound": cells[1], "complement_bound": cells[2],
        "max_modulus": a.max_modulus, "N": n,
    });
    Ok(output(results, t))
}

fn convolution(a: &ConvolveArgs) -> Result<Output> {
    let f1: ClosedFormCdf = a.f1.parse()?;
    let f2: ClosedFormCdf = a.f2.parse()?;
    let compare: Option<ClosedFormCdf> = a.compare.as_deref().map(str::parse).transpose()?;
    let conv = convolve(&f1, &f2, a.step)?;
    let grid = conv.grid();
    let mut t = match compare {
        Some(_) => Table::new(&["x", "G", "reference"]),
        None => Table::new(&["x", "G"]),
    };
    for (&x, &g) in grid.xs().iter().zip(grid.fs()) {
        let mut row = vec![num(x), num(g)];
        if let Some(c) = &compare {
            row.push(num(c.eval(x)));
        }
        t.push(row);
    }
    let mut results = to_json(&conv);
    if let Some(c) = &compare {
        let report = ks_distance(&conv.cdf, c);
        results["sup_error"] = json!(report.statistic);
        results["sup_error_at"] = json!(report.argmax_x);
    }
    Ok(output(results, t))
}

fn independence(a: &IndependenceArgs) -> Result<Output> {
    if a.seq.len() < 2 {
        return Err(bad("give at least two --seq"));
    }
    let specs = a.seq.iter().map(|s| s.parse()).collect::<Result<Vec<SequenceSpec>>>()?;
    let axes = a.grid.iter().map(|g| parse_grid(g)).collect::<Result<Vec<_>>>()?;
    let grid = match axes.len() {
        1 => vec![axes[0].clone(); specs.len()],
        k if k == specs.len() => axes,
        k => return Err(bad(format!("{k} grids for {} sequences", specs.len()))),
    };
    let report = independence_test(&specs, &grid, a.n)?;
    let mut header = vec!["max_deviation", "argmax", "joint", "product", "N"];
    let argmax = report.argmax.iter().map(|x| num(*x)).collect::<Vec<_>>().join(";");
    let mut row = vec![
        num(report.max_deviation),
        argmax,
        num(report.joint_at_argmax),
        num(report.product_at_argmax),
        a.n.to_string(),
    ];
    let mut results = to_json(&report);
    if a.control {
        let same = vec![specs[0].clone(); specs.len()];
        let control = independence_test(&same, &grid, a.n)?;
        header.push("control_deviation");
        row.push(num(control.max_deviation));
        results["control"] = to_json(&control);
    }
    let mut t = Table::new(&header);
    t.push(row);
    Ok(output(results, t))
}

fn moment_cells(r: &MomentReport) -> [String; 2] {
    [num(r.estimate), r.exact.as_ref().map(format_rational).unwrap_or_default()]
}

fn averagings(n: Option<u64>, moduli: &[u64]) -> Result<Vec<Averaging>> {
    let list: Vec<Averaging> =
        n.map(Averaging::Prefix).into_iter().chain(moduli.iter().map(|&m| Averaging::Modulus(m))).collect();
    if list.is_empty() {
        return Err(bad("give --n or --modulus"));
    }
    Ok(list)
}

fn averaging_label(how: Averaging) -> (&'static str, u64) {
    match how {
        Averaging::Prefix(n) => ("prefix", n),
        Averaging::Modulus(m) => ("modulus", m),
    }
}

fn mean(a: &MeanArgs) -> Result<Output> {
    let spec: SequenceSpec = a.seq.parse()?;
    let mut header = vec!["method", "param", "mean", "exact"];
    if a.dispersion {
        header.extend(["dispersion", "dispersion_exact"]);
    }
    let mut t = Table::new(&header);
    let mut rows = Vec::new();
    for how in averagings(a.n, &a.modulus)? {
        let m = match how {
            Averaging::Prefix(n) => mean_prefix(&spec, n)?,
            Averaging::Modulus(q) => mean_modulus(&spec, q)?,
        };
        let (name, param) = averaging_label(how);
        let mut row = vec![name.to_string(), param.to_string()];
        row.extend(moment_cells(&m));
        let mut j = json!({ "mean": to_json(&m) });
        if a.dispersion {
            let d = dispersion(&spec, how)?;
            row.extend(moment_cells(&d));
            j["dispersion"] = to_json(&d);
        }
        t.push(row);
        rows.push(j);
    }
    Ok(output(json!({ "spec": spec.to_string(), "rows": rows }), t))
}

fn dispersions(a: &DispersionArgs) -> Result<Output> {
    let spec: SequenceSpec = a.seq.parse()?;
    let mut t = Table::new(&["method", "param", "dispersion", "exact"]);
    let mut rows = Vec::new();
    for how in averagings(a.n, &a.modulus)? {
        let d = dispersion(&spec, how)?;
        let (name, param) = averaging_label(how);
        let mut row = vec![name.to_string(), param.to_string()];
        row.extend(moment_cells(&d));
        t.push(row);
        rows.push(to_json(&d));
    }
    Ok(output(json!({ "spec": spec.to_string(), "rows": rows }), t))
}

fn weighted(a: &WeightedMeanArgs) -> Result<Output> {
    let spec: SequenceSpec = a.seq.parse()?;
    let mut t = Table::new(&["index", "estimate", "exact", "warning"]);
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for s in &a.index {
        let index: IndexSequence = s.parse()?;
        let r = weighted_mean(&spec, &index, a.n)?;
        let [estimate, exact] = moment_cells(&r);
        t.push(vec![index.to_string(), estimate, exact, r.warning.clone().unwrap_or_default()]);
        warnings.extend(r.warning.clone());
        rows.push(to_json(&r));
    }
    Ok(Output { results: json!({ "rows": rows }), table: t, warnings })
}

fn chebyshev(a: &ChebyshevArgs) -> Result<Output> {
    let spec: SequenceSpec = a.seq.parse()?;
    let mut t = Table::new(&["epsilon", "lhs", "bound", "slack", "satisfied", "mean", "dispersion"]);
    let mut rows = Vec::new();
    let mut all = true;
    for &eps in &a.eps {
        let r = chebyshev_check(&spec, eps, a.n)?;
        all &= r.satisfied;
        t.push(vec![
            num(r.epsilon),
            num(r.lhs),
            num(r.bound),
            num(r.slack),
            r.satisfied.to_string(),
            num(r.mean),
            num(r.dispersion),
        ]);
        rows.push(to_json(&r));
    }
    Ok(output(json!({ "rows": rows, "all_satisfied": all }), t))
}

fn products(a: &ProductsArgs) -> Result<Output> {
    let specs = a.seq.iter().map(|s| s.parse()).collect::<Result<Vec<SequenceSpec>>>()?;
    let transforms = a.transform.iter().map(|s| s.parse()).collect::<Result<Vec<Transform>>>()?;
    let index: IndexSequence = a.index.parse()?;
    let r = moment_product_check(&specs, &transforms, &index, a.n)?;
    let mut t = Table::new(&["lhs", "rhs", "gap", "N"]);
    t.push(vec![num(r.lhs), num(r.rhs), num(r.gap), a.n.to_string()]);
    Ok(output(to_json(&r), t))
}

fn clt(a: &CltArgs) -> Result<Output> {
    let options = CltOptions {
        grid: a.grid.as_deref().map(parse_grid).transpose()?.unwrap_or_default(),
        estimate_moments: a.estimate_moments,
    };
    let reports = if !a.chain.is_empty() {
        let chains = a.chain.iter().map(|c| c.parse()).collect::<Result<Vec<DivisibilityChain>>>()?;
        vec![clt_experiment_with_chains(&chains, a.n, &options)?]
    } else if !a.k.is_empty() {
        a.k.iter().map(|&k| clt_experiment(k, a.n, &options)).collect::<Result<Vec<_>>>()?
    } else {
        return Err(bad("give --k or --chain"));
    };
    let t = if options.grid.is_empty() {
        let mut t = Table::new(&["k", "ks_to_normal", "argmax_x", "E", "D2", "N"]);
        for r in &reports {
            t.push(vec![
                r.k.to_string(),
                num(r.ks_to_normal),
                num(r.argmax_x),
                num(r.mean),
                num(r.dispersion),
                r.window.to_string(),
            ]);
        }
        t
    } else if reports.len() == 1 {
        let mut t = Table::new(&["x", "edf", "normal"]);
        for row in &reports[0].rows {
            t.push(vec![num(row.x), num(row.edf), num(row.normal)]);
        }
        t
    } else {
        let mut t = Table::new(&["k", "x", "edf", "normal"]);
        for r in &reports {
            for row in &r.rows {
                t.push(vec![r.k.to_string(), num(row.x), num(row.edf), num(row.normal)]);
            }
        }
        t
    };
    let decreasing = reports.windows(2).all(|w| w[1].ks_to_normal < w[0].ks_to_normal);
    let results = json!({ "reports": to_json(&reports), "strictly_decreasing": decreasing });
    Ok(output(results, t))
}
