//! One function per subcommand. Each computes everything first and only
//! then writes its files, so a failing run leaves no partial output.

use std::fmt::Write as _;

use num_traits::ToPrimitive;
use rauzy_core::betaexpand::ParryData;
use rauzy_core::io::{
    format_field_descriptor, point_cloud_text, raster_to_pgm, report_text, verdict_name, write_atomic,
};
use rauzy_core::periodicity::{check_commutation, cross_check, decide as decide_one, sample_field_elements, sample_two_sided_words, summarize};
use rauzy_core::rauzy::{angle_degrees, iterate_ifs, measure_estimate, perron_vector, render as render_raster, render_two_sided, select_axes};
use rauzy_core::sofic::{char_poly, factor_char_poly, format_factorization, incidence, is_pisot_type};
use rauzy_core::{
    build_automaton, build_substitution, classify_parry, Agreement, Axis, CylinderSet, EmbedError, FieldError,
    MembershipConfig, ParryKind, PisotField, PointCloud, RauzyError, RepresentationSpace,
};

use crate::config::RunConfig;
use crate::CliError;

fn field(cfg: &RunConfig) -> Result<PisotField, CliError> {
    PisotField::from_bigint(&cfg.field).map_err(|e| match e {
        FieldError::NotPisot(_) | FieldError::DegenerateInput(_) => CliError::NotPisot(e.to_string()),
        FieldError::Parse(_) => CliError::Parse(e.to_string()),
        _ => CliError::Failed(e.to_string()),
    })
}

fn parry(k: &PisotField) -> Result<ParryData, CliError> {
    classify_parry(k).map_err(|e| CliError::Failed(e.to_string()))
}

fn space(cfg: &RunConfig, k: &PisotField) -> Result<RepresentationSpace, CliError> {
    RepresentationSpace::new(k, cfg.eps, cfg.padic_digits).map_err(embed_err)
}

fn embed_err(e: EmbedError) -> CliError {
    CliError::Failed(e.to_string())
}

fn membership(cfg: &RunConfig) -> MembershipConfig {
    MembershipConfig { depth: cfg.membership_depth, confirm_shrink: cfg.confirm_shrink, node_budget: cfg.node_budget }
}

/// Writes `(name, contents)` pairs under the output directory.
fn write_all(cfg: &RunConfig, files: &[(&str, &str)]) -> Result<(), CliError> {
    for (name, text) in files {
        let path = cfg.out.join(name);
        write_atomic(&path, text.as_bytes()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn kind_name(kind: ParryKind) -> &'static str {
    match kind {
        ParryKind::SimpleParry => "simple Parry",
        ParryKind::NonSimpleParry => "non-simple Parry",
    }
}

pub fn classify(cfg: &RunConfig) -> Result<String, CliError> {
    let k = field(cfg)?;
    let p = parry(&k)?;
    let mut s = String::new();
    match k.beta().as_integer() {
        Some(b) => writeln!(s, "{} (integer base {b})", kind_name(p.kind)),
        None => writeln!(s, "{}, d_β(1)={}, d={}", kind_name(p.kind), p.d_beta_one, p.d),
    }
    .expect("write to string");
    let _ = writeln!(s, "field: {}", format_field_descriptor(&k));
    let _ = writeln!(s, "d_β(1) = {}", p.d_beta_one);
    let _ = writeln!(s, "d*_β(1) = {}", p.d_star);
    let _ = writeln!(s, "kind = {}", kind_name(p.kind));
    let _ = writeln!(s, "n = {}", p.n);
    let _ = writeln!(s, "p = {}", p.p);
    let _ = writeln!(s, "d = {}", p.d);
    write_all(cfg, &[("classify.txt", &s)])?;
    Ok(s)
}

fn matrix_text(m: &[Vec<i64>]) -> String {
    let mut s = String::new();
    for row in m {
        let r: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "  {}", r.join(" "));
    }
    s
}

/// Incidence matrix, characteristic polynomial and its factorization.
fn incidence_text(k: &PisotField, p: &ParryData) -> String {
    let m = incidence(&build_substitution(p));
    let cp = char_poly(&m);
    let mut s = String::from("incidence matrix:\n");
    s.push_str(&matrix_text(&m));
    let _ = writeln!(s, "characteristic polynomial: {}", format_factorization(&factor_char_poly(&cp, k.minpoly())));
    let _ = writeln!(s, "Pisot type: {}", is_pisot_type(&cp));
    s
}

pub fn automaton(cfg: &RunConfig) -> Result<String, CliError> {
    let k = field(cfg)?;
    let p = parry(&k)?;
    let aut = build_automaton(&p);
    let dot = aut.to_dot("M_beta");
    let mut s = format!("automaton: {} states, {} edges\n", aut.states, aut.edges.len());
    for e in &aut.edges {
        let _ = writeln!(s, "  a{} --{}--> a{}", e.from + 1, e.label, e.to + 1);
    }
    s.push_str(&incidence_text(&k, &p));
    write_all(cfg, &[("automaton.dot", &dot), ("automaton.txt", &s)])?;
    Ok(s)
}

pub fn substitution(cfg: &RunConfig) -> Result<String, CliError> {
    let k = field(cfg)?;
    let p = parry(&k)?;
    let sub = build_substitution(&p);
    let mut s = format!("{sub}\n");
    s.push_str(&sub.listing());
    s.push_str(&incidence_text(&k, &p));
    write_all(cfg, &[("substitution.txt", &s)])?;
    Ok(s)
}

fn parse_axis(space: &RepresentationSpace, label: &str) -> Result<Axis, CliError> {
    space
        .axes()
        .into_iter()
        .find(|&a| space.axis_label(a) == label.trim())
        .ok_or_else(|| {
            let known: Vec<String> = space.axes().into_iter().map(|a| space.axis_label(a)).collect();
            CliError::NoPlottableAxes(format!("unknown axis {label:?}; available: {}", known.join(", ")))
        })
}

fn rauzy_err(e: RauzyError) -> CliError {
    CliError::NoPlottableAxes(e.to_string())
}

pub fn render(cfg: &RunConfig, two_sided: bool, axes: Option<&str>, piece: Option<usize>) -> Result<String, CliError> {
    let k = field(cfg)?;
    let p = parry(&k)?;
    let sp = space(cfg, &k)?;
    let aut = build_automaton(&p);
    let requested: Vec<Axis> = match axes {
        Some(a) => a.split(',').map(|l| parse_axis(&sp, l)).collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    if let Some(i) = piece {
        if i == 0 || i > aut.states {
            return Err(CliError::Parse(format!("piece must lie in 1..={}", aut.states)));
        }
    }
    let mut approx = iterate_ifs(&sp, &aut, cfg.depth);
    if let Some(i) = piece {
        for (j, c) in approx.pieces.iter_mut().enumerate() {
            if j + 1 != i {
                *c = PointCloud::empty(&sp);
            }
        }
    }
    let mut s = String::new();
    let mut files: Vec<(&str, String)> = Vec::new();
    let raster = if two_sided {
        let axis = match requested.as_slice() {
            [] => *sp.axes().first().ok_or_else(|| rauzy_err(RauzyError::NoPlottableAxes("K_β is trivial".into())))?,
            [a] => *a,
            _ => return Err(CliError::Parse("two-sided rendering takes one axis".into())),
        };
        let cyl = CylinderSet::new(&sp, &p);
        let heights = cyl.heights_f64();
        let mut c = String::from("# piece height exact (c0,c1,…/D in powers of β)\n");
        for (i, h) in cyl.heights.iter().enumerate() {
            let _ = writeln!(c, "{} {} {h}", i + 1, heights[i]);
        }
        let _ = writeln!(s, "two-sided: axis {} × real coordinate", sp.axis_label(axis));
        s.push_str(&c);
        files.push(("cylinders.txt", c));
        render_two_sided(&sp, &approx, &heights, axis, cfg.size)
    } else {
        let req = match requested.as_slice() {
            [] => None,
            [a, b] => Some((*a, *b)),
            _ => return Err(CliError::Parse("axes takes two labels separated by a comma".into())),
        };
        let (a, b) = select_axes(&sp, req).map_err(rauzy_err)?;
        let _ = writeln!(s, "axes: {} × {}", sp.axis_label(a), sp.axis_label(b));
        render_raster(&sp, &approx, (a, b), cfg.size)
    };
    let _ = writeln!(
        s,
        "depth {}: {} points in {} pieces, {}×{} raster, shades used: {}",
        cfg.depth,
        approx.total_points(),
        approx.pieces.len(),
        raster.width,
        raster.height,
        raster.distinct_shades()
    );
    files.push(("render.pgm", raster_to_pgm(&raster)));
    files.push(("cloud.txt", point_cloud_text(&sp, &approx)));
    let refs: Vec<(&str, &str)> = files.iter().map(|(n, t)| (*n, t.as_str())).collect();
    write_all(cfg, &refs)?;
    Ok(s)
}

pub fn decide(cfg: &RunConfig, x: &str) -> Result<String, CliError> {
    let k = field(cfg)?;
    let p = parry(&k)?;
    let sp = space(cfg, &k)?;
    let x = k.parse_element(x).map_err(|e| CliError::Parse(e.to_string()))?;
    if x.floor() != 0.into() {
        return Err(CliError::Parse(format!("x = {x} must lie in [0, 1)")));
    }
    let fraction = x.as_rational().and_then(|q| Some((q.numer().to_i64()?, q.denom().to_i64()?)));
    let cyl = CylinderSet::new(&sp, &p);
    let r = decide_one(&cyl, &x, fraction, &membership(cfg)).map_err(|e| CliError::Failed(e.to_string()))?;
    let mut s = if r.exact_verdict {
        format!("purely periodic, period {}", r.exact_period)
    } else {
        "not purely periodic".to_string()
    };
    let _ = writeln!(s, ", geometric: {}", verdict_name(r.geometric.verdict));
    let report = report_text(std::slice::from_ref(&r));
    s.push_str(&report);
    write_all(cfg, &[("decide.txt", &report)])?;
    if r.agreement == Agreement::Conflict {
        return Err(CliError::Conflict(s));
    }
    Ok(s)
}

pub fn crosscheck(cfg: &RunConfig) -> Result<String, CliError> {
    let k = field(cfg)?;
    let p = parry(&k)?;
    let sp = space(cfg, &k)?;
    let cyl = CylinderSet::new(&sp, &p);
    let extra = sample_field_elements(&k, cfg.extra, cfg.seed);
    let reports = cross_check(&cyl, cfg.q_max, &extra, &membership(cfg)).map_err(|e| CliError::Failed(e.to_string()))?;
    let sum = summarize(&reports);
    let report = report_text(&reports);
    let s = format!(
        "{} tested, {} conflicts, {} undecided, {} purely periodic\n",
        sum.tested, sum.conflicts, sum.undecided, sum.purely_periodic
    );
    write_all(cfg, &[("crosscheck.txt", &report)])?;
    if sum.conflicts > 0 {
        let listed: String = reports
            .iter()
            .filter(|r| r.agreement == Agreement::Conflict)
            .map(|r| format!("  {} exact={} geometric={}\n", r.x, r.exact_verdict, verdict_name(r.geometric.verdict)))
            .collect();
        return Err(CliError::Conflict(format!("{s}{listed}")));
    }
    Ok(s)
}

pub fn commutation(cfg: &RunConfig) -> Result<String, CliError> {
    let k = field(cfg)?;
    let p = parry(&k)?;
    let sp = space(cfg, &k)?;
    let words = sample_two_sided_words(&p, cfg.samples, cfg.left_len, cfg.seed);
    let elems = sample_field_elements(&k, cfg.samples, cfg.seed);
    let rep = check_commutation(&sp, &p, &words, &elems).map_err(|e| CliError::Failed(e.to_string()))?;
    let mut s = String::new();
    let _ = writeln!(s, "samples: {} words, {} elements (seed {})", words.len(), elems.len(), cfg.seed);
    let _ = writeln!(s, "excluded (u not strictly below d*_β(1)): {}", rep.excluded);
    let _ = writeln!(s, "shift commutation: max deviation {:.3e}", rep.prop1);
    let _ = writeln!(s, "conjugacy on exact points: max deviation {:.3e}", rep.prop2);
    let _ = writeln!(s, "backward step: max deviation {:.3e}", rep.minus);
    write_all(cfg, &[("commutation.txt", &s)])?;
    Ok(s)
}

pub fn measure(cfg: &RunConfig) -> Result<String, CliError> {
    let k = field(cfg)?;
    let p = parry(&k)?;
    let sp = space(cfg, &k)?;
    let approx = iterate_ifs(&sp, &build_automaton(&p), cfg.depth);
    let est = measure_estimate(&sp, &approx, cfg.resolution);
    let perron = perron_vector(&incidence(&build_substitution(&p)));
    let mut s = String::new();
    let _ = writeln!(s, "depth {}, resolution {}", cfg.depth, cfg.resolution);
    let _ = writeln!(s, "# piece measure boxes perron");
    for (i, ((m, n), v)) in est.measures.iter().zip(&est.occupied).zip(&perron).enumerate() {
        let _ = writeln!(s, "{} {m:.6e} {n} {v:.6}", i + 1);
    }
    let _ = writeln!(s, "angle to Perron vector: {:.3}°", angle_degrees(&est.measures, &perron));
    if est.undersampled {
        s.push_str("warning: the point cloud is coarser than the grid; increase the depth\n");
    }
    write_all(cfg, &[("measure.txt", &s)])?;
    Ok(s)
}
