use std::collections::BTreeSet;
use std::fmt::{Debug, Display};
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};

use flatcensus::enumerate::oracle::{brute_cusp_data, brute_gluing_classes, brute_irreducible};
use flatcensus::enumerate::{
    canonical_pair, enumerate_cusp_data, enumerate_gluings, enumerate_irreducible, enumerate_pa_matrices, CuspMatrixPair,
    GluingPattern,
};
use flatcensus::exactnum::json::{coeffs_to_json, field_to_json, poly_to_json, rational_to_json};
use flatcensus::exactnum::{parse_rational, rat, Rational};
use flatcensus::hyperbolic::{
    commutator_certificate, cone_radius, cusp_area, pythagorean, sl2z_double_cosets, Certificate, UHPPoint,
};
use flatcensus::markov::{
    build_markov, intersection_matrix, markov_bounds, reconstruct_from_markov, refine_partition, render_partition_svg,
    to_eigenbasis, verify_markov, Axis, SegmentGluingGraph,
};
use flatcensus::origami::{affine_automorphism, Origami, OrigamiError, Sl2z};
use flatcensus::pfcore::{perron_root, NonNegIntMatrix};
use flatcensus::surface::{
    build_surface, intersection_data, lambda_json, parabolic_data, render_svg, Cylinder, CuspDatum, Direction, RectSurface,
    SvgOptions,
};

use crate::output::{self, Format, Report};
use crate::{Command, Common, HypTool};

/// Input errors exit with 1, domain errors with 2 after printing a JSON
/// record `{"error": kind, "message": ..}`.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Domain(Value),
}

fn input(e: impl Display) -> Failure {
    Failure::Input(e.to_string())
}

/// The variant name of an error enum, taken from its Debug form.
fn kind<E: Debug>(e: &E) -> String {
    let s = format!("{e:?}");
    s.chars().take_while(|c| c.is_alphanumeric()).collect()
}

fn domain<E: Debug + Display>(e: E) -> Failure {
    Failure::Domain(json!({"error": kind(&e), "message": e.to_string()}))
}

fn mismatch(what: &str) -> Failure {
    Failure::Domain(json!({"error": "OracleMismatch", "message": format!("{what} differs from the brute-force oracle")}))
}

fn threshold(s: &str) -> Result<Rational, Failure> {
    let t = parse_rational(s).map_err(input)?;
    if t <= rat(0) {
        return Err(Failure::Input(format!("T must be positive, got {s}")));
    }
    Ok(t)
}

fn positive_size(n: usize, flag: &str) -> Result<usize, Failure> {
    if n == 0 {
        return Err(Failure::Input(format!("{flag} must be at least 1")));
    }
    Ok(n)
}

fn parse_json(s: &str, what: &str) -> Result<Value, Failure> {
    serde_json::from_str(s).map_err(|e| Failure::Input(format!("{what}: {e}")))
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_json(&text, &path.display().to_string())
}

fn summary(count: usize) -> Value {
    json!({"kind": "summary", "count": count})
}

fn matrix_record(a: &NonNegIntMatrix) -> Value {
    let l = perron_root(a).expect("enumerated matrices are irreducible");
    json!({
        "kind": "matrix",
        "matrix": a.to_json(),
        "lambda": lambda_json(&l),
        "lambda_approx": format!("{:.12}", l.to_f64()),
        "primitive": a.is_primitive(),
    })
}

pub fn run(cmd: &Command, common: &Common) -> Result<(), Failure> {
    let report = match cmd {
        Command::EnumMatrices {
            dim,
            threshold: t,
            positive,
            oracle,
        } => enum_matrices(positive_size(*dim, "-p")?, &threshold(t)?, *positive, *oracle)?,
        Command::EnumCusps { m, threshold: t, oracle } => enum_cusps(positive_size(*m, "-m")?, &threshold(t)?, *oracle)?,
        Command::EnumGluings { matrix, oracle } => enum_gluings(matrix, *oracle)?,
        Command::EnumPa {
            p,
            threshold: t,
            positive,
            graph,
            oracle,
        } => enum_pa(positive_size(*p, "-p")?, &threshold(t)?, *positive, graph.as_deref(), *oracle)?,
        Command::SurfaceInfo { file } => surface_info(file)?,
        Command::Markov {
            origami,
            matrix,
            no_refine,
        } => markov(origami, matrix, *no_refine)?,
        Command::Hyp { tool } => hyp(tool)?,
        Command::Render { file } => render(file)?,
    };
    emit(report, common)
}

fn emit(report: Report, common: &Common) -> Result<(), Failure> {
    if common.format == Format::Svg && report.svg.is_none() {
        return Err(Failure::Input("this command has no SVG output".into()));
    }
    let mut w = output::open(common.out.as_deref()).map_err(input)?;
    match common.format {
        Format::Jsonl => output::write_jsonl(&mut *w, &report.records),
        Format::Csv => output::write_csv(&mut *w, &report.records),
        Format::Svg => w.write_all(report.svg.unwrap_or_default().as_bytes()),
    }
    .and_then(|_| w.flush())
    .map_err(input)
}

fn enum_matrices(d: usize, t: &Rational, positive: bool, oracle: bool) -> Result<Report, Failure> {
    let found = if positive {
        enumerate_pa_matrices(d, t, true)
    } else {
        enumerate_irreducible(d, t)
    };
    if oracle && brute_irreducible(d, t, positive) != found {
        return Err(mismatch("matrix census"));
    }
    let mut r = Report::default();
    r.records = found.par_iter().map(matrix_record).collect();
    r.push(summary(found.len()));
    Ok(r)
}

fn check_gluings(a: &NonNegIntMatrix, patterns: &[GluingPattern]) -> Result<(), Failure> {
    let brute: BTreeSet<_> = brute_gluing_classes(a).iter().map(|g| canonical_pair(g, a)).collect();
    if brute.into_iter().collect::<Vec<_>>() != patterns {
        return Err(mismatch("gluing census"));
    }
    Ok(())
}

fn cusp_records(pair: &CuspMatrixPair, oracle: bool) -> Result<Vec<Value>, Failure> {
    let patterns = enumerate_gluings(&pair.a).map_err(domain)?;
    if oracle {
        check_gluings(&pair.a, &patterns)?;
    }
    patterns
        .into_iter()
        .map(|pattern| {
            let c = CuspDatum {
                a: pair.a.clone(),
                d: pair.d.clone(),
                pattern,
            };
            let b = build_surface(&c).map_err(domain)?;
            let st = b.surface.stratum();
            Ok(json!({
                "kind": "cusp",
                "A": c.a.to_json(),
                "D": c.d,
                "pattern": c.pattern.to_json(),
                "lambda": lambda_json(&b.lambda),
                "lambda_approx": format!("{:.12}", b.lambda.to_f64()),
                "surface": b.surface.to_json(),
                "prongs": st.prongs,
                "genus": st.genus,
            }))
        })
        .collect()
}

fn enum_cusps(m: usize, t: &Rational, oracle: bool) -> Result<Report, Failure> {
    let pairs = enumerate_cusp_data(m, t);
    if oracle && brute_cusp_data(m, t) != pairs {
        return Err(mismatch("cusp census"));
    }
    let groups: Vec<Vec<Value>> = pairs.par_iter().map(|p| cusp_records(p, oracle)).collect::<Result<_, _>>()?;
    let mut r = Report::default();
    r.records = groups.into_iter().flatten().collect();
    let n = r.records.len();
    r.push(json!({"kind": "summary", "pairs": pairs.len(), "count": n, "bound": n}));
    Ok(r)
}

fn enum_gluings(matrix: &str, oracle: bool) -> Result<Report, Failure> {
    let a = NonNegIntMatrix::from_json(&parse_json(matrix, "--matrix")?).map_err(input)?;
    let patterns = enumerate_gluings(&a).map_err(domain)?;
    if oracle {
        check_gluings(&a, &patterns)?;
    }
    let mut r = Report::default();
    for g in &patterns {
        r.push(json!({"kind": "pattern", "ell": g.ell(), "pattern": g.to_json()}));
    }
    r.push(summary(patterns.len()));
    Ok(r)
}

fn enum_pa(p: usize, t: &Rational, positive: bool, graph: Option<&Path>, oracle: bool) -> Result<Report, Failure> {
    let found = enumerate_pa_matrices(p, t, positive);
    if oracle && brute_irreducible(p, t, positive) != found {
        return Err(mismatch("matrix census"));
    }
    let graph = match graph {
        Some(path) => Some(SegmentGluingGraph::from_json(&read_json(path)?).map_err(input)?),
        None if p == 1 => Some(SegmentGluingGraph::single_rectangle()),
        None => None,
    };
    let mut r = Report::default();
    r.records = found
        .par_iter()
        .map(|a| {
            let mut rec = matrix_record(a);
            if let Some(g) = &graph {
                match reconstruct_from_markov(a, g) {
                    Ok(s) => rec["reconstruction"] = s.to_json(),
                    Err(e) => rec["reconstruction_error"] = json!({"error": kind(&e), "message": e.to_string()}),
                }
            }
            rec
        })
        .collect();
    r.push(summary(found.len()));
    Ok(r)
}

fn cylinders_json(s: &RectSurface, dir: Direction) -> Value {
    let cyls: Vec<Cylinder> = s.cylinder_decomposition(dir);
    let list: Vec<Value> = cyls
        .iter()
        .map(|c| {
            json!({
                "rects": c.rects.iter().map(|k| k + 1).collect::<Vec<_>>(),
                "circumference": coeffs_to_json(&c.w),
                "height": coeffs_to_json(&c.h),
                "inverse_modulus": coeffs_to_json(&c.inverse_modulus()),
            })
        })
        .collect();
    let parabolic = match parabolic_data(&cyls) {
        Ok(p) => json!({
            "moduli": p.moduli.iter().map(coeffs_to_json).collect::<Vec<_>>(),
            "mu": coeffs_to_json(&p.mu),
            "twists": p.twists,
        }),
        Err(e) => json!({"error": kind(&e), "message": e.to_string()}),
    };
    json!({"cylinders": list, "parabolic": parabolic})
}

fn load_surface(file: &Path) -> Result<RectSurface, Failure> {
    RectSurface::from_json(&read_json(file)?).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))
}

fn surface_info(file: &Path) -> Result<Report, Failure> {
    let s = load_surface(file)?;
    let st = s.stratum();
    let mut rec = json!({
        "kind": "surface",
        "ell": s.ell(),
        "field": field_to_json(s.field()),
        "prongs": st.prongs,
        "cone_angles": st.prongs.iter().map(|k| format!("{k}π")).collect::<Vec<_>>(),
        "genus": st.genus,
        "horizontal": cylinders_json(&s, Direction::Horizontal),
        "vertical": cylinders_json(&s, Direction::Vertical),
    });
    match intersection_data(&s) {
        Ok(c) => rec["intersection_data"] = c.to_json(),
        Err(e) => rec["intersection_data"] = json!({"error": kind(&e), "message": e.to_string()}),
    }
    let mut r = Report::default();
    r.push(rec);
    Ok(r)
}

fn markov(origami: &Path, matrix: &str, no_refine: bool) -> Result<Report, Failure> {
    let o = Origami::from_json(&read_json(origami)?).map_err(|e| Failure::Input(format!("{}: {e}", origami.display())))?;
    let h = Sl2z::from_json(&parse_json(matrix, "--matrix")?).map_err(input)?;
    let aut = affine_automorphism(&o, &h).map_err(|e| match e {
        OrigamiError::NotInVeechGroup(_) => domain(e),
        _ => input(e),
    })?;
    let s = RectSurface::from_origami(o.sigma_h(), o.sigma_v()).map_err(input)?;
    let e = to_eigenbasis(&s, &aut).map_err(domain)?;
    let p = build_markov(&e).map_err(domain)?;
    let verified = verify_markov(&p, &e);
    let a = intersection_matrix(&p, &e).map_err(domain)?;
    let (lo, hi) = markov_bounds(&e.prongs());
    let count = Rational::from_integer((p.len() as i64).into());
    let mut rec = json!({
        "kind": "markov",
        "n": o.n(),
        "map": h.to_json(),
        "power": e.power(),
        "lambda": lambda_json(e.field().generator()),
        "lambda_minpoly": poly_to_json(e.lambda_minpoly()),
        "prongs": e.prongs(),
        "p": p.len(),
        "bounds": [rational_to_json(&lo), rational_to_json(&hi)],
        "within_bounds": lo <= count && count <= hi,
        "verified": verified,
        "A": a.to_json(),
        "partition": p.to_json(),
    });
    if !no_refine {
        for (axis, key) in [(Axis::Xi, "B"), (Axis::Eta, "C")] {
            let (_, m) = refine_partition(&p, &e, axis).map_err(domain)?;
            rec[key] = m.to_json();
        }
    }
    let mut r = Report::default();
    r.push(rec);
    r.svg = Some(render_partition_svg(&p));
    Ok(r)
}

fn hyp(tool: &HypTool) -> Result<Report, Failure> {
    let rec = match tool {
        HypTool::CuspArea { bound } => {
            let elems = sl2z_double_cosets(*bound);
            let cert = Certificate::LowerLeftBound(rat(i64::from(*bound)));
            let c = cusp_area(&elems, None, &cert).map_err(domain)?;
            json!({
                "kind": "cusp_area",
                "elements": elems.len(),
                "t0": rational_to_json(&c.t0_upper),
                "area": rational_to_json(&c.area),
                "certified": c.certified,
            })
        }
        HypTool::Commutator { t, param, cos, sin } => {
            let t = parse_rational(t).map_err(input)?;
            let (c, s) = match (param, cos, sin) {
                (Some(u), _, _) => pythagorean(&parse_rational(u).map_err(input)?),
                (None, Some(c), Some(s)) => (parse_rational(c).map_err(input)?, parse_rational(s).map_err(input)?),
                _ => return Err(Failure::Input("give --param or both --cos and --sin".into())),
            };
            let cert = commutator_certificate(&t, &c, &s).map_err(domain)?;
            json!({
                "kind": "commutator",
                "t": rational_to_json(&t),
                "cos": rational_to_json(&c),
                "sin": rational_to_json(&s),
                "trace": rational_to_json(&cert.trace),
                "cosh_d": rational_to_json(&cert.cosh_d),
                "hyperbolic": cert.hyperbolic,
            })
        }
        HypTool::Cone { fixed, points } => {
            let f = UHPPoint::from_json(&parse_json(fixed, "--fixed")?).map_err(input)?;
            let pts = parse_json(points, "--points")?;
            let pts: Vec<UHPPoint> = pts
                .as_array()
                .ok_or_else(|| Failure::Input("--points: expected an array".into()))?
                .iter()
                .map(|v| UHPPoint::from_json(v).map_err(input))
                .collect::<Result<_, _>>()?;
            let r = cone_radius(&f, &pts).map_err(domain)?;
            json!({"kind": "cone", "cosh_radius": rational_to_json(&r)})
        }
    };
    let mut r = Report::default();
    r.push(rec);
    Ok(r)
}

fn render(file: &Path) -> Result<Report, Failure> {
    let s = load_surface(file)?;
    let svg = render_svg(&s, &SvgOptions::default());
    let mut r = Report::default();
    r.push(json!({"kind": "render", "svg": svg}));
    r.svg = Some(svg);
    Ok(r)
}
