use std::path::Path;

use serde_json::{json, Value};

use polyforge::arrangement::{complement_betti, complement_euler_by_cells, gm_betti, Arrangement};
use polyforge::cct::{
    abstract_cct, check_convex_position, check_symmetry, clifford_lambda, ct_symmetric, ideal_report, kappa_chain,
    normal_matches, seed_facet_normal, FacetCertificate, GeoCCT, LAYER_SIZE,
};
use polyforge::complexcore::{CubicalComplex, SimplicialComplex};
use polyforge::hirschpath::{
    combinatorial_segment, dual_diameter, is_non_revisiting, star_lemma_holds, validate_path, SegmentTarget,
};
use polyforge::morse::{
    collapse_search, critical_counts, expected_ledger_size, out_j_collapse, validate_matching, CollapseTarget,
    HasseDiagram, MorseMatching, SearchConfig,
};
use polyforge::projective::{
    build_k_configuration, compile_polynomial, eval_scalar, frame_replay, lawrence_counts, lawrence_extension,
    non_vertices, pcctp_counts, IntPoly, PPConfig, K_FREE_POINTS,
};
use polyforge::{FieldElem, MatF};

use crate::bundle::{fmt_exact, fmt_q2, sig6, CertificateBundle};
use crate::{ArrCmd, CctCmd, CliError, Command, Context, HirschCmd, MorseCmd, Output, ProjCmd};

pub fn dispatch(cmd: &Command, ctx: &Context) -> Result<Output, CliError> {
    match cmd {
        Command::Hirsch(c) => hirsch(c),
        Command::Morse(c) => morse(c, ctx),
        Command::Arr(c) => arr(c),
        Command::Cct(c) => cct(c),
        Command::Proj(c) => proj(c),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input { path: path.display().to_string(), reason: e.to_string() })
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Input { path: path.display().to_string(), reason: e.to_string() })
}

fn parse_as<T: serde::de::DeserializeOwned>(v: Value, path: &Path) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::Input { path: path.display().to_string(), reason: e.to_string() })
}

fn bad_input(path: &Path, reason: impl ToString) -> CliError {
    CliError::Input { path: path.display().to_string(), reason: reason.to_string() }
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn load_simplicial(path: &Path) -> Result<SimplicialComplex, CliError> {
    let raw: SimplicialComplex = parse_as(read_json(path)?, path)?;
    SimplicialComplex::new(raw.num_vertices, raw.facets).map_err(|e| bad_input(path, e))
}

enum AnyComplex {
    Simplicial(SimplicialComplex),
    Cubical(CubicalComplex),
}

fn load_any(path: &Path) -> Result<AnyComplex, CliError> {
    let v = read_json(path)?;
    if v.get("cubes").is_some() {
        let raw: CubicalComplex = parse_as(v, path)?;
        Ok(AnyComplex::Cubical(CubicalComplex::new(raw.num_vertices, raw.cubes).map_err(|e| bad_input(path, e))?))
    } else {
        let raw: SimplicialComplex = parse_as(v, path)?;
        Ok(AnyComplex::Simplicial(
            SimplicialComplex::new(raw.num_vertices, raw.facets).map_err(|e| bad_input(path, e))?,
        ))
    }
}

fn hasse(c: &AnyComplex) -> HasseDiagram {
    match c {
        AnyComplex::Simplicial(s) => HasseDiagram::of_simplicial(s),
        AnyComplex::Cubical(q) => HasseDiagram::of_cubical(q),
    }
}

/// A facet given by index or by a comma-separated vertex list.
fn facet_ref(c: &SimplicialComplex, s: &str) -> Result<usize, CliError> {
    if s.contains(',') {
        let mut vs = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CliError::Usage(format!("bad facet {s:?}")))?;
        vs.sort_unstable();
        c.facets.iter().position(|f| *f == vs).ok_or_else(|| CliError::Usage(format!("{s:?} is not a facet")))
    } else {
        let i: usize = s.parse().map_err(|_| CliError::Usage(format!("bad facet {s:?}")))?;
        if i < c.facets.len() {
            Ok(i)
        } else {
            Err(CliError::Usage(format!("facet index {i} out of range")))
        }
    }
}

fn hirsch(cmd: &HirschCmd) -> Result<Output, CliError> {
    match cmd {
        HirschCmd::Segment { complex, from, to } => {
            let c = load_simplicial(complex)?;
            let (a, b) = (facet_ref(&c, from)?, facet_ref(&c, to)?);
            let path = combinatorial_segment(&c, a, &SegmentTarget::Facet(b)).map_err(failed)?;
            let mut bundle = CertificateBundle::new("hirsch-segment", json!({ "from": a, "to": b }));
            bundle.check("valid_path", validate_path(&c, &path).is_ok(), json!(path.len()));
            bundle.check(
                "endpoints",
                path.facets.first() == Some(&a) && path.facets.last() == Some(&b),
                json!([path.facets.first(), path.facets.last()]),
            );
            bundle.check("non_revisiting", is_non_revisiting(&c, &path).unwrap_or(false), json!(path.facets));
            bundle.check("star_lemma", star_lemma_holds(&c, &path), json!(path.pearls));
            bundle.data = json!({ "path": path });
            Ok(Output::Bundle(bundle))
        }
        HirschCmd::Diameter { complex } => {
            let c = load_simplicial(complex)?;
            let diam = dual_diameter(&c).map_err(failed)?;
            let f0 = c.used_vertices().len();
            let d = c.dim().max(0) as usize;
            let bound = f0 as i64 - d as i64 - 1;
            let mut bundle = CertificateBundle::new("hirsch-diameter", json!({ "facets": c.facets.len() }));
            bundle.check(
                "hirsch_bound",
                (diam as i64) <= bound,
                json!({ "diameter": diam, "f0": f0, "dim": d, "bound": bound }),
            );
            bundle.data = json!({ "diameter": diam });
            Ok(Output::Bundle(bundle))
        }
    }
}

fn morse(cmd: &MorseCmd, ctx: &Context) -> Result<Output, CliError> {
    let cfg = SearchConfig { budget: ctx.budget, seed: ctx.seed, ..SearchConfig::default() };
    match cmd {
        MorseCmd::Collapse { complex, target, out_j } => {
            let c = load_any(complex)?;
            let h = hasse(&c);
            let sub = target.as_deref().map(load_simplicial).transpose()?;
            let params = json!({ "budget": ctx.budget, "seed": ctx.seed, "out_j": out_j });
            let mut bundle = CertificateBundle::new("morse-collapse", params);
            match (out_j, sub) {
                (Some(j), Some(d)) => {
                    let (m, ledger) = out_j_collapse(&h, &d, *j, &cfg).map_err(failed)?;
                    let expected = expected_ledger_size(&d, *j);
                    bundle.check("acyclic", validate_matching(&h, &m).unwrap_or(false), json!(m.pairs.len()));
                    let counts = critical_counts(&h, &m).map_err(failed)?;
                    bundle.check("single_critical_vertex", counts.iter().sum::<usize>() == 1, json!(counts));
                    bundle.check(
                        "ledger_size",
                        ledger.outward.len() as i64 == expected,
                        json!({ "outward": ledger.outward.len(), "expected": expected }),
                    );
                    bundle.data = json!({ "matching": m, "ledger": ledger });
                }
                (Some(_), None) => return Err(CliError::Usage("--out-j needs --target".into())),
                (None, sub) => {
                    let t = match sub {
                        Some(s) => CollapseTarget::Subcomplex(s),
                        None => CollapseTarget::Point,
                    };
                    let res = collapse_search(&h, &t, &cfg).map_err(failed)?;
                    bundle.check(
                        "acyclic",
                        validate_matching(&h, &res.matching).unwrap_or(false),
                        json!(res.matching.pairs.len()),
                    );
                    let counts = critical_counts(&h, &res.matching).map_err(failed)?;
                    let want: usize = match &t {
                        CollapseTarget::Subcomplex(s) => s.all_faces().len(),
                        _ => 1,
                    };
                    bundle.check("critical_is_target", counts.iter().sum::<usize>() == want, json!(counts));
                    bundle.data = json!({ "matching": res.matching, "outcome": res.outcome });
                }
            }
            Ok(Output::Bundle(bundle))
        }
        MorseCmd::Validate { complex, matching } => {
            let c = load_any(complex)?;
            let h = hasse(&c);
            let v = read_json(matching)?;
            let v = match v.get("data").and_then(|d| d.get("matching")) {
                Some(inner) => inner.clone(),
                None => v,
            };
            let m: MorseMatching = parse_as(v, matching)?;
            let mut bundle = CertificateBundle::new("morse-validate", json!({ "pairs": m.pairs.len() }));
            match validate_matching(&h, &m) {
                Ok(ok) => {
                    let counts = if ok { critical_counts(&h, &m).map_err(failed)? } else { Vec::new() };
                    bundle.check("acyclic", ok, json!({ "critical": counts }));
                }
                Err(e) => bundle.check("well_formed", false, json!(e.to_string())),
            }
            Ok(Output::Bundle(bundle))
        }
    }
}

fn arr(cmd: &ArrCmd) -> Result<Output, CliError> {
    let ArrCmd::Betti { file, i } = cmd;
    let a = Arrangement::from_json(&read(file)?).map_err(|e| bad_input(file, e))?;
    let betti = complement_betti(&a).map_err(failed)?;
    let mut bundle =
        CertificateBundle::new("arr-betti", json!({ "dim": a.dim, "subspaces": a.subspaces.len(), "i": i }));
    let euler: i64 = betti.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
    let by_cells = complement_euler_by_cells(&a).map_err(failed)?;
    bundle.check("euler_characteristic", euler == by_cells, json!({ "betti": euler, "cells": by_cells }));
    match i {
        Some(i) => {
            let reduced = gm_betti(&a, *i).map_err(failed)?;
            let unreduced = betti.get(*i).copied().unwrap_or(0);
            let consistent = if *i == 0 { reduced + 1 == unreduced } else { reduced == unreduced };
            bundle.check("reduced_vs_unreduced", consistent, json!({ "reduced": reduced, "unreduced": unreduced }));
            bundle.data = json!({ "i": i, "betti": unreduced, "reduced_betti": reduced });
        }
        None => bundle.data = json!({ "betti": betti }),
    }
    Ok(Output::Bundle(bundle))
}

fn torus_checks(
    bundle: &mut CertificateBundle,
    t: &GeoCCT,
    stored: Option<&[FacetCertificate]>,
) -> Vec<FacetCertificate> {
    let n = t.width();
    bundle.check(
        "combinatorics",
        abstract_cct(n) == t.abstract_cct && t.coords.len() == t.abstract_cct.num_vertices(),
        json!({ "width": n }),
    );
    let f0 = t.coords.len();
    bundle.check("f0", f0 == LAYER_SIZE * (n + 1), json!({ "f0": f0, "expected": LAYER_SIZE * (n + 1) }));
    if bundle.checks.iter().any(|c| !c.pass) {
        return Vec::new();
    }
    let flat = t.abstract_cct.complex.faces().values().filter(|c| c.dim >= 2).all(|c| {
        let rows: Vec<_> = c.corners.iter().map(|&i| t.coords[i].clone()).collect();
        MatF::from_rows(&rows).rank() == c.dim + 1
    });
    bundle.check("cubes_coplanar", flat, Value::Null);
    bundle.check("symmetric", check_symmetry(t).is_ok(), json!(check_symmetry(t).err().map(|e| e.to_string())));
    if n >= 2 {
        match ideal_report(t) {
            Ok(r) => {
                bundle.check("fixed_point_free", r.fixed_point_free, Value::Null);
                bundle.check("transversal", r.transversal, Value::Null);
                bundle.check("slope_obtuse", r.slope_obtuse, Value::Null);
                bundle.check("oriented", r.oriented, Value::Null);
            }
            Err(e) => bundle.check("ideal", false, json!(e.to_string())),
        }
    }
    if n < 3 {
        return Vec::new();
    }
    match check_convex_position(t) {
        Ok(cert) => {
            let cubes = t.abstract_cct.three_cubes().len();
            bundle.check("convex_position", cert.len() == cubes, json!({ "facets": cert.len() }));
            let seed = cert.iter().any(|c| c.facet.contains(&0) && normal_matches(&c.normal, &seed_facet_normal()));
            bundle.check("seed_facet_normal", seed, json!(seed_facet_normal().iter().map(fmt_q2).collect::<Vec<_>>()));
            if let Some(stored) = stored {
                let same = stored.len() == cert.len()
                    && stored
                        .iter()
                        .zip(&cert)
                        .all(|(a, b)| a.facet == b.facet && normal_matches(&a.normal, &b.normal));
                bundle.check("stored_certificate", same, json!({ "stored": stored.len() }));
            }
            cert
        }
        Err(e) => {
            bundle.check("convex_position", false, json!(e.to_string()));
            Vec::new()
        }
    }
}

fn cct(cmd: &CctCmd) -> Result<Output, CliError> {
    match cmd {
        CctCmd::Generate(args) => {
            let n = args.n;
            if n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            let t = ct_symmetric(n).map_err(failed)?;
            let mut bundle = CertificateBundle::new("cct-generate", json!({ "n": n }));
            let cert = torus_checks(&mut bundle, &t, None);
            let lambdas: Vec<String> =
                t.chain.iter().map(|p| clifford_lambda(p).map(sig6).unwrap_or_else(|e| e.to_string())).collect();
            bundle.data = json!({ "torus": t, "certificate": cert, "lambda": lambdas });
            Ok(Output::Bundle(bundle))
        }
        CctCmd::Verify { file } => {
            let v = read_json(file)?;
            let data = v.get("data").cloned().unwrap_or(Value::Null);
            let t: GeoCCT = parse_as(data.get("torus").cloned().unwrap_or(Value::Null), file)?;
            let stored: Vec<FacetCertificate> = parse_as(data.get("certificate").cloned().unwrap_or(json!([])), file)?;
            let mut bundle = CertificateBundle::new("cct-verify", json!({ "n": t.width() }));
            torus_checks(&mut bundle, &t, Some(&stored));
            Ok(Output::Bundle(bundle))
        }
        CctCmd::Kappa { upto } => {
            let chain = kappa_chain(*upto).map_err(failed)?;
            let mut s = String::from("vertex\tx1\tx2\tx3\tlambda\n");
            for (i, p) in chain.iter().enumerate() {
                let lam = clifford_lambda(p).map_err(failed)?;
                s += &format!("k{i}\t{}\t{}\t{}\t{}\n", fmt_q2(&p[0]), fmt_q2(&p[1]), fmt_q2(&p[2]), sig6(lam));
            }
            Ok(Output::Text(s))
        }
    }
}

fn proj(cmd: &ProjCmd) -> Result<Output, CliError> {
    match cmd {
        ProjCmd::Staudt { poly, at, emit } => {
            let psi = IntPoly::parse(poly).map_err(|e| CliError::Usage(e.to_string()))?;
            let x: FieldElem = at.parse().map_err(|e| CliError::Usage(format!("--at: {e}")))?;
            let prog = compile_polynomial(&psi).map_err(|e| CliError::Usage(e.to_string()))?;
            if let Some(path) = emit {
                std::fs::write(path, prog.to_json() + "\n")
                    .map_err(|e| CliError::Input { path: path.display().to_string(), reason: e.to_string() })?;
            }
            let mut bundle = CertificateBundle::new("proj-staudt", json!({ "poly": poly, "at": fmt_exact(&x) }));
            let expected = psi.eval(&x);
            match eval_scalar(&prog, std::slice::from_ref(&x)) {
                Ok(out) => bundle.check(
                    "output_matches_polynomial",
                    out == expected,
                    json!({ "output": fmt_exact(&out), "expected": fmt_exact(&expected) }),
                ),
                Err(e) => bundle.check("output_matches_polynomial", false, json!(e.to_string())),
            }
            bundle.data = json!({ "steps": prog.steps.len(), "is_root": expected.is_zero() });
            Ok(Output::Bundle(bundle))
        }
        ProjCmd::Lawrence { config } => {
            let cfg: PPConfig = parse_as(read_json(config)?, config)?;
            let mut bundle = CertificateBundle::new(
                "proj-lawrence",
                json!({ "ambient_dim": cfg.ambient_dim, "f0_p": cfg.polytope_vertices.len(), "f0_r": cfg.free_points.len() }),
            );
            match lawrence_extension(&cfg) {
                Ok(l) => {
                    let (dim, f0) =
                        lawrence_counts(cfg.polytope_dim(), cfg.polytope_vertices.len(), cfg.free_points.len());
                    let stray = non_vertices(&l.vertices);
                    bundle.check(
                        "all_vertices",
                        stray.is_empty(),
                        json!({ "count": l.vertices.len(), "non_vertices": stray }),
                    );
                    bundle.check("dimension", l.dim == dim, json!({ "dim": l.dim, "formula": dim }));
                    bundle.check(
                        "vertex_count",
                        l.vertices.len() == f0,
                        json!({ "f0": l.vertices.len(), "formula": f0 }),
                    );
                    let np = cfg.polytope_vertices.len();
                    let exposed = l.vertices.iter().enumerate().all(|(i, v)| {
                        let s =
                            v.iter().zip(&l.face_functional).fold(FieldElem::zero(), |acc, (a, b)| acc + a * b).sign();
                        if i < np {
                            s == 0
                        } else {
                            s > 0
                        }
                    });
                    bundle.check(
                        "face_exposed",
                        exposed,
                        json!(l.face_functional.iter().map(fmt_exact).collect::<Vec<_>>()),
                    );
                    bundle.data = json!({ "vertices": l.vertices.iter().map(|v| v.iter().map(fmt_exact).collect::<Vec<_>>()).collect::<Vec<_>>() });
                }
                Err(e) => bundle.check("all_vertices", false, json!(e.to_string())),
            }
            Ok(Output::Bundle(bundle))
        }
        ProjCmd::KConfig { verify } => {
            let k = build_k_configuration().map_err(failed)?;
            let mut bundle = CertificateBundle::new("proj-k-config", json!({ "verify": verify }));
            bundle.check("f0", k.f0() == 64, json!(k.f0()));
            bundle.check("free_points", k.free_points().len() == K_FREE_POINTS, json!(k.free_points().len()));
            bundle.check(
                "step_six_coplanar",
                k.certificate.coplanar(),
                json!({ "lambda": fmt_exact(&k.lambda), "minors": k.certificate.minors.iter().map(fmt_exact).collect::<Vec<_>>() }),
            );
            let corr = k.torus_correspondence();
            bundle.check("seed_torus", corr.as_ref().is_some_and(|c| c.len() == 24), json!(corr));
            let at_infinity = (1..=4).all(|i| k.config.get(&format!("inf{i}")).is_some_and(|p| p[4].is_zero()));
            bundle.check("infinity_span", at_infinity && k.infinity_rank() == 4, json!(k.infinity_rank()));
            if *verify {
                let ok = frame_replay(&k.config, &k.derivation).map_err(failed)?;
                bundle.check(
                    "frame_replay",
                    ok,
                    json!({ "base": k.derivation.base, "steps": k.derivation.program.steps.len() }),
                );
            }
            let points: Vec<Value> = k
                .config
                .names
                .iter()
                .zip(&k.config.points)
                .map(|(n, p)| json!({ "name": n, "point": p.iter().map(fmt_exact).collect::<Vec<_>>() }))
                .collect();
            bundle.data = json!({ "points": points });
            Ok(Output::Bundle(bundle))
        }
        ProjCmd::Pcctp { n, counts } => {
            if *n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            let (dim, f0) = pcctp_counts(*n);
            let mut bundle = CertificateBundle::new("proj-pcctp", json!({ "n": n, "counts": counts }));
            bundle.check("dimension", dim == 69, json!(dim));
            bundle.check("f0", f0 == 12 * (n + 1) + 129, json!(f0));
            bundle.data = json!({ "dim": dim, "f0": f0 });
            Ok(Output::Bundle(bundle))
        }
    }
}
