//! Report builders for each subcommand.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::Value;

use ncfourier_core::dsl::{parse_algebra_spec, parse_group, parse_poly};
use ncfourier_core::error::{Error, Result};
use ncfourier_core::etale::family::DoublePoint;
use ncfourier_core::etale::{check_formally_etale, lift_standard, EtaleDiagram, StandardEtale};
use ncfourier_core::fmkernel::{
    double_transform, inverse_kernel, inverse_transform, poincare, shift_twist_exchange, transform_algebra,
    transform_kernel, transform_module, FiniteAbGroup, GradedModule, Kernel, QuasiSpecialAlgebra, TransKernel,
};
use ncfourier_core::microloc::{
    compare_lifts, filtration_ideals, gr_n, localize_deg0, projection_check, quotient_by_t, twisting_check,
    FilteredAlgebra, MicroGraded,
};
use ncfourier_core::ncalg::{abelianization, NcFiltration, NcPoly, Presentation, TruncatedAlgebra};
use ncfourier_core::report::Report;

use crate::diagram::{parse_json, AlphaFile, DiagramFile};
use crate::{FmArgs, GrnArgs};

pub fn alg(pres: &Presentation, max_d: Option<usize>) -> Result<Report> {
    let alg = TruncatedAlgebra::from_presentation(pres)?;
    let max_d = max_d.unwrap_or(pres.bound);
    let filt = NcFiltration::new(&alg, max_d);
    let mut by_degree = vec![0usize; pres.bound + 1];
    for &l in alg.lengths() {
        by_degree[l] += 1;
    }
    let mut r = Report::new("alg");
    r.set("presentation", pres.to_dsl());
    r.set("basis", alg.labels());
    r.set("dim", alg.dim());
    r.set("dims_by_degree", by_degree);
    r.set("honest", alg.is_honest());
    r.set("filtration_dims", filt.dims());
    r.set("abelianization_dim", abelianization(&alg).map_or(0, |a| a.dim()));
    r.check("unit", alg.check_unit());
    r.check_with("associative", alg.associativity_failure().is_none(), alg.associativity_failure());
    r.check("filtration_decreasing", filt.is_decreasing());
    let mf = filt.multiplicativity_failure(&alg);
    r.check_with("filtration_multiplicative", mf.is_none(), mf);
    Ok(r)
}

fn element_json(alg: &TruncatedAlgebra, names: &[String], a: &[ncfourier_core::Q]) -> Value {
    match alg.to_poly(&a.to_vec()) {
        Some(p) => Value::String(p.fmt_with(names)),
        None => Value::String(alg.fmt_element(&a.to_vec())),
    }
}

fn lift_report(diag: &EtaleDiagram) -> Result<Report> {
    let mut r = Report::new("etale lift");
    let total = diag.gamma.total();
    r.set("R", diag.r().to_dsl());
    r.set("S", diag.s().to_dsl());
    r.set("kernel_dim", diag.gamma.kernel_dim());
    r.check("commutes", diag.commutes());
    let space = diag.lift_space();
    r.set("lift_dimension", space.dimension);
    r.check("lift_exists", space.exists());
    r.check_with("lift_unique", space.unique(), space.dimension);
    let a_names: Vec<String> = total.generators().iter().map(|(n, _)| n.clone()).collect();
    if let Some(images) = &space.particular {
        let s_names = diag.s().names();
        let lift: serde_json::Map<String, Value> = s_names
            .iter()
            .zip(images)
            .map(|(n, img)| (n.clone(), element_json(total, &a_names, img)))
            .collect();
        r.set("lift", lift);
    }
    if let Some(std) = StandardEtale::recognize(diag.r(), diag.s()) {
        let x = diag.gamma.section(&diag.beta.images[std.z()]);
        let y = diag.gamma.section(&diag.beta.images[std.u()]);
        let sl = lift_standard(diag, &std, &x, &y)?;
        r.set("standard_etale", true);
        r.check("standard.relations_hold", sl.relations_hold);
        r.check("standard.corrections_in_kernel", sl.corrections_in_kernel);
        r.check("standard.matches_solver", sl.matches_solver);
    } else {
        r.set("standard_etale", false);
    }
    Ok(r)
}

pub fn etale_lift(text: &str) -> Result<Report> {
    let file: DiagramFile = parse_json(text, "diagram")?;
    lift_report(&file.to_diagram(None)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DoublePointSpec {
    count: usize,
    #[serde(default = "one")]
    seed: u64,
    #[serde(default = "two")]
    max_rank: usize,
}

fn one() -> u64 {
    1
}

fn two() -> usize {
    2
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FamilyFile {
    Diagrams(Vec<DiagramFile>),
    Generated { double_point: DoublePointSpec },
}

pub fn etale_check(alpha_text: &str, family_text: &str) -> Result<Report> {
    let alpha = parse_json::<AlphaFile>(alpha_text, "alpha")?.to_map()?;
    let mut r = Report::new("etale check");
    let family: Vec<EtaleDiagram> = match parse_json::<FamilyFile>(family_text, "family")? {
        FamilyFile::Diagrams(ds) => ds.iter().map(|d| d.to_diagram(Some(&alpha))).collect::<Result<_>>()?,
        FamilyFile::Generated { double_point: spec } => {
            r.set("generator", serde_json::json!({"double_point": {"count": spec.count, "seed": spec.seed, "max_rank": spec.max_rank}}));
            DoublePoint::over(&alpha.source)?.family(spec.count, spec.seed, spec.max_rank)?
        }
    };
    let verdict = check_formally_etale(&alpha, &family);
    r.set("semantics", "verified over the supplied family only");
    r.set("family_size", verdict.family_size);
    r.set("cases", &verdict.cases);
    r.check("family_nonempty", verdict.family_size > 0);
    let bad: Vec<usize> = verdict.cases.iter().filter(|c| !(c.alpha_matches && c.commutes && c.exists && c.unique)).map(|c| c.index).collect();
    r.check_with("verified_over_family", verdict.verified_over_family, bad);
    Ok(r)
}

fn symbol_arg(s: &str) -> Result<&str> {
    s.strip_prefix("f=")
        .ok_or_else(|| Error::InvalidInput(format!("expected `f=<poly>`, got `{s}`")))
}

fn lift_of(g: &MicroGraded, f: &NcPoly, p: &NcPoly) -> Result<Vec<ncfourier_core::Q>> {
    let diff = p - f;
    g.class_of_poly(0, &diff)
        .map_err(|_| Error::NotFiltered("the lift does not have the same symbol as f".into()))?;
    g.class_of_poly(1, p)
}

pub fn grn(pres: &Presentation, args: &GrnArgs) -> Result<Report> {
    let fa = FilteredAlgebra::new(pres)?;
    let n = args.n;
    let g = gr_n(&fa, n)?;
    let mut r = Report::new("microloc grn");
    r.set("presentation", pres.to_dsl());
    r.set("n", n);
    r.set("filtration_dims", fa.dims());
    r.set("grade_dims", g.grade_dims());
    r.set("dim", g.dim());
    r.check("t_central", g.t_is_central());
    r.check("t_nilpotent", g.t_nilpotency_holds());
    if n >= 1 {
        let q = quotient_by_t(&g)?;
        r.set("quotient_by_t_dims", &q.quotient_dims);
        r.set("gr_dims", &q.gr_dims);
        r.check("quotient_by_t_is_gr", q.is_isomorphism());
        let lower = gr_n(&fa, n - 1)?;
        let p = projection_check(&g, &lower)?;
        r.check_detail("projection_to_lower", p.holds(), (&p.kernel_dims, &p.expected_kernel_dims));
        let (_, ideals) = filtration_ideals(&g)?;
        r.set("ideal_dims", &ideals.dims);
        r.check("t_adic_ideals", ideals.holds());
    } else {
        r.check("commutative", g.algebra().is_commutative());
    }
    if let Some(loc) = &args.localize {
        let names = pres.names();
        let f = parse_poly(symbol_arg(loc)?, &names)?;
        let order = args.order.unwrap_or(pres.bound);
        let lift = g.class_of_poly(1, &f)?;
        let l = localize_deg0(&g, &lift, order)?;
        r.set("localize", serde_json::json!({"f": f.fmt_with(&names), "order": order}));
        r.set("localized_dims_by_order", l.dims_by_order());
        r.set("localized_dim", l.algebra().dim());
        r.check_with("localized_associative", l.algebra().associativity_failure().is_none(), l.algebra().associativity_failure());
        let tw = twisting_check(&l, args.max_shift)?;
        r.set("twisting", serde_json::json!({
            "chart_dims": tw.chart_dims, "t_map_ranks": tw.t_map_ranks, "tower_dims": tw.tower_dims,
            "piece_dims": tw.piece_dims,
        }));
        r.check("twisting_associative", tw.associative);
        r.check("twisting_t_compatible", tw.t_compatible);
        r.check("twisting_pairing_is_unit", tw.pairing_is_unit);
        if let Some(other) = &args.lift {
            let p = parse_poly(other, &names)?;
            let lift2 = lift_of(&g, &f, &p)?;
            let l2 = localize_deg0(&g, &lift2, order)?;
            let c = compare_lifts(&l2, &l)?;
            r.set("lift", p.fmt_with(&names));
            r.check_detail(
                "lift_independent",
                c.is_isomorphism(),
                serde_json::json!({"source_dim": c.source_dim, "target_dim": c.target_dim, "rank": c.rank, "checked_pairs": c.checked_pairs}),
            );
        }
    }
    Ok(r)
}

const FM_CHECKS: [&str; 7] = ["poincare", "exchange", "algebra", "transform", "double", "modules", "kernels"];

fn kernel_checks(r: &mut Report, x: &FiniteAbGroup, samples: usize, seed: u64) -> Result<()> {
    let dual = x.dual();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mult = Vec::new();
    let mut inv = Vec::new();
    for i in 0..samples {
        let k = Kernel::random(&dual, &dual, &mut rng)?;
        let l = Kernel::random(&dual, &dual, &mut rng)?;
        let (pk, pl) = (transform_kernel(&k)?, transform_kernel(&l)?);
        if transform_kernel(&k.circle(&l)?)? != pk.circle(&pl)? {
            mult.push(i);
        }
        if inverse_transform(&pk)? != k {
            inv.push(i);
        }
    }
    r.check_with("kernels.random_multiplicative", mult.is_empty(), &mult);
    r.check_with("kernels.random_inverse", inv.is_empty(), &inv);
    let n = dual.order();
    let trans: Vec<Kernel> =
        (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).map(|(s, t)| TransKernel::new(&dual, s, t).to_kernel()).collect();
    let images: Vec<Kernel> = trans.iter().map(transform_kernel).collect::<Result<_>>()?;
    // a∘b is verified to equal c·T for one basis kernel T, so Φ(a∘b) = c·Φ(T)
    let mut pair_fail = None;
    'outer: for (i, a) in trans.iter().enumerate() {
        for (j, b) in trans.iter().enumerate() {
            let ab = a.circle(b)?;
            let (s, t) = (dual.add(i / n, j / n), dual.add(i % n, j % n));
            let c = ab.get(0, s).clone();
            let candidate = TransKernel { group: dual.clone(), shift: s, twist: t, scalar: c.clone() };
            let lhs = if candidate.to_kernel() == ab {
                images[s * n + t].scale(&c)
            } else {
                transform_kernel(&ab)?
            };
            if lhs != images[i].circle(&images[j])? {
                pair_fail = Some((i, j));
                break 'outer;
            }
        }
    }
    r.check_with("kernels.shift_twist_multiplicative", pair_fail.is_none(), pair_fail);
    let inv_fail = trans.iter().zip(&images).position(|(k, pk)| inverse_transform(pk).map_or(true, |b| &b != k));
    r.check_with("kernels.shift_twist_inverse", inv_fail.is_none(), inv_fail);
    Ok(())
}

pub fn fm(args: &FmArgs) -> Result<Report> {
    let x = parse_group(&args.group)?;
    let wanted: Vec<&str> = args.check.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    for w in &wanted {
        if *w != "all" && !FM_CHECKS.contains(w) {
            return Err(Error::InvalidInput(format!("unknown check `{w}`; expected all or one of {}", FM_CHECKS.join(", "))));
        }
    }
    let on = |c: &str| wanted.contains(&"all") || wanted.contains(&c);
    let mut r = Report::new("fm");
    r.set("group", x.to_string());
    r.set("order", x.order());
    r.set("exponent", x.exponent());
    r.set("seed", args.seed);
    r.set("model", "finite abelian group; P(x,χ)=χ(x), Q=χ(x)^{-1}/|X|");
    let dual = x.dual();
    let gens = parse_algebra_spec(&args.algebra, &dual)?;
    let alg = QuasiSpecialAlgebra::generate(&dual, &gens, args.max_rank)?;
    r.set("algebra_rank", alg.rank());
    r.set("algebra_commutative", alg.is_commutative());
    if on("poincare") {
        let (p, q, d) = (poincare(&x), inverse_kernel(&x), ncfourier_core::fmkernel::Kernel::diagonal(&x));
        let pq = p.circle(&q)?;
        let qp = q.circle(&p)?;
        r.check_with("poincare.p_then_q", pq == d, pq.first_difference(&d));
        r.check_with("poincare.q_then_p", qp == d, qp.first_difference(&d));
    }
    if on("exchange") {
        let cases = shift_twist_exchange(&x)?;
        let bad: Vec<_> = cases.iter().filter(|c| !(c.exchanged && c.matches_closed_form)).cloned().collect();
        r.set("exchange_cases", cases.len());
        r.check_with("exchange.shift_twist", bad.is_empty(), bad.first());
    }
    if on("algebra") {
        r.check_with("algebra.cocycle", alg.cocycle_failure().is_none(), alg.cocycle_failure());
        r.check_with("algebra.associative", alg.associativity_failure().is_none(), alg.associativity_failure());
    }
    if on("transform") {
        let t = transform_algebra(&alg)?;
        r.check("transform.basiswise", t.basiswise);
        r.check_with("transform.multiplicative", t.multiplicativity_failure.is_none(), t.multiplicativity_failure);
        r.check_with("transform.constants", t.transport_failure.is_none(), t.transport_failure);
        r.set("transformed_commutative", t.algebra.is_commutative());
    }
    if on("double") {
        let d = double_transform(&alg)?;
        r.set("double_transform_scalars", &d.scalars);
        r.check("double.inversion", d.inversion);
        r.check("double.constants", d.constants_match);
    }
    if on("modules") {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let mut functorial = Vec::new();
        let mut round = Vec::new();
        for i in 0..args.samples {
            let m = GradedModule::random(&dual, 2, &mut rng);
            let t = transform_module(&alg, &m)?;
            if t.functoriality_failure.is_some() {
                functorial.push(i);
            }
            if !t.round_trip {
                round.push(i);
            }
        }
        r.check_with("modules.functorial", functorial.is_empty(), &functorial);
        r.check_with("modules.round_trip", round.is_empty(), &round);
    }
    if on("kernels") {
        kernel_checks(&mut r, &x, args.samples, args.seed)?;
    }
    Ok(r)
}
