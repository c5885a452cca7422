//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ncfourier_core::dsl::{parse_group, parse_poly, parse_presentation, print_group, print_presentation};
use ncfourier_core::etale::family::{free_rd, DoublePoint};
use ncfourier_core::etale::{check_formally_etale, lift_standard, nd_closure_check};
use ncfourier_core::fmkernel::{
    inverse_kernel, inverse_transform, poincare, shift_twist_exchange, transform_kernel, transform_module,
    FiniteAbGroup, GradedModule, Kernel, QuasiSpecialAlgebra, TransKernel,
};
use ncfourier_core::microloc::{
    compare_lifts, gr_n, localize_deg0, quotient_by_t, rank_one_criterion, FilteredAlgebra, TAdicModule,
};
use ncfourier_core::ncalg::{
    abelianization, nc_filtration, pbw_dimension_check, quotient_rd, LieAlgebroidPresentation, NcFiltration,
    Presentation, TruncatedAlgebra,
};
use ncfourier_core::oracle::filtration_by_compositions;
use ncfourier_core::rational::int;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn test_groups() -> Vec<FiniteAbGroup> {
    let mut specs: Vec<String> = (2..=12).map(|n| format!("Z{n}")).collect();
    specs.extend(["Z2xZ4", "Z3xZ3", "Z2xZ2xZ2"].map(String::from));
    specs.iter().map(|s| parse_group(s).expect("test group parses")).collect()
}

fn fourier_inversion() -> Outcome {
    let start = Instant::now();
    let groups = test_groups();
    for g in &groups {
        let (p, q, d) = (poincare(g), inverse_kernel(g), Kernel::diagonal(g));
        ensure(ok(p.circle(&q))? == d, format!("P∘Q ≠ Δ on {g}"))?;
        ensure(ok(q.circle(&p))? == d, format!("Q∘P ≠ Δ on {g}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"))?;
    Ok(format!("{} groups in {:.2?}", groups.len(), elapsed))
}

fn transform_multiplicative() -> Outcome {
    let g = parse_group("Z4xZ2").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..100 {
        let k = ok(Kernel::random(&g, &g, &mut rng))?;
        let l = ok(Kernel::random(&g, &g, &mut rng))?;
        let (pk, pl) = (ok(transform_kernel(&k))?, ok(transform_kernel(&l))?);
        ensure(ok(transform_kernel(&ok(k.circle(&l))?))? == ok(pk.circle(&pl))?, format!("random pair {i}"))?;
        ensure(ok(inverse_transform(&pk))? == k, format!("inverse on random kernel {i}"))?;
    }
    let n = g.order();
    let trans: Vec<Kernel> = (0..n * n).map(|i| TransKernel::new(&g, i / n, i % n).to_kernel()).collect();
    let images: Vec<Kernel> = trans.iter().map(|k| ok(transform_kernel(k))).collect::<Result<_, _>>()?;
    for (i, a) in trans.iter().enumerate() {
        ensure(&ok(inverse_transform(&images[i]))? == a, format!("inverse on shift/twist kernel {i}"))?;
        for (j, b) in trans.iter().enumerate() {
            let lhs = ok(transform_kernel(&ok(a.circle(b))?))?;
            ensure(lhs == ok(images[i].circle(&images[j]))?, format!("shift/twist pair ({i}, {j})"))?;
        }
    }
    Ok(format!("100 random pairs, {} shift/twist pairs", trans.len() * trans.len()))
}

fn shift_twist_exchange_all() -> Outcome {
    let mut total = 0;
    for g in test_groups() {
        let cases = ok(shift_twist_exchange(&g))?;
        ensure(cases.len() == g.order() * g.order(), format!("case count on {g}"))?;
        if let Some(c) = cases.iter().find(|c| !(c.exchanged && c.matches_closed_form && c.scalar.is_some())) {
            return Err(format!("{g}: {c:?}"));
        }
        total += cases.len();
    }
    Ok(format!("{total} kernels exchanged, scalars recorded"))
}

fn heisenberg_z4() -> QuasiSpecialAlgebra {
    let g = parse_group("Z4").unwrap();
    QuasiSpecialAlgebra::generate(&g, &[(1, 0), (0, 2)], 8).expect("rank 8")
}

fn twisted_group_law() -> Outcome {
    let a = heisenberg_z4();
    let g = a.group().clone();
    ensure(a.rank() == 8, format!("rank {}", a.rank()))?;
    ensure(!a.is_commutative(), "expected a noncommutative algebra")?;
    let kernels: Vec<Kernel> = (0..8).map(|i| a.basis_kernel(i).to_kernel()).collect();
    for (i, &(s, t)) in a.basis().iter().enumerate() {
        for (j, &(s2, t2)) in a.basis().iter().enumerate() {
            let expected = TransKernel { group: g.clone(), shift: g.add(s, s2), twist: g.add(t, t2), scalar: g.pairing(t2, s) };
            ensure(ok(kernels[i].circle(&kernels[j]))? == expected.to_kernel(), format!("scalar on pair ({i}, {j})"))?;
        }
    }
    for i in 0..8 {
        for j in 0..8 {
            for k in 0..8 {
                let l = ok(ok(kernels[i].circle(&kernels[j]))?.circle(&kernels[k]))?;
                let r = ok(kernels[i].circle(&ok(kernels[j].circle(&kernels[k]))?))?;
                ensure(l == r, format!("triple ({i}, {j}, {k})"))?;
            }
        }
    }
    ensure(a.associativity_failure().is_none() && a.cocycle_failure().is_none(), "table disagrees")?;
    Ok("64 pairs, 512 triples".into())
}

fn module_functoriality() -> Outcome {
    let algebras: Vec<(&str, &[(usize, usize)])> = vec![
        ("Z4", &[(1, 0)]),
        ("Z4", &[(0, 1)]),
        ("Z4", &[(1, 0), (0, 2)]),
        ("Z3", &[(1, 0), (0, 1)]),
        ("Z4xZ2", &[(2, 0), (0, 1)]),
        ("Z2xZ2xZ2", &[(1, 0), (0, 4)]),
    ];
    let mut count = 0;
    for (spec, gens) in algebras {
        let g = parse_group(spec).unwrap();
        let a = ok(QuasiSpecialAlgebra::generate(&g, gens, 256))?;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..20 {
            let m = GradedModule::random(&g, 2, &mut rng);
            let t = ok(transform_module(&a, &m))?;
            ensure(t.functoriality_failure.is_none(), format!("{spec} {gens:?}, module {i}"))?;
            ensure(t.round_trip, format!("{spec} {gens:?}, module {i}: round trip"))?;
            count += 1;
        }
    }
    Ok(format!("{count} modules over 6 algebras"))
}

fn filtration_oracle() -> Outcome {
    let alg = ok(TruncatedAlgebra::from_presentation(&Presentation::free(&["x", "y"], 4)))?;
    let fast = NcFiltration::new(&alg, 4);
    let slow = filtration_by_compositions(&alg, 4);
    for (d, s) in slow.iter().enumerate() {
        let f = fast.level(d);
        ensure(f.is_subspace_of(s) && s.is_subspace_of(f), format!("F^{d} differs"))?;
    }
    ensure(fast.dims() == vec![31, 16, 10, 3, 0], format!("dims {:?}", fast.dims()))?;
    ensure(fast.multiplicativity_failure(&alg).is_none(), "F^i F^j not in F^(i+j)")?;
    ensure(ok(abelianization(&alg))?.is_commutative(), "r_0 not commutative")?;
    for d in 0..=3 {
        let rd = ok(quotient_rd(&alg, d))?;
        ensure(nc_filtration(&rd, d + 1).is_zero(), format!("F^{} of r_{d} is nonzero", d + 1))?;
        ensure(ok(quotient_rd(&rd, d))?.dim() == rd.dim(), format!("r_{d} not idempotent"))?;
    }
    Ok(format!("dims {:?}", fast.dims()))
}

fn etale_lifting() -> Outcome {
    let bases = [("Q", Presentation::free(&[], 1)), ("r_1(x,y)", ok(free_rd(&["x", "y"], 1, 3))?)];
    let mut out = Vec::new();
    for (i, (name, base)) in bases.iter().enumerate() {
        let dp = ok(DoublePoint::over(base))?;
        let fam = ok(dp.family(20, 11 + i as u64, 2))?;
        ensure(fam.len() >= 20, format!("{name}: only {} extensions", fam.len()))?;
        ensure(check_formally_etale(&dp.alpha, &fam).verified_over_family, format!("{name}: verdict"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for (k, d) in fam.iter().enumerate() {
            let tot = d.gamma.total();
            let mut x = d.gamma.section(&d.beta.images[dp.etale.z()]);
            let mut y = d.gamma.section(&d.beta.images[dp.etale.u()]);
            for b in d.gamma.kernel_basis() {
                x = tot.add(&x, &tot.scale(b, &int(rng.random_range(-2..=2))));
                y = tot.add(&y, &tot.scale(b, &int(rng.random_range(-2..=2))));
            }
            let l = ok(lift_standard(d, &dp.etale, &x, &y))?;
            ensure(l.relations_hold && l.corrections_in_kernel && l.matches_solver, format!("{name}: extension {k}"))?;
            ensure(l.lift_dimension == 0, format!("{name}: extension {k} has lift dimension {}", l.lift_dimension))?;
        }
        out.push(format!("{name}: {}", fam.len()));
    }
    Ok(format!("extensions {}", out.join(", ")))
}

fn nd_closure() -> Outcome {
    let mut checked = Vec::new();
    for d in 0..=2usize {
        let base = ok(free_rd(&["x", "y"], d, 3))?;
        let fam = ok(ok(DoublePoint::over(&base))?.family(6, 100 + d as u64, 2))?;
        let mut n = 0;
        for diag in &fam {
            let r = nd_closure_check(diag, d);
            if r.beta_surjective && r.base_in_nd {
                ensure(r.total_in_nd, format!("d={d}: F^{} dims {:?}", d + 1, r.filtration_dims))?;
                n += 1;
            }
        }
        ensure(n > 0, format!("d={d}: no diagram met the hypotheses"))?;
        checked.push(n);
    }
    Ok(format!("diagrams per d: {checked:?}"))
}

fn weyl(bound: usize) -> FilteredAlgebra {
    FilteredAlgebra::new(&parse_presentation(&format!("gens x:0, d:1; rel d*x - x*d - 1; bound {bound};")).unwrap())
        .unwrap()
}

fn microlocalization() -> Outcome {
    let fa = weyl(4);
    let g = ok(gr_n(&fa, 1))?;
    let zero = |e: &[ncfourier_core::Q]| e.iter().all(|c| *c == int(0));
    ensure(!zero(g.t()) && zero(&g.t_power(2)), "t is not square-zero and nonzero")?;
    ensure(g.t_is_central(), "t not central")?;
    let q = ok(quotient_by_t(&g))?;
    ensure(q.is_isomorphism(), format!("gr_(1)/(t) vs gr: {q:?}"))?;
    let mut padded = q.gr_dims.clone();
    padded.resize(q.quotient_dims.len().max(padded.len()), 0);
    ensure(q.quotient_dims == padded, format!("dims {:?} vs {:?}", q.quotient_dims, q.gr_dims))?;
    let names = fa.presentation().names();
    let f = parse_poly("d", &names).unwrap();
    let base = ok(localize_deg0(&g, &ok(g.class_of_poly(1, &f))?, 3))?;
    let shifts = ["0", "1", "x", "x + 1", "2*x - 1"];
    let a = g.algebra();
    let mut lifts = Vec::new();
    for s in shifts {
        let s = parse_poly(s, &names).unwrap();
        let lift = a.add(&ok(g.class_of_poly(1, &f))?, &a.mul(g.t(), &ok(g.class_of_poly(0, &s))?));
        ensure(!lifts.contains(&lift), "lifts are not distinct")?;
        let loc = ok(localize_deg0(&g, &lift, 3))?;
        let c = ok(compare_lifts(&loc, &base))?;
        ensure(c.is_isomorphism(), format!("lift {s:?}: {c:?}"))?;
        lifts.push(lift);
    }
    Ok(format!("quotient dims {:?}, {} lifts isomorphic", q.quotient_dims, lifts.len()))
}

fn pbw() -> Outcome {
    let w = ok(pbw_dimension_check(&LieAlgebroidPresentation::weyl(3), 3))?;
    let h = ok(pbw_dimension_check(&LieAlgebroidPresentation::heisenberg(3), 3))?;
    ensure(w.matches() && w.gr_dims == vec![4, 3, 2, 1], format!("Weyl {w:?}"))?;
    ensure(h.matches() && h.gr_dims == vec![1, 2, 3, 4], format!("Heisenberg {h:?}"))?;
    Ok(format!("Weyl {:?}, Heisenberg {:?}", w.gr_dims, h.gr_dims))
}

fn rank_one() -> Outcome {
    let order = 4;
    let p = parse_presentation(&format!("gens t:1; rel t^{order}; bound {order};")).unwrap();
    let a = ok(TruncatedAlgebra::from_presentation(&p))?;
    let t = ok(a.generator("t"))?.clone();
    let free = ok(TAdicModule::regular(&a, &t, order))?;
    let r = ok(rank_one_criterion(&free))?;
    ensure(r.holds && r.generator_bijective && r.generator.is_some(), format!("A: {r:?}"))?;
    let sum = ok(rank_one_criterion(&ok(free.direct_sum(&free))?))?;
    ensure(!sum.holds, format!("A⊕A: {sum:?}"))?;
    let ideal = ok(rank_one_criterion(&ok(TAdicModule::left_ideal(&a, &t, order, std::slice::from_ref(&t)))?))?;
    ensure(!ideal.holds, format!("(t): {ideal:?}"))?;
    Ok(format!("A true (generator {:?}), A⊕A false, (t) false", r.generator.unwrap()))
}

fn cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_ncfourier")).args(args).output().map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), format!("{args:?} exited with {:?}", out.status.code()))?;
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("ncfourier-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let pres = dir.join("weyl.txt");
    std::fs::write(&pres, "algebra weyl;\ngens x:0, d:1;\nrel d*x - x*d - 1;\nbound 4;\n").map_err(|e| e.to_string())?;
    let p = pres.to_str().unwrap();
    let invocations: Vec<Vec<&str>> = vec![
        vec!["alg", "--pres", p],
        vec!["microloc", "grn", "--pres", p, "--n", "1", "--localize", "f=d", "--lift", "d + x"],
        vec!["fm", "--group", "Z4xZ2", "--algebra", "shift=(1,0);twist=(0,1)", "--check", "all", "--samples", "3"],
        vec!["oracle", "assoc", "--group", "Z4", "--seed", "1"],
        vec!["oracle", "filtration", "--pres", p],
    ];
    for args in &invocations {
        ensure(cli(args)? == cli(args)?, format!("{args:?} is not deterministic"))?;
    }
    let printed = cli(&["alg", "--pres", p, "--print"])?;
    let again = dir.join("printed.txt");
    std::fs::write(&again, &printed).map_err(|e| e.to_string())?;
    ensure(cli(&["alg", "--pres", again.to_str().unwrap(), "--print"])? == printed, "CLI print is not a fixpoint")?;

    let corpus = [
        "gens x:0, d:1; rel d*x - x*d - 1; bound 3;",
        "algebra h; gens p, q; rel [q, p] + 1; bound 4;",
        "gens x, y; rel x^2 - 1/2*y; rel (x + y)*(x - y); bound 3;",
        "gens; bound 1;",
        "gens x, y; bound 2;",
    ];
    for text in corpus {
        let ast = ok(parse_presentation(text))?;
        let canonical = print_presentation(&ast);
        let reparsed = ok(parse_presentation(&canonical))?;
        ensure(reparsed == ast, format!("parse∘print changed {text:?}"))?;
        ensure(print_presentation(&reparsed) == canonical, format!("print∘parse changed {canonical:?}"))?;
        for r in &ast.relations {
            let names = ast.names();
            ensure(&ok(parse_poly(&r.fmt_with(&names), &names))? == r, format!("polynomial {r:?}"))?;
        }
    }
    for spec in ["Z4xZ2", "Z1", "Z2xZ2xZ2", "Z12"] {
        let g = ok(parse_group(spec))?;
        ensure(print_group(&g) == spec && ok(parse_group(&print_group(&g)))? == g, format!("group {spec}"))?;
    }
    Ok(format!("{} invocations repeated, {} presentations round-tripped", invocations.len(), corpus.len()))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("Fourier inversion P∘Q = Q∘P = Δ", fourier_inversion),
        ("Φ multiplicative and invertible", transform_multiplicative),
        ("shift/twist exchange", shift_twist_exchange_all),
        ("twisted group algebra law", twisted_group_law),
        ("module functoriality", module_functoriality),
        ("NC filtration oracle", filtration_oracle),
        ("étale lifting", etale_lifting),
        ("F^(d+1)(A') = 0", nd_closure),
        ("microlocalization of the Weyl algebra", microlocalization),
        ("PBW dimensions", pbw),
        ("rank-one criterion", rank_one),
        ("CLI determinism and round trips", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
